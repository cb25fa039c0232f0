#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace bo4::detail {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit PlanPair(int n) {
    // Planning with FFTW_ESTIMATE never touches the arrays, so scratch
    // buffers only have to exist during planning.
    std::vector<double> re(n);
    std::vector<std::complex<double>> co(n / 2 + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(co.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_1d(n, re.data(), cp, flags);
    c2r = fftw_plan_dft_c2r_1d(n, cp, re.data(), flags | FFTW_DESTROY_INPUT);
  }
  ~PlanPair() {
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

const PlanPair& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace

void forward_r2c(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  const auto& p = plans_for(n);
  // r2c does not modify its input, but the FFTW signature is non-const.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_c2r(std::span<const std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  const auto& p = plans_for(n);
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace bo4::detail
