#pragma once

// Thin FFTW wrapper.  Plans are created once per length under a mutex and
// executed through the new-array interface, which FFTW documents as
// thread-safe.

#include <complex>
#include <span>

namespace bo4::detail {

// out[k] = Σ_j in[j] e^{-2πijk/n}, k = 0..n/2 (unnormalized).
void forward_r2c(std::span<const double> in, std::span<std::complex<double>> out);
// out[j] = Σ_k in[k] e^{2πijk/n} with Hermitian completion (unnormalized).
// `in` has n/2+1 entries and is not modified.
void inverse_c2r(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace bo4::detail
