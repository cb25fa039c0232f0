#include "bo4/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bo4/errors.hpp"
#include "fft.hpp"

namespace bo4 {

TorusGrid::TorusGrid(int n_points) : n_(n_points) {
  if (n_points % 2 != 0) {
    throw ConfigError("grid size " + std::to_string(n_points) + ": even required");
  }
  if (n_points < kMinPoints || n_points > kMaxPoints) {
    throw ConfigError("grid size " + std::to_string(n_points) + " outside [8, 2^20]");
  }
}

std::vector<double> TorusGrid::nodes() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

TorusGrid make_grid(int n_points) { return TorusGrid(n_points); }

// ---------------------------------------------------------------------------
// Field

Field::Field(TorusGrid grid) : grid_(grid), spec_(grid.n_modes(), Complex{}) {}

Field Field::from_values(TorusGrid grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw ShapeError("from_values: expected " + std::to_string(grid.size()) + " samples, got " +
                     std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("from_values: non-finite sample");
  }
  Field f(grid);
  detail::forward_r2c(values, f.spec_);
  const double inv_n = 1.0 / grid.size();
  for (auto& c : f.spec_) c *= inv_n;
  f.spec_.front().imag(0.0);
  f.spec_.back().imag(0.0);
  return f;
}

Field Field::from_function(TorusGrid grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.node(j));
  return from_values(grid, v);
}

Field Field::from_spectrum(TorusGrid grid, std::vector<Complex> half_spectrum) {
  if (static_cast<int>(half_spectrum.size()) != grid.n_modes()) {
    throw ShapeError("from_spectrum: expected " + std::to_string(grid.n_modes()) + " modes");
  }
  Field f(grid);
  f.spec_ = std::move(half_spectrum);
  f.spec_.front().imag(0.0);
  f.spec_.back().imag(0.0);
  return f;
}

Field Field::constant(TorusGrid grid, double c) {
  Field f(grid);
  f.spec_[0] = c;
  return f;
}

Complex Field::coeff(int xi) const {
  const int half = grid_.nyquist();
  if (xi <= -half || xi > half) {
    throw ParameterError("coeff: wavenumber " + std::to_string(xi) + " outside the grid band");
  }
  return xi >= 0 ? spec_[xi] : std::conj(spec_[-xi]);
}

std::vector<double> Field::values() const {
  std::vector<double> v(grid_.size());
  detail::inverse_c2r(spec_, v);
  return v;
}

std::vector<double> Field::values_on(int m) const {
  const int n = grid_.size();
  if (m % 2 != 0 || m < n) throw ParameterError("values_on: need an even m >= N");
  if (m == n) return values();
  std::vector<Complex> padded(m / 2 + 1, Complex{});
  std::copy(spec_.begin(), spec_.end() - 1, padded.begin());
  // The Nyquist term of the N-grid is the real cosine û(N/2) cos(N x / 2).
  padded[n / 2] = 0.5 * spec_.back();
  std::vector<double> v(m);
  detail::inverse_c2r(padded, v);
  return v;
}

bool Field::is_finite() const {
  return std::all_of(spec_.begin(), spec_.end(),
                     [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

void Field::check_same_grid(const Field& other) const {
  if (!(grid_ == other.grid_)) {
    throw ShapeError("fields live on different grids (" + std::to_string(grid_.size()) + " vs " +
                     std::to_string(other.grid_.size()) + ")");
  }
}

Field& Field::operator+=(const Field& other) {
  check_same_grid(other);
  for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] += other.spec_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_same_grid(other);
  for (std::size_t k = 0; k < spec_.size(); ++k) spec_[k] -= other.spec_[k];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& c : spec_) c *= a;
  return *this;
}

// ---------------------------------------------------------------------------
// Multipliers

double cutoff_psi(double xi) {
  const double t = std::abs(xi) - 1.0;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double abs_pow(double x, double s) {
  if (s == 0.0) return 1.0;
  return std::pow(std::abs(x), s);
}

Multiplier Multiplier::hilbert() { return Multiplier(Factor{Kind::Hilbert}); }

Multiplier Multiplier::deriv(int k) {
  if (k < 0) throw ParameterError("deriv: order must be non-negative");
  return Multiplier(Factor{Kind::Deriv, k});
}

Multiplier Multiplier::frac_deriv(double s) {
  if (!(s >= 0.0)) throw ParameterError("frac_deriv: s must be >= 0");
  return Multiplier(Factor{Kind::FracDeriv, 0, s});
}

Multiplier Multiplier::bessel_weight(double s) {
  if (!std::isfinite(s)) throw ParameterError("bessel_weight: non-finite exponent");
  return Multiplier(Factor{Kind::BesselWeight, 0, s});
}

Multiplier Multiplier::j_op() { return Multiplier(Factor{Kind::JOp}); }

Multiplier Multiplier::mollify(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("mollify: eta must lie in (0,1)");
  return Multiplier(Factor{Kind::Mollify, 0, eta});
}

Multiplier operator*(Multiplier a, const Multiplier& b) {
  a.factors_.insert(a.factors_.end(), b.factors_.begin(), b.factors_.end());
  return a;
}

namespace {

Complex i_pow(int k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Complex factor_symbol(const Multiplier::Factor& f, int xi) {
  const double x = xi;
  switch (f.kind) {
    case Multiplier::Kind::Hilbert:
      return xi > 0 ? Complex{0.0, -1.0} : (xi < 0 ? Complex{0.0, 1.0} : Complex{});
    case Multiplier::Kind::Deriv:
      return i_pow(f.order) * std::pow(x, f.order);
    case Multiplier::Kind::FracDeriv:
      return abs_pow(x, f.param);
    case Multiplier::Kind::BesselWeight:
      return std::pow(1.0 + x * x, 0.5 * f.param);
    case Multiplier::Kind::JOp:
      return xi == 0 ? 0.0 : cutoff_psi(x) / std::abs(x);
    case Multiplier::Kind::Mollify:
      return cutoff_rho(f.param * x);
  }
  return 0.0;
}

}  // namespace

Complex Multiplier::symbol(int xi) const {
  Complex m{1.0, 0.0};
  for (const auto& f : factors_) m *= factor_symbol(f, xi);
  return m;
}

std::string Multiplier::describe() const {
  if (factors_.empty()) return "I";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << '*';
    const auto& f = factors_[i];
    switch (f.kind) {
      case Kind::Hilbert: os << "H"; break;
      case Kind::Deriv: os << "dx^" << f.order; break;
      case Kind::FracDeriv: os << "D^" << f.param; break;
      case Kind::BesselWeight: os << "<D>^" << f.param; break;
      case Kind::JOp: os << "J"; break;
      case Kind::Mollify: os << "L_" << f.param; break;
    }
  }
  return os.str();
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  if (!f.is_finite()) throw NumericError("apply_multiplier: non-finite input (" + m.describe() + ")");
  Field out = f;
  auto spec = out.mutable_spectrum();
  const int last = f.grid().nyquist();
  for (int k = 0; k < last; ++k) spec[k] *= m.symbol(k);
  spec[last] = 0.0;
  spec[0].imag(0.0);
  return out;
}

Field hilbert(const Field& f) { return apply_multiplier(f, Multiplier::hilbert()); }
Field dx(const Field& f, int k) { return apply_multiplier(f, Multiplier::deriv(k)); }
Field frac_d(const Field& f, double s) { return apply_multiplier(f, Multiplier::frac_deriv(s)); }

Field resample(const Field& f, int m) {
  const TorusGrid grid(m);
  std::vector<Complex> spec(m / 2 + 1, Complex(0.0, 0.0));
  const int keep = std::min(f.grid().k_max(), grid.k_max()) + 1;
  std::copy_n(f.spectrum().begin(), keep, spec.begin());
  return Field::from_spectrum(grid, std::move(spec));
}

Field translate(const Field& f, int m) {
  Field out = f;
  auto spec = out.mutable_spectrum();
  const double a = f.grid().node(0) + f.grid().spacing() * m;
  for (int k = 0; k < static_cast<int>(spec.size()); ++k) {
    spec[k] *= std::polar(1.0, -a * k);
  }
  // e^{-iaN/2} is ±1 for grid shifts, so the Nyquist coefficient stays real.
  spec.back().imag(0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Dealiased products

PaddedGrid::PaddedGrid(TorusGrid grid) : base_(grid), m_(kPadFactor * grid.size()) {}

std::vector<double> PaddedGrid::lift(const Field& f) const {
  if (!(f.grid() == base_)) throw ShapeError("PaddedGrid::lift: grid mismatch");
  return f.values_on(m_);
}

Field PaddedGrid::project(std::span<const double> values) const {
  if (static_cast<int>(values.size()) != m_) throw ShapeError("PaddedGrid::project: size mismatch");
  std::vector<Complex> full(m_ / 2 + 1);
  detail::forward_r2c(values, full);
  std::vector<Complex> half(base_.n_modes(), Complex{});
  const double inv_m = 1.0 / m_;
  for (int k = 0; k <= base_.k_max(); ++k) half[k] = full[k] * inv_m;
  return Field::from_spectrum(base_, std::move(half));
}

Field dealiased_product(std::span<const Field> fs) {
  if (fs.size() < 2 || fs.size() > 4) {
    throw ArityError("dealiased_product: expected 2..4 factors, got " + std::to_string(fs.size()));
  }
  const PaddedGrid pad(fs.front().grid());
  std::vector<double> acc = pad.lift(fs.front());
  for (std::size_t i = 1; i < fs.size(); ++i) {
    const auto v = pad.lift(fs[i]);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= v[j];
  }
  return pad.project(acc);
}

Field dealiased_product(std::initializer_list<Field> fs) {
  return dealiased_product(std::span<const Field>(fs.begin(), fs.size()));
}

Field product(const Field& a, const Field& b) { return dealiased_product({a, b}); }

// ---------------------------------------------------------------------------
// Integrals and norms

double inner(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw ShapeError("inner: grid mismatch");
  const auto a = f.spectrum();
  const auto b = g.spectrum();
  const int last = f.grid().nyquist();
  double acc = a[0].real() * b[0].real() + a[last].real() * b[last].real();
  for (int k = 1; k < last; ++k) acc += 2.0 * (a[k] * std::conj(b[k])).real();
  return kTwoPi * acc;
}

double integral(std::initializer_list<Field> fs) {
  const std::vector<Field> v(fs);
  if (v.size() < 2 || v.size() > 5) throw ArityError("integral: expected 2..5 factors");
  if (v.size() == 2) return inner(v[0], v[1]);
  const Field head = dealiased_product(std::span<const Field>(v.data(), v.size() - 1));
  return inner(head, v.back());
}

namespace {

double weighted_sum(const Field& f, const std::function<double(int)>& w) {
  const auto a = f.spectrum();
  const int last = f.grid().nyquist();
  double acc = w(0) * std::norm(a[0]) + w(last) * std::norm(a[last]);
  for (int k = 1; k < last; ++k) acc += 2.0 * w(k) * std::norm(a[k]);
  return kTwoPi * acc;
}

}  // namespace

double parseval_sum(const Field& f) {
  return weighted_sum(f, [](int) { return 1.0; });
}

double norm_l2(const Field& f) { return std::sqrt(parseval_sum(f)); }

double norm_hs(const Field& f, double s) {
  if (!(s >= 0.0)) throw ParameterError("norm_hs: s must be >= 0");
  const double d = weighted_sum(f, [s](int k) { return abs_pow(k, 2.0 * s); });
  return std::sqrt(0.5 * (parseval_sum(f) + d));
}

double norm_bessel(const Field& f, double s) {
  return std::sqrt(weighted_sum(f, [s](int k) { return std::pow(1.0 + double(k) * k, s); }));
}

double norm_hneg1(const Field& f) { return norm_bessel(f, -1.0); }

double norm_lp(const Field& f, double p, int oversample) {
  if (!(p >= 1.0)) throw ParameterError("norm_lp: p must be >= 1");
  const int m = f.size() * std::max(oversample, 1);
  const auto v = f.values_on(m);
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
  }
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), p);
  return std::pow(acc * kTwoPi / m, 1.0 / p);
}

}  // namespace bo4
