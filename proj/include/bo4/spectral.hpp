#pragma once

// Torus grid, Fourier-space fields, Fourier multipliers, dealiased products
// and Sobolev norms on T = R / 2πZ.
//
// Fourier convention: û(ξ) = (2π)^{-1} ∫ u(x) e^{-ixξ} dx, hence
// ‖u‖² = 2π Σ_ξ |û(ξ)|².  A field on an N-point grid carries the modes
// ξ = -N/2+1 .. N/2; only ξ >= 0 is stored (real fields are conjugate
// symmetric).

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bo4 {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class TorusGrid {
 public:
  static constexpr int kMinPoints = 8;
  static constexpr int kMaxPoints = 1 << 20;

  // Throws ConfigError unless n_points is even and within [8, 2^20].
  explicit TorusGrid(int n_points);

  int size() const { return n_; }
  // Largest retained wavenumber once products are truncated.
  int k_max() const { return n_ / 2 - 1; }
  int nyquist() const { return n_ / 2; }
  // Number of stored (non-negative) modes, 0..N/2.
  int n_modes() const { return n_ / 2 + 1; }
  double length() const { return kTwoPi; }
  double spacing() const { return kTwoPi / n_; }
  double node(int j) const { return kTwoPi * j / n_; }
  std::vector<double> nodes() const;

  bool operator==(const TorusGrid&) const = default;

 private:
  int n_;
};

TorusGrid make_grid(int n_points);

class Field {
 public:
  explicit Field(TorusGrid grid);

  static Field from_values(TorusGrid grid, std::span<const double> values);
  static Field from_function(TorusGrid grid, const std::function<double(double)>& f);
  // half_spectrum[k] = û(k) for k = 0..N/2.  The imaginary parts of the mean
  // and Nyquist coefficients are discarded.
  static Field from_spectrum(TorusGrid grid, std::vector<Complex> half_spectrum);
  static Field constant(TorusGrid grid, double c);

  const TorusGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }

  std::span<const Complex> spectrum() const { return spec_; }
  std::span<Complex> mutable_spectrum() { return spec_; }
  // û(ξ) for ξ in -N/2+1 .. N/2.
  Complex coeff(int xi) const;
  double mean_mode() const { return spec_[0].real(); }

  std::vector<double> values() const;
  // Samples of the trigonometric interpolant on an m-point grid (m even).
  std::vector<double> values_on(int m) const;

  bool is_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double a, Field f) { return f *= a; }
  friend Field operator*(Field f, double a) { return f *= a; }
  friend Field operator-(Field f) { return f *= -1.0; }

 private:
  void check_same_grid(const Field& other) const;

  TorusGrid grid_;
  std::vector<Complex> spec_;
};

// Smooth cutoff: 0 on |ξ| <= 1, 1 on |ξ| >= 2, quintic smoothstep between.
double cutoff_psi(double xi);
// Bona-Smith profile ρ = 1 - ψ.
inline double cutoff_rho(double x) { return 1.0 - cutoff_psi(x); }

// |x|^s with the convention |x|^0 = 1 (so D^0 is the identity).
double abs_pow(double x, double s);

// A Fourier multiplier, possibly a composition of the elementary kinds.
// Every symbol satisfies m(-ξ) = conj(m(ξ)), so real fields stay real.
class Multiplier {
 public:
  enum class Kind { Hilbert, Deriv, FracDeriv, BesselWeight, JOp, Mollify };

  struct Factor {
    Kind kind;
    int order = 0;       // Deriv
    double param = 0.0;  // FracDeriv / BesselWeight exponent, Mollify eta
  };

  Multiplier() = default;  // identity

  static Multiplier hilbert();
  static Multiplier deriv(int k);
  static Multiplier frac_deriv(double s);
  static Multiplier bessel_weight(double s);
  static Multiplier j_op();
  static Multiplier mollify(double eta);

  Complex symbol(int xi) const;
  const std::vector<Factor>& factors() const { return factors_; }
  std::string describe() const;

  // Composition; multipliers commute so order is irrelevant.
  friend Multiplier operator*(Multiplier a, const Multiplier& b);

 private:
  explicit Multiplier(Factor f) : factors_{f} {}
  std::vector<Factor> factors_;
};

// Pointwise multiplication of the spectrum; the Nyquist mode is zeroed.
Field apply_multiplier(const Field& f, const Multiplier& m);
inline Field apply(const Field& f, const Multiplier& m) { return apply_multiplier(f, m); }

// Shorthands for the operators used throughout.
Field hilbert(const Field& f);
Field dx(const Field& f, int k = 1);
Field frac_d(const Field& f, double s);

// The same trigonometric polynomial on an m-point grid: zero-padded when
// m > N, truncated to the new k_max when m < N.
Field resample(const Field& f, int m);

// Shift by m grid points: result(x) = f(x - 2πm/N).
Field translate(const Field& f, int m);

// Evaluation space for polynomial products: the 3N-point grid.  Lifting
// zero-pads the spectrum; projecting truncates back to |ξ| <= k_max.
class PaddedGrid {
 public:
  static constexpr int kPadFactor = 3;

  explicit PaddedGrid(TorusGrid grid);

  const TorusGrid& base() const { return base_; }
  int size() const { return m_; }

  std::vector<double> lift(const Field& f) const;
  Field project(std::span<const double> values) const;

 private:
  TorusGrid base_;
  int m_;
};

// Product of 2..4 fields on the 3x padded grid, truncated to |ξ| <= k_max.
Field dealiased_product(std::span<const Field> fs);
Field dealiased_product(std::initializer_list<Field> fs);
Field product(const Field& a, const Field& b);

// ∫_T f g dx (exact for the band-limited fields held here).
double inner(const Field& f, const Field& g);
// ∫_T f1 f2 ... fn dx for 2..5 factors, exact for band-limited data.
double integral(std::initializer_list<Field> fs);

double norm_l2(const Field& f);
// 2^{-1/2} (‖f‖² + ‖D^s f‖²)^{1/2}
double norm_hs(const Field& f, double s);
// (2π Σ (1+ξ²)^{-1} |f̂(ξ)|²)^{1/2}
double norm_hneg1(const Field& f);
// (2π Σ (1+ξ²)^{s} |f̂(ξ)|²)^{1/2}
double norm_bessel(const Field& f, double s);
// ‖f‖_p for p in [1, ∞] (p = infinity allowed), evaluated on an
// oversampled grid.
double norm_lp(const Field& f, double p, int oversample = 8);
// 2π Σ_ξ |f̂(ξ)|², computed directly from the coefficients.
double parseval_sum(const Field& f);

}  // namespace bo4
