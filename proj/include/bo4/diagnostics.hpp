#pragma once

// Numerical checks: commutator residuals, exact integration-by-parts
// identities, symbol inequalities, interpolation and mollifier bounds, and
// conservation monitoring.  Constants in bounds are fitted, never assumed.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bo4/energy.hpp"
#include "bo4/equations.hpp"
#include "bo4/evolve.hpp"
#include "bo4/spectral.hpp"

namespace bo4 {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CheckReport {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string status = "ok";  // "ok", or "blowup" when a run terminated early
  Table details;
  std::vector<std::pair<std::string, std::string>> notes;
};

// ---------------------------------------------------------------------------
// Random band-limited fields: |f̂(ξ)| = amplitude·⟨ξ⟩^{-decay}, uniform phases.
// Mode ξ draws the same random numbers on every grid, so a field on 2N
// points extends the one on N points.

struct RandomFieldSpec {
  double decay = 3.0;
  double amplitude = 1.0;
  bool with_mean = true;
  int max_mode = -1;  // < 0: up to k_max
};

Field random_field(TorusGrid grid, std::uint64_t seed, const RandomFieldSpec& spec = {});

// Decay exponents of the standard corpus.
inline constexpr double kCorpusDecays[] = {2.0, 3.0, 5.0};

// i-th member of the seeded corpus (cycles through kCorpusDecays).
Field corpus_field(TorusGrid grid, std::uint64_t seed, int index);

// ---------------------------------------------------------------------------
// Commutators P_s^{(1..9)}

int commutator_arity(int kind);  // 2 or 3

// Exact spectral evaluation; h is required for kinds 5..7 and rejected
// otherwise (ArityError).
Field commutator_residual(int kind, const Field& f, const Field& g, const std::optional<Field>& h,
                          double s);

// Right-hand side of the matching commutator estimate:
//   bilinear:  ‖f‖_{H^s}‖g‖_{H^{s0}} + ‖f‖_{H^{s0}}‖g‖_{H^s}
//   trilinear: Σ over which factor carries H^s, others H^{s0}
double commutator_bound_rhs(int kind, const Field& f, const Field& g,
                            const std::optional<Field>& h, double s, double s0);

struct CommutatorFitConfig {
  int kind = 1;
  double s = 0.0;
  double s0 = 3.6;
  int n_coarse = 64;
  int n_fine = 256;
  int samples = 4;  // seeds per combination of band limits
  std::uint64_t seed = 0;
};

// Fits C = max ‖P‖ / RHS at n_coarse and n_fine over random fields band
// limited to 7, 15, 31, ... (all combinations across the arguments).  The
// fine corpus contains the coarse one, so the fine constant is the larger;
// passes iff they agree within a factor 2.
CheckReport commutator_bound_check(const CommutatorFitConfig& cfg);

// ---------------------------------------------------------------------------
// Exact identities

enum class IdentityId { HilbertQuartic, SecondOrder, ThirdOrder, HilbertSquare };

std::string to_string(IdentityId id);
IdentityId identity_from_string(const std::string& name);
inline constexpr IdentityId kAllIdentities[] = {IdentityId::HilbertQuartic, IdentityId::SecondOrder,
                                                IdentityId::ThirdOrder, IdentityId::HilbertSquare};

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // Σ Hölder bounds of the individual terms
  double relative() const;
};

inline constexpr double kIdentityTolerance = 1e-9;

// HilbertQuartic takes (f, g, h); the others take (u, w) and s.
IdentityResidual identity_residual(IdentityId id, std::span<const Field> fields, double s = 0.0);
CheckReport check_identity(IdentityId id, std::span<const Field> fields, double s = 0.0);

// ---------------------------------------------------------------------------
// Symbol inequalities

enum class InequalityId { Taylor2, Leibniz, Taylor1 };

std::string to_string(InequalityId id);
InequalityId inequality_from_string(const std::string& name);

struct SymbolValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double term_scale = 0.0;  // size of the largest individual LHS term
};

SymbolValue symbol_value(InequalityId id, double s, long xi, long eta);

struct SymbolScanSpec {
  InequalityId id = InequalityId::Taylor2;
  double s = 2.0;
  int box = 256;         // R: scan |ξ|, |η| <= R
  int fit_radius = 64;   // r
  double slack = 1.05;

  void validate() const;  // r >= 16, R >= 4r
};

CheckReport symbol_scan(const SymbolScanSpec& spec);

// ---------------------------------------------------------------------------
// Gagliardo-Nirenberg

// Frozen from a calibration sweep (seed 2024 corpus at N = 64..256 plus
// single modes, Gaussians and Dirichlet kernels): the largest ratio seen is
// 1, attained by single modes at p = 2 where Hölder is sharp.
inline constexpr double kGnConstant = 1.1;

struct GnRatio {
  double alpha = 0.0;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio() const { return lhs / bound; }
};

// Any l with alpha <= 1 is evaluated; gn_check additionally requires
// l <= s - 1, the range where the inequality is claimed.
GnRatio gn_ratio(const Field& f, int l, double p, double s);
CheckReport gn_check(const Field& f, int l, double p, double s);

// ---------------------------------------------------------------------------
// Bona-Smith mollifier

inline constexpr double kMollifierEtas[] = {1.0 / 8,   1.0 / 16,  1.0 / 32,  1.0 / 64,
                                            1.0 / 128, 1.0 / 256, 1.0 / 512, 1.0 / 1024};

// f̂(ξ) = amplitude·⟨ξ⟩^{-decay} (cosine series), on the given grid.
// The smallest η must still cut inside the grid: k_max >= 2/η_min.
inline constexpr int kMollifierMinKmax = 2048;

Field algebraic_field(TorusGrid grid, double decay, double amplitude = 1.0);

CheckReport mollifier_rate_check(const Field& f, double s, double alpha);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Operator algebra over a random corpus

struct OperatorAlgebraConfig {
  int n = 128;
  int samples = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
};

// H(Hf) = -f + f̂(0); ‖Jf‖ <= 2‖f‖_{H^{-1}}; ‖HJ∂^{k+1}f - ∂^k f‖ <= 2^k‖f‖.
std::vector<CheckReport> operator_algebra_checks(const OperatorAlgebraConfig& cfg);

// ---------------------------------------------------------------------------
// Conservation monitoring

inline constexpr double kMassDriftTolerance = 1e-12;

CheckReport conservation_check(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Finite differences on uniformly spaced samples.

// Fourth-order centered derivative at interior samples 2..n-3; returns
// (times, derivative) pairs.
std::vector<std::pair<double, double>> centered_derivative(std::span<const double> t,
                                                           std::span<const double> q);

}  // namespace bo4
