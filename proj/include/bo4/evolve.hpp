#pragma once

// Time integration of ∂t u = ∂x K(u) - ε∂x⁴u.  The linear part
// ∂x H∂x³ - ε∂x⁴ is diagonal in Fourier space and is propagated exactly;
// ∂x(F2 + F3 + F4) is integrated by ETDRK4 (default) or by an
// integrating-factor RK4 scheme.

#include <optional>
#include <string>
#include <vector>

#include "bo4/energy.hpp"
#include "bo4/equations.hpp"
#include "bo4/spectral.hpp"

namespace bo4 {

enum class Scheme { ETDRK4, IFRK4 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct StepperConfig {
  double dt = 0.0;  // <= 0 selects auto_dt
  double t_end = 1.0;
  int sample_every = 1;
  Scheme scheme = Scheme::ETDRK4;
  double cfl = 0.5;
};

// -i sgn(ξ) ξ⁴ - time_direction·ε ξ⁴
Complex linear_symbol(int xi, double epsilon, int time_direction);

// φ_k(z) = Σ_{m>=0} z^m / (m+k)!, k = 0..3, with a series branch near 0.
Complex phi(int k, Complex z);

// Step size cfl / max(k_max, r) with r = ‖∂x(F2+F3+F4)(u)‖_{H³} / ‖u‖_{H³},
// the relative rate at which the explicit part moves u in H³.  The linear
// part is exact and imposes no limit.
double auto_dt(const Field& u, const SolverParams& p, double cfl);

// Precomputed one-step map for fixed (grid, params, dt, scheme).
class Stepper {
 public:
  Stepper(TorusGrid grid, SolverParams params, double dt, Scheme scheme);

  Field step(const Field& u) const;

  double dt() const { return dt_; }
  const SolverParams& params() const { return params_; }

 private:
  Field scale(const std::vector<Complex>& c, const Field& f) const;
  Field combine(std::initializer_list<std::pair<const std::vector<Complex>*, const Field*>> terms) const;
  Field step_etdrk4(const Field& u) const;
  Field step_ifrk4(const Field& u) const;

  TorusGrid grid_;
  SolverParams params_;
  double dt_;
  Scheme scheme_;
  // Per-mode coefficients, k = 0..N/2.
  std::vector<Complex> e_, e_half_, q_, f1_, f2_, f3_;
};

// One step of size cfg.dt (auto_dt when cfg.dt <= 0).
Field step(const Field& u, const SolverParams& p, const StepperConfig& cfg);

struct DiagnosticsConfig {
  std::vector<double> hs_orders;  // Sobolev norms recorded at each sample
  std::optional<EnergyParams> energy;  // records E_s(u,0) and E(u,0) when set
};

struct SampleDiagnostics {
  double mass = 0.0;  // û(0)
  double l2 = 0.0;
  std::vector<double> hs;
  double energy_hs = 0.0;
  double energy_l2 = 0.0;
};

SampleDiagnostics measure(const Field& u, const SolverParams& p, const DiagnosticsConfig& dc);

enum class RunStatus { Completed, BlowUp };

struct Trajectory {
  // Elapsed time, increasing; physical time is time_direction · elapsed.
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<SampleDiagnostics> diagnostics;
  RunStatus status = RunStatus::Completed;
  double blowup_time = 0.0;
  double dt = 0.0;
  long steps = 0;

  bool completed() const { return status == RunStatus::Completed; }
};

// Blow-up: non-finite state, or ‖u‖_{H³} above this multiple of its
// initial value.
inline constexpr double kBlowupFactor = 1e6;

Trajectory evolve(const Field& u0, const SolverParams& p, const StepperConfig& cfg,
                  const DiagnosticsConfig& dc = {});

}  // namespace bo4
