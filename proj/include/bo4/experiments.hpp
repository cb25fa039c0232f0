#pragma once

// End-to-end numerical experiments on the evolution: loss of derivatives in
// the plain H^s energy, the two-solution energy inequality, and ε → 0
// convergence of mollified viscous solutions.

#include <cstdint>
#include <vector>

#include "bo4/diagnostics.hpp"

namespace bo4 {

// ---------------------------------------------------------------------------
// Derivative loss

struct DerivativeLossParams {
  std::vector<int> k0_list{4, 8, 16, 32};
  double s = 4.0;
  double s0 = 3.6;
  CoefficientSet coeffs = CoefficientSet::integrable();
  double epsilon = 0.0;
  int n = 256;
  double amplitude = 1.0;       // packet amplitude is amplitude·k0^{-s0}
  double seed_amplitude = 0.01; // low-mode seed δ cos x
  double Cs = 1.0;
  // horizon > 0 fixes the run length; otherwise each k0 runs for
  // `periods` periods of its beat.
  double horizon = 0.0;
  int periods = 4;
  int steps_per_period = 128;

  void validate() const;
};

// u0 = A(cos k0x + cos (k0+1)x) + δ cos x.  The two-mode packet beats at
// frequency 1, which is what couples the high modes to the seed.
Field loss_initial_data(TorusGrid grid, int k0, const DerivativeLossParams& p);

// Beat period 2π / |ω(k0+1) - ω(k0) - ω(1)|, ω(ξ) = ξ⁴ sgn ξ.
double beat_period(int k0);

struct LossRates {
  double naive = 0.0;      // max_t |d/dt ‖D^s u‖²| / ‖u‖²_{H^s}
  double corrected = 0.0;  // max_t |d/dt E_s| / E_s
  // Same maxima from every second sample; the relative change estimates
  // the finite-difference error.
  double naive_coarse = 0.0;
  double corrected_coarse = 0.0;
  int steps_per_period = 0;
  bool completed = true;

  double fd_change() const;
};

inline constexpr double kLossFdTolerance = 0.01;
inline constexpr int kLossMaxRefinements = 6;

// Steps (one sample each) per beat period start at p.steps_per_period and
// double until halving the sampling moves both rates by at most 1%.
LossRates loss_rates(int k0, const DerivativeLossParams& p);

// Fits log rate against log k0; passes iff slope(naive) - slope(corrected) >= 1.
CheckReport derivative_loss_experiment(const DerivativeLossParams& p);

// ---------------------------------------------------------------------------
// Two solutions

struct TwoSolutionParams {
  double s_prime = 4.0;
  double s0 = 3.6;
  CoefficientSet coeffs = CoefficientSet::integrable();
  double epsilon1 = 1e-3;
  double epsilon2 = 1e-3;
  double horizon = 0.05;
  double dt = 1e-4;
  int sample_every = 1;
  double Cs = 0.0;  // <= 0: choose_big_constant on the initial pair

  void validate() const;  // s' >= 1, s0 > 7/2, ε in (0,1)
};

// RHS of the two-solution inequality with C = 1:
//   I^{2(s'+2)} {‖w‖²_{H^{s'}} + ‖w‖²_{H^{s0-3}}‖u2‖²_{H^{s'+3}}
//               + ‖w‖²_{H^{s0}}(‖u1‖²_{H^{s'}} + ‖u2‖²_{H^{s'}})}
//   + max(ε1², ε2²)‖u2‖²_{H^{s'+4}},   I = 1 + ‖u1‖_{H^{s0}} + ‖u2‖_{H^{s0}}
double two_solution_rhs(const Field& u1, const Field& u2, const TwoSolutionParams& p);

struct TwoSolutionRun {
  std::vector<double> times;
  std::vector<double> energy;  // E_{s'}(u1, u2)
  std::vector<double> lhs;     // d/dt E at interior samples
  std::vector<double> rhs;
  double c_star = 0.0;         // max_t lhs / rhs
  double Cs = 0.0;
  bool completed = true;
};

// Co-evolves (u0_a, u0_b) resampled to n points with step dt.
TwoSolutionRun two_solution_run(const Field& u0_a, const Field& u0_b, const TwoSolutionParams& p,
                                int n, double dt);

// C* at (N, dt) and at (2N, dt/2), N the grid of u0_a; passes iff both are
// finite and agree within a factor 2.
CheckReport two_solution_experiment(const Field& u0_a, const Field& u0_b,
                                    const TwoSolutionParams& p);

// Seeded smooth data with ‖u0‖_{H^{s'}} = norm and the perturbation
// u0 + amp·cos x.
Field two_solution_data(TorusGrid grid, std::uint64_t seed, double norm, double s_prime);

// ---------------------------------------------------------------------------
// Bona-Smith convergence

struct BonaSmithParams {
  double s = 4.0;
  double s0 = 3.6;
  CoefficientSet coeffs = CoefficientSet::integrable();
  std::vector<double> eps_list;  // decreasing, each in (0,1)
  double horizon = 0.05;
  double dt = 0.0;  // <= 0: auto, shared by all runs
  int sample_every = 1;
  std::vector<double> alphas;  // H^{s-α} orders checked against α/(2s); empty: {s}
  double l2_order_min = 0.45;
  double alpha_tolerance = 0.15;

  void validate() const;
};

// Spectrum ⟨ξ⟩^{-s-1/2-δ}, scaled to ‖u0‖_{H^s} = norm: just inside H^s.
Field bona_smith_data(TorusGrid grid, double s, double delta, double norm);

// For each ε evolves L_η u0, η = ε^{1/(2s)}, with viscosity ε; errors are
// sup_t distances to the smallest-ε run.  Passes iff the L² order is at
// least l2_order_min and every H^{s-α} order is within alpha_tolerance of
// α/(2s).
CheckReport bona_smith_convergence(const Field& u0, const BonaSmithParams& p);

}  // namespace bo4
