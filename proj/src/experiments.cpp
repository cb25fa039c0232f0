#include "bo4/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bo4/errors.hpp"
#include "bo4/format.hpp"

namespace bo4 {
namespace {

double max_abs_ratio(std::span<const double> t, std::span<const double> q,
                     std::span<const double> denom) {
  double m = 0.0;
  const auto d = centered_derivative(t, q);
  for (std::size_t i = 0; i < d.size(); ++i) m = std::max(m, std::abs(d[i].second) / denom[i + 2]);
  return m;
}

template <class T>
std::vector<T> every_other(const std::vector<T>& v) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void DerivativeLossParams::validate() const {
  if (k0_list.size() < 2) throw ParameterError("loss: need at least two k0 values");
  const TorusGrid grid(n);
  for (int k0 : k0_list) {
    if (k0 < 2) throw ParameterError("loss: k0 must be >= 2");
    // the packet and its square must fit below k_max
    if (2 * (k0 + 1) > grid.k_max()) {
      throw ParameterError("loss: k0 = " + std::to_string(k0) + " not resolved at n = " + std::to_string(n));
    }
  }
  if (!(s >= 1.0)) throw ParameterError("loss: s must be >= 1");
  if (!(s0 > 3.5)) throw ParameterError("loss: s0 must exceed 3.5");
  if (!(Cs > 0.0)) throw ParameterError("loss: Cs must be positive");
  if (periods < 1 || steps_per_period < 8) throw ParameterError("loss: need periods >= 1, steps_per_period >= 8");
  SolverParams sp{coeffs, epsilon, 1};
  sp.validate();
}

double beat_period(int k0) {
  auto omega = [](double k) { return k * k * k * k; };
  return 2.0 * std::numbers::pi / std::abs(omega(k0 + 1) - omega(k0) - omega(1));
}

Field loss_initial_data(TorusGrid grid, int k0, const DerivativeLossParams& p) {
  const double a = p.amplitude * std::pow(double(k0), -p.s0);
  const double d = p.seed_amplitude;
  return Field::from_function(grid, [=](double x) {
    return a * (std::cos(k0 * x) + std::cos((k0 + 1) * x)) + d * std::cos(x);
  });
}

namespace {

LossRates loss_rates_at(int k0, const DerivativeLossParams& p, int steps_per_period) {
  const TorusGrid grid(p.n);
  const double period = beat_period(k0);
  StepperConfig cfg;
  cfg.t_end = p.horizon > 0.0 ? p.horizon : p.periods * period;
  cfg.dt = period / steps_per_period;
  const SolverParams sp{p.coeffs, p.epsilon, 1};
  const Trajectory traj = evolve(loss_initial_data(grid, k0, p), sp, cfg);

  LossRates r;
  r.completed = traj.completed();
  r.steps_per_period = steps_per_period;
  const EnergyParams ep{p.s, p.s0, p.Cs, 1.0};
  const Field zero(grid);
  std::vector<double> ds2, hs2, es;
  for (const Field& u : traj.snapshots) {
    const double d = norm_l2(frac_d(u, p.s));
    ds2.push_back(d * d);
    hs2.push_back(std::pow(norm_hs(u, p.s), 2));
    es.push_back(energy_hs(u, zero, ep, p.coeffs));
  }
  r.naive = max_abs_ratio(traj.times, ds2, hs2);
  r.corrected = max_abs_ratio(traj.times, es, es);
  r.naive_coarse = max_abs_ratio(every_other(traj.times), every_other(ds2), every_other(hs2));
  r.corrected_coarse = max_abs_ratio(every_other(traj.times), every_other(es), every_other(es));
  return r;
}

}  // namespace

double LossRates::fd_change() const {
  // rates at roundoff level (linear flow) count as converged
  auto rel = [](double fine, double coarse) {
    return std::abs(coarse - fine) / std::max(std::abs(fine), 1e-10);
  };
  return std::max(rel(naive, naive_coarse), rel(corrected, corrected_coarse));
}

LossRates loss_rates(int k0, const DerivativeLossParams& p) {
  int spp = p.steps_per_period;
  LossRates r = loss_rates_at(k0, p, spp);
  for (int i = 0; i < kLossMaxRefinements && r.completed && !(r.fd_change() <= kLossFdTolerance); ++i) {
    spp *= 2;
    r = loss_rates_at(k0, p, spp);
  }
  return r;
}

CheckReport derivative_loss_experiment(const DerivativeLossParams& p) {
  p.validate();
  CheckReport rep;
  rep.name = "derivative loss";
  rep.details.columns = {"k0", "rate_naive", "rate_corrected", "fd_change", "steps_per_period"};
  std::vector<double> ks, naive, corr;
  double fd_change = 0.0;
  for (int k0 : p.k0_list) {
    const LossRates r = loss_rates(k0, p);
    if (!r.completed) {
      rep.status = "blowup";
      rep.notes.push_back({"blowup_k0", std::to_string(k0)});
      rep.passed = false;
      return rep;
    }
    fd_change = std::max(fd_change, r.fd_change());
    rep.details.rows.push_back({double(k0), r.naive, r.corrected, r.fd_change(), double(r.steps_per_period)});
    ks.push_back(k0);
    naive.push_back(r.naive);
    corr.push_back(r.corrected);
  }
  const double sn = loglog_slope(ks, naive), sc = loglog_slope(ks, corr);
  rep.measured = sn - sc;
  rep.bound = 1.0;
  rep.passed = std::isfinite(rep.measured) && rep.measured >= rep.bound;
  rep.notes = {{"slope_naive", fmt_num(sn)},
               {"slope_corrected", fmt_num(sc)},
               {"max_fd_change_on_halving", fmt_num(fd_change)}};
  return rep;
}

// ---------------------------------------------------------------------------

void TwoSolutionParams::validate() const {
  if (!(s_prime >= 1.0)) throw ParameterError("two-solution: s' must be >= 1");
  if (!(s0 > 3.5)) throw ParameterError("two-solution: s0 must exceed 3.5");
  for (double e : {epsilon1, epsilon2}) {
    if (!(e > 0.0 && e < 1.0)) throw ParameterError("two-solution: epsilon must lie in (0,1)");
  }
  if (!(horizon > 0.0) || !(dt > 0.0)) throw ParameterError("two-solution: horizon and dt must be positive");
  if (sample_every < 1) throw ParameterError("two-solution: sample_every must be >= 1");
}

double two_solution_rhs(const Field& u1, const Field& u2, const TwoSolutionParams& p) {
  const Field w = u1 - u2;
  const double sp = p.s_prime, s0 = p.s0;
  auto sq = [](double x) { return x * x; };
  const double i = 1.0 + norm_hs(u1, s0) + norm_hs(u2, s0);
  const double bracket = sq(norm_hs(w, sp)) + sq(norm_hs(w, s0 - 3.0)) * sq(norm_hs(u2, sp + 3.0)) +
                         sq(norm_hs(w, s0)) * (sq(norm_hs(u1, sp)) + sq(norm_hs(u2, sp)));
  const double e = std::max(p.epsilon1, p.epsilon2);
  return std::pow(i, 2.0 * (sp + 2.0)) * bracket + e * e * sq(norm_hs(u2, sp + 4.0));
}

TwoSolutionRun two_solution_run(const Field& u0_a, const Field& u0_b, const TwoSolutionParams& p,
                                int n, double dt) {
  p.validate();
  const Field a = resample(u0_a, n), b = resample(u0_b, n);
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_end = p.horizon;
  cfg.sample_every = p.sample_every;
  const Trajectory ta = evolve(a, SolverParams{p.coeffs, p.epsilon1, 1}, cfg);
  const Trajectory tb = evolve(b, SolverParams{p.coeffs, p.epsilon2, 1}, cfg);

  TwoSolutionRun run;
  run.completed = ta.completed() && tb.completed();
  run.Cs = p.Cs > 0.0 ? p.Cs : choose_big_constant(a, b, EnergyKind::Hs, p.s_prime, p.coeffs);
  const EnergyParams ep{p.s_prime, p.s0, run.Cs, 1.0};
  const std::size_t m = std::min(ta.snapshots.size(), tb.snapshots.size());
  for (std::size_t i = 0; i < m; ++i) {
    run.times.push_back(ta.times[i]);
    run.energy.push_back(energy_hs(ta.snapshots[i], tb.snapshots[i], ep, p.coeffs));
  }
  const auto d = centered_derivative(run.times, run.energy);
  run.c_star = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double rhs = two_solution_rhs(ta.snapshots[i + 2], tb.snapshots[i + 2], p);
    run.lhs.push_back(d[i].second);
    run.rhs.push_back(rhs);
    if (rhs > 0.0) run.c_star = std::max(run.c_star, d[i].second / rhs);
  }
  return run;
}

CheckReport two_solution_experiment(const Field& u0_a, const Field& u0_b,
                                    const TwoSolutionParams& p) {
  p.validate();
  CheckReport rep;
  rep.name = "two-solution energy";
  rep.details.columns = {"n", "t", "energy", "dEdt", "rhs"};
  const int n = u0_a.size();
  const TwoSolutionRun coarse = two_solution_run(u0_a, u0_b, p, n, p.dt);
  const TwoSolutionRun fine = two_solution_run(u0_a, u0_b, p, 2 * n, p.dt / 2.0);
  for (const auto* run : {&coarse, &fine}) {
    const double nn = run == &coarse ? n : 2 * n;
    for (std::size_t i = 0; i < run->lhs.size(); ++i) {
      rep.details.rows.push_back({nn, run->times[i + 2], run->energy[i + 2], run->lhs[i], run->rhs[i]});
    }
  }
  rep.notes = {{"C_star_coarse", fmt_num(coarse.c_star)},
               {"C_star_fine", fmt_num(fine.c_star)},
               {"Cs", fmt_num(coarse.Cs)}};
  if (!coarse.completed || !fine.completed) {
    rep.status = "blowup";
    rep.passed = false;
    return rep;
  }
  rep.bound = 2.0;
  if (coarse.c_star == 0.0 && fine.c_star == 0.0) {
    // E never increased
    rep.measured = 1.0;
    rep.passed = true;
    return rep;
  }
  const double g = fine.c_star / coarse.c_star;
  rep.measured = std::max(g, 1.0 / g);
  rep.passed = std::isfinite(rep.measured) && rep.measured <= rep.bound;
  return rep;
}

Field two_solution_data(TorusGrid grid, std::uint64_t seed, double norm, double s_prime) {
  RandomFieldSpec spec;
  spec.decay = 5.0;
  spec.max_mode = 8;
  Field f = random_field(grid, seed, spec);
  return (norm / norm_hs(f, s_prime)) * f;
}

// ---------------------------------------------------------------------------

void BonaSmithParams::validate() const {
  if (!(s >= 1.0)) throw ParameterError("bona-smith: s must be >= 1");
  if (!(s0 > 3.5)) throw ParameterError("bona-smith: s0 must exceed 3.5");
  if (eps_list.size() < 3) throw ParameterError("bona-smith: eps_list needs at least 3 values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) throw ParameterError("bona-smith: eps must lie in (0,1)");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ParameterError("bona-smith: eps_list must decrease");
  }
  if (!(horizon > 0.0)) throw ParameterError("bona-smith: horizon must be positive");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= s)) throw ParameterError("bona-smith: alpha must lie in (0, s]");
  }
}

Field bona_smith_data(TorusGrid grid, double s, double delta, double norm) {
  if (!(delta > 0.0)) throw ParameterError("bona-smith: delta must be positive");
  const Field f = algebraic_field(grid, s + 0.5 + delta);
  return (norm / norm_hs(f, s)) * f;
}

CheckReport bona_smith_convergence(const Field& u0, const BonaSmithParams& p) {
  p.validate();
  const std::vector<double> alphas = p.alphas.empty() ? std::vector<double>{p.s} : p.alphas;
  const std::size_t m = p.eps_list.size();

  std::vector<Field> data;
  double dt = p.dt;
  for (double e : p.eps_list) {
    data.push_back(apply(u0, Multiplier::mollify(std::pow(e, 1.0 / (2.0 * p.s)))));
    if (p.dt <= 0.0) {
      const double d = auto_dt(data.back(), SolverParams{p.coeffs, e, 1}, 0.5);
      dt = dt > 0.0 ? std::min(dt, d) : d;
    }
  }
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_end = p.horizon;
  cfg.sample_every = p.sample_every;

  CheckReport rep;
  rep.name = "bona-smith convergence";
  std::vector<Trajectory> runs;
  for (std::size_t i = 0; i < m; ++i) {
    runs.push_back(evolve(data[i], SolverParams{p.coeffs, p.eps_list[i], 1}, cfg));
    if (!runs.back().completed()) {
      rep.status = "blowup";
      rep.notes.push_back({"blowup_eps", fmt_num(p.eps_list[i])});
      return rep;
    }
  }

  // sup_t distance to the reference (smallest ε) in L² and each H^{s-α}
  const Trajectory& ref = runs.back();
  rep.details.columns = {"eps", "eta", "err_l2"};
  for (double a : alphas) rep.details.columns.push_back("err_h" + fmt_num(p.s - a));
  std::vector<double> eps(p.eps_list.begin(), p.eps_list.end() - 1);
  std::vector<double> err_l2(m - 1);
  std::vector<std::vector<double>> err_a(alphas.size(), std::vector<double>(m - 1));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t k = 0; k < ref.snapshots.size(); ++k) {
      const Field d = runs[i].snapshots[k] - ref.snapshots[k];
      err_l2[i] = std::max(err_l2[i], norm_l2(d));
      for (std::size_t j = 0; j < alphas.size(); ++j) {
        err_a[j][i] = std::max(err_a[j][i], norm_hs(d, p.s - alphas[j]));
      }
    }
    std::vector<double> row{eps[i], std::pow(eps[i], 1.0 / (2.0 * p.s)), err_l2[i]};
    for (const auto& e : err_a) row.push_back(e[i]);
    rep.details.rows.push_back(row);
  }

  const double order_l2 = loglog_slope(eps, err_l2);
  rep.measured = order_l2;
  rep.bound = p.l2_order_min;
  rep.passed = std::isfinite(order_l2) && order_l2 >= p.l2_order_min;
  rep.notes = {{"order_l2", fmt_num(order_l2)}, {"dt", fmt_num(ref.dt)}};
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    const double order = loglog_slope(eps, err_a[j]);
    const double expect = alphas[j] / (2.0 * p.s);
    const bool ok = std::isfinite(order) && std::abs(order - expect) <= p.alpha_tolerance;
    rep.passed = rep.passed && ok;
    rep.notes.push_back({"order_h" + fmt_num(p.s - alphas[j]), fmt_num(order)});
    rep.notes.push_back({"expected_h" + fmt_num(p.s - alphas[j]), fmt_num(expect)});
  }
  return rep;
}

}  // namespace bo4
