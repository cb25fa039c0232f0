#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>

#include "bo4/cli_io.hpp"
#include "bo4/errors.hpp"
#include "bo4/experiments.hpp"
#include "bo4/format.hpp"

namespace bo4 {

namespace {

using Job = std::function<std::vector<CheckReport>()>;

// Runs jobs on up to worker_count() threads; results keep job order.
std::vector<CheckReport> run_jobs(const std::vector<Job>& jobs) {
  std::vector<std::vector<CheckReport>> out(jobs.size());
  std::vector<std::exception_ptr> errs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t nt = std::min<std::size_t>(worker_count(), jobs.size());
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<CheckReport> flat;
  for (auto& v : out) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

Field initial_data(const RunConfig& c, TorusGrid grid, double norm_index) {
  Field f(grid);
  if (c.data == "cos") {
    f = Field::from_function(grid, [](double x) { return std::cos(x); });
  } else {
    RandomFieldSpec spec;
    spec.decay = c.decay;
    spec.max_mode = c.max_mode;
    f = random_field(grid, c.seed, spec);
  }
  return (c.amplitude / norm_hs(f, norm_index)) * f;
}

CheckReport completion_report(const Trajectory& t, double t_end) {
  CheckReport r;
  r.name = "evolution completed";
  r.passed = t.completed();
  r.status = t.completed() ? "ok" : "blowup";
  r.measured = t.completed() ? t.times.back() : t.blowup_time;
  r.bound = t_end;
  r.notes = {{"dt", fmt_num(t.dt)}, {"steps", std::to_string(t.steps)}};
  return r;
}

struct EvolveSetup {
  SolverParams params;
  StepperConfig stepper;
  DiagnosticsConfig diag;
};

EvolveSetup evolve_setup(const RunConfig& c, const Field& u0, double eps) {
  EvolveSetup e;
  e.params = SolverParams{c.coeffs, eps, c.time_direction};
  e.stepper.dt = c.dt;
  e.stepper.t_end = c.t_end;
  e.stepper.sample_every = c.sample_every;
  e.stepper.scheme = scheme_from_string(c.scheme);
  e.stepper.cfl = c.cfl;
  const Field zero(u0.grid());
  EnergyParams ep{c.s, c.s0, c.Cs, c.Cs};
  if (c.Cs <= 0.0) {
    ep.Cs = choose_big_constant(u0, zero, EnergyKind::Hs, c.s, c.coeffs);
    ep.C0 = choose_big_constant(u0, zero, EnergyKind::L2, c.s, c.coeffs);
  }
  e.diag.hs_orders = {c.s};
  e.diag.energy = ep;
  return e;
}

std::vector<int> grid_ladder(const RunConfig& c) {
  std::vector<int> out;
  for (int n = c.n_coarse; n < c.n_fine; n *= 2) out.push_back(n);
  out.push_back(c.n_fine);
  return out;
}

RunResult run_evolve(const RunConfig& c) {
  RunResult res;
  const TorusGrid grid(c.n);
  const Field u0 = initial_data(c, grid, c.s);
  const EvolveSetup e = evolve_setup(c, u0, c.epsilon.front());
  Trajectory t = evolve(u0, e.params, e.stepper, e.diag);
  res.reports = {completion_report(t, c.t_end), conservation_check(t)};
  res.trajectory = std::move(t);
  res.trajectory_s = c.s;
  return res;
}

RunResult run_conserve(const RunConfig& c) {
  RunResult res;
  const TorusGrid grid(c.n);
  const Field u0 = initial_data(c, grid, c.s);
  std::vector<Trajectory> runs(c.epsilon.size());
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
    jobs.push_back([&, i] {
      const EvolveSetup e = evolve_setup(c, u0, c.epsilon[i]);
      runs[i] = evolve(u0, e.params, e.stepper, e.diag);
      CheckReport r = conservation_check(runs[i]);
      r.name += " eps=" + fmt_short(c.epsilon[i]);
      r.passed = r.passed && runs[i].completed();
      return std::vector<CheckReport>{r};
    });
  }
  res.reports = run_jobs(jobs);
  if (c.epsilon.size() >= 2) {
    // H⁴ drift should shrink with ε
    std::vector<std::pair<double, double>> drift;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      drift.emplace_back(c.epsilon[i], std::stod(res.reports[i].notes.at(0).second));
    }
    std::sort(drift.begin(), drift.end());
    CheckReport m;
    m.name = "h4 drift decreases with eps";
    m.details.columns = {"eps", "h4_relative_drift"};
    m.passed = true;
    for (std::size_t i = 0; i < drift.size(); ++i) {
      m.details.rows.push_back({drift[i].first, drift[i].second});
      if (i && !(drift[i - 1].second < drift[i].second)) m.passed = false;
    }
    m.measured = drift.back().second;
    res.reports.push_back(m);
  }
  res.trajectory = std::move(runs.front());
  res.trajectory_s = c.s;
  return res;
}

RunResult run_identities(const RunConfig& c) {
  std::vector<Job> jobs;
  for (int n : grid_ladder(c)) {
    for (IdentityId id : kAllIdentities) {
      jobs.push_back([&c, n, id] {
        const TorusGrid g(n);
        CheckReport agg;
        agg.name = "identity " + to_string(id) + " n=" + std::to_string(n);
        agg.bound = kIdentityTolerance;
        agg.passed = true;
        agg.details.columns = {"sample", "s", "relative"};
        for (int i = 0; i < c.samples; ++i) {
          std::vector<Field> fs = {corpus_field(g, c.seed, 3 * i), corpus_field(g, c.seed, 3 * i + 1)};
          if (id == IdentityId::HilbertQuartic) fs.push_back(corpus_field(g, c.seed, 3 * i + 2));
          for (double s : c.s_list) {
            const CheckReport r = check_identity(id, fs, s);
            agg.measured = std::max(agg.measured, r.measured);
            agg.passed = agg.passed && r.passed;
            agg.details.rows.push_back({double(i), s, r.measured});
          }
        }
        return std::vector<CheckReport>{agg};
      });
    }
  }
  return RunResult{Command::Identities, run_jobs(jobs), std::nullopt, 0.0};
}

RunResult run_commutators(const RunConfig& c) {
  std::vector<Job> jobs;
  for (int kind : c.kinds) {
    for (double s : c.s_list) {
      jobs.push_back([&c, kind, s] {
        CommutatorFitConfig f;
        f.kind = kind;
        f.s = s;
        f.s0 = c.s0;
        f.n_coarse = c.n_coarse;
        f.n_fine = c.n_fine;
        f.samples = c.samples;
        f.seed = c.seed;
        return std::vector<CheckReport>{commutator_bound_check(f)};
      });
    }
  }
  return RunResult{Command::Commutators, run_jobs(jobs), std::nullopt, 0.0};
}

RunResult run_symbols(const RunConfig& c) {
  std::vector<Job> jobs;
  for (const auto& name : c.inequalities) {
    for (double s : c.s_list) {
      jobs.push_back([&c, name, s] {
        SymbolScanSpec spec;
        spec.id = inequality_from_string(name);
        spec.s = s;
        spec.box = c.box;
        spec.fit_radius = c.fit_radius;
        return std::vector<CheckReport>{symbol_scan(spec)};
      });
    }
  }
  return RunResult{Command::Symbols, run_jobs(jobs), std::nullopt, 0.0};
}

RunResult run_gn(const RunConfig& c) {
  std::vector<Job> jobs;
  for (int l : c.l_list) {
    for (double p : c.p_list) {
      jobs.push_back([&c, l, p] {
        const TorusGrid g(c.n);
        CheckReport agg;
        agg.name = "gagliardo-nirenberg l=" + std::to_string(l) + " p=" + fmt_short(p) + " s=" + fmt_short(c.s);
        agg.bound = kGnConstant;
        agg.passed = true;
        agg.details.columns = {"sample", "ratio"};
        for (int i = 0; i < c.samples; ++i) {
          const CheckReport r = gn_check(corpus_field(g, c.seed, i), l, p, c.s);
          agg.measured = std::max(agg.measured, r.measured);
          agg.passed = agg.passed && r.passed;
          agg.details.rows.push_back({double(i), r.measured});
        }
        return std::vector<CheckReport>{agg};
      });
    }
  }
  return RunResult{Command::Gn, run_jobs(jobs), std::nullopt, 0.0};
}

RunResult run_mollifier(const RunConfig& c) {
  int n = c.n;
  while (n / 2 - 1 < kMollifierMinKmax) n *= 2;
  const Field f = algebraic_field(TorusGrid(n), c.decay);
  std::vector<Job> jobs;
  for (double a : c.alpha) {
    jobs.push_back([&c, &f, a] { return std::vector<CheckReport>{mollifier_rate_check(f, c.s, a)}; });
  }
  return RunResult{Command::Mollifier, run_jobs(jobs), std::nullopt, 0.0};
}

RunResult run_loss(const RunConfig& c) {
  DerivativeLossParams p;
  p.k0_list = c.k0;
  p.s = c.s;
  p.s0 = c.s0;
  p.coeffs = c.coeffs;
  p.epsilon = c.loss_epsilon;
  p.n = c.n;
  p.seed_amplitude = c.seed_amplitude;
  if (c.Cs > 0.0) p.Cs = c.Cs;
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("k0: ") + e.what());
  }
  return RunResult{Command::Loss, {derivative_loss_experiment(p)}, std::nullopt, 0.0};
}

RunResult run_two_solution(const RunConfig& c) {
  TwoSolutionParams p;
  p.s_prime = c.s_prime;
  p.s0 = c.s0;
  p.coeffs = c.coeffs;
  p.epsilon1 = c.epsilon.front();
  p.epsilon2 = c.epsilon.size() > 1 ? c.epsilon[1] : c.epsilon.front();
  p.horizon = c.t_end;
  p.dt = c.dt > 0.0 ? c.dt : 1e-4;
  p.sample_every = c.sample_every;
  p.Cs = c.Cs;
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("epsilon: ") + e.what());
  }
  const TorusGrid grid(c.n);
  const Field a = initial_data(c, grid, c.s_prime);
  const Field b = a + c.perturbation * Field::from_function(grid, [](double x) { return std::cos(x); });
  return RunResult{Command::TwoSolution, {two_solution_experiment(a, b, p)}, std::nullopt, 0.0};
}

RunResult run_bona_smith(const RunConfig& c) {
  BonaSmithParams p;
  p.s = c.s;
  p.s0 = c.s0;
  p.coeffs = c.coeffs;
  p.eps_list = c.eps_list;
  p.horizon = c.t_end;
  p.dt = c.dt;
  p.sample_every = c.sample_every;
  p.alphas = {c.s};
  const Field u0 = bona_smith_data(TorusGrid(c.n), c.s, c.delta, c.amplitude);
  return RunResult{Command::BonaSmith, {bona_smith_convergence(u0, p)}, std::nullopt, 0.0};
}

}  // namespace

bool RunResult::all_passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

int worker_count() {
  if (const char* v = std::getenv("BO4LAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_command(Command cmd, const RunConfig& c) {
  RunResult r;
  switch (cmd) {
    case Command::Evolve: r = run_evolve(c); break;
    case Command::Identities: r = run_identities(c); break;
    case Command::Commutators: r = run_commutators(c); break;
    case Command::Symbols: r = run_symbols(c); break;
    case Command::Gn: r = run_gn(c); break;
    case Command::Mollifier: r = run_mollifier(c); break;
    case Command::Loss: r = run_loss(c); break;
    case Command::TwoSolution: r = run_two_solution(c); break;
    case Command::BonaSmith: r = run_bona_smith(c); break;
    case Command::Conserve: r = run_conserve(c); break;
  }
  r.command = cmd;
  return r;
}

}  // namespace bo4
