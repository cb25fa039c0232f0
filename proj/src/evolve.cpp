#include "bo4/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "bo4/errors.hpp"

namespace bo4 {

std::string to_string(Scheme s) { return s == Scheme::ETDRK4 ? "etdrk4" : "ifrk4"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "etdrk4" || name == "ETDRK4") return Scheme::ETDRK4;
  if (name == "ifrk4" || name == "IFRK4") return Scheme::IFRK4;
  throw ConfigError("unknown scheme '" + name + "'");
}

Complex linear_symbol(int xi, double epsilon, int time_direction) {
  const double x4 = std::pow(double(xi), 4);
  const double sgn = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
  return {-time_direction * epsilon * x4, -sgn * x4};
}

Complex phi(int k, Complex z) {
  if (k < 0 || k > 3) throw ParameterError("phi: k must be 0..3");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 1.0) {
    // Σ z^m/(m+k)!; 30 terms reach double precision for |z| < 1.
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    Complex term = 1.0 / fact;
    Complex sum = term;
    for (int m = 1; m < 30; ++m) {
      term *= z / double(m + k);
      sum += term;
    }
    return sum;
  }
  Complex p = std::exp(z);
  double inv_fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    p = (p - inv_fact) / z;
    inv_fact /= j;
  }
  return p;
}

double auto_dt(const Field& u, const SolverParams& p, double cfl) {
  if (!(cfl > 0.0)) throw ParameterError("auto_dt: cfl must be positive");
  const double k = u.grid().k_max();
  const double h3 = norm_hs(u, 3.0);
  if (h3 == 0.0) return cfl / k;
  // relative H³ rate of the explicitly treated part
  const double rate = norm_hs(nonlinear_part(u, p.coeffs), 3.0) / h3;
  return cfl / std::max(k, rate);
}

Stepper::Stepper(TorusGrid grid, SolverParams params, double dt, Scheme scheme)
    : grid_(grid), params_(params), dt_(dt), scheme_(scheme) {
  params_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("Stepper: dt must be positive");
  const int n = grid.n_modes();
  e_.resize(n);
  e_half_.resize(n);
  q_.resize(n);
  f1_.resize(n);
  f2_.resize(n);
  f3_.resize(n);
  const double h = params_.time_direction * dt;
  for (int k = 0; k < n; ++k) {
    const Complex z = h * linear_symbol(k, params_.epsilon, params_.time_direction);
    e_[k] = std::exp(z);
    e_half_[k] = std::exp(0.5 * z);
    q_[k] = 0.5 * h * phi(1, 0.5 * z);
    const Complex p1 = phi(1, z), p2 = phi(2, z), p3 = phi(3, z);
    f1_[k] = h * (p1 - 3.0 * p2 + 4.0 * p3);
    f2_[k] = h * (p2 - 2.0 * p3);
    f3_[k] = h * (4.0 * p3 - p2);
  }
}

Field Stepper::scale(const std::vector<Complex>& c, const Field& f) const {
  Field out = f;
  auto s = out.mutable_spectrum();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= c[k];
  s.back() = 0.0;
  return out;
}

Field Stepper::combine(
    std::initializer_list<std::pair<const std::vector<Complex>*, const Field*>> terms) const {
  std::vector<Complex> acc(grid_.n_modes(), Complex{});
  for (const auto& [coef, field] : terms) {
    const auto s = field->spectrum();
    if (coef) {
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += (*coef)[k] * s[k];
    } else {
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += s[k];
    }
  }
  acc.back() = 0.0;
  return Field::from_spectrum(grid_, std::move(acc));
}

Field Stepper::step(const Field& u) const {
  if (!(u.grid() == grid_)) throw ShapeError("Stepper::step: grid mismatch");
  return scheme_ == Scheme::ETDRK4 ? step_etdrk4(u) : step_ifrk4(u);
}

Field Stepper::step_etdrk4(const Field& u) const {
  const auto& c = params_.coeffs;
  const Field nu = nonlinear_part(u, c);
  const Field a = combine({{&e_half_, &u}, {&q_, &nu}});
  const Field na = nonlinear_part(a, c);
  const Field b = combine({{&e_half_, &u}, {&q_, &na}});
  const Field nb = nonlinear_part(b, c);
  const Field twice_nb_minus_nu = 2.0 * nb - nu;
  const Field cc = combine({{&e_half_, &a}, {&q_, &twice_nb_minus_nu}});
  const Field nc = nonlinear_part(cc, c);
  const Field nab = na + nb;
  const Field two_nab = 2.0 * nab;
  return combine({{&e_, &u}, {&f1_, &nu}, {&f2_, &two_nab}, {&f3_, &nc}});
}

Field Stepper::step_ifrk4(const Field& u) const {
  const auto& c = params_.coeffs;
  const double h = params_.time_direction * dt_;
  const Field ka = h * nonlinear_part(u, c);
  const Field half_a = u + 0.5 * ka;
  const Field u2 = scale(e_half_, half_a);
  const Field kb = h * nonlinear_part(u2, c);
  const Field u3 = scale(e_half_, u) + 0.5 * kb;
  const Field kc = h * nonlinear_part(u3, c);
  const Field u4 = scale(e_, u) + scale(e_half_, kc);
  const Field kd = h * nonlinear_part(u4, c);
  const Field bc = kb + kc;
  Field incr = scale(e_, ka) + 2.0 * scale(e_half_, bc) + kd;
  return scale(e_, u) + (1.0 / 6.0) * incr;
}

Field step(const Field& u, const SolverParams& p, const StepperConfig& cfg) {
  const double dt = cfg.dt > 0.0 ? cfg.dt : auto_dt(u, p, cfg.cfl);
  return Stepper(u.grid(), p, dt, cfg.scheme).step(u);
}

SampleDiagnostics measure(const Field& u, const SolverParams& p, const DiagnosticsConfig& dc) {
  SampleDiagnostics d;
  d.mass = u.mean_mode();
  d.l2 = norm_l2(u);
  d.hs.reserve(dc.hs_orders.size());
  for (double s : dc.hs_orders) d.hs.push_back(norm_hs(u, s));
  if (dc.energy) {
    const Field zero(u.grid());
    d.energy_hs = energy_hs(u, zero, *dc.energy, p.coeffs);
    d.energy_l2 = energy_l2(u, zero, *dc.energy, p.coeffs);
  }
  return d;
}

Trajectory evolve(const Field& u0, const SolverParams& p, const StepperConfig& cfg,
                  const DiagnosticsConfig& dc) {
  p.validate();
  if (!(cfg.t_end > 0.0)) throw ParameterError("evolve: t_end must be positive");
  if (cfg.sample_every < 1) throw ParameterError("evolve: sample_every must be >= 1");
  if (!u0.is_finite()) throw NumericError("evolve: non-finite initial data");

  const double dt_req = cfg.dt > 0.0 ? cfg.dt : auto_dt(u0, p, cfg.cfl);
  const long blocks = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / (dt_req * cfg.sample_every) - 1e-9)));
  const long n_steps = blocks * cfg.sample_every;
  const double dt = cfg.t_end / n_steps;
  const Stepper stepper(u0.grid(), p, dt, cfg.scheme);

  Trajectory traj;
  traj.dt = dt;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(u0);
  traj.diagnostics.push_back(measure(u0, p, dc));

  const double h3_limit = kBlowupFactor * std::max(norm_hs(u0, 3.0), 1e-300);
  Field u = u0;
  for (long n = 1; n <= n_steps; ++n) {
    bool blown = false;
    try {
      u = stepper.step(u);
      blown = !u.is_finite() || norm_hs(u, 3.0) > h3_limit;
    } catch (const NumericError&) {
      blown = true;
    }
    traj.steps = n;
    if (blown) {
      traj.status = RunStatus::BlowUp;
      traj.blowup_time = n * dt;
      return traj;
    }
    if (n % cfg.sample_every == 0) {
      traj.times.push_back(n * dt);
      traj.snapshots.push_back(u);
      traj.diagnostics.push_back(measure(u, p, dc));
    }
  }
  return traj;
}

}  // namespace bo4
