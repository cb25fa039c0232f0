#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bo4/diagnostics.hpp"
#include "bo4/errors.hpp"
#include "bo4/format.hpp"

namespace bo4 {

Field random_field(TorusGrid grid, std::uint64_t seed, const RandomFieldSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<Complex> half(grid.n_modes(), Complex{});
  const int top = spec.max_mode < 0 ? grid.k_max() : std::min(spec.max_mode, grid.k_max());
  // Two draws per mode regardless of use, so fields nest across grids.
  const double sign_draw = phase(rng);
  phase(rng);
  if (spec.with_mean) half[0] = spec.amplitude * (sign_draw < kPi ? 1.0 : -1.0);
  for (int k = 1; k <= top; ++k) {
    const double theta = phase(rng);
    phase(rng);
    const double mag = spec.amplitude * std::pow(1.0 + double(k) * k, -0.5 * spec.decay);
    half[k] = std::polar(mag, theta);
  }
  return Field::from_spectrum(grid, std::move(half));
}

Field corpus_field(TorusGrid grid, std::uint64_t seed, int index) {
  // splitmix-style decorrelation of (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * std::uint64_t(index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  RandomFieldSpec spec;
  spec.decay = kCorpusDecays[index % std::size(kCorpusDecays)];
  return random_field(grid, z, spec);
}

// ---------------------------------------------------------------------------

GnRatio gn_ratio(const Field& f, int l, double p, double s) {
  if (!(s >= 1.0)) throw ParameterError("gn: s must be >= 1");
  if (l < 0) throw ParameterError("gn: l must be >= 0");
  if (!(p >= 2.0)) throw ParameterError("gn: p must lie in [2, inf]");
  GnRatio g;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  g.alpha = (l + 0.5 - inv_p) / s;
  if (g.alpha > 1.0) throw ParameterError("gn: exponent alpha exceeds 1");
  g.lhs = norm_lp(dx(f, l), p);
  const double f0 = norm_l2(f);
  const double fs = norm_l2(frac_d(f, s));
  g.bound = std::pow(f0, 1.0 - g.alpha) * std::pow(fs, g.alpha);
  if (l == 0) g.bound += f0;
  return g;
}

CheckReport gn_check(const Field& f, int l, double p, double s) {
  if (l > s - 1.0) throw ParameterError("gn: need l <= s - 1");
  const auto g = gn_ratio(f, l, p, s);
  CheckReport r;
  r.name = "gagliardo-nirenberg l=" + std::to_string(l) + " p=" + fmt_short(p) + " s=" + fmt_short(s);
  r.measured = g.bound > 0.0 ? g.ratio() : 0.0;
  r.bound = kGnConstant;
  r.passed = r.measured <= r.bound;
  r.details.columns = {"l", "p", "s", "alpha", "lhs", "bound", "ratio"};
  r.details.rows.push_back({double(l), p, s, g.alpha, g.lhs, g.bound, r.measured});
  return r;
}

// ---------------------------------------------------------------------------

Field algebraic_field(TorusGrid grid, double decay, double amplitude) {
  std::vector<Complex> half(grid.n_modes(), Complex{});
  for (int k = 0; k <= grid.k_max(); ++k) {
    half[k] = amplitude * std::pow(1.0 + double(k) * k, -0.5 * decay);
  }
  return Field::from_spectrum(grid, std::move(half));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CheckReport mollifier_rate_check(const Field& f, double s, double alpha) {
  if (!(alpha >= 0.0 && alpha <= s)) throw ParameterError("mollifier: need 0 <= alpha <= s");
  if (f.grid().k_max() < kMollifierMinKmax) {
    throw ParameterError("mollifier: grid too coarse for the smallest eta (need n >= " +
                         std::to_string(2 * kMollifierMinKmax + 2) + ")");
  }
  CheckReport r;
  r.name = "mollifier rate alpha=" + fmt_short(alpha) + " s=" + fmt_short(s);
  r.details.columns = {"eta", "err_low", "contraction_ratio", "err_s", "growth_high"};
  const double low = s - alpha;
  const double f_low = norm_hs(f, low);
  const double f_s = norm_hs(f, s);
  std::vector<double> etas, errs;
  bool contraction = true;
  bool monotone = true;
  double prev = INFINITY;
  for (double eta : kMollifierEtas) {
    const Field lf = apply(f, Multiplier::mollify(eta));
    const double err = norm_hs(lf - f, low);
    const double ratio = norm_hs(lf, low) / f_low;
    const double err_s = norm_hs(lf - f, s);
    const double growth = norm_hs(lf, s + alpha) * std::pow(eta, alpha) / f_s;
    contraction = contraction && ratio <= 1.0 + 1e-14;
    monotone = monotone && err_s <= prev;
    prev = err_s;
    etas.push_back(eta);
    errs.push_back(err);
    r.details.rows.push_back({eta, err, ratio, err_s, growth});
  }
  r.measured = loglog_slope(etas, errs);
  r.bound = alpha - 0.1;
  r.passed = r.measured >= r.bound && contraction && monotone;
  r.notes = {{"contraction", contraction ? "true" : "false"},
             {"monotone_hs_convergence", monotone ? "true" : "false"}};
  return r;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> operator_algebra_checks(const OperatorAlgebraConfig& cfg) {
  const TorusGrid grid(cfg.n);
  CheckReport hh, jb;
  hh.name = "H(Hf) = -f + mean";
  jb.name = "|Jf| <= 2|f|_{H^-1}";
  hh.bound = jb.bound = cfg.tolerance;
  jb.measured = -INFINITY;
  std::vector<CheckReport> hj(4);
  for (int k = 0; k < 4; ++k) {
    hj[k].name = "|HJd^" + std::to_string(k + 1) + "f - d^" + std::to_string(k) + "f| <= 2^" +
                 std::to_string(k) + "|f|";
    hj[k].bound = cfg.tolerance;
    hj[k].measured = -INFINITY;
  }
  long hh_bad = 0, jb_bad = 0;
  std::vector<long> hj_bad(4, 0);
  for (int i = 0; i < cfg.samples; ++i) {
    const Field f = corpus_field(grid, cfg.seed, i);
    const double fn = norm_l2(f);

    const Field res = hilbert(hilbert(f)) + f - Field::constant(grid, f.mean_mode());
    const double rel = norm_l2(res) / fn;
    hh.measured = std::max(hh.measured, rel);
    if (rel > cfg.tolerance) ++hh_bad;

    // excess = (lhs - bound) / bound; a violation beyond rounding is > tol
    const double jf = norm_l2(apply(f, Multiplier::j_op()));
    const double jbound = 2.0 * norm_hneg1(f);
    const double jexcess = (jf - jbound) / jbound;
    jb.measured = std::max(jb.measured, jexcess);
    if (jexcess > cfg.tolerance) ++jb_bad;

    for (int k = 0; k < 4; ++k) {
      const Multiplier m = Multiplier::hilbert() * Multiplier::j_op() * Multiplier::deriv(k + 1);
      const double lhs = norm_l2(apply(f, m) - dx(f, k));
      const double bound = std::ldexp(fn, k);
      const double excess = (lhs - bound) / bound;
      hj[k].measured = std::max(hj[k].measured, excess);
      if (excess > cfg.tolerance) ++hj_bad[k];
    }
  }
  hh.passed = hh_bad == 0;
  jb.passed = jb_bad == 0;
  hh.notes = {{"violations", std::to_string(hh_bad)}, {"samples", std::to_string(cfg.samples)}};
  jb.notes = {{"violations", std::to_string(jb_bad)}, {"samples", std::to_string(cfg.samples)}};
  std::vector<CheckReport> out{hh, jb};
  for (int k = 0; k < 4; ++k) {
    hj[k].passed = hj_bad[k] == 0;
    hj[k].notes = {{"violations", std::to_string(hj_bad[k])}, {"samples", std::to_string(cfg.samples)}};
    out.push_back(hj[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

CheckReport conservation_check(const Trajectory& traj) {
  CheckReport r;
  r.name = "conservation";
  r.details.columns = {"t", "mass_drift", "h4_rel_drift"};
  if (traj.snapshots.empty()) {
    r.passed = true;
    return r;
  }
  const double m0 = traj.snapshots.front().mean_mode();
  const double h0 = norm_hs(traj.snapshots.front(), 4.0);
  double mass_drift = 0.0, h4_drift = 0.0;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double dm = std::abs(traj.snapshots[i].mean_mode() - m0);
    const double dh = h0 > 0.0 ? std::abs(norm_hs(traj.snapshots[i], 4.0) - h0) / h0 : 0.0;
    mass_drift = std::max(mass_drift, dm);
    h4_drift = std::max(h4_drift, dh);
    r.details.rows.push_back({traj.times[i], dm, dh});
  }
  r.measured = mass_drift;
  r.bound = kMassDriftTolerance;
  r.passed = mass_drift <= kMassDriftTolerance;
  if (!traj.completed()) r.status = "blowup";
  r.notes = {{"h4_relative_drift", fmt_num(h4_drift)}};
  return r;
}

std::vector<std::pair<double, double>> centered_derivative(std::span<const double> t,
                                                           std::span<const double> q) {
  if (t.size() != q.size()) throw ShapeError("centered_derivative: size mismatch");
  std::vector<std::pair<double, double>> out;
  if (t.size() < 5) return out;
  for (std::size_t i = 2; i + 2 < t.size(); ++i) {
    const double h = (t[i + 2] - t[i - 2]) / 4.0;
    const double d = (q[i - 2] - 8.0 * q[i - 1] + 8.0 * q[i + 1] - q[i + 2]) / (12.0 * h);
    out.emplace_back(t[i], d);
  }
  return out;
}

}  // namespace bo4
