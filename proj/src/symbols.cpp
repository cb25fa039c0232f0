#include <algorithm>
#include <cmath>
#include <string>

#include "bo4/diagnostics.hpp"
#include "bo4/errors.hpp"
#include "bo4/format.hpp"

namespace bo4 {

std::string to_string(InequalityId id) {
  switch (id) {
    case InequalityId::Taylor2: return "taylor2";
    case InequalityId::Leibniz: return "leibniz";
    case InequalityId::Taylor1: return "taylor1";
  }
  return "?";
}

InequalityId inequality_from_string(const std::string& name) {
  for (auto id : {InequalityId::Taylor2, InequalityId::Leibniz, InequalityId::Taylor1}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown inequality '" + name + "'");
}

namespace {

// σ_s(x) = x|x|^s
double sigma(double x, double s) { return x * abs_pow(x, s); }

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SymbolValue symbol_value(InequalityId id, double s, long xi_l, long eta_l) {
  const double xi = double(xi_l), eta = double(eta_l), d = xi - eta;
  SymbolValue v;
  switch (id) {
    case InequalityId::Taylor2: {
      // |ξ|^sξη² - |ξ-η|^s(ξ-η)η² - |η|^sη³ - (s+1)(ξ-η)|η|^sη² - s(s+1)/2 (ξ-η)²|η|^sη
      const double t1 = sigma(xi, s) * eta * eta;
      const double t2 = sigma(d, s) * eta * eta;
      const double t3 = abs_pow(eta, s) * eta * eta * eta;
      const double t4 = (s + 1.0) * d * abs_pow(eta, s) * eta * eta;
      const double t5 = s * (s + 1.0) / 2.0 * d * d * abs_pow(eta, s) * eta;
      v.lhs = std::abs(t1 - t2 - t3 - t4 - t5);
      v.rhs = std::pow(std::abs(eta), 3) * abs_pow(d, s) + abs_pow(eta, s) * std::pow(std::abs(d), 3);
      v.term_scale = max_abs({t1, t2, t3, t4, t5});
      break;
    }
    case InequalityId::Leibniz: {
      // max of ||ξ|^{s+1} - |ξ-η|^{s+1} - |η|^{s+1}| and |σ(ξ) - σ(ξ-η) - σ(η)|
      const double a1 = abs_pow(xi, s + 1), a2 = abs_pow(d, s + 1), a3 = abs_pow(eta, s + 1);
      const double b1 = sigma(xi, s), b2 = sigma(d, s), b3 = sigma(eta, s);
      v.lhs = std::max(std::abs(a1 - a2 - a3), std::abs(b1 - b2 - b3));
      v.rhs = std::abs(eta) * abs_pow(d, s) + std::abs(d) * abs_pow(eta, s);
      v.term_scale = max_abs({a1, a2, a3});
      break;
    }
    case InequalityId::Taylor1: {
      // symbol of P_s^{(8)}: |ξ|^sξη - |ξ-η|^s(ξ-η)η - |η|^sη² - (s+1)(ξ-η)|η|^sη
      const double t1 = sigma(xi, s) * eta;
      const double t2 = sigma(d, s) * eta;
      const double t3 = abs_pow(eta, s) * eta * eta;
      const double t4 = (s + 1.0) * d * abs_pow(eta, s) * eta;
      v.lhs = std::abs(t1 - t2 - t3 - t4);
      v.rhs = eta * eta * abs_pow(d, s) + abs_pow(eta, s) * d * d;
      v.term_scale = max_abs({t1, t2, t3, t4});
      break;
    }
  }
  return v;
}

void SymbolScanSpec::validate() const {
  if (fit_radius < 16) throw ParameterError("symbol_scan: fit radius must be >= 16");
  if (box < 4 * fit_radius) throw ParameterError("symbol_scan: box must be >= 4 * fit radius");
  if (!(s >= 0.0)) throw ParameterError("symbol_scan: s must be >= 0");
}

CheckReport symbol_scan(const SymbolScanSpec& spec) {
  spec.validate();
  CheckReport r;
  r.name = "symbol " + to_string(spec.id) + " s=" + fmt_short(spec.s);

  // LHS is judged zero relative to its own terms; the leading terms cancel
  // in floating point only up to rounding.
  constexpr double kZeroTol = 1e-12;
  long hard_failures = 0;

  auto scan = [&](int radius, auto&& visit) {
    for (long xi = -radius; xi <= radius; ++xi) {
      for (long eta = -radius; eta <= radius; ++eta) {
        const auto v = symbol_value(spec.id, spec.s, xi, eta);
        if (v.rhs == 0.0) {
          if (v.lhs > kZeroTol * std::max(v.term_scale, 1.0)) ++hard_failures;
          continue;
        }
        visit(xi, eta, v.lhs / v.rhs);
      }
    }
  };

  double c_fit = 0.0;
  scan(spec.fit_radius, [&](long, long, double ratio) { c_fit = std::max(c_fit, ratio); });

  double global_max = 0.0;
  long violations = 0;
  long arg_xi = 0, arg_eta = 0;
  const double limit = spec.slack * c_fit;
  hard_failures = 0;
  scan(spec.box, [&](long xi, long eta, double ratio) {
    if (ratio > global_max) {
      global_max = ratio;
      arg_xi = xi;
      arg_eta = eta;
    }
    if (ratio > limit) ++violations;
  });

  r.measured = global_max;
  r.bound = limit;
  r.passed = hard_failures == 0 && violations == 0;
  if (hard_failures > 0) r.status = "hard_failure";
  r.details.columns = {"s", "fit_radius", "box", "C_fit", "global_max", "argmax_xi", "argmax_eta",
                       "violations", "hard_failures"};
  r.details.rows.push_back({spec.s, double(spec.fit_radius), double(spec.box), c_fit, global_max,
                            double(arg_xi), double(arg_eta), double(violations),
                            double(hard_failures)});
  return r;
}

}  // namespace bo4
