#include "bo4/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bo4/errors.hpp"

namespace bo4 {

void EnergyParams::validate() const {
  if (!(s >= 1.0)) throw ParameterError("energy: s must be >= 1");
  if (!(s0 > 3.5)) throw ParameterError("energy: s0 must exceed 3.5");
  if (!(Cs > 0.0)) throw ParameterError("energy: Cs must be positive");
  if (!(C0 > 0.0)) throw ParameterError("energy: C0 must be positive");
}

Lambdas lambdas(double s, const CoefficientSet& c) {
  Lambdas l;
  l.l1 = (c.c1 - c.c4) * s - c.c1 / 2.0 + 2.0 * c.c2 + c.c4 / 2.0;
  l.l2 = -2.0 * c.c3 * s - c.c4;
  l.l3 = -2.0 * (c.c5 + c.c6 + c.c7) * s - 2.0 * c.c5 - c.c6;
  l.l4 = 2.0 * (c.c1 - c.c4) * s - 5.0 * c.c1 + 4.0 * c.c2 + 5.0 * c.c4;
  return l;
}

namespace {

// M1 = λ1/4 ∫ f (H A w)(H B w), M2 = λ2/4 ∫ (H∂x f)(B w)², M3 = κ ∫ f²(B w)²,
// where (A, B) = (D^s, D^{s-1}) for E_s and (I, J) for E.
Corrections corrections_with(const Field& f, const Field& w, const Lambdas& l, const Multiplier& a,
                             const Multiplier& b) {
  Corrections out;
  const Field bw = apply(w, b);
  if (l.l1 != 0.0) {
    out.m1 = l.l1 / 4.0 * integral({f, hilbert(apply(w, a)), hilbert(bw)});
  }
  if (l.l2 != 0.0) {
    out.m2 = l.l2 / 4.0 * integral({hilbert(dx(f)), bw, bw});
  }
  const double k3 = l.m3_coefficient();
  if (k3 != 0.0) {
    out.m3 = k3 * integral({f, f, bw, bw});
  }
  return out;
}

void check_s(double s) {
  if (!(s >= 1.0)) {
    throw ParameterError("E_s corrections need s >= 1 (got " + std::to_string(s) + ")");
  }
}

}  // namespace

Corrections corrections_hs(const Field& f, const Field& g, double s, const CoefficientSet& c) {
  check_s(s);
  return corrections_with(f, f - g, lambdas(s, c), Multiplier::frac_deriv(s),
                          Multiplier::frac_deriv(s - 1.0));
}

Corrections corrections_l2(const Field& f, const Field& g, const CoefficientSet& c) {
  return corrections_with(f, f - g, lambdas(0.0, c), Multiplier{}, Multiplier::j_op());
}

double EnergyParts::sandwich_margin(double c) const {
  const double e = energy(c);
  const double mi = mid(c);
  return std::min(mi - e, 4.0 * e - mi);
}

EnergyParts energy_parts_hs(const Field& f, const Field& g, double s, const CoefficientSet& c) {
  check_s(s);
  const Field w = f - g;
  const double wn = parseval_sum(w);
  const double fn = norm_l2(f);
  EnergyParts e;
  e.p = wn;
  e.q = wn * (fn * fn + std::pow(fn, 4.0 * s));
  e.r = parseval_sum(frac_d(w, s));
  e.m = corrections_hs(f, g, s, c);
  return e;
}

EnergyParts energy_parts_l2(const Field& f, const Field& g, const CoefficientSet& c) {
  const Field w = f - g;
  const double wn = std::pow(norm_hneg1(w), 2);
  const double fn2 = parseval_sum(f);
  EnergyParts e;
  e.p = wn;
  e.q = wn * (fn2 + fn2 * fn2);
  e.r = parseval_sum(w);
  e.m = corrections_l2(f, g, c);
  return e;
}

double energy_hs(const Field& f, const Field& g, const EnergyParams& ep, const CoefficientSet& c) {
  return energy_parts_hs(f, g, ep.s, c).energy(ep.Cs);
}

double energy_l2(const Field& f, const Field& g, const EnergyParams& ep, const CoefficientSet& c) {
  return energy_parts_l2(f, g, c).energy(ep.C0);
}

double choose_big_constant(const EnergyParts& parts) {
  double c = 1.0;
  for (int k = 0; k <= 64; ++k, c *= 2.0) {
    if (parts.sandwich_margin(c) >= 0.0) return c;
  }
  throw NumericError("choose_big_constant: no C <= 2^64 satisfies the comparison inequality");
}

double choose_big_constant(const Field& f, const Field& g, EnergyKind kind, double s,
                           const CoefficientSet& c) {
  const auto parts = kind == EnergyKind::Hs ? energy_parts_hs(f, g, s, c) : energy_parts_l2(f, g, c);
  return choose_big_constant(parts);
}

double i_factor(const Field& f, const Field& g, double s0) {
  if (!(s0 >= 0.0)) throw ParameterError("i_factor: s0 must be >= 0");
  return 1.0 + norm_hs(f, s0) + norm_hs(g, s0);
}

}  // namespace bo4
