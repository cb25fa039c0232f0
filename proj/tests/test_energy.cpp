#include <gtest/gtest.h>

#include <cmath>

#include "bo4/diagnostics.hpp"
#include "bo4/energy.hpp"
#include "bo4/errors.hpp"
#include "oracles.hpp"

using namespace bo4;

namespace {

const TorusGrid kG = make_grid(64);
const Field kCos = Field::from_function(kG, [](double x) { return std::cos(x); });

// Random field with ‖f‖_{H^s} = target.
Field normalized(TorusGrid g, std::uint64_t seed, int index, double s, double target) {
  Field f = corpus_field(g, seed, index);
  return (target / norm_hs(f, s)) * f;
}

}  // namespace

TEST(EnergyParams, Validation) {
  EnergyParams ep;
  EXPECT_NO_THROW(ep.validate());
  ep.s0 = 3.5;
  EXPECT_THROW(ep.validate(), ParameterError);
  ep.s0 = 3.6;
  ep.s = 0.5;
  EXPECT_THROW(ep.validate(), ParameterError);
  ep.s = 4;
  ep.Cs = 0;
  EXPECT_THROW(ep.validate(), ParameterError);
}

TEST(Lambdas, ZeroCoefficients) {
  const auto l = lambdas(2.7, CoefficientSet::linear());
  EXPECT_EQ(l.l1, 0.0);
  EXPECT_EQ(l.l2, 0.0);
  EXPECT_EQ(l.l3, 0.0);
  EXPECT_EQ(l.l4, 0.0);
}

TEST(Lambdas, IntegrablePreset) {
  const auto c = CoefficientSet::integrable();
  for (double s : {0.0, 1.0, 2.5, 4.0}) {
    const auto l = lambdas(s, c);
    EXPECT_DOUBLE_EQ(l.l1, 4 * s + 2);
    EXPECT_DOUBLE_EQ(l.l2, 2 * s + 1);
    EXPECT_DOUBLE_EQ(l.l3, 12 * s + 6);
    EXPECT_DOUBLE_EQ(l.l4, 8 * s - 12);
  }
  const auto l1 = lambdas(1.0, c);
  EXPECT_EQ(l1.l1, 6.0);
  EXPECT_EQ(l1.l2, 3.0);
  EXPECT_EQ(l1.l3, 18.0);
  EXPECT_EQ(l1.l4, -4.0);
}

TEST(Lambdas, M3CoefficientIsQuadraticInS) {
  // Exact quadratic through s = 0, 1, 2 predicts every other s.
  CoefficientSet c;
  c.c1 = 0.3, c.c2 = -1.2, c.c3 = 2.0, c.c4 = 0.9, c.c5 = -0.4, c.c6 = 1.7, c.c7 = 0.1;
  const double y0 = lambdas(0, c).m3_coefficient(), y1 = lambdas(1, c).m3_coefficient(),
               y2 = lambdas(2, c).m3_coefficient();
  const double a2 = (y2 - 2 * y1 + y0) / 2, a1 = y1 - y0 - a2;
  for (double s : {3.0, 4.0, 7.5, -1.0}) {
    EXPECT_NEAR(lambdas(s, c).m3_coefficient(), y0 + a1 * s + a2 * s * s, 1e-12 * (1 + s * s));
  }
}

TEST(Corrections, TrivialCases) {
  const Field f = corpus_field(kG, 1, 0), g = corpus_field(kG, 1, 1);
  const auto c = CoefficientSet::integrable();
  const auto same = corrections_hs(f, f, 4.0, c);
  EXPECT_EQ(same.m1, 0.0);
  EXPECT_EQ(same.m2, 0.0);
  EXPECT_EQ(same.m3, 0.0);
  const auto zero = corrections_hs(f, g, 4.0, CoefficientSet::linear());
  EXPECT_EQ(zero.sum(), 0.0);
  EXPECT_EQ(corrections_l2(f, f, c).sum(), 0.0);
  EXPECT_THROW(corrections_hs(f, g, 0.5, c), ParameterError);
}

TEST(Corrections, IntegrableCosineExample) {
  const auto m = corrections_hs(kCos, Field(kG), 1.0, CoefficientSet::integrable());
  EXPECT_NEAR(m.m2, 0.0, 1e-14);
  EXPECT_NEAR(m.m3, 9.0 * kPi / 8.0, 1e-13);
  // Quadrature oracle: (48/32) ∫ cos⁴
  const double quad = 1.5 * oracle::trapezoid([](double x) { return std::pow(std::cos(x), 4); });
  EXPECT_NEAR(m.m3, quad, 1e-12);
  // M1 = (6/4) ∫ cos · (HD cos)(H cos) = 1.5 ∫ cos sin² = 0
  EXPECT_NEAR(m.m1, 0.0, 1e-14);
}

TEST(Corrections, QuadraticInDifference) {
  const auto c = CoefficientSet::integrable();
  const Field f = corpus_field(kG, 2, 0), d = corpus_field(kG, 2, 1);
  const auto at = [&](double t, bool l2) {
    const Field g = f + t * d;
    return l2 ? corrections_l2(f, g, c) : corrections_hs(f, g, 3.0, c);
  };
  for (bool l2 : {false, true}) {
    const auto base = at(1.0, l2);
    for (double t : {-2.0, 0.5, 3.0}) {
      const auto m = at(t, l2);
      EXPECT_NEAR(m.m1, t * t * base.m1, 1e-12 * std::abs(t * t * base.m1) + 1e-14);
      EXPECT_NEAR(m.m2, t * t * base.m2, 1e-12 * std::abs(t * t * base.m2) + 1e-14);
      EXPECT_NEAR(m.m3, t * t * base.m3, 1e-12 * std::abs(t * t * base.m3) + 1e-14);
    }
  }
}

TEST(Corrections, MatchQuadratureOracle) {
  // Independent evaluation of the three integrals on a fine sample grid.
  const auto c = CoefficientSet::integrable();
  const double s = 2.5;
  const Field f = corpus_field(kG, 3, 0), g = corpus_field(kG, 3, 1), w = f - g;
  const auto l = lambdas(s, c);
  const int m = 512;
  const auto fv = f.values_on(m);
  const auto a = apply(w, Multiplier::hilbert() * Multiplier::frac_deriv(s)).values_on(m);
  const auto b = apply(w, Multiplier::hilbert() * Multiplier::frac_deriv(s - 1)).values_on(m);
  const auto hfx = hilbert(dx(f)).values_on(m);
  const auto d = frac_d(w, s - 1).values_on(m);
  double i1 = 0, i2 = 0, i3 = 0;
  for (int j = 0; j < m; ++j) {
    i1 += fv[j] * a[j] * b[j];
    i2 += hfx[j] * d[j] * d[j];
    i3 += fv[j] * fv[j] * d[j] * d[j];
  }
  const double hq = kTwoPi / m;
  const auto got = corrections_hs(f, g, s, c);
  EXPECT_NEAR(got.m1, l.l1 / 4 * i1 * hq, 1e-10 * std::abs(got.m1));
  EXPECT_NEAR(got.m2, l.l2 / 4 * i2 * hq, 1e-10 * std::abs(got.m2));
  EXPECT_NEAR(got.m3, l.m3_coefficient() * i3 * hq, 1e-10 * std::abs(got.m3));
}

TEST(EnergyHs, Examples) {
  EnergyParams ep;
  ep.s = 1.0;
  EXPECT_EQ(energy_hs(kCos, kCos, ep, CoefficientSet::integrable()), 0.0);
  // ‖cos‖^{4s} = π² at s = 1
  EXPECT_NEAR(energy_hs(kCos, Field(kG), ep, CoefficientSet::linear()),
              0.5 * kPi * (1 + kPi + kPi * kPi) + 0.5 * kPi, 1e-12);
}

TEST(EnergyL2, Examples) {
  EnergyParams ep;
  const Field f = corpus_field(kG, 4, 0), g = corpus_field(kG, 4, 1), w = f - g;
  EXPECT_EQ(energy_l2(f, f, ep, CoefficientSet::integrable()), 0.0);
  const double nf = norm_l2(f);
  const double expect = 0.5 * std::pow(norm_l2(w), 2) +
                        0.5 * std::pow(norm_hneg1(w), 2) * (1 + ep.C0 * nf * nf + ep.C0 * std::pow(nf, 4));
  EXPECT_NEAR(energy_l2(f, g, ep, CoefficientSet::linear()), expect, 1e-12 * expect);
}

TEST(BigConstant, TrivialCases) {
  const Field f = corpus_field(kG, 5, 0), g = corpus_field(kG, 5, 1);
  EXPECT_EQ(choose_big_constant(f, f, EnergyKind::Hs, 4.0, CoefficientSet::integrable()), 1.0);
  EXPECT_EQ(choose_big_constant(f, g, EnergyKind::Hs, 4.0, CoefficientSet::linear()), 1.0);
  EXPECT_EQ(choose_big_constant(f, g, EnergyKind::L2, 4.0, CoefficientSet::linear()), 1.0);
}

TEST(BigConstant, MinimalPowerOfTwo) {
  const auto c = CoefficientSet::integrable();
  const Field f = normalized(kG, 6, 0, 4.0, 1.0), g = Field(kG);
  const auto parts = energy_parts_hs(f, g, 4.0, c);
  const double cs = choose_big_constant(parts);
  EXPECT_GE(parts.sandwich_margin(cs), 0.0);
  EXPECT_EQ(std::log2(cs), std::floor(std::log2(cs)));
  if (cs > 1.0) EXPECT_LT(parts.sandwich_margin(cs / 2), 0.0);
}

TEST(BigConstant, CapExceededThrows) {
  EnergyParts parts;
  parts.p = 1.0;
  parts.q = 1e-30;
  parts.r = 0.0;
  parts.m.m1 = -10.0;  // no C up to 2^64 fixes this
  EXPECT_THROW(choose_big_constant(parts), NumericError);
}

TEST(BigConstant, StableUnderRefinement) {
  const auto c = CoefficientSet::integrable();
  for (int i = 0; i < 5; ++i) {
    const Field f64 = random_field(make_grid(64), 100 + i);
    const Field f128 = random_field(make_grid(128), 100 + i);
    const double k = 1.0 / norm_hs(f128, 4.0);
    const double c64 = choose_big_constant(k * f64, Field(make_grid(64)), EnergyKind::Hs, 4.0, c);
    const double c128 = choose_big_constant(k * f128, Field(make_grid(128)), EnergyKind::Hs, 4.0, c);
    EXPECT_LE(std::abs(std::log2(c64) - std::log2(c128)), 1.0) << i;
  }
}

TEST(Sandwich, HoldsOnRandomPairs) {
  const auto c = CoefficientSet::integrable();
  for (int i = 0; i < 200; ++i) {
    const Field f = corpus_field(kG, 7, 2 * i), g = corpus_field(kG, 7, 2 * i + 1);
    for (auto kind : {EnergyKind::Hs, EnergyKind::L2}) {
      const auto parts = kind == EnergyKind::Hs ? energy_parts_hs(f, g, 4.0, c) : energy_parts_l2(f, g, c);
      const double cc = choose_big_constant(parts);
      const double e = parts.energy(cc), mid = parts.mid(cc);
      EXPECT_LE(e, mid);
      EXPECT_LE(mid, 4 * e);
    }
  }
}

TEST(Sandwich, PartsMatchDefinition) {
  const auto c = CoefficientSet::integrable();
  const Field f = corpus_field(kG, 8, 0), g = corpus_field(kG, 8, 1), w = f - g;
  EnergyParams ep;
  ep.Cs = 4.0;
  const double nf = norm_l2(f), nw = norm_l2(w);
  const double expect = 0.5 * nw * nw * (1 + ep.Cs * nf * nf + ep.Cs * std::pow(nf, 4 * ep.s)) +
                        0.5 * std::pow(norm_l2(frac_d(w, ep.s)), 2) + corrections_hs(f, g, ep.s, c).sum();
  EXPECT_NEAR(energy_hs(f, g, ep, c), expect, 1e-12 * std::abs(expect));
  EXPECT_NEAR(energy_parts_hs(f, g, ep.s, c).energy(ep.Cs), expect, 1e-12 * std::abs(expect));
}

TEST(IFactor, Examples) {
  EXPECT_EQ(i_factor(Field(kG), Field(kG), 3.6), 1.0);
  EXPECT_NEAR(i_factor(kCos, Field(kG), 3.6), 1 + std::sqrt(kPi), 1e-14);
  const Field f = corpus_field(kG, 9, 0), g = corpus_field(kG, 9, 1);
  EXPECT_EQ(i_factor(f, g, 3.6), i_factor(g, f, 3.6));
}
