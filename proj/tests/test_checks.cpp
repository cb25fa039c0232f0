#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <map>

#include "bo4/diagnostics.hpp"
#include "bo4/errors.hpp"
#include "oracles.hpp"

using namespace bo4;

namespace {

double abs_pow_ref(double x, double s) { return s == 0.0 ? 1.0 : std::pow(std::abs(x), s); }

// Brute-force bilinear convolution for P^(1): explicit sparse spectra, the
// symbol written out term by term.
std::map<int, std::complex<double>> p1_oracle(const std::vector<oracle::Mode>& f,
                                              const std::vector<oracle::Mode>& g, double s) {
  using C = std::complex<double>;
  const C I(0, 1);
  std::map<int, C> out;
  for (const auto& a : f) {
    for (const auto& b : g) {
      const double k = a.k, e = b.k, xi = k + e;
      const C m = abs_pow_ref(xi, s) * (I * xi) * std::pow(I * e, 2) -
                  abs_pow_ref(k, s) * (I * k) * std::pow(I * e, 2) - abs_pow_ref(e, s) * std::pow(I * e, 3) -
                  (s + 1) * (I * k) * abs_pow_ref(e, s) * std::pow(I * e, 2) -
                  s * (s + 1) / 2 * std::pow(I * k, 2) * abs_pow_ref(e, s) * (I * e);
      out[int(xi)] += a.c * b.c * m;
    }
  }
  return out;
}

}  // namespace

// --- corpus -------------------------------------------------------------

TEST(Corpus, DeterministicAndNested) {
  const Field a = random_field(make_grid(64), 42), b = random_field(make_grid(64), 42);
  EXPECT_EQ(norm_l2(a - b), 0.0);
  const Field big = random_field(make_grid(256), 42);
  for (int k = 0; k <= 31; ++k) EXPECT_EQ(a.coeff(k), big.coeff(k));
  const Field c0 = corpus_field(make_grid(64), 1, 0), c1 = corpus_field(make_grid(64), 1, 1);
  EXPECT_GT(norm_l2(c0 - c1), 0.0);
}

TEST(Corpus, SpectralEnvelope) {
  RandomFieldSpec spec;
  spec.decay = 2.5;
  spec.amplitude = 0.3;
  const Field f = random_field(make_grid(128), 9, spec);
  for (int k = 1; k <= 63; ++k) {
    EXPECT_NEAR(std::abs(f.coeff(k)), 0.3 * std::pow(1.0 + k * k, -1.25), 1e-15);
  }
}

// --- commutators --------------------------------------------------------

TEST(Commutators, ArityRules) {
  const Field f = corpus_field(make_grid(32), 0, 0);
  for (int k = 1; k <= 9; ++k) {
    if (commutator_arity(k) == 3) {
      EXPECT_THROW(commutator_residual(k, f, f, std::nullopt, 1.0), ArityError) << k;
      EXPECT_NO_THROW(commutator_residual(k, f, f, f, 1.0));
    } else {
      EXPECT_THROW(commutator_residual(k, f, f, f, 1.0), ArityError) << k;
      EXPECT_NO_THROW(commutator_residual(k, f, f, std::nullopt, 1.0));
    }
  }
  EXPECT_THROW(commutator_arity(10), ParameterError);
}

TEST(Commutators, P8WithConstantVanishes) {
  const TorusGrid g = make_grid(64);
  const Field c = Field::constant(g, 1.7), h = corpus_field(g, 3, 0);
  for (double s : {0.0, 2.0, 4.0}) {
    EXPECT_LE(norm_l2(commutator_residual(8, c, h, std::nullopt, s)), 1e-12 * norm_l2(frac_d(dx(h, 2), s)));
  }
}

TEST(Commutators, P1MatchesConvolutionOracle) {
  const TorusGrid g = make_grid(32);
  const Field f = Field::from_function(g, [](double x) { return std::cos(x); });
  const Field h = Field::from_function(g, [](double x) { return std::cos(2 * x); });
  for (double s : {0.0, 2.5}) {
    const Field p = commutator_residual(1, f, h, std::nullopt, s);
    const auto ref = p1_oracle(oracle::cosine_modes(1), oracle::cosine_modes(2), s);
    for (int xi = -15; xi <= 15; ++xi) {
      const auto it = ref.find(xi);
      const std::complex<double> want = it == ref.end() ? 0.0 : it->second;
      EXPECT_NEAR(std::abs(p.coeff(xi) - want), 0.0, 1e-11) << "s=" << s << " xi=" << xi;
    }
  }
}

TEST(Commutators, OrderReductionOnSmoothData) {
  // Residuals lose fewer derivatives than their individual terms.
  const TorusGrid g = make_grid(128);
  const Field f = corpus_field(g, 5, 2), h = corpus_field(g, 5, 5);
  const double s = 4.0;
  const Field full = frac_d(dx(product(f, dx(h, 2))), s);
  const Field res = commutator_residual(1, f, h, std::nullopt, s);
  EXPECT_LT(norm_l2(res), 0.5 * norm_l2(full));
}

TEST(Commutators, BoundsStableUnderRefinementSample) {
  for (int kind : {1, 5, 7, 9}) {
    for (double sv : {2.0, 4.0}) {
      CommutatorFitConfig cfg;
      cfg.kind = kind;
      cfg.s = sv;
      cfg.samples = 2;
      const auto r = commutator_bound_check(cfg);
      EXPECT_TRUE(r.passed) << r.name << " growth " << r.measured;
    }
  }
}

TEST(Commutators, FineCorpusContainsCoarse) {
  CommutatorFitConfig cfg;
  cfg.kind = 4;
  cfg.s = 3.0;
  cfg.samples = 2;
  const auto r = commutator_bound_check(cfg);
  const double cc = std::stod(r.notes.at(0).second), cf = std::stod(r.notes.at(1).second);
  EXPECT_GT(cc, 0.0);
  EXPECT_GE(cf, cc * (1.0 - 1e-9));
}

// For even integer s the residual is an exact Leibniz cancellation.
TEST(Commutators, EvenIntegerCancellationRecognised) {
  for (int kind : {1, 3}) {
    CommutatorFitConfig cfg;
    cfg.kind = kind;
    cfg.s = 2.0;
    cfg.samples = 2;
    const auto r = commutator_bound_check(cfg);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.notes.at(0).second, "0");
    EXPECT_EQ(r.notes.at(1).second, "0");
  }
  const TorusGrid g = make_grid(64);
  const Field f = corpus_field(g, 5, 0), h = corpus_field(g, 5, 1);
  EXPECT_LE(norm_l2(commutator_residual(1, f, h, std::nullopt, 2.0)), 1e-8 * norm_hs(f, 3) * norm_hs(h, 3));
  EXPECT_GT(norm_l2(commutator_residual(1, f, h, std::nullopt, 2.5)), 1e-3 * norm_hs(f, 3) * norm_hs(h, 3));
}

// P7 is formed on a doubled grid; refining the inputs must not change it.
TEST(Commutators, NestedHilbertUnaffectedByPadding) {
  const TorusGrid g = make_grid(64), g2 = make_grid(128);
  RandomFieldSpec spec;
  spec.max_mode = 31;
  for (int i = 0; i < 3; ++i) {
    const Field a = random_field(g, 10 + i, spec), b = random_field(g, 20 + i, spec), c = random_field(g, 30 + i, spec);
    const Field a2 = random_field(g2, 10 + i, spec), b2 = random_field(g2, 20 + i, spec), c2 = random_field(g2, 30 + i, spec);
    const Field p = commutator_residual(7, a, b, c, 1.5);
    const Field p2 = commutator_residual(7, a2, b2, c2, 1.5);
    for (int k = 0; k <= g.k_max(); ++k) {
      EXPECT_NEAR(std::abs(p.coeff(k) - p2.coeff(k)), 0.0, 1e-9 * norm_l2(p)) << k;
    }
  }
}

// --- identities ---------------------------------------------------------

TEST(Identities, CatalogOnRandomFields) {
  for (int n : {64, 128, 256}) {
    const TorusGrid g = make_grid(n);
    for (int i = 0; i < 4; ++i) {
      const Field a = corpus_field(g, 77, 3 * i), b = corpus_field(g, 77, 3 * i + 1),
                  c = corpus_field(g, 77, 3 * i + 2);
      for (auto id : kAllIdentities) {
        const std::vector<Field> fs = id == IdentityId::HilbertQuartic ? std::vector<Field>{a, b, c}
                                                               : std::vector<Field>{a, b};
        for (double s : {0.0, 1.0, 2.5, 4.0}) {
          const auto r = check_identity(id, fs, s);
          EXPECT_TRUE(r.passed) << r.name << " n=" << n << " s=" << s << " rel=" << r.measured;
        }
      }
    }
  }
}

TEST(Identities, HilbertQuarticWithConstant) {
  const TorusGrid g = make_grid(64);
  const std::vector<Field> fs = {Field::constant(g, 2.0), corpus_field(g, 1, 0), corpus_field(g, 1, 1)};
  const auto r = identity_residual(IdentityId::HilbertQuartic, fs);
  EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-12 * r.scale);
}

TEST(Identities, SecondOrderTrigExample) {
  const TorusGrid g = make_grid(32);
  const std::vector<Field> fs = {Field::from_function(g, [](double x) { return std::cos(x); }),
                                 Field::from_function(g, [](double x) { return std::cos(2 * x); })};
  const auto r = identity_residual(IdentityId::SecondOrder, fs, 1.0);
  EXPECT_LE(r.relative(), 1e-10);
}

TEST(Identities, NotVacuous) {
  // Both sides must be of the size of the terms, not trivially zero.
  const TorusGrid g = make_grid(64);
  const std::vector<Field> fs = {corpus_field(g, 4, 0), corpus_field(g, 4, 1)};
  for (auto id : {IdentityId::SecondOrder, IdentityId::ThirdOrder, IdentityId::HilbertSquare}) {
    const auto r = identity_residual(id, fs, 2.0);
    EXPECT_GT(std::abs(r.lhs), 1e-3 * r.scale) << to_string(id);
  }
}

TEST(Identities, ArityAndNames) {
  const TorusGrid g = make_grid(16);
  const std::vector<Field> two = {Field(g), Field(g)};
  EXPECT_THROW(identity_residual(IdentityId::HilbertQuartic, two), ArityError);
  EXPECT_EQ(identity_from_string("third-order"), IdentityId::ThirdOrder);
  EXPECT_THROW(identity_from_string("lem9"), ConfigError);
}

// --- symbols ------------------------------------------------------------

TEST(Symbols, Taylor2DiagonalIsZero) {
  for (double s : {0.0, 2.0, 3.7}) {
    for (long xi = -40; xi <= 40; ++xi) {
      const auto v = symbol_value(InequalityId::Taylor2, s, xi, xi);
      EXPECT_LE(v.lhs, 1e-12 * std::max(1.0, v.term_scale));
    }
  }
}

TEST(Symbols, Taylor2FitThenVerify) {
  SymbolScanSpec spec;
  spec.id = InequalityId::Taylor2;
  spec.s = 2.0;
  const auto r = symbol_scan(spec);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(std::isfinite(r.measured));
  EXPECT_EQ(r.status, "ok");
}

TEST(Symbols, LeibnizAtZeroIsTriangle) {
  for (long xi = -64; xi <= 64; ++xi) {
    for (long eta = -64; eta <= 64; ++eta) {
      const auto v = symbol_value(InequalityId::Leibniz, 0.0, xi, eta);
      if (v.rhs > 0) EXPECT_LE(v.lhs / v.rhs, 1.0 + 1e-15);
    }
  }
}

TEST(Symbols, ScanValidation) {
  SymbolScanSpec spec;
  spec.fit_radius = 8;
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.fit_radius = 64;
  spec.box = 200;
  EXPECT_THROW(spec.validate(), ParameterError);
  EXPECT_EQ(inequality_from_string("taylor1"), InequalityId::Taylor1);
}

TEST(Symbols, NoHardFailuresSmallBox) {
  for (auto id : {InequalityId::Taylor2, InequalityId::Leibniz, InequalityId::Taylor1}) {
    for (double s : {0.0, 1.0, 2.0, 2.5, 3.7}) {
      SymbolScanSpec spec;
      spec.id = id;
      spec.s = s;
      spec.fit_radius = 16;
      spec.box = 64;
      const auto r = symbol_scan(spec);
      EXPECT_NE(r.status, "hard_failure") << r.name;
    }
  }
}

// --- Gagliardo-Nirenberg ------------------------------------------------

TEST(GagliardoNirenberg, Examples) {
  const TorusGrid g = make_grid(64);
  const Field c = Field::from_function(g, [](double x) { return std::cos(x); });
  const auto r1 = gn_ratio(c, 1, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(r1.alpha, 1.0);
  EXPECT_NEAR(r1.ratio(), 1.0, 1e-12);

  const Field ck = Field::from_function(g, [](double x) { return std::cos(5 * x); });
  const auto r2 = gn_ratio(ck, 1, 2.0, 2.0);
  EXPECT_DOUBLE_EQ(r2.alpha, 0.5);
  EXPECT_NEAR(r2.lhs, 5 * std::sqrt(kPi), 1e-11);
  const auto r2s = gn_ratio(3.0 * ck, 1, 2.0, 2.0);
  EXPECT_NEAR(r2s.ratio(), r2.ratio(), 1e-13);

  const auto r3 = gn_ratio(Field::constant(g, 1.0), 0, INFINITY, 1.0);
  EXPECT_NEAR(r3.lhs, 1.0, 1e-14);
  EXPECT_NEAR(r3.bound, std::sqrt(kTwoPi), 1e-14);
  EXPECT_LT(r3.ratio(), 1.0);
}

TEST(GagliardoNirenberg, DomainErrors) {
  const Field f = corpus_field(make_grid(32), 0, 0);
  EXPECT_THROW(gn_ratio(f, 3, 2.0, 2.0), ParameterError);
  EXPECT_NO_THROW(gn_ratio(f, 1, 2.0, 1.0));
  EXPECT_THROW(gn_check(f, 1, 2.0, 1.0), ParameterError);
  EXPECT_THROW(gn_ratio(f, 0, 1.5, 2.0), ParameterError);
  EXPECT_THROW(gn_ratio(f, 0, 2.0, 0.5), ParameterError);
}

TEST(GagliardoNirenberg, FrozenConstantHoldsOnFreshCorpus) {
  // Different seed from the calibration sweep.
  const TorusGrid g = make_grid(128);
  for (int i = 0; i < 60; ++i) {
    const Field f = corpus_field(g, 31337, i);
    for (int l : {0, 1, 2})
      for (double p : {2.0, 4.0, double(INFINITY)})
        for (double s : {3.0, 4.0}) EXPECT_TRUE(gn_check(f, l, p, s).passed);
  }
  EXPECT_EQ(kGnConstant, 1.1);
}

// --- mollifier ----------------------------------------------------------

TEST(Mollifier, SlopeMatchesTailOracle) {
  // |f̂| = ⟨ξ⟩^{-s-1}, α = 1.  The H^{s-1} tail sums are evaluated
  // directly from the cutoff profile; the asymptotic slope is α + 1/2.
  const int n = 8192;
  const double s = 4.0, alpha = 1.0;
  const Field f = algebraic_field(make_grid(n), s + 1.0);
  const auto rep = mollifier_rate_check(f, s, alpha);
  std::vector<double> etas, errs;
  for (double eta : kMollifierEtas) {
    double acc = 0.0, acc0 = 0.0;
    for (int k = 1; k < n / 2; ++k) {
      const double x = eta * k;
      const double psi = x <= 1 ? 0.0 : x >= 2 ? 1.0 : [&] {
        const double t = x - 1;
        return t * t * t * (10 - 15 * t + 6 * t * t);
      }();
      const double amp = std::pow(1.0 + double(k) * k, -(s + 1) / 2);
      acc += 2 * psi * psi * amp * amp * std::pow(k, 2 * (s - alpha));
      acc0 += 2 * psi * psi * amp * amp;
    }
    etas.push_back(eta);
    errs.push_back(std::sqrt(kPi * (acc0 + acc)));  // 2^{-1/2}(2π Σ ...)^{1/2}
  }
  EXPECT_NEAR(rep.measured, loglog_slope(etas, errs), 1e-6);
  EXPECT_NEAR(rep.measured, alpha + 0.5, 0.1);
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(rep.details.rows[3][1], errs[3], 1e-9 * errs[3]);
}

TEST(Mollifier, AlphaZeroMonotoneAndContraction) {
  const Field f = algebraic_field(make_grid(8192), 4.6);
  const auto rep = mollifier_rate_check(f, 4.0, 0.0);
  for (const auto& note : rep.notes) EXPECT_EQ(note.second, "true") << note.first;
  for (std::size_t i = 1; i < rep.details.rows.size(); ++i) {
    EXPECT_LE(rep.details.rows[i][3], rep.details.rows[i - 1][3]);
  }
}

TEST(Mollifier, RejectsBadAlpha) {
  const Field f = algebraic_field(make_grid(64), 5.0);
  EXPECT_THROW(mollifier_rate_check(f, 2.0, 3.0), ParameterError);
}

TEST(Mollifier, LoglogSlopeExact) {
  const std::vector<double> x = {1, 2, 4, 8}, y = {3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  EXPECT_NEAR(loglog_slope(x, y), 0.5, 1e-14);
}

// --- operator algebra, conservation, finite differences -----------------

TEST(OperatorAlgebra, ThousandFields) {
  OperatorAlgebraConfig cfg;
  const auto reps = operator_algebra_checks(cfg);
  ASSERT_EQ(reps.size(), 6u);
  for (const auto& r : reps) EXPECT_TRUE(r.passed) << r.name << " " << r.measured;
}

TEST(Conservation, LinearRunsAndMassDrift) {
  const TorusGrid g = make_grid(64);
  SolverParams p;
  p.coeffs = CoefficientSet::linear();
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.sample_every = 10;
  const auto traj = evolve(corpus_field(g, 3, 0), p, cfg);
  const auto r = conservation_check(traj);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(std::stod(r.notes[0].second), 1e-9);
}

TEST(Conservation, H4DriftShrinksWithEpsilon) {
  const TorusGrid g = make_grid(64);
  const Field u0 = Field::from_function(g, [](double x) { return 0.05 * std::cos(x) + 0.02 * std::sin(3 * x); });
  std::vector<double> drifts;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    SolverParams p;
    p.coeffs = CoefficientSet::integrable();
    p.epsilon = eps;
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.sample_every = 50;
    const auto r = conservation_check(evolve(u0, p, cfg));
    EXPECT_TRUE(r.passed);
    drifts.push_back(std::stod(r.notes[0].second));
  }
  EXPECT_GT(drifts[0], drifts[1]);
  EXPECT_GT(drifts[1], drifts[2]);
}

TEST(FiniteDifference, FourthOrderCentered) {
  std::vector<double> t, q;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.05 * i);
    q.push_back(std::sin(0.05 * i));
  }
  const auto d = centered_derivative(t, q);
  ASSERT_EQ(d.size(), 37u);
  // error h⁴/30·f⁽⁵⁾; halving h must cut it by 16
  std::vector<double> t2, q2;
  for (int i = 0; i <= 80; ++i) {
    t2.push_back(0.025 * i);
    q2.push_back(std::sin(0.025 * i));
  }
  const auto d2 = centered_derivative(t2, q2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double e1 = std::abs(d[i].second - std::cos(d[i].first));
    EXPECT_LE(e1, std::pow(0.05, 4) / 30 * 1.001);
    const double e2 = std::abs(d2[2 * i + 2].second - std::cos(d2[2 * i + 2].first));
    ASSERT_DOUBLE_EQ(d2[2 * i + 2].first, d[i].first);
    if (e1 > 1e-9) EXPECT_NEAR(e1 / e2, 16.0, 0.5);
  }
}
