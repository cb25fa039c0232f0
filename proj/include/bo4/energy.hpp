#pragma once

// Modified energies with correction terms.
//
//   E_s(f,g) = ½‖w‖²(1 + Cs‖f‖² + Cs‖f‖^{4s}) + ½‖D^s w‖² + M1 + M2 + M3
//   E(f,g)   = ½‖w‖² + ½‖w‖²_{H^{-1}}(1 + C‖f‖² + C‖f‖⁴) + M1 + M2 + M3
//
// with w = f - g.  In E the correction terms use J in place of D^{-1}.

#include "bo4/equations.hpp"
#include "bo4/spectral.hpp"

namespace bo4 {

struct EnergyParams {
  double s = 4.0;
  double s0 = 3.6;
  double Cs = 1.0;
  double C0 = 1.0;

  void validate() const;  // s >= 1, s0 > 7/2, Cs > 0, C0 > 0
};

struct Lambdas {
  double l1 = 0, l2 = 0, l3 = 0, l4 = 0;

  // Coefficient (λ1 λ4 + 4 λ3) / 32 of the quartic correction.
  double m3_coefficient() const { return (l1 * l4 + 4.0 * l3) / 32.0; }
};

Lambdas lambdas(double s, const CoefficientSet& c);

struct Corrections {
  double m1 = 0, m2 = 0, m3 = 0;
  double sum() const { return m1 + m2 + m3; }
};

// M_s^{(1..3)}(f,g); throws ParameterError for s < 1.
Corrections corrections_hs(const Field& f, const Field& g, double s, const CoefficientSet& c);
// M^{(1..3)}(f,g) of the L² energy (λ_j(0), J instead of D^{-1}).
Corrections corrections_l2(const Field& f, const Field& g, const CoefficientSet& c);

// Both energies have the shape
//   E(C)   = ½(P + C·Q) + ½R + M
//   mid(C) = P + C·Q + R
// and the comparison bounds read E ≤ mid ≤ 4E.
struct EnergyParts {
  double p = 0, q = 0, r = 0;
  Corrections m;

  double energy(double c) const { return 0.5 * (p + c * q) + 0.5 * r + m.sum(); }
  double mid(double c) const { return p + c * q + r; }
  // min(mid - E, 4E - mid); non-negative iff the sandwich holds.
  double sandwich_margin(double c) const;
};

EnergyParts energy_parts_hs(const Field& f, const Field& g, double s, const CoefficientSet& c);
EnergyParts energy_parts_l2(const Field& f, const Field& g, const CoefficientSet& c);

double energy_hs(const Field& f, const Field& g, const EnergyParams& ep, const CoefficientSet& c);
double energy_l2(const Field& f, const Field& g, const EnergyParams& ep, const CoefficientSet& c);

enum class EnergyKind { Hs, L2 };

// Smallest power of two C >= 1 for which the sandwich holds on (f, g).
// Throws NumericError when 2^64 is not enough.
double choose_big_constant(const Field& f, const Field& g, EnergyKind kind, double s,
                           const CoefficientSet& c);
double choose_big_constant(const EnergyParts& parts);

// 1 + ‖f‖_{H^{s0}} + ‖g‖_{H^{s0}}
double i_factor(const Field& f, const Field& g, double s0);

}  // namespace bo4
