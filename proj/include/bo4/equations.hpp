#pragma once

// Nonlinearity of the fourth-order Benjamin-Ono type equation
//   ∂t u = ∂x K(u) - ε ∂x⁴ u,
//   K(u) = H∂x³u + c1 u∂x²u + c2 (∂x u)² + c3 (H∂x u)² + c4 H(u H∂x²u)
//        + c5 H(u²∂x u) + c6 u H(u∂x u) + c7 u² H∂x u - c8 u⁴.

#include <string>

#include "bo4/spectral.hpp"

namespace bo4 {

struct CoefficientSet {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0, c7 = 0.0;
  double c8 = 1.0;  // weight of the quartic term -u⁴

  // Third member of the Benjamin-Ono hierarchy.
  static CoefficientSet integrable();
  // Every coefficient zero: K(u) = H∂x³u.
  static CoefficientSet linear();
  // Throws ConfigError for an unknown name ("integrable", "linear").
  static CoefficientSet preset(const std::string& name);

  bool all_finite() const;
  CoefficientSet operator+(const CoefficientSet& o) const;
  bool operator==(const CoefficientSet&) const = default;
};

struct SolverParams {
  CoefficientSet coeffs;
  double epsilon = 0.0;    // viscosity, in [0, 1)
  int time_direction = 1;  // +1 forward, -1 backward (viscous sign flips)

  void validate() const;  // throws ParameterError
};

struct FSplit {
  Field f1, f2, f3, f4;
};

// F1 = H∂x³u, F2 (quadratic), F3 (cubic), F4 = -c8 u⁴; all products dealiased.
FSplit split_F(const Field& u, const CoefficientSet& c);
Field nonlinearity_K(const Field& u, const CoefficientSet& c);

// ∂x(F2 + F3 + F4): the part of ∂x K(u) not handled by the linear propagator.
Field nonlinear_part(const Field& u, const CoefficientSet& c);

// ∂x K(u) - time_direction·ε ∂x⁴u.
Field rhs(const Field& u, const SolverParams& p);

}  // namespace bo4
