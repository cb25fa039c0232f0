#include "bo4/equations.hpp"

#include <cmath>
#include <vector>

#include "bo4/errors.hpp"

namespace bo4 {

CoefficientSet CoefficientSet::integrable() {
  // c1 = 3, -c2 = c5 = c6 = c7 = -2, c3 = c4 = -1
  return {3.0, 2.0, -1.0, -1.0, -2.0, -2.0, -2.0, 1.0};
}

CoefficientSet CoefficientSet::linear() { return {0, 0, 0, 0, 0, 0, 0, 0}; }

CoefficientSet CoefficientSet::preset(const std::string& name) {
  if (name == "integrable") return integrable();
  if (name == "linear") return linear();
  throw ConfigError("unknown coefficient preset '" + name + "'");
}

bool CoefficientSet::all_finite() const {
  for (double c : {c1, c2, c3, c4, c5, c6, c7, c8}) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

CoefficientSet CoefficientSet::operator+(const CoefficientSet& o) const {
  return {c1 + o.c1, c2 + o.c2, c3 + o.c3, c4 + o.c4, c5 + o.c5, c6 + o.c6, c7 + o.c7, c8 + o.c8};
}

void SolverParams::validate() const {
  if (!coeffs.all_finite()) throw ParameterError("coefficients must be finite");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
  if (time_direction != 1 && time_direction != -1) {
    throw ParameterError("time_direction must be +1 or -1");
  }
}

namespace {

// Base fields of the nonlinearity sampled on the padded grid.
struct Lifted {
  std::vector<double> u, ux, uxx, hux, huxx;
};

Lifted lift_all(const PaddedGrid& pad, const Field& u) {
  return {pad.lift(u), pad.lift(dx(u, 1)), pad.lift(dx(u, 2)), pad.lift(hilbert(dx(u, 1))),
          pad.lift(hilbert(dx(u, 2)))};
}

// u·H(u ∂x u) on the padded grid.
std::vector<double> u_times_h_uux(const PaddedGrid& pad, const Lifted& l) {
  const std::size_t m = l.u.size();
  std::vector<double> tmp(m);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = l.u[j] * l.ux[j];
  auto h = pad.lift(hilbert(pad.project(tmp)));
  for (std::size_t j = 0; j < m; ++j) h[j] *= l.u[j];
  return h;
}

}  // namespace

FSplit split_F(const Field& u, const CoefficientSet& c) {
  const PaddedGrid pad(u.grid());
  const Lifted l = lift_all(pad, u);
  const std::size_t m = l.u.size();

  std::vector<double> direct(m), under_h(m);
  for (std::size_t j = 0; j < m; ++j) {
    direct[j] = c.c1 * l.u[j] * l.uxx[j] + c.c2 * l.ux[j] * l.ux[j] + c.c3 * l.hux[j] * l.hux[j];
    under_h[j] = c.c4 * l.u[j] * l.huxx[j];
  }
  Field f2 = pad.project(direct) + hilbert(pad.project(under_h));

  const auto uhu = u_times_h_uux(pad, l);
  for (std::size_t j = 0; j < m; ++j) {
    const double u2 = l.u[j] * l.u[j];
    direct[j] = c.c6 * uhu[j] + c.c7 * u2 * l.hux[j];
    under_h[j] = c.c5 * u2 * l.ux[j];
  }
  Field f3 = pad.project(direct) + hilbert(pad.project(under_h));

  for (std::size_t j = 0; j < m; ++j) {
    const double u2 = l.u[j] * l.u[j];
    direct[j] = -c.c8 * u2 * u2;
  }
  Field f4 = pad.project(direct);

  return {hilbert(dx(u, 3)), std::move(f2), std::move(f3), std::move(f4)};
}

Field nonlinearity_K(const Field& u, const CoefficientSet& c) {
  auto parts = split_F(u, c);
  return parts.f1 + parts.f2 + parts.f3 + parts.f4;
}

Field nonlinear_part(const Field& u, const CoefficientSet& c) {
  if (!u.is_finite()) throw NumericError("nonlinear_part: non-finite state");
  const bool quadratic = c.c1 != 0 || c.c2 != 0 || c.c3 != 0 || c.c4 != 0;
  const bool cubic = c.c5 != 0 || c.c6 != 0 || c.c7 != 0;
  if (!quadratic && !cubic && c.c8 == 0) return Field(u.grid());

  const PaddedGrid pad(u.grid());
  const Lifted l = lift_all(pad, u);
  const std::size_t m = l.u.size();
  std::vector<double> direct(m), under_h(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double u2 = l.u[j] * l.u[j];
    direct[j] = c.c1 * l.u[j] * l.uxx[j] + c.c2 * l.ux[j] * l.ux[j] +
                c.c3 * l.hux[j] * l.hux[j] + c.c7 * u2 * l.hux[j] - c.c8 * u2 * u2;
    under_h[j] = c.c4 * l.u[j] * l.huxx[j] + c.c5 * u2 * l.ux[j];
  }
  if (c.c6 != 0) {
    const auto uhu = u_times_h_uux(pad, l);
    for (std::size_t j = 0; j < m; ++j) direct[j] += c.c6 * uhu[j];
  }
  Field k = pad.project(direct);
  if (c.c4 != 0 || c.c5 != 0) k += hilbert(pad.project(under_h));
  return dx(k, 1);
}

Field rhs(const Field& u, const SolverParams& p) {
  p.validate();
  Field out = dx(nonlinearity_K(u, p.coeffs), 1);
  if (p.epsilon != 0.0) out -= (p.time_direction * p.epsilon) * dx(u, 4);
  return out;
}

}  // namespace bo4
