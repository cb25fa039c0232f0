#include <cmath>
#include <string>

#include "bo4/diagnostics.hpp"
#include "bo4/errors.hpp"

namespace bo4 {

std::string to_string(IdentityId id) {
  switch (id) {
    case IdentityId::HilbertQuartic: return "hilbert-quartic";
    case IdentityId::SecondOrder: return "second-order";
    case IdentityId::ThirdOrder: return "third-order";
    case IdentityId::HilbertSquare: return "hilbert-square";
  }
  return "?";
}

IdentityId identity_from_string(const std::string& name) {
  for (auto id : kAllIdentities) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown identity '" + name + "'");
}

double IdentityResidual::relative() const {
  const double diff = std::abs(lhs - rhs);
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

// [H, a] b = H(ab) - a Hb
Field hilbert_commutator(const Field& a, const Field& b) {
  return hilbert(product(a, b)) - product(a, hilbert(b));
}

// Each term is added with its Hölder bound; the bounds set the scale, so
// terms that vanish by symmetry still leave a meaningful denominator.
struct Accumulator {
  double value = 0.0;
  double scale = 0.0;
  void add(double coef, double term, double bound) {
    value += coef * term;
    scale += std::abs(coef) * bound;
  }
  // coef · ∫ a b c
  void tri(double coef, const Field& a, const Field& b, const Field& c) {
    add(coef, integral({a, b, c}), norm_lp(a, INFINITY) * norm_l2(b) * norm_l2(c));
  }
  // coef · ⟨a, b⟩
  void ip(double coef, const Field& a, const Field& b) { add(coef, inner(a, b), norm_l2(a) * norm_l2(b)); }
};

IdentityResidual hilbert_quartic(const Field& f, const Field& g, const Field& h) {
  // <H∂⁴f, gh> + <f H∂⁴g, h> + <fg, H∂⁴h>
  //   = -<[H,h]∂⁴f, g> - <[H,f]∂⁴h, g> + 4<∂³f Hg, ∂h> - 4<∂f H∂g, ∂²h> + 2<∂²f Hg, ∂²h>
  const Multiplier h4 = Multiplier::hilbert() * Multiplier::deriv(4);
  Accumulator l, r;
  l.tri(1.0, apply(f, h4), g, h);
  l.tri(1.0, g, f, apply(h, h4));
  l.tri(1.0, f, apply(g, h4), h);
  const Field hg = hilbert(g);
  r.ip(-1.0, hilbert_commutator(h, dx(f, 4)), g);
  r.ip(-1.0, hilbert_commutator(f, dx(h, 4)), g);
  r.tri(4.0, hg, dx(f, 3), dx(h));
  r.tri(-4.0, hilbert(dx(g)), dx(f), dx(h, 2));
  r.tri(2.0, hg, dx(f, 2), dx(h, 2));
  return {l.value, r.value, l.scale + r.scale};
}

IdentityResidual second_order(const Field& u, const Field& w, double s) {
  // <u D^s∂²w, D^s w> = ½<∂²u, (D^s w)²> - <u, (D^s∂w)²>
  const Field dsw = frac_d(w, s);
  const Field dsw1 = frac_d(dx(w), s);
  Accumulator l, r;
  l.tri(1.0, u, frac_d(dx(w, 2), s), dsw);
  r.tri(0.5, dx(u, 2), dsw, dsw);
  r.tri(-1.0, u, dsw1, dsw1);
  return {l.value, r.value, l.scale + r.scale};
}

IdentityResidual third_order(const Field& u, const Field& w, double s) {
  // <u D^s∂³w, D^s w> = -<∂u D^s∂²w, D^s w> + ½<∂u, (D^s∂w)²>
  const Field dsw = frac_d(w, s);
  const Field dsw1 = frac_d(dx(w), s);
  const Field ux = dx(u);
  Accumulator l, r;
  l.tri(1.0, u, frac_d(dx(w, 3), s), dsw);
  r.tri(-1.0, ux, frac_d(dx(w, 2), s), dsw);
  r.tri(0.5, ux, dsw1, dsw1);
  return {l.value, r.value, l.scale + r.scale};
}

IdentityResidual hilbert_square(const Field& u, const Field& w, double s) {
  // <u, (HD^s∂w)²> = <[H,∂u] HD^s∂w, D^s w> - <∂u D^s∂w, D^s w>
  //               + <[H,u] HD^s∂²w, D^s w> - ½<∂²u, (D^s w)²> + <u, (D^s∂w)²>
  const Field dsw = frac_d(w, s);
  const Field dsw1 = frac_d(dx(w), s);
  const Field hdsw1 = hilbert(dsw1);
  const Field ux = dx(u);
  Accumulator l, r;
  l.tri(1.0, u, hdsw1, hdsw1);
  r.ip(1.0, hilbert_commutator(ux, hdsw1), dsw);
  r.tri(-1.0, ux, dsw1, dsw);
  r.ip(1.0, hilbert_commutator(u, hilbert(frac_d(dx(w, 2), s))), dsw);
  r.tri(-0.5, dx(u, 2), dsw, dsw);
  r.tri(1.0, u, dsw1, dsw1);
  return {l.value, r.value, l.scale + r.scale};
}

}  // namespace

IdentityResidual identity_residual(IdentityId id, std::span<const Field> fields, double s) {
  const std::size_t need = id == IdentityId::HilbertQuartic ? 3 : 2;
  if (fields.size() != need) {
    throw ArityError("identity " + to_string(id) + " takes " + std::to_string(need) + " fields");
  }
  if (!(s >= 0.0)) throw ParameterError("identity: s must be >= 0");
  switch (id) {
    case IdentityId::HilbertQuartic: return hilbert_quartic(fields[0], fields[1], fields[2]);
    case IdentityId::SecondOrder: return second_order(fields[0], fields[1], s);
    case IdentityId::ThirdOrder: return third_order(fields[0], fields[1], s);
    case IdentityId::HilbertSquare: return hilbert_square(fields[0], fields[1], s);
  }
  throw ConfigError("unknown identity");
}

CheckReport check_identity(IdentityId id, std::span<const Field> fields, double s) {
  const auto res = identity_residual(id, fields, s);
  CheckReport r;
  r.name = "identity " + to_string(id);
  r.measured = res.relative();
  r.bound = kIdentityTolerance;
  r.passed = r.measured <= r.bound;
  r.details.columns = {"lhs", "rhs", "scale", "n", "s"};
  r.details.rows.push_back({res.lhs, res.rhs, res.scale, double(fields[0].size()), s});
  return r;
}

}  // namespace bo4
