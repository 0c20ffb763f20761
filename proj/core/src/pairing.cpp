#include "dkpair/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dkpair/errors.hpp"

namespace dkpair {

namespace {

constexpr double kPi = std::numbers::pi;

int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

cplx top_trace(const AlgElement& a) {
  const unsigned full = static_cast<unsigned>(a.blades() - 1);
  cplx s = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p) s += a.block(p, full).trace();
  return s / static_cast<double>(a.points()) * ipow(mu(a.k()));
}

void check_axes(const CycleSpec& c, const TorusGrid& g) {
  if (static_cast<int>(c.axes.size()) != c.n)
    throw ShapeError("cycle " + c.name + " lists " + std::to_string(c.axes.size()) +
                     " derivations for dimension " + std::to_string(c.n));
  for (int a : c.axes)
    if (a < 0 || a >= g.dims())
      throw ShapeError("cycle " + c.name + " differentiates along missing axis " +
                       std::to_string(a));
}

double graded_to_integer_sign(int n) { return mu(n + 1) % 2 ? -1.0 : 1.0; }

TorsionValue real_torsion(cplx v, double modulus) {
  if (!(modulus > 0.0)) throw ValidationError("torsion modulus must be positive");
  TorsionValue t;
  t.value = v.real();
  t.modulus = modulus;
  t.imag_residual = std::abs(v.imag());
  if (t.imag_residual > 1e-8 * std::max(1.0, std::abs(v.real())))
    throw ValidationError("torsion pairing is not real (imaginary part " +
                          std::to_string(v.imag()) + ")");
  return t;
}

}  // namespace

CycleSpec ch0() { return {"ch0", 0, {}, std::pow(2.0, -1.5), 1, 1}; }
CycleSpec ch1(int axis) { return {"ch1", 1, {axis}, 0.5, 1, 1}; }
CycleSpec ch2(int axis1, int axis2) {
  return {"ch2", 2, {axis1, axis2}, std::pow(2.0, -3.5), 1, -1};
}

cplx top_trace_product(const AlgElement& a, const AlgElement& b) {
  if (!a.same_shape(b)) throw ShapeError("top_trace_product: shape mismatch");
  const unsigned full = static_cast<unsigned>(a.blades() - 1);
  cplx s = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p)
    for (unsigned S = 0; S <= full; ++S) {
      const auto A = a.block(p, S);
      const auto B = b.block(p, full ^ S);
      s += static_cast<double>(blade_sign(S, full ^ S)) * A.transpose().cwiseProduct(B).sum();
    }
  return s / static_cast<double>(a.points()) * ipow(mu(a.k()));
}

cplx character_sum(const AlgElement& X, const AlgElement& E, const std::vector<AlgElement>& D,
                   const AlgElement* left) {
  if (!X.same_shape(E)) throw ShapeError("character: x and base differ in shape");
  for (const auto& d : D)
    if (!d.same_shape(X)) throw ShapeError("character: derivative differs in shape");
  AlgElement Y0 = X - E;
  if (left) Y0 = (*left) * Y0;
  const int n = static_cast<int>(D.size());
  if (n == 0) return top_trace(Y0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cplx total = 0.0;
  do {
    AlgElement Y = Y0;
    for (int i = 0; i + 1 < n; ++i) Y = Y * D[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    total += static_cast<double>(permutation_sign(perm)) *
             top_trace_product(Y, D[static_cast<std::size_t>(perm.back())]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

PairingValue pair_raw(const CycleSpec& cycle, const AlgElement& x, const AlgElement& e) {
  check_axes(cycle, x.grid());
  std::vector<AlgElement> D;
  for (int a : cycle.axes) D.push_back(apply_derivation(x, a));
  const cplx v = std::pow(2.0, x.k() / 2.0) * cycle.norm_const * ipow(mu(cycle.n)) *
                 character_sum(x, e, D);
  return {v, cycle.name, x.k()};
}

PairingValue pair(const CycleSpec& cycle, const OsuElement& x, const BasePoint& e) {
  if (!x.body().same_shape(e.body())) throw ShapeError("pair: class and base point differ in shape");
  return pair_raw(cycle, x.body(), e.body());
}

AlgElement unitary_class(const AlgElement& U) {
  if (U.k() != 0) throw ShapeError("unitary_class expects a k = 0 field");
  const AlgElement Us = alg_star(U);
  AlgElement a = 0.5 * (U + Us);
  AlgElement b = cplx(0, -0.5) * (U - Us);
  return a.times_blade(2, 1u) + b.times_blade(2, 2u);
}

cplx winding_number(const AlgElement& U, int axis) {
  if (U.k() != 0) throw ShapeError("winding_number expects a k = 0 field");
  if (axis < 0 || axis >= U.grid().dims()) throw ShapeError("winding_number: axis out of range");
  const AlgElement one = AlgElement::identity(U.grid(), U.m(), 0);
  const AlgElement Us = alg_star(U);
  const double u = distance(Us * U, one);
  if (u > 1e-10) throw ValidationError("winding_number: input is not unitary (" + std::to_string(u) + ")");
  const AlgElement w = (Us - one) * apply_derivation(U, axis);
  const double L = U.grid().axis(axis).kind == AxisKind::Momentum ? 2 * kPi : 1.0;
  return L * trace(w)[0];
}

double chern_number(const AlgElement& p, int axis1, int axis2) {
  if (p.k() != 0) throw ShapeError("chern_number expects a k = 0 field");
  const double r1 = distance(p * p, p), r2 = distance(p, alg_star(p));
  if (r1 > 1e-10 || r2 > 1e-10)
    throw ValidationError("chern_number: input is not a projection field");
  const AlgElement d1 = apply_derivation(p, axis1), d2 = apply_derivation(p, axis2);
  const cplx t = trace(p * (d1 * d2 - d2 * d1))[0];
  return (2 * kPi * cplx(0, 1) * t).real();
}

namespace {

SelectionRule finish(SelectionRule r, int e1, int e2) {
  if (((e1 - e2) % 2 + 2) % 2 != 0) {
    r.may_pair = false;
    r.ray = Ray::Zero;
    r.reason = "the real-structure ray and the star ray intersect only in 0";
    return r;
  }
  r.may_pair = true;
  r.ray = ((e2 % 2 + 2) % 2) ? Ray::Imaginary : Ray::Real;
  r.reason = "no vanishing condition applies";
  return r;
}

}  // namespace

SelectionRule selection_rule(int n, int sign, int parity, CliffordSignature sig) {
  SelectionRule r;
  r.n = n;
  r.sign = sign;
  r.parity = parity;
  r.signature = sig;
  if ((sig.k() + n) % 2 == 0) {
    r.may_pair = false;
    r.ray = Ray::Zero;
    r.reason = "k + n is even on a trivially graded algebra";
    return r;
  }
  const int d = sig.r - sig.s;
  const int e1 = mu(d) + n * d + (parity == -1 ? 1 : 0);
  const int e2 = n + (sign == -1 ? 1 : 0);
  return finish(r, e1, e2);
}

SelectionRule selection_rule_degree(int n, int sign, int parity, int degree) {
  SelectionRule r;
  r.n = n;
  r.sign = sign;
  r.parity = parity;
  r.by_degree = true;
  r.degree = degree;
  const int lhs = (mu(1 - degree) + degree) % 2 ? -1 : 1;
  if (lhs != parity * sign) {
    r.may_pair = false;
    r.ray = Ray::Zero;
    r.reason = "(-1)^{mu(1-i)+i} differs from parity*sign";
    return r;
  }
  if ((n + degree) % 2 != 0) {
    r.may_pair = false;
    r.ray = Ray::Zero;
    r.reason = "n + i is odd";
    return r;
  }
  r.may_pair = true;
  const int e2 = n + (sign == -1 ? 1 : 0);
  r.ray = (e2 % 2) ? Ray::Imaginary : Ray::Real;
  r.reason = "no vanishing condition applies";
  return r;
}

cplx pimsner_constant(int n) {
  if (n < 0) throw ValidationError("pimsner_constant needs n >= 0");
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const int k = n / 2;
  const double b = binom(2 * k + 1, k);
  if (n % 2 == 0) return cplx(0, -kPi * (k + 1) / std::pow(2.0, 2 * k + 0.5) * b);
  return cplx(0, -std::pow(2.0, 2 * k + 1.5) / b);
}

PairingValue pair_suspended(const CycleSpec& cycle, const LoopElement& loop,
                            const AlgElement& base, SuspensionConvention conv) {
  if (!loop.periodic())
    throw ValidationError("pair_suspended: loop is not closed (residual " +
                          std::to_string(loop.closure_residual()) + ")");
  if (!base.same_shape(loop.start())) throw ShapeError("pair_suspended: base differs in shape");
  check_axes(cycle, base.grid());
  cplx total = 0.0;
  for (const auto& seg : loop.segments())
    for (const auto& nd : seg.nodes) {
      std::vector<AlgElement> D;
      for (int a : cycle.axes) D.push_back(apply_derivation(nd.value, a));
      D.push_back(nd.dt);
      total += nd.weight * character_sum(nd.value, base, D);
    }
  const int k = base.k();
  cplx v = std::pow(2.0, k / 2.0) * ipow(cycle.n) * 0.5 * cycle.norm_const * ipow(mu(cycle.n)) *
           total;
  if (conv == SuspensionConvention::IntegerDegree) v *= graded_to_integer_sign(cycle.n);
  return {v, cycle.name + "^S", k};
}

double TorsionValue::reduced() const {
  double r = std::fmod(value, modulus);
  if (r < 0) r += modulus;
  return r;
}

double TorsionValue::distance_to(double v) const {
  double d = std::fmod(value - v, modulus);
  if (d < 0) d += modulus;
  return std::min(d, modulus - d);
}

double TorsionValue::distance(const TorsionValue& o) const {
  if (std::abs(o.modulus - modulus) > 1e-14 * modulus)
    throw ValidationError("torsion values carry different moduli");
  return distance_to(o.value);
}

bool TorsionValue::has_order_two(double tol) const {
  TorsionValue d = *this;
  d.value *= 2.0;
  return d.is_zero(tol);
}

int TorsionValue::z2_class() const {
  const double q = std::nearbyint(2.0 * reduced() / modulus);
  return static_cast<int>(q) % 2;
}

double kane_mele_modulus() { return 1.0 / kPi; }

TorsionValue torsion_pairing_closed_form(const CycleSpec& cycle, const OsuElement& x,
                                         const BasePoint& e, const AlgElement& y,
                                         double modulus) {
  const AlgElement& xb = x.body();
  if (!xb.same_shape(e.body())) throw ShapeError("closed form: x and e differ in shape");
  check_axes(cycle, xb.grid());
  const PropertyYCheck yc = check_property_y(y, xb, e.body(), nullptr);
  if (!yc.ok(1e-10)) throw ValidationError("closed form: y fails property Y (" + yc.describe() + ")");
  const int k = xb.k();
  const AlgElement one = AlgElement::identity(xb.grid(), xb.m(), k);
  const AlgElement py = 0.5 * (one - cplx(0, 1) * y.lift(k));
  std::vector<AlgElement> D;
  for (int a : cycle.axes) D.push_back(apply_derivation(xb, a));
  const cplx v = ipow(cycle.n - 1 + mu_prime(k + 1)) * std::pow(2.0, k / 2.0) * cycle.norm_const *
                 ipow(mu(cycle.n)) * character_sum(xb, e.body(), D, &py);
  return real_torsion(v, modulus);
}

TorsionValue torsion_pairing_simple(const CycleSpec& cycle, const OsuElement& x,
                                    const BasePoint& e, const AlgElement& y, double modulus) {
  if (cycle.n % 2 != 0) throw ValidationError("the simplified torsion formula needs even n");
  const int k = x.body().k();
  const AlgElement yl = cplx(0, -1) * y.lift(k);
  const PropertyYCheck yc = check_property_y(y, x.body(), e.body(), nullptr);
  if (!yc.ok(1e-10)) throw ValidationError("simple form: y fails property Y (" + yc.describe() + ")");
  const cplx a = pair_raw(cycle, x.body(), e.body()).value;
  const cplx b = pair_raw(cycle, yl * x.body(), yl * e.body()).value;
  return real_torsion(ipow(cycle.n) * 0.5 * (a + b), modulus);
}

TorsionValue torsion_pairing_via_loop(const CycleSpec& cycle, const LoopElement& loop,
                                      const AlgElement& base, double modulus,
                                      SuspensionConvention conv) {
  const cplx v = pair_suspended(cycle, loop, base, conv).value / pimsner_constant(cycle.n);
  return real_torsion(v, modulus);
}

double spin_chern(const AlgElement& h1, double gap_tol) {
  return chern_number(positive_projection(h1, gap_tol));
}

}  // namespace dkpair
