#include "dkpair/kclass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dkpair/errors.hpp"
#include "dkpair/quadrature.hpp"
#include "parallel.hpp"

namespace dkpair {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

AlgElement rho_last(const TorusGrid& g, int m, int k_new) {
  return AlgElement::identity(g, m, 0).times_blade(k_new, 1u << (k_new - 1));
}

void require_scalar_only(const AlgElement& h, const char* what) {
  for (std::size_t p = 0; p < h.points(); ++p)
    for (unsigned S = 1; S < h.blades(); ++S)
      if (h.block(p, S).norm() != 0.0)
        throw ValidationError(std::string(what) + " must have no Clifford part");
}

}  // namespace

OsuResiduals osu_residuals(const AlgElement& x) {
  OsuResiduals r;
  r.odd = norm(x.even_part());
  r.self_adjoint = distance(x, alg_star(x));
  r.square = distance(x * x, AlgElement::identity(x.grid(), x.m(), x.k()));
  return r;
}

OsuElement osu_validate(const AlgElement& x, double tol) {
  const OsuResiduals r = osu_residuals(x);
  std::string fail;
  if (r.odd > tol) fail += " not odd (even part " + fmt(r.odd) + ");";
  if (r.self_adjoint > tol) fail += " not self-adjoint (" + fmt(r.self_adjoint) + ");";
  if (r.square > tol) fail += " square is not 1 (" + fmt(r.square) + ");";
  if (!fail.empty()) throw ValidationError("OSU validation failed:" + fail);
  return OsuElement(x, tol);
}

BasePoint BasePoint::standard_rho(const TorusGrid& g, int m, double sign) {
  if (sign != 1.0 && sign != -1.0) throw ValidationError("base point sign must be +1 or -1");
  return {osu_validate(sign * rho_last(g, m, 1)), BaseFlavor::StandardRho};
}

BasePoint BasePoint::sigma_x(const TorusGrid& g, int m) {
  return {osu_validate(AlgElement::identity(g, m, 0).times_blade(2, 1u)), BaseFlavor::SigmaX};
}

BasePoint BasePoint::custom(const AlgElement& e, double tol) {
  OsuElement o = osu_validate(e, tol);
  const double v = variation(e);
  if (v > tol)
    throw ValidationError("base point is not constant over the grid (variation " + fmt(v) + ")");
  return {std::move(o), BaseFlavor::Custom};
}

AlgElement flatten(const AlgElement& h, double gap_tol) {
  require_scalar_only(h, "flatten input");
  const std::size_t P = h.points();
  const int m = h.m();
  AlgElement out(h.grid(), m, h.k());
  std::vector<double> gap(P), herm(P), resid(P);
  DKPAIR_PARALLEL_FOR
  for (std::size_t p = 0; p < P; ++p) {
    const Mat a = h.block(p, 0);
    const double scale = std::max(1.0, a.norm());
    herm[p] = (a - a.adjoint()).norm() / scale;
    const Mat hs = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(hs);
    const auto& lam = es.eigenvalues();
    const Mat& V = es.eigenvectors();
    gap[p] = lam.cwiseAbs().minCoeff();
    resid[p] = (hs * V - V * lam.asDiagonal()).norm() / std::max(1.0, hs.norm());
    Eigen::VectorXd sg = lam.unaryExpr([](double l) { return l >= 0.0 ? 1.0 : -1.0; });
    out.block(p, 0) = V * sg.asDiagonal() * V.adjoint();
  }
  for (std::size_t p = 0; p < P; ++p) {
    if (herm[p] > 1e-10)
      throw ValidationError("flatten input is not Hermitian at grid point " + std::to_string(p) +
                            " (residual " + fmt(herm[p]) + ")");
    if (resid[p] > 1e-11)
      throw ConvergenceError("eigensolver residual " + fmt(resid[p]) + " at grid point " +
                             std::to_string(p));
  }
  const auto it = std::min_element(gap.begin(), gap.end());
  if (*it < gap_tol) {
    const auto p = static_cast<std::size_t>(it - gap.begin());
    throw GapClosedError("spectral gap closes at grid point " + std::to_string(p) +
                             " (smallest |eigenvalue| " + fmt(*it) + ")",
                         p, *it);
  }
  return out;
}

AlgElement positive_projection(const AlgElement& h, double gap_tol) {
  AlgElement s = flatten(h, gap_tol);
  s += AlgElement::identity(h.grid(), h.m(), h.k());
  s *= 0.5;
  return s;
}

OsuElement make_osu_from_hamiltonian(const AlgElement& h, int k_target, double gap_tol) {
  if (h.k() != 0) throw ShapeError("Hamiltonian must be given with k = 0");
  if (k_target < 1 || k_target > kMaxGenerators) throw ShapeError("k_target out of range");
  return osu_validate(flatten(h, gap_tol).times_blade(k_target, 1u << (k_target - 1)));
}

LoopElement::LoopElement(std::vector<LoopSegment> segments, double tol)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("loop has no segments");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.t1 > s.t0)) throw ValidationError("loop segment with empty time interval");
    if (!s.start.same_shape(s.end)) throw ShapeError("loop segment endpoints differ in shape");
    for (const auto& nd : s.nodes)
      if (!nd.value.same_shape(s.start) || !nd.dt.same_shape(s.start))
        throw ShapeError("loop node differs in shape from its segment");
    if (i > 0) {
      const auto& prev = segments_[i - 1];
      if (std::abs(prev.t1 - s.t0) > 1e-14) throw ValidationError("loop segments are not adjacent");
      if (!prev.end.same_shape(s.start)) throw ShapeError("loop segments differ in shape");
      const double jump = distance(prev.end, s.start);
      if (jump > tol)
        throw ValidationError("loop is discontinuous at t=" + std::to_string(s.t0) + " (jump " +
                              fmt(jump) + ")");
    }
  }
  closure_ = distance(segments_.front().start, segments_.back().end);
  periodic_ = closure_ <= tol && std::abs(segments_.front().t0 - 0.0) < 1e-14 &&
              std::abs(segments_.back().t1 - 1.0) < 1e-14;
}

std::size_t LoopElement::node_count() const {
  std::size_t n = 0;
  for (const auto& s : segments_) n += s.nodes.size();
  return n;
}

OsuResiduals LoopElement::osu_residuals() const {
  OsuResiduals r;
  for (const auto& seg : segments_) {
    auto upd = [&](const AlgElement& a) {
      const OsuResiduals q = dkpair::osu_residuals(a);
      r.odd = std::max(r.odd, q.odd);
      r.self_adjoint = std::max(r.self_adjoint, q.self_adjoint);
      r.square = std::max(r.square, q.square);
    };
    upd(seg.start);
    upd(seg.end);
    for (const auto& nd : seg.nodes) upd(nd.value);
  }
  return r;
}

LoopSegment uniform_segment(double t0, double t1, std::vector<AlgElement> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 5 || n % 2 == 0)
    throw ValidationError("uniform segment needs an odd number (>= 5) of samples");
  const double h = (t1 - t0) / (n - 1);
  LoopSegment seg;
  seg.t0 = t0;
  seg.t1 = t1;
  seg.start = samples.front();
  seg.end = samples.back();
  // Fourth-order stencils: central in the interior, one-sided near the ends.
  auto diff = [&](int i) {
    auto comb = [&](std::initializer_list<std::pair<int, double>> c, double denom) {
      AlgElement r(samples[0].grid(), samples[0].m(), samples[0].k());
      for (const auto& [j, w] : c) r += w * samples[static_cast<std::size_t>(j)];
      r *= 1.0 / (denom * h);
      return r;
    };
    if (i >= 2 && i <= n - 3)
      return comb({{i - 2, 1.0}, {i - 1, -8.0}, {i + 1, 8.0}, {i + 2, -1.0}}, 12.0);
    if (i == 0) return comb({{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}}, 12.0);
    if (i == 1) return comb({{0, -3.0}, {1, -10.0}, {2, 18.0}, {3, -6.0}, {4, 1.0}}, 12.0);
    const int l = n - 1;
    if (i == l) return comb({{l, 25.0}, {l - 1, -48.0}, {l - 2, 36.0}, {l - 3, -16.0}, {l - 4, 3.0}}, 12.0);
    return comb({{l, 3.0}, {l - 1, 10.0}, {l - 2, -18.0}, {l - 3, 6.0}, {l - 4, -1.0}}, 12.0);
  };
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    seg.nodes.push_back({t0 + i * h, w * h / 3.0, samples[static_cast<std::size_t>(i)], diff(i)});
  }
  return seg;
}

int default_loop_nodes(const TorusGrid& g) {
  int n = 0;
  for (const auto& ax : g.axes())
    if (ax.kind == AxisKind::Momentum) n = std::max(n, ax.size);
  return std::max(32, 4 * n);
}

LoopElement bott_loop(const OsuElement& x, const BasePoint& e, int nodes) {
  const AlgElement& xb = x.body();
  if (!xb.same_shape(e.body())) throw ShapeError("bott_loop: x and e differ in shape");
  const int k = xb.k() + 1;
  if (k > kMaxGenerators) throw ShapeError("bott_loop: no generator left for rho");
  const AlgElement rho = rho_last(xb.grid(), xb.m(), k);
  const AlgElement one = AlgElement::identity(xb.grid(), xb.m(), k);
  const AlgElement xr = xb.lift(k) * rho;
  const AlgElement er = e.body().lift(k) * rho;
  auto eval = [&](double t, AlgElement* dt) {
    const double c = std::cos(kPi * t / 2), s = std::sin(kPi * t / 2);
    const double cd = -kPi / 2 * s, sd = kPi / 2 * c;
    const AlgElement nx = c * one + s * xr, nxi = c * one - s * xr;
    const AlgElement ne = c * one + s * er, nei = c * one - s * er;
    const AlgElement l = nx * nei, r = ne * nxi;
    if (dt) {
      const AlgElement dnx = cd * one + sd * xr, dnxi = cd * one - sd * xr;
      const AlgElement dne = cd * one + sd * er, dnei = cd * one - sd * er;
      const AlgElement dl = dnx * nei + nx * dnei, dr = dne * nxi + ne * dnxi;
      *dt = dl * rho * r + l * rho * dr;
    }
    return l * rho * r;
  };
  LoopSegment seg;
  seg.t0 = 0.0;
  seg.t1 = 1.0;
  seg.start = eval(0.0, nullptr);
  seg.end = eval(1.0, nullptr);
  for (const auto& q : gauss_legendre(nodes, 0.0, 1.0)) {
    AlgElement d;
    AlgElement v = eval(q.t, &d);
    seg.nodes.push_back({q.t, q.w, std::move(v), std::move(d)});
  }
  return LoopElement({std::move(seg)});
}

LoopElement simplified_bott_loop(const OsuElement& x, const BasePoint& e, int nodes) {
  const AlgElement& xb = x.body();
  if (!xb.same_shape(e.body())) throw ShapeError("simplified_bott_loop: x and e differ in shape");
  const int k = xb.k() + 1;
  if (k > kMaxGenerators) throw ShapeError("simplified_bott_loop: no generator left for rho");
  const AlgElement h = xb * e.body();
  const AlgElement one0 = AlgElement::identity(xb.grid(), xb.m(), xb.k());
  const double hc = distance(h * e.body(), e.body() * h);
  const double hs = distance(h, alg_star(h));
  if (hc > 1e-10 || hs > 1e-10)
    throw ValidationError("simplified_bott_loop needs xe self-adjoint and commuting with e "
                          "(residuals " + fmt(hs) + ", " + fmt(hc) + ")");
  const AlgElement pp = (0.5 * (one0 - h)).lift(k);
  const AlgElement ea = e.body().lift(k);
  const AlgElement rho = rho_last(xb.grid(), xb.m(), k);
  const AlgElement pe = pp * ea, pr = pp * rho;
  // cos(-2 pi t p) = 1 + (cos 2 pi t - 1) p, sin(-2 pi t p) = -sin(2 pi t) p.
  auto eval = [&](double t, AlgElement* dt) {
    const double c = std::cos(2 * kPi * t), s = std::sin(2 * kPi * t);
    if (dt) *dt = (-2 * kPi * s) * pe + (2 * kPi * c) * pr;
    return ea + (c - 1.0) * pe + s * pr;
  };
  LoopSegment seg;
  seg.t0 = 0.0;
  seg.t1 = 1.0;
  seg.start = eval(0.0, nullptr);
  seg.end = eval(1.0, nullptr);
  for (const auto& q : gauss_legendre(nodes, 0.0, 1.0)) {
    AlgElement d;
    AlgElement v = eval(q.t, &d);
    seg.nodes.push_back({q.t, q.w, std::move(v), std::move(d)});
  }
  return LoopElement({std::move(seg)});
}

bool PropertyYCheck::ok(double tol) const {
  return even <= tol && anti_self_adjoint <= tol && unitary <= tol && commutes_x <= tol &&
         commutes_e <= tol && derivation <= tol && real <= tol;
}

std::string PropertyYCheck::describe() const {
  std::ostringstream os;
  os << "even " << fmt(even) << ", y*+y " << fmt(anti_self_adjoint) << ", unitary "
     << fmt(unitary) << ", [y,x] " << fmt(commutes_x) << ", [y,e] " << fmt(commutes_e)
     << ", dy " << fmt(derivation) << ", real " << fmt(real);
  return os.str();
}

PropertyYCheck check_property_y(const AlgElement& y, const AlgElement& x, const AlgElement& e,
                                const RealStructureSpec* rs) {
  if (y.k() != 0 || y.m() != x.m() || !(y.grid() == x.grid()))
    throw ShapeError("y must be a k = 0 field on the grid of x with the same matrix size");
  PropertyYCheck c;
  const AlgElement yl = y.lift(x.k());
  c.even = norm(yl.odd_part());
  c.anti_self_adjoint = norm(y + alg_star(y));
  c.unitary = distance(y * alg_star(y), AlgElement::identity(y.grid(), y.m(), 0));
  c.commutes_x = distance(yl * x, x * yl);
  c.commutes_e = distance(yl * e, e * yl);
  c.derivation = variation(y);
  if (rs) {
    RealStructureSpec r0 = *rs;
    r0.clifford = {0, 0};
    r0.appended = 0;
    r0.appended_negated = 0;
    c.real = distance(apply_real_structure(r0, y), y);
  }
  return c;
}

LoopElement torsion_loop(const OsuElement& x, const BasePoint& e, const AlgElement& y,
                         int nodes_per_segment, const RealStructureSpec* rs, double tol) {
  const AlgElement& xb = x.body();
  if (!xb.same_shape(e.body())) throw ShapeError("torsion_loop: x and e differ in shape");
  const int k = xb.k() + 1;
  if (k > kMaxGenerators) throw ShapeError("torsion_loop: no generator left for rho");
  const PropertyYCheck yc = check_property_y(y, xb, e.body(), rs);
  if (!yc.ok(tol)) throw ValidationError("torsion_loop: y fails property Y (" + yc.describe() + ")");
  const AlgElement rho = rho_last(xb.grid(), xb.m(), k);
  const std::array<AlgElement, 5> a{e.body().lift(k), rho, xb.lift(k),
                                    cplx(0, 1) * (y.lift(k) * rho), e.body().lift(k)};
  for (int i = 0; i < 4; ++i) {
    const double ac = norm(a[i] * a[i + 1] + a[i + 1] * a[i]);
    if (ac > tol)
      throw ValidationError("torsion_loop: a_" + std::to_string(i) + " and a_" +
                            std::to_string(i + 1) + " do not anticommute (" + fmt(ac) + ")");
  }
  const auto q = gauss_legendre(nodes_per_segment, 0.0, 1.0);
  std::vector<LoopSegment> segs;
  for (int i = 0; i < 4; ++i) {
    LoopSegment seg;
    seg.t0 = i / 4.0;
    seg.t1 = (i + 1) / 4.0;
    seg.start = a[i];
    seg.end = a[i + 1];
    for (const auto& nd : q) {
      const double c = std::cos(kPi * nd.t / 2), s = std::sin(kPi * nd.t / 2);
      seg.nodes.push_back({seg.t0 + nd.t / 4.0, nd.w / 4.0, c * a[i] + s * a[i + 1],
                           (4.0 * kPi / 2) * (-s * a[i] + c * a[i + 1])});
    }
    segs.push_back(std::move(seg));
  }
  LoopElement loop(std::move(segs));
  const OsuResiduals r = loop.osu_residuals();
  if (std::max({r.odd, r.self_adjoint, r.square}) > tol)
    throw ValidationError("torsion_loop samples are not OSUs");
  if (rs) {
    const LoopSymmetry sym = torsion_loop_symmetry(loop, *rs);
    if (sym.first_half > tol || sym.second_half > tol)
      throw ValidationError("torsion_loop violates the half-loop symmetry (" +
                            fmt(sym.first_half) + ", " + fmt(sym.second_half) + ")");
  }
  return loop;
}

LoopSymmetry torsion_loop_symmetry(const LoopElement& loop, const RealStructureSpec& rs) {
  const RealStructureSpec fixed = rs.with_generator(false);
  const RealStructureSpec negated = rs.with_generator(true);
  LoopSymmetry out;
  for (const auto& seg : loop.segments()) {
    const bool first = seg.t1 <= 0.5 + 1e-14;
    const RealStructureSpec& r = first ? fixed : negated;
    double& slot = first ? out.first_half : out.second_half;
    auto upd = [&](const AlgElement& v) { slot = std::max(slot, distance(apply_real_structure(r, v), v)); };
    upd(seg.start);
    upd(seg.end);
    for (const auto& nd : seg.nodes) upd(nd.value);
  }
  return out;
}

}  // namespace dkpair
