#include "dkpair/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "dkpair/errors.hpp"
#include "parallel.hpp"

namespace dkpair {

TorusGrid::TorusGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.size() > 3) throw ShapeError("torus dimension must be at most 3");
  strides_.assign(axes_.size(), 1);
  points_ = 1;
  for (int a = dims() - 1; a >= 0; --a) {
    const int n = axes_[static_cast<std::size_t>(a)].size;
    if (n < 4 || n % 2 != 0)
      throw ShapeError("grid axis " + std::to_string(a) + " has size " + std::to_string(n) +
                       "; sizes must be even and at least 4");
    strides_[static_cast<std::size_t>(a)] = points_;
    points_ *= static_cast<std::size_t>(n);
  }
}

TorusGrid TorusGrid::momentum(int d, int n) {
  return TorusGrid(std::vector<GridAxis>(static_cast<std::size_t>(d), {n, AxisKind::Momentum}));
}

int TorusGrid::index(std::size_t p, int a) const {
  return static_cast<int>((p / stride(a)) % static_cast<std::size_t>(axis(a).size));
}

double TorusGrid::coordinate(int a, int i) const {
  const double u = static_cast<double>(i) / axis(a).size;
  return axis(a).kind == AxisKind::Momentum ? 2.0 * std::numbers::pi * u : u;
}

std::vector<double> TorusGrid::coordinates(std::size_t p) const {
  std::vector<double> c(axes_.size());
  for (int a = 0; a < dims(); ++a) c[static_cast<std::size_t>(a)] = coordinate(a, index(p, a));
  return c;
}

std::size_t TorusGrid::flipped(std::size_t p, unsigned axis_mask) const {
  std::size_t q = 0;
  for (int a = 0; a < dims(); ++a) {
    const int n = axis(a).size;
    int i = index(p, a);
    if (axis_mask & (1u << a)) i = (n - i) % n;
    q += static_cast<std::size_t>(i) * stride(a);
  }
  return q;
}

TorusGrid TorusGrid::refined(int factor) const {
  auto axes = axes_;
  for (auto& ax : axes) ax.size *= factor;
  return TorusGrid(axes);
}

AlgElement::AlgElement(TorusGrid grid, int m, int k) : grid_(std::move(grid)), m_(m), k_(k) {
  if (m < 1) throw ShapeError("matrix size must be positive");
  if (k < 0 || k > kMaxGenerators) throw ShapeError("Clifford generator count out of range");
  data_.assign(grid_.points() * point_size(), cplx{});
}

AlgElement AlgElement::identity(const TorusGrid& g, int m, int k) {
  return constant(g, k, 0, Mat::Identity(m, m));
}

AlgElement AlgElement::constant(const TorusGrid& g, int k, unsigned S, const Mat& M) {
  if (M.rows() != M.cols()) throw ShapeError("constant block must be square");
  AlgElement a(g, static_cast<int>(M.rows()), k);
  if (S >= a.blades()) throw ShapeError("blade mask outside Cl_k");
  for (std::size_t p = 0; p < a.points(); ++p) a.block(p, S) = M;
  return a;
}

AlgElement AlgElement::field(const TorusGrid& g, int m,
                             const std::function<Mat(const std::vector<double>&)>& f) {
  AlgElement a(g, m, 0);
  for (std::size_t p = 0; p < a.points(); ++p) {
    const Mat v = f(g.coordinates(p));
    if (v.rows() != m || v.cols() != m) throw ShapeError("field returned a block of wrong size");
    a.block(p, 0) = v;
  }
  return a;
}

AlgElement AlgElement::component(unsigned S) const {
  if (S >= blades()) throw ShapeError("blade mask outside Cl_k");
  AlgElement r(grid_, m_, 0);
  for (std::size_t p = 0; p < points(); ++p) r.block(p, 0) = block(p, S);
  return r;
}

AlgElement AlgElement::lift(int k_new) const {
  if (k_new < k_) throw ShapeError("lift cannot remove generators");
  AlgElement r(grid_, m_, k_new);
  for (std::size_t p = 0; p < points(); ++p)
    for (unsigned S = 0; S < blades(); ++S) r.block(p, S) = block(p, S);
  return r;
}

AlgElement AlgElement::times_blade(int k_new, unsigned S) const {
  if (k_ != 0) throw ShapeError("times_blade expects a pure matrix field");
  AlgElement r(grid_, m_, k_new);
  if (S >= r.blades()) throw ShapeError("blade mask outside Cl_k");
  for (std::size_t p = 0; p < points(); ++p) r.block(p, S) = block(p, 0);
  return r;
}

AlgElement AlgElement::even_part() const {
  AlgElement r = *this;
  for (std::size_t p = 0; p < points(); ++p)
    for (unsigned S = 0; S < blades(); ++S)
      if (popcount(S) & 1) r.block(p, S).setZero();
  return r;
}

AlgElement AlgElement::odd_part() const { return *this - even_part(); }

static void require_shape(const AlgElement& a, const AlgElement& b, const char* op) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(op) + ": operands differ in grid, matrix size or k (m=" +
                     std::to_string(a.m()) + "/" + std::to_string(b.m()) +
                     ", k=" + std::to_string(a.k()) + "/" + std::to_string(b.k()) + ")");
}

AlgElement& AlgElement::operator+=(const AlgElement& o) {
  require_shape(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
  require_shape(*this, o, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

AlgElement& AlgElement::operator*=(cplx z) {
  for (auto& v : data_) v *= z;
  return *this;
}

AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
AlgElement operator-(AlgElement a) { return a *= -1.0; }
AlgElement operator*(AlgElement a, cplx z) { return a *= z; }
AlgElement operator*(cplx z, AlgElement a) { return a *= z; }
AlgElement operator*(const AlgElement& a, const AlgElement& b) { return alg_mul(a, b); }

AlgElement alg_mul(const AlgElement& a, const AlgElement& b) {
  require_shape(a, b, "multiply");
  AlgElement r(a.grid(), a.m(), a.k());
  const unsigned nb = static_cast<unsigned>(a.blades());
  const long np = static_cast<long>(a.points());
  DKPAIR_PARALLEL_FOR
  for (long pl = 0; pl < np; ++pl) {
    const auto p = static_cast<std::size_t>(pl);
    for (unsigned S = 0; S < nb; ++S) {
      const auto A = a.block(p, S);
      if (A.isZero(0.0)) continue;
      for (unsigned T = 0; T < nb; ++T) {
        const auto B = b.block(p, T);
        if (B.isZero(0.0)) continue;
        if (blade_sign(S, T) > 0)
          r.block(p, S ^ T).noalias() += A * B;
        else
          r.block(p, S ^ T).noalias() -= A * B;
      }
    }
  }
  return r;
}

AlgElement alg_star(const AlgElement& a) {
  AlgElement r(a.grid(), a.m(), a.k());
  for (std::size_t p = 0; p < a.points(); ++p)
    for (unsigned S = 0; S < a.blades(); ++S) {
      const double sign = (mu(popcount(S)) & 1) ? -1.0 : 1.0;
      r.block(p, S) = sign * a.block(p, S).adjoint();
    }
  return r;
}

AlgElement apply_derivation(const AlgElement& a, int axis) {
  const TorusGrid& g = a.grid();
  if (axis < 0 || axis >= g.dims())
    throw ShapeError("derivation axis " + std::to_string(axis) + " out of range");
  const int n = g.axis(axis).size;
  const std::size_t st = g.stride(axis);
  const std::size_t ps = a.point_size();
  const double scale = g.axis(axis).kind == AxisKind::Momentum ? 1.0 : 2.0 * std::numbers::pi;
  std::vector<cplx> mult(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int mode = j < n / 2 ? j : (j == n / 2 ? 0 : j - n);
    mult[static_cast<std::size_t>(j)] = cplx(0.0, scale * mode);
  }

  std::vector<std::size_t> starts;
  for (std::size_t p = 0; p < g.points(); ++p)
    if (g.index(p, axis) == 0) starts.push_back(p);

  AlgElement r(g, a.m(), a.k());
  const long nl = static_cast<long>(starts.size());
  DKPAIR_PARALLEL_FOR
  for (long li = 0; li < nl; ++li) {
    Eigen::FFT<double> fft;
    std::vector<cplx> line(static_cast<std::size_t>(n)), spec(static_cast<std::size_t>(n));
    const std::size_t p0 = starts[static_cast<std::size_t>(li)];
    for (std::size_t e = 0; e < ps; ++e) {
      bool zero = true;
      for (int j = 0; j < n; ++j) {
        line[static_cast<std::size_t>(j)] = a.raw()[(p0 + j * st) * ps + e];
        zero = zero && line[static_cast<std::size_t>(j)] == cplx{};
      }
      if (zero) continue;
      fft.fwd(spec, line);
      for (int j = 0; j < n; ++j) spec[static_cast<std::size_t>(j)] *= mult[static_cast<std::size_t>(j)];
      fft.inv(line, spec);
      for (int j = 0; j < n; ++j) r.raw()[(p0 + j * st) * ps + e] = line[static_cast<std::size_t>(j)];
    }
  }
  return r;
}

Multivector trace(const AlgElement& a) {
  Multivector t(a.k());
  for (unsigned S = 0; S < a.blades(); ++S) {
    cplx s{};
    for (std::size_t p = 0; p < a.points(); ++p) s += a.block(p, S).trace();
    t[S] = s / static_cast<double>(a.points());
  }
  return t;
}

double norm(const AlgElement& a) {
  double best = 0.0;
  for (std::size_t p = 0; p < a.points(); ++p)
    for (unsigned S = 0; S < a.blades(); ++S) {
      const auto B = a.block(p, S);
      if (B.isZero(0.0)) continue;
      const double s = a.m() == 1 ? std::abs(B(0, 0))
                                  : Eigen::JacobiSVD<Mat>(B).singularValues()(0);
      best = std::max(best, s);
    }
  return best;
}

double distance(const AlgElement& a, const AlgElement& b) { return norm(a - b); }

double variation(const AlgElement& a) {
  double best = 0.0;
  for (std::size_t p = 1; p < a.points(); ++p)
    for (unsigned S = 0; S < a.blades(); ++S)
      best = std::max(best, (a.block(p, S) - a.block(0, S)).cwiseAbs().maxCoeff());
  return best;
}

AlgElement direct_sum(const AlgElement& a, const AlgElement& b) {
  if (!(a.grid() == b.grid()) || a.k() != b.k())
    throw ShapeError("direct_sum needs equal grid and k");
  AlgElement r(a.grid(), a.m() + b.m(), a.k());
  for (std::size_t p = 0; p < a.points(); ++p)
    for (unsigned S = 0; S < a.blades(); ++S) {
      r.block(p, S).topLeftCorner(a.m(), a.m()) = a.block(p, S);
      r.block(p, S).bottomRightCorner(b.m(), b.m()) = b.block(p, S);
    }
  return r;
}

AlgElement kron(const Mat& M, const AlgElement& a) {
  const int d = static_cast<int>(M.rows());
  AlgElement r(a.grid(), d * a.m(), a.k());
  for (std::size_t p = 0; p < a.points(); ++p)
    for (unsigned S = 0; S < a.blades(); ++S) {
      const auto B = a.block(p, S);
      auto out = r.block(p, S);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.block(i * a.m(), j * a.m(), a.m(), a.m()) = M(i, j) * B;
    }
  return r;
}

unsigned RealStructureSpec::negated_mask() const {
  return (((1u << clifford.s) - 1u) << clifford.r) | (appended_negated << clifford.k());
}

RealStructureSpec RealStructureSpec::with_generator(bool negated) const {
  RealStructureSpec r = *this;
  if (negated) r.appended_negated |= 1u << appended;
  ++r.appended;
  return r;
}

AlgElement apply_real_structure(const RealStructureSpec& rs, const AlgElement& a) {
  const TorusGrid& g = a.grid();
  if (rs.k() != a.k())
    throw ShapeError("real structure on " + std::to_string(rs.k()) +
                     " generators does not match k=" + std::to_string(a.k()));
  unsigned flip = 0;
  for (int ax = 0; ax < g.dims(); ++ax) {
    const bool mom = g.axis(ax).kind == AxisKind::Momentum;
    if ((mom && rs.momentum_flip) || (!mom && rs.time_flip)) flip |= 1u << ax;
  }
  const int m = a.m();
  Mat Sy;
  if (rs.fiber == FiberReal::Quaternionic) {
    if (m % 2 != 0) throw ShapeError("quaternionic real structure needs even matrix size");
    Sy = Mat::Zero(m, m);
    const int h = m / 2;
    Sy.topRightCorner(h, h) = cplx(0, -1) * Mat::Identity(h, h);
    Sy.bottomLeftCorner(h, h) = cplx(0, 1) * Mat::Identity(h, h);
  }
  const unsigned negated = rs.negated_mask();
  AlgElement r(g, m, a.k());
  for (std::size_t p = 0; p < a.points(); ++p) {
    const std::size_t q = g.flipped(p, flip);
    for (unsigned S = 0; S < a.blades(); ++S) {
      const double sign = (popcount(S & negated) & 1) ? -1.0 : 1.0;
      const Mat c = a.block(q, S).conjugate();
      if (rs.fiber == FiberReal::Quaternionic)
        r.block(p, S) = sign * (Sy * c * Sy);
      else
        r.block(p, S) = sign * c;
    }
  }
  return r;
}

InvarianceCheck check_invariance(const RealStructureSpec& rs, const AlgElement& a, double tol) {
  InvarianceCheck c;
  c.residual = distance(apply_real_structure(rs, a), a);
  c.ok = c.residual <= tol;
  return c;
}

}  // namespace dkpair
