#include "dkpair/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dkpair/clifford.hpp"
#include "dkpair/errors.hpp"
#include "parallel.hpp"

namespace dkpair {

namespace {

std::vector<int> negated(std::vector<int> v) {
  for (int& x : v) x = -x;
  return v;
}

}  // namespace

TightBindingModel::TightBindingModel(int dims, int m, std::vector<HoppingTerm> terms)
    : dims_(dims), m_(m) {
  if (dims < 0 || dims > 3) throw ShapeError("model dimension must be 0..3");
  if (m < 1) throw ShapeError("model matrix size must be positive");
  for (const auto& t : terms) add(t);
}

TightBindingModel& TightBindingModel::add(const HoppingTerm& t) {
  if (static_cast<int>(t.offset.size()) != dims_)
    throw ShapeError("hopping offset has " + std::to_string(t.offset.size()) +
                     " entries, model dimension is " + std::to_string(dims_));
  if (t.matrix.rows() != m_ || t.matrix.cols() != m_)
    throw ShapeError("hopping matrix is not " + std::to_string(m_) + "x" + std::to_string(m_));
  for (auto& u : terms_)
    if (u.offset == t.offset) {
      u.matrix += t.matrix;
      return *this;
    }
  terms_.push_back(t);
  return *this;
}

TightBindingModel TightBindingModel::operator+(const TightBindingModel& o) const {
  if (o.dims_ != dims_ || o.m_ != m_) throw ShapeError("adding models of different shape");
  TightBindingModel r = *this;
  for (const auto& t : o.terms_) r.add(t);
  return r;
}

TightBindingModel TightBindingModel::scaled(double s) const {
  TightBindingModel r = *this;
  for (auto& t : r.terms_) t.matrix *= s;
  return r;
}

double TightBindingModel::hermiticity_violation() const {
  double v = 0.0;
  const Mat zero = Mat::Zero(m_, m_);
  for (const auto& t : terms_) {
    const Mat* partner = &zero;
    const auto no = negated(t.offset);
    for (const auto& u : terms_)
      if (u.offset == no) partner = &u.matrix;
    v = std::max(v, (*partner - t.matrix.adjoint()).cwiseAbs().maxCoeff());
  }
  return v;
}

void TightBindingModel::symmetrize() {
  std::vector<HoppingTerm> all = terms_;
  for (const auto& t : terms_) {
    const auto no = negated(t.offset);
    if (std::none_of(terms_.begin(), terms_.end(), [&](const HoppingTerm& u) { return u.offset == no; }))
      all.push_back({no, Mat::Zero(m_, m_)});
  }
  std::vector<HoppingTerm> out;
  for (const auto& t : all) {
    const auto no = negated(t.offset);
    const auto it = std::find_if(all.begin(), all.end(), [&](const HoppingTerm& u) { return u.offset == no; });
    out.push_back({t.offset, 0.5 * (t.matrix + it->matrix.adjoint())});
  }
  terms_ = std::move(out);
}

int TightBindingModel::range() const {
  int r = 0;
  for (const auto& t : terms_)
    for (int x : t.offset) r = std::max(r, std::abs(x));
  return r;
}

AlgElement TightBindingModel::symbol(const TorusGrid& g) const {
  if (g.dims() != dims_)
    throw ShapeError("grid dimension " + std::to_string(g.dims()) + " does not match model dimension " +
                     std::to_string(dims_));
  AlgElement h(g, m_, 0);
  const std::size_t P = g.points();
  DKPAIR_PARALLEL_FOR
  for (std::size_t p = 0; p < P; ++p) {
    Mat acc = Mat::Zero(m_, m_);
    for (const auto& t : terms_) {
      double phase = 0.0;
      for (int a = 0; a < dims_; ++a) {
        const double scale = g.axis(a).kind == AxisKind::Momentum ? 1.0 : 2.0 * std::numbers::pi;
        phase += scale * g.coordinate(a, g.index(p, a)) * t.offset[static_cast<std::size_t>(a)];
      }
      acc += std::polar(1.0, phase) * t.matrix;
    }
    h.block(p, 0) = acc;
  }
  return h;
}

TightBindingModel qwz(double mass, int stretch) {
  const Mat sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  const cplx i(0, 1);
  TightBindingModel h(2, 2, {});
  h.add({{0, 0}, mass * sz});
  // sin q = (e^{iq} - e^{-iq}) / 2i, cos q = (e^{iq} + e^{-iq}) / 2.
  h.add({{stretch, 0}, sx / (2.0 * i) - 0.5 * sz});
  h.add({{-stretch, 0}, -sx / (2.0 * i) - 0.5 * sz});
  h.add({{0, 1}, sy / (2.0 * i) - 0.5 * sz});
  h.add({{0, -1}, -sy / (2.0 * i) - 0.5 * sz});
  return h;
}

TightBindingModel spin_double(const TightBindingModel& h1) {
  const int m = h1.m();
  TightBindingModel h(h1.dims(), 2 * m, {});
  for (const auto& t : h1.terms()) {
    Mat M = Mat::Zero(2 * m, 2 * m);
    M.topLeftCorner(m, m) = t.matrix;
    M.bottomRightCorner(m, m) = t.matrix.conjugate();
    h.add({t.offset, M});
  }
  return h;
}

TightBindingModel constant_model(int dims, const Mat& M) {
  return TightBindingModel(dims, static_cast<int>(M.rows()),
                           {{std::vector<int>(static_cast<std::size_t>(dims), 0), M}});
}

}  // namespace dkpair
