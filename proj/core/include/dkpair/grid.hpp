#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dkpair/clifford.hpp"

namespace dkpair {

// Momentum axes sample [0, 2pi), time axes sample [0, 1).
enum class AxisKind { Momentum, Time };

struct GridAxis {
  int size = 0;
  AxisKind kind = AxisKind::Momentum;
  bool operator==(const GridAxis&) const = default;
};

// Uniform periodic grid on a torus of dimension 0..3. Row-major: the last axis
// varies fastest.
class TorusGrid {
 public:
  TorusGrid() = default;
  explicit TorusGrid(std::vector<GridAxis> axes);
  static TorusGrid momentum(int d, int n);

  int dims() const { return static_cast<int>(axes_.size()); }
  const std::vector<GridAxis>& axes() const { return axes_; }
  const GridAxis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  std::size_t points() const { return points_; }
  std::size_t stride(int a) const { return strides_.at(static_cast<std::size_t>(a)); }
  int index(std::size_t p, int a) const;
  double coordinate(int a, int i) const;
  std::vector<double> coordinates(std::size_t p) const;
  // Point with the indices of the axes in axis_mask negated mod N.
  std::size_t flipped(std::size_t p, unsigned axis_mask) const;
  // Same axes with every size multiplied by factor.
  TorusGrid refined(int factor) const;

  bool operator==(const TorusGrid& o) const { return axes_ == o.axes_; }

 private:
  std::vector<GridAxis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t points_ = 1;
};

// x = sum_S x_S (x) e_S with x_S : grid -> M_m(C). The host algebra is trivially
// graded, so the Z_2-degree is carried entirely by the Clifford blades.
class AlgElement {
 public:
  AlgElement() = default;
  AlgElement(TorusGrid grid, int m, int k);

  static AlgElement identity(const TorusGrid& g, int m, int k);
  static AlgElement constant(const TorusGrid& g, int k, unsigned S, const Mat& M);
  // Matrix field with no Clifford part: f receives the point coordinates.
  static AlgElement field(const TorusGrid& g, int m,
                          const std::function<Mat(const std::vector<double>&)>& f);

  const TorusGrid& grid() const { return grid_; }
  int m() const { return m_; }
  int k() const { return k_; }
  std::size_t blades() const { return std::size_t{1} << k_; }
  std::size_t points() const { return grid_.points(); }
  std::size_t block_size() const { return static_cast<std::size_t>(m_) * m_; }
  std::size_t point_size() const { return blades() * block_size(); }

  Eigen::Map<Mat> block(std::size_t p, unsigned S) {
    return {data_.data() + (p * blades() + S) * block_size(), m_, m_};
  }
  Eigen::Map<const Mat> block(std::size_t p, unsigned S) const {
    return {data_.data() + (p * blades() + S) * block_size(), m_, m_};
  }
  std::vector<cplx>& raw() { return data_; }
  const std::vector<cplx>& raw() const { return data_; }

  // The k = 0 field x_S.
  AlgElement component(unsigned S) const;
  // Same element viewed in Cl_{k_new}, k_new >= k; new generators are appended.
  AlgElement lift(int k_new) const;
  // For k = 0: x (x) e_S in Cl_{k_new}.
  AlgElement times_blade(int k_new, unsigned S) const;
  AlgElement even_part() const;
  AlgElement odd_part() const;

  bool same_shape(const AlgElement& o) const {
    return grid_ == o.grid_ && m_ == o.m_ && k_ == o.k_;
  }

  AlgElement& operator+=(const AlgElement& o);
  AlgElement& operator-=(const AlgElement& o);
  AlgElement& operator*=(cplx z);

 private:
  TorusGrid grid_;
  int m_ = 0;
  int k_ = 0;
  std::vector<cplx> data_;
};

AlgElement operator+(AlgElement a, const AlgElement& b);
AlgElement operator-(AlgElement a, const AlgElement& b);
AlgElement operator-(AlgElement a);
AlgElement operator*(AlgElement a, cplx z);
AlgElement operator*(cplx z, AlgElement a);
AlgElement operator*(const AlgElement& a, const AlgElement& b);

AlgElement alg_mul(const AlgElement& a, const AlgElement& b);
AlgElement alg_star(const AlgElement& a);
// Spectral derivative along a grid axis: mode n is multiplied by i n on momentum
// axes and 2 pi i n on time axes, Nyquist mode removed.
AlgElement apply_derivation(const AlgElement& a, int axis);
// Grid average of the matrix trace, one value per blade.
Multivector trace(const AlgElement& a);
// Max over grid points and blades of the operator 2-norm of the block.
double norm(const AlgElement& a);
double distance(const AlgElement& a, const AlgElement& b);
// Max over points of ||x(p) - x(0)||: zero iff every derivation kills x.
double variation(const AlgElement& a);
// x (+) y as block-diagonal matrices.
AlgElement direct_sum(const AlgElement& a, const AlgElement& b);
// M (x) a with M acting on a new outer tensor factor.
AlgElement kron(const Mat& M, const AlgElement& a);

enum class FiberReal { Conjugation, Quaternionic };

struct RealStructureSpec {
  FiberReal fiber = FiberReal::Conjugation;
  bool momentum_flip = false;
  bool time_flip = false;
  CliffordSignature clifford{};
  // Generators appended after the signature block; bit j set negates the j-th one.
  int appended = 0;
  unsigned appended_negated = 0;

  int k() const { return clifford.k() + appended; }
  unsigned negated_mask() const;
  // Same structure on one more generator, fixed or negated.
  RealStructureSpec with_generator(bool negated) const;
};

AlgElement apply_real_structure(const RealStructureSpec& rs, const AlgElement& a);

struct InvarianceCheck {
  bool ok = false;
  double residual = 0.0;
};
InvarianceCheck check_invariance(const RealStructureSpec& rs, const AlgElement& a, double tol);

}  // namespace dkpair
