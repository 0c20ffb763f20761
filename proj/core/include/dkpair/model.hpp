#pragma once

#include <vector>

#include "dkpair/grid.hpp"

namespace dkpair {

struct HoppingTerm {
  std::vector<int> offset;
  Mat matrix;
};

// Bloch symbol H(k) = sum_n e^{i k.n} M_n.
class TightBindingModel {
 public:
  TightBindingModel() = default;
  TightBindingModel(int dims, int m, std::vector<HoppingTerm> terms);

  int dims() const { return dims_; }
  int m() const { return m_; }
  const std::vector<HoppingTerm>& terms() const { return terms_; }

  // max_n ||M_{-n} - M_n*||.
  double hermiticity_violation() const;
  // Replace M_n by (M_n + M_{-n}*)/2.
  void symmetrize();
  // Largest |n_a| over all terms.
  int range() const;

  // e^{i k.n} on momentum axes, e^{2 pi i t n} on time axes.
  AlgElement symbol(const TorusGrid& g) const;

  TightBindingModel& add(const HoppingTerm& t);
  TightBindingModel operator+(const TightBindingModel& o) const;
  TightBindingModel scaled(double s) const;

 private:
  int dims_ = 0;
  int m_ = 0;
  std::vector<HoppingTerm> terms_;
};

// sin k1 sx + sin k2 sy + (mass - cos k1 - cos k2) sz, with k1 replaced by
// stretch * k1.
TightBindingModel qwz(double mass, int stretch = 1);
// diag(h1, f(h1)) with f(h1)(k) = conj(h1(-k)).
TightBindingModel spin_double(const TightBindingModel& h1);
// Constant term M on the given dimension.
TightBindingModel constant_model(int dims, const Mat& M);

}  // namespace dkpair
