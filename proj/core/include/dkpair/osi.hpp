#pragma once

#include <array>

#include "dkpair/clifford.hpp"

namespace dkpair {

// M_d(C) graded by Ad_G for a self-adjoint unitary G.
class GradedMatrixAlgebra {
 public:
  explicit GradedMatrixAlgebra(Mat grading);
  // G = diag(1_half, -1_half): the even part is block diagonal.
  static GradedMatrixAlgebra standard(int half);

  int dim() const { return static_cast<int>(G_.rows()); }
  const Mat& grading() const { return G_; }
  Mat gamma(const Mat& a) const { return G_ * a * G_; }
  Mat even_part(const Mat& a) const { return 0.5 * (a + gamma(a)); }
  Mat odd_part(const Mat& a) const { return 0.5 * (a - gamma(a)); }
  // 0 or 1; throws ValidationError for inhomogeneous input.
  int degree(const Mat& a, double tol = 0.0) const;
  // Tr(G a), a graded trace.
  cplx supertrace(const Mat& a) const { return (G_ * a).trace(); }

 private:
  Mat G_;
};

// Element of A (x) Cl_2 with one A-coefficient per blade 1, rho_1, rho_2, rho_1 rho_2.
struct HostCl2 {
  std::array<Mat, 4> c;

  static HostCl2 zero(int d);
  static HostCl2 pure(const Mat& a, const Multivector& cl);
  // Graded product: (a e_S)(b e_T) = (-1)^{|S||b|} sign(S,T) ab e_{S^T}.
  HostCl2 mul(const GradedMatrixAlgebra& A, const HostCl2& o) const;
  // Coefficient of Gamma_2 = sigma_z.
  Mat sigma_z_coefficient() const;
};

// The isomorphism A (x) Cl_2 -> M_2(A) attached to an odd self-inverse e.
Mat psi_e(const GradedMatrixAlgebra& A, const HostCl2& x, const Mat& e, double tol = 1e-12);
Mat psi_e(const GradedMatrixAlgebra& A, const Mat& a, const Multivector& cl, const Mat& e,
          double tol = 1e-12);

}  // namespace dkpair
