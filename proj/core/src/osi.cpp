#include "dkpair/osi.hpp"

#include "dkpair/errors.hpp"

namespace dkpair {

GradedMatrixAlgebra::GradedMatrixAlgebra(Mat grading) : G_(std::move(grading)) {
  const Mat id = Mat::Identity(G_.rows(), G_.cols());
  if (G_.rows() != G_.cols() || (G_ - G_.adjoint()).norm() > 1e-12 ||
      (G_ * G_ - id).norm() > 1e-12)
    throw ValidationError("grading operator must be a self-adjoint unitary");
}

GradedMatrixAlgebra GradedMatrixAlgebra::standard(int half) {
  Mat G = Mat::Identity(2 * half, 2 * half);
  G.bottomRightCorner(half, half) *= -1.0;
  return GradedMatrixAlgebra(G);
}

int GradedMatrixAlgebra::degree(const Mat& a, double tol) const {
  const double ev = odd_part(a).norm();
  const double od = even_part(a).norm();
  if (ev <= tol) return 0;
  if (od <= tol) return 1;
  throw ValidationError("element is not homogeneous");
}

HostCl2 HostCl2::zero(int d) {
  HostCl2 h;
  for (auto& m : h.c) m = Mat::Zero(d, d);
  return h;
}

HostCl2 HostCl2::pure(const Mat& a, const Multivector& cl) {
  if (cl.k() != 2) throw ShapeError("HostCl2 needs a Cl_2 coefficient");
  HostCl2 h = zero(static_cast<int>(a.rows()));
  for (unsigned S = 0; S < 4; ++S) h.c[S] = cl[S] * a;
  return h;
}

HostCl2 HostCl2::mul(const GradedMatrixAlgebra& A, const HostCl2& o) const {
  HostCl2 r = zero(A.dim());
  for (unsigned T = 0; T < 4; ++T) {
    const Mat b0 = A.even_part(o.c[T]);
    const Mat b1 = A.odd_part(o.c[T]);
    for (unsigned S = 0; S < 4; ++S) {
      const Mat prod = (popcount(S) & 1) ? Mat(c[S] * (b0 - b1)) : Mat(c[S] * o.c[T]);
      r.c[S ^ T] += static_cast<double>(blade_sign(S, T)) * prod;
    }
  }
  return r;
}

Mat HostCl2::sigma_z_coefficient() const { return ipow(1) * c[3]; }

Mat psi_e(const GradedMatrixAlgebra& A, const HostCl2& x, const Mat& e, double tol) {
  const int d = A.dim();
  const Mat id = Mat::Identity(d, d);
  if (e.rows() != d || (A.even_part(e)).norm() > tol || (e * e - id).norm() > tol)
    throw ValidationError("psi_e needs an odd self-inverse e");
  // e^{-1} = e for a self-inverse
  const Mat& einv = e;
  const cplx I(0.0, 1.0);

  Mat r1 = Mat::Zero(2 * d, 2 * d);
  r1.topRightCorner(d, d) = einv;
  r1.bottomLeftCorner(d, d) = e;
  Mat r2 = Mat::Zero(2 * d, 2 * d);
  r2.topRightCorner(d, d) = -I * einv;
  r2.bottomLeftCorner(d, d) = I * e;
  const std::array<Mat, 4> blades = {Mat::Identity(2 * d, 2 * d), r1, r2, Mat(r1 * r2)};

  Mat out = Mat::Zero(2 * d, 2 * d);
  for (unsigned S = 0; S < 4; ++S) {
    Mat diag = Mat::Zero(2 * d, 2 * d);
    diag.topLeftCorner(d, d) = x.c[S];
    diag.bottomRightCorner(d, d) = e * A.gamma(x.c[S]) * einv;
    out += diag * blades[S];
  }
  return out;
}

Mat psi_e(const GradedMatrixAlgebra& A, const Mat& a, const Multivector& cl, const Mat& e,
          double tol) {
  return psi_e(A, HostCl2::pure(a, cl), e, tol);
}

}  // namespace dkpair
