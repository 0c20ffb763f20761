#include "cli/fixtures.hpp"

#include <Eigen/QR>

namespace dkpair::fixtures {

namespace {

Mat sy_block(int n) {
  Mat S = Mat::Zero(2 * n, 2 * n);
  S.topRightCorner(n, n) = cplx(0, -1) * Mat::Identity(n, n);
  S.bottomLeftCorner(n, n) = cplx(0, 1) * Mat::Identity(n, n);
  return S;
}

Mat normal_matrix(int rows, int cols, Rng& rng, bool real) {
  std::normal_distribution<double> N(0.0, 1.0);
  Mat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = {N(rng), real ? 0.0 : N(rng)};
  return A;
}

Mat range_projection(const Mat& V) {
  Eigen::HouseholderQR<Mat> qr(V);
  const Mat Q = qr.householderQ() * Mat::Identity(V.rows(), V.cols());
  return Q * Q.adjoint();
}

}  // namespace

Mat gaussian_integer_matrix(int rows, int cols, Rng& rng, int r) {
  std::uniform_int_distribution<int> U(-r, r);
  Mat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = {static_cast<double>(U(rng)), static_cast<double>(U(rng))};
  return A;
}

Multivector gaussian_integer_multivector(int k, Rng& rng, int r) {
  std::uniform_int_distribution<int> U(-r, r);
  Multivector a(k);
  for (unsigned S = 0; S < a.size(); ++S) a[S] = {static_cast<double>(U(rng)), static_cast<double>(U(rng))};
  return a;
}

Multivector random_homogeneous(int k, int degree, Rng& rng, int r) {
  Multivector a = gaussian_integer_multivector(k, rng, r);
  return degree % 2 ? a.odd_part() : a.even_part();
}

Mat random_projection(int m, int rank, Rng& rng, bool real) {
  if (rank == 0) return Mat::Zero(m, m);
  return range_projection(normal_matrix(m, rank, rng, real));
}

Mat random_quaternionic_projection(int n, int rank_half, Rng& rng) {
  if (rank_half == 0) return Mat::Zero(2 * n, 2 * n);
  const Mat V = normal_matrix(2 * n, rank_half, rng, false);
  Mat W(2 * n, 2 * rank_half);
  W << V, sy_block(n) * V.conjugate();
  return range_projection(W);
}

TightBindingModel random_hamiltonian(int dims, int m, Rng& rng, bool real) {
  TightBindingModel h(dims, m, {});
  const Mat M0 = normal_matrix(m, m, rng, real);
  h.add({std::vector<int>(static_cast<std::size_t>(dims), 0), M0 + M0.adjoint()});
  for (int a = 0; a < dims; ++a) {
    std::vector<int> off(static_cast<std::size_t>(dims), 0);
    off[static_cast<std::size_t>(a)] = 1;
    const Mat M = 0.5 * normal_matrix(m, m, rng, real);
    h.add({off, M});
    off[static_cast<std::size_t>(a)] = -1;
    h.add({off, M.adjoint()});
  }
  return h;
}

Ko2Example ko2_generator() {
  Ko2Example k;
  const Mat sy = pauli::y();
  // i sigma_y (x) (i, -i) read in Cl_{0,1}: the rho coefficient is -sigma_y.
  k.e = AlgElement::constant(k.grid, 1, 1u, -sy);
  k.x = -1.0 * k.e;
  k.y = AlgElement::constant(k.grid, 0, 0, cplx(0, 1) * sy);
  k.rs.fiber = FiberReal::Conjugation;
  k.rs.clifford = {0, 1};
  return k;
}

Ko2Example ko4_example() {
  Ko2Example k;
  k.e = AlgElement::constant(k.grid, 1, 1u, Mat::Identity(2, 2));
  k.x = -1.0 * k.e;
  k.y = AlgElement::constant(k.grid, 0, 0, cplx(0, 1) * Mat(pauli::y()));
  k.rs.fiber = FiberReal::Quaternionic;
  k.rs.clifford = {1, 0};
  return k;
}

KaneMeleExample kane_mele_decoupled(int n, double mass, int stretch) {
  KaneMeleExample k;
  k.grid = TorusGrid::momentum(2, n);
  k.h1 = qwz(mass, stretch);
  k.h = spin_double(k.h1).symbol(k.grid);
  k.x = make_osu_from_hamiltonian(k.h).body();
  k.e = BasePoint::standard_rho(k.grid, 4).body();
  k.y = spin_y(k.grid, 4);
  k.rs = kane_mele_real_structure();
  k.rs.clifford = {1, 0};
  return k;
}

FloquetDrive undriven(const AlgElement& H, double period) { return FloquetDrive({{period, H}}); }

FloquetDrive palindromic(const AlgElement& H1, const RealStructureSpec& rs, double period) {
  RealStructureSpec r = rs;
  r.clifford = {0, 0};
  return FloquetDrive({{period / 2, H1}, {period / 2, apply_real_structure(r, H1)}});
}

}  // namespace dkpair::fixtures
