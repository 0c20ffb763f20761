#include "dkpair/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dkpair/errors.hpp"

namespace dkpair {

std::vector<QuadratureNode> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");
  // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
  // Legendre recurrence, weights come from the first eigenvector components.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = beta;
    J(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<QuadratureNode> out(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    out[static_cast<std::size_t>(i)] = {a + half * (x + 1.0), half * 2.0 * v * v};
  }
  return out;
}

}  // namespace dkpair
