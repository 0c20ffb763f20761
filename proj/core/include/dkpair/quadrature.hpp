#pragma once

#include <vector>

namespace dkpair {

struct QuadratureNode {
  double t;
  double w;
};

// n-point Gauss-Legendre rule on [a, b].
std::vector<QuadratureNode> gauss_legendre(int n, double a, double b);

}  // namespace dkpair
