#pragma once

#include <random>

#include "dkpair/floquet.hpp"
#include "dkpair/model.hpp"
#include "dkpair/osi.hpp"
#include "dkpair/pairing.hpp"

// Reference classes and random generators shared by the verify suites, the
// acceptance runner and the unit tests.
namespace dkpair::fixtures {

using Rng = std::mt19937_64;

// Entries a + ib with a, b uniform in [-r, r]: products stay exact in double.
Mat gaussian_integer_matrix(int rows, int cols, Rng& rng, int r = 3);
Multivector gaussian_integer_multivector(int k, Rng& rng, int r = 3);
Multivector random_homogeneous(int k, int degree, Rng& rng, int r = 3);

// Orthogonal projection of the given rank; real entries when real is set.
Mat random_projection(int m, int rank, Rng& rng, bool real = false);
// Projection on C^{2n} invariant under Ad_{Sy} conj, rank 2 * rank_half.
Mat random_quaternionic_projection(int n, int rank_half, Rng& rng);
// Random band-limited Hermitian field with hopping range 1 on the grid.
TightBindingModel random_hamiltonian(int dims, int m, Rng& rng, bool real = false);

// Zero-dimensional classes with property Y: base point e, class x, unitary y.
// KO_2-type: conjugation fiber in Cl_{0,1}, e = i sigma_y read as -sigma_y (x) rho.
struct Ko2Example {
  TorusGrid grid;
  AlgElement e;
  AlgElement x;
  AlgElement y;
  RealStructureSpec rs;
};
Ko2Example ko2_generator();
// KO_4-type: quaternionic fiber, e = 1 (x) rho, x = -e, y = i sigma_y.
Ko2Example ko4_example();

struct KaneMeleExample {
  TorusGrid grid;
  TightBindingModel h1;
  AlgElement h;
  AlgElement x;
  AlgElement e;
  AlgElement y;
  RealStructureSpec rs;
};
KaneMeleExample kane_mele_decoupled(int n, double mass = 1.0, int stretch = 1);

// Undriven drive H(t) = H with period T.
FloquetDrive undriven(const AlgElement& H, double period);
// Two segments of length T/2: H1 then R(H1).
FloquetDrive palindromic(const AlgElement& H1, const RealStructureSpec& rs, double period);

}  // namespace dkpair::fixtures
