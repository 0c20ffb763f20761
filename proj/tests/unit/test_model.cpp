#include <gtest/gtest.h>

#include <cmath>

#include "cli/fixtures.hpp"
#include "dkpair/errors.hpp"

namespace dkpair {
namespace {

TEST(Qwz, SymbolMatchesFormula) {
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const AlgElement h = qwz(1.5).symbol(g);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) {
    const auto k = g.coordinates(p);
    const Eigen::Matrix2cd ref = std::sin(k[0]) * pauli::x() + std::sin(k[1]) * pauli::y() +
                                 (1.5 - std::cos(k[0]) - std::cos(k[1])) * pauli::z();
    err = std::max(err, (Mat(h.block(p, 0)) - Mat(ref)).norm());
  }
  EXPECT_LT(err, 1e-14);
}

TEST(Qwz, StretchDoublesChern) {
  const TorusGrid g = TorusGrid::momentum(2, 64);
  const double c1 = chern_number(positive_projection(qwz(1.0).symbol(g)));
  const double c2 = chern_number(positive_projection(qwz(1.0, 2).symbol(g)));
  EXPECT_NEAR(c2, 2 * c1, 1e-4);
}

TEST(TightBinding, HermiticityAndSymmetrize) {
  TightBindingModel m(1, 1, {});
  m.add({{1}, Mat::Constant(1, 1, cplx(1.0, 0.0))});
  m.add({{-1}, Mat::Constant(1, 1, cplx(0.5, 0.0))});
  EXPECT_NEAR(m.hermiticity_violation(), 0.5, 1e-15);
  m.symmetrize();
  EXPECT_NEAR(m.hermiticity_violation(), 0.0, 1e-15);
  EXPECT_EQ(m.range(), 1);
  EXPECT_THROW(m.add({{1, 0}, Mat::Identity(1, 1)}), ShapeError);
  EXPECT_THROW(m.symbol(TorusGrid::momentum(2, 4)), ShapeError);
}

TEST(TightBinding, AddMergesOffsets) {
  TightBindingModel m(1, 1, {});
  m.add({{1}, Mat::Identity(1, 1)});
  m.add({{1}, Mat::Identity(1, 1)});
  EXPECT_EQ(m.terms().size(), 1u);
  EXPECT_EQ(m.terms()[0].matrix(0, 0), cplx(2.0));
}

TEST(TightBinding, TimeAxisSymbol) {
  const TightBindingModel m(1, 1, {{{2}, Mat::Identity(1, 1)}});
  const TorusGrid g({{16, AxisKind::Time}});
  const AlgElement u = m.symbol(g);
  EXPECT_LT(std::abs(u.block(4, 0)(0, 0) - std::exp(cplx(0, 2 * std::numbers::pi * 2 * 0.25))), 1e-14);
}

TEST(SpinDouble, InvariantUnderQuaternionicStructure) {
  fixtures::Rng rng(1);
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const TightBindingModel h1 = fixtures::random_hamiltonian(2, 3, rng);
  const AlgElement h = spin_double(h1).symbol(g);
  RealStructureSpec rs = kane_mele_real_structure();
  rs.clifford = {0, 0};
  EXPECT_LT(check_invariance(rs, h, 1e-12).residual, 1e-12);
  const AlgElement h1s = h1.symbol(g);
  for (std::size_t p = 0; p < g.points(); p += 5) {
    EXPECT_LT((Mat(h.block(p, 0)).topLeftCorner(3, 3) - Mat(h1s.block(p, 0))).norm(), 1e-14);
    EXPECT_LT(Mat(h.block(p, 0)).topRightCorner(3, 3).norm(), 1e-15);
  }
}

TEST(ConstantModel, IsConstant) {
  const AlgElement c = constant_model(2, Mat(pauli::z())).symbol(TorusGrid::momentum(2, 4));
  EXPECT_LT(variation(c), 1e-15);
}

}  // namespace
}  // namespace dkpair
