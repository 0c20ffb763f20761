#include <gtest/gtest.h>

#include "cli/fixtures.hpp"
#include "dkpair/errors.hpp"
#include "dkpair/osi.hpp"

namespace dkpair {
namespace {

using fixtures::Rng;

const cplx I{0, 1};

TEST(Mu, Examples) {
  EXPECT_EQ(mu(0), 0);
  EXPECT_EQ(mu(1), 0);
  EXPECT_EQ(mu(2), 1);
  EXPECT_EQ(mu(5), 2);
  EXPECT_EQ(mu(-1), -1);
  EXPECT_EQ(mu(-2), -1);
  for (int k = -10; k <= 10; ++k) EXPECT_EQ(mu(k + 2), mu(k) + 1) << k;
}

TEST(MuPrime, Parity) {
  for (int k = -6; k <= 6; ++k) EXPECT_EQ(mu_prime(k), k % 2 == 0 ? 1 : 0) << k;
}

TEST(Multivector, GeneratorProducts) {
  const Multivector r1 = Multivector::generator(2, 1), r2 = Multivector::generator(2, 2);
  EXPECT_EQ(r1 * r1, Multivector::scalar(2, 1.0));
  EXPECT_EQ(r2 * r1, -(r1 * r2));
  const Eigen::Matrix2cd sz = cl2_matrix(-I * (r1 * r2));
  EXPECT_EQ(sz, pauli::z());
}

TEST(Multivector, AnticommutationAllK) {
  for (int k = 1; k <= kMaxGenerators; ++k)
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) {
        const Multivector a = Multivector::generator(k, i), b = Multivector::generator(k, j);
        EXPECT_EQ(a * b + b * a, Multivector::scalar(k, i == j ? 2.0 : 0.0));
      }
}

TEST(Multivector, AssociativeAndUnital) {
  Rng rng(1);
  for (int k = 0; k <= 6; ++k)
    for (int t = 0; t < 8; ++t) {
      const Multivector a = fixtures::gaussian_integer_multivector(k, rng),
                        b = fixtures::gaussian_integer_multivector(k, rng),
                        c = fixtures::gaussian_integer_multivector(k, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * Multivector::scalar(k, 1.0), a);
    }
}

TEST(Multivector, DegreesAdd) {
  Rng rng(2);
  for (int k = 1; k <= 5; ++k)
    for (int da = 0; da < 2; ++da)
      for (int db = 0; db < 2; ++db) {
        const Multivector p = fixtures::random_homogeneous(k, da, rng) * fixtures::random_homogeneous(k, db, rng);
        EXPECT_TRUE((da + db) % 2 ? p.is_odd() : p.is_even());
      }
}

TEST(Multivector, MismatchedKThrows) {
  EXPECT_THROW(Multivector::generator(2, 1) * Multivector::generator(3, 1), ShapeError);
  EXPECT_THROW(Multivector(kMaxGenerators + 1), ShapeError);
}

TEST(Star, Examples) {
  const Multivector r1 = Multivector::generator(2, 1), r2 = Multivector::generator(2, 2);
  EXPECT_EQ(r1.star(), r1);
  EXPECT_EQ((r1 * r2).star(), -(r1 * r2));
  EXPECT_EQ((r1 * r2).star(), r2 * r1);
  for (int k = 0; k <= kMaxGenerators; ++k) EXPECT_EQ(gamma_element(k).star(), gamma_element(k));
}

TEST(Star, AntilinearAntihomomorphism) {
  Rng rng(3);
  for (int k = 0; k <= 6; ++k) {
    const Multivector a = fixtures::gaussian_integer_multivector(k, rng),
                      b = fixtures::gaussian_integer_multivector(k, rng);
    EXPECT_EQ((a * b).star(), b.star() * a.star());
    EXPECT_EQ(a.star().star(), a);
    EXPECT_EQ((I * a).star(), -I * a.star());
  }
}

TEST(Gamma, Examples) {
  EXPECT_EQ(cl2_matrix(gamma_element(2)), pauli::z());
  EXPECT_EQ(gamma_element(0), Multivector::scalar(0, 1.0));
  const Multivector g3 = gamma_element(3);
  EXPECT_EQ(g3, -I * (Multivector::generator(3, 1) * Multivector::generator(3, 2) * Multivector::generator(3, 3)));
  EXPECT_EQ(g3 * g3, Multivector::scalar(3, 1.0));
  for (int k = 0; k <= kMaxGenerators; ++k) EXPECT_EQ(gamma_element(k) * gamma_element(k), Multivector::scalar(k, 1.0));
  EXPECT_THROW(gamma_element(kMaxGenerators + 1), ShapeError);
}

TEST(RealStructureL, Examples) {
  const CliffordSignature s11{1, 1};
  EXPECT_EQ(real_structure_l(s11, Multivector::generator(2, 1)), Multivector::generator(2, 1));
  EXPECT_EQ(real_structure_l(s11, Multivector::generator(2, 2)), -Multivector::generator(2, 2));
  for (int r = 0; r <= 3; ++r)
    for (int s = 0; s <= 3; ++s)
      EXPECT_EQ(real_structure_l({r, s}, Multivector::scalar(r + s, 1.0)), Multivector::scalar(r + s, 1.0));
}

TEST(RealStructureL, GammaSign) {
  for (int r = 0; r <= 6; ++r)
    for (int s = 0; r + s <= 6; ++s) {
      const Multivector G = gamma_element(r + s);
      const double sign = mu(r - s) % 2 == 0 ? 1.0 : -1.0;
      EXPECT_EQ(real_structure_l({r, s}, G), G * sign) << r << "," << s;
    }
}

TEST(RealStructureL, StarAutomorphismOfOrderTwo) {
  Rng rng(4);
  for (int r = 0; r <= 3; ++r)
    for (int s = 0; s <= 3; ++s) {
      const CliffordSignature sig{r, s};
      const Multivector a = fixtures::gaussian_integer_multivector(r + s, rng),
                        b = fixtures::gaussian_integer_multivector(r + s, rng);
      EXPECT_EQ(real_structure_l(sig, real_structure_l(sig, a)), a);
      EXPECT_EQ(real_structure_l(sig, a * b), real_structure_l(sig, a) * real_structure_l(sig, b));
      EXPECT_EQ(real_structure_l(sig, a.star()), real_structure_l(sig, a).star());
      EXPECT_EQ(real_structure_l(sig, a.grade_involution()), real_structure_l(sig, a).grade_involution());
      EXPECT_EQ(real_structure_l(sig, I * a), -I * real_structure_l(sig, a));
    }
  EXPECT_THROW(real_structure_l({1, 1}, Multivector(3)), ShapeError);
}

TEST(JFunctional, Examples) {
  for (int k = 0; k <= kMaxGenerators; ++k) EXPECT_EQ(j_functional(gamma_element(k)), cplx(1.0));
  for (int k = 1; k <= kMaxGenerators; ++k) EXPECT_EQ(j_functional(Multivector::scalar(k, 1.0)), cplx(0.0));
  EXPECT_EQ(j_functional(Multivector::generator(2, 1) * Multivector::generator(2, 2)), I);
}

TEST(JFunctional, GradedTrace) {
  Rng rng(5);
  for (int k = 0; k <= 6; ++k)
    for (int da = 0; da < 2; ++da)
      for (int db = 0; db < 2; ++db) {
        const Multivector a = fixtures::random_homogeneous(k, da, rng), b = fixtures::random_homogeneous(k, db, rng);
        const double sign = (da * db) % 2 ? -1.0 : 1.0;
        EXPECT_EQ(j_functional(a * b), sign * j_functional(b * a));
      }
}

class PsiE : public ::testing::Test {
 protected:
  GradedMatrixAlgebra A = GradedMatrixAlgebra::standard(2);
  Mat e = [] {
    Mat m = Mat::Zero(4, 4);
    m.topRightCorner(2, 2) = Mat::Identity(2, 2);
    m.bottomLeftCorner(2, 2) = Mat::Identity(2, 2);
    return m;
  }();
};

TEST_F(PsiE, Examples) {
  const Mat one = Mat::Identity(4, 4);
  Mat expect = Mat::Zero(8, 8);
  expect.topRightCorner(4, 4) = e.inverse();
  expect.bottomLeftCorner(4, 4) = e;
  EXPECT_EQ(psi_e(A, one, Multivector::generator(2, 1), e), expect);
  EXPECT_EQ(psi_e(A, one, Multivector::scalar(2, 1.0), e), Mat::Identity(8, 8));
}

TEST_F(PsiE, HomomorphismOnRandomPairs) {
  Rng rng(6);
  for (int t = 0; t < 64; ++t) {
    auto draw = [&] {
      const Mat a = fixtures::gaussian_integer_matrix(4, 4, rng);
      const int da = static_cast<int>(rng() % 2), dc = static_cast<int>(rng() % 2);
      return HostCl2::pure(da ? A.odd_part(a) : A.even_part(a), fixtures::random_homogeneous(2, dc, rng));
    };
    const HostCl2 u = draw(), v = draw();
    EXPECT_EQ(psi_e(A, u.mul(A, v), e), psi_e(A, u, e) * psi_e(A, v, e));
  }
}

TEST_F(PsiE, JTraceIdentity) {
  Rng rng(7);
  for (int t = 0; t < 64; ++t) {
    const Mat a = fixtures::gaussian_integer_matrix(4, 4, rng);
    const HostCl2 w = HostCl2::pure(rng() % 2 ? A.odd_part(a) : A.even_part(a),
                                    fixtures::random_homogeneous(2, static_cast<int>(rng() % 2), rng));
    const Mat P = psi_e(A, w, e);
    const Mat tr2 = P.topLeftCorner(4, 4) + P.bottomRightCorner(4, 4);
    EXPECT_EQ(A.supertrace(w.sigma_z_coefficient()), 0.5 * A.supertrace(tr2));
  }
}

TEST_F(PsiE, RejectsNonOsi) {
  EXPECT_THROW(psi_e(A, Mat::Identity(4, 4), Multivector::generator(2, 1), Mat::Identity(4, 4)), ValidationError);
}

}  // namespace
}  // namespace dkpair
