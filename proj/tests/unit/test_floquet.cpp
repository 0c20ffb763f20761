#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cli/fixtures.hpp"
#include "dkpair/errors.hpp"

namespace dkpair {
namespace {

using fixtures::Rng;

const cplx I{0, 1};
constexpr double kPi = std::numbers::pi;

AlgElement expm_field(const AlgElement& H, cplx z) {
  AlgElement out(H.grid(), H.m(), 0);
  for (std::size_t p = 0; p < H.points(); ++p) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(H.block(p, 0)));
    out.block(p, 0) = es.eigenvectors() * (z * es.eigenvalues().cast<cplx>()).array().exp().matrix().asDiagonal() *
                      es.eigenvectors().adjoint();
  }
  return out;
}

class KaneMeleDrive : public ::testing::Test {
 protected:
  TorusGrid g = TorusGrid::momentum(2, 12);
  AlgElement H = spin_double(qwz(1.0)).symbol(g);
  RealStructureSpec rs = kane_mele_real_structure();
};

TEST(Evolve, Examples) {
  Rng rng(1);
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const AlgElement H = fixtures::random_hamiltonian(2, 3, rng).symbol(g);
  const FloquetDrive d = fixtures::undriven(H, 0.7);
  EXPECT_LT(distance(evolve(d, 0.0), AlgElement::identity(g, 3, 0)), 1e-14);
  EXPECT_LT(distance(evolve(d, 0.3), expm_field(H, cplx(0, -0.3))), 1e-11);
  EXPECT_THROW(evolve(d, -0.1), ValidationError);
}

TEST(Evolve, PeriodShift) {
  Rng rng(2);
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const AlgElement H1 = fixtures::random_hamiltonian(2, 2, rng).symbol(g);
  const AlgElement H2 = fixtures::random_hamiltonian(2, 2, rng).symbol(g);
  const FloquetDrive d({{0.4, H1}, {0.6, H2}});
  const AlgElement UT = evolve(d, 1.0);
  for (double t : {0.1, 0.4, 0.55, 0.9})
    EXPECT_LT(distance(evolve(d, t + 1.0), evolve(d, t) * UT), 1e-10) << t;
  const AlgElement U = evolve(d, 0.77);
  EXPECT_LT(distance(U * alg_star(U), AlgElement::identity(g, 2, 0)), 1e-11);
}

TEST(FloquetDrive, Validation) {
  const TorusGrid g = TorusGrid::momentum(1, 4);
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(FloquetDrive({{1.0, AlgElement::constant(g, 0, 0, a)}}), ValidationError);
  EXPECT_THROW(FloquetDrive({{0.0, AlgElement::identity(g, 2, 0)}}), ValidationError);
  EXPECT_THROW(FloquetDrive({}), ValidationError);
}

TEST(EffectiveHamiltonian, ScalarPhase) {
  const TorusGrid g = TorusGrid::momentum(1, 4);
  const double theta = 1.3, T = 2.0;
  const FloquetDrive d = fixtures::undriven((theta / T) * AlgElement::identity(g, 2, 0), T);
  const EffectiveHamiltonian h = effective_hamiltonian(d, BranchChoice::from_phase(-kPi, T));
  EXPECT_LT(distance(h.H, (theta / T) * AlgElement::identity(g, 2, 0)), 1e-12);
}

TEST_F(KaneMeleDrive, BranchIdentityAndRoundTrip) {
  const FloquetDrive d = fixtures::palindromic(H, rs, 0.5);
  const ArcProjection arc = arc_projection(d, 0.0, kPi);
  const double T = d.period();
  const EffectiveHamiltonian h0 = effective_hamiltonian(d, BranchChoice::from_phase(0.0, T));
  const EffectiveHamiltonian h1 = effective_hamiltonian(d, BranchChoice::from_phase(kPi, T));
  EXPECT_LT(distance((2 * kPi * I) * arc.P, (-I * T) * (h1.H - h0.H)), 1e-9);
  EXPECT_LT(distance(expm_field(h0.H, cplx(0, -T)), evolve(d, T)), 1e-9);
  EXPECT_LT(distance(alg_star(h0.H), h0.H), 1e-12);
  EXPECT_LT(distance(arc.P * arc.P, arc.P), 1e-10);
  RealStructureSpec r0 = rs;
  r0.clifford = {0, 0};
  EXPECT_LT(check_invariance(r0, arc.P, 1e-10).residual, 1e-10);
}

TEST_F(KaneMeleDrive, FullArcIsIdentity) {
  const FloquetDrive d = fixtures::undriven(H, 0.5);
  const ArcProjection arc = arc_projection(d, 0.0, 1e-6 + 2 * kPi - 1e-6);
  EXPECT_EQ(arc.rank, 4);
  EXPECT_LT(distance(arc.P, AlgElement::identity(g, 4, 0)), 1e-12);
}

TEST_F(KaneMeleDrive, BranchOnSpectrumIsGapClosed) {
  // The QWZ spectrum covers |E| in [1, 3], so -E T crosses the cut at -1.
  const FloquetDrive d = fixtures::undriven(H, 0.5);
  EXPECT_THROW(effective_hamiltonian(d, BranchChoice::from_phase(-1.0, 0.5)), GapClosedError);
  EXPECT_THROW(arc_projection(d, -1.0, kPi), GapClosedError);
}

TEST_F(KaneMeleDrive, PeriodizedEvolution) {
  const FloquetDrive d = fixtures::palindromic(H, rs, 0.5);
  const BranchChoice b = BranchChoice::from_phase(0.0, d.period());
  EXPECT_LT(periodicity_residual(d, b), 1e-9);
  EXPECT_LT(evolution_symmetry_residual(d, b, rs), 1e-9);
  EXPECT_LT(time_reversal_residual(d, rs), 1e-12);
  const LoopElement V = periodized_evolution(d, b, 32);
  EXPECT_TRUE(V.periodic());
  EXPECT_LT(distance(V.start(), AlgElement::identity(g, 4, 0)), 1e-12);
}

TEST(PeriodizedEvolution, ConstantDriveGivesIdentity) {
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const FloquetDrive d = fixtures::undriven(0.3 * qwz(1.0).symbol(g), 1.0);
  // Eigenphases -0.3 E lie in [-0.9, -0.3] and [0.3, 0.9], inside [-pi, pi).
  const LoopElement V = periodized_evolution(d, BranchChoice::from_phase(-kPi, 1.0), 16);
  for (const auto& s : V.segments())
    for (const auto& nd : s.nodes) EXPECT_LT(distance(nd.value, AlgElement::identity(g, 2, 0)), 1e-10);
}

TEST(DegreeT3, TrivialLoops) {
  const TorusGrid g = TorusGrid::momentum(2, 8);
  std::vector<AlgElement> one(9, AlgElement::identity(g, 1, 0)), phase;
  for (int i = 0; i < 9; ++i)
    phase.push_back(std::exp(2 * kPi * I * (i / 8.0)) * AlgElement::identity(g, 1, 0));
  EXPECT_NEAR(degree_t3(LoopElement({uniform_segment(0.0, 1.0, one)})), 0.0, 1e-14);
  EXPECT_NEAR(degree_t3(LoopElement({uniform_segment(0.0, 1.0, phase)})), 0.0, 1e-12);
}

TEST(DegreeT3, HalfBottLoopEqualsChern) {
  for (double mass : {1.0, -1.0, 3.0}) {
    const TorusGrid g = TorusGrid::momentum(2, 24);
    const AlgElement P = positive_projection(qwz(mass).symbol(g));
    const AlgElement y = I * AlgElement::identity(g, 2, 0);
    const double deg = degree_t3(half_bott_completed_loop(P, y, 64));
    EXPECT_NEAR(deg, std::nearbyint(deg), 1e-3);
    EXPECT_NEAR(deg, chern_number(P), 1e-3) << mass;
  }
}

TEST(InvolutionContraction, Boundaries) {
  const TorusGrid g = TorusGrid::momentum(2, 8);
  const AlgElement V = flatten(spin_double(qwz(1.0)).symbol(g));
  const AlgElement y = spin_y(g, 4);
  const LoopSegment c = involution_contraction(V, y, 16);
  RealStructureSpec rs = kane_mele_real_structure();
  const ContractionCheck chk = check_contraction(c, V, rs);
  EXPECT_TRUE(chk.ok(1e-10)) << chk.start << " " << chk.end << " " << chk.unitary << " " << chk.symmetry;
  EXPECT_THROW(involution_contraction(2.0 * V, y, 16), ValidationError);
}

TEST_F(KaneMeleDrive, UndrivenInvariantIsSpinChernParity) {
  for (double mass : {1.0, 3.0}) {
    const AlgElement h = spin_double(qwz(mass)).symbol(g);
    const FloquetInvariant f = kane_mele_floquet_invariant(fixtures::undriven(h, 0.5), 0.0, kPi, {});
    ASSERT_TRUE(f.spin_chern.has_value());
    const double sc = spin_chern(qwz(mass).symbol(g));
    EXPECT_EQ(f.z2, static_cast<int>(std::lround(std::abs(sc))) % 2) << mass;
    EXPECT_LT(f.branch_identity_residual, 1e-9);
  }
}

TEST_F(KaneMeleDrive, TrivialDriveIsZero) {
  const FloquetInvariant f =
      kane_mele_floquet_invariant(fixtures::undriven(AlgElement(g, 4, 0), 1.0), 0.5, kPi, {});
  EXPECT_EQ(f.z2, 0);
  EXPECT_EQ(f.rank, 0);
}

TEST_F(KaneMeleDrive, UserSuppliedContractions) {
  const FloquetDrive d = fixtures::undriven(H, 0.5);
  const AlgElement y = spin_y(g, 4);
  FloquetOptions o;
  o.nodes = 64;
  o.strategy = ContractionStrategy::UserSupplied;
  LoopSegment c[2];
  int i = 0;
  for (double ph : {0.0, kPi}) {
    const AlgElement vh = periodized_evolution(d, BranchChoice::from_phase(ph, 0.5), 64, true).end();
    c[i++] = uniform_segment(0.5, 1.0, involution_contraction_samples(vh, y, 33));
  }
  o.contraction0 = c[0];
  o.contraction1 = c[1];
  const FloquetInvariant f = kane_mele_floquet_invariant(d, 0.0, kPi, o);
  const FloquetInvariant ref = kane_mele_floquet_invariant(d, 0.0, kPi, {});
  EXPECT_EQ(f.z2, ref.z2);
  // The reversed arc runs over the branches pi and 2 pi.
  FloquetOptions rev = o;
  LoopSegment cr[2];
  i = 0;
  for (double ph : {kPi, 2 * kPi}) {
    const AlgElement vh = periodized_evolution(d, BranchChoice::from_phase(ph, 0.5), 64, true).end();
    cr[i++] = uniform_segment(0.5, 1.0, involution_contraction_samples(vh, y, 33));
  }
  rev.contraction0 = cr[0];
  rev.contraction1 = cr[1];
  EXPECT_EQ(kane_mele_floquet_invariant(d, kPi, 0.0, rev).z2, kane_mele_floquet_invariant(d, kPi, 0.0, {}).z2);
  rev.contraction1 = c[0];
  EXPECT_THROW(kane_mele_floquet_invariant(d, kPi, 0.0, rev), ValidationError);
  // A contraction that misses V(1/2) is rejected.
  o.contraction0 = c[1];
  EXPECT_THROW(kane_mele_floquet_invariant(d, 0.0, kPi, o), ValidationError);
}

TEST_F(KaneMeleDrive, RejectsTimeReversalBreakingDrive) {
  // A Zeeman term with opposite signs on the two spin blocks.
  Mat Z = Mat::Zero(4, 4);
  Z.topLeftCorner(2, 2) = 0.1 * Mat::Identity(2, 2);
  Z.bottomRightCorner(2, 2) = -0.1 * Mat::Identity(2, 2);
  const FloquetDrive d = fixtures::undriven(H + AlgElement::constant(g, 0, 0, Z), 0.5);
  EXPECT_GT(time_reversal_residual(d, rs), 0.1);
  EXPECT_THROW(kane_mele_floquet_invariant(d, 0.0, kPi, {}), ValidationError);
}

}  // namespace
}  // namespace dkpair
