#pragma once

#include <optional>
#include <vector>

#include "dkpair/kclass.hpp"
#include "dkpair/pairing.hpp"

namespace dkpair {

struct DriveSegment {
  double duration = 0.0;
  AlgElement H;
};

// Piecewise constant Hamiltonian over one period; later segments act last.
class FloquetDrive {
 public:
  FloquetDrive(std::vector<DriveSegment> segments, double herm_tol = 1e-12);

  double period() const { return period_; }
  const std::vector<DriveSegment>& segments() const { return segments_; }
  const TorusGrid& grid() const { return segments_.front().H.grid(); }
  int m() const { return segments_.front().H.m(); }
  // Start time of segment j.
  double segment_start(std::size_t j) const { return starts_.at(j); }

  // exp(-i H_j tau) from the cached eigendecomposition of H_j.
  AlgElement segment_exponential(std::size_t j, double tau) const;
  // H_j as a field.
  const AlgElement& hamiltonian(std::size_t j) const { return segments_.at(j).H; }

 private:
  std::vector<DriveSegment> segments_;
  std::vector<double> starts_;
  double period_ = 0.0;
  std::vector<std::vector<Eigen::VectorXd>> evals_;
  std::vector<std::vector<Mat>> evecs_;
};

// Max over segments of ||R(H_j) - H_{J-1-j}|| plus duration mismatch: zero for
// drives with R(H(t)) = H(-t).
double time_reversal_residual(const FloquetDrive& d, const RealStructureSpec& rs);

AlgElement evolve(const FloquetDrive& d, double t);

// Eigenphases of U(T) are placed in [eps T, eps T + 2 pi).
struct BranchChoice {
  double eps = 0.0;
  static BranchChoice from_phase(double phase, double period) { return {phase / period}; }
};

struct FloquetSpectrum {
  std::vector<Mat> Q;                // unitary eigenbasis per point
  std::vector<Eigen::VectorXd> arg;  // eigenphases in [0, 2 pi)
  double schur_residual = 0.0;
};
// Schur decomposition of U(T) at every grid point.
FloquetSpectrum floquet_spectrum(const FloquetDrive& d);

struct EffectiveHamiltonian {
  AlgElement H;
  double gap_margin = 0.0;  // smallest distance of an eigenphase to the cut
  double schur_residual = 0.0;
};
EffectiveHamiltonian effective_hamiltonian(const FloquetDrive& d, const BranchChoice& b,
                                           double gap_tol = 1e-9);

struct ArcProjection {
  AlgElement P;
  cplx z0;
  cplx z1;
  int rank = 0;
  double gap_margin = 0.0;
};
// Eigenprojections of U(T) with phase on the counterclockwise arc from
// e^{i phase0} to e^{i phase1}.
ArcProjection arc_projection(const FloquetDrive& d, double phase0, double phase1,
                             double gap_tol = 1e-9);

// V(t) = U(t) exp(i t H_eff) as a loop in s = t / T. With half set, only s <= 1/2.
LoopElement periodized_evolution(const FloquetDrive& d, const BranchChoice& b, int nodes,
                                 bool half = false, double gap_tol = 1e-9);

// ||V(T) - V(0)|| evaluated directly at both ends.
double periodicity_residual(const FloquetDrive& d, const BranchChoice& b, double gap_tol = 1e-9);
// max over samples of ||R(V(t)) - V(T - t)||.
double evolution_symmetry_residual(const FloquetDrive& d, const BranchChoice& b,
                                   const RealStructureSpec& rs, int samples = 16,
                                   double gap_tol = 1e-9);

// (1 / 24 pi^2) int Tr(V* dV)^3 over (s, k1, k2); V is a k = 0 unitary loop.
double degree_t3(const LoopElement& V, int axis1 = 0, int axis2 = 1);

// exp(pi (2 - 2s) y Q), s in [1/2, 1], with Q = (1 - V_half) / 2. V_half must be
// a self-adjoint unitary commuting with y, and y an anti-self-adjoint unitary.
LoopSegment involution_contraction(const AlgElement& V_half, const AlgElement& y, int nodes);
// The same contraction on nt uniform samples including both ends.
std::vector<AlgElement> involution_contraction_samples(const AlgElement& V_half,
                                                       const AlgElement& y, int nt);
// exp(-2 pi i s P) on [0, 1/2] followed by the involution contraction of 1 - 2P.
LoopElement half_bott_completed_loop(const AlgElement& P, const AlgElement& y, int nodes);

struct ContractionCheck {
  double start = 0.0;
  double end = 0.0;
  double unitary = 0.0;
  double symmetry = 0.0;
  bool ok(double tol) const {
    return start <= tol && end <= tol && unitary <= tol && symmetry <= tol;
  }
};
ContractionCheck check_contraction(const LoopSegment& c, const AlgElement& V_half,
                                   const RealStructureSpec& rs);

enum class ContractionStrategy { Decoupled, UserSupplied };

struct FloquetOptions {
  ContractionStrategy strategy = ContractionStrategy::Decoupled;
  int nodes = 256;
  double gap_tol = 1e-9;
  double tol = 1e-9;
  // y = diag(-i, i) (x) 1 when empty.
  std::optional<AlgElement> y;
  // For UserSupplied: contractions on [1/2, 1] for the branches at phase0 and phase1.
  std::optional<LoopSegment> contraction0;
  std::optional<LoopSegment> contraction1;
};

struct FloquetInvariant {
  TorsionValue K;
  int z2 = 0;
  double phase0 = 0.0;
  double phase1 = 0.0;
  int rank = 0;
  double gap_margin = 0.0;
  double branch_identity_residual = 0.0;
  double periodicity_residual = 0.0;
  double symmetry_residual = 0.0;
  double time_reversal_residual = 0.0;
  std::optional<double> spin_chern;
  std::optional<double> deg0;
  std::optional<double> deg1;
};

RealStructureSpec kane_mele_real_structure();
AlgElement spin_y(const TorusGrid& g, int m);

FloquetInvariant kane_mele_floquet_invariant(const FloquetDrive& d, double phase0, double phase1,
                                             const FloquetOptions& opt = {});

}  // namespace dkpair
