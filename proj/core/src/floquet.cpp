#include "dkpair/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dkpair/errors.hpp"
#include "dkpair/quadrature.hpp"
#include "parallel.hpp"

namespace dkpair {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double wrap(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

// exp(c A) for anti-Hermitian A, pointwise.
AlgElement expm_skew(const AlgElement& A, double c) {
  AlgElement out(A.grid(), A.m(), 0);
  const std::size_t P = A.points();
  DKPAIR_PARALLEL_FOR
  for (std::size_t p = 0; p < P; ++p) {
    const Mat B = kI * A.block(p, 0);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (B + B.adjoint()));
    const Eigen::VectorXcd ph =
        es.eigenvalues().unaryExpr([c](double l) { return std::polar(1.0, -c * l); });
    out.block(p, 0) = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  }
  return out;
}

double unitarity(const AlgElement& V) {
  return distance(alg_star(V) * V, AlgElement::identity(V.grid(), V.m(), 0));
}

struct BranchData {
  std::vector<Eigen::VectorXd> phi;
  double margin = 0.0;
  std::size_t worst = 0;
};

BranchData branch_phases(const FloquetSpectrum& s, double theta) {
  BranchData b;
  b.margin = kTwoPi;
  b.phi.resize(s.arg.size());
  for (std::size_t p = 0; p < s.arg.size(); ++p) {
    Eigen::VectorXd f(s.arg[p].size());
    for (Eigen::Index j = 0; j < f.size(); ++j) {
      const double d = wrap(s.arg[p](j) - theta);
      f(j) = theta + d;
      const double g = std::min(d, kTwoPi - d);
      if (g < b.margin) {
        b.margin = g;
        b.worst = p;
      }
    }
    b.phi[p] = f;
  }
  return b;
}

// Evaluates V(t) = U(t) Q diag(e^{-i t phi / T}) Q*.
class Periodizer {
 public:
  Periodizer(const FloquetDrive& d, const BranchChoice& b, double gap_tol)
      : d_(d), spec_(floquet_spectrum(d)) {
    BranchData bd = branch_phases(spec_, b.eps * d.period());
    if (bd.margin < gap_tol)
      throw GapClosedError("an eigenphase of U(T) lies on the branch cut at grid point " +
                               std::to_string(bd.worst) + " (distance " + fmt(bd.margin) + ")",
                           bd.worst, bd.margin);
    phi_ = std::move(bd.phi);
    AlgElement H(d.grid(), d.m(), 0);
    for (std::size_t p = 0; p < H.points(); ++p)
      H.block(p, 0) = spec_.Q[p] * (-phi_[p] / d.period()).asDiagonal() * spec_.Q[p].adjoint();
    heff_ = std::move(H);
  }

  AlgElement exp_heff(double t) const {
    AlgElement E(d_.grid(), d_.m(), 0);
    const std::size_t P = E.points();
    DKPAIR_PARALLEL_FOR
    for (std::size_t p = 0; p < P; ++p) {
      const double T = d_.period();
      const Eigen::VectorXcd ph = phi_[p].unaryExpr([&](double f) { return std::polar(1.0, -t * f / T); });
      E.block(p, 0) = spec_.Q[p] * ph.asDiagonal() * spec_.Q[p].adjoint();
    }
    return E;
  }

  AlgElement value(double t) const { return evolve(d_, t) * exp_heff(t); }
  const AlgElement& heff() const { return heff_; }

 private:
  const FloquetDrive& d_;
  FloquetSpectrum spec_;
  std::vector<Eigen::VectorXd> phi_;
  AlgElement heff_;
};

}  // namespace

FloquetDrive::FloquetDrive(std::vector<DriveSegment> segments, double herm_tol)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("drive has no segments");
  for (const auto& s : segments_) {
    if (!(s.duration > 0.0)) throw ValidationError("drive segment durations must be positive");
    if (!s.H.same_shape(segments_.front().H) || s.H.k() != 0)
      throw ShapeError("drive segments must be k = 0 fields of the same shape");
    const double h = distance(s.H, alg_star(s.H));
    if (h > herm_tol * std::max(1.0, norm(s.H)))
      throw ValidationError("drive segment Hamiltonian is not Hermitian (residual " + fmt(h) + ")");
  }
  const std::size_t P = grid().points();
  for (const auto& s : segments_) {
    starts_.push_back(period_);
    period_ += s.duration;
    std::vector<Eigen::VectorXd> ev(P);
    std::vector<Mat> V(P);
    DKPAIR_PARALLEL_FOR
    for (std::size_t p = 0; p < P; ++p) {
      const Mat h = s.H.block(p, 0);
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
      ev[p] = es.eigenvalues();
      V[p] = es.eigenvectors();
    }
    evals_.push_back(std::move(ev));
    evecs_.push_back(std::move(V));
  }
}

AlgElement FloquetDrive::segment_exponential(std::size_t j, double tau) const {
  AlgElement out(grid(), m(), 0);
  const std::size_t P = grid().points();
  const auto& ev = evals_.at(j);
  const auto& V = evecs_.at(j);
  DKPAIR_PARALLEL_FOR
  for (std::size_t p = 0; p < P; ++p) {
    const Eigen::VectorXcd ph = ev[p].unaryExpr([tau](double l) { return std::polar(1.0, -l * tau); });
    out.block(p, 0) = V[p] * ph.asDiagonal() * V[p].adjoint();
  }
  return out;
}

double time_reversal_residual(const FloquetDrive& d, const RealStructureSpec& rs) {
  const auto& s = d.segments();
  const std::size_t J = s.size();
  double r = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const auto& mirror = s[J - 1 - j];
    r = std::max(r, std::abs(s[j].duration - mirror.duration));
    r = std::max(r, distance(apply_real_structure(rs, s[j].H), mirror.H));
  }
  return r;
}

AlgElement evolve(const FloquetDrive& d, double t) {
  if (t < 0.0) throw ValidationError("evolve needs t >= 0");
  const double T = d.period();
  double q = std::floor(t / T);
  double r = t - q * T;
  if (r > T * (1 - 1e-15)) {
    r = 0.0;
    q += 1;
  }
  AlgElement U = AlgElement::identity(d.grid(), d.m(), 0);
  const auto& segs = d.segments();
  if (q > 0) {
    AlgElement UT = U;
    for (std::size_t j = 0; j < segs.size(); ++j) UT = d.segment_exponential(j, segs[j].duration) * UT;
    for (long i = 0; i < static_cast<long>(q); ++i) U = UT * U;
  }
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double t0 = d.segment_start(j);
    if (r <= t0) break;
    const double tau = std::min(r - t0, segs[j].duration);
    U = d.segment_exponential(j, tau) * U;
  }
  return U;
}

FloquetSpectrum floquet_spectrum(const FloquetDrive& d) {
  const AlgElement UT = evolve(d, d.period());
  const std::size_t P = UT.points();
  FloquetSpectrum s;
  s.Q.resize(P);
  s.arg.resize(P);
  std::vector<double> res(P);
  DKPAIR_PARALLEL_FOR
  for (std::size_t p = 0; p < P; ++p) {
    Eigen::ComplexSchur<Mat> cs(UT.block(p, 0));
    const Mat& Tm = cs.matrixT();
    res[p] = Tm.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
    s.Q[p] = cs.matrixU();
    Eigen::VectorXd a(Tm.rows());
    for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = wrap(std::arg(Tm(j, j)));
    s.arg[p] = a;
  }
  s.schur_residual = *std::max_element(res.begin(), res.end());
  if (s.schur_residual > 1e-10)
    throw ConvergenceError("Floquet operator is not diagonalized by its Schur form (residual " +
                           fmt(s.schur_residual) + ")");
  return s;
}

EffectiveHamiltonian effective_hamiltonian(const FloquetDrive& d, const BranchChoice& b,
                                           double gap_tol) {
  const FloquetSpectrum s = floquet_spectrum(d);
  const BranchData bd = branch_phases(s, b.eps * d.period());
  if (bd.margin < gap_tol)
    throw GapClosedError("an eigenphase of U(T) lies on the branch cut at grid point " +
                             std::to_string(bd.worst) + " (distance " + fmt(bd.margin) + ")",
                         bd.worst, bd.margin);
  EffectiveHamiltonian e;
  e.H = AlgElement(d.grid(), d.m(), 0);
  for (std::size_t p = 0; p < e.H.points(); ++p)
    e.H.block(p, 0) = s.Q[p] * (-bd.phi[p] / d.period()).asDiagonal() * s.Q[p].adjoint();
  e.gap_margin = bd.margin;
  e.schur_residual = s.schur_residual;
  return e;
}

ArcProjection arc_projection(const FloquetDrive& d, double phase0, double phase1, double gap_tol) {
  const FloquetSpectrum s = floquet_spectrum(d);
  double L = wrap(phase1 - phase0);
  if (L == 0.0) L = kTwoPi;
  ArcProjection a;
  a.z0 = std::polar(1.0, phase0);
  a.z1 = std::polar(1.0, phase1);
  a.P = AlgElement(d.grid(), d.m(), 0);
  a.gap_margin = kTwoPi;
  int rank0 = -1;
  for (std::size_t p = 0; p < a.P.points(); ++p) {
    Eigen::VectorXd sel = Eigen::VectorXd::Zero(s.arg[p].size());
    int rank = 0;
    for (Eigen::Index j = 0; j < sel.size(); ++j) {
      const double delta = wrap(s.arg[p](j) - phase0);
      const double g = std::min({delta, std::abs(delta - L), kTwoPi - delta});
      if (g < gap_tol)
        throw GapClosedError("an eigenphase of U(T) meets an arc endpoint at grid point " +
                                 std::to_string(p) + " (distance " + fmt(g) + ")",
                             p, g);
      a.gap_margin = std::min(a.gap_margin, g);
      if (delta < L) {
        sel(j) = 1.0;
        ++rank;
      }
    }
    if (rank0 >= 0 && rank != rank0)
      throw ValidationError("arc projection rank jumps from " + std::to_string(rank0) + " to " +
                            std::to_string(rank) + " at grid point " + std::to_string(p));
    rank0 = rank;
    a.P.block(p, 0) = s.Q[p] * sel.cast<cplx>().asDiagonal() * s.Q[p].adjoint();
  }
  a.rank = rank0;
  return a;
}

LoopElement periodized_evolution(const FloquetDrive& d, const BranchChoice& b, int nodes,
                                 bool half, double gap_tol) {
  const Periodizer V(d, b, gap_tol);
  const double T = d.period();
  const double tmax = half ? T / 2 : T;
  std::vector<LoopSegment> segs;
  for (std::size_t j = 0; j < d.segments().size(); ++j) {
    const double a = d.segment_start(j);
    const double e = std::min(a + d.segments()[j].duration, tmax);
    if (e <= a) break;
    const int n = std::max(8, static_cast<int>(std::lround(nodes * (e - a) / T)));
    LoopSegment seg;
    seg.t0 = a / T;
    seg.t1 = e / T;
    seg.start = V.value(a);
    seg.end = V.value(e);
    const AlgElement& H = d.hamiltonian(j);
    for (const auto& q : gauss_legendre(n, a, e)) {
      AlgElement v = V.value(q.t);
      AlgElement dv = (-kI * T) * (H * v) + (kI * T) * (v * V.heff());
      seg.nodes.push_back({q.t / T, q.w / T, std::move(v), std::move(dv)});
    }
    segs.push_back(std::move(seg));
  }
  return LoopElement(std::move(segs));
}

double periodicity_residual(const FloquetDrive& d, const BranchChoice& b, double gap_tol) {
  const Periodizer V(d, b, gap_tol);
  return distance(V.value(d.period()), V.value(0.0));
}

double evolution_symmetry_residual(const FloquetDrive& d, const BranchChoice& b,
                                   const RealStructureSpec& rs, int samples, double gap_tol) {
  const Periodizer V(d, b, gap_tol);
  const double T = d.period();
  double r = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = T * i / samples;
    r = std::max(r, distance(apply_real_structure(rs, V.value(t)), V.value(T - t)));
  }
  return r;
}

double degree_t3(const LoopElement& V, int axis1, int axis2) {
  if (!V.periodic()) throw ValidationError("degree_t3: loop is not closed");
  double u = 0.0;
  cplx total = 0.0;
  for (const auto& seg : V.segments())
    for (const auto& nd : seg.nodes) {
      if (nd.value.k() != 0) throw ShapeError("degree_t3 expects k = 0 fields");
      u = std::max(u, unitarity(nd.value));
      const AlgElement Vs = alg_star(nd.value);
      const std::array<AlgElement, 3> A{Vs * nd.dt, Vs * apply_derivation(nd.value, axis1),
                                        Vs * apply_derivation(nd.value, axis2)};
      // Sum over S_3 of sgn * Tr(A_a A_b A_c); cyclic terms agree under the trace.
      const cplx t = trace(A[0] * (A[1] * A[2] - A[2] * A[1]))[0];
      total += nd.weight * 3.0 * t;
    }
  if (u > 1e-9) throw ValidationError("degree_t3: loop is not unitary (" + fmt(u) + ")");
  const cplx deg = total / 6.0;
  if (std::abs(deg.imag()) > 1e-6 * std::max(1.0, std::abs(deg.real())))
    throw ConvergenceError("degree_t3 has an imaginary part " + fmt(deg.imag()));
  return deg.real();
}

namespace {

AlgElement contraction_generator(const AlgElement& V_half, const AlgElement& y) {
  if (V_half.k() != 0 || y.k() != 0 || !V_half.same_shape(y))
    throw ShapeError("contraction needs k = 0 fields of one shape");
  const AlgElement one = AlgElement::identity(y.grid(), y.m(), 0);
  const double sa = distance(V_half, alg_star(V_half));
  const double sq = distance(V_half * V_half, one);
  if (sa > 1e-9 || sq > 1e-9)
    throw ValidationError("V(1/2) is not a self-adjoint unitary (" + fmt(sa) + ", " + fmt(sq) +
                          "); the involution contraction does not apply");
  const double ya = norm(y + alg_star(y)), yu = distance(y * y, -1.0 * one);
  if (ya > 1e-10 || yu > 1e-10) throw ValidationError("y is not an anti-self-adjoint unitary");
  const double c = distance(y * V_half, V_half * y);
  if (c > 1e-9) throw ValidationError("V(1/2) does not commute with y (" + fmt(c) + ")");
  return y * (0.5 * (one - V_half));
}

}  // namespace

LoopSegment involution_contraction(const AlgElement& V_half, const AlgElement& y, int nodes) {
  const AlgElement A = contraction_generator(V_half, y);
  LoopSegment seg;
  seg.t0 = 0.5;
  seg.t1 = 1.0;
  seg.start = expm_skew(A, kPi);
  seg.end = expm_skew(A, 0.0);
  for (const auto& q : gauss_legendre(nodes, 0.5, 1.0)) {
    AlgElement v = expm_skew(A, kPi * (2 - 2 * q.t));
    AlgElement dv = (-2 * kPi) * (A * v);
    seg.nodes.push_back({q.t, q.w, std::move(v), std::move(dv)});
  }
  return seg;
}

std::vector<AlgElement> involution_contraction_samples(const AlgElement& V_half,
                                                       const AlgElement& y, int nt) {
  if (nt < 2) throw ValidationError("need at least two contraction samples");
  const AlgElement A = contraction_generator(V_half, y);
  std::vector<AlgElement> out;
  for (int i = 0; i < nt; ++i) {
    const double s = 0.5 + 0.5 * i / (nt - 1);
    out.push_back(expm_skew(A, kPi * (2 - 2 * s)));
  }
  return out;
}

LoopElement half_bott_completed_loop(const AlgElement& P, const AlgElement& y, int nodes) {
  const AlgElement one = AlgElement::identity(P.grid(), P.m(), 0);
  LoopSegment first;
  first.t0 = 0.0;
  first.t1 = 0.5;
  auto val = [&](double s) { return one + (std::polar(1.0, -kTwoPi * s) - 1.0) * P; };
  first.start = val(0.0);
  first.end = val(0.5);
  for (const auto& q : gauss_legendre(std::max(8, nodes / 2), 0.0, 0.5))
    first.nodes.push_back({q.t, q.w, val(q.t), (-kI * kTwoPi * std::polar(1.0, -kTwoPi * q.t)) * P});
  LoopSegment second = involution_contraction(one - 2.0 * P, y, std::max(8, nodes / 2));
  return LoopElement({std::move(first), std::move(second)});
}

ContractionCheck check_contraction(const LoopSegment& c, const AlgElement& V_half,
                                   const RealStructureSpec& rs) {
  if (std::abs(c.t0 - 0.5) > 1e-14 || std::abs(c.t1 - 1.0) > 1e-14)
    throw ValidationError("contraction must cover s in [1/2, 1]");
  ContractionCheck r;
  r.start = distance(c.start, V_half);
  r.end = distance(c.end, AlgElement::identity(V_half.grid(), V_half.m(), 0));
  auto upd = [&](const AlgElement& v) {
    r.unitary = std::max(r.unitary, unitarity(v));
    r.symmetry = std::max(r.symmetry, distance(apply_real_structure(rs, v), v));
  };
  upd(c.start);
  upd(c.end);
  for (const auto& nd : c.nodes) upd(nd.value);
  return r;
}

RealStructureSpec kane_mele_real_structure() {
  RealStructureSpec rs;
  rs.fiber = FiberReal::Quaternionic;
  rs.momentum_flip = true;
  return rs;
}

AlgElement spin_y(const TorusGrid& g, int m) {
  if (m % 2 != 0) throw ShapeError("spin_y needs an even matrix size");
  Mat y = Mat::Zero(m, m);
  y.topLeftCorner(m / 2, m / 2) = -kI * Mat::Identity(m / 2, m / 2);
  y.bottomRightCorner(m / 2, m / 2) = kI * Mat::Identity(m / 2, m / 2);
  return AlgElement::constant(g, 0, 0, y);
}

FloquetInvariant kane_mele_floquet_invariant(const FloquetDrive& d, double phase0, double phase1,
                                             const FloquetOptions& opt) {
  const RealStructureSpec rs = kane_mele_real_structure();
  FloquetInvariant out;
  out.phase0 = phase0;
  out.phase1 = phase1;
  out.time_reversal_residual = time_reversal_residual(d, rs);
  if (out.time_reversal_residual > opt.tol)
    throw ValidationError("drive is not time-reversal invariant (residual " +
                          fmt(out.time_reversal_residual) + ")");
  const ArcProjection arc = arc_projection(d, phase0, phase1, opt.gap_tol);
  out.rank = arc.rank;
  out.gap_margin = arc.gap_margin;
  double L = wrap(phase1 - phase0);
  if (L == 0.0) L = kTwoPi;
  const double T = d.period();
  const BranchChoice b0 = BranchChoice::from_phase(phase0, T);
  const BranchChoice b1 = BranchChoice::from_phase(phase0 + L, T);
  const EffectiveHamiltonian H0 = effective_hamiltonian(d, b0, opt.gap_tol);
  const EffectiveHamiltonian H1 = effective_hamiltonian(d, b1, opt.gap_tol);
  out.gap_margin = std::min({out.gap_margin, H0.gap_margin, H1.gap_margin});
  out.branch_identity_residual = distance((kI * kTwoPi) * arc.P, (-kI * T) * (H1.H - H0.H));
  out.periodicity_residual =
      std::max(periodicity_residual(d, b0, opt.gap_tol), periodicity_residual(d, b1, opt.gap_tol));
  out.symmetry_residual = std::max(evolution_symmetry_residual(d, b0, rs, 16, opt.gap_tol),
                                   evolution_symmetry_residual(d, b1, rs, 16, opt.gap_tol));
  const AlgElement y = opt.y ? *opt.y : spin_y(d.grid(), d.m());

  auto finish = [&](double k) {
    const double r = std::nearbyint(k);
    if (std::abs(k - r) > 1e-3)
      throw ConvergenceError("K(P) = " + std::to_string(k) + " is not close to an integer");
    out.K = TorsionValue{k, 2.0, 0.0};
    out.z2 = ((static_cast<int>(r) % 2) + 2) % 2;
    return out;
  };

  if (opt.strategy == ContractionStrategy::Decoupled) {
    double comm = 0.0;
    for (const auto& s : d.segments()) comm = std::max(comm, distance(s.H * y, y * s.H));
    if (comm > opt.tol)
      throw ValidationError("decoupled strategy needs a drive commuting with y (residual " +
                            fmt(comm) + ")");
    const int h = d.m() / 2;
    AlgElement P1(d.grid(), h, 0);
    for (std::size_t p = 0; p < P1.points(); ++p) P1.block(p, 0) = arc.P.block(p, 0).topLeftCorner(h, h);
    out.spin_chern = chern_number(P1);
    // Where V(1/2) is an involution the degree route is available as a cross-check.
    try {
      double deg[2];
      const BranchChoice* bs[2] = {&b0, &b1};
      for (int i = 0; i < 2; ++i) {
        const LoopElement first = periodized_evolution(d, *bs[i], opt.nodes, true, opt.gap_tol);
        LoopSegment second =
            involution_contraction(first.end(), y, std::max(8, opt.nodes / 2));
        std::vector<LoopSegment> segs = first.segments();
        segs.push_back(std::move(second));
        deg[i] = degree_t3(LoopElement(std::move(segs)));
      }
      out.deg0 = deg[0];
      out.deg1 = deg[1];
    } catch (const ValidationError&) {
    }
    const double k = *out.spin_chern;
    finish(k);
    if (out.deg0 && out.deg1) {
      const long dk = std::lround(*out.deg1 - *out.deg0);
      if (((dk - std::lround(k)) % 2 + 2) % 2 != 0)
        throw ConvergenceError("degree route and spin Chern route disagree mod 2");
    }
    return out;
  }

  if (!opt.contraction0 || !opt.contraction1)
    throw ValidationError("user_supplied strategy needs contractions for both branches");
  double deg[2];
  const BranchChoice* bs[2] = {&b0, &b1};
  const LoopSegment* cs[2] = {&*opt.contraction0, &*opt.contraction1};
  for (int i = 0; i < 2; ++i) {
    const LoopElement first = periodized_evolution(d, *bs[i], opt.nodes, true, opt.gap_tol);
    const ContractionCheck cc = check_contraction(*cs[i], first.end(), rs);
    if (!cc.ok(1e-8))
      throw ValidationError("supplied contraction " + std::to_string(i) + " fails validation (start " +
                            fmt(cc.start) + ", end " + fmt(cc.end) + ", unitary " + fmt(cc.unitary) +
                            ", symmetry " + fmt(cc.symmetry) + ")");
    std::vector<LoopSegment> segs = first.segments();
    segs.push_back(*cs[i]);
    deg[i] = degree_t3(LoopElement(std::move(segs), 1e-8));
  }
  out.deg0 = deg[0];
  out.deg1 = deg[1];
  return finish(deg[1] - deg[0]);
}

}  // namespace dkpair
