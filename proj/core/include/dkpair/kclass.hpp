#pragma once

#include <string>
#include <vector>

#include "dkpair/grid.hpp"

namespace dkpair {

// Pointwise residuals of the three OSU properties.
struct OsuResiduals {
  double odd = 0.0;          // norm of the even part
  double self_adjoint = 0.0; // ||x - x*||
  double square = 0.0;       // ||x^2 - 1||
};
OsuResiduals osu_residuals(const AlgElement& x);

// Odd self-adjoint unitary in M_m(A) (x) Cl_k.
class OsuElement {
 public:
  const AlgElement& body() const { return body_; }
  double tol() const { return tol_; }

  friend OsuElement osu_validate(const AlgElement& x, double tol);

 private:
  OsuElement(AlgElement body, double tol) : body_(std::move(body)), tol_(tol) {}
  AlgElement body_;
  double tol_;
};

// Throws ValidationError naming every failed property with its residual.
OsuElement osu_validate(const AlgElement& x, double tol = 1e-10);

enum class BaseFlavor { StandardRho, SigmaX, Custom };

class BasePoint {
 public:
  // sign * 1 (x) rho_1 in Cl_1.
  static BasePoint standard_rho(const TorusGrid& g, int m, double sign = -1.0);
  // 1 (x) rho_1 in Cl_2 (sigma_x under rho_1, rho_2 -> sigma_x, sigma_y).
  static BasePoint sigma_x(const TorusGrid& g, int m);
  // Must be an OSU killed by every derivation.
  static BasePoint custom(const AlgElement& e, double tol = 1e-10);

  const OsuElement& osu() const { return e_; }
  const AlgElement& body() const { return e_.body(); }
  BaseFlavor flavor() const { return flavor_; }

 private:
  BasePoint(OsuElement e, BaseFlavor f) : e_(std::move(e)), flavor_(f) {}
  OsuElement e_;
  BaseFlavor flavor_;
};

// sign(h) pointwise; h must carry only the scalar blade. Throws GapClosedError
// if some |eigenvalue| < gap_tol.
AlgElement flatten(const AlgElement& h, double gap_tol = 1e-8);
// (1 + sign(h)) / 2.
AlgElement positive_projection(const AlgElement& h, double gap_tol = 1e-8);
// flatten(h) (x) rho in Cl_{k_target}; rho is the last generator.
OsuElement make_osu_from_hamiltonian(const AlgElement& h, int k_target = 1,
                                     double gap_tol = 1e-8);

struct LoopNode {
  double t = 0.0;
  double weight = 0.0;
  AlgElement value;
  AlgElement dt;
};

struct LoopSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  AlgElement start;
  AlgElement end;
  std::vector<LoopNode> nodes;
};

// Piecewise smooth path t in [0,1] -> AlgElement, stored as quadrature nodes
// with the t-derivative at each node.
class LoopElement {
 public:
  LoopElement() = default;
  LoopElement(std::vector<LoopSegment> segments, double tol = 1e-9);

  const std::vector<LoopSegment>& segments() const { return segments_; }
  const AlgElement& start() const { return segments_.front().start; }
  const AlgElement& end() const { return segments_.back().end; }
  bool periodic() const { return periodic_; }
  double closure_residual() const { return closure_; }
  std::size_t node_count() const;
  // OSU residuals maximized over all nodes and segment endpoints.
  OsuResiduals osu_residuals() const;

 private:
  std::vector<LoopSegment> segments_;
  bool periodic_ = false;
  double closure_ = 0.0;
};

// Uniform samples on [t0, t1] including both ends (odd count >= 5). Weights are
// composite Simpson, derivatives fourth-order differences, one-sided at the ends.
LoopSegment uniform_segment(double t0, double t1, std::vector<AlgElement> samples);

// Default number of loop quadrature nodes: 4x the largest momentum axis, at least 32.
int default_loop_nodes(const TorusGrid& g);

// nu(x) nu^-1(e) rho nu(e) nu^-1(x) with nu_t(x) = c_t + s_t x rho, in Cl_{k+1}.
LoopElement bott_loop(const OsuElement& x, const BasePoint& e, int nodes);
// cos(-2 pi t p) (e (x) 1) - sin(-2 pi t p) (1 (x) rho) with p = (1 - xe)/2.
LoopElement simplified_bott_loop(const OsuElement& x, const BasePoint& e, int nodes);

struct PropertyYCheck {
  double even = 0.0;
  double anti_self_adjoint = 0.0;
  double unitary = 0.0;
  double commutes_x = 0.0;
  double commutes_e = 0.0;
  double derivation = 0.0;
  double real = 0.0;
  bool ok(double tol) const;
  std::string describe() const;
};
// y must be k = 0 (scalar blade only); rs is the model's real structure or null.
PropertyYCheck check_property_y(const AlgElement& y, const AlgElement& x, const AlgElement& e,
                                const RealStructureSpec* rs);

// Four segments F_i(t) = c_t a_i + s_t a_{i+1} through e, rho, x, i y rho.
LoopElement torsion_loop(const OsuElement& x, const BasePoint& e, const AlgElement& y,
                         int nodes_per_segment, const RealStructureSpec* rs = nullptr,
                         double tol = 1e-10);

// Residuals of the two half-loop symmetry conditions: the first half under rs
// with the new generator fixed, the second half with it negated.
struct LoopSymmetry {
  double first_half = 0.0;
  double second_half = 0.0;
};
LoopSymmetry torsion_loop_symmetry(const LoopElement& loop, const RealStructureSpec& rs);

}  // namespace dkpair
