#pragma once

#include <string>
#include <vector>

#include "dkpair/kclass.hpp"

namespace dkpair {

// A character: n derivations along grid axes, a trace normalization, the sign
// eps of the trace under star and its parity under the real structure.
struct CycleSpec {
  std::string name;
  int n = 0;
  std::vector<int> axes;
  double norm_const = 1.0;
  int sign = 1;
  int parity = 1;
};

CycleSpec ch0();
CycleSpec ch1(int axis = 0);
CycleSpec ch2(int axis1 = 0, int axis2 = 1);

struct PairingValue {
  cplx value;
  std::string cycle;
  int clifford_k = 0;
};

// sum over permutations s of sgn(s) * mean Tr j_k(L (X - E) D_s(1) ... D_s(n)),
// with L the identity when left is null.
cplx character_sum(const AlgElement& X, const AlgElement& E, const std::vector<AlgElement>& D,
                   const AlgElement* left = nullptr);
// mean Tr j_k(a b), computed from the blade pairs that multiply to the top blade.
cplx top_trace_product(const AlgElement& a, const AlgElement& b);

PairingValue pair(const CycleSpec& cycle, const OsuElement& x, const BasePoint& e);
// Unchecked variant for arbitrary base elements (e.g. lifted or non-standard ones).
PairingValue pair_raw(const CycleSpec& cycle, const AlgElement& x, const AlgElement& e);

// [[0, U*], [U, 0]] as U_1 (x) rho_1 + U_2 (x) rho_2 in Cl_2.
AlgElement unitary_class(const AlgElement& U);
// Line integral of Tr((U* - 1) dU) along the axis, averaged over the other axes.
cplx winding_number(const AlgElement& U, int axis = 0);
// 2 pi i mean Tr(p [d1 p, d2 p]).
double chern_number(const AlgElement& p, int axis1 = 0, int axis2 = 1);

enum class Ray { Real, Imaginary, Zero };

struct SelectionRule {
  int n = 0;
  int sign = 1;
  int parity = 1;
  bool by_degree = false;
  CliffordSignature signature{};
  int degree = 0;
  bool may_pair = false;
  Ray ray = Ray::Zero;
  std::string reason;
};

// Clifford signature form, on a trivially graded host algebra.
SelectionRule selection_rule(int n, int sign, int parity, CliffordSignature sig);
// KO-degree form.
SelectionRule selection_rule_degree(int n, int sign, int parity, int degree);

cplx pimsner_constant(int n);

// How the suspension generator is weighted. GradedMod2 applies the j functional
// with the Z_2-degree of the form; IntegerDegree uses the integer form degree,
// which multiplies the result by (-1)^{mu(n+1)}.
enum class SuspensionConvention { GradedMod2, IntegerDegree };

// base carries k+1 generators, where k is the generator count of the classes
// the loop suspends.
PairingValue pair_suspended(const CycleSpec& cycle, const LoopElement& loop,
                            const AlgElement& base,
                            SuspensionConvention conv = SuspensionConvention::GradedMod2);

// Class in R / alpha Z.
struct TorsionValue {
  double value = 0.0;
  double modulus = 1.0;
  double imag_residual = 0.0;

  double reduced() const;
  // Distance in R / alpha Z.
  double distance(const TorsionValue& o) const;
  double distance_to(double v) const;
  bool is_zero(double tol) const { return distance_to(0.0) <= tol; }
  bool has_order_two(double tol) const;
  // For order-two values: 0 for the zero class, 1 for alpha/2.
  int z2_class() const;
};

inline constexpr double kModulusKO = 2.0;
double kane_mele_modulus();

TorsionValue torsion_pairing_closed_form(const CycleSpec& cycle, const OsuElement& x,
                                         const BasePoint& e, const AlgElement& y,
                                         double modulus);
// i^n (<xi, x> + <xi, x~>) / 2 with x~ = -i y x relative to e~ = -i y e; even n only.
TorsionValue torsion_pairing_simple(const CycleSpec& cycle, const OsuElement& x,
                                    const BasePoint& e, const AlgElement& y, double modulus);
TorsionValue torsion_pairing_via_loop(const CycleSpec& cycle, const LoopElement& loop,
                                      const AlgElement& base, double modulus,
                                      SuspensionConvention conv = SuspensionConvention::GradedMod2);

// Chern number of the positive spectral projection of h1.
double spin_chern(const AlgElement& h1, double gap_tol = 1e-8);

}  // namespace dkpair
