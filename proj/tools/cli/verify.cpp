#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cli/fixtures.hpp"
#include "dkpair/errors.hpp"

namespace dkpair::cli {

namespace {

using namespace dkpair::fixtures;
constexpr double kPi = std::numbers::pi;

Check make(std::string name, double residual, double tol, std::string detail = {}) {
  return {std::move(name), residual <= tol, residual, std::move(detail)};
}

std::string num(cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::vector<Check> clifford_suite() {
  std::vector<Check> out;
  double ac = 0, gs = 0, gsq = 0, lg = 0;
  for (int k = 0; k <= kMaxGenerators; ++k) {
    const Multivector one = Multivector::scalar(k, 1.0);
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) {
        const Multivector a = Multivector::generator(k, i), b = Multivector::generator(k, j);
        ac = std::max(ac, max_abs_diff(a * b + b * a, one * (i == j ? 2.0 : 0.0)));
      }
    const Multivector G = gamma_element(k);
    gs = std::max(gs, max_abs_diff(G.star(), G));
    gsq = std::max(gsq, max_abs_diff(G * G, one));
  }
  for (int r = 0; r <= 6; ++r)
    for (int s = 0; r + s <= 6; ++s) {
      const Multivector G = gamma_element(r + s);
      const double sign = mu(r - s) % 2 ? -1.0 : 1.0;
      lg = std::max(lg, max_abs_diff(real_structure_l({r, s}, G), G * sign));
    }
  out.push_back(make("anticommutation", ac, 0.0));
  out.push_back(make("gamma self-adjoint", gs, 0.0));
  out.push_back(make("gamma squares to 1", gsq, 0.0));
  out.push_back(make("real structure on gamma", lg, 0.0));

  Rng rng(20240611);
  const int half = 2;
  const GradedMatrixAlgebra A = GradedMatrixAlgebra::standard(half);
  Mat e = Mat::Zero(2 * half, 2 * half);
  e.topRightCorner(half, half) = Mat::Identity(half, half);
  e.bottomLeftCorner(half, half) = Mat::Identity(half, half);
  double hom = 0, tr = 0;
  auto random_host = [&](int deg) {
    const Mat a = gaussian_integer_matrix(2 * half, 2 * half, rng);
    const int da = static_cast<int>(rng() % 2);
    const Mat ah = da ? A.odd_part(a) : A.even_part(a);
    return std::pair{ah, random_homogeneous(2, (deg + da) % 2, rng)};
  };
  for (int t = 0; t < 64; ++t) {
    const auto [a, u] = random_host(static_cast<int>(rng() % 2));
    const auto [b, v] = random_host(static_cast<int>(rng() % 2));
    const HostCl2 x = HostCl2::pure(a, u), y = HostCl2::pure(b, v);
    hom = std::max(hom, (psi_e(A, x.mul(A, y), e) - psi_e(A, x, e) * psi_e(A, y, e)).cwiseAbs().maxCoeff());
    const Mat P = psi_e(A, x, e);
    const int d = 2 * half;
    const Mat tr2 = P.topLeftCorner(d, d) + P.bottomRightCorner(d, d);
    tr = std::max(tr, std::abs(A.supertrace(x.sigma_z_coefficient()) - 0.5 * A.supertrace(tr2)));
  }
  out.push_back(make("psi_e homomorphism (64 pairs)", hom, 0.0));
  out.push_back(make("j trace identity (64 elements)", tr, 0.0));
  return out;
}

std::vector<Check> selection_suite(int grid) {
  std::vector<Check> out;
  struct Row { int n, sign, parity, degree; bool may; };
  // ch0 pairs with KO_0 and KO_4, ch1 with KO_3 but not KO_1.
  const Row rows[] = {{0, 1, 1, 0, true},  {0, 1, 1, 2, false}, {0, 1, 1, 4, true},
                      {0, 1, 1, 6, false}, {0, 1, 1, 1, false}, {1, 1, 1, 3, true},
                      {1, 1, 1, 1, false}, {1, 1, 1, 2, false}};
  int bad = 0;
  for (const auto& r : rows)
    if (selection_rule_degree(r.n, r.sign, r.parity, r.degree).may_pair != r.may) ++bad;
  out.push_back(make("degree table", bad, 0.0));
  const SelectionRule ko0 = selection_rule(0, 1, 1, {1, 0});
  out.push_back(make("ch0 on Cl_{1,0} may pair on the real ray",
                     ko0.may_pair && ko0.ray == Ray::Real ? 0.0 : 1.0, 0.0));

  Rng rng(7);
  // Chern pairing of a conjugation-symmetric (spinless time-reversal) class.
  const TorusGrid g = TorusGrid::momentum(2, grid);
  const TightBindingModel hr = random_hamiltonian(2, 3, rng, true);
  const AlgElement h = hr.symbol(g);
  const OsuElement x = make_osu_from_hamiltonian(h, 1, 1e-6);
  const SelectionRule r2 = selection_rule(2, 1, -1, {1, 0});
  const cplx v2 = pair(ch2(), x, BasePoint::standard_rho(g, 3)).value;
  out.push_back(make("ch2 vanishes on real-symmetric classes", r2.may_pair ? 1.0 : std::abs(v2), 1e-10,
                     num(v2)));
  // k + n even on a trivially graded algebra.
  const TorusGrid g1 = TorusGrid::momentum(1, grid);
  const OsuElement x1 = make_osu_from_hamiltonian(random_hamiltonian(1, 3, rng).symbol(g1), 1, 1e-6);
  const cplx v1 = pair(ch1(0), x1, BasePoint::standard_rho(g1, 3)).value;
  out.push_back(make("ch1 vanishes for odd k", selection_rule(1, 1, 1, {1, 0}).may_pair ? 1.0 : std::abs(v1),
                     1e-10, num(v1)));
  // KO_2-type classes: ch0 on Cl_{0,1} with imaginary Hermitian coefficients.
  const TorusGrid g0;
  const Mat R = gaussian_integer_matrix(4, 4, rng).real().cast<cplx>();
  const AlgElement h0 = AlgElement::constant(g0, 0, 0u, cplx(0, 1) * (R - R.transpose()));
  const OsuElement xk = osu_validate(flatten(h0, 1e-6).times_blade(1, 1u));
  Mat Sy = Mat::Zero(4, 4);
  Sy.topLeftCorner(2, 2) = pauli::y();
  Sy.bottomRightCorner(2, 2) = pauli::y();
  const cplx v0 = pair(ch0(), xk, BasePoint::custom(AlgElement::constant(g0, 1, 1u, -Sy))).value;
  out.push_back(make("ch0 vanishes on KO_2", selection_rule(0, 1, 1, {0, 1}).may_pair ? 1.0 : std::abs(v0),
                     1e-10, num(v0)));
  return out;
}

std::vector<Check> pimsner_suite(int grid, int tgrid) {
  std::vector<Check> out;
  Rng rng(11);
  const TorusGrid g0;
  const Mat p = random_projection(4, 2, rng, true);
  const OsuElement x0 = osu_validate(AlgElement::constant(g0, 1, 1u, 2.0 * p - Mat::Identity(4, 4)));
  const BasePoint e0 = BasePoint::standard_rho(g0, 4);
  const cplx ref0 = pimsner_constant(0) * pair(ch0(), x0, e0).value;
  const AlgElement base0 = AlgElement::constant(g0, 2, 2u, Mat::Identity(4, 4));
  const cplx s0 = pair_suspended(ch0(), bott_loop(x0, e0, 64), base0, SuspensionConvention::IntegerDegree).value;
  out.push_back(make("n=0 relative error", std::abs(s0 - ref0) / std::abs(ref0), 1e-8, num(s0)));

  const TorusGrid g = TorusGrid::momentum(2, grid);
  const OsuElement x2 = make_osu_from_hamiltonian(qwz(1.0).symbol(g));
  const BasePoint e2 = BasePoint::standard_rho(g, 2);
  const cplx ref2 = pimsner_constant(2) * pair(ch2(), x2, e2).value;
  const AlgElement base2 = AlgElement::identity(g, 2, 0).times_blade(2, 2u);
  const cplx s2 = pair_suspended(ch2(), bott_loop(x2, e2, tgrid), base2, SuspensionConvention::IntegerDegree).value;
  out.push_back(make("n=2 relative error", std::abs(s2 - ref2) / std::abs(ref2), 1e-5, num(s2)));
  return out;
}

std::vector<Check> torsion_suite(int grid, int tgrid) {
  std::vector<Check> out;
  const Ko2Example ko = ko2_generator();
  const OsuElement x = osu_validate(ko.x);
  const BasePoint e = BasePoint::custom(ko.e);
  const TorsionValue c = torsion_pairing_closed_form(ch0(), x, e, ko.y, kModulusKO);
  const TorsionValue l = torsion_pairing_via_loop(ch0(), torsion_loop(x, e, ko.y, 32, &ko.rs), ko.e.lift(2), kModulusKO);
  out.push_back(make("KO_2 loop vs closed form", c.distance(l), 1e-6));
  out.push_back(make("KO_2 generator is 1 mod 2", c.distance_to(1.0), 1e-12));

  const KaneMeleExample km = kane_mele_decoupled(grid);
  const OsuElement xk = osu_validate(km.x);
  const BasePoint ek = BasePoint::custom(km.e);
  const TorsionValue ck = torsion_pairing_closed_form(ch2(), xk, ek, km.y, kane_mele_modulus());
  const TorsionValue lk = torsion_pairing_via_loop(
      ch2(), torsion_loop(xk, ek, km.y, std::max(8, tgrid / 4), &km.rs), km.e.lift(2), kane_mele_modulus());
  out.push_back(make("Kane-Mele loop vs closed form", ck.distance(lk), 1e-6));
  out.push_back(make("Kane-Mele value has order 2", ck.has_order_two(1e-6) ? 0.0 : ck.distance_to(0.0), 1e-6));

  // Doubled class with y = offdiag(1, -1).
  const AlgElement xx = direct_sum(ko.x, ko.x), ee = direct_sum(ko.e, ko.e);
  Mat Y = Mat::Zero(4, 4);
  Y.topRightCorner(2, 2) = Mat::Identity(2, 2);
  Y.bottomLeftCorner(2, 2) = -Mat::Identity(2, 2);
  const AlgElement yy = AlgElement::constant(ko.grid, 0, 0, Y);
  const TorsionValue dd = torsion_pairing_via_loop(
      ch0(), torsion_loop(osu_validate(xx), BasePoint::custom(ee), yy, 32, &ko.rs), ee.lift(2), kModulusKO);
  out.push_back(make("doubled class is 0 mod 2", dd.distance_to(0.0), 1e-6));
  return out;
}

std::vector<Check> ko_suite() {
  std::vector<Check> out;
  Rng rng(3);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + static_cast<int>(rng() % 4), r = static_cast<int>(rng() % (m + 1));
    const Mat p = random_projection(m, r, rng);
    const TorusGrid g0;
    const OsuElement x = osu_validate(AlgElement::constant(g0, 1, 1u, 2.0 * p - Mat::Identity(m, m)));
    worst = std::max(worst, std::abs(pair(ch0(), x, BasePoint::standard_rho(g0, m)).value - cplx(r, 0)));
  }
  out.push_back(make("ch0 equals Tr p", worst, 1e-12));

  double odd = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3), r = static_cast<int>(rng() % (n + 1));
    const Mat p = random_quaternionic_projection(n, r, rng);
    const TorusGrid g0;
    const OsuElement x = osu_validate(AlgElement::constant(g0, 1, 1u, 2.0 * p - Mat::Identity(2 * n, 2 * n)), 1e-9);
    const double v = pair(ch0(), x, BasePoint::standard_rho(g0, 2 * n)).value.real();
    odd = std::max(odd, std::abs(v - 2.0 * std::nearbyint(v / 2.0)));
  }
  out.push_back(make("Kramers classes give even traces", odd, 1e-10));

  const TorusGrid gt({{256, AxisKind::Time}});
  const AlgElement U = AlgElement::field(gt, 2, [](const std::vector<double>& c) {
    return Mat(std::polar(1.0, 2 * kPi * c[0]) * cplx(0, 1) * Mat(pauli::y()));
  });
  const cplx w = pair(ch1(0), osu_validate(unitary_class(U)), BasePoint::sigma_x(gt, 2)).value;
  out.push_back(make("KO_3 winding is 4 pi i", std::abs(w - cplx(0, 4 * kPi)), 1e-10, num(w)));

  const Ko2Example ko = ko2_generator();
  const TorsionValue d = torsion_pairing_closed_form(ch0(), osu_validate(ko.x), BasePoint::custom(ko.e), ko.y, kModulusKO);
  out.push_back(make("KO_2 torsion pairing is 1 mod 2", d.distance_to(1.0), 1e-12));
  const AlgElement yl = cplx(0, -1) * ko.y.lift(1);
  const cplx xt = pair_raw(ch0(), yl * ko.x, yl * ko.e).value;
  out.push_back(make("ch0 of x~ is 2", std::abs(xt - 2.0), 1e-12, num(xt)));
  return out;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"clifford", "selection-rules", "pimsner", "torsion", "ko-examples"};
}

std::vector<Check> run_suite(const std::string& suite, int grid, int tgrid) {
  if (suite == "clifford") return clifford_suite();
  if (suite == "selection-rules") return selection_suite(grid);
  if (suite == "pimsner") return pimsner_suite(grid, tgrid);
  if (suite == "torsion") return torsion_suite(grid, tgrid);
  if (suite == "ko-examples") return ko_suite();
  throw ValidationError("unknown verify suite '" + suite + "'");
}

}  // namespace dkpair::cli
