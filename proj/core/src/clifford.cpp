#include "dkpair/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dkpair/errors.hpp"

namespace dkpair {

int mu(int k) {
  // floor division, also for negative k
  return k >= 0 ? k / 2 : -((-k + 1) / 2);
}

int mu_prime(int k) { return mu(k) - mu(k - 1); }

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int popcount(unsigned mask) { return std::popcount(mask); }

int blade_sign(unsigned S, unsigned T) {
  // For every generator t of T count the generators of S with larger index.
  int swaps = 0;
  while (T) {
    const int t = std::countr_zero(T);
    swaps += std::popcount(S >> (t + 1));
    T &= T - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

Multivector::Multivector(int k) : k_(k) {
  if (k < 0 || k > kMaxGenerators)
    throw ShapeError("Clifford generator count out of range: " + std::to_string(k));
  c_.assign(std::size_t{1} << k, cplx{0.0, 0.0});
}

Multivector Multivector::scalar(int k, cplx c) {
  Multivector a(k);
  a.c_[0] = c;
  return a;
}

Multivector Multivector::blade(int k, unsigned S, cplx c) {
  Multivector a(k);
  if (S >= a.size()) throw ShapeError("blade mask outside Cl_k");
  a.c_[S] = c;
  return a;
}

Multivector Multivector::generator(int k, int i) {
  if (i < 1 || i > k) throw ShapeError("generator index out of range");
  return blade(k, 1u << (i - 1));
}

static void require_same(const Multivector& a, const Multivector& b) {
  if (a.k() != b.k())
    throw ShapeError("mismatched Clifford generator counts " + std::to_string(a.k()) +
                     " and " + std::to_string(b.k()));
}

Multivector Multivector::operator+(const Multivector& o) const {
  require_same(*this, o);
  Multivector r(k_);
  for (std::size_t S = 0; S < c_.size(); ++S) r.c_[S] = c_[S] + o.c_[S];
  return r;
}

Multivector Multivector::operator-(const Multivector& o) const {
  require_same(*this, o);
  Multivector r(k_);
  for (std::size_t S = 0; S < c_.size(); ++S) r.c_[S] = c_[S] - o.c_[S];
  return r;
}

Multivector Multivector::operator-() const { return *this * cplx{-1.0, 0.0}; }

Multivector Multivector::operator*(const Multivector& o) const {
  require_same(*this, o);
  Multivector r(k_);
  for (unsigned S = 0; S < c_.size(); ++S) {
    if (c_[S] == cplx{}) continue;
    for (unsigned T = 0; T < o.c_.size(); ++T) {
      if (o.c_[T] == cplx{}) continue;
      const cplx p = c_[S] * o.c_[T];
      if (blade_sign(S, T) > 0)
        r.c_[S ^ T] += p;
      else
        r.c_[S ^ T] -= p;
    }
  }
  return r;
}

Multivector Multivector::operator*(cplx z) const {
  Multivector r(k_);
  for (std::size_t S = 0; S < c_.size(); ++S) r.c_[S] = c_[S] * z;
  return r;
}

Multivector Multivector::star() const {
  Multivector r(k_);
  for (unsigned S = 0; S < c_.size(); ++S) {
    const cplx c = std::conj(c_[S]);
    r.c_[S] = (mu(popcount(S)) & 1) ? -c : c;
  }
  return r;
}

Multivector Multivector::grade_involution() const {
  Multivector r(k_);
  for (unsigned S = 0; S < c_.size(); ++S) r.c_[S] = (popcount(S) & 1) ? -c_[S] : c_[S];
  return r;
}

Multivector Multivector::even_part() const {
  Multivector r(k_);
  for (unsigned S = 0; S < c_.size(); ++S)
    if (!(popcount(S) & 1)) r.c_[S] = c_[S];
  return r;
}

Multivector Multivector::odd_part() const {
  Multivector r(k_);
  for (unsigned S = 0; S < c_.size(); ++S)
    if (popcount(S) & 1) r.c_[S] = c_[S];
  return r;
}

bool Multivector::is_even() const {
  for (unsigned S = 0; S < c_.size(); ++S)
    if ((popcount(S) & 1) && c_[S] != cplx{}) return false;
  return true;
}

bool Multivector::is_odd() const {
  for (unsigned S = 0; S < c_.size(); ++S)
    if (!(popcount(S) & 1) && c_[S] != cplx{}) return false;
  return true;
}

Multivector mv_mul(const Multivector& a, const Multivector& b) { return a * b; }
Multivector mv_star(const Multivector& a) { return a.star(); }

Multivector gamma_element(int k) {
  Multivector g(k);
  g[g.full_mask()] = ipow(-mu(k));
  return g;
}

Multivector real_structure_l(const CliffordSignature& sig, const Multivector& a) {
  if (sig.r < 0 || sig.s < 0 || sig.k() != a.k())
    throw ShapeError("signature (" + std::to_string(sig.r) + "," + std::to_string(sig.s) +
                     ") does not match Cl_" + std::to_string(a.k()));
  const unsigned negated = ((1u << sig.s) - 1u) << sig.r;
  Multivector r(a.k());
  for (unsigned S = 0; S < a.size(); ++S) {
    const cplx c = std::conj(a[S]);
    r[S] = (popcount(S & negated) & 1) ? -c : c;
  }
  return r;
}

cplx j_functional(const Multivector& a) { return a[a.full_mask()] * ipow(mu(a.k())); }

double max_abs_diff(const Multivector& a, const Multivector& b) {
  require_same(a, b);
  double d = 0.0;
  for (std::size_t S = 0; S < a.size(); ++S) d = std::max(d, std::abs(a[S] - b[S]));
  return d;
}

namespace pauli {
Eigen::Matrix2cd id() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Eigen::Matrix2cd cl2_matrix(const Multivector& a) {
  if (a.k() != 2) throw ShapeError("cl2_matrix expects a Cl_2 element");
  return a[0] * pauli::id() + a[1] * pauli::x() + a[2] * pauli::y() +
         a[3] * (pauli::x() * pauli::y());
}

}  // namespace dkpair
