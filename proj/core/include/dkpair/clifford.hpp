#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dkpair {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr int kMaxGenerators = 8;

// floor(k/2), valid for negative k as well.
int mu(int k);
// mu(k) - mu(k-1): 1 for even k, 0 for odd k.
int mu_prime(int k);
// i^n for any integer n.
cplx ipow(int n);

int popcount(unsigned mask);
// Sign of e_S e_T = sign * e_{S xor T}; bit j-1 of a mask stands for rho_j.
int blade_sign(unsigned S, unsigned T);

struct CliffordSignature {
  int r = 0;
  int s = 0;
  int k() const { return r + s; }
  bool operator==(const CliffordSignature&) const = default;
};

// Element of the complex Clifford algebra Cl_k stored as 2^k coefficients,
// one per ascending blade e_S = rho_{i1} ... rho_{ij}.
class Multivector {
 public:
  Multivector() : Multivector(0) {}
  explicit Multivector(int k);

  static Multivector scalar(int k, cplx c);
  static Multivector blade(int k, unsigned S, cplx c = 1.0);
  // rho_i with 1 <= i <= k.
  static Multivector generator(int k, int i);

  int k() const { return k_; }
  std::size_t size() const { return c_.size(); }
  unsigned full_mask() const { return static_cast<unsigned>(c_.size() - 1); }

  cplx operator[](unsigned S) const { return c_[S]; }
  cplx& operator[](unsigned S) { return c_[S]; }
  const std::vector<cplx>& coeffs() const { return c_; }

  Multivector operator+(const Multivector& o) const;
  Multivector operator-(const Multivector& o) const;
  Multivector operator-() const;
  Multivector operator*(const Multivector& o) const;
  Multivector operator*(cplx z) const;
  friend Multivector operator*(cplx z, const Multivector& a) { return a * z; }

  Multivector star() const;
  Multivector grade_involution() const;
  Multivector even_part() const;
  Multivector odd_part() const;
  bool is_even() const;
  bool is_odd() const;

  bool operator==(const Multivector& o) const = default;

 private:
  int k_;
  std::vector<cplx> c_;
};

Multivector mv_mul(const Multivector& a, const Multivector& b);
Multivector mv_star(const Multivector& a);
// Gamma_k = i^{-mu(k)} rho_1 ... rho_k.
Multivector gamma_element(int k);
// The antilinear real structure fixing rho_1..rho_r and negating rho_{r+1}..rho_{r+s}.
Multivector real_structure_l(const CliffordSignature& sig, const Multivector& a);
// Coefficient of Gamma_k.
cplx j_functional(const Multivector& a);
double max_abs_diff(const Multivector& a, const Multivector& b);

// Cl_2 realized on C^2 with rho_1 = sigma_x, rho_2 = sigma_y.
Eigen::Matrix2cd cl2_matrix(const Multivector& a);

namespace pauli {
Eigen::Matrix2cd id();
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
}  // namespace pauli

}  // namespace dkpair
