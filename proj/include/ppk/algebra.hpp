#pragma once

// Exact integer, residue, and polynomial arithmetic shared by every module.
//
// Integers are GMP-backed. Polynomials are dense and templated on the
// coefficient scalar so the same type serves exact work (Integer) and the
// numeric cross-checks (double / std::complex<double>).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

#include "ppk/error.hpp"

namespace ppk {

using Integer = mpz_class;

Integer parse_integer(std::string_view text);
std::string to_string(const Integer& value);

/// Canonical residue of `a` in [0, m); m must be positive.
Integer mod(const Integer& a, const Integer& m);

bool is_prime(const Integer& n);
std::vector<long> primes_up_to(long bound);

/// ord_p(value); value must be nonzero and p prime.
long valuation(const Integer& value, const Integer& p);

/// Prime factorization of |value| (value != 0). Trial division then
/// Pollard-Brent for whatever remains.
std::map<Integer, long> factorize(const Integer& value);
std::vector<Integer> prime_divisors(const Integer& value);

/// True if no prime divides `value` to the k-th power.
bool is_power_free(const Integer& value, long k);

/// Exact square root when `value` is a perfect square.
std::optional<Integer> exact_sqrt(const Integer& value);

Integer ipow(const Integer& base, unsigned long exponent);

template <class T>
T scalar_cast(const Integer& v) {
  if constexpr (std::is_same_v<T, Integer>) {
    return v;
  } else if constexpr (std::is_same_v<T, std::complex<double>>) {
    return {v.get_d(), 0.0};
  } else {
    return static_cast<T>(v.get_d());
  }
}

/// Dense univariate polynomial; coefficient i multiplies x^i. The
/// representation never carries trailing zeros, so the zero polynomial is the
/// empty vector and has degree -1.
template <class Scalar>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs) { trim(); }

  static Polynomial constant(const Scalar& c) { return Polynomial(std::vector<Scalar>{c}); }
  static Polynomial x() { return Polynomial(std::vector<Scalar>{Scalar(0), Scalar(1)}); }

  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == Scalar(1); }

  Scalar operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Scalar(0); }
  const Scalar& leading() const { return coeffs_.back(); }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  Polynomial& operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Scalar(0));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Scalar(0));
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == Scalar(0)) coeffs_.pop_back();
  }

  std::vector<Scalar> coeffs_;
};

using IntPoly = Polynomial<Integer>;

/// Horner evaluation of p at x, with coefficients cast into x's type.
template <class T, class S>
T evaluate(const Polynomial<S>& p, const T& x) {
  T acc = T(0);
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    if constexpr (std::is_same_v<S, Integer>)
      acc = acc * x + scalar_cast<T>(*it);
    else
      acc = acc * x + T(*it);
  }
  return acc;
}

/// Comma-separated ascending coefficients, e.g. "13,-4,-3,1". Zero is "0".
IntPoly parse_poly(std::string_view text);
std::string format_poly(const IntPoly& p);
/// Human-readable form, e.g. "x^3 - 3*x^2 - 4*x + 13".
std::string pretty_poly(const IntPoly& p, char var = 'x');

/// Remainder of g modulo a monic f.
IntPoly reduce_mod(const IntPoly& g, const IntPoly& f);

/// Square integer matrix stored row-major; only what the exact norm and
/// characteristic-polynomial routines need.
struct IntMatrix {
  std::size_t n = 0;
  std::vector<Integer> a;

  explicit IntMatrix(std::size_t size) : n(size), a(size * size, 0) {}
  Integer& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

/// Matrix of multiplication by g(theta) on the power basis of Z[x]/(f).
IntMatrix multiplication_matrix(const IntPoly& f, const IntPoly& g);
/// Fraction-free (Bareiss) determinant.
Integer determinant(IntMatrix m);
/// det(tI - M) by Faddeev-LeVerrier; all divisions are exact over Z.
IntPoly characteristic_polynomial(const IntMatrix& m);

/// prod g(theta_i) over the roots of the monic polynomial f. Computed as the
/// determinant of the multiplication-by-g matrix, so it is exact.
Integer resultant(const IntPoly& f, const IntPoly& g);

/// f(a) mod M in [0, M).
Integer poly_eval_mod(const IntPoly& f, const Integer& a, const Integer& modulus);

/// Every r in [0, n) with f(r) = 0 mod n, by exhaustive evaluation.
std::vector<Integer> roots_mod_prime(const IntPoly& f, const Integer& n);

/// Prime -> signed exponent map. Exponents may go negative while a level is
/// being composed from the conductor tables; integrality is only required
/// when the level is realized as an integer.
class FactoredLevel {
 public:
  FactoredLevel() = default;

  static FactoredLevel prime_power(const Integer& p, long exponent);

  const std::map<Integer, long>& factors() const { return factors_; }
  bool excludes_n() const { return excludes_n_; }
  void set_excludes_n(bool flag) { excludes_n_ = flag; }

  long exponent(const Integer& p) const;

  FactoredLevel& operator*=(const FactoredLevel& rhs);
  friend FactoredLevel operator*(FactoredLevel a, const FactoredLevel& b) { return a *= b; }
  friend bool operator==(const FactoredLevel&, const FactoredLevel&) = default;

  /// "2^-1*3^2*5"; "1" when empty.
  std::string to_string() const;
  static FactoredLevel parse(std::string_view text);

 private:
  std::map<Integer, long> factors_;
  bool excludes_n_ = false;
};

/// prod p^e; throws NonIntegralLevel when any merged exponent is negative.
Integer realize_level(const FactoredLevel& level);
/// As above, but with the exponent prime n removed when the level excludes n.
Integer realize_level(const FactoredLevel& level, const Integer& n);

/// Set of canonical residues modulo a positive modulus. Signed inputs such as
/// "+-3" are expanded to their canonical representatives on construction.
class ResidueSet {
 public:
  ResidueSet() = default;
  ResidueSet(Integer modulus, const std::vector<Integer>& values);

  /// Values c*z^2 mod M for every coefficient c and every z.
  static ResidueSet scaled_squares(const Integer& modulus, const std::vector<Integer>& coeffs);

  const Integer& modulus() const { return modulus_; }
  const std::set<Integer>& residues() const { return residues_; }
  bool contains(const Integer& value) const;
  std::string to_string() const;  // "0,3"
  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  Integer modulus_ = 1;
  std::set<Integer> residues_;
};

std::string join(const std::vector<Integer>& values, std::string_view sep = ",");
std::vector<Integer> parse_integer_list(std::string_view text);

}  // namespace ppk
