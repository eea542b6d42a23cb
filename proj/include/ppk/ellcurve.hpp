#pragma once

#include <array>
#include <string>

#include "ppk/algebra.hpp"

namespace ppk {

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with
/// integer coefficients.
struct WeierstrassCurve {
  Integer a1, a2, a3, a4, a6;

  static WeierstrassCurve from_ainvs(const std::array<Integer, 5>& a);
  /// "a1,a2,a3,a4,a6"
  static WeierstrassCurve parse(std::string_view text);
  std::string format() const;

  Integer b2() const;
  Integer b4() const;
  Integer b6() const;
  Integer b8() const;
  Integer c4() const;
  Integer c6() const;

  friend bool operator==(const WeierstrassCurve&, const WeierstrassCurve&) = default;
};

/// j = numerator / denominator with gcd 1 and denominator > 0.
struct RationalJ {
  Integer numerator;
  Integer denominator;

  std::string to_string() const;
  friend bool operator==(const RationalJ&, const RationalJ&) = default;
};

Integer discriminant(const WeierstrassCurve& e);

/// c4^3 / Delta in lowest terms. Throws SingularCurve when Delta = 0.
RationalJ j_invariant(const WeierstrassCurve& e);

/// a_p = p + 1 - #E(F_p) by exhaustive point counting. Throws BadReduction
/// when p | Delta. Only meant for small p (the sieve uses primes below 100).
Integer ap_trace(const WeierstrassCurve& e, long p);

/// The model obtained by x = x' + r, y = y' + s x' + t (u = 1).
WeierstrassCurve change_coordinates(const WeierstrassCurve& e, const Integer& r, const Integer& s, const Integer& t);

}  // namespace ppk
