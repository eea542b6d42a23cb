#include "ppk/ellcurve.hpp"

#include <vector>

namespace ppk {

WeierstrassCurve WeierstrassCurve::from_ainvs(const std::array<Integer, 5>& a) {
  return {a[0], a[1], a[2], a[3], a[4]};
}

WeierstrassCurve WeierstrassCurve::parse(std::string_view text) {
  auto v = parse_integer_list(text);
  if (v.size() != 5) throw Error(Errc::ParseError, "curve needs five a-invariants, got '" + std::string(text) + "'");
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string WeierstrassCurve::format() const { return join({a1, a2, a3, a4, a6}); }

Integer WeierstrassCurve::b2() const { return a1 * a1 + 4 * a2; }
Integer WeierstrassCurve::b4() const { return 2 * a4 + a1 * a3; }
Integer WeierstrassCurve::b6() const { return a3 * a3 + 4 * a6; }
Integer WeierstrassCurve::b8() const {
  return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}
Integer WeierstrassCurve::c4() const { return b2() * b2() - 24 * b4(); }
Integer WeierstrassCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }

std::string RationalJ::to_string() const { return ppk::to_string(numerator) + "/" + ppk::to_string(denominator); }

Integer discriminant(const WeierstrassCurve& e) {
  const Integer b2 = e.b2(), b4 = e.b4(), b6 = e.b6(), b8 = e.b8();
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

RationalJ j_invariant(const WeierstrassCurve& e) {
  const Integer delta = discriminant(e);
  if (delta == 0) throw Error(Errc::SingularCurve, "discriminant vanishes for [" + e.format() + "]");
  const Integer c4 = e.c4();
  Integer num = c4 * c4 * c4;
  Integer den = delta;
  Integer g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

namespace {

// Naive double loop; used for p = 2, 3 where completing the square fails.
long count_points_direct(const WeierstrassCurve& e, long p) {
  const Integer P = p;
  const long a1 = mod(e.a1, P).get_si(), a2 = mod(e.a2, P).get_si(), a3 = mod(e.a3, P).get_si();
  const long a4 = mod(e.a4, P).get_si(), a6 = mod(e.a6, P).get_si();
  long count = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % p;
      long rhs = (((x * x + a2 * x + a4) % p) * x + a6) % p;
      if (lhs == rhs) ++count;
    }
  return count;
}

// For odd p: y^2 + (a1 x + a3) y = f(x) has 1 + (D/p) solutions with
// D = (a1 x + a3)^2 + 4 f(x).
long count_points_odd(const WeierstrassCurve& e, long p) {
  const Integer P = p;
  const long a1 = mod(e.a1, P).get_si(), a2 = mod(e.a2, P).get_si(), a3 = mod(e.a3, P).get_si();
  const long a4 = mod(e.a4, P).get_si(), a6 = mod(e.a6, P).get_si();
  std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
  chi[0] = 0;
  for (long y = 1; y < p; ++y) chi[static_cast<std::size_t>(y * y % p)] = 1;
  long count = 1;
  for (long x = 0; x < p; ++x) {
    long h = (a1 * x + a3) % p;
    long f = (((x * x + a2 * x + a4) % p) * x + a6) % p;
    long d = (h * h + 4 * f) % p;
    count += 1 + chi[static_cast<std::size_t>(d)];
  }
  return count;
}

}  // namespace

Integer ap_trace(const WeierstrassCurve& e, long p) {
  if (p < 2 || !is_prime(Integer(p))) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
  if (p > 1000000) throw Error(Errc::InvalidArgument, "prime too large for naive point counting");
  const Integer delta = discriminant(e);
  if (mpz_divisible_ui_p(delta.get_mpz_t(), static_cast<unsigned long>(p)))
    throw Error(Errc::BadReduction, "p = " + std::to_string(p) + " divides the discriminant of [" + e.format() + "]");
  const long points = p <= 3 ? count_points_direct(e, p) : count_points_odd(e, p);
  return Integer(p + 1 - points);
}

WeierstrassCurve change_coordinates(const WeierstrassCurve& e, const Integer& r, const Integer& s, const Integer& t) {
  WeierstrassCurve out;
  out.a1 = e.a1 + 2 * s;
  out.a2 = e.a2 - s * e.a1 + 3 * r - s * s;
  out.a3 = e.a3 + r * e.a1 + 2 * t;
  out.a4 = e.a4 - s * e.a3 + 2 * r * e.a2 - (t + r * s) * e.a1 + 3 * r * r - 2 * s * t;
  out.a6 = e.a6 + r * e.a4 + r * r * e.a2 + r * r * r - t * e.a3 - t * t - r * t * e.a1;
  return out;
}

}  // namespace ppk
