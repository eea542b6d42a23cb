#include <doctest.h>

#include <cmath>
#include <random>

#include "ppk/ellcurve.hpp"

using namespace ppk;

namespace {

// Projective point count by brute force over F_p, using the long Weierstrass
// equation directly (no change of variables).
long count_points(const WeierstrassCurve& e, long p) {
  auto r = [p](const Integer& v) { return mod(v, p).get_si(); };
  const long a1 = r(e.a1), a2 = r(e.a2), a3 = r(e.a3), a4 = r(e.a4), a6 = r(e.a6);
  long count = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a1 * x * y + a3 * y) % p;
      long rhs = (((x * x % p) * x) + a2 * x % p * x + a4 * x + a6) % p;
      if (lhs == rhs) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("discriminants") {
  CHECK(discriminant(WeierstrassCurve::parse("0,0,0,-1,0")) == 64);
  CHECK(discriminant(WeierstrassCurve::parse("0,0,0,0,0")) == 0);
  // frozen regression value for the case-5 Frey curve with z = 23, y = 1
  CHECK(discriminant(WeierstrassCurve::parse("1,17,0,3,0")) == 41121);
}

TEST_CASE("j-invariants") {
  CHECK(j_invariant(WeierstrassCurve::parse("0,0,0,-1,0")) == RationalJ{1728, 1});
  RationalJ j45 = j_invariant(WeierstrassCurve::parse("1,-1,0,0,-5"));
  CHECK(j45.denominator % 15 == 0);
  CHECK(j_invariant(WeierstrassCurve::parse("0,-1,1,0,0")).denominator % 11 == 0);
  CHECK_THROWS_AS(j_invariant(WeierstrassCurve::parse("0,0,0,0,0")), Error);
}

TEST_CASE("traces of Frobenius") {
  WeierstrassCurve e = WeierstrassCurve::parse("0,0,0,-1,0");
  CHECK(ap_trace(e, 5) == -2);
  CHECK(ap_trace(e, 3) == 0);
  CHECK_THROWS_AS(ap_trace(e, 2), Error);
}

TEST_CASE("trace agrees with a brute-force count and the Hasse bound") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coeff(-20, 20);
  const std::vector<long> primes = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
  int checked = 0;
  while (checked < 200) {
    WeierstrassCurve e = WeierstrassCurve::from_ainvs({coeff(rng), coeff(rng), coeff(rng), coeff(rng), coeff(rng)});
    long p = primes[pick(rng)];
    Integer d = discriminant(e);
    if (d == 0 || mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    Integer a = ap_trace(e, p);
    CHECK(a == p + 1 - count_points(e, p));
    CHECK(a * a <= 4 * p);
    ++checked;
  }
}

TEST_CASE("coordinate changes preserve the invariants") {
  WeierstrassCurve e = WeierstrassCurve::parse("1,-1,0,0,-5");
  WeierstrassCurve f = change_coordinates(e, 3, -2, 7);
  CHECK(discriminant(f) == discriminant(e));
  CHECK(j_invariant(f) == j_invariant(e));
  CHECK(ap_trace(f, 7) == ap_trace(e, 7));
  CHECK(WeierstrassCurve::parse(e.format()) == e);
  CHECK_THROWS_AS(WeierstrassCurve::parse("1,2,3"), Error);
}
