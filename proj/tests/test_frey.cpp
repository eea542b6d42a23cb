#include <doctest.h>

#include <random>

#include "ppk/frey.hpp"

using namespace ppk;

namespace {

Integer pow2(long a) { return ipow(2, static_cast<unsigned long>(a)); }
Integer pow5(long a) { return ipow(5, static_cast<unsigned long>(a)); }

long odd(std::mt19937& rng, int span = 40) {
  std::uniform_int_distribution<int> d(-span, span);
  long v = 2 * d(rng) + 1;
  return v;
}

}  // namespace

TEST_CASE("equation conventions") {
  CHECK_THROWS_AS(TernaryEquation::make(1, 1, 12, 2), Error);   // 4 | C
  CHECK_THROWS_AS(TernaryEquation::make(1, 1, 16, 3), Error);   // 8 | C
  CHECK_THROWS_AS(TernaryEquation::make(0, 1, 3, 2), Error);
  CHECK(TernaryEquation::make(2, 27, 49, 3).n_floor == 11);
  CHECK(TernaryEquation::make(5, 64, 3, 2).n_floor == 7);
}

TEST_CASE("5^a x^n + 64 y^n = 3 z^2 falls in case 5 with level 45") {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> alpha(1, 12);
  std::uniform_int_distribution<int> exps(0, 3);
  const long ns[] = {7, 11, 13, 17};
  for (int trial = 0; trial < 300; ++trial) {
    const long a = alpha(rng);
    TernaryEquation eq = TernaryEquation::make(pow5(a), 64, 3, 2);
    SolutionTriple sol{odd(rng), odd(rng), odd(rng), ns[exps(rng)]};
    Normalized2 norm = classify_case2(eq, sol);
    CHECK(norm.tag.index == 5);
    CHECK(norm.tag.curve == FreyModel::E3);
    CHECK(norm.tag.alpha == -1);
    FactoredLevel artin = artin_level_ppp2(norm.eq, norm.tag);
    CHECK(artin.excludes_n());
    CHECK(realize_level(artin, sol.n) == 45);
    CHECK(newform_level(norm.eq, artin, sol.n) == 45);
    // E3 needs 4 | Cz - 1 after the sign move
    CHECK(mod(norm.sol.z * 3 - 1, 4) == 0);
    WeierstrassCurve e = frey_curve_ppp2(norm.eq, norm.sol, norm.tag);
    CHECK(discriminant(e) != 0);
  }
}

TEST_CASE("other rows of the 2-adic table") {
  // ABCxy odd with y = -BC (mod 4)
  auto c1 = classify_case2(TernaryEquation::make(1, 3, 5, 2), {1, 1, 2, 7});
  CHECK(c1.tag.index == 1);
  CHECK(c1.tag.curve == FreyModel::E1);
  CHECK(c1.tag.alpha == 5);

  auto c5 = classify_case2(TernaryEquation::make(1, 128, 1, 2), {1, 1, 1, 7});
  CHECK(c5.tag.index == 5);
  CHECK(c5.tag.alpha == 0);

  auto c2 = classify_case2(TernaryEquation::make(1, 2, 1, 2), {1, 1, 3, 7});
  CHECK(c2.tag.index == 2);
  CHECK(c2.tag.alpha == 6);

  // a swap is needed when A x is even
  auto sw = classify_case2(TernaryEquation::make(2, 1, 1, 2), {1, 1, 3, 7});
  CHECK(sw.moves.front() == "swap (A,x) <-> (B,y)");
  CHECK(sw.eq.A == 1);

  CHECK_THROWS_AS(classify_case2(TernaryEquation::make(2, 4, 1, 2), {1, 1, 1, 7}), Error);
}

TEST_CASE("case predicates are exclusive under random parity sweeps") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> small(-12, 12), vb(0, 8);
  const long cs[] = {1, 3, 5, 7, 2, 6, 10, 15, -1, -3};
  std::uniform_int_distribution<std::size_t> pick(0, 9);
  int classified = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Integer A = odd(rng, 10);
    Integer B = odd(rng, 10) * pow2(vb(rng));
    Integer C = cs[pick(rng)];
    long x = small(rng), y = small(rng), z = small(rng);
    if (x == 0 || y == 0 || z == 0) continue;
    TernaryEquation eq = TernaryEquation::make(A, B, C, 2);
    try {
      Normalized2 n = classify_case2(eq, {x, y, z, 7});
      ++classified;
      CHECK(n.tag.index >= 1);
      CHECK(n.tag.index <= 5);
      // re-classifying the normalized input lands in the same case with no further moves
      Normalized2 again = classify_case2(n.eq, n.sol);
      CHECK(again.tag.index == n.tag.index);
      CHECK(again.tag.alpha == n.tag.alpha);
      CHECK(again.moves.empty());
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnclassifiableParity);
    }
  }
  CHECK(classified > 300);
}

TEST_CASE("Frey curves from explicit data") {
  TernaryEquation eq = TernaryEquation::make(5, 64, 3, 2);
  Normalized2 n = classify_case2(eq, {1, 1, 23, 7});
  CHECK(frey_curve_ppp2(n.eq, n.sol, n.tag) == WeierstrassCurve::parse("1,17,0,3,0"));

  CaseTag2 t2;
  t2.index = 2;
  t2.curve = FreyModel::E1;
  CHECK(frey_curve_ppp2(TernaryEquation::make(1, 2, 1, 2), {1, 1, 3, 7}, t2) == WeierstrassCurve::parse("0,6,0,2,0"));

  CaseTag2 t3;
  t3.index = 3;
  t3.curve = FreyModel::E2;
  CHECK(frey_curve_ppp2(TernaryEquation::make(1, 4, 1, 2), {1, 1, -1, 7}, t3) == WeierstrassCurve::parse("0,-1,0,1,0"));

  auto e7 = frey_curve_ppp3(TernaryEquation::make(2, 27, 7, 3), {1, 1, 1, 11});
  CHECK(e7.a1 == 21);
  CHECK(e7.a3 == 1323);
  auto e13 = frey_curve_ppp3(TernaryEquation::make(2, 27, 13, 3), {1, 1, 1, 11});
  CHECK(e13.a1 == 39);
  CHECK(e13.a3 == 4563);
  auto ex = frey_curve_ppp3(TernaryEquation::make(128, 3, 1, 3), {1, -1, 5, 7});
  CHECK(ex.a1 == 15);
  CHECK(ex.a3 == -3);
}

TEST_CASE("2-adic level exponent when xy is even and AB odd") {
  TernaryEquation eq = TernaryEquation::make(1, 1, 1, 2);
  Normalized2 n = classify_case2(eq, {1, 4, 1, 7});
  CHECK(n.tag.xy_even);
  FactoredLevel artin = artin_level_ppp2(n.eq, n.tag);
  CHECK(artin.exponent(2) == 1);
  CHECK(realize_level(artin, 7) == 2);
}

TEST_CASE("levels 98 and 338 for 2^a x^n + 27 y^n = C z^3") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> alpha(1, 10), small(-30, 30);
  for (long c : {7L, 13L}) {
    int checked = 0;
    while (checked < 200) {
      long x = small(rng), y = small(rng), z = small(rng);
      if (x == 0 || y == 0 || z == 0 || x % 3 == 0) continue;  // coprime solutions have x prime to 3
      TernaryEquation eq = TernaryEquation::make(pow2(alpha(rng)), 27, c, 3);
      Normalized3 n = normalize_ppp3(eq, {x, y, z, 11});
      Level3 lv = artin_level_ppp3_detail(n.eq, n.sol);
      CHECK(lv.level.excludes_n());
      CHECK(realize_level(lv.level, 11) == 2 * c * c);
      CHECK(lv.eps_row == 5);
      CHECK(discriminant(frey_curve_ppp3(n.eq, n.sol)) != 0);
      ++checked;
    }
  }
}

TEST_CASE("3 | C gives the 3^5 row") {
  TernaryEquation eq = TernaryEquation::make(2, 1, 3, 3);
  Normalized3 n = normalize_ppp3(eq, {1, 1, 1, 11});
  Level3 lv = artin_level_ppp3_detail(n.eq, n.sol);
  CHECK(lv.eps_exponent == 5);
  CHECK(lv.level.exponent(3) == 5);
}

TEST_CASE("normalization moves for signature (n,n,3)") {
  // 3 | A x^n forces a swap
  Normalized3 s = normalize_ppp3(TernaryEquation::make(27, 2, 7, 3), {1, 1, 1, 11});
  CHECK(s.moves == std::vector<std::string>{"swap (A,x) <-> (B,y)"});
  // B y^n = 2 (mod 3) forces a sign change
  Normalized3 t = normalize_ppp3(TernaryEquation::make(1, 2, 7, 3), {1, 1, 1, 11});
  CHECK(t.moves == std::vector<std::string>{"(x,y,z) -> (-x,-y,-z)"});
  CHECK_THROWS_AS(normalize_ppp3(TernaryEquation::make(3, 3, 7, 3), {1, 1, 1, 11}), Error);
}

TEST_CASE("levels never contain the exponent prime") {
  TernaryEquation eq = TernaryEquation::make(pow5(3), 64, 3, 2);
  Normalized2 n = classify_case2(eq, {1, 3, 5, 13});
  FactoredLevel artin = artin_level_ppp2(n.eq, n.tag);
  for (long p : {7L, 11L, 13L, 17L, 19L, 23L}) CHECK(realize_level(artin, p) % p != 0);
  // n | C and n | AB multiply in n^2 and n
  TernaryEquation e7 = TernaryEquation::make(1, 64, 7, 2);
  Normalized2 m = classify_case2(e7, {1, 1, 1, 7});
  FactoredLevel a7 = artin_level_ppp2(m.eq, m.tag);
  CHECK(newform_level(m.eq, a7, 7) == realize_level(a7, 7) * 49);
}

TEST_CASE("curve conductor for signature (n,n,3)") {
  Level3 c = conductor_ppp3(TernaryEquation::make(2, 27, 7, 3), {1, 1, 1, 11});
  // eps_3 prod_{p | C} p^2 prod_{q | ABxy, q != 3} q
  CHECK(realize_level(c.level) % (49 * 2) == 0);
}
