#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ppk/algebra.hpp"

using namespace ppk;

namespace {

// Sylvester-matrix resultant in doubles: an independent route to Res(f, g).
double sylvester_resultant(const IntPoly& f, const IntPoly& g) {
  const long m = f.degree(), n = g.degree();
  const long size = m + n;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (long r = 0; r < n; ++r)
    for (long i = 0; i <= m; ++i) s(r, r + i) = f[static_cast<std::size_t>(m - i)].get_d();
  for (long r = 0; r < m; ++r)
    for (long i = 0; i <= n; ++i) s(n + r, r + i) = g[static_cast<std::size_t>(n - i)].get_d();
  return s.determinant();
}

IntPoly random_monic(std::mt19937& rng, long degree) {
  std::uniform_int_distribution<int> d(-9, 9);
  std::vector<Integer> c;
  for (long i = 0; i < degree; ++i) c.emplace_back(d(rng));
  c.emplace_back(1);
  return IntPoly(c);
}

}  // namespace

TEST_CASE("resultant against worked values") {
  CHECK(resultant(IntPoly{-2, 0, 1}, IntPoly{-4, 1}) == 14);
  CHECK(resultant(IntPoly{-2, 0, 1}, IntPoly{0, 1}) == -2);
  CHECK(resultant(IntPoly{13, -4, -3, 1}, IntPoly{4, 1}) == 83);
}

TEST_CASE("resultant agrees with a Sylvester determinant") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-6, 6), deg(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    IntPoly f = random_monic(rng, deg(rng));
    std::vector<Integer> gc;
    const int gd = deg(rng) - 1;
    for (int i = 0; i <= gd; ++i) gc.emplace_back(d(rng));
    gc.back() = gc.back() == 0 ? Integer(1) : gc.back();
    IntPoly g(gc);
    // Res(f,g) with the Sylvester convention equals prod g(roots of f) for monic f
    double expect = sylvester_resultant(f, g);
    if (g.degree() == 0) expect = std::pow(g[0].get_d(), static_cast<double>(f.degree()));
    CHECK(resultant(f, g).get_d() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("determinant and characteristic polynomial match Eigen") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-7, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 5;
    IntMatrix m(n);
    Eigen::MatrixXd e(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        int v = d(rng);
        m(r, c) = v;
        e(static_cast<long>(r), static_cast<long>(c)) = v;
      }
    CHECK(determinant(m).get_d() == doctest::Approx(e.determinant()).epsilon(1e-9));
    IntPoly cp = characteristic_polynomial(m);
    REQUIRE(cp.degree() == static_cast<long>(n));
    CHECK(cp.is_monic());
    Eigen::VectorXcd ev = e.eigenvalues();
    for (long i = 0; i < ev.size(); ++i) CHECK(std::abs(evaluate(cp, ev(i))) < 1e-6 * (1 + std::pow(std::abs(ev(i)), n)));
  }
}

TEST_CASE("modular evaluation and roots") {
  CHECK(poly_eval_mod(IntPoly{13, -4, -3, 1}, -4, 83) == 0);
  CHECK(poly_eval_mod(IntPoly{0, 1}, 5, 6) == 5);
  CHECK(poly_eval_mod(IntPoly{-2, 0, 1}, 4, 7) == 0);

  auto r83 = roots_mod_prime(IntPoly{13, -4, -3, 1}, 83);
  CHECK(std::find(r83.begin(), r83.end(), Integer(79)) != r83.end());
  CHECK(roots_mod_prime(IntPoly{-2, 0, 1}, 7) == std::vector<Integer>{3, 4});
  CHECK(roots_mod_prime(IntPoly{-2, 0, 1}, 5).empty());

  // oracle: native arithmetic on small primes
  std::mt19937 rng(3);
  for (long p : {3L, 5L, 7L, 11L, 13L, 29L, 31L}) {
    IntPoly f = random_monic(rng, 3);
    std::vector<Integer> expect;
    for (long r = 0; r < p; ++r) {
      long acc = 0;
      for (long i = f.degree(); i >= 0; --i) acc = ((acc * r + f[static_cast<std::size_t>(i)].get_si()) % p + p) % p;
      if (acc == 0) expect.emplace_back(r);
    }
    CHECK(roots_mod_prime(f, p) == expect);
  }
}

TEST_CASE("realized levels") {
  FactoredLevel a = FactoredLevel::prime_power(2, -1);
  FactoredLevel b = FactoredLevel::prime_power(2, 1) * FactoredLevel::prime_power(5, 1) * FactoredLevel::prime_power(3, 2);
  CHECK(realize_level(a * b) == 45);
  CHECK(realize_level(FactoredLevel{}) == 1);
  CHECK(realize_level(FactoredLevel::prime_power(2, 1) * FactoredLevel::prime_power(7, 2)) == 98);
  CHECK_THROWS_AS(realize_level(a), Error);
  try {
    realize_level(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonIntegralLevel);
  }
  FactoredLevel withn = FactoredLevel::prime_power(13, 2) * FactoredLevel::prime_power(11, 1);
  withn.set_excludes_n(true);
  CHECK(realize_level(withn, 11) == 169);
  CHECK(FactoredLevel::parse(b.to_string()) == b);
}

TEST_CASE("factorization round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Integer n = Integer(static_cast<unsigned long>(rng() >> 4)) * Integer(static_cast<unsigned long>(rng() >> 40)) + 2;
    Integer back = 1;
    for (const auto& [p, e] : factorize(n)) {
      CHECK(is_prime(p));
      back *= ipow(p, static_cast<unsigned long>(e));
    }
    CHECK(back == n);
  }
  CHECK(valuation(Integer(64) * 27, 2) == 6);
  CHECK(valuation(Integer(64) * 27, 3) == 3);
  CHECK(is_power_free(13 * 13, 3));
  CHECK_FALSE(is_power_free(27, 3));
  CHECK(primes_up_to(20) == std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19});
}

TEST_CASE("residue sets of scaled squares") {
  CHECK(ResidueSet::scaled_squares(6, {3, -3}).to_string() == "0,3");
  CHECK(ResidueSet::scaled_squares(5, {3, -3}).to_string() == "0,2,3");
  CHECK(ResidueSet(5, {Integer(-1)}).contains(4));
}

TEST_CASE("parsing helpers reject junk") {
  CHECK(parse_integer("-123") == -123);
  CHECK_THROWS_AS(parse_integer("12a"), Error);
  CHECK_THROWS_AS(parse_integer(""), Error);
  CHECK(format_poly(parse_poly("13,-4,-3,1")) == "13,-4,-3,1");
  CHECK(pretty_poly(IntPoly{13, -4, -3, 1}) == "x^3 - 3*x^2 - 4*x + 13");
  CHECK(join(parse_integer_list("1,-2,3")) == "1,-2,3");
}
