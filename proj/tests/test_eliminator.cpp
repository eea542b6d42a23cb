#include <doctest.h>

#include <cmath>

#include "ppk/eliminator.hpp"

using namespace ppk;

namespace {

std::vector<NewformRecord> level(long n) {
  StoreOptions o;
  o.data_dir = PPK_DEFAULT_DATA_DIR;
  NewformStore store(o);
  return store.load_level(n, NewformSource::bundled);
}

const NewformRecord& find(const std::vector<NewformRecord>& v, const std::string& label) {
  for (const auto& f : v)
    if (f.label == label) return f;
  throw std::runtime_error("missing " + label);
}

std::set<Integer> abs_norms(const EliminationReport& r) {
  std::set<Integer> out;
  for (const auto& w : r.witnesses)
    for (const auto& e : w.norms) out.insert(abs(e.norm));
  return out;
}

// admissible traces straight from the definition
std::set<Integer> by_definition(long p, int m, bool special) {
  std::set<Integer> out;
  for (long x = -2 * p - 2; x <= 2 * p + 2; ++x) {
    const bool hasse = static_cast<double>(x * x) < 4.0 * static_cast<double>(p);
    const bool cong = m == 2 ? x % 2 == 0 : ((x - (p + 1)) % 3 + 3) % 3 == 0;
    if (hasse && cong) out.insert(x);
    if (special && (x == p + 1 || x == -(p + 1))) out.insert(x);
  }
  return out;
}

}  // namespace

TEST_CASE("admissible traces") {
  auto t53 = admissible_traces(5, 3, Convention::always);
  CHECK(std::set<Integer>(t53.small_set.begin(), t53.small_set.end()) == std::set<Integer>{0, 3, -3});
  CHECK(std::set<Integer>(t53.special_set.begin(), t53.special_set.end()) == std::set<Integer>{6, -6});
  auto t33 = admissible_traces(3, 3, Convention::always);
  CHECK(std::set<Integer>(t33.small_set.begin(), t33.small_set.end()) == std::set<Integer>{1, -2});
  CHECK(std::set<Integer>(t33.special_set.begin(), t33.special_set.end()) == std::set<Integer>{4, -4});
  auto t32 = admissible_traces(3, 2, Convention::always);
  CHECK(std::set<Integer>(t32.small_set.begin(), t32.small_set.end()) == std::set<Integer>{0, 2, -2});

  for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L})
    for (int m : {2, 3})
      for (Convention c : {Convention::always, Convention::never}) {
        auto t = admissible_traces(p, m, c);
        auto cand = t.candidates();
        CHECK(std::set<Integer>(cand.begin(), cand.end()) == by_definition(p, m, c == Convention::always));
      }
  CHECK(parse_convention("never") == Convention::never);
  CHECK_THROWS_AS(parse_convention("sometimes"), Error);
}

TEST_CASE("level 98 is eliminated by c_3") {
  auto forms = level(98);
  auto r1 = sieve_form(find(forms, "98.1"), {3}, 3, 11, {}, Convention::always);
  CHECK(r1.eliminated());
  CHECK(abs_norms(r1) == std::set<Integer>{1, 2, 4, 6});
  auto r2 = sieve_form(find(forms, "98.2"), {3}, 3, 11, {}, Convention::always);
  CHECK(r2.eliminated());
  CHECK(abs_norms(r2) == std::set<Integer>{1, 2, 14});
}

TEST_CASE("the cubic pair at 338 leaves only n = 83") {
  auto forms = level(338);
  for (const char* label : {"338.7", "338.8"}) {
    auto r = sieve_form(find(forms, label), {3}, 3, 11, {13}, Convention::always);
    CHECK(abs_norms(r) == std::set<Integer>{1, 7, 13, 83});
    REQUIRE(r.survivors.size() == 1);
    CHECK(r.survivors[0].n == 83);
    CHECK(r.survivors[0].witnessing.at(3) == std::vector<Integer>{-4});
    CHECK(r.open() == std::vector<Integer>{83});

    Refinement ref = refine_residue(find(forms, label), r.survivors[0], 5, 3, Convention::always);
    CHECK(ref.outcome == RefinementOutcome::contradiction);
    CHECK(ref.roots == std::vector<Integer>{79});
    CHECK(std::set<Integer>(ref.admissible.begin(), ref.admissible.end()) == std::set<Integer>{0, 3, 6, 77, 80});

    refine_report(r, find(forms, label), {5});
    CHECK(r.eliminated());

    // without the special traces a_3 = +-4 nothing survives at p = 3
    auto never = sieve_form(find(forms, label), {3}, 3, 11, {13}, Convention::never);
    CHECK(never.eliminated());
  }
}

TEST_CASE("c_7 and the trace convention at 338") {
  auto forms = level(338);
  // c_7 = 1 is out of reach of every admissible a_7 for n >= 11
  for (Convention c : {Convention::always, Convention::never})
    CHECK(sieve_form(find(forms, "338.3"), {7}, 3, 11, {13}, c).eliminated());
  // c_7 = +-3 meets a_7 = -+8 at n = 11 when the special traces are allowed
  for (const char* label : {"338.5", "338.6"}) {
    auto always = sieve_form(find(forms, label), {7}, 3, 11, {13}, Convention::always);
    CHECK(always.open() == std::vector<Integer>{11});
    CHECK(sieve_form(find(forms, label), {7}, 3, 11, {13}, Convention::never).eliminated());
  }
  for (const char* label : {"338.1", "338.2", "338.4"})
    CHECK(sieve_form(find(forms, label), {3}, 3, 11, {13}, Convention::always).eliminated());
}

TEST_CASE("refinement outcomes and preconditions") {
  auto f98 = find(level(98), "98.2");
  CHECK(refine_residue(f98, Integer(7), 3, 3, Convention::always).outcome == RefinementOutcome::consistent);
  // 2 is not a square mod 5: no degree-one prime
  CHECK(refine_residue(f98, Integer(5), 3, 3, Convention::always).outcome == RefinementOutcome::inapplicable);

  CHECK_THROWS_AS(sieve_form(f98, {7}, 3, 11, {}, Convention::always), Error);   // 7 | 98
  CHECK_THROWS_AS(sieve_form(f98, {53}, 3, 11, {}, Convention::always), Error);  // no c_53 stored
  CHECK(default_witnesses(f98, 11) == std::vector<long>{3, 5});
}

TEST_CASE("a rational form whose c_q equals an admissible trace is never bounded") {
  NewformRecord f;
  f.label = "toy";
  f.level = 11;
  f.field_poly = IntPoly{0, 1};
  f.eigenvalues[3] = FieldElement{{-2}, 1};
  auto r = sieve_form(f, {3}, 3, 11, {}, Convention::always);
  CHECK(r.unbounded);
  CHECK_FALSE(r.eliminated());
}

TEST_CASE("j-invariant obstruction") {
  RationalNewformCurve c{"45a1", "45.1", WeierstrassCurve::parse("1,-1,0,0,-5")};
  auto ob = j_obstruction(c, 3, 7);
  REQUIRE(ob.has_value());
  CHECK(ob->prime == 3);
  CHECK(ob->all_n);
  CHECK(ob->j.denominator % 15 == 0);
  CHECK_FALSE(j_obstruction(c, 1, 7).has_value());
  RationalNewformCurve cm{"32a2", "32.1", WeierstrassCurve::parse("0,0,0,-1,0")};
  CHECK_FALSE(j_obstruction(cm, 3, 7).has_value());
}
