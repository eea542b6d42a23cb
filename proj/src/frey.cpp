#include "ppk/frey.hpp"

#include <utility>

namespace ppk {

namespace {

bool is_odd(const Integer& v) { return mpz_odd_p(v.get_mpz_t()) != 0; }

Integer pow_n(const Integer& base, long n) { return ipow(base, static_cast<unsigned long>(n)); }

const Integer two = 2;
const Integer three = 3;

long ord2(const Integer& v) { return valuation(v, two); }
long ord3(const Integer& v) { return valuation(v, three); }

void check_triple(const SolutionTriple& sol) {
  if (sol.x == 0 || sol.y == 0 || sol.z == 0) throw Error(Errc::InvalidArgument, "x, y, z must be nonzero");
  if (sol.n < 3 || !is_prime(Integer(sol.n))) throw Error(Errc::InvalidArgument, "exponent n must be an odd prime");
}

FactoredLevel radical_part(const Integer& value, long exponent, const Integer& skip) {
  FactoredLevel out;
  for (const auto& p : prime_divisors(value))
    if (p != skip) out *= FactoredLevel::prime_power(p, exponent);
  return out;
}

}  // namespace

const char* to_string(FreyModel model) {
  switch (model) {
    case FreyModel::E1: return "E1";
    case FreyModel::E2: return "E2";
    case FreyModel::E3: return "E3";
    case FreyModel::Eprime: return "E'";
  }
  return "?";
}

TernaryEquation TernaryEquation::make(Integer A, Integer B, Integer C, int m) {
  if (A == 0 || B == 0 || C == 0) throw Error(Errc::InvalidArgument, "coefficients must be nonzero");
  if (m != 2 && m != 3) throw Error(Errc::InvalidArgument, "signature must be (p,p,2) or (p,p,3)");
  TernaryEquation eq{std::move(A), std::move(B), std::move(C), m, m == 2 ? 7L : 11L};
  if (m == 2 && !is_power_free(eq.C, 2)) throw Error(Errc::NormalizationViolated, "C must be squarefree");
  if (m == 3) {
    if (!is_power_free(eq.C, 3)) throw Error(Errc::NormalizationViolated, "C must be cubefree");
    if (!is_power_free(eq.A, eq.n_floor) || !is_power_free(eq.B, eq.n_floor))
      throw Error(Errc::NormalizationViolated, "A and B must be free of n-th powers for n >= 11");
  }
  return eq;
}

std::string TernaryEquation::to_string() const {
  return ppk::to_string(A) + "*x^n + " + ppk::to_string(B) + "*y^n = " + ppk::to_string(C) + "*z^" +
         std::to_string(m);
}

Normalized2 classify_case2(const TernaryEquation& eq_in, const SolutionTriple& sol_in) {
  if (eq_in.m != 2) throw Error(Errc::InvalidArgument, "classify_case2 needs signature (p,p,2)");
  check_triple(sol_in);
  Normalized2 out{eq_in, sol_in, {}, {}};
  auto& eq = out.eq;
  auto& sol = out.sol;
  auto swap_terms = [&] {
    std::swap(eq.A, eq.B);
    std::swap(sol.x, sol.y);
    out.moves.emplace_back("swap (A,x) <-> (B,y)");
  };
  auto flip_z = [&] {
    sol.z = -sol.z;
    out.moves.emplace_back("z -> -z");
  };

  if (!is_odd(eq.A * sol.x)) swap_terms();
  if (!is_odd(eq.A * sol.x)) throw Error(Errc::UnclassifiableParity, "A x and B y are both even");

  // A x is odd, so the left side is odd iff B y is even.
  const bool lhs_odd = !is_odd(eq.B * sol.y);
  const bool rhs_odd = is_odd(eq.C) && is_odd(sol.z);
  if (lhs_odd != rhs_odd) throw Error(Errc::UnclassifiableParity, "parities of the two sides disagree");

  auto& tag = out.tag;
  const long vB = ord2(eq.B);
  const long vC = ord2(eq.C);
  const long vBy = ord2(eq.B * pow_n(sol.y, sol.n));
  const bool y_odd = is_odd(sol.y);
  const Integer four = 4;

  if (vBy >= 6) {
    tag.index = 5;
    tag.curve = FreyModel::E3;
    if (mod(sol.z, four) != mod(eq.C, four)) flip_z();
    if (vBy == 6) {
      tag.alpha = -1;
      tag.alpha_row = "i=3, ord2(By^n)=6";
    } else {
      tag.alpha = 0;
      tag.alpha_row = "i=3, ord2(By^n)>=7";
      if (vB < 7) tag.note = "row 'ord2(B)>=7' read as ord2(By^n)>=7";
    }
  } else if (!y_odd) {
    throw Error(Errc::UnclassifiableParity, "y even but ord2(By^n) < 6");
  } else if (vB == 0 && vC == 0) {
    tag.index = 1;
    tag.curve = FreyModel::E1;
    auto holds = [&] { return mod(sol.y, four) == mod(-eq.B * eq.C, four); };
    if (!holds()) {
      swap_terms();
      if (!holds()) throw Error(Errc::UnclassifiableParity, "neither y = -BC nor x = -AC (mod 4)");
    }
    tag.alpha = 5;
    tag.alpha_row = "i=1, ABCxy odd";
  } else if (vB == 1 || (vC == 1 && vB == 0)) {
    tag.index = 2;
    tag.curve = FreyModel::E1;
    tag.alpha = 6;
    tag.alpha_row = "i=1, ord2(B)=1 or ord2(C)=1";
  } else if (vC != 0) {
    throw Error(Errc::UnclassifiableParity, "C even with ord2(B) >= 2");
  } else if (vB == 2) {
    tag.index = 3;
    tag.curve = FreyModel::E2;
    const Integer quarter = eq.B / 4;
    if (mod(sol.z, four) != mod(-sol.y * quarter, four)) flip_z();
    const Integer bc4 = eq.B * eq.C / 4;
    if (mod(sol.y, four) == mod(-bc4, four)) {
      tag.alpha = 1;
      tag.alpha_row = "i=2, ord2(B)=2, y=-BC/4 (mod 4)";
    } else {
      tag.alpha = 2;
      tag.alpha_row = "i=2, ord2(B)=2, y=BC/4 (mod 4)";
      tag.note = "table row printed as ord2(B)=1 read as ord2(B)=2";
    }
  } else {
    tag.index = 4;
    tag.curve = FreyModel::E2;
    if (mod(sol.z, four) != mod(eq.C, four)) flip_z();
    if (vB == 3) {
      tag.alpha = 4;
      tag.alpha_row = "i=2, ord2(B)=3";
    } else {
      tag.alpha = 2;
      tag.alpha_row = "i=2, ord2(B) in {4,5}";
    }
  }
  tag.xy_even = !is_odd(sol.x * sol.y);
  return out;
}

WeierstrassCurve frey_curve_ppp2(const TernaryEquation& eq, const SolutionTriple& sol, const CaseTag2& tag) {
  const Integer bcbn = eq.B * eq.C * pow_n(sol.y, sol.n);
  const Integer cC = sol.z * eq.C;
  WeierstrassCurve e{0, 0, 0, 0, 0};
  switch (tag.curve) {
    case FreyModel::E1:
      e.a2 = 2 * cC;
      e.a4 = bcbn;
      break;
    case FreyModel::E2:
      if (!mpz_divisible_ui_p(bcbn.get_mpz_t(), 4)) throw Error(Errc::NonIntegralModel, "4 does not divide BCy^n");
      e.a2 = cC;
      e.a4 = bcbn / 4;
      break;
    case FreyModel::E3: {
      if (!mpz_divisible_ui_p(bcbn.get_mpz_t(), 64)) throw Error(Errc::NonIntegralModel, "64 does not divide BCy^n");
      const Integer shifted = cC - 1;
      if (!mpz_divisible_ui_p(shifted.get_mpz_t(), 4)) throw Error(Errc::NonIntegralModel, "4 does not divide Cz - 1");
      e.a1 = 1;
      e.a2 = shifted / 4;
      e.a4 = bcbn / 64;
      break;
    }
    case FreyModel::Eprime:
      throw Error(Errc::InvalidArgument, "E' belongs to signature (p,p,3)");
  }
  if (discriminant(e) == 0) throw Error(Errc::SingularCurve, "Frey curve is singular: [" + e.format() + "]");
  return e;
}

FactoredLevel conductor_ppp2(const TernaryEquation& eq, const SolutionTriple& sol, const CaseTag2& tag) {
  FactoredLevel level = FactoredLevel::prime_power(2, tag.alpha);
  level *= radical_part(eq.C, 2, 0);
  level *= radical_part(sol.x * sol.y * eq.A * eq.B, 1, 0);
  return level;
}

FactoredLevel artin_level_ppp2(const TernaryEquation& eq, const CaseTag2& tag) {
  const bool ab_odd = is_odd(eq.A * eq.B);
  const long beta = (tag.xy_even && ab_odd) ? 1 : tag.alpha;
  // p != n and q != n are kept symbolic through the excludes_n flag.
  FactoredLevel level = FactoredLevel::prime_power(2, beta);
  level *= radical_part(eq.C, 2, 0);
  level *= radical_part(eq.A * eq.B, 1, 0);
  level.set_excludes_n(true);
  return level;
}

Integer newform_level(const TernaryEquation& eq, const FactoredLevel& artin_level, const Integer& n) {
  Integer level = realize_level(artin_level, n);
  if (mpz_divisible_p(eq.C.get_mpz_t(), n.get_mpz_t())) return level * n * n;
  const Integer ab = eq.A * eq.B;
  if (mpz_divisible_p(ab.get_mpz_t(), n.get_mpz_t())) return level * n;
  return level;
}

Normalized3 normalize_ppp3(const TernaryEquation& eq_in, const SolutionTriple& sol_in) {
  if (eq_in.m != 3) throw Error(Errc::InvalidArgument, "normalize_ppp3 needs signature (p,p,3)");
  check_triple(sol_in);
  Normalized3 out{eq_in, sol_in, {}};
  auto ax = [&] { return mod(out.eq.A * pow_n(out.sol.x, out.sol.n), three); };
  auto by = [&] { return mod(out.eq.B * pow_n(out.sol.y, out.sol.n), three); };
  if (ax() == 0) {
    std::swap(out.eq.A, out.eq.B);
    std::swap(out.sol.x, out.sol.y);
    out.moves.emplace_back("swap (A,x) <-> (B,y)");
  }
  if (ax() == 0) throw Error(Errc::NormalizationViolated, "3 divides both A x^n and B y^n");
  if (by() == 2) {
    out.sol.x = -out.sol.x;
    out.sol.y = -out.sol.y;
    out.sol.z = -out.sol.z;
    out.moves.emplace_back("(x,y,z) -> (-x,-y,-z)");
  }
  return out;
}

WeierstrassCurve frey_curve_ppp3(const TernaryEquation& eq, const SolutionTriple& sol) {
  check_triple(sol);
  const Integer byn = eq.B * pow_n(sol.y, sol.n);
  if (mod(eq.A * pow_n(sol.x, sol.n), three) == 0 || mod(byn, three) == 2)
    throw Error(Errc::NormalizationViolated, "need A x^n != 0 and B y^n != 2 (mod 3)");
  WeierstrassCurve e{3 * eq.C * sol.z, 0, eq.C * eq.C * byn, 0, 0};
  if (discriminant(e) == 0) throw Error(Errc::SingularCurve, "E' is singular: [" + e.format() + "]");
  return e;
}

namespace {

struct Row {
  int index;
  long exponent;
};

// `curve_table` selects eps_3 (the curve's conductor) instead of eps_3'.
Level3 ppp3_level(const TernaryEquation& eq, const SolutionTriple& sol, bool curve_table) {
  if (eq.m != 3) throw Error(Errc::InvalidArgument, "signature (p,p,3) required");
  check_triple(sol);
  const Integer byn = eq.B * pow_n(sol.y, sol.n);
  const Integer t = 2 + eq.C * eq.C * byn - 3 * eq.C * sol.z;
  const long v_t = t == 0 ? 1000 : ord3(t);
  const long v_byn = ord3(byn);
  const long v_b = ord3(eq.B);
  const bool three_divides_c = ord3(eq.C) > 0;

  std::vector<Row> hits;
  if (v_t >= 2) hits.push_back({1, 2});
  if (v_t == 1) hits.push_back({2, 3});
  if (v_byn == 1) hits.push_back({3, 4});
  if (v_byn == 2) hits.push_back({4, 3});
  if (curve_table) {
    if (v_b == 3 && v_byn == 3) hits.push_back({5, 0});
    if (v_byn > 3) hits.push_back({6, 1});
  } else {
    if (v_b == 3) hits.push_back({5, 0});
    if (v_byn > 3 && v_b != 3) hits.push_back({6, 1});
  }
  if (three_divides_c) hits.push_back({7, 5});
  if (hits.size() != 1)
    throw Error(Errc::AmbiguousBranch, std::to_string(hits.size()) + " rows of the 3-adic table match (ord3(By^n)=" +
                                           std::to_string(v_byn) + ", ord3(B)=" + std::to_string(v_b) + ")");

  Level3 out;
  out.eps_row = hits.front().index;
  out.eps_exponent = hits.front().exponent;
  out.level = FactoredLevel::prime_power(3, out.eps_exponent);
  out.level *= radical_part(eq.C, 2, 3);
  Integer support = eq.A * eq.B;
  if (curve_table) support *= sol.x * sol.y;
  out.level *= radical_part(support, 1, 3);
  out.level.set_excludes_n(!curve_table);
  return out;
}

}  // namespace

Level3 artin_level_ppp3_detail(const TernaryEquation& eq, const SolutionTriple& sol) {
  return ppp3_level(eq, sol, false);
}

FactoredLevel artin_level_ppp3(const TernaryEquation& eq, const SolutionTriple& sol) {
  return artin_level_ppp3_detail(eq, sol).level;
}

Level3 conductor_ppp3(const TernaryEquation& eq, const SolutionTriple& sol) { return ppp3_level(eq, sol, true); }

}  // namespace ppk
