#pragma once

// Ternary equations A x^n + B y^n = C z^m (m = 2, 3), their normalization,
// Frey curves, and the conductor / Artin-level case tables.

#include <string>
#include <vector>

#include "ppk/algebra.hpp"
#include "ppk/ellcurve.hpp"

namespace ppk {

struct TernaryEquation {
  Integer A, B, C;
  int m = 2;          // signature (n, n, m)
  long n_floor = 7;   // smallest admissible prime exponent

  /// Validates the coefficient conventions: nonzero coefficients; C squarefree
  /// for m = 2; C cubefree and A, B free of n-th powers for every n >= n_floor
  /// when m = 3.
  static TernaryEquation make(Integer A, Integer B, Integer C, int m);

  std::string to_string() const;
};

/// A triple fed to the case tables. The tables only read local data
/// (parities, valuations, residues), so triples need not solve the equation.
struct SolutionTriple {
  Integer x, y, z;
  long n = 7;
};

enum class FreyModel { E1, E2, E3, Eprime };
const char* to_string(FreyModel model);

struct CaseTag2 {
  int index = 0;               // 1..5
  FreyModel curve = FreyModel::E1;
  long alpha = 0;              // exponent of 2 in the conductor
  std::string alpha_row;       // which conductor-table row fired
  bool xy_even = false;
  std::string note;            // non-empty when a corrected table row fired
};

struct Normalized2 {
  TernaryEquation eq;
  SolutionTriple sol;
  CaseTag2 tag;
  std::vector<std::string> moves;
};

/// Normalizes (swap of (A,x) with (B,y), sign of z) and selects the unique
/// case (1)-(5) with its conductor exponent alpha.
/// Throws UnclassifiableParity when no case applies.
Normalized2 classify_case2(const TernaryEquation& eq, const SolutionTriple& sol);

/// E1, E2 or E3 according to the tag. Throws NonIntegralModel when a
/// required divisibility fails.
WeierstrassCurve frey_curve_ppp2(const TernaryEquation& eq, const SolutionTriple& sol, const CaseTag2& tag);

/// N(E) = 2^alpha C^2 prod_{p | xyAB} p.
FactoredLevel conductor_ppp2(const TernaryEquation& eq, const SolutionTriple& sol, const CaseTag2& tag);

/// N_n^E = 2^beta prod_{p | C} p^2 prod_{q | AB} q with p, q != n
/// (excludes_n set); beta = 1 when xy is even and AB odd, alpha otherwise.
FactoredLevel artin_level_ppp2(const TernaryEquation& eq, const CaseTag2& tag);

/// Level of the newform for a concrete exponent prime n: the Artin level with
/// n removed, times n when n | AB, or n^2 when n | C.
Integer newform_level(const TernaryEquation& eq, const FactoredLevel& artin_level, const Integer& n);

struct Normalized3 {
  TernaryEquation eq;
  SolutionTriple sol;
  std::vector<std::string> moves;
};

/// Reaches A x^n != 0 (mod 3) and B y^n != 2 (mod 3) by swapping (A,x) with
/// (B,y) and negating (x,y,z). Throws NormalizationViolated if impossible.
Normalized3 normalize_ppp3(const TernaryEquation& eq, const SolutionTriple& sol);

/// E': Y^2 + 3CzXY + C^2 B y^n Y = X^3. The input must already be normalized.
WeierstrassCurve frey_curve_ppp3(const TernaryEquation& eq, const SolutionTriple& sol);

struct Level3 {
  FactoredLevel level;
  int eps_row = 0;       // 1-based row of the 3-adic table that fired
  long eps_exponent = 0;
};

/// N_n^{E'} with the 3-adic factor eps_3'. Exactly one table row must match,
/// otherwise AmbiguousBranch.
Level3 artin_level_ppp3_detail(const TernaryEquation& eq, const SolutionTriple& sol);
FactoredLevel artin_level_ppp3(const TernaryEquation& eq, const SolutionTriple& sol);

/// N(E') = eps_3 prod_{p | C, p != 3} p^2 prod_{q | ABxy, q != 3} q.
Level3 conductor_ppp3(const TernaryEquation& eq, const SolutionTriple& sol);

}  // namespace ppk
