#pragma once

// Elementary machinery for the xy = +-1 branches: conic parametrizations,
// the 2^(2x) - b^y = +-3 z^2 obstruction, congruence filters, and reduction
// of the unit case to Mordell equations with a bounded integral-point search.

#include <string>
#include <utility>
#include <vector>

#include "ppk/algebra.hpp"
#include "ppk/frey.hpp"

namespace ppk {

/// x^2 + p y^2 = z^2, p an odd prime of either sign.
/// Family 1: x = +-(s^2 - p t^2), y = 2st, z = +-(s^2 + p t^2), p not | s.
/// Family 2: x = +-(((p-1)/2)(s^2+t^2) + (p+1)st), y = s^2 - t^2,
///           z = +-(((p+1)/2)(s^2+t^2) + (p-1)st), s != t (mod p).
/// In both, s and t are coprime of opposite parity.
struct ConicParams {
  Integer p;
  int family = 1;
  Integer s, t;
  int sign_x = 1;
  int sign_z = 1;
};

struct ConicPoint {
  Integer x, y, z;
  friend bool operator==(const ConicPoint&, const ConicPoint&) = default;
  friend bool operator<(const ConicPoint& a, const ConicPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  }
};

/// Throws InvalidParams when the parameter conditions fail.
ConicPoint conic_point(const ConicParams& params);

struct ConicCoverReport {
  Integer p;
  long bound = 0;
  long solutions = 0;               // primitive solutions found by brute force
  long family1 = 0, family2 = 0;    // matched by exactly that family
  std::vector<ConicPoint> uncovered;
  std::vector<ConicPoint> overlapping;
  std::vector<ConicPoint> invalid;  // parameter outputs that fail the identity or gcd

  bool ok() const { return uncovered.empty() && overlapping.empty() && invalid.empty(); }
};

/// Brute-force oracle: every (x, y, z) with gcd(x, y) = 1, x^2 + p y^2 = z^2
/// and max(|x|, |y|, |z|) <= bound, compared with every parameter choice
/// (s, t, signs) with s^2 + t^2 <= bound, which is enough since each family
/// has max(|x|, |z|) >= s^2 + t^2.
ConicCoverReport conic_cover_check(const Integer& p, long bound);

/// ord_2 of ((sign-1)/2)(s^2+t^2) + (sign+1)st for sign = +-3.
long prop3_obstruction(int sign, const Integer& s, const Integer& t);

struct Prop3Solution {
  long x = 0, y = 0;
  Integer z;
  int sign = 1;  // 2^(2x) - b^y = sign * 3 z^2
};

/// Exhaustive search of 2^(2x) - b^y = +-3 z^2 over x_min <= x <= x_max and
/// even 2 <= y <= y_max. x_min = 2 is the claim; x_min = 1 is a control run.
std::vector<Prop3Solution> prop3_search(const Integer& b, long x_max, long y_max, long x_min = 2);

/// constant + coefficient * base^alpha
struct ExpTemplate {
  Integer constant;
  Integer coefficient = 1;
  Integer base;

  Integer residue(long alpha, const Integer& modulus) const;
  std::string to_string() const;
};

struct CongruenceVerdict {
  long alpha = 0;
  Integer residue;
  bool obstructed = false;
};

struct CongruenceReport {
  ExpTemplate value;
  Integer modulus;
  ResidueSet allowed;
  long alpha_start = 1, alpha_step = 1, alpha_max = 0;
  std::vector<CongruenceVerdict> verdicts;
  std::vector<Integer> cycle_residues;  // every residue the template takes on the alpha class
  bool all_alpha = false;               // no residue of the class is allowed

  bool obstructed() const;  // every listed alpha is obstructed
};

/// Verdicts for alpha = start, start+step, ..., <= alpha_max, plus a proof for
/// every alpha in the class: base^alpha mod M is eventually periodic, so the
/// residues are collected until the state repeats.
CongruenceReport congruence_obstruction(const ExpTemplate& value, const Integer& modulus, const ResidueSet& allowed,
                                        long alpha_start, long alpha_step, long alpha_max);

struct MordellInstance {
  Integer k;
  Integer x_scale, y_scale;
  long min_m = 1;         // Y = y_scale * 2^m with m >= min_m
  int alpha_parity = 0;   // 0: alpha = 2m, 1: alpha = 2m + 1
  int xy_sign = 1;
  std::string origin;

  std::string y_form() const;  // "28*2^m, m>=0"
};

/// The unit case x = +-1, y = xy_sign * x of 2^alpha x^n + B y^n = C z^3:
/// 2^alpha + xy_sign B = C w^3 with w = xz. Multiplying by C^2 (alpha even) or
/// 8 C^2 (alpha odd) gives Y^2 = X^3 + k. Throws UnsupportedShape unless
/// m = 3 and A is a power of two.
std::pair<MordellInstance, MordellInstance> reduce_unit_case(const TernaryEquation& eq, int xy_sign);

struct MordellSolutionSet {
  Integer k;
  long bound = 0;
  std::vector<std::pair<Integer, Integer>> solutions;  // (X, Y), Y >= 0, ascending X
};

/// Every (X, Y) with |X| <= bound, Y >= 0 and Y^2 = X^3 + k. Exhaustive
/// within the bound only; this is not a completeness proof.
/// threads = 0 uses the hardware concurrency.
MordellSolutionSet mordell_search(const Integer& k, long bound, unsigned threads = 0);

struct FilterOutcome {
  Integer X, Y;
  bool kept = false;
  std::string reason;
};

/// Keeps (X, Y) with x_scale | X and Y = y_scale * 2^m, m >= min_m.
std::vector<FilterOutcome> filter_mordell_solutions(const MordellSolutionSet& set, const MordellInstance& inst);

}  // namespace ppk
