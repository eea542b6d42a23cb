#pragma once

// Newform elimination: admissible Frobenius traces, the norm-divisibility
// sieve over witness primes, refinement at degree-one primes, and the
// j-denominator obstruction.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppk/algebra.hpp"
#include "ppk/ellcurve.hpp"
#include "ppk/newforms.hpp"

namespace ppk {

/// Whether a_p = +-(p+1) is among the candidates. The hypothesis under which
/// the special values occur (p | xy) is not known at sieve time.
enum class Convention { always, never };
const char* to_string(Convention c);
Convention parse_convention(std::string_view text);

struct AdmissibleTraces {
  long p = 0;
  int m = 2;
  std::vector<Integer> small_set;    // |x| < 2 sqrt(p), x even (m = 2) or x = p+1 mod 3 (m = 3)
  std::vector<Integer> special_set;  // p+1, -(p+1)
  Convention convention = Convention::always;

  /// small_set, then special_set when the convention includes it.
  std::vector<Integer> candidates() const;
};

/// Sets are sorted ascending.
AdmissibleTraces admissible_traces(long p, int m, Convention convention);

struct NormEntry {
  Integer a;
  Integer norm;  // Norm(c_p - a)
};

struct WitnessResult {
  long p = 0;
  std::vector<NormEntry> norms;
  bool unbounded = false;        // some norm vanished: p constrains nothing
  std::vector<Integer> primes;   // admissible n dividing some norm
};

struct Survivor {
  Integer n;
  std::map<long, std::vector<Integer>> witnessing;  // p -> a_p with n | Norm(c_p - a_p)
};

enum class RefinementOutcome { contradiction, consistent, inapplicable };
const char* to_string(RefinementOutcome o);

struct Refinement {
  Integer n;
  long q = 0;
  std::vector<Integer> roots;            // theta mod n at the matched degree-one primes
  std::vector<Integer> residues;         // c_q mod those primes
  std::vector<Integer> admissible;       // admissible a_q mod n
  RefinementOutcome outcome = RefinementOutcome::inapplicable;
  std::string note;
};

struct EliminationReport {
  std::string form_label;
  Convention convention = Convention::always;
  int m = 2;
  long n_floor = 7;
  std::set<Integer> excluded;
  std::vector<WitnessResult> witnesses;
  bool unbounded = false;           // no witness bounds n
  std::vector<Survivor> survivors;  // ascending n
  std::vector<Refinement> refinements;

  bool eliminated() const;
  /// Survivors not closed by a contradiction refinement.
  std::vector<Integer> open() const;
};

/// Primes n >= n_floor, not excluded, for which every witness p has an
/// admissible a_p with n | Norm(c_p - a_p). n is symbolic: the survivors are
/// prime divisors of the computed norms. A witness p >= n_floor cannot rule
/// out n = p, so p itself is kept in that witness's set.
/// Throws InvalidArgument (witness divides the level) or
/// InsufficientEigenvalues (c_p not stored).
EliminationReport sieve_form(const NewformRecord& f, const std::vector<long>& witnesses, int m, long n_floor,
                             const std::set<Integer>& excluded, Convention convention);

/// Primes p < n_floor, coprime to the level, with stored eigenvalues.
std::vector<long> default_witnesses(const NewformRecord& f, long n_floor);

/// Compares c_q against the admissible a_q modulo the degree-one primes above
/// n that are consistent with the survivor's witnessing traces.
Refinement refine_residue(const NewformRecord& f, const Survivor& survivor, long q, int m, Convention convention);
/// Same with no witness information: every degree-one prime above n is used.
Refinement refine_residue(const NewformRecord& f, const Integer& n, long q, int m, Convention convention);

/// Runs refine_residue on every open survivor with each q in order until one
/// gives a contradiction; appends the attempts to the report.
void refine_report(EliminationReport& report, const NewformRecord& f, const std::vector<long>& qs);

struct JObstruction {
  std::string curve_label;
  RationalJ j;
  Integer prime;       // odd p | C dividing den(j)
  bool all_n = false;  // p < n_floor, so p != n automatically
};

/// The first odd prime p | C dividing the denominator of j(E), if any.
std::optional<JObstruction> j_obstruction(const RationalNewformCurve& curve, const Integer& C, long n_floor);

}  // namespace ppk
