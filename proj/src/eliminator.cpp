#include "ppk/eliminator.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

namespace ppk {

const char* to_string(Convention c) { return c == Convention::always ? "always" : "never"; }

Convention parse_convention(std::string_view text) {
  if (text == "always") return Convention::always;
  if (text == "never") return Convention::never;
  throw Error(Errc::InvalidArgument, "convention must be always or never, got '" + std::string(text) + "'");
}

const char* to_string(RefinementOutcome o) {
  switch (o) {
    case RefinementOutcome::contradiction: return "contradiction";
    case RefinementOutcome::consistent: return "consistent";
    case RefinementOutcome::inapplicable: return "inapplicable";
  }
  return "?";
}

std::vector<Integer> AdmissibleTraces::candidates() const {
  std::vector<Integer> out = small_set;
  if (convention == Convention::always) out.insert(out.end(), special_set.begin(), special_set.end());
  return out;
}

AdmissibleTraces admissible_traces(long p, int m, Convention convention) {
  if (p < 2 || !is_prime(Integer(p))) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
  if (m != 2 && m != 3) throw Error(Errc::InvalidArgument, "signature exponent must be 2 or 3");
  AdmissibleTraces t;
  t.p = p;
  t.m = m;
  t.convention = convention;
  // |x| < 2 sqrt(p)  <=>  x^2 < 4p
  for (long x = -2 * p; x <= 2 * p; ++x) {
    if (x * x >= 4 * p) continue;
    bool ok = m == 2 ? x % 2 == 0 : ((x - (p + 1)) % 3 + 3) % 3 == 0;
    if (ok) t.small_set.emplace_back(x);
  }
  t.special_set = {Integer(-(p + 1)), Integer(p + 1)};
  return t;
}

bool EliminationReport::eliminated() const { return !unbounded && open().empty(); }

std::vector<Integer> EliminationReport::open() const {
  std::vector<Integer> out;
  for (const auto& s : survivors) {
    bool closed = std::any_of(refinements.begin(), refinements.end(), [&](const Refinement& r) {
      return r.n == s.n && r.outcome == RefinementOutcome::contradiction;
    });
    if (!closed) out.push_back(s.n);
  }
  return out;
}

std::vector<long> default_witnesses(const NewformRecord& f, long n_floor) {
  std::vector<long> out;
  for (long p : primes_up_to(n_floor - 1))
    if (!mpz_divisible_ui_p(f.level.get_mpz_t(), static_cast<unsigned long>(p)) && f.eigenvalues.count(p)) out.push_back(p);
  return out;
}

EliminationReport sieve_form(const NewformRecord& f, const std::vector<long>& witnesses, int m, long n_floor,
                             const std::set<Integer>& excluded, Convention convention) {
  if (witnesses.empty()) throw Error(Errc::InvalidArgument, "at least one witness prime is required");
  EliminationReport report;
  report.form_label = f.label;
  report.convention = convention;
  report.m = m;
  report.n_floor = n_floor;
  report.excluded = excluded;

  auto admissible_n = [&](const Integer& n) { return n >= n_floor && !excluded.count(n); };
  for (long p : witnesses) {
    if (mpz_divisible_ui_p(f.level.get_mpz_t(), static_cast<unsigned long>(p)))
      throw Error(Errc::InvalidArgument, "witness " + std::to_string(p) + " divides the level " + to_string(f.level));
    if (!f.eigenvalues.count(p))
      throw Error(Errc::InsufficientEigenvalues, f.label + " has no stored c_" + std::to_string(p));
    WitnessResult w;
    w.p = p;
    std::set<Integer> primes;
    for (const auto& a : admissible_traces(p, m, convention).candidates()) {
      Integer norm = eigenvalue_norm_diff(f, p, a);
      w.norms.push_back({a, norm});
      if (norm == 0) {
        w.unbounded = true;
        continue;
      }
      for (const auto& q : prime_divisors(norm))
        if (admissible_n(q)) primes.insert(q);
    }
    if (p >= n_floor && admissible_n(Integer(p))) primes.insert(Integer(p));
    w.primes.assign(primes.begin(), primes.end());
    report.witnesses.push_back(std::move(w));
  }

  report.unbounded = std::all_of(report.witnesses.begin(), report.witnesses.end(), [](const auto& w) { return w.unbounded; });
  if (report.unbounded) return report;

  std::optional<std::set<Integer>> candidates;
  for (const auto& w : report.witnesses) {
    if (w.unbounded) continue;
    std::set<Integer> here(w.primes.begin(), w.primes.end());
    if (!candidates) {
      candidates = here;
    } else {
      std::set<Integer> both;
      std::set_intersection(candidates->begin(), candidates->end(), here.begin(), here.end(), std::inserter(both, both.end()));
      candidates = both;
    }
  }
  for (const auto& n : *candidates) {
    Survivor s;
    s.n = n;
    for (const auto& w : report.witnesses) {
      auto& list = s.witnessing[w.p];
      for (const auto& e : w.norms)
        if (e.norm == 0 || mpz_divisible_p(e.norm.get_mpz_t(), n.get_mpz_t())) list.push_back(e.a);
    }
    report.survivors.push_back(std::move(s));
  }
  return report;
}

namespace {

Refinement refine_with_roots(const NewformRecord& f, const Integer& n, long q, int m, Convention convention,
                             const std::function<bool(const Integer&)>& root_ok) {
  Refinement r;
  r.n = n;
  r.q = q;
  if (q == n || mpz_divisible_ui_p(f.level.get_mpz_t(), static_cast<unsigned long>(q)))
    throw Error(Errc::InvalidArgument, "refinement prime " + std::to_string(q) + " must be coprime to n and the level");
  std::set<Integer> admissible;
  for (const auto& a : admissible_traces(q, m, convention).candidates()) admissible.insert(mod(a, n));
  r.admissible.assign(admissible.begin(), admissible.end());

  std::vector<ResiduePair> pairs;
  try {
    pairs = eigenvalue_residues(f, q, n);
  } catch (const Error& e) {
    if (e.code() != Errc::NoDegreeOnePrime) throw;
    r.note = e.what();
    return r;
  }
  std::set<Integer> residues;
  for (const auto& pr : pairs)
    if (root_ok(pr.theta)) {
      r.roots.push_back(pr.theta);
      residues.insert(pr.value);
    }
  if (r.roots.empty()) {
    r.note = "no degree-one prime above " + to_string(n) + " matches the witnessing traces";
    return r;
  }
  r.residues.assign(residues.begin(), residues.end());
  bool hit = std::any_of(residues.begin(), residues.end(), [&](const Integer& v) { return admissible.count(v) > 0; });
  r.outcome = hit ? RefinementOutcome::consistent : RefinementOutcome::contradiction;
  return r;
}

}  // namespace

Refinement refine_residue(const NewformRecord& f, const Survivor& survivor, long q, int m, Convention convention) {
  const Integer& n = survivor.n;
  // theta = r mod P is consistent when every witness p has c_p = a_p mod P
  // for one of its witnessing a_p.
  auto root_ok = [&](const Integer& r) {
    for (const auto& [p, as] : survivor.witnessing) {
      const FieldElement& c = f.eigenvalue(p);
      if (mpz_divisible_p(c.den.get_mpz_t(), n.get_mpz_t())) return false;
      Integer inv;
      mpz_invert(inv.get_mpz_t(), c.den.get_mpz_t(), n.get_mpz_t());
      Integer v = mod(poly_eval_mod(c.numerator(), r, n) * inv, n);
      if (std::none_of(as.begin(), as.end(), [&](const Integer& a) { return mod(a, n) == v; })) return false;
    }
    return true;
  };
  return refine_with_roots(f, n, q, m, convention, root_ok);
}

Refinement refine_residue(const NewformRecord& f, const Integer& n, long q, int m, Convention convention) {
  return refine_with_roots(f, n, q, m, convention, [](const Integer&) { return true; });
}

void refine_report(EliminationReport& report, const NewformRecord& f, const std::vector<long>& qs) {
  for (const auto& s : report.survivors) {
    for (long q : qs) {
      if (q == s.n || mpz_divisible_ui_p(f.level.get_mpz_t(), static_cast<unsigned long>(q))) continue;
      Refinement r = refine_residue(f, s, q, report.m, report.convention);
      bool done = r.outcome == RefinementOutcome::contradiction;
      report.refinements.push_back(std::move(r));
      if (done) break;
    }
  }
}

std::optional<JObstruction> j_obstruction(const RationalNewformCurve& curve, const Integer& C, long n_floor) {
  RationalJ j = j_invariant(curve.curve);
  if (C == 0) return std::nullopt;
  for (const auto& p : prime_divisors(C)) {
    if (p == 2) continue;
    if (mpz_divisible_p(j.denominator.get_mpz_t(), p.get_mpz_t())) return JObstruction{curve.label, j, p, p < n_floor};
  }
  return std::nullopt;
}

}  // namespace ppk
