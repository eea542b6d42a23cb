#include "ppk/prove.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "ppk/diophantine.hpp"
#include "ppk/frey.hpp"

namespace ppk {

namespace {

struct TheoremShape {
  int id = 1;
  Integer a_base;  // A = a_base^alpha
  Integer B, C;
  int m = 2;
  long n_floor = 7;
  std::set<Integer> excluded;
  std::string equation;
  std::string conclusion;
};

TheoremShape shape_for(const ProveConfig& config) {
  TheoremShape s;
  s.id = config.theorem;
  if (config.c_power < 1) throw Error(Errc::InvalidArgument, "c_power must be positive");
  switch (config.theorem) {
    case 1:
      if (config.c_power != 1) throw Error(Errc::UnsupportedShape, "the C power knob applies to signature (n,n,3) only");
      s.a_base = 5;
      s.B = 64;
      s.C = 3;
      s.m = 2;
      s.n_floor = 7;
      s.conclusion = "no solutions, n >= 7 prime, xy odd, alpha >= 1";
      break;
    case 2:
    case 3: {
      // C z^3 with C = c^beta: move c^(3 floor(beta/3)) into z
      const long r = config.c_power % 3;
      if (r == 0) throw Error(Errc::UnsupportedShape, "C = c^beta with 3 | beta is not cubefree-reducible to c or c^2");
      s.a_base = 2;
      s.B = 27;
      s.C = ipow(config.theorem == 2 ? 7 : 13, static_cast<unsigned long>(r));
      s.m = 3;
      s.n_floor = 11;
      if (config.theorem == 3) s.excluded.insert(13);
      s.conclusion = config.theorem == 2 ? "no solutions, n >= 11 prime" : "no solutions, n >= 11, n != 13";
      break;
    }
    default:
      throw Error(Errc::InvalidArgument, "theorem must be 1, 2 or 3");
  }
  s.equation = to_string(s.a_base) + "^alpha*x^n + " + to_string(s.B) + "*y^n = " + to_string(s.C) + "*z^" +
               std::to_string(s.m);
  return s;
}

template <class T>
std::string join_any(const T& values, const char* sep = ",") {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : values) {
    if (!first) os << sep;
    first = false;
    os << v;
  }
  return os.str();
}

std::string format_value(const FieldElement& c) {
  std::string out = join(c.coeffs);
  if (c.den != 1) out += "/" + to_string(c.den);
  return out;
}

void emit_form(Certificate& cert, const NewformRecord& f) {
  cert.add("form")
      .add("label", f.label)
      .add("level", f.level)
      .add("weight", static_cast<long>(f.weight))
      .add("degree", f.degree())
      .add("field_poly", format_poly(f.field_poly))
      .add("sha256", fingerprint(f));
  for (const auto& [q, c] : f.eigenvalues) cert.add("eig").add("form", f.label).add("q", q).add("value", format_value(c));
}

// ---------------------------------------------------------------- levels

struct Sample {
  long x, y, z, n;
};

Integer level_branch(Certificate& cert, const TheoremShape& s) {
  const std::vector<Sample> samples2 = {{1, 3, 1, 7}, {3, 1, 5, 11}, {-1, 5, 7, 13}, {5, -7, 3, 7}};
  const std::vector<Sample> samples3 = {{1, 2, 1, 11}, {5, 3, 2, 17}, {-7, 1, 3, 19}, {1, -5, 4, 23}};
  std::set<Integer> levels;
  for (long alpha = 1; alpha <= 6; ++alpha) {
    const auto& smp = (s.m == 2 ? samples2 : samples3)[static_cast<std::size_t>((alpha - 1) % 4)];
    TernaryEquation eq = TernaryEquation::make(ipow(s.a_base, static_cast<unsigned long>(alpha)), s.B, s.C, s.m);
    SolutionTriple sol{smp.x, smp.y, smp.z, smp.n};
    CertLine& line = cert.add("level_sample");
    line.add("alpha", alpha).add("x", smp.x).add("y", smp.y).add("z", smp.z).add("n", smp.n);
    Integer level;
    if (s.m == 2) {
      Normalized2 norm = classify_case2(eq, sol);
      FactoredLevel artin = artin_level_ppp2(norm.eq, norm.tag);
      level = newform_level(norm.eq, artin, smp.n);
      line.add("moves", join_any(norm.moves, ";"))
          .add("case", static_cast<long>(norm.tag.index))
          .add("model", to_string(norm.tag.curve))
          .add("alpha2", norm.tag.alpha)
          .add("row", norm.tag.alpha_row)
          .add("curve", frey_curve_ppp2(norm.eq, norm.sol, norm.tag).format())
          .add("artin", artin.to_string());
    } else {
      Normalized3 norm = normalize_ppp3(eq, sol);
      Level3 detail = artin_level_ppp3_detail(norm.eq, norm.sol);
      level = realize_level(detail.level, smp.n);
      line.add("moves", join_any(norm.moves, ";"))
          .add("model", to_string(FreyModel::Eprime))
          .add("eps_row", static_cast<long>(detail.eps_row))
          .add("eps_exponent", detail.eps_exponent)
          .add("curve", frey_curve_ppp3(norm.eq, norm.sol).format())
          .add("artin", detail.level.to_string());
    }
    line.add("level", level);
    levels.insert(level);
  }
  if (levels.size() != 1) throw Error(Errc::AmbiguousBranch, "sample levels disagree: " + join_any(levels));
  cert.add("level").add("value", *levels.begin());
  return *levels.begin();
}

// ---------------------------------------------------------------- sieve

struct Plan {
  std::vector<long> witnesses;
  std::vector<long> refine;
};

Plan plan_for(const ProveConfig& config, const TheoremShape& s, const NewformRecord& f) {
  Plan plan;
  auto coprime = [&](long q) { return !mpz_divisible_ui_p(f.level.get_mpz_t(), static_cast<unsigned long>(q)); };
  if (config.witness_plan == "classic") {
    static const std::set<std::string> by_c7 = {"338.3", "338.5", "338.6"};
    plan.witnesses = {s.id == 3 && by_c7.count(f.label) ? 7L : 3L};
    if (s.id == 3) plan.refine = {5};
  } else if (config.witness_plan == "all") {
    plan.witnesses = default_witnesses(f, s.n_floor);
    for (long q : primes_up_to(kCoverageBound))
      if (coprime(q) && f.eigenvalues.count(q)) plan.refine.push_back(q);
  } else {
    throw Error(Errc::InvalidArgument, "witness plan must be classic or all, got '" + config.witness_plan + "'");
  }
  return plan;
}

EliminationReport run_sieve(const NewformRecord& f, const Plan& plan, const TheoremShape& s, Convention convention) {
  EliminationReport r = sieve_form(f, plan.witnesses, s.m, s.n_floor, s.excluded, convention);
  refine_report(r, f, plan.refine);
  return r;
}

std::string format_witnessing(const Survivor& sv) {
  std::vector<std::string> parts;
  for (const auto& [p, as] : sv.witnessing) parts.push_back(std::to_string(p) + ":" + join(as, "/"));
  return join_any(parts, ";");
}

void emit_report(Certificate& cert, const EliminationReport& r, const Plan& plan) {
  cert.add("sieve")
      .add("form", r.form_label)
      .add("witnesses", join_any(plan.witnesses))
      .add("refine_q", join_any(plan.refine))
      .add("convention", to_string(r.convention))
      .add("n_floor", r.n_floor)
      .add("exclude", join_any(r.excluded));
  for (const auto& w : r.witnesses) {
    for (const auto& e : w.norms) cert.add("norm").add("form", r.form_label).add("p", w.p).add("a", e.a).add("value", e.norm);
    cert.add("witness").add("form", r.form_label).add("p", w.p).add("unbounded", w.unbounded).add("primes", join(w.primes));
  }
  for (const auto& sv : r.survivors)
    cert.add("survivor").add("form", r.form_label).add("n", sv.n).add("witnessing", format_witnessing(sv));
  for (const auto& rf : r.refinements)
    cert.add("refine")
        .add("form", r.form_label)
        .add("n", rf.n)
        .add("q", rf.q)
        .add("roots", join(rf.roots))
        .add("residues", join(rf.residues))
        .add("admissible", join(rf.admissible))
        .add("outcome", to_string(rf.outcome))
        .add("note", rf.note);
}

std::set<Integer> abs_norms(const EliminationReport& r, long p) {
  std::set<Integer> out;
  for (const auto& w : r.witnesses)
    if (w.p == p)
      for (const auto& e : w.norms) out.insert(abs(e.norm));
  return out;
}

struct FrobeniusBranch {
  bool closed = true;
  std::vector<std::string> open;
  std::vector<std::string> convention_dependent;
};

// Rational forms with a companion curve are handled by the j-invariant
// obstruction when C has an odd prime factor in den(j); others are sieved.
FrobeniusBranch newform_branch(Certificate& cert, const ProveConfig& config, const TheoremShape& s, long level,
                               const NewformProvider& provider) {
  FrobeniusBranch out;
  NewformData data = provider(level);
  if (data.forms.empty()) throw Error(Errc::LevelNotAvailable, "no newforms at level " + std::to_string(level));
  cert.add("newforms").add("level", level).add("count", static_cast<long>(data.forms.size())).add("source", to_string(config.source));
  for (const auto& f : data.forms) emit_form(cert, f);

  std::map<std::string, EliminationReport> reports;
  std::vector<std::string> dependent;
  for (const auto& f : data.forms) {
    bool done = false;
    if (s.m == 2 && f.is_rational()) {
      for (const auto& c : data.curves) {
        if (c.form_label != f.label) continue;
        validate_curve(c, f);
        cert.add("curve").add("label", c.label).add("form", c.form_label).add("ainvs", c.curve.format());
        cert.add("curve_check").add("label", c.label).add("form", f.label).add("agrees", true);
        auto obstruction = j_obstruction(c, s.C, s.n_floor);
        RationalJ j = j_invariant(c.curve);
        cert.add("j_obstruction")
            .add("curve", c.label)
            .add("j", j.to_string())
            .add("denominator", j.denominator)
            .add("C", s.C)
            .add("prime", obstruction ? to_string(obstruction->prime) : std::string())
            .add("all_n", obstruction ? obstruction->all_n : false);
        if (obstruction && obstruction->all_n) {
          cert.add("form_status").add("label", f.label).add("status", "eliminated").add("method", "j_obstruction").add("open", "");
          done = true;
          break;
        }
      }
    }
    if (done) continue;

    Plan plan = plan_for(config, s, f);
    EliminationReport r = run_sieve(f, plan, s, config.convention);
    emit_report(cert, r, plan);
    const Convention other = config.convention == Convention::always ? Convention::never : Convention::always;
    EliminationReport alt = run_sieve(f, plan, s, other);
    if (alt.eliminated() != r.eliminated()) dependent.push_back(f.label);
    std::string open = r.unbounded ? "all" : join(r.open());
    cert.add("form_status")
        .add("label", f.label)
        .add("status", r.eliminated() ? "eliminated" : "open")
        .add("method", "sieve")
        .add("open", open);
    if (!r.eliminated()) {
      out.closed = false;
      if (r.unbounded)
        out.open.push_back(f.label + ":all");
      else
        for (const auto& n : r.open()) out.open.push_back(f.label + ":" + to_string(n));
    }
    reports.emplace(f.label, std::move(r));
  }

  // The same sign-paired forms give one residue set across the pair.
  std::map<std::pair<std::string, std::string>, std::vector<const Refinement*>> grouped;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> group_labels;
  for (const auto& f : data.forms) {
    auto it = reports.find(f.label);
    if (it == reports.end()) continue;
    for (const auto& rf : it->second.refinements) {
      if (rf.outcome != RefinementOutcome::contradiction) continue;
      auto key = std::make_pair(format_poly(f.field_poly), to_string(rf.n) + ":" + std::to_string(rf.q));
      grouped[key].push_back(&rf);
      group_labels[key].push_back(f.label);
    }
  }
  for (const auto& [key, refs] : grouped) {
    if (refs.size() < 2) continue;
    std::set<Integer> residues;
    for (const auto* rf : refs) residues.insert(rf->residues.begin(), rf->residues.end());
    cert.add("residue_union")
        .add("forms", join_any(group_labels[key]))
        .add("n", refs.front()->n)
        .add("q", refs.front()->q)
        .add("residues", join_any(residues))
        .add("admissible", join(refs.front()->admissible))
        .add("outcome", "contradiction");
  }

  // Cross-checks against reference values; differences are reported.
  auto reference = [&](const std::string& label, long p, const std::vector<long>& expected) {
    auto it = reports.find(label);
    if (it == reports.end()) return;
    auto computed = abs_norms(it->second, p);
    if (computed.empty()) return;
    std::set<Integer> ref_set(expected.begin(), expected.end());
    bool superset = std::includes(computed.begin(), computed.end(), ref_set.begin(), ref_set.end());
    cert.add("reference_check")
        .add("kind", "abs_norms")
        .add("form", label)
        .add("p", p)
        .add("computed", join_any(computed))
        .add("reference", join_any(ref_set))
        .add("equal", computed == ref_set)
        .add("superset", superset);
  };
  if (s.id == 2) reference("98.2", 3, {1, 14});
  if (s.id == 3) {
    reference("338.7", 3, {7, 13, 83});
    reference("338.8", 3, {7, 13, 83});
    for (const char* label : {"338.7", "338.8"}) {
      auto it = reports.find(label);
      if (it == reports.end()) continue;
      for (const auto& rf : it->second.refinements)
        if (rf.n == 83 && !rf.roots.empty())
          cert.add("reference_check")
              .add("kind", "theta_mod_prime")
              .add("form", label)
              .add("n", rf.n)
              .add("computed", join(rf.roots))
              .add("reference", "4")
              .add("equal", rf.roots == std::vector<Integer>{4})
              .add("note", "resultant(field_poly, x+4) = 83, resultant(field_poly, x-4) = 13");
    }
  }
  out.convention_dependent = dependent;
  if (s.m == 3)
    cert.add("convention_dependence")
        .add("convention", to_string(config.convention))
        .add("forms", join_any(dependent))
        .add("reference", s.id == 3 ? "338.3,338.5,338.6" : "");

  cert.add("branch_status").add("name", "frey").add("status", out.closed ? "closed" : "open").add("open", join_any(out.open));
  return out;
}

// ---------------------------------------------------------------- unit case

struct UnitBranch {
  Certificate part;
  bool closed = true;
};

UnitBranch unit_branch_ppp2(const ProveConfig& config, const TheoremShape& s) {
  UnitBranch out;
  Certificate& cert = out.part;
  // 5^alpha x + 64 y = 3 z^2 with x, y = +-1
  auto x_exp = exact_sqrt(s.B);
  if (!x_exp || mpz_popcount(x_exp->get_mpz_t()) != 1)
    throw Error(Errc::UnsupportedShape, "unit case needs B = 2^(2x)");
  const long two_x = static_cast<long>(mpz_sizeinbase(s.B.get_mpz_t(), 2)) - 1;
  const long x = two_x / 2;

  // xy = -1: B - a^alpha = +-C z^2. Even alpha is ruled out by the conic argument.
  long pairs = 0;
  std::map<int, std::set<long>> ord2;
  for (long ss = -100; ss <= 100; ++ss)
    for (long tt = -100; tt <= 100; ++tt) {
      Integer si = ss, ti = tt, g;
      mpz_gcd(g.get_mpz_t(), si.get_mpz_t(), ti.get_mpz_t());
      if (g != 1 || (ss + tt) % 2 == 0) continue;
      ++pairs;
      for (int sign : {3, -3}) ord2[sign].insert(prop3_obstruction(sign, si, ti));
    }
  auto hits = prop3_search(s.a_base, 12, 12, 2);
  const bool conic_ok = ord2[3] == std::set<long>{0} && ord2[-3] == std::set<long>{1} && x >= 2;
  cert.add("unit_case").add("xy", -1L).add("relation", to_string(s.B) + " - " + to_string(s.a_base) + "^alpha = +-" + to_string(s.C) + "*z^2");
  for (int sign : {3, -3})
    cert.add("prop3_sweep").add("sign", static_cast<long>(sign)).add("range", 100L).add("pairs", pairs).add("ord2", join_any(ord2[sign]));
  cert.add("prop3_search").add("b", s.a_base).add("x_min", 2L).add("x_max", 12L).add("y_max", 12L).add("hits", static_cast<long>(hits.size()));
  cert.add("alpha_even")
      .add("xy", -1L)
      .add("two_power", "2^(2*" + std::to_string(x) + ")")
      .add("status", conic_ok && hits.empty() ? "excluded" : "open")
      .add("reason", "2^x = family-2 x-value has ord2 in {0,1}, but 4 | 2^x");


  struct Cong {
    std::string name;
    ExpTemplate value;
    Integer modulus;
    long start, step;
  };
  const std::vector<Cong> congs = {
      {"xy=-1, alpha odd", {s.B, -1, s.a_base}, 6, 1, 2},
      {"xy=1", {s.B, 1, s.a_base}, 5, 1, 1},
  };
  bool cong_ok = true;
  for (const auto& c : congs) {
    ResidueSet allowed = ResidueSet::scaled_squares(c.modulus, {s.C, -s.C});
    CongruenceReport r = congruence_obstruction(c.value, c.modulus, allowed, c.start, c.step, config.alpha_max);
    long obstructed = std::count_if(r.verdicts.begin(), r.verdicts.end(), [](const auto& v) { return v.obstructed; });
    std::set<Integer> seen;
    for (const auto& v : r.verdicts) seen.insert(v.residue);
    cert.add("congruence")
        .add("case", c.name)
        .add("template", c.value.to_string())
        .add("modulus", c.modulus)
        .add("allowed", allowed.to_string())
        .add("alpha_start", c.start)
        .add("alpha_step", c.step)
        .add("alpha_max", config.alpha_max)
        .add("checked", static_cast<long>(r.verdicts.size()))
        .add("obstructed", obstructed)
        .add("residues", join_any(seen))
        .add("cycle", join(r.cycle_residues))
        .add("all_alpha", r.all_alpha);
    cong_ok = cong_ok && r.all_alpha && r.obstructed();
  }
  out.closed = conic_ok && hits.empty() && cong_ok;
  cert.add("branch_status").add("name", "unit").add("status", out.closed ? "closed" : "open").add("caveat", "");
  return out;
}

UnitBranch unit_branch_ppp3(const ProveConfig& config, const TheoremShape& s) {
  UnitBranch out;
  Certificate& cert = out.part;
  TernaryEquation eq = TernaryEquation::make(s.a_base, s.B, s.C, 3);
  for (int sign : {1, -1}) {
    auto [even, odd] = reduce_unit_case(eq, sign);
    for (const MordellInstance* inst : {&even, &odd}) {
      // X^3 + k - Y^2 = f (C w^3 - 2^alpha - sign B) for X = x_scale w, Y = y_scale 2^m
      bool identity = true;
      const Integer factor = inst->alpha_parity == 0 ? Integer(s.C * s.C) : Integer(8 * s.C * s.C);
      for (long alpha = 1; alpha <= 12; ++alpha) {
        if (alpha % 2 != inst->alpha_parity) continue;
        const long m = alpha / 2;
        for (long w = -4; w <= 4; ++w) {
          if (w == 0) continue;
          Integer X = inst->x_scale * w;
          Integer Y = inst->y_scale * ipow(2, static_cast<unsigned long>(m));
          Integer lhs = X * X * X + inst->k - Y * Y;
          Integer rhs = factor * (s.C * w * w * w - ipow(2, static_cast<unsigned long>(alpha)) - sign * s.B);
          if (lhs != rhs) identity = false;
        }
      }
      MordellSolutionSet set = mordell_search(inst->k, config.mordell_bound, config.threads);
      auto outcomes = filter_mordell_solutions(set, *inst);
      long kept = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.kept; });
      cert.add("unit_case")
          .add("xy", static_cast<long>(sign))
          .add("alpha", inst->alpha_parity == 0 ? "even" : "odd")
          .add("k", inst->k)
          .add("x_scale", inst->x_scale)
          .add("y_form", inst->y_form())
          .add("identity", identity);
      cert.add("mordell").add("k", inst->k).add("bound", config.mordell_bound).add("solutions", static_cast<long>(set.solutions.size()));
      for (const auto& o : outcomes)
        cert.add("mordell_point").add("k", inst->k).add("X", o.X).add("Y", o.Y).add("kept", o.kept).add("reason", o.reason);
      cert.add("unit_status").add("k", inst->k).add("kept", kept);
      out.closed = out.closed && identity && kept == 0;
    }
  }
  cert.add("branch_status")
      .add("name", "unit")
      .add("status", out.closed ? "closed" : "open")
      .add("caveat", "Mordell equations searched exhaustively for |X| <= " + std::to_string(config.mordell_bound) +
                         " only; completeness beyond the bound is not claimed");
  return out;
}

}  // namespace

NewformProvider store_provider(NewformStore& store, NewformSource source) {
  return [&store, source](long level) {
    NewformData d;
    d.forms = store.load_level(level, source);
    d.curves = store.load_curves(level, source);
    return d;
  };
}

ProofOutcome prove_theorem(const ProveConfig& config, const NewformProvider& provider) {
  const TheoremShape s = shape_for(config);
  if (config.mordell_bound < 1) throw Error(Errc::InvalidArgument, "mordell bound must be positive");
  if (config.alpha_max < 1) throw Error(Errc::InvalidArgument, "alpha_max must be positive");
  if (config.witness_plan != "classic" && config.witness_plan != "all")
    throw Error(Errc::InvalidArgument, "witness plan must be classic or all, got '" + config.witness_plan + "'");

  // The unit branch is independent of the newform data; run it alongside.
  auto unit = std::async(std::launch::async, [&] {
    return s.m == 2 ? unit_branch_ppp2(config, s) : unit_branch_ppp3(config, s);
  });

  ProofOutcome outcome;
  Certificate& cert = outcome.certificate;
  cert.add(kCertificateSchema).add("version", static_cast<long>(kCertificateVersion));
  cert.add("tool").add("name", "ppk").add("version", kToolVersion);
  cert.add("theorem")
      .add("id", static_cast<long>(s.id))
      .add("equation", s.equation)
      .add("n_floor", s.n_floor)
      .add("exclude", join_any(s.excluded));
  cert.add("config")
      .add("convention", to_string(config.convention))
      .add("mordell_bound", config.mordell_bound)
      .add("witness_plan", config.witness_plan)
      .add("c_power", config.c_power)
      .add("newform_source", to_string(config.source))
      .add("alpha_max", config.alpha_max);

  cert.add("branch").add("name", "frey").add("hypothesis", "xy != +-1");
  FrobeniusBranch frey;
  try {
    const Integer level = level_branch(cert, s);
    frey = newform_branch(cert, config, s, level.get_si(), provider);
  } catch (...) {
    unit.wait();
    throw;
  }

  cert.add("branch").add("name", "unit").add("hypothesis", "xy = +-1");
  UnitBranch u = unit.get();
  cert.lines.insert(cert.lines.end(), u.part.lines.begin(), u.part.lines.end());

  outcome.closed = frey.closed && u.closed;
  outcome.open = frey.open;
  if (!u.closed) outcome.open.push_back("unit");
  cert.add("conclusion")
      .add("status", outcome.closed ? "closed" : "open")
      .add("open", join_any(outcome.open))
      .add("text", outcome.closed ? s.conclusion : "not proved: open " + join_any(outcome.open, ", "));
  if (!frey.convention_dependent.empty())
    cert.lines.back().add("convention_note", "verdict depends on the trace convention for " +
                                                 join_any(frey.convention_dependent) + "; this run uses " +
                                                 to_string(config.convention));
  return outcome;
}

VerifyResult verify_certificate(const std::string& text, unsigned threads) {
  Certificate cert = Certificate::parse(text);
  ProveConfig config;
  const CertLine& th = cert.first("theorem");
  const CertLine& cf = cert.first("config");
  auto as_long = [](const std::string& v) {
    Integer i = parse_integer(v);
    if (!i.fits_slong_p()) throw Error(Errc::ParseError, "value out of range: " + v);
    return i.get_si();
  };
  config.theorem = static_cast<int>(as_long(th.get("id")));
  config.convention = parse_convention(cf.get("convention"));
  config.mordell_bound = as_long(cf.get("mordell_bound"));
  config.witness_plan = cf.get("witness_plan");
  config.c_power = as_long(cf.get("c_power"));
  config.source = parse_newform_source(cf.get("newform_source"));
  config.alpha_max = as_long(cf.get("alpha_max"));
  config.threads = threads;

  for (const auto* m : cert.find("mordell"))
    if (as_long(m->get("bound")) != config.mordell_bound)
      return {false, 0, "bound mismatch: Mordell search for k=" + m->get("k") + " used bound " + m->get("bound") +
                            ", configuration says " + std::to_string(config.mordell_bound)};

  // Newform data embedded in the certificate.
  std::map<std::string, NewformRecord> forms;
  std::vector<std::string> order;
  for (const auto* f : cert.find("form")) {
    NewformRecord r;
    r.label = f->get("label");
    r.level = parse_integer(f->get("level"));
    r.weight = static_cast<int>(as_long(f->get("weight")));
    r.field_poly = parse_poly(f->get("field_poly"));
    order.push_back(r.label);
    forms[r.label] = std::move(r);
  }
  for (const auto* e : cert.find("eig")) {
    auto it = forms.find(e->get("form"));
    if (it == forms.end()) throw Error(Errc::ParseError, "eigenvalue for unknown form " + e->get("form"));
    std::string v = e->get("value");
    FieldElement c;
    auto slash = v.find('/');
    if (slash != std::string::npos) {
      c.den = parse_integer(v.substr(slash + 1));
      v = v.substr(0, slash);
    }
    c.coeffs = parse_integer_list(v);
    it->second.eigenvalues[as_long(e->get("q"))] = std::move(c);
  }
  std::vector<RationalNewformCurve> curves;
  for (const auto* c : cert.find("curve"))
    curves.push_back({c->get("label"), c->get("form"), WeierstrassCurve::parse(c->get("ainvs"))});

  NewformProvider embedded = [&](long level) {
    NewformData d;
    for (const auto& label : order)
      if (forms[label].level == level) d.forms.push_back(forms[label]);
    for (const auto& c : curves) d.curves.push_back(c);
    if (d.forms.empty()) throw Error(Errc::LevelNotAvailable, "certificate embeds no newforms at level " + std::to_string(level));
    return d;
  };

  ProofOutcome replay;
  try {
    replay = prove_theorem(config, embedded);
  } catch (const Error& e) {
    return {false, 0, std::string("replay failed: ") + e.what()};
  }
  const std::string regenerated = replay.certificate.serialize();
  if (regenerated == text) return {true, 0, "ok"};

  std::istringstream a(text), b(regenerated);
  std::string la, lb;
  long line = 0;
  while (true) {
    ++line;
    bool ga = static_cast<bool>(std::getline(a, la));
    bool gb = static_cast<bool>(std::getline(b, lb));
    if (!ga && !gb) break;
    if (!ga || !gb || la != lb) {
      std::string msg = "line " + std::to_string(line) + " differs from the replay";
      msg += "\n  certificate: " + (ga ? la : std::string("<end of file>"));
      msg += "\n  replay:      " + (gb ? lb : std::string("<end of file>"));
      return {false, line, msg};
    }
  }
  return {false, 0, "certificate differs from the replay (trailing bytes)"};
}

}  // namespace ppk
