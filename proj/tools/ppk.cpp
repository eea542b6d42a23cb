// ppk: command-line front end for the proof pipeline.
// Exit codes: 0 closed / ok, 2 a branch stays open or a check fails, 1 error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ppk/diophantine.hpp"
#include "ppk/eliminator.hpp"
#include "ppk/ellcurve.hpp"
#include "ppk/newforms.hpp"
#include "ppk/prove.hpp"

using namespace ppk;

namespace {

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  if (text.empty()) return out;
  for (const auto& v : parse_integer_list(text)) {
    if (!v.fits_slong_p()) throw Error(Errc::InvalidArgument, "value out of range in '" + text + "'");
    out.push_back(v.get_si());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppk: modular-method proofs for A x^n + B y^n = C z^m"};
  app.require_subcommand(1);

  std::string data_dir, cache_dir;
  app.add_option("--data-dir", data_dir, "bundled newform directory");
  app.add_option("--cache-dir", cache_dir, "cache for fetched newforms");

  auto make_store = [&] {
    StoreOptions o = StoreOptions::from_environment();
    if (!data_dir.empty()) o.data_dir = data_dir;
    if (!cache_dir.empty()) o.cache_dir = cache_dir;
    return NewformStore(o);
  };

  // prove
  auto* prove = app.add_subcommand("prove", "prove one theorem and emit a certificate");
  ProveConfig config;
  std::string convention = "always", source = "bundled", out_path;
  prove->add_option("--theorem", config.theorem, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  prove->add_option("--convention", convention, "special traces p+1: always or never")
      ->check(CLI::IsMember({"always", "never"}));
  prove->add_option("--mordell-bound", config.mordell_bound, "search bound for |X|")->check(CLI::PositiveNumber);
  prove->add_option("--newform-source", source, "bundled or remote")->check(CLI::IsMember({"bundled", "remote"}));
  prove->add_option("--witness-plan", config.witness_plan, "classic or all")->check(CLI::IsMember({"classic", "all"}));
  prove->add_option("--c-power", config.c_power, "C = 7^beta or 13^beta");
  prove->add_option("--alpha-max", config.alpha_max, "congruence verdicts listed up to this alpha");
  prove->add_option("--threads", config.threads, "worker threads for the Mordell search (0 = auto)");
  prove->add_option("--out", out_path, "certificate file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "replay a certificate");
  std::string cert_path;
  verify->add_option("--cert", cert_path, "certificate file")->required();

  // eliminate
  auto* elim = app.add_subcommand("eliminate", "run the sieve on every newform of a level");
  long level = 0, n_floor = 0;
  std::string witnesses = "all", signature, exclude, refine;
  elim->add_option("--level", level)->required()->check(CLI::PositiveNumber);
  elim->add_option("--witnesses", witnesses, "comma list, or 'all' for every prime below n_floor");
  elim->add_option("--signature", signature)->required()->check(CLI::IsMember({"ppp2", "ppp3"}));
  elim->add_option("--n-floor", n_floor)->required()->check(CLI::PositiveNumber);
  elim->add_option("--exclude", exclude, "comma list of excluded exponents");
  elim->add_option("--refine", refine, "comma list of primes q for the residue refinement");
  elim->add_option("--convention", convention)->check(CLI::IsMember({"always", "never"}));
  elim->add_option("--newform-source", source)->check(CLI::IsMember({"bundled", "remote"}));

  // mordell
  auto* mordell = app.add_subcommand("mordell", "integral points on Y^2 = X^3 + k with |X| <= bound");
  std::string k_text;
  long bound = 0;
  unsigned threads = 0;
  mordell->add_option("--k", k_text)->required();
  mordell->add_option("--bound", bound)->required()->check(CLI::PositiveNumber);
  mordell->add_option("--threads", threads);

  // conic
  auto* conic = app.add_subcommand("conic", "point of x^2 + p y^2 = z^2 from parameters");
  std::string p_text, s_text, t_text;
  int family = 1, sign_x = 1, sign_z = 1;
  conic->add_option("--p", p_text)->required();
  conic->add_option("--family", family)->required()->check(CLI::IsMember({1, 2}));
  conic->add_option("--s", s_text)->required();
  conic->add_option("--t", t_text)->required();
  conic->add_option("--sign-x", sign_x)->check(CLI::IsMember({1, -1}));
  conic->add_option("--sign-z", sign_z)->check(CLI::IsMember({1, -1}));

  auto* cover = app.add_subcommand("conic-cover", "check both families against brute force");
  cover->add_option("--p", p_text)->required();
  cover->add_option("--bound", bound)->required()->check(CLI::PositiveNumber);

  // ap
  auto* ap = app.add_subcommand("ap", "trace of Frobenius by point counting");
  std::string curve_text;
  long p = 0;
  ap->add_option("--curve", curve_text, "a1,a2,a3,a4,a6")->required();
  ap->add_option("--p", p)->required()->check(CLI::PositiveNumber);

  // newforms
  auto* nf = app.add_subcommand("newforms", "list or fetch the newforms of a level");
  bool fetch = false;
  std::string endpoint;
  nf->add_option("--level", level)->required()->check(CLI::PositiveNumber);
  nf->add_flag("--fetch", fetch, "download, validate, and cache the level");
  nf->add_option("--endpoint", endpoint, "API base URL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share exit code 1 with library errors; --help stays 0
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*prove) {
      config.convention = parse_convention(convention);
      config.source = parse_newform_source(source);
      NewformStore store = make_store();
      ProofOutcome outcome = prove_theorem(config, store_provider(store, config.source));
      if (!store.last_fallback().empty()) std::cerr << "warning: " << store.last_fallback() << "\n";
      const std::string text = outcome.certificate.serialize();
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << text)) throw Error(Errc::InvalidArgument, "cannot write " + out_path);
      }
      std::cerr << outcome.certificate.first("conclusion").get("text") << "\n";
      return outcome.closed ? 0 : 2;
    }

    if (*verify) {
      VerifyResult r = verify_certificate(read_file(cert_path));
      std::cout << (r.ok ? "ok" : "fail: " + r.message) << "\n";
      return r.ok ? 0 : 2;
    }

    if (*elim) {
      NewformStore store = make_store();
      const auto src = parse_newform_source(source);
      const auto conv = parse_convention(convention);
      const int m = signature == "ppp2" ? 2 : 3;
      std::set<Integer> excluded;
      for (long e : parse_long_list(exclude)) excluded.insert(e);
      bool all_gone = true;
      Certificate report;
      for (const auto& f : store.load_level(level, src)) {
        std::vector<long> ws = witnesses == "all" ? default_witnesses(f, n_floor) : parse_long_list(witnesses);
        EliminationReport r = sieve_form(f, ws, m, n_floor, excluded, conv);
        refine_report(r, f, parse_long_list(refine));
        for (const auto& w : r.witnesses) {
          for (const auto& e : w.norms)
            report.add("norm").add("form", f.label).add("p", w.p).add("a", e.a).add("value", e.norm);
          report.add("witness").add("form", f.label).add("p", w.p).add("unbounded", w.unbounded).add("primes", join(w.primes));
        }
        for (const auto& rf : r.refinements)
          report.add("refine")
              .add("form", f.label)
              .add("n", rf.n)
              .add("q", rf.q)
              .add("residues", join(rf.residues))
              .add("admissible", join(rf.admissible))
              .add("outcome", to_string(rf.outcome));
        report.add("form_status")
            .add("label", f.label)
            .add("status", r.eliminated() ? "eliminated" : "open")
            .add("open", r.unbounded ? std::string("all") : join(r.open()));
        all_gone = all_gone && r.eliminated();
      }
      std::cout << report.serialize();
      return all_gone ? 0 : 2;
    }

    if (*mordell) {
      MordellSolutionSet set = mordell_search(parse_integer(k_text), bound, threads);
      std::cout << "k=" << to_string(set.k) << " bound=" << set.bound << " solutions=" << set.solutions.size() << "\n";
      for (const auto& [x, y] : set.solutions) std::cout << to_string(x) << " " << to_string(y) << "\n";
      return 0;
    }

    if (*conic) {
      ConicPoint pt = conic_point({parse_integer(p_text), family, parse_integer(s_text), parse_integer(t_text), sign_x, sign_z});
      std::cout << to_string(pt.x) << " " << to_string(pt.y) << " " << to_string(pt.z) << "\n";
      return 0;
    }

    if (*cover) {
      ConicCoverReport r = conic_cover_check(parse_integer(p_text), bound);
      std::cout << "p=" << to_string(r.p) << " bound=" << r.bound << " solutions=" << r.solutions
                << " family1=" << r.family1 << " family2=" << r.family2 << " uncovered=" << r.uncovered.size()
                << " overlapping=" << r.overlapping.size() << " invalid=" << r.invalid.size() << "\n";
      for (const auto& pt : r.uncovered)
        std::cout << "uncovered " << to_string(pt.x) << " " << to_string(pt.y) << " " << to_string(pt.z) << "\n";
      return r.ok() ? 0 : 2;
    }

    if (*ap) {
      std::cout << to_string(ap_trace(WeierstrassCurve::parse(curve_text), p)) << "\n";
      return 0;
    }

    if (*nf) {
      NewformStore store = make_store();
      if (fetch) {
        IngestReport r = store.fetch_and_cache(level, endpoint.empty() ? store.options().endpoint : endpoint);
        std::cout << r.to_string();
        return 0;
      }
      for (const auto& f : store.load_level(level, NewformSource::bundled))
        std::cout << f.label << " degree=" << f.degree() << " field_poly=" << format_poly(f.field_poly)
                  << " sha256=" << fingerprint(f) << "\n";
      for (const auto& c : store.load_curves(level, NewformSource::bundled))
        std::cout << "curve " << c.label << " form=" << c.form_label << " ainvs=" << c.curve.format() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
