#include "ppk/newforms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <Eigen/Eigenvalues>
#include <openssl/evp.h>

namespace ppk {

namespace fs = std::filesystem;

const FieldElement& NewformRecord::eigenvalue(long q) const {
  auto it = eigenvalues.find(q);
  if (it == eigenvalues.end())
    throw Error(Errc::MissingEigenvalue, "no c_" + std::to_string(q) + " stored for " + label);
  return it->second;
}

namespace {

std::vector<std::string> split_lines(std::string_view text, const char* what) {
  if (text.empty() || text.back() != '\n') throw Error(Errc::ParseError, std::string(what) + ": missing final newline");
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::pair<std::string, std::string> split_field(const std::string& line) {
  auto pos = line.find(": ");
  if (pos == std::string::npos || pos == 0) throw Error(Errc::ParseError, "malformed line '" + line + "'");
  return {line.substr(0, pos), line.substr(pos + 2)};
}

std::string expect_field(const std::string& line, const std::string& key) {
  auto [k, v] = split_field(line);
  if (k != key) throw Error(Errc::ParseError, "expected '" + key + "', found '" + k + "'");
  if (v.empty()) throw Error(Errc::ParseError, "empty value for '" + key + "'");
  return v;
}

long parse_small(const std::string& text) {
  Integer v = parse_integer(text);
  if (!v.fits_slong_p()) throw Error(Errc::ParseError, "value out of range: " + text);
  return v.get_si();
}

}  // namespace

NewformRecord parse_newform(std::string_view text) {
  auto lines = split_lines(text, "newform record");
  if (lines.size() < 4) throw Error(Errc::ParseError, "newform record needs four header lines");
  NewformRecord r;
  r.label = expect_field(lines[0], "label");
  r.level = parse_integer(expect_field(lines[1], "level"));
  r.weight = static_cast<int>(parse_small(expect_field(lines[2], "weight")));
  r.field_poly = parse_poly(expect_field(lines[3], "field_poly"));
  if (r.level < 1) throw Error(Errc::ParseError, "level must be positive");
  const long d = r.field_poly.degree();
  if (d < 1) throw Error(Errc::ParseError, "field polynomial must have degree >= 1");
  long previous = 0;
  for (std::size_t i = 4; i < lines.size(); ++i) {
    auto [key, value] = split_field(lines[i]);
    long q = parse_small(key);
    if (q <= previous) throw Error(Errc::ParseError, "eigenvalue primes must ascend (at " + key + ")");
    previous = q;
    FieldElement c;
    auto slash = value.find('/');
    if (slash != std::string::npos) {
      c.den = parse_integer(value.substr(slash + 1));
      if (c.den < 1) throw Error(Errc::ParseError, "denominator must be positive");
      value = value.substr(0, slash);
    }
    c.coeffs = parse_integer_list(value);
    if (static_cast<long>(c.coeffs.size()) != d)
      throw Error(Errc::ParseError, "c_" + key + " has " + std::to_string(c.coeffs.size()) + " entries, field degree is " +
                                        std::to_string(d));
    r.eigenvalues.emplace(q, std::move(c));
  }
  return r;
}

std::string serialize_newform(const NewformRecord& r) {
  std::ostringstream os;
  os << "label: " << r.label << "\n"
     << "level: " << to_string(r.level) << "\n"
     << "weight: " << r.weight << "\n"
     << "field_poly: " << format_poly(r.field_poly) << "\n";
  for (const auto& [q, c] : r.eigenvalues) {
    os << q << ": " << join(c.coeffs);
    if (c.den != 1) os << "/" << to_string(c.den);
    os << "\n";
  }
  return os.str();
}

RationalNewformCurve parse_curve_record(std::string_view text) {
  auto lines = split_lines(text, "curve record");
  if (lines.size() != 3) throw Error(Errc::ParseError, "curve record needs exactly three lines");
  RationalNewformCurve c;
  c.label = expect_field(lines[0], "label");
  c.form_label = expect_field(lines[1], "form");
  c.curve = WeierstrassCurve::parse(expect_field(lines[2], "ainvs"));
  return c;
}

std::string serialize_curve_record(const RationalNewformCurve& c) {
  return "label: " + c.label + "\nform: " + c.form_label + "\nainvs: " + c.curve.format() + "\n";
}

std::string fingerprint(const NewformRecord& record) {
  const std::string text = serialize_newform(record);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &size, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::InvalidArgument, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::vector<std::complex<double>> complex_roots(const IntPoly& f) {
  if (!f.is_monic() || f.degree() < 1) throw Error(Errc::NonMonic, "complex_roots needs a monic polynomial");
  const auto d = static_cast<Eigen::Index>(f.degree());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -f[static_cast<std::size_t>(i)].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

void validate_newform(const NewformRecord& r) {
  auto fail = [&](const std::string& why) { throw Error(Errc::ValidationFailed, r.label + ": " + why); };
  if (r.label.empty()) fail("empty label");
  if (r.level < 1) fail("level must be positive");
  if (r.weight != 2) fail("weight must be 2");
  if (!r.field_poly.is_monic() || r.field_poly.degree() < 1) fail("field polynomial not monic");
  const long d = r.degree();
  for (const auto& [q, c] : r.eigenvalues) {
    if (!is_prime(Integer(q))) fail(std::to_string(q) + " is not prime");
    if (static_cast<long>(c.coeffs.size()) != d) fail("c_" + std::to_string(q) + " has the wrong length");
    if (c.den < 1) fail("c_" + std::to_string(q) + " has a non-positive denominator");
  }
  for (long q : primes_up_to(kCoverageBound))
    if (!r.eigenvalues.count(q)) fail("missing c_" + std::to_string(q) + " (coverage to " + std::to_string(kCoverageBound) + ")");

  const auto roots = complex_roots(r.field_poly);
  for (const auto& [q, c] : r.eigenvalues) {
    if (mpz_divisible_ui_p(r.level.get_mpz_t(), static_cast<unsigned long>(q))) continue;
    const double bound = 2.0 * std::sqrt(static_cast<double>(q)) + 1e-6;
    for (const auto& theta : roots) {
      std::complex<double> v = evaluate(c.numerator(), theta) / c.den.get_d();
      if (std::abs(v) > bound) fail("c_" + std::to_string(q) + " violates the Hasse bound (|" + std::to_string(std::abs(v)) + "|)");
    }
  }
}

void validate_curve(const RationalNewformCurve& curve, const NewformRecord& form) {
  auto fail = [&](const std::string& why) { throw Error(Errc::ValidationFailed, curve.label + ": " + why); };
  if (discriminant(curve.curve) == 0) fail("singular model");
  if (!form.is_rational()) fail("companion curve attached to a non-rational form " + form.label);
  for (const auto& [q, c] : form.eigenvalues) {
    if (mpz_divisible_ui_p(form.level.get_mpz_t(), static_cast<unsigned long>(q))) continue;
    if (mpz_divisible_ui_p(discriminant(curve.curve).get_mpz_t(), static_cast<unsigned long>(q))) continue;
    Integer cq = evaluate(c.numerator(), Integer(-form.field_poly[0]));
    if (c.den != 1) cq /= c.den;
    if (ap_trace(curve.curve, q) != cq) fail("a_" + std::to_string(q) + " disagrees with " + form.label);
  }
}

Integer eigenvalue_norm_diff(const NewformRecord& f, long q, const Integer& a) {
  const FieldElement& c = f.eigenvalue(q);
  // N(num/den - a) = N(num - a den) / den^d
  IntPoly shifted = c.numerator() - IntPoly::constant(a * c.den);
  Integer norm = resultant(f.field_poly, shifted);
  if (c.den != 1) {
    Integer scale = ipow(c.den, static_cast<unsigned long>(f.degree()));
    if (!mpz_divisible_p(norm.get_mpz_t(), scale.get_mpz_t()))
      throw Error(Errc::ValidationFailed, f.label + ": c_" + std::to_string(q) + " is not integral");
    mpz_divexact(norm.get_mpz_t(), norm.get_mpz_t(), scale.get_mpz_t());
  }
  return norm;
}

std::vector<ResiduePair> eigenvalue_residues(const NewformRecord& f, long q, const Integer& n) {
  const FieldElement& c = f.eigenvalue(q);
  if (mpz_divisible_p(c.den.get_mpz_t(), n.get_mpz_t()))
    throw Error(Errc::NoDegreeOnePrime, "denominator of c_" + std::to_string(q) + " is divisible by " + to_string(n));
  auto roots = roots_mod_prime(f.field_poly, n);
  if (roots.empty())
    throw Error(Errc::NoDegreeOnePrime, pretty_poly(f.field_poly) + " has no root mod " + to_string(n));
  Integer inv;
  mpz_invert(inv.get_mpz_t(), c.den.get_mpz_t(), n.get_mpz_t());
  std::vector<ResiduePair> out;
  for (const auto& r : roots) out.push_back({r, mod(poly_eval_mod(c.numerator(), r, n) * inv, n)});
  return out;
}

std::map<long, IntPoly> canonical_signature(const NewformRecord& record) {
  std::map<long, IntPoly> out;
  const long d = record.degree();
  for (const auto& [q, c] : record.eigenvalues) {
    // charpoly(num/den)(t) = charpoly(num)(den t) / den^d
    IntPoly p = characteristic_polynomial(multiplication_matrix(record.field_poly, c.numerator()));
    std::vector<Integer> coeffs(static_cast<std::size_t>(d) + 1);
    for (long i = 0; i <= d; ++i) {
      Integer v = p[static_cast<std::size_t>(i)];
      Integer scale = ipow(c.den, static_cast<unsigned long>(d - i));
      if (!mpz_divisible_p(v.get_mpz_t(), scale.get_mpz_t()))
        throw Error(Errc::ValidationFailed, record.label + ": c_" + std::to_string(q) + " is not integral");
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), scale.get_mpz_t());
      coeffs[static_cast<std::size_t>(i)] = v;
    }
    out.emplace(q, IntPoly(std::move(coeffs)));
  }
  return out;
}

std::vector<std::string> match_records(const std::vector<NewformRecord>& candidates,
                                       const std::vector<NewformRecord>& reference) {
  std::vector<std::map<long, IntPoly>> ref_sigs;
  for (const auto& r : reference) ref_sigs.push_back(canonical_signature(r));
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    auto sig = canonical_signature(c);
    std::string found;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (reference[i].level != c.level || reference[i].degree() != c.degree()) continue;
      bool same = true, overlap = false;
      for (const auto& [q, p] : sig) {
        auto it = ref_sigs[i].find(q);
        if (it == ref_sigs[i].end()) continue;
        overlap = true;
        if (!(it->second == p)) {
          same = false;
          break;
        }
      }
      if (same && overlap) {
        found = reference[i].label;
        break;
      }
    }
    out.push_back(found);
  }
  return out;
}

bool label_less(const std::string& a, const std::string& b) {
  auto key = [](const std::string& s) {
    std::vector<std::pair<long, std::string>> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '.')) {
      bool numeric = !part.empty() && part.size() < 18 && std::all_of(part.begin(), part.end(), ::isdigit);
      parts.emplace_back(numeric ? std::stol(part) : -1, numeric ? "" : part);
    }
    return parts;
  };
  return key(a) < key(b);
}

const char* to_string(NewformSource source) { return source == NewformSource::bundled ? "bundled" : "remote"; }

NewformSource parse_newform_source(std::string_view text) {
  if (text == "bundled") return NewformSource::bundled;
  if (text == "remote") return NewformSource::remote;
  throw Error(Errc::InvalidArgument, "newform source must be bundled or remote, got '" + std::string(text) + "'");
}

std::string IngestReport::to_string() const {
  std::ostringstream os;
  os << "level " << level << ": " << labels.size() << " newform class(es)\n";
  for (std::size_t i = 0; i < labels.size(); ++i) os << "  " << labels[i] << " degree " << degrees[i] << "\n";
  os << "  eigenvalues for q in {";
  for (std::size_t i = 0; i < primes_covered.size(); ++i) os << (i ? "," : "") << primes_covered[i];
  os << "}\n";
  for (const auto& c : curves) os << "  curve " << c << "\n";
  os << "  cached in " << directory.string() << "\n";
  return os.str();
}

StoreOptions StoreOptions::from_environment() {
  StoreOptions o;
  const char* data = std::getenv("PPK_DATA_DIR");
  o.data_dir = data && *data ? fs::path(data) : fs::path(PPK_DEFAULT_DATA_DIR);
  const char* cache = std::getenv("PPK_CACHE_DIR");
  if (cache && *cache) {
    o.cache_dir = cache;
  } else {
    const char* home = std::getenv("HOME");
    o.cache_dir = fs::path(home && *home ? home : ".") / ".cache" / "ppk";
  }
  const char* endpoint = std::getenv("PPK_NEWFORM_ENDPOINT");
  o.endpoint = endpoint && *endpoint ? endpoint : "https://www.lmfdb.org";
  return o;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::CacheCorrupt, "cannot write " + path.string());
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<NewformRecord> read_level_directory(const fs::path& dir) {
  std::vector<NewformRecord> out;
  for (const auto& path : files_with_extension(dir, ".form")) {
    try {
      out.push_back(parse_newform(read_file(path)));
    } catch (const Error& e) {
      throw Error(e.code(), path.filename().string() + ": " + e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return label_less(a.label, b.label); });
  return out;
}

std::vector<RationalNewformCurve> read_curve_directory(const fs::path& dir) {
  std::vector<RationalNewformCurve> out;
  for (const auto& path : files_with_extension(dir, ".curve")) out.push_back(parse_curve_record(read_file(path)));
  return out;
}

NewformStore::NewformStore(StoreOptions options) : options_(std::move(options)) {}

std::string NewformStore::last_fallback() const {
  std::lock_guard lock(mutex_);
  return last_fallback_;
}

namespace {

std::vector<NewformRecord> read_cached(const fs::path& dir, long level) {
  try {
    auto records = read_level_directory(dir);
    if (records.empty()) throw Error(Errc::CacheCorrupt, "no records");
    for (const auto& r : records) {
      validate_newform(r);
      if (r.level != level) throw Error(Errc::CacheCorrupt, r.label + " has the wrong level");
    }
    return records;
  } catch (const Error& e) {
    throw Error(Errc::CacheCorrupt, "cache for level " + std::to_string(level) + " at " + dir.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<NewformRecord> NewformStore::load_level(long level, NewformSource source) {
  if (level < 1) throw Error(Errc::InvalidArgument, "level must be positive");
  const fs::path bundled = options_.data_dir / std::to_string(level);
  auto load_bundled = [&]() {
    if (!fs::is_directory(bundled) || files_with_extension(bundled, ".form").empty())
      throw Error(Errc::LevelNotAvailable, "level " + std::to_string(level) + " is not bundled in " + options_.data_dir.string());
    return read_level_directory(bundled);
  };
  if (source == NewformSource::bundled) return load_bundled();

  const fs::path cached = options_.cache_dir / std::to_string(level);
  if (fs::is_directory(cached)) return read_cached(cached, level);
  try {
    fetch_and_cache(level, options_.endpoint);
  } catch (const Error& e) {
    if (e.code() != Errc::NetworkError) throw;
    auto records = load_bundled();
    std::lock_guard lock(mutex_);
    last_fallback_ = std::string("remote unavailable (") + e.what() + "), served bundled data";
    return records;
  }
  return read_cached(cached, level);
}

std::vector<RationalNewformCurve> NewformStore::load_curves(long level, NewformSource source) {
  const fs::path cached = options_.cache_dir / std::to_string(level);
  if (source == NewformSource::remote && fs::is_directory(cached)) return read_curve_directory(cached);
  const fs::path bundled = options_.data_dir / std::to_string(level);
  if (!fs::is_directory(bundled)) return {};
  return read_curve_directory(bundled);
}

IngestReport NewformStore::fetch_and_cache(long level, const std::string& endpoint) {
  std::shared_future<IngestReport> pending;
  std::promise<IngestReport> promise;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = in_flight_.find(level);
    if (it != in_flight_.end()) {
      pending = it->second;
    } else {
      pending = promise.get_future().share();
      in_flight_.emplace(level, pending);
      owner = true;
    }
  }
  if (!owner) return pending.get();
  try {
    promise.set_value(fetch_and_cache_now(level, endpoint));
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  {
    std::lock_guard lock(mutex_);
    in_flight_.erase(level);
  }
  return pending.get();
}

IngestReport NewformStore::fetch_and_cache_now(long level, const std::string& endpoint) {
  RemoteLevel remote = fetch_remote_level(endpoint, level);
  if (remote.forms.empty())
    throw Error(Errc::ValidationFailed, "remote returned no newforms at level " + std::to_string(level));

  // Reuse bundled labels when the same classes are bundled.
  const fs::path bundled = options_.data_dir / std::to_string(level);
  if (fs::is_directory(bundled)) {
    auto reference = read_level_directory(bundled);
    auto labels = match_records(remote.forms, reference);
    std::map<std::string, std::string> renamed;
    for (std::size_t i = 0; i < remote.forms.size(); ++i)
      if (!labels[i].empty()) {
        renamed[remote.forms[i].label] = labels[i];
        remote.forms[i].label = labels[i];
      }
    for (auto& c : remote.curves)
      if (renamed.count(c.form_label)) c.form_label = renamed[c.form_label];
  }
  std::sort(remote.forms.begin(), remote.forms.end(), [](const auto& a, const auto& b) { return label_less(a.label, b.label); });

  IngestReport report;
  report.level = level;
  for (const auto& f : remote.forms) {
    validate_newform(f);
    if (f.level != level) throw Error(Errc::ValidationFailed, f.label + " reports level " + to_string(f.level));
    report.labels.push_back(f.label);
    report.degrees.push_back(f.degree());
  }
  for (const auto& c : remote.curves) {
    auto it = std::find_if(remote.forms.begin(), remote.forms.end(), [&](const auto& f) { return f.label == c.form_label; });
    if (it == remote.forms.end()) throw Error(Errc::ValidationFailed, c.label + " refers to unknown form " + c.form_label);
    validate_curve(c, *it);
    report.curves.push_back(c.label);
  }
  std::set<long> covered;
  for (const auto& [q, c] : remote.forms.front().eigenvalues) covered.insert(q);
  for (const auto& f : remote.forms)
    for (auto it = covered.begin(); it != covered.end();) it = f.eigenvalues.count(*it) ? std::next(it) : covered.erase(it);
  report.primes_covered.assign(covered.begin(), covered.end());

  // Write into a sibling temp dir, then swap it in with renames.
  static std::atomic<unsigned> counter{0};
  fs::create_directories(options_.cache_dir);
  const std::string tag = std::to_string(::getpid()) + "-" + std::to_string(counter++);
  const fs::path target = options_.cache_dir / std::to_string(level);
  const fs::path staging = options_.cache_dir / (".tmp-" + std::to_string(level) + "-" + tag);
  const fs::path retired = options_.cache_dir / (".old-" + std::to_string(level) + "-" + tag);
  fs::create_directories(staging);
  try {
    for (const auto& f : remote.forms) write_file(staging / (f.label + ".form"), serialize_newform(f));
    for (const auto& c : remote.curves) write_file(staging / (c.label + ".curve"), serialize_curve_record(c));
    if (fs::exists(target)) fs::rename(target, retired);
    fs::rename(staging, target);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    if (!fs::exists(target) && fs::exists(retired)) fs::rename(retired, target, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(retired, ec);
  report.directory = target;
  return report;
}

}  // namespace ppk
