#pragma once

// Weight-2, trivial-character newform data: the on-disk record format, the
// bundled datastore with a remote (LMFDB-schema) client and local cache, and
// exact norm / residue computations in Hecke eigenvalue fields.

#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ppk/algebra.hpp"
#include "ppk/ellcurve.hpp"

namespace ppk {

/// Element of K_f = Q[x]/(field_poly) in the power basis: (sum v_i theta^i) / den.
struct FieldElement {
  std::vector<Integer> coeffs;
  Integer den = 1;

  IntPoly numerator() const { return IntPoly(coeffs); }
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

struct NewformRecord {
  std::string label;
  Integer level;
  int weight = 2;
  IntPoly field_poly;
  std::map<long, FieldElement> eigenvalues;  // prime q -> c_q

  long degree() const { return field_poly.degree(); }
  bool is_rational() const { return degree() == 1; }
  const FieldElement& eigenvalue(long q) const;  // throws MissingEigenvalue
  friend bool operator==(const NewformRecord&, const NewformRecord&) = default;
};

struct RationalNewformCurve {
  std::string label;       // e.g. "45a1"
  std::string form_label;  // newform it belongs to
  WeierstrassCurve curve;
};

/// Strict parser for the one-record-per-file format:
///   label: 338.7
///   level: 338
///   weight: 2
///   field_poly: 13,-4,-3,1
///   3: 0,1,0
///   5: 12,0,-2[/den]
NewformRecord parse_newform(std::string_view text);
std::string serialize_newform(const NewformRecord& record);

RationalNewformCurve parse_curve_record(std::string_view text);
std::string serialize_curve_record(const RationalNewformCurve& curve);

/// SHA-256 of the serialized record, hex encoded.
std::string fingerprint(const NewformRecord& record);

/// Primes every ingested record must cover.
constexpr long kCoverageBound = 50;

/// Ingest checks: monic field polynomial, vector lengths, coverage of every
/// prime q <= kCoverageBound, and |sigma(c_q)| <= 2 sqrt(q) + 1e-6 for each
/// complex embedding sigma and every q not dividing the level.
/// Throws ValidationFailed.
void validate_newform(const NewformRecord& record);
/// Checks a companion curve against its form: a_q(curve) = c_q for good q.
void validate_curve(const RationalNewformCurve& curve, const NewformRecord& form);

/// Complex roots of a monic integer polynomial (companion-matrix eigenvalues).
std::vector<std::complex<double>> complex_roots(const IntPoly& monic);

/// Norm_{K_f/Q}(c_q - a), exact.
Integer eigenvalue_norm_diff(const NewformRecord& f, long q, const Integer& a);

struct ResiduePair {
  Integer theta;  // root of field_poly mod n: a degree-one prime above n
  Integer value;  // c_q mod that prime
  friend bool operator==(const ResiduePair&, const ResiduePair&) = default;
};

/// One pair per root of field_poly mod n. Throws NoDegreeOnePrime when there
/// is no root, or when n divides the denominator of c_q.
std::vector<ResiduePair> eigenvalue_residues(const NewformRecord& f, long q, const Integer& n);

/// Characteristic polynomial of c_q over Q (integral, since c_q is an
/// algebraic integer) for each stored q. It does not depend on the basis of
/// K_f, so it matches records across data sources.
std::map<long, IntPoly> canonical_signature(const NewformRecord& record);

/// For each candidate record, the reference label with the same signature
/// (empty string when nothing matches).
std::vector<std::string> match_records(const std::vector<NewformRecord>& candidates,
                                       const std::vector<NewformRecord>& reference);

/// "338.2" < "338.10".
bool label_less(const std::string& a, const std::string& b);

enum class NewformSource { bundled, remote };
const char* to_string(NewformSource source);
NewformSource parse_newform_source(std::string_view text);

struct IngestReport {
  long level = 0;
  std::vector<std::string> labels;
  std::vector<long> degrees;
  std::vector<long> primes_covered;
  std::vector<std::string> curves;
  std::filesystem::path directory;

  std::string to_string() const;
};

struct StoreOptions {
  std::filesystem::path data_dir;   // bundled records: <data_dir>/<level>/*.form
  std::filesystem::path cache_dir;  // fetched records, same layout
  std::string endpoint;             // base URL of the remote database

  /// data_dir from $PPK_DATA_DIR or the build-time default, cache_dir from
  /// $PPK_CACHE_DIR or ~/.cache/ppk, endpoint from $PPK_NEWFORM_ENDPOINT or
  /// https://www.lmfdb.org.
  static StoreOptions from_environment();
};

/// Remote payload for one level, before conversion.
struct RemoteLevel {
  std::vector<NewformRecord> forms;
  std::vector<RationalNewformCurve> curves;
};

/// Downloads and converts one level from an LMFDB-compatible API
/// (mf_newforms, mf_hecke_nf, ec_curvedata). Throws NetworkError or
/// RemoteSchemaMismatch.
RemoteLevel fetch_remote_level(const std::string& endpoint, long level);

/// Converts already-downloaded JSON documents (the "data" arrays of the three
/// collections). Exposed separately so the schema mapping is testable offline.
RemoteLevel convert_remote_level(long level, const std::string& newforms_json,
                                 const std::vector<std::string>& hecke_json, const std::string& curves_json);

class NewformStore {
 public:
  explicit NewformStore(StoreOptions options);

  const StoreOptions& options() const { return options_; }

  /// All Galois orbits at level N, ordered by label. Remote reads hit the
  /// cache first, then the endpoint (caching the result); when both fail the
  /// bundled records are served. Throws LevelNotAvailable / CacheCorrupt.
  std::vector<NewformRecord> load_level(long level, NewformSource source);
  std::vector<RationalNewformCurve> load_curves(long level, NewformSource source);

  /// Fetches, validates, and atomically replaces <cache_dir>/<level>.
  /// Concurrent calls for the same level share one request. The cache is
  /// left untouched when validation fails.
  IngestReport fetch_and_cache(long level, const std::string& endpoint);

  /// Set when the last remote load fell back to bundled data.
  std::string last_fallback() const;

 private:
  IngestReport fetch_and_cache_now(long level, const std::string& endpoint);

  StoreOptions options_;
  mutable std::mutex mutex_;
  std::map<long, std::shared_future<IngestReport>> in_flight_;
  std::string last_fallback_;
};

/// Reads every *.form (and *.curve) file of one level directory.
std::vector<NewformRecord> read_level_directory(const std::filesystem::path& dir);
std::vector<RationalNewformCurve> read_curve_directory(const std::filesystem::path& dir);

}  // namespace ppk
