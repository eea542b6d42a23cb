#pragma once

// End-to-end proofs for the three equations
//   5^a x^n + 64 y^n = 3 z^2,  2^a x^n + 27 y^n = 7 z^3,  2^a x^n + 27 y^n = 13 z^3
// and replay of the certificates they emit.

#include <functional>
#include <string>
#include <vector>

#include "ppk/certificate.hpp"
#include "ppk/eliminator.hpp"
#include "ppk/newforms.hpp"

namespace ppk {

struct ProveConfig {
  int theorem = 1;
  Convention convention = Convention::always;
  long mordell_bound = 1000000;
  /// "classic": one witness per form, the short hand-checkable elimination
  /// (c_3, or c_7 for three forms at 338) with refinement at q = 5;
  /// "all": every prime below n_floor coprime to the level.
  std::string witness_plan = "classic";
  /// C = 7^beta or 13^beta, reduced to its cubefree part.
  long c_power = 1;
  NewformSource source = NewformSource::bundled;
  unsigned threads = 0;
  long alpha_max = 999;  // congruence verdicts are listed up to here
};

struct NewformData {
  std::vector<NewformRecord> forms;
  std::vector<RationalNewformCurve> curves;
};

using NewformProvider = std::function<NewformData(long level)>;

/// Reads levels from a store.
NewformProvider store_provider(NewformStore& store, NewformSource source);

struct ProofOutcome {
  Certificate certificate;
  bool closed = false;
  std::vector<std::string> open;  // "label:n" or branch names
};

/// Throws InvalidArgument / UnsupportedShape for bad configurations and the
/// datastore errors when a level is missing. An open branch is not an error:
/// the certificate records it and `closed` is false.
ProofOutcome prove_theorem(const ProveConfig& config, const NewformProvider& provider);

struct VerifyResult {
  bool ok = false;
  long line = 0;  // 1-based line of the first divergence
  std::string message;
};

/// Replays the proof from the data embedded in the certificate and compares
/// the regenerated text line by line. Throws ParseError on malformed input.
VerifyResult verify_certificate(const std::string& text, unsigned threads = 0);

}  // namespace ppk
