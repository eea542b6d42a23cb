#pragma once

// Line-oriented proof certificates: one record per line,
//   kind key=value key="value with spaces" ...
// Keys keep their insertion order, so serialization is byte-stable.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppk/algebra.hpp"

namespace ppk {

constexpr const char* kCertificateSchema = "ppk-certificate";
constexpr int kCertificateVersion = 1;
constexpr const char* kToolVersion = "1.0.0";

struct CertLine {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  CertLine() = default;
  explicit CertLine(std::string k) : kind(std::move(k)) {}

  CertLine& add(std::string key, std::string value);
  CertLine& add(std::string key, const Integer& value) { return add(std::move(key), to_string(value)); }
  CertLine& add(std::string key, long value) { return add(std::move(key), std::to_string(value)); }
  CertLine& add(std::string key, int value) { return add(std::move(key), std::to_string(value)); }
  CertLine& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
  CertLine& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "1" : "0")); }

  bool has(std::string_view key) const;
  /// Throws ParseError when the key is missing.
  const std::string& get(std::string_view key) const;

  std::string serialize() const;
  /// Throws ParseError.
  static CertLine parse(std::string_view line);
};

struct Certificate {
  std::vector<CertLine> lines;

  CertLine& add(std::string kind);
  std::vector<const CertLine*> find(std::string_view kind) const;
  const CertLine& first(std::string_view kind) const;  // throws ParseError

  std::string serialize() const;
  /// Checks the schema header. Throws ParseError.
  static Certificate parse(std::string_view text);
};

}  // namespace ppk
