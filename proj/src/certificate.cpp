#include "ppk/certificate.hpp"

namespace ppk {

namespace {

bool plain_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '"' || c == '=' || c == '\n' || c == '\t') return false;
  return true;
}

}  // namespace

CertLine& CertLine::add(std::string key, std::string value) {
  if (!plain_token(key)) throw Error(Errc::InvalidArgument, "bad certificate key '" + key + "'");
  if (value.find('"') != std::string::npos || value.find('\n') != std::string::npos)
    throw Error(Errc::InvalidArgument, "certificate values cannot contain quotes or newlines");
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

bool CertLine::has(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return true;
  return false;
}

const std::string& CertLine::get(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  throw Error(Errc::ParseError, "record '" + kind + "' has no field '" + std::string(key) + "'");
}

std::string CertLine::serialize() const {
  std::string out = kind;
  for (const auto& [k, v] : fields) {
    out += ' ';
    out += k;
    out += '=';
    if (plain_token(v))
      out += v;
    else
      out += '"' + v + '"';
  }
  return out;
}

CertLine CertLine::parse(std::string_view line) {
  CertLine out;
  std::size_t i = line.find(' ');
  out.kind = std::string(line.substr(0, i));
  if (!plain_token(out.kind)) throw Error(Errc::ParseError, "bad record kind in '" + std::string(line) + "'");
  while (i != std::string_view::npos && i < line.size()) {
    if (line[i] != ' ') throw Error(Errc::ParseError, "expected a space in '" + std::string(line) + "'");
    ++i;
    std::size_t eq = line.find('=', i);
    if (eq == std::string_view::npos) throw Error(Errc::ParseError, "field without '=' in '" + std::string(line) + "'");
    std::string key(line.substr(i, eq - i));
    if (!plain_token(key)) throw Error(Errc::ParseError, "bad key in '" + std::string(line) + "'");
    std::string value;
    if (eq + 1 < line.size() && line[eq + 1] == '"') {
      std::size_t close = line.find('"', eq + 2);
      if (close == std::string_view::npos) throw Error(Errc::ParseError, "unterminated quote in '" + std::string(line) + "'");
      value = std::string(line.substr(eq + 2, close - eq - 2));
      i = close + 1;
    } else {
      std::size_t end = line.find(' ', eq + 1);
      value = std::string(line.substr(eq + 1, end == std::string_view::npos ? std::string_view::npos : end - eq - 1));
      i = end;
    }
    out.fields.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

CertLine& Certificate::add(std::string kind) {
  lines.emplace_back(std::move(kind));
  return lines.back();
}

std::vector<const CertLine*> Certificate::find(std::string_view kind) const {
  std::vector<const CertLine*> out;
  for (const auto& l : lines)
    if (l.kind == kind) out.push_back(&l);
  return out;
}

const CertLine& Certificate::first(std::string_view kind) const {
  for (const auto& l : lines)
    if (l.kind == kind) return l;
  throw Error(Errc::ParseError, "certificate has no '" + std::string(kind) + "' record");
}

std::string Certificate::serialize() const {
  std::string out;
  for (const auto& l : lines) out += l.serialize() + "\n";
  return out;
}

Certificate Certificate::parse(std::string_view text) {
  Certificate cert;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) throw Error(Errc::ParseError, "certificate must end with a newline");
    std::string_view line = text.substr(start, end - start);
    if (line.empty()) throw Error(Errc::ParseError, "empty line in certificate");
    cert.lines.push_back(CertLine::parse(line));
    start = end + 1;
  }
  if (cert.lines.empty() || cert.lines.front().kind != kCertificateSchema)
    throw Error(Errc::ParseError, std::string("missing '") + kCertificateSchema + "' header");
  if (cert.lines.front().get("version") != std::to_string(kCertificateVersion))
    throw Error(Errc::ParseError, "unsupported certificate version " + cert.lines.front().get("version"));
  return cert;
}

}  // namespace ppk
