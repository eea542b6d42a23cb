// Client for the public modular-forms database API. Only the collections and
// fields needed to rebuild NewformRecord values are read.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <numeric>

#include "ppk/newforms.hpp"

namespace ppk {

namespace {

using nlohmann::json;

json data_array(const std::string& body, const std::string& what) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(Errc::RemoteSchemaMismatch, what + ": not JSON (" + e.what() + ")");
  }
  if (doc.is_object() && doc.contains("data")) doc = doc["data"];
  if (!doc.is_array()) throw Error(Errc::RemoteSchemaMismatch, what + ": expected a data array");
  return doc;
}

Integer to_integer(const json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()), 10);
  if (v.is_string()) return parse_integer(v.get<std::string>());
  throw Error(Errc::RemoteSchemaMismatch, "expected an integer, got " + v.dump());
}

std::vector<Integer> to_integers(const json& v) {
  if (!v.is_array()) throw Error(Errc::RemoteSchemaMismatch, "expected an integer list, got " + v.dump());
  std::vector<Integer> out;
  for (const auto& e : v) out.push_back(to_integer(e));
  return out;
}

// LMFDB labels N.2.a.<letters>; letters count a, b, ..., z, ba, bb, ...
long orbit_index(const std::string& label) {
  auto pos = label.rfind('.');
  if (pos == std::string::npos || pos + 1 == label.size()) throw Error(Errc::RemoteSchemaMismatch, "bad label " + label);
  long index = 0;
  for (char ch : label.substr(pos + 1)) {
    if (ch < 'a' || ch > 'z') throw Error(Errc::RemoteSchemaMismatch, "bad label " + label);
    index = index * 26 + (ch - 'a');
  }
  return index + 1;
}

std::string iso_letters(const std::string& label) {
  auto pos = label.rfind('.');
  return pos == std::string::npos ? "" : label.substr(pos + 1);
}

void reduce(FieldElement& c) {
  Integer g = c.den;
  for (const auto& v : c.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1) {
    for (auto& v : c.coeffs) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c.den.get_mpz_t(), c.den.get_mpz_t(), g.get_mpz_t());
  }
}

// Hecke-ring basis: beta_i = sum_j numerators[i][j] x^j / denominators[i].
void fill_from_hecke(NewformRecord& r, const json& hecke) {
  const long d = r.degree();
  std::vector<std::vector<Integer>> num;
  std::vector<Integer> den;
  if (hecke.value("hecke_ring_power_basis", false) || !hecke.contains("hecke_ring_numerators")) {
    for (long i = 0; i < d; ++i) {
      std::vector<Integer> row(static_cast<std::size_t>(d), 0);
      row[static_cast<std::size_t>(i)] = 1;
      num.push_back(row);
      den.push_back(1);
    }
  } else {
    for (const auto& row : hecke.at("hecke_ring_numerators")) num.push_back(to_integers(row));
    den = to_integers(hecke.at("hecke_ring_denominators"));
  }
  if (static_cast<long>(num.size()) != d || static_cast<long>(den.size()) != d)
    throw Error(Errc::RemoteSchemaMismatch, r.label + ": Hecke ring basis has the wrong size");
  Integer common = 1;
  for (const auto& v : den) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_mpz_t());

  const auto& ap = hecke.at("ap");
  const auto primes = primes_up_to(1000);
  if (!ap.is_array() || ap.size() > primes.size()) throw Error(Errc::RemoteSchemaMismatch, r.label + ": bad ap list");
  for (std::size_t k = 0; k < ap.size(); ++k) {
    auto a = to_integers(ap[k]);
    if (static_cast<long>(a.size()) != d) throw Error(Errc::RemoteSchemaMismatch, r.label + ": ap entry of wrong length");
    FieldElement c;
    c.coeffs.assign(static_cast<std::size_t>(d), 0);
    c.den = common;
    for (long i = 0; i < d; ++i) {
      const auto& row = num[static_cast<std::size_t>(i)];
      if (static_cast<long>(row.size()) > d) throw Error(Errc::RemoteSchemaMismatch, r.label + ": basis row too long");
      Integer scale = a[static_cast<std::size_t>(i)] * (common / den[static_cast<std::size_t>(i)]);
      for (std::size_t j = 0; j < row.size(); ++j) c.coeffs[j] += scale * row[j];
    }
    reduce(c);
    r.eigenvalues.emplace(primes[k], std::move(c));
  }
}

std::string get(httplib::Client& client, const std::string& path) {
  auto res = client.Get(path);
  if (!res) throw Error(Errc::NetworkError, "GET " + path + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(Errc::NetworkError, "GET " + path + " returned HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace

RemoteLevel convert_remote_level(long level, const std::string& newforms_json, const std::vector<std::string>& hecke_json,
                                 const std::string& curves_json) {
  RemoteLevel out;
  try {
    json forms = data_array(newforms_json, "mf_newforms");
    std::map<std::string, json> hecke;
    for (const auto& body : hecke_json)
      for (const auto& h : data_array(body, "mf_hecke_nf")) hecke[h.at("label").get<std::string>()] = h;

    std::map<std::string, std::string> iso_to_label;
    for (const auto& f : forms) {
      if (f.at("weight").get<long>() != 2 || f.at("char_order").get<long>() != 1) continue;
      const std::string lmfdb_label = f.at("label").get<std::string>();
      NewformRecord r;
      r.level = to_integer(f.at("level"));
      if (r.level != level) throw Error(Errc::RemoteSchemaMismatch, lmfdb_label + " is not at level " + std::to_string(level));
      r.label = std::to_string(level) + "." + std::to_string(orbit_index(lmfdb_label));
      r.field_poly = IntPoly(to_integers(f.at("field_poly")));
      const long dim = f.at("dim").get<long>();
      if (r.degree() != dim) throw Error(Errc::RemoteSchemaMismatch, lmfdb_label + ": field degree differs from dim");
      if (dim == 1) {
        // traces[n-1] = a_n for a rational form
        auto traces = to_integers(f.at("traces"));
        for (long q : primes_up_to(static_cast<long>(traces.size())))
          r.eigenvalues.emplace(q, FieldElement{{traces[static_cast<std::size_t>(q - 1)]}, 1});
      } else {
        auto it = hecke.find(lmfdb_label);
        if (it == hecke.end()) throw Error(Errc::RemoteSchemaMismatch, lmfdb_label + ": missing mf_hecke_nf record");
        if (IntPoly(to_integers(it->second.at("field_poly"))) != r.field_poly)
          throw Error(Errc::RemoteSchemaMismatch, lmfdb_label + ": field polynomials of the two collections differ");
        fill_from_hecke(r, it->second);
      }
      iso_to_label[iso_letters(lmfdb_label)] = r.label;
      out.forms.push_back(std::move(r));
    }

    if (!curves_json.empty())
      for (const auto& c : data_array(curves_json, "ec_curvedata")) {
        if (c.value("lmfdb_number", 0L) != 1) continue;
        auto it = iso_to_label.find(iso_letters(c.at("lmfdb_iso").get<std::string>()));
        if (it == iso_to_label.end()) continue;
        auto a = to_integers(c.at("ainvs"));
        if (a.size() != 5) throw Error(Errc::RemoteSchemaMismatch, "ainvs must have five entries");
        RationalNewformCurve curve;
        curve.label = c.contains("Clabel") ? c.at("Clabel").get<std::string>() : c.at("lmfdb_label").get<std::string>();
        curve.form_label = it->second;
        curve.curve = WeierstrassCurve{a[0], a[1], a[2], a[3], a[4]};
        out.curves.push_back(std::move(curve));
      }
  } catch (const json::exception& e) {
    throw Error(Errc::RemoteSchemaMismatch, std::string("unexpected record layout: ") + e.what());
  }
  return out;
}

RemoteLevel fetch_remote_level(const std::string& endpoint, long level) {
  std::unique_ptr<httplib::Client> client;
  try {
    client = std::make_unique<httplib::Client>(endpoint);
  } catch (const std::exception& e) {
    throw Error(Errc::NetworkError, "bad endpoint '" + endpoint + "': " + e.what());
  }
  if (!client->is_valid()) throw Error(Errc::NetworkError, "bad endpoint '" + endpoint + "'");
  client->set_connection_timeout(10);
  client->set_read_timeout(60);
  client->set_follow_location(true);

  const std::string N = std::to_string(level);
  std::string forms = get(*client, "/api/mf_newforms/?level=i" + N + "&weight=i2&char_order=i1&_format=json");
  std::vector<std::string> hecke;
  for (const auto& f : data_array(forms, "mf_newforms"))
    if (f.value("dim", 1L) > 1) {
      std::string label = f.at("label").get<std::string>();
      hecke.push_back(get(*client, "/api/mf_hecke_nf/?label=" + label + "&_format=json"));
    }
  std::string curves = get(*client, "/api/ec_curvedata/?conductor=i" + N + "&_format=json");
  return convert_remote_level(level, forms, hecke, curves);
}

}  // namespace ppk
