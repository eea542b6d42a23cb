#include "ppk/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace ppk {

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(Errc::ParseError, "empty integer");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() ||
      !std::all_of(s.begin() + static_cast<long>(start), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(Errc::ParseError, "not an integer: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

std::string to_string(const Integer& value) { return value.get_str(10); }

Integer mod(const Integer& a, const Integer& m) {
  if (sgn(m) <= 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (long i = 2; i <= bound; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

long valuation(const Integer& value, const Integer& p) {
  if (value == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  if (p < 2) throw Error(Errc::InvalidArgument, "valuation base must be prime");
  Integer v = abs(value);
  long e = 0;
  while (mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    ++e;
  }
  return e;
}

namespace {

Integer pollard_brent(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](const Integer& v) { return mod(v * v + c, n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mod(q * abs(x - y), n);
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Integer d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Integer& n, std::map<Integer, long>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::map<Integer, long> factorize(const Integer& value) {
  if (value == 0) throw Error(Errc::InvalidArgument, "cannot factor zero");
  std::map<Integer, long> out;
  Integer v = abs(value);
  for (unsigned long p = 2; p < 10000 && v > 1; ++p) {
    if (p * p > v) break;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
      ++out[Integer(p)];
    }
  }
  factor_into(v, out);
  return out;
}

std::vector<Integer> prime_divisors(const Integer& value) {
  std::vector<Integer> out;
  for (const auto& [p, e] : factorize(value)) out.push_back(p);
  return out;
}

bool is_power_free(const Integer& value, long k) {
  for (const auto& [p, e] : factorize(value))
    if (e >= k) return false;
  return true;
}

std::optional<Integer> exact_sqrt(const Integer& value) {
  if (value < 0) return std::nullopt;
  if (!mpz_perfect_square_p(value.get_mpz_t())) return std::nullopt;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), value.get_mpz_t());
  return r;
}

Integer ipow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

std::string join(const std::vector<Integer>& values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += to_string(values[i]);
  }
  return out;
}

std::vector<Integer> parse_integer_list(std::string_view text) {
  std::vector<Integer> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    out.push_back(parse_integer(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

IntPoly parse_poly(std::string_view text) {
  auto coeffs = parse_integer_list(text);
  if (coeffs.empty()) throw Error(Errc::ParseError, "empty polynomial");
  return IntPoly(std::move(coeffs));
}

std::string format_poly(const IntPoly& p) {
  if (p.is_zero()) return "0";
  return join(p.coeffs());
}

std::string pretty_poly(const IntPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long i = p.degree(); i >= 0; --i) {
    Integer c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Integer a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || a != 1) {
      os << a.get_str();
      if (i > 0) os << "*";
    }
    if (i >= 1) os << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

IntPoly reduce_mod(const IntPoly& g, const IntPoly& f) {
  if (!f.is_monic()) throw Error(Errc::NonMonic, "reduction modulus must be monic");
  std::vector<Integer> r = g.coeffs();
  const long d = f.degree();
  for (long i = static_cast<long>(r.size()) - 1; i >= d; --i) {
    Integer c = r[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    for (long j = 0; j <= d; ++j) r[static_cast<std::size_t>(i - d + j)] -= c * f[static_cast<std::size_t>(j)];
  }
  if (static_cast<long>(r.size()) > d) r.resize(static_cast<std::size_t>(d));
  return IntPoly(std::move(r));
}

IntMatrix multiplication_matrix(const IntPoly& f, const IntPoly& g) {
  if (!f.is_monic() || f.degree() < 1) throw Error(Errc::NonMonic, "field polynomial must be monic of degree >= 1");
  const auto d = static_cast<std::size_t>(f.degree());
  IntMatrix m(d);
  IntPoly column = reduce_mod(g, f);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) m(i, j) = column[i];
    column = reduce_mod(column * IntPoly::x(), f);
  }
  return m;
}

Integer determinant(IntMatrix m) {
  const std::size_t n = m.n;
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntPoly characteristic_polynomial(const IntMatrix& a) {
  const std::size_t n = a.n;
  std::vector<Integer> c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    IntMatrix next(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a(i, l) * mk(l, j);
        next(i, j) = s;
      }
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    Integer trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += a(i, l) * mk(l, i);
    Integer q = -trace;
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), k);
    c[n - k] = q;
  }
  return IntPoly(std::move(c));
}

Integer resultant(const IntPoly& f, const IntPoly& g) {
  if (f.degree() < 1) throw Error(Errc::NonMonic, "resultant needs f of degree >= 1");
  if (!f.is_monic()) throw Error(Errc::NonMonic, "resultant needs monic f, got " + pretty_poly(f));
  return determinant(multiplication_matrix(f, g));
}

Integer poly_eval_mod(const IntPoly& f, const Integer& a, const Integer& modulus) {
  const Integer x = mod(a, modulus);
  Integer acc = 0;
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) acc = mod(acc * x + *it, modulus);
  return acc;
}

std::vector<Integer> roots_mod_prime(const IntPoly& f, const Integer& n) {
  if (!is_prime(n)) throw Error(Errc::InvalidArgument, to_string(n) + " is not prime");
  bool vanishes = true;
  for (const auto& c : f.coeffs())
    if (mod(c, n) != 0) vanishes = false;
  if (vanishes) throw Error(Errc::InvalidArgument, "polynomial vanishes identically mod " + to_string(n));
  std::vector<Integer> roots;
  for (Integer r = 0; r < n; ++r)
    if (poly_eval_mod(f, r, n) == 0) roots.push_back(r);
  return roots;
}

FactoredLevel FactoredLevel::prime_power(const Integer& p, long exponent) {
  FactoredLevel level;
  if (exponent != 0) level.factors_[p] = exponent;
  return level;
}

long FactoredLevel::exponent(const Integer& p) const {
  auto it = factors_.find(p);
  return it == factors_.end() ? 0 : it->second;
}

FactoredLevel& FactoredLevel::operator*=(const FactoredLevel& rhs) {
  for (const auto& [p, e] : rhs.factors_) {
    long& slot = factors_[p];
    slot += e;
    if (slot == 0) factors_.erase(p);
  }
  excludes_n_ = excludes_n_ || rhs.excludes_n_;
  return *this;
}

std::string FactoredLevel::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += "*";
    out += ppk::to_string(p);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

FactoredLevel FactoredLevel::parse(std::string_view text) {
  FactoredLevel level;
  if (text == "1") return level;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto star = text.find('*', pos);
    std::string_view term = text.substr(pos, star == std::string_view::npos ? star : star - pos);
    auto caret = term.find('^');
    Integer p = parse_integer(term.substr(0, caret));
    long e = 1;
    if (caret != std::string_view::npos) {
      auto sv = term.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), e);
      if (ec != std::errc() || ptr != sv.data() + sv.size()) throw Error(Errc::ParseError, "bad exponent in level");
    }
    level *= prime_power(p, e);
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return level;
}

Integer realize_level(const FactoredLevel& level) {
  Integer out = 1;
  for (const auto& [p, e] : level.factors()) {
    if (e < 0)
      throw Error(Errc::NonIntegralLevel, "exponent of " + to_string(p) + " is " + std::to_string(e) + " in " +
                                              level.to_string());
    out *= ipow(p, static_cast<unsigned long>(e));
  }
  return out;
}

Integer realize_level(const FactoredLevel& level, const Integer& n) {
  if (!level.excludes_n() || level.exponent(n) == 0) return realize_level(level);
  FactoredLevel reduced = level;
  reduced *= FactoredLevel::prime_power(n, -level.exponent(n));
  return realize_level(reduced);
}

ResidueSet::ResidueSet(Integer modulus, const std::vector<Integer>& values) : modulus_(std::move(modulus)) {
  if (modulus_ < 1) throw Error(Errc::InvalidArgument, "residue modulus must be positive");
  for (const auto& v : values) residues_.insert(mod(v, modulus_));
}

ResidueSet ResidueSet::scaled_squares(const Integer& modulus, const std::vector<Integer>& coeffs) {
  std::vector<Integer> values;
  for (Integer z = 0; z < modulus; ++z)
    for (const auto& c : coeffs) values.push_back(c * z * z);
  return ResidueSet(modulus, values);
}

bool ResidueSet::contains(const Integer& value) const { return residues_.count(mod(value, modulus_)) > 0; }

std::string ResidueSet::to_string() const {
  return join(std::vector<Integer>(residues_.begin(), residues_.end()));
}

}  // namespace ppk
