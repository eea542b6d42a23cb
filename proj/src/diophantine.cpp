#include "ppk/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace ppk {

namespace {

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

bool opposite_parity_coprime(const Integer& s, const Integer& t) {
  return gcd(s, t) == 1 && mpz_odd_p(Integer(s + t).get_mpz_t());
}

}  // namespace

ConicPoint conic_point(const ConicParams& c) {
  if (c.p == 2 || c.p == -2 || !is_prime(abs(c.p)))
    throw Error(Errc::InvalidParams, "p must be an odd prime up to sign, got " + to_string(c.p));
  if (c.family != 1 && c.family != 2) throw Error(Errc::InvalidParams, "family must be 1 or 2");
  if (std::abs(c.sign_x) != 1 || std::abs(c.sign_z) != 1) throw Error(Errc::InvalidParams, "signs must be +-1");
  if (!opposite_parity_coprime(c.s, c.t))
    throw Error(Errc::InvalidParams, "s, t must be coprime of opposite parity");
  const Integer ap = abs(c.p);
  const Integer s2t2 = c.s * c.s + c.t * c.t;
  ConicPoint out;
  if (c.family == 1) {
    if (mpz_divisible_p(c.s.get_mpz_t(), ap.get_mpz_t())) throw Error(Errc::InvalidParams, "family 1 needs p not dividing s");
    out = {c.s * c.s - c.p * c.t * c.t, 2 * c.s * c.t, c.s * c.s + c.p * c.t * c.t};
  } else {
    if (mod(c.s - c.t, ap) == 0) throw Error(Errc::InvalidParams, "family 2 needs s != t mod p");
    // p odd, so (p -+ 1)/2 are exact
    const Integer lo = (c.p - 1) / 2, hi = (c.p + 1) / 2;
    out = {lo * s2t2 + (c.p + 1) * c.s * c.t, c.s * c.s - c.t * c.t, hi * s2t2 + (c.p - 1) * c.s * c.t};
  }
  out.x *= c.sign_x;
  out.z *= c.sign_z;
  return out;
}

ConicCoverReport conic_cover_check(const Integer& p, long bound) {
  ConicCoverReport report;
  report.p = p;
  report.bound = bound;
  if (bound < 1 || bound > 10000) throw Error(Errc::InvalidParams, "bound must lie in [1, 10000]");
  if (abs(p) > 50) throw Error(Errc::InvalidParams, "|p| must be at most 50");

  std::set<ConicPoint> oracle;
  for (long x = -bound; x <= bound; ++x)
    for (long y = -bound; y <= bound; ++y) {
      if (gcd(Integer(x), Integer(y)) != 1) continue;
      Integer v = Integer(x) * x + p * y * y;
      if (v < 0) continue;
      auto z = exact_sqrt(v);
      if (!z || *z > bound) continue;
      oracle.insert({Integer(x), Integer(y), *z});
      oracle.insert({Integer(x), Integer(y), -*z});
    }
  report.solutions = static_cast<long>(oracle.size());

  std::map<ConicPoint, std::set<int>> hits;
  const long r = static_cast<long>(std::sqrt(static_cast<double>(bound))) + 1;
  for (long s = -r; s <= r; ++s)
    for (long t = -r; t <= r; ++t) {
      if (s * s + t * t > bound || !opposite_parity_coprime(s, t)) continue;
      for (int family : {1, 2})
        for (int sx : {1, -1})
          for (int sz : {1, -1}) {
            ConicPoint pt;
            try {
              pt = conic_point({p, family, s, t, sx, sz});
            } catch (const Error&) {
              continue;  // parameter excluded by the family's side condition
            }
            if (pt.x * pt.x + p * pt.y * pt.y != pt.z * pt.z || gcd(pt.x, pt.y) != 1) {
              report.invalid.push_back(pt);
              continue;
            }
            if (abs(pt.x) <= bound && abs(pt.y) <= bound && abs(pt.z) <= bound) hits[pt].insert(family);
          }
    }
  for (const auto& pt : oracle) {
    auto it = hits.find(pt);
    if (it == hits.end()) {
      report.uncovered.push_back(pt);
    } else if (it->second.size() > 1) {
      report.overlapping.push_back(pt);
    } else if (*it->second.begin() == 1) {
      ++report.family1;
    } else {
      ++report.family2;
    }
  }
  // a hit outside the oracle would mean the oracle missed it
  for (const auto& [pt, fams] : hits)
    if (!oracle.count(pt)) report.invalid.push_back(pt);
  return report;
}

long prop3_obstruction(int sign, const Integer& s, const Integer& t) {
  if (sign != 3 && sign != -3) throw Error(Errc::InvalidParams, "sign must be 3 or -3");
  if (!opposite_parity_coprime(s, t)) throw Error(Errc::InvalidParams, "s, t must be coprime of opposite parity");
  Integer v = ((sign - 1) / 2) * (s * s + t * t) + (sign + 1) * s * t;
  return valuation(v, 2);
}

std::vector<Prop3Solution> prop3_search(const Integer& b, long x_max, long y_max, long x_min) {
  if (mpz_even_p(b.get_mpz_t()) || b < 1) throw Error(Errc::InvalidArgument, "b must be odd and positive");
  std::vector<Prop3Solution> out;
  for (long x = std::max(1L, x_min); x <= x_max; ++x)
    for (long y = 2; y <= y_max; y += 2) {
      Integer v = ipow(2, static_cast<unsigned long>(2 * x)) - ipow(b, static_cast<unsigned long>(y));
      if (v == 0 || !mpz_divisible_ui_p(v.get_mpz_t(), 3)) continue;
      auto z = exact_sqrt(abs(v) / 3);
      if (z && *z >= 1) out.push_back({x, y, *z, v > 0 ? 1 : -1});
    }
  return out;
}

Integer ExpTemplate::residue(long alpha, const Integer& modulus) const {
  Integer power;
  mpz_powm_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(alpha), modulus.get_mpz_t());
  return mod(constant + coefficient * power, modulus);
}

std::string ExpTemplate::to_string() const {
  std::string term = (coefficient == 1 ? "" : coefficient == -1 ? "-" : ppk::to_string(coefficient) + "*") +
                     ppk::to_string(base) + "^alpha";
  if (constant == 0) return term;
  return ppk::to_string(constant) + (term[0] == '-' ? term : "+" + term);
}

bool CongruenceReport::obstructed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.obstructed; });
}

CongruenceReport congruence_obstruction(const ExpTemplate& value, const Integer& modulus, const ResidueSet& allowed,
                                        long alpha_start, long alpha_step, long alpha_max) {
  if (modulus < 2) throw Error(Errc::InvalidArgument, "modulus must be at least 2");
  if (alpha_start < 0 || alpha_step < 1) throw Error(Errc::InvalidArgument, "bad alpha range");
  if (allowed.modulus() != modulus) throw Error(Errc::InvalidArgument, "allowed residues use a different modulus");
  CongruenceReport r{value, modulus, allowed, alpha_start, alpha_step, alpha_max, {}, {}, false};
  for (long a = alpha_start; a <= alpha_max; a += alpha_step) {
    Integer res = value.residue(a, modulus);
    r.verdicts.push_back({a, res, !allowed.contains(res)});
  }
  // state base^alpha mod M advances by base^step; it repeats within M steps
  Integer state, step;
  mpz_powm_ui(state.get_mpz_t(), value.base.get_mpz_t(), static_cast<unsigned long>(alpha_start), modulus.get_mpz_t());
  mpz_powm_ui(step.get_mpz_t(), value.base.get_mpz_t(), static_cast<unsigned long>(alpha_step), modulus.get_mpz_t());
  std::set<Integer> seen, residues;
  while (seen.insert(state).second) {
    residues.insert(mod(value.constant + value.coefficient * state, modulus));
    state = mod(state * step, modulus);
  }
  r.cycle_residues.assign(residues.begin(), residues.end());
  r.all_alpha = std::none_of(residues.begin(), residues.end(), [&](const Integer& v) { return allowed.contains(v); });
  return r;
}

std::string MordellInstance::y_form() const {
  return to_string(y_scale) + "*2^m, m>=" + std::to_string(min_m);
}

std::pair<MordellInstance, MordellInstance> reduce_unit_case(const TernaryEquation& eq, int xy_sign) {
  if (eq.m != 3) throw Error(Errc::UnsupportedShape, "unit-case reduction needs signature (n,n,3)");
  if (eq.A < 1 || mpz_popcount(eq.A.get_mpz_t()) != 1)
    throw Error(Errc::UnsupportedShape, "unit-case reduction needs A a power of 2, got " + to_string(eq.A));
  if (xy_sign != 1 && xy_sign != -1) throw Error(Errc::InvalidArgument, "xy_sign must be +-1");
  const Integer C2B = eq.C * eq.C * eq.B;
  MordellInstance even, odd;
  even.k = -xy_sign * C2B;
  even.x_scale = eq.C;
  even.y_scale = eq.C;
  even.min_m = 1;  // alpha = 2m >= 1
  even.alpha_parity = 0;
  even.xy_sign = xy_sign;
  even.origin = std::string("xy=") + (xy_sign > 0 ? "1" : "-1") + ", alpha even";
  odd.k = -8 * xy_sign * C2B;
  odd.x_scale = 2 * eq.C;
  odd.y_scale = 4 * eq.C;
  odd.min_m = 0;  // alpha = 2m + 1 >= 1
  odd.alpha_parity = 1;
  odd.xy_sign = xy_sign;
  odd.origin = std::string("xy=") + (xy_sign > 0 ? "1" : "-1") + ", alpha odd";
  return {even, odd};
}

namespace {

using i128 = __int128;

// floor(sqrt(v)) for 0 <= v < 2^126
i128 isqrt128(i128 v) {
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

Integer from128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  } while (u);
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return Integer(digits, 10);
}

}  // namespace

MordellSolutionSet mordell_search(const Integer& k, long bound, unsigned threads) {
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be nonzero");
  if (bound < 1 || bound > 1000000000L) throw Error(Errc::InvalidArgument, "bound must lie in [1, 1e9]");
  if (!k.fits_slong_p()) throw Error(Errc::InvalidArgument, "|k| too large for the fast search");
  const i128 kk = k.get_si();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const long span = 2 * bound + 1;
  threads = static_cast<unsigned>(std::min<long>(threads, span));

  std::vector<std::vector<std::pair<i128, i128>>> parts(threads);
  auto work = [&](unsigned w) {
    const long lo = -bound + span * static_cast<long>(w) / static_cast<long>(threads);
    const long hi = -bound + span * static_cast<long>(w + 1) / static_cast<long>(threads);
    for (long X = lo; X < hi; ++X) {
      i128 v = static_cast<i128>(X) * X * X + kk;
      if (v < 0) continue;
      i128 y = isqrt128(v);
      if (y * y == v) parts[w].emplace_back(X, y);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  MordellSolutionSet out;
  out.k = k;
  out.bound = bound;
  for (const auto& part : parts)  // chunks are in ascending X order
    for (const auto& [X, Y] : part) out.solutions.emplace_back(from128(X), from128(Y));
  return out;
}

std::vector<FilterOutcome> filter_mordell_solutions(const MordellSolutionSet& set, const MordellInstance& inst) {
  if (set.k != inst.k) throw Error(Errc::InvalidArgument, "solution set and instance use different k");
  std::vector<FilterOutcome> out;
  for (const auto& [X, Y] : set.solutions) {
    FilterOutcome f{X, Y, false, ""};
    if (!mpz_divisible_p(X.get_mpz_t(), inst.x_scale.get_mpz_t())) {
      f.reason = "X not divisible by " + to_string(inst.x_scale);
    } else if (Y == 0 || !mpz_divisible_p(Y.get_mpz_t(), inst.y_scale.get_mpz_t())) {
      f.reason = "Y not divisible by " + to_string(inst.y_scale);
    } else {
      Integer q = Y / inst.y_scale;
      if (mpz_popcount(q.get_mpz_t()) != 1) {
        f.reason = "Y/" + to_string(inst.y_scale) + " = " + to_string(q) + " is not a power of 2";
      } else if (static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 1 < inst.min_m) {
        f.reason = "Y/" + to_string(inst.y_scale) + " = " + to_string(q) + " has m below " + std::to_string(inst.min_m);
      } else {
        f.kept = true;
        f.reason = "Y = " + to_string(inst.y_scale) + "*2^" + std::to_string(mpz_sizeinbase(q.get_mpz_t(), 2) - 1);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace ppk
