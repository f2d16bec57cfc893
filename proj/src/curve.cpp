#include "ssmod/curve.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <numeric>
#include <regex>

#include "ssmod/errors.hpp"
#include "ssmod/ff.hpp"

namespace ssmod::curve {

namespace {

using ff::u64;

unsigned valuation(BigInt v, u64 q) {
  if (v == 0) return 1000;
  unsigned k = 0;
  if (v < 0) v = -v;
  while (v % q == 0) {
    v /= q;
    ++k;
  }
  return k;
}

BigInt mod_floor(const BigInt& v, const BigInt& m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

// Kraus: (c4, c6) are the invariants of some integral model iff
// v3(c6) != 2 and (c6 = -1 mod 4, or v2(c4) >= 4 and c6 = 0, 8 mod 32).
bool kraus_integral(const BigInt& c4, const BigInt& c6) {
  if (valuation(c6, 3) == 2) return false;
  if (mod_floor(c6, 4) == 3) return true;
  if (valuation(c4, 2) >= 4) {
    const BigInt r = mod_floor(c6, 32);
    return r == 0 || r == 8;
  }
  return false;
}

bool non_minimal_at(const WeierstrassCurve& e, u64 q) {
  BigInt q4 = boost::multiprecision::pow(BigInt(q), 4);
  BigInt q6 = q4 * q * q;
  BigInt q12 = q6 * q6;
  if (e.c4 % q4 != 0 || e.c6 % q6 != 0 || e.discriminant % q12 != 0) return false;
  return kraus_integral(e.c4 / q4, e.c6 / q6);
}

BigInt iroot(const BigInt& n, unsigned k) {
  // Largest r with r^k <= n, by bisection on [0, 2^(bits/k + 1)].
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, k) <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<u64>::max()) return ff::is_prime(n.convert_to<u64>());
  return boost::multiprecision::miller_rabin_test(n, 32);
}

u64 reduce(const BigInt& v, u64 m) { return mod_floor(v, BigInt(m)).convert_to<u64>(); }

std::vector<signed char> chi_table(u64 ell) {
  std::vector<signed char> chi(ell, -1);
  chi[0] = 0;
  for (u64 x = 1; x < ell; ++x) chi[x * x % ell] = 1;
  return chi;
}

std::vector<u64> smallest_prime_factors(std::size_t bound) {
  std::vector<u64> spf(bound + 1, 0);
  for (std::size_t i = 2; i <= bound; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= bound; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  return spf;
}

// Fills a_n from a_l at primes; `bad(l)` selects a_{l^k} = a_l^k.
LSeriesCoefficients build_coefficients(std::size_t bound, const std::function<std::int64_t(u64)>& at_prime,
                                       const std::function<bool(u64)>& bad) {
  LSeriesCoefficients c;
  c.bound = bound;
  c.a.assign(bound + 1, 0);
  if (bound >= 1) c.a[1] = 1;
  const auto spf = smallest_prime_factors(bound);
  for (std::size_t n = 2; n <= bound; ++n) {
    const u64 ell = spf[n];
    std::size_t power = 1;
    std::size_t rest = n;
    while (rest % ell == 0) {
      rest /= ell;
      power *= ell;
    }
    if (rest != 1) {
      c.a[n] = c.a[power] * c.a[rest];
    } else if (power == ell) {
      c.a[n] = at_prime(ell);
    } else if (bad(ell)) {
      c.a[n] = c.a[ell] * c.a[power / ell];
    } else {
      c.a[n] = c.a[ell] * c.a[power / ell] - static_cast<std::int64_t>(ell) * c.a[power / ell / ell];
    }
  }
  return c;
}

}  // namespace

std::string to_string(const BigInt& v) { return v.str(); }

std::array<BigInt, 5> parse_coefficients(std::string_view literal) {
  static const std::regex re(R"(\s*\[?\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*\]?\s*)");
  std::match_results<std::string_view::const_iterator> m;
  const auto open = literal.find('[') != std::string_view::npos;
  const auto close = literal.find(']') != std::string_view::npos;
  if (open != close || !std::regex_match(literal.begin(), literal.end(), m, re))
    throw Error(ErrorCode::ParseError, "expected \"a1,a2,a3,a4,a6\", got \"" + std::string(literal) + "\"");
  std::array<BigInt, 5> out;
  for (int i = 0; i < 5; ++i) {
    std::string s = m[i + 1].str();
    if (s[0] == '+') s.erase(0, 1);
    out[i] = BigInt(s);
  }
  return out;
}

WeierstrassCurve parse_curve_literal(std::string_view literal) { return parse_curve(parse_coefficients(literal)); }

WeierstrassCurve parse_curve(const std::array<BigInt, 5>& coefficients) {
  WeierstrassCurve e;
  e.a = coefficients;
  const auto& [a1, a2, a3, a4, a6] = e.a;
  e.b2 = a1 * a1 + 4 * a2;
  e.b4 = 2 * a4 + a1 * a3;
  e.b6 = a3 * a3 + 4 * a6;
  e.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  e.c4 = e.b2 * e.b2 - 24 * e.b4;
  e.c6 = -e.b2 * e.b2 * e.b2 + 36 * e.b2 * e.b4 - 216 * e.b6;
  e.discriminant = -e.b2 * e.b2 * e.b8 - 8 * e.b4 * e.b4 * e.b4 - 27 * e.b6 * e.b6 + 9 * e.b2 * e.b4 * e.b6;
  if (e.discriminant == 0) throw Error(ErrorCode::SingularCurve, "discriminant is zero");

  // Any prime where the model fails to be minimal divides gcd(c4, c6).
  {
    BigInt g = boost::multiprecision::gcd(e.c4, e.c6);
    if (g < 0) g = -g;
    for (u64 q = 2; q < 100000 && g > 1; ++q) {
      if (g % q != 0) continue;
      if (non_minimal_at(e, q))
        throw Error(ErrorCode::NonMinimalModel, "model is not minimal at " + std::to_string(q));
      while (g % q == 0) g /= q;
    }
  }

  const BigInt abs_disc = e.discriminant < 0 ? BigInt(-e.discriminant) : e.discriminant;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(abs_disc)) + 1;
  BigInt prime = 0;
  for (unsigned k = bits; k >= 1; --k) {
    const BigInt r = iroot(abs_disc, k);
    if (r >= 2 && boost::multiprecision::pow(r, k) == abs_disc && is_probable_prime(r)) {
      prime = r;
      e.disc_exponent = k;
      break;
    }
  }
  if (prime == 0)
    throw Error(ErrorCode::NonPrimeConductor, "|discriminant| = " + abs_disc.str() + " is not a prime power");
  if (non_minimal_at(e, prime.convert_to<u64>()))
    throw Error(ErrorCode::NonMinimalModel, "model is not minimal at " + prime.str());
  if (e.c4 % prime == 0)
    throw Error(ErrorCode::AdditiveReduction, "additive reduction at " + prime.str());
  if (prime > ff::kMaxCharacteristic)
    throw Error(ErrorCode::UnsupportedPrime, "conductor " + prime.str() + " is out of range");
  e.conductor = prime.convert_to<u64>();
  return e;
}

std::int64_t count_points(const WeierstrassCurve& e, u64 ell) {
  const u64 a1 = reduce(e.a1(), ell), a2 = reduce(e.a2(), ell), a3 = reduce(e.a3(), ell);
  const u64 a4 = reduce(e.a4(), ell), a6 = reduce(e.a6(), ell);
  std::int64_t count = 1;  // point at infinity
  if (ell == 2) {
    for (u64 x = 0; x < 2; ++x)
      for (u64 y = 0; y < 2; ++y)
        if ((y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2 == 0) ++count;
    return count;
  }
  // y^2 + (a1 x + a3) y = f(x)  <=>  (2y + a1 x + a3)^2 = (a1 x + a3)^2 + 4 f(x)
  const auto chi = chi_table(ell);
  for (u64 x = 0; x < ell; ++x) {
    const u64 lin = (a1 * x + a3) % ell;
    const u64 f = ((x * x % ell * x) + a2 * (x * x % ell) + a4 * x + a6) % ell;
    count += 1 + chi[(lin * lin + 4 * f) % ell];
  }
  return count;
}

std::int64_t a_ell(const WeierstrassCurve& e, u64 ell) {
  if (ell == e.conductor) throw Error(ErrorCode::BadReductionPrime, "l equals the conductor");
  return static_cast<std::int64_t>(ell) + 1 - count_points(e, ell);
}

int a_p_at_conductor(const WeierstrassCurve& e) {
  // Split iff the tangent slopes at the node are rational iff -c6 is a square mod p.
  const u64 p = e.conductor;
  return ff::legendre(reduce(-e.c6, p), p) == 1 ? 1 : -1;
}

LSeriesCoefficients an_coefficients(const WeierstrassCurve& e, std::size_t bound) {
  const int ap = a_p_at_conductor(e);
  return build_coefficients(
      bound, [&](u64 ell) { return ell == e.conductor ? std::int64_t{ap} : a_ell(e, ell); },
      [&](u64 ell) { return ell == e.conductor; });
}

std::uint64_t twist_neg4_conductor(const WeierstrassCurve& e) { return 16 * e.conductor; }

LSeriesCoefficients twist_neg4_coefficients(const WeierstrassCurve& e, std::size_t bound) {
  auto at_prime = [&](u64 ell) -> std::int64_t {
    if (ell == 2) return 0;
    // y^2 = 4x^3 - b2 x^2 + 2 b4 x - b6, the -1 twist of (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
    const u64 b2 = reduce(-e.b2, ell), b4 = reduce(2 * e.b4, ell), b6 = reduce(-e.b6, ell);
    const auto chi = chi_table(ell);
    std::int64_t sum = 0;
    for (u64 x = 0; x < ell; ++x) {
      const u64 g = (4 * (x * x % ell * x % ell) + b2 * (x * x % ell) + b4 * x + b6) % ell;
      sum += chi[g];
    }
    return -sum;
  };
  return build_coefficients(bound, at_prime, [&](u64 ell) { return ell == 2 || ell == e.conductor; });
}

std::uint64_t torsion_bound(const WeierstrassCurve& e) {
  std::uint64_t g = 0;
  for (u64 ell : {3, 5, 7, 11, 13, 17, 19, 23}) {
    if (ell == e.conductor) continue;
    g = std::gcd(g, static_cast<std::uint64_t>(count_points(e, ell)));
  }
  return g;
}

}  // namespace ssmod::curve
