// Exact torsion order. The gcd of #E(F_l) bounds it; each q-primary part is
// then counted on the short model y^2 = x^3 - 27 c4 x - 54 c6, whose torsion
// points have integer coordinates (Nagell-Lutz), via integer roots of
// division polynomials.

#include <map>

#include "ssmod/curve.hpp"
#include "ssmod/ff.hpp"
#include "ssmod/poly.hpp"

namespace ssmod::curve {

namespace {

using ZPoly = std::vector<BigInt>;

void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly zadd(const ZPoly& f, const ZPoly& g) {
  ZPoly r(std::max(f.size(), g.size()));
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  ztrim(r);
  return r;
}

ZPoly zneg(ZPoly f) {
  for (auto& c : f) c = -c;
  return f;
}

ZPoly zsub(const ZPoly& f, const ZPoly& g) { return zadd(f, zneg(g)); }

ZPoly zmul(const ZPoly& f, const ZPoly& g) {
  if (f.empty() || g.empty()) return {};
  ZPoly r(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  ztrim(r);
  return r;
}

ZPoly zexact_div(ZPoly f, const BigInt& d) {
  for (auto& c : f) c /= d;
  return f;
}

BigInt zeval(const ZPoly& f, const BigInt& x) {
  BigInt acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BigInt mod_pos(const BigInt& v, const BigInt& m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

// f_m with psi_m = f_m (m odd), psi_m = y f_m (m even); y^2 = R(x).
class DivisionPolynomials {
 public:
  DivisionPolynomials(BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)) {
    r_ = {b_, a_, 0, 1};
    r2_ = zmul(r_, r_);
    cache_[0] = {};
    cache_[1] = {1};
    cache_[2] = {2};
    cache_[3] = {-a_ * a_, 12 * b_, 6 * a_, 0, 3};
    cache_[4] = {-32 * b_ * b_ - 4 * a_ * a_ * a_, -16 * a_ * b_, -20 * a_ * a_, 80 * b_, 20 * a_, 0, 4};
  }

  const ZPoly& R() const { return r_; }

  const ZPoly& f(unsigned m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    ZPoly out;
    const unsigned k = m / 2;
    if (m % 2 == 1) {
      ZPoly fk3 = zmul(f(k), zmul(f(k), f(k)));
      ZPoly fk13 = zmul(f(k + 1), zmul(f(k + 1), f(k + 1)));
      ZPoly left = zmul(f(k + 2), fk3);
      ZPoly right = zmul(f(k - 1), fk13);
      if (k % 2 == 0)
        left = zmul(r2_, left);
      else
        right = zmul(r2_, right);
      out = zsub(left, right);
    } else {
      ZPoly inner = zsub(zmul(f(k + 2), zmul(f(k - 1), f(k - 1))), zmul(f(k - 2), zmul(f(k + 1), f(k + 1))));
      out = zexact_div(zmul(f(k), inner), 2);
    }
    return cache_[m] = std::move(out);
  }

 private:
  BigInt a_, b_;
  ZPoly r_, r2_;
  std::map<unsigned, ZPoly> cache_;
};

using SmallField = ff::PrimeField;

poly::Poly<SmallField> reduce_poly(const ZPoly& f, std::uint64_t ell) {
  const SmallField fld(ell);
  poly::Poly<SmallField> out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(mod_pos(c, BigInt(ell)).convert_to<std::uint64_t>());
  poly::trim(fld, out);
  return out;
}

}  // namespace

// Distinct integer roots of a nonzero squarefree integer polynomial, by
// Hensel lifting simple roots modulo a good prime.
std::vector<BigInt> integer_roots(ZPoly f) {
  ztrim(f);
  std::vector<BigInt> roots;
  if (f.size() <= 1) return roots;
  if (f[0] == 0) {
    roots.push_back(0);
    std::size_t shift = 0;
    while (f[shift] == 0) ++shift;
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(shift));
    if (f.size() <= 1) return roots;
  }
  BigInt cauchy = 0;
  for (const auto& c : f) cauchy = std::max(cauchy, BigInt(abs(c)));
  cauchy = cauchy / abs(f.back()) + 2;

  ZPoly df;
  for (std::size_t i = 1; i < f.size(); ++i) df.push_back(f[i] * i);

  for (std::uint64_t ell = 101;; ell += 2) {
    if (!ff::is_prime(ell) || f.back() % ell == 0) continue;
    const SmallField fld(ell);
    const auto fr = reduce_poly(f, ell);
    const auto g = poly::gcd(fld, fr, poly::derivative(fld, fr));
    if (poly::degree<SmallField>(g) != 0) continue;

    BigInt modulus = ell;
    std::vector<BigInt> lifted;
    for (const auto& rm : poly::roots_with_multiplicity(fld, fr)) lifted.push_back(BigInt(rm.root));
    while (modulus <= 2 * cauchy) {
      modulus *= modulus;
      for (auto& r : lifted) {
        // Newton step modulo the squared modulus; f'(r) is a unit.
        const BigInt fv = mod_pos(zeval(f, r), modulus);
        BigInt dv = mod_pos(zeval(df, r), modulus);
        BigInt inv;
        {
          // Extended Euclid on BigInt.
          BigInt old_r = dv, rr = modulus, old_s = 1, s = 0;
          while (rr != 0) {
            const BigInt q = old_r / rr;
            std::tie(old_r, rr) = std::pair<BigInt, BigInt>(rr, old_r - q * rr);
            std::tie(old_s, s) = std::pair<BigInt, BigInt>(s, old_s - q * s);
          }
          inv = mod_pos(old_s, modulus);
        }
        r = mod_pos(r - fv * inv, modulus);
      }
    }
    for (auto r : lifted) {
      if (r > modulus / 2) r -= modulus;
      if (zeval(f, r) == 0) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
}

namespace {

bool is_positive_square(const BigInt& v) {
  if (v <= 0) return false;
  const BigInt r = boost::multiprecision::sqrt(v);
  return r * r == v;
}

std::uint64_t primary_count(DivisionPolynomials& dp, std::uint64_t q, unsigned e) {
  unsigned m = 1;
  for (unsigned i = 0; i < e; ++i) m *= static_cast<unsigned>(q);
  const ZPoly& R = dp.R();
  if (q != 2) {
    std::uint64_t count = 1;
    for (const auto& x : integer_roots(dp.f(m)))
      if (is_positive_square(zeval(R, x))) count += 2;
    return count;
  }
  std::uint64_t count = 1 + integer_roots(R).size();
  if (e >= 2)
    for (const auto& x : integer_roots(dp.f(m)))
      if (is_positive_square(zeval(R, x))) count += 2;
  return count;
}

}  // namespace

unsigned torsion_order(const WeierstrassCurve& e) {
  std::uint64_t bound = torsion_bound(e);
  if (bound == 1) return 1;
  DivisionPolynomials dp(-27 * e.c4, -54 * e.c6);
  std::uint64_t order = 1;
  for (std::uint64_t q = 2; bound > 1; ++q) {
    unsigned k = 0;
    while (bound % q == 0) {
      bound /= q;
      ++k;
    }
    if (k > 0) order *= primary_count(dp, q, k);
  }
  return static_cast<unsigned>(order);
}

}  // namespace ssmod::curve
