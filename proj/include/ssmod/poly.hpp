#pragma once

// Dense univariate polynomials over any field context from ff.hpp.
// Coefficients are little-endian and always trimmed: the zero polynomial is
// the empty vector, so degree() of a nonzero polynomial is size() - 1.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ssmod/errors.hpp"
#include "ssmod/ff.hpp"

namespace ssmod::poly {

template <class Ctx>
using Poly = std::vector<typename Ctx::Elem>;

template <class Ctx>
void trim(const Ctx& ctx, Poly<Ctx>& f) {
  while (!f.empty() && ctx.is_zero(f.back())) f.pop_back();
}

template <class Ctx>
int degree(const Poly<Ctx>& f) {
  return static_cast<int>(f.size()) - 1;
}

template <class Ctx>
Poly<Ctx> add(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  Poly<Ctx> out(std::max(f.size(), g.size()), ctx.zero());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = ctx.add(out[i], g[i]);
  trim(ctx, out);
  return out;
}

template <class Ctx>
Poly<Ctx> sub(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  Poly<Ctx> out(std::max(f.size(), g.size()), ctx.zero());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = ctx.sub(out[i], g[i]);
  trim(ctx, out);
  return out;
}

template <class Ctx>
Poly<Ctx> mul(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  if (f.empty() || g.empty()) return {};
  Poly<Ctx> out(f.size() + g.size() - 1, ctx.zero());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (ctx.is_zero(f[i])) continue;
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] = ctx.add(out[i + j], ctx.mul(f[i], g[j]));
  }
  trim(ctx, out);
  return out;
}

template <class Ctx>
Poly<Ctx> scale(const Ctx& ctx, const Poly<Ctx>& f, const typename Ctx::Elem& c) {
  Poly<Ctx> out;
  out.reserve(f.size());
  for (const auto& x : f) out.push_back(ctx.mul(x, c));
  trim(ctx, out);
  return out;
}

// Quotient and remainder; g must be nonzero.
template <class Ctx>
std::pair<Poly<Ctx>, Poly<Ctx>> divmod(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  if (g.empty()) throw Error(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
  if (f.size() < g.size()) return {{}, f};
  Poly<Ctx> rem = f;
  Poly<Ctx> quo(f.size() - g.size() + 1, ctx.zero());
  const auto lead_inv = ctx.inv(g.back());
  for (std::size_t i = rem.size(); i-- >= g.size();) {
    if (ctx.is_zero(rem[i])) continue;
    const auto c = ctx.mul(rem[i], lead_inv);
    const std::size_t shift = i + 1 - g.size();
    quo[shift] = c;
    for (std::size_t j = 0; j < g.size(); ++j) rem[shift + j] = ctx.sub(rem[shift + j], ctx.mul(c, g[j]));
  }
  trim(ctx, rem);
  trim(ctx, quo);
  return {std::move(quo), std::move(rem)};
}

template <class Ctx>
Poly<Ctx> mod(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  return divmod(ctx, f, g).second;
}

template <class Ctx>
Poly<Ctx> make_monic(const Ctx& ctx, const Poly<Ctx>& f) {
  if (f.empty()) return f;
  return scale(ctx, f, ctx.inv(f.back()));
}

// Monic gcd (zero if both inputs are zero).
template <class Ctx>
Poly<Ctx> gcd(const Ctx& ctx, Poly<Ctx> f, Poly<Ctx> g) {
  while (!g.empty()) {
    auto r = mod(ctx, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  return make_monic(ctx, f);
}

template <class Ctx>
Poly<Ctx> mulmod(const Ctx& ctx, const Poly<Ctx>& f, const Poly<Ctx>& g, const Poly<Ctx>& m) {
  return mod(ctx, mul(ctx, f, g), m);
}

template <class Ctx>
Poly<Ctx> powmod(const Ctx& ctx, Poly<Ctx> base, ff::u128 e, const Poly<Ctx>& m) {
  Poly<Ctx> result = mod(ctx, Poly<Ctx>{ctx.one()}, m);
  base = mod(ctx, base, m);
  while (e > 0) {
    if (e & 1) result = mulmod(ctx, result, base, m);
    e >>= 1;
    if (e > 0) base = mulmod(ctx, base, base, m);
  }
  return result;
}

template <class Ctx>
typename Ctx::Elem eval(const Ctx& ctx, const Poly<Ctx>& f, const typename Ctx::Elem& x) {
  auto acc = ctx.zero();
  for (std::size_t i = f.size(); i-- > 0;) acc = ctx.add(ctx.mul(acc, x), f[i]);
  return acc;
}

template <class Ctx>
Poly<Ctx> derivative(const Ctx& ctx, const Poly<Ctx>& f) {
  Poly<Ctx> out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(ctx.mul(ctx.from_int(static_cast<ff::i64>(i)), f[i]));
  trim(ctx, out);
  return out;
}

template <class Ctx>
Poly<Ctx> from_roots(const Ctx& ctx, const std::vector<typename Ctx::Elem>& roots) {
  Poly<Ctx> out{ctx.one()};
  for (const auto& r : roots) out = mul(ctx, out, Poly<Ctx>{ctx.neg(r), ctx.one()});
  return out;
}

template <class Elem>
struct RootMultiplicity {
  Elem root;
  unsigned multiplicity;
  friend bool operator==(const RootMultiplicity&, const RootMultiplicity&) = default;
};

namespace detail {

// Splits a monic product of distinct linear factors (Cantor-Zassenhaus,
// odd characteristic).
template <class Ctx>
void split_linear(const Ctx& ctx, const Poly<Ctx>& g, std::mt19937_64& rng,
                  std::vector<typename Ctx::Elem>& roots) {
  const int d = degree<Ctx>(g);
  if (d <= 0) return;
  if (d == 1) {
    roots.push_back(ctx.neg(g[0]));
    return;
  }
  const ff::u128 half = (ctx.order() - 1) / 2;
  for (;;) {
    Poly<Ctx> probe{ctx.random(rng), ctx.one()};
    auto h = powmod(ctx, probe, half, g);
    h = sub(ctx, h, Poly<Ctx>{ctx.one()});
    auto factor = gcd(ctx, g, h);
    const int fd = degree<Ctx>(factor);
    if (fd > 0 && fd < d) {
      split_linear(ctx, factor, rng, roots);
      split_linear(ctx, divmod(ctx, g, factor).first, rng, roots);
      return;
    }
  }
}

}  // namespace detail

// Seed of the splitting generator; fixed so every run is bit-identical.
inline constexpr std::uint64_t kRootSplitSeed = 0x5eed5eedULL;

// Roots of f lying in the context's field, with multiplicities, sorted by
// the canonical element order.
template <class Ctx>
std::vector<RootMultiplicity<typename Ctx::Elem>> roots_with_multiplicity(const Ctx& ctx, const Poly<Ctx>& f_in) {
  Poly<Ctx> f = f_in;
  trim(ctx, f);
  if (f.empty()) throw Error(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  f = make_monic(ctx, f);
  std::vector<RootMultiplicity<typename Ctx::Elem>> out;
  if (degree<Ctx>(f) == 0) return out;

  // gcd(f, X^q - X) is the product of the distinct rational linear factors.
  auto xq = powmod(ctx, Poly<Ctx>{ctx.zero(), ctx.one()}, ctx.order(), f);
  auto split = gcd(ctx, f, sub(ctx, xq, Poly<Ctx>{ctx.zero(), ctx.one()}));

  std::vector<typename Ctx::Elem> roots;
  std::mt19937_64 rng(kRootSplitSeed);
  detail::split_linear(ctx, split, rng, roots);
  std::sort(roots.begin(), roots.end());

  for (const auto& r : roots) {
    const Poly<Ctx> linear{ctx.neg(r), ctx.one()};
    unsigned mult = 0;
    Poly<Ctx> rest = f;
    for (;;) {
      auto [q, rem] = divmod(ctx, rest, linear);
      if (!rem.empty()) break;
      ++mult;
      rest = std::move(q);
    }
    out.push_back({r, mult});
  }
  return out;
}

}  // namespace ssmod::poly
