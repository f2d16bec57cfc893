#pragma once

// Exact arithmetic over F_p, F_p^2 = F_p(sqrt s) and general F_p^k.
//
// Field contexts are immutable value types; every operation is a const member
// taking and returning plain elements, so a context can be shared freely
// between threads.

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ssmod::ff {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Largest characteristic accepted by the field contexts; keeps every product
// of two reduced residues inside 64 bits.
inline constexpr u64 kMaxCharacteristic = (u64{1} << 31) - 1;

bool is_prime(u64 n);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
u64 inv_mod(u64 a, u64 m);
// Legendre symbol (a/p) for an odd prime p: 0, 1 or -1.
int legendre(u64 a, u64 p);
u64 reduce_signed(i64 v, u64 p);
// Smallest positive quadratic non-residue mod the odd prime p.
u64 smallest_nonresidue(u64 p);

class PrimeField {
 public:
  using Elem = u64;

  explicit PrimeField(u64 p);

  u64 p() const { return p_; }
  u128 order() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(i64 v) const { return reduce_signed(v, p_); }
  bool is_zero(Elem x) const { return x == 0; }
  Elem add(Elem x, Elem y) const { return (x + y) % p_; }
  Elem sub(Elem x, Elem y) const { return (x + p_ - y) % p_; }
  Elem neg(Elem x) const { return x == 0 ? 0 : p_ - x; }
  Elem mul(Elem x, Elem y) const { return (x * y) % p_; }
  Elem inv(Elem x) const;
  Elem pow(Elem x, u128 e) const;
  Elem random(std::mt19937_64& rng) const { return rng() % p_; }

 private:
  u64 p_;
};

struct Fp2 {
  u64 a = 0;  // rational part
  u64 b = 0;  // coefficient of sqrt(s)
  friend auto operator<=>(const Fp2&, const Fp2&) = default;
};

class Fp2Ctx {
 public:
  using Elem = Fp2;

  u64 p() const { return p_; }
  u64 nonresidue() const { return s_; }
  u128 order() const { return u128{p_} * p_; }

  Elem zero() const { return {}; }
  Elem one() const { return {1, 0}; }
  Elem from_int(i64 v) const { return {reduce_signed(v, p_), 0}; }
  Elem from_base(u64 v) const { return {v % p_, 0}; }
  Elem sqrt_nonresidue() const { return {0, 1}; }

  bool is_zero(Elem x) const { return x.a == 0 && x.b == 0; }
  bool in_base_field(Elem x) const { return x.b == 0; }

  Elem add(Elem x, Elem y) const { return {(x.a + y.a) % p_, (x.b + y.b) % p_}; }
  Elem sub(Elem x, Elem y) const { return {(x.a + p_ - y.a) % p_, (x.b + p_ - y.b) % p_}; }
  Elem neg(Elem x) const { return {x.a == 0 ? 0 : p_ - x.a, x.b == 0 ? 0 : p_ - x.b}; }
  Elem mul(Elem x, Elem y) const {
    const u64 bb = (x.b * y.b) % p_;
    return {(x.a * y.a + bb * s_) % p_, (x.a * y.b + x.b * y.a) % p_};
  }
  Elem sqr(Elem x) const { return mul(x, x); }
  Elem inv(Elem x) const;
  Elem pow(Elem x, u128 e) const;
  // x -> x^p, i.e. a + b sqrt(s) -> a - b sqrt(s).
  Elem frobenius(Elem x) const { return {x.a, x.b == 0 ? 0 : p_ - x.b}; }
  Elem random(std::mt19937_64& rng) const { return {rng() % p_, rng() % p_}; }
  // Position of x in the canonical (a, b) order.
  u64 encode(Elem x) const { return x.a * p_ + x.b; }

  friend Fp2Ctx make_quadratic_ctx(u64 p);

 private:
  Fp2Ctx(u64 p, u64 s) : p_(p), s_(s) {}
  u64 p_;
  u64 s_;
};

// Validates p (NonPrime, UnsupportedPrime) and picks the canonical
// non-residue.
Fp2Ctx make_quadratic_ctx(u64 p);

inline Fp2 frobenius(Fp2 x, const Fp2Ctx& ctx) { return ctx.frobenius(x); }

// F_p[x]/(m(x)) for a monic irreducible m of degree k.
class FpkCtx {
 public:
  using Elem = std::vector<u64>;  // exactly k coefficients, little-endian

  // Uses the smallest monic irreducible x^k + tail, tails ordered by their
  // value as base-p numbers (constant term least significant).
  static FpkCtx make(u64 p, unsigned k);
  static FpkCtx with_modulus(u64 p, std::vector<u64> monic_modulus);

  u64 p() const { return p_; }
  unsigned degree() const { return k_; }
  const std::vector<u64>& modulus() const { return modulus_; }
  u128 order() const;

  Elem zero() const { return Elem(k_, 0); }
  Elem one() const;
  Elem from_int(i64 v) const;
  Elem gen() const;  // the class of x

  bool is_zero(const Elem& x) const;
  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem neg(const Elem& x) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem inv(const Elem& x) const;
  Elem pow(const Elem& x, u128 e) const;
  Elem random(std::mt19937_64& rng) const;

 private:
  FpkCtx(u64 p, std::vector<u64> modulus);
  u64 p_;
  unsigned k_;
  std::vector<u64> modulus_;
};

// Rabin's test for a monic polynomial over F_p (little-endian coefficients).
bool is_irreducible(std::span<const u64> monic, u64 p);

}  // namespace ssmod::ff
