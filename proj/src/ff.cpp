#include "ssmod/ff.hpp"

#include <string>

#include "ssmod/errors.hpp"
#include "ssmod/poly.hpp"

namespace ssmod::ff {

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128{a} * b) % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These witnesses are deterministic for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 inv_mod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    const i64 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw Error(ErrorCode::DivisionByZero, "inverse of a non-unit mod " + std::to_string(m));
  return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

u64 reduce_signed(i64 v, u64 p) {
  const i64 r = v % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

u64 smallest_nonresidue(u64 p) {
  for (u64 s = 2; s < p; ++s) {
    if (legendre(s, p) == -1) return s;
  }
  throw Error(ErrorCode::UnsupportedPrime, "no quadratic non-residue mod " + std::to_string(p));
}

PrimeField::PrimeField(u64 p) : p_(p) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (p > kMaxCharacteristic) throw Error(ErrorCode::UnsupportedPrime, std::to_string(p) + " exceeds 2^31 - 1");
}

PrimeField::Elem PrimeField::inv(Elem x) const { return inv_mod(x, p_); }

PrimeField::Elem PrimeField::pow(Elem x, u128 e) const {
  Elem result = 1;
  while (e > 0) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

Fp2Ctx make_quadratic_ctx(u64 p) {
  if (p < 5) throw Error(ErrorCode::UnsupportedPrime, "characteristic must be at least 5, got " + std::to_string(p));
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (p > kMaxCharacteristic) throw Error(ErrorCode::UnsupportedPrime, std::to_string(p) + " exceeds 2^31 - 1");
  return Fp2Ctx(p, smallest_nonresidue(p));
}

Fp2 Fp2Ctx::inv(Fp2 x) const {
  // (a + b r)^-1 = (a - b r) / (a^2 - s b^2)
  const u64 norm = (x.a * x.a % p_ + p_ - (x.b * x.b % p_) * s_ % p_) % p_;
  if (norm == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in F_p^2");
  const u64 ni = inv_mod(norm, p_);
  return {x.a * ni % p_, (p_ - x.b) % p_ * ni % p_};
}

Fp2 Fp2Ctx::pow(Fp2 x, u128 e) const {
  Fp2 result = one();
  while (e > 0) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// F_p^k

namespace {

using PrimePoly = poly::Poly<PrimeField>;

bool overflow_power(u64 p, unsigned k, u128& out) {
  u128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (acc > (~u128{0}) / p) return true;
    acc *= p;
  }
  out = acc;
  return false;
}

}  // namespace

bool is_irreducible(std::span<const u64> monic, u64 p) {
  const PrimeField fp(p);
  PrimePoly f(monic.begin(), monic.end());
  for (auto& c : f) c %= p;
  poly::trim(fp, f);
  const int k = poly::degree<PrimeField>(f);
  if (k <= 0) return false;
  if (k == 1) return true;
  const PrimePoly x{0, 1};
  // x^(p^i) mod f for i = 1..k
  std::vector<PrimePoly> frob(k + 1);
  frob[0] = x;
  for (int i = 1; i <= k; ++i) frob[i] = poly::powmod(fp, frob[i - 1], p, f);
  if (poly::sub(fp, frob[k], x).size() != 0) return false;
  for (int r = 2; r <= k; ++r) {
    bool prime_r = true;
    for (int d = 2; d * d <= r; ++d) prime_r = prime_r && (r % d != 0);
    if (!prime_r || k % r != 0) continue;
    const auto g = poly::gcd(fp, f, poly::sub(fp, frob[k / r], x));
    if (poly::degree<PrimeField>(g) != 0) return false;
  }
  return true;
}

FpkCtx::FpkCtx(u64 p, std::vector<u64> modulus)
    : p_(p), k_(static_cast<unsigned>(modulus.size() - 1)), modulus_(std::move(modulus)) {}

FpkCtx FpkCtx::with_modulus(u64 p, std::vector<u64> monic_modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (monic_modulus.size() < 2 || monic_modulus.back() != 1)
    throw Error(ErrorCode::ExtensionConstructionFailure, "modulus must be monic of degree >= 1");
  if (!is_irreducible(monic_modulus, p))
    throw Error(ErrorCode::ExtensionConstructionFailure, "modulus is reducible");
  u128 order;
  if (overflow_power(p, static_cast<unsigned>(monic_modulus.size() - 1), order))
    throw Error(ErrorCode::ExtensionConstructionFailure, "field order exceeds 128 bits");
  return FpkCtx(p, std::move(monic_modulus));
}

FpkCtx FpkCtx::make(u64 p, unsigned k) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (k == 0) throw Error(ErrorCode::ExtensionConstructionFailure, "extension degree 0");
  if (p > kMaxCharacteristic) throw Error(ErrorCode::UnsupportedPrime, std::to_string(p) + " exceeds 2^31 - 1");
  u128 order;
  if (overflow_power(p, k, order)) throw Error(ErrorCode::ExtensionConstructionFailure, "field order exceeds 128 bits");

  std::vector<u64> modulus(k + 1, 0);
  modulus[k] = 1;
  if (k == 1) return FpkCtx(p, modulus);
  // Odometer over the tail in base p; an irreducible tail appears long
  // before the search space is exhausted (about 1/k of all monic ones are).
  for (u64 attempt = 0; attempt < (u64{1} << 32); ++attempt) {
    for (unsigned i = 0; i < k; ++i) {
      if (++modulus[i] < p) break;
      modulus[i] = 0;
    }
    if (modulus[0] != 0 && is_irreducible(modulus, p)) return FpkCtx(p, modulus);
  }
  throw Error(ErrorCode::ExtensionConstructionFailure, "no irreducible modulus found");
}

u128 FpkCtx::order() const {
  u128 out = 1;
  for (unsigned i = 0; i < k_; ++i) out *= p_;
  return out;
}

FpkCtx::Elem FpkCtx::one() const {
  Elem e(k_, 0);
  e[0] = 1;
  return e;
}

FpkCtx::Elem FpkCtx::from_int(i64 v) const {
  Elem e(k_, 0);
  e[0] = reduce_signed(v, p_);
  return e;
}

FpkCtx::Elem FpkCtx::gen() const {
  if (k_ == 1) return {(p_ - modulus_[0]) % p_};
  Elem e(k_, 0);
  e[1] = 1;
  return e;
}

bool FpkCtx::is_zero(const Elem& x) const {
  for (u64 c : x)
    if (c != 0) return false;
  return true;
}

FpkCtx::Elem FpkCtx::add(const Elem& x, const Elem& y) const {
  Elem out(k_);
  for (unsigned i = 0; i < k_; ++i) out[i] = (x[i] + y[i]) % p_;
  return out;
}

FpkCtx::Elem FpkCtx::sub(const Elem& x, const Elem& y) const {
  Elem out(k_);
  for (unsigned i = 0; i < k_; ++i) out[i] = (x[i] + p_ - y[i]) % p_;
  return out;
}

FpkCtx::Elem FpkCtx::neg(const Elem& x) const {
  Elem out(k_);
  for (unsigned i = 0; i < k_; ++i) out[i] = x[i] == 0 ? 0 : p_ - x[i];
  return out;
}

FpkCtx::Elem FpkCtx::mul(const Elem& x, const Elem& y) const {
  std::vector<u64> prod(2 * k_ - 1, 0);
  for (unsigned i = 0; i < k_; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
  }
  // Reduce with the monic modulus from the top down.
  for (std::size_t i = prod.size(); i-- > k_;) {
    const u64 c = prod[i];
    if (c == 0) continue;
    for (unsigned j = 0; j < k_; ++j) {
      const std::size_t at = i - k_ + j;
      prod[at] = (prod[at] + (p_ - c) * modulus_[j]) % p_;
    }
    prod[i] = 0;
  }
  prod.resize(k_);
  return prod;
}

FpkCtx::Elem FpkCtx::pow(const Elem& x, u128 e) const {
  Elem result = one();
  Elem base = x;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

FpkCtx::Elem FpkCtx::inv(const Elem& x) const {
  if (is_zero(x)) throw Error(ErrorCode::DivisionByZero, "inverse of zero in F_p^k");
  return pow(x, order() - 2);
}

FpkCtx::Elem FpkCtx::random(std::mt19937_64& rng) const {
  Elem out(k_);
  for (auto& c : out) c = rng() % p_;
  return out;
}

}  // namespace ssmod::ff
