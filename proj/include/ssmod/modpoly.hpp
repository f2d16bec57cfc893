#pragma once

// Classical modular polynomials Phi_l(X, Y), shipped as text data files.
//
// File format (one file per l):
//   MODPOLY v1 ell=<l>
//   <i> <j> <decimal coefficient>      coefficient of X^i Y^j, i >= j
//   ...
//   CHECKSUM <sum of (i*131 + j) * (c mod 2^61-1), mod 2^61-1>
// Missing monomials are zero; the loader completes the symmetric half.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssmod/ff.hpp"
#include "ssmod/poly.hpp"

namespace ssmod::modpoly {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::array<unsigned, 6> kSupportedEll{2, 3, 5, 7, 11, 13};
inline constexpr std::uint64_t kChecksumModulus = (std::uint64_t{1} << 61) - 1;

struct ModularPolynomial {
  unsigned ell = 0;
  // Stored half, keys (i, j) with i >= j.
  std::map<std::pair<unsigned, unsigned>, BigInt> coeffs;
  std::uint64_t checksum = 0;

  // Coefficient of X^i Y^j, using symmetry for i < j.
  BigInt coefficient(unsigned i, unsigned j) const;
  unsigned degree_x() const;
};

struct ReducedModularPolynomial {
  unsigned ell = 0;
  std::uint64_t p = 0;
  // Dense symmetric (ell+2) x (ell+2) table: coeffs[i][j] = coefficient of X^i Y^j mod p.
  std::vector<std::vector<std::uint64_t>> coeffs;
};

// Parses and validates (symmetry, degree, Kronecker congruence, checksum).
ModularPolynomial load_modular_polynomial(unsigned ell, std::istream& source);
ModularPolynomial load_modular_polynomial_file(unsigned ell, const std::filesystem::path& path);

// Directory holding phi_<l>.txt; $SSMOD_DATA/modpoly when set.
std::filesystem::path modpoly_dir();

// Loads once per process; thread-safe.
const ModularPolynomial& shipped(unsigned ell);

// Stable fingerprint of all shipped files (used as a cache key).
std::string shipped_checksum_key();

std::uint64_t checksum_term(unsigned i, unsigned j, const BigInt& c);

ReducedModularPolynomial reduce_mod_p(const ModularPolynomial& phi, std::uint64_t p);

// Phi_l(j, X) as a polynomial in X over F_p^2 (monic of degree l + 1).
poly::Poly<ff::Fp2Ctx> specialize(const ReducedModularPolynomial& rphi, const ff::Fp2Ctx& ctx, ff::Fp2 j);

}  // namespace ssmod::modpoly
