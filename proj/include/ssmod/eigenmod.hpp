#pragma once

// Integer vectors in the supersingular module, the weighted pairing
// <e_i, e_j> = w_i delta_ij, and exact extraction of the primitive joint
// Hecke eigenvector v_E.
//
// Convention: t_l e_i = sum_j B[i][j] e_j, so on coordinate vectors t_l acts
// by the transpose, (t_l v)_j = sum_i B[i][j] v_i.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssmod/curve.hpp"
#include "ssmod/ssgraph.hpp"

namespace ssmod::eigenmod {

using BigInt = boost::multiprecision::cpp_int;

struct ModuleVector {
  std::vector<std::int64_t> coords;

  std::size_t size() const { return coords.size(); }
  std::int64_t operator[](std::size_t i) const { return coords[i]; }
  friend bool operator==(const ModuleVector&, const ModuleVector&) = default;
};

// sum_i w_i x_i y_i (DimensionMismatch unless both have length n).
BigInt pairing(const ModuleVector& x, const ModuleVector& y, const ssgraph::SupersingularBasis& basis);
BigInt norm(const ModuleVector& v, const ssgraph::SupersingularBasis& basis);

// Coordinates of t_l v.
ModuleVector apply_hecke(const ssgraph::HeckeMatrix& m, const ModuleVector& v);

// Divides by the content and makes the first nonzero entry positive.
ModuleVector make_primitive(std::vector<BigInt> v);

enum class KernelMethod {
  Modular,       // kernels modulo 61-bit primes, rational reconstruction, exact check
  FractionFree,  // Bareiss elimination over the integers
};

struct ExtractOptions {
  KernelMethod method = KernelMethod::Modular;
  // Order in which operators are added; empty = ascending l.
  std::vector<unsigned> ell_order;
};

struct Extraction {
  ModuleVector v;
  std::vector<unsigned> ells_used;  // operators needed to reach rank one
};

// `eigenvalues[l]` = a_l for every l in `hecke`. Errors: GenusZero (n < 2),
// EigenvalueMismatch (no common eigenvector), EigenspaceNotRankOne.
Extraction extract_ve(const ssgraph::SupersingularBasis& basis,
                      const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                      const std::map<unsigned, std::int64_t>& eigenvalues, const ExtractOptions& opts = {});

Extraction extract_ve(const ssgraph::SupersingularBasis& basis,
                      const std::map<unsigned, ssgraph::HeckeMatrix>& hecke, const curve::WeierstrassCurve& e,
                      const ExtractOptions& opts = {});

// Basis of the integer kernel of an integer matrix (rows x cols), each
// vector primitive. Exact, fraction-free.
std::vector<ModuleVector> integer_kernel(const std::vector<std::vector<BigInt>>& rows, std::size_t cols);

}  // namespace ssmod::eigenmod
