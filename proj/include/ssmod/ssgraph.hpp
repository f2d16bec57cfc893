#pragma once

// Supersingular j-invariants over F_p^2, their weights and Frobenius
// pairing, and the Brandt (Hecke) matrices B(l) acting on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssmod/ff.hpp"
#include "ssmod/modpoly.hpp"

namespace ssmod::ssgraph {

struct SupersingularBasis {
  ff::Fp2Ctx ctx;
  std::vector<ff::Fp2> vertices;   // sorted by (a, b)
  std::vector<int> weights;        // w_i = #Aut(E_i) / 2
  std::vector<std::size_t> bar;    // j_bar(i) = j_i^p

  std::uint64_t p() const { return ctx.p(); }
  std::size_t size() const { return vertices.size(); }
  std::optional<std::size_t> index_of(ff::Fp2 j) const;
  // The unique vertex of weight 2 (j = 1728), present iff p = 3 mod 4.
  std::optional<std::size_t> weight_two_index() const;
  bool is_frobenius_fixed(std::size_t i) const { return bar[i] == i; }
};

// Row-major n x n. t_l e_i = sum_j B[i][j] e_j.
struct HeckeMatrix {
  unsigned ell = 0;
  std::size_t n = 0;
  std::vector<std::int64_t> entries;

  std::int64_t at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  std::int64_t& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  friend bool operator==(const HeckeMatrix&, const HeckeMatrix&) = default;
};

// floor(p/12) + {0, 1, 1, 2} for p = {1, 5, 7, 11} mod 12 (p >= 5).
std::size_t expected_basis_size(std::uint64_t p);

// Point-count supersingularity test for j in F_p (O(p)).
bool is_supersingular_fp(std::uint64_t j, std::uint64_t p);

// Certified supersingular starting vertex in F_p.
ff::Fp2 starting_vertex(const ff::Fp2Ctx& ctx);

SupersingularBasis enumerate_basis(std::uint64_t p);
// Closure of `start` under 2-isogenies; `start` must be supersingular.
SupersingularBasis enumerate_basis_from(const ff::Fp2Ctx& ctx, const modpoly::ReducedModularPolynomial& phi2,
                                        ff::Fp2 start);

// Weights and Frobenius map for an already sorted vertex list.
SupersingularBasis make_basis(const ff::Fp2Ctx& ctx, std::vector<ff::Fp2> sorted_vertices);

// B[i][j] = multiplicity of j_j as a root of Phi_l(j_i, X). Rows are
// independent; `workers` > 1 computes them on a thread pool with identical
// output. Every invariant below is checked before returning.
HeckeMatrix hecke_matrix(const SupersingularBasis& basis, const modpoly::ReducedModularPolynomial& rphi,
                         unsigned workers = 1);

// B(2) from explicit 2-isogenies (Velu), no modular polynomial involved.
HeckeMatrix hecke_matrix_velu2(const SupersingularBasis& basis);

// Invariant checks. Each returns human-readable violations (empty = ok).
std::vector<std::string> basis_violations(const SupersingularBasis& basis);
std::vector<std::string> hecke_violations(const SupersingularBasis& basis, const HeckeMatrix& m);
std::vector<std::string> commutation_violations(std::span<const HeckeMatrix> matrices);

// Sum of 1/w_i == (p - 1)/12, exactly.
bool mass_formula_holds(const SupersingularBasis& basis);

HeckeMatrix multiply(const HeckeMatrix& x, const HeckeMatrix& y);

}  // namespace ssmod::ssgraph
