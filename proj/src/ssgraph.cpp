#include "ssmod/ssgraph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <thread>

#include "ssmod/errors.hpp"
#include "ssmod/poly.hpp"

namespace ssmod::ssgraph {

namespace {

using ff::Fp2;
using ff::u64;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

// Class-number-one CM j-invariants and their discriminants -D.
struct CmPoint {
  std::int64_t j;
  std::int64_t disc;
};
constexpr std::array<CmPoint, 9> kClassNumberOne{{
    {0, -3},
    {1728, -4},
    {-3375, -7},
    {8000, -8},
    {-32768, -11},
    {-884736, -19},
    {-884736000, -43},
    {-147197952000, -67},
    {-262537412640768000, -163},
}};

}  // namespace

std::optional<std::size_t> SupersingularBasis::index_of(Fp2 j) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), j);
  if (it == vertices.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin());
}

std::optional<std::size_t> SupersingularBasis::weight_two_index() const {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 2) {
      if (found) return std::nullopt;
      found = i;
    }
  }
  return found;
}

std::size_t expected_basis_size(u64 p) {
  static constexpr std::array<std::size_t, 12> extra{0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2};
  return static_cast<std::size_t>(p / 12) + extra[p % 12];
}

bool is_supersingular_fp(u64 j, u64 p) {
  j %= p;
  u64 a = 0, b = 0;
  if (j == 0) {
    b = 1;
  } else if (j == 1728 % p) {
    a = 1;
  } else {
    // y^2 = x^3 + 3k x + 2k has j-invariant j for k = j / (1728 - j).
    const u64 k = ff::mul_mod(j, ff::inv_mod((1728 % p + p - j) % p, p), p);
    a = 3 * k % p;
    b = 2 * k % p;
  }
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (u64 x = 1; x < p; ++x) chi[x * x % p] = 1;
  std::int64_t trace = 0;
  for (u64 x = 0; x < p; ++x) {
    const u64 rhs = (x * x % p * x + a * x + b) % p;
    trace += chi[rhs];
  }
  return trace == 0;
}

Fp2 starting_vertex(const ff::Fp2Ctx& ctx) {
  const u64 p = ctx.p();
  std::optional<u64> candidate;
  if (p % 4 == 3) {
    candidate = 1728 % p;
  } else if (p % 3 == 2) {
    candidate = 0;
  } else {
    for (const auto& cm : kClassNumberOne) {
      if (ff::legendre(ff::reduce_signed(cm.disc, p), p) == -1) {
        candidate = ff::reduce_signed(cm.j, p);
        break;
      }
    }
  }
  if (candidate && is_supersingular_fp(*candidate, p)) return ctx.from_base(*candidate);
  for (u64 j = 0; j < p; ++j) {
    if (is_supersingular_fp(j, p)) return ctx.from_base(j);
  }
  throw Error(ErrorCode::UnsupportedPrime, "no supersingular j-invariant found in F_" + std::to_string(p));
}

SupersingularBasis make_basis(const ff::Fp2Ctx& ctx, std::vector<Fp2> sorted_vertices) {
  SupersingularBasis basis{ctx, std::move(sorted_vertices), {}, {}};
  const Fp2 j0 = ctx.zero();
  const Fp2 j1728 = ctx.from_int(1728);
  for (const auto& j : basis.vertices) basis.weights.push_back(j == j0 ? 3 : (j == j1728 ? 2 : 1));
  for (const auto& j : basis.vertices) {
    auto idx = basis.index_of(ctx.frobenius(j));
    if (!idx) throw Error(ErrorCode::NonSupersingularRoot, "Frobenius conjugate of a vertex is not a vertex");
    basis.bar.push_back(*idx);
  }
  return basis;
}

SupersingularBasis enumerate_basis_from(const ff::Fp2Ctx& ctx, const modpoly::ReducedModularPolynomial& phi2,
                                        Fp2 start) {
  if (phi2.ell != 2 || phi2.p != ctx.p())
    throw Error(ErrorCode::DimensionMismatch, "enumeration needs Phi_2 reduced mod p");
  std::set<Fp2> seen{start};
  std::deque<Fp2> queue{start};
  while (!queue.empty()) {
    const Fp2 j = queue.front();
    queue.pop_front();
    const auto roots = poly::roots_with_multiplicity(ctx, modpoly::specialize(phi2, ctx, j));
    unsigned total = 0;
    for (const auto& r : roots) {
      total += r.multiplicity;
      if (seen.insert(r.root).second) queue.push_back(r.root);
    }
    if (total != 3)
      throw Error(ErrorCode::NonSupersingularRoot,
                  "Phi_2(j, X) does not split over F_p^2 at a visited vertex; start is not supersingular");
  }
  auto basis = make_basis(ctx, std::vector<Fp2>(seen.begin(), seen.end()));
  if (auto bad = basis_violations(basis); !bad.empty())
    throw Error(ErrorCode::HeckeInvariantViolation, "supersingular basis: " + join(bad));
  return basis;
}

SupersingularBasis enumerate_basis(u64 p) {
  const auto ctx = ff::make_quadratic_ctx(p);
  const auto phi2 = modpoly::reduce_mod_p(modpoly::shipped(2), p);
  return enumerate_basis_from(ctx, phi2, starting_vertex(ctx));
}

bool mass_formula_holds(const SupersingularBasis& basis) {
  // 12 * sum 1/w_i == p - 1 with 12/w_i integral for w_i in {1, 2, 3}.
  u64 twelve_mass = 0;
  for (int w : basis.weights) twelve_mass += static_cast<u64>(12 / w);
  return twelve_mass == basis.p() - 1;
}

std::vector<std::string> basis_violations(const SupersingularBasis& basis) {
  std::vector<std::string> out;
  const u64 p = basis.p();
  const std::size_t n = basis.size();
  if (n != expected_basis_size(p))
    out.push_back("basis size " + std::to_string(n) + " != expected " + std::to_string(expected_basis_size(p)));
  if (!std::is_sorted(basis.vertices.begin(), basis.vertices.end()) ||
      std::adjacent_find(basis.vertices.begin(), basis.vertices.end()) != basis.vertices.end())
    out.push_back("vertices not strictly sorted");
  if (basis.weights.size() != n || basis.bar.size() != n) {
    out.push_back("weights/bar length mismatch");
    return out;
  }
  if (!mass_formula_holds(basis)) out.push_back("mass formula sum 1/w_i != (p-1)/12");
  const Fp2 j0 = basis.ctx.zero();
  const Fp2 j1728 = basis.ctx.from_int(1728);
  std::size_t even = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& j = basis.vertices[i];
    const int expected = j == j0 ? 3 : (j == j1728 ? 2 : 1);
    if (basis.weights[i] != expected) out.push_back("wrong weight at vertex " + std::to_string(i));
    if (basis.weights[i] % 2 == 0) ++even;
    const auto b = basis.bar[i];
    if (b >= n || basis.bar[b] != i) {
      out.push_back("bar is not an involution at " + std::to_string(i));
      continue;
    }
    if (basis.vertices[b] != basis.ctx.frobenius(j)) out.push_back("bar disagrees with Frobenius at " + std::to_string(i));
    if ((b == i) != basis.ctx.in_base_field(j)) out.push_back("bar fixes a non-F_p vertex at " + std::to_string(i));
  }
  const u64 r = p % 12;
  if ((r == 1 || r == 5) && even != 0) out.push_back("even weight for p = 1, 5 mod 12");
  if ((r == 7 || r == 11) && even != 1) out.push_back("expected exactly one even weight for p = 7, 11 mod 12");
  return out;
}

HeckeMatrix hecke_matrix(const SupersingularBasis& basis, const modpoly::ReducedModularPolynomial& rphi,
                         unsigned workers) {
  if (rphi.p != basis.p())
    throw Error(ErrorCode::DimensionMismatch, "modular polynomial reduced mod a different prime");
  if (rphi.ell == basis.p()) throw Error(ErrorCode::EllEqualsP, "l = p");
  const std::size_t n = basis.size();
  HeckeMatrix m{rphi.ell, n, std::vector<std::int64_t>(n * n, 0)};
  std::vector<std::string> row_errors(n);

  auto fill_row = [&](std::size_t i) {
    const auto roots =
        poly::roots_with_multiplicity(basis.ctx, modpoly::specialize(rphi, basis.ctx, basis.vertices[i]));
    unsigned total = 0;
    for (const auto& r : roots) {
      auto idx = basis.index_of(r.root);
      if (!idx) {
        row_errors[i] = "root of Phi_" + std::to_string(rphi.ell) + "(j_" + std::to_string(i) + ", X) is not a vertex";
        return;
      }
      m.at(i, *idx) = r.multiplicity;
      total += r.multiplicity;
    }
    if (total != rphi.ell + 1)
      row_errors[i] = "Phi_" + std::to_string(rphi.ell) + "(j_" + std::to_string(i) + ", X) has only " +
                      std::to_string(total) + " roots in F_p^2";
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) fill_row(i);
      });
    }
  }
  for (const auto& e : row_errors)
    if (!e.empty()) throw Error(ErrorCode::NonSupersingularRoot, e);
  if (auto bad = hecke_violations(basis, m); !bad.empty())
    throw Error(ErrorCode::HeckeInvariantViolation, "B(" + std::to_string(m.ell) + "): " + join(bad));
  return m;
}

std::vector<std::string> hecke_violations(const SupersingularBasis& basis, const HeckeMatrix& m) {
  std::vector<std::string> out;
  const std::size_t n = basis.size();
  if (m.n != n || m.entries.size() != n * n) {
    out.push_back("matrix dimension does not match basis");
    return out;
  }
  const auto ell = static_cast<std::int64_t>(m.ell);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (m.at(i, j) < 0) out.push_back("negative entry");
      row += m.at(i, j);
    }
    if (row != ell + 1) out.push_back("row " + std::to_string(i) + " sums to " + std::to_string(row));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.at(i, j) * basis.weights[j] != m.at(j, i) * basis.weights[i])
        out.push_back("not self-adjoint at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  // t_l e0 = (l+1) e0 with e0 = sum e_i / w_i; scaled by 6 to stay integral.
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t col = 0;
    for (std::size_t i = 0; i < n; ++i) col += m.at(i, j) * (6 / basis.weights[i]);
    if (col != (ell + 1) * (6 / basis.weights[j]))
      out.push_back("Eisenstein identity fails at column " + std::to_string(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.at(basis.bar[i], basis.bar[j]) != m.at(i, j))
        out.push_back("not Frobenius-equivariant at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return out;
}

HeckeMatrix multiply(const HeckeMatrix& x, const HeckeMatrix& y) {
  const std::size_t n = x.n;
  HeckeMatrix out{0, n, std::vector<std::int64_t>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto a = x.at(i, k);
      if (a == 0) continue;
      const std::int64_t* yrow = &y.entries[k * n];
      std::int64_t* orow = &out.entries[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += a * yrow[j];
    }
  }
  return out;
}

std::vector<std::string> commutation_violations(std::span<const HeckeMatrix> matrices) {
  std::vector<std::string> out;
  for (std::size_t a = 0; a < matrices.size(); ++a) {
    for (std::size_t b = a + 1; b < matrices.size(); ++b) {
      if (multiply(matrices[a], matrices[b]).entries != multiply(matrices[b], matrices[a]).entries)
        out.push_back("B(" + std::to_string(matrices[a].ell) + ") and B(" + std::to_string(matrices[b].ell) +
                      ") do not commute");
    }
  }
  return out;
}

}  // namespace ssmod::ssgraph
