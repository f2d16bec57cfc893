#include "ssmod/eigenmod.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <mutex>

#include "ssmod/errors.hpp"
#include "ssmod/ff.hpp"

namespace ssmod::eigenmod {

namespace {

using ff::u64;
using Rational = boost::multiprecision::cpp_rational;
using ModMatrix = std::vector<std::vector<u64>>;

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch, "vector of length " + std::to_string(a) + " vs " + std::to_string(b));
}

// Primes just below 2^61, in decreasing order.
u64 modulus_number(std::size_t index) {
  static std::vector<u64> primes;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  u64 candidate = primes.empty() ? (u64{1} << 61) - 1 : primes.back() - 2;
  while (primes.size() <= index) {
    while (!ff::is_prime(candidate)) candidate -= 2;
    primes.push_back(candidate);
    candidate -= 2;
  }
  return primes[index];
}

// Basis of {x : A x = 0} over F_q for an r x c matrix.
std::vector<std::vector<u64>> kernel_mod(ModMatrix a, std::size_t cols, u64 q) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pr = row;
    while (pr < a.size() && a[pr][col] == 0) ++pr;
    if (pr == a.size()) continue;
    std::swap(a[pr], a[row]);
    const u64 inv = ff::inv_mod(a[row][col], q);
    for (auto& x : a[row]) x = ff::mul_mod(x, inv, q);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const u64 f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] = (a[i][j] + q - ff::mul_mod(f, a[row][j], q)) % q;
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<std::vector<u64>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<u64> x(cols, 0);
    x[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = (q - a[r][f]) % q;
    basis.push_back(std::move(x));
  }
  return basis;
}

u64 reduce(std::int64_t v, u64 q) { return ff::reduce_signed(v, q); }

// Joint eigenspace modulo q, restricted one operator at a time.
struct ModularKernel {
  std::vector<std::vector<u64>> basis;
  std::vector<unsigned> used;
};

ModularKernel joint_kernel_mod(const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                               const std::map<unsigned, std::int64_t>& eigenvalues,
                               const std::vector<unsigned>& order, std::size_t n, u64 q) {
  ModularKernel k;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<u64> e(n, 0);
    e[i] = 1;
    k.basis.push_back(std::move(e));
  }
  for (unsigned ell : order) {
    const auto& m = hecke.at(ell);
    const u64 a = reduce(eigenvalues.at(ell), q);
    // Columns: (B^T - a) applied to each current basis vector.
    const std::size_t d = k.basis.size();
    ModMatrix img(n, std::vector<u64>(d, 0));
    for (std::size_t t = 0; t < d; ++t) {
      const auto& x = k.basis[t];
      for (std::size_t j = 0; j < n; ++j) {
        u64 acc = (q - ff::mul_mod(a, x[j], q)) % q;
        for (std::size_t i = 0; i < n; ++i) {
          const auto b = m.at(i, j);
          if (b != 0 && x[i] != 0) acc = (acc + ff::mul_mod(static_cast<u64>(b), x[i], q)) % q;
        }
        img[j][t] = acc;
      }
    }
    const auto coeffs = kernel_mod(std::move(img), d, q);
    std::vector<std::vector<u64>> next;
    for (const auto& c : coeffs) {
      std::vector<u64> v(n, 0);
      for (std::size_t t = 0; t < d; ++t) {
        if (c[t] == 0) continue;
        for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] + ff::mul_mod(c[t], k.basis[t][i], q)) % q;
      }
      next.push_back(std::move(v));
    }
    k.basis = std::move(next);
    k.used.push_back(ell);
    if (k.basis.size() <= 1) break;
  }
  return k;
}

std::optional<Rational> rational_reconstruct(const BigInt& u, const BigInt& modulus) {
  const BigInt bound = boost::multiprecision::sqrt(BigInt(modulus / 2));
  BigInt r0 = modulus, r1 = u, t0 = 0, t1 = 1;
  while (r1 > bound) {
    const BigInt quo = r0 / r1;
    std::tie(r0, r1) = std::pair<BigInt, BigInt>(r1, r0 - quo * r1);
    std::tie(t0, t1) = std::pair<BigInt, BigInt>(t1, t0 - quo * t1);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  if (boost::multiprecision::gcd(r1, t1) != 1) return std::nullopt;
  if (t1 < 0) return Rational(BigInt(-r1), BigInt(-t1));
  return Rational(r1, t1);
}

bool is_joint_eigenvector(const ModuleVector& v, const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                          const std::map<unsigned, std::int64_t>& eigenvalues) {
  for (const auto& [ell, m] : hecke) {
    const auto tv = apply_hecke(m, v);
    const std::int64_t a = eigenvalues.at(ell);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (tv[i] != a * v[i]) return false;
  }
  return true;
}

ModuleVector clear_denominators(const std::vector<Rational>& x) {
  BigInt l = 1;
  for (const auto& r : x) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(r));
  std::vector<BigInt> out;
  out.reserve(x.size());
  for (const auto& r : x) out.push_back(boost::multiprecision::numerator(r) * (l / boost::multiprecision::denominator(r)));
  return make_primitive(std::move(out));
}

std::vector<unsigned> resolve_order(const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                                    const ExtractOptions& opts) {
  std::vector<unsigned> order;
  if (opts.ell_order.empty()) {
    for (const auto& [ell, m] : hecke) order.push_back(ell);
  } else {
    for (unsigned ell : opts.ell_order)
      if (hecke.count(ell)) order.push_back(ell);
  }
  return order;
}

Extraction extract_modular(const ssgraph::SupersingularBasis& basis,
                           const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                           const std::map<unsigned, std::int64_t>& eigenvalues, const std::vector<unsigned>& order) {
  const std::size_t n = basis.size();
  u64 first_q = modulus_number(0);
  ModularKernel first = joint_kernel_mod(hecke, eigenvalues, order, n, first_q);
  if (first.basis.empty())
    throw Error(ErrorCode::EigenvalueMismatch, "no common eigenvector for the given a_l");
  if (first.basis.size() > 1) {
    // The dimension mod q only bounds the rational one from above; confirm.
    first_q = modulus_number(1);
    const ModularKernel second = joint_kernel_mod(hecke, eigenvalues, order, n, first_q);
    if (second.basis.size() > 1)
      throw Error(ErrorCode::EigenspaceNotRankOne,
                  "joint eigenspace has dimension " + std::to_string(second.basis.size()) +
                      " after all supported operators");
    first = second;
  }

  const auto& u0 = first.basis.front();
  const auto anchor = static_cast<std::size_t>(std::find_if(u0.begin(), u0.end(), [](u64 x) { return x != 0; }) -
                                               u0.begin());
  BigInt modulus = 1;
  std::vector<BigInt> residues(n, 0);
  for (std::size_t round = 0; round < 16; ++round) {
    const u64 q = modulus_number(round);
    const auto k = q == first_q ? first : joint_kernel_mod(hecke, eigenvalues, order, n, q);
    if (k.basis.size() != 1 || k.basis.front()[anchor] == 0) continue;
    const auto& u = k.basis.front();
    const u64 scale = ff::inv_mod(u[anchor], q);
    // CRT: x = r (mod modulus), x = u_i (mod q).
    const BigInt inv_m = BigInt(ff::inv_mod(static_cast<u64>(modulus % q), q));
    for (std::size_t i = 0; i < n; ++i) {
      const u64 ui = ff::mul_mod(u[i], scale, q);
      const u64 ri = static_cast<u64>(residues[i] % q);
      const BigInt h = (BigInt((ui + q - ri) % q) * inv_m) % q;
      residues[i] += modulus * h;
    }
    modulus *= q;

    std::vector<Rational> x;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto r = rational_reconstruct(residues[i], modulus);
      if (!r) ok = false;
      else x.push_back(*r);
    }
    if (!ok) continue;
    ModuleVector v = clear_denominators(x);
    if (is_joint_eigenvector(v, hecke, eigenvalues)) return {std::move(v), first.used};
  }
  throw Error(ErrorCode::EigenvalueMismatch, "modular kernel did not lift to an integer eigenvector");
}

std::vector<BigInt> transpose_minus(const ssgraph::HeckeMatrix& m, std::int64_t a, std::size_t row) {
  std::vector<BigInt> r(m.n);
  for (std::size_t i = 0; i < m.n; ++i) r[i] = m.at(i, row);
  r[row] -= a;
  return r;
}

Extraction extract_fraction_free(const ssgraph::SupersingularBasis& basis,
                                 const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                                 const std::map<unsigned, std::int64_t>& eigenvalues,
                                 const std::vector<unsigned>& order) {
  const std::size_t n = basis.size();
  std::vector<std::vector<BigInt>> rows;
  std::vector<unsigned> used;
  for (unsigned ell : order) {
    for (std::size_t j = 0; j < n; ++j) rows.push_back(transpose_minus(hecke.at(ell), eigenvalues.at(ell), j));
    used.push_back(ell);
    const auto ker = integer_kernel(rows, n);
    if (ker.empty()) throw Error(ErrorCode::EigenvalueMismatch, "no common eigenvector for the given a_l");
    if (ker.size() == 1) {
      if (!is_joint_eigenvector(ker.front(), hecke, eigenvalues))
        throw Error(ErrorCode::EigenvalueMismatch, "kernel vector fails a held-out operator");
      return {ker.front(), used};
    }
  }
  throw Error(ErrorCode::EigenspaceNotRankOne, "joint eigenspace has dimension > 1 after all supported operators");
}

}  // namespace

BigInt pairing(const ModuleVector& x, const ModuleVector& y, const ssgraph::SupersingularBasis& basis) {
  require_same_size(x.size(), basis.size());
  require_same_size(y.size(), basis.size());
  BigInt s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += BigInt(basis.weights[i]) * x[i] * y[i];
  return s;
}

BigInt norm(const ModuleVector& v, const ssgraph::SupersingularBasis& basis) { return pairing(v, v, basis); }

ModuleVector apply_hecke(const ssgraph::HeckeMatrix& m, const ModuleVector& v) {
  require_same_size(v.size(), m.n);
  ModuleVector out{std::vector<std::int64_t>(m.n, 0)};
  for (std::size_t i = 0; i < m.n; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.n; ++j) out.coords[j] += m.at(i, j) * v[i];
  }
  return out;
}

ModuleVector make_primitive(std::vector<BigInt> v) {
  BigInt g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
  if (g != 0) {
    g = abs(g);
    for (auto& x : v) x /= g;
    const auto first = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
    if (*first < 0)
      for (auto& x : v) x = -x;
  }
  ModuleVector out;
  out.coords.reserve(v.size());
  constexpr std::int64_t kLimit = std::int64_t{1} << 48;
  for (const auto& x : v) {
    if (abs(x) > kLimit) throw Error(ErrorCode::EigenvalueMismatch, "eigenvector entry out of range");
    out.coords.push_back(x.convert_to<std::int64_t>());
  }
  return out;
}

std::vector<ModuleVector> integer_kernel(const std::vector<std::vector<BigInt>>& rows_in, std::size_t cols) {
  // Bareiss: every division below is exact.
  auto a = rows_in;
  std::vector<std::size_t> pivots;
  BigInt prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pr = row;
    while (pr < a.size() && a[pr][col] == 0) ++pr;
    if (pr == a.size()) continue;
    std::swap(a[pr], a[row]);
    for (std::size_t i = row + 1; i < a.size(); ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[row][col];
    pivots.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<ModuleVector> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(cols, 0);
    x[f] = 1;
    for (std::size_t r = pivots.size(); r-- > 0;) {
      const std::size_t pc = pivots[r];
      Rational s = 0;
      for (std::size_t j = pc + 1; j < cols; ++j)
        if (x[j] != 0 && a[r][j] != 0) s += Rational(a[r][j]) * x[j];
      x[pc] = -s / Rational(a[r][pc]);
    }
    out.push_back(clear_denominators(x));
  }
  return out;
}

Extraction extract_ve(const ssgraph::SupersingularBasis& basis,
                      const std::map<unsigned, ssgraph::HeckeMatrix>& hecke,
                      const std::map<unsigned, std::int64_t>& eigenvalues, const ExtractOptions& opts) {
  if (basis.size() < 2)
    throw Error(ErrorCode::GenusZero, "X_0(" + std::to_string(basis.p()) + ") has genus 0");
  for (const auto& [ell, m] : hecke) {
    require_same_size(m.n, basis.size());
    if (!eigenvalues.count(ell))
      throw Error(ErrorCode::DimensionMismatch, "no eigenvalue supplied for l = " + std::to_string(ell));
  }
  const auto order = resolve_order(hecke, opts);
  if (opts.method == KernelMethod::FractionFree) return extract_fraction_free(basis, hecke, eigenvalues, order);
  return extract_modular(basis, hecke, eigenvalues, order);
}

Extraction extract_ve(const ssgraph::SupersingularBasis& basis,
                      const std::map<unsigned, ssgraph::HeckeMatrix>& hecke, const curve::WeierstrassCurve& e,
                      const ExtractOptions& opts) {
  if (e.conductor != basis.p())
    throw Error(ErrorCode::EigenvalueMismatch, "curve conductor " + std::to_string(e.conductor) +
                                                   " differs from p = " + std::to_string(basis.p()));
  std::map<unsigned, std::int64_t> eigenvalues;
  for (const auto& [ell, m] : hecke) eigenvalues[ell] = curve::a_ell(e, ell);
  return extract_ve(basis, hecke, eigenvalues, opts);
}

}  // namespace ssmod::eigenmod
