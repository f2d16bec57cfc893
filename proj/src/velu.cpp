// Independent construction of B(2): for every vertex take a short Weierstrass
// model, split its 2-division cubic in a large enough extension of F_p, and
// push each kernel point through Velu's formulas.

#include <map>

#include "ssmod/errors.hpp"
#include "ssmod/poly.hpp"
#include "ssmod/ssgraph.hpp"

namespace ssmod::ssgraph {

namespace {

using ff::Fp2;
using ff::FpkCtx;
using ff::u64;

struct ShortModel {
  Fp2 a;
  Fp2 b;
};

ShortModel model_with_j(const ff::Fp2Ctx& ctx, Fp2 j) {
  if (ctx.is_zero(j)) return {ctx.zero(), ctx.one()};
  const Fp2 j1728 = ctx.from_int(1728);
  if (j == j1728) return {ctx.one(), ctx.zero()};
  const Fp2 k = ctx.mul(j, ctx.inv(ctx.sub(j1728, j)));
  return {ctx.mul(ctx.from_int(3), k), ctx.mul(ctx.from_int(2), k)};
}

// F_p^2 inside F_p^k (k even) via a fixed square root of s.
class Embedding {
 public:
  Embedding(const ff::Fp2Ctx& small, const FpkCtx& big) : small_(small), big_(big) {
    const poly::Poly<FpkCtx> x2_minus_s{big.neg(big.from_int(static_cast<ff::i64>(small.nonresidue()))), big.zero(),
                                        big.one()};
    const auto roots = poly::roots_with_multiplicity(big, x2_minus_s);
    if (roots.empty()) throw Error(ErrorCode::ExtensionConstructionFailure, "sqrt(s) not found in F_p^k");
    root_ = roots.front().root;
    for (unsigned i = 1; i < big.degree(); ++i) {
      if (root_[i] != 0) {
        pivot_ = i;
        break;
      }
    }
    if (pivot_ == 0) throw Error(ErrorCode::ExtensionConstructionFailure, "sqrt(s) lies in F_p");
  }

  FpkCtx::Elem up(Fp2 x) const {
    return big_.add(big_.from_int(static_cast<ff::i64>(x.a)), big_.mul(big_.from_int(static_cast<ff::i64>(x.b)), root_));
  }

  std::optional<Fp2> down(const FpkCtx::Elem& y) const {
    const u64 p = big_.p();
    const u64 b = ff::mul_mod(y[pivot_], ff::inv_mod(root_[pivot_], p), p);
    const u64 a = (y[0] + p - ff::mul_mod(b, root_[0], p)) % p;
    const Fp2 x{a, b};
    if (up(x) != y) return std::nullopt;
    return x;
  }

 private:
  const ff::Fp2Ctx& small_;
  const FpkCtx& big_;
  FpkCtx::Elem root_;
  unsigned pivot_ = 0;
};

}  // namespace

HeckeMatrix hecke_matrix_velu2(const SupersingularBasis& basis) {
  const auto& ctx = basis.ctx;
  const std::size_t n = basis.size();
  HeckeMatrix m{2, n, std::vector<std::int64_t>(n * n, 0)};
  std::map<unsigned, FpkCtx> fields;

  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b] = model_with_j(ctx, basis.vertices[i]);
    const poly::Poly<ff::Fp2Ctx> cubic{b, a, ctx.zero(), ctx.one()};
    // 3, 1 or 0 rational roots <=> splitting field of degree 1, 2 or 3 over F_p^2.
    const auto rational = poly::roots_with_multiplicity(ctx, cubic);
    const unsigned split_degree = rational.size() == 3 ? 1 : (rational.size() == 1 ? 2 : 3);
    if (rational.size() == 2) throw Error(ErrorCode::ExtensionConstructionFailure, "cubic with a repeated root");
    const unsigned k = 2 * split_degree;
    auto it = fields.find(k);
    if (it == fields.end()) it = fields.emplace(k, FpkCtx::make(basis.p(), k)).first;
    const FpkCtx& big = it->second;
    const Embedding emb(ctx, big);

    const auto A = emb.up(a);
    const auto B = emb.up(b);
    const poly::Poly<FpkCtx> big_cubic{B, A, big.zero(), big.one()};
    const auto kernel_x = poly::roots_with_multiplicity(big, big_cubic);
    if (kernel_x.size() != 3) throw Error(ErrorCode::ExtensionConstructionFailure, "2-division cubic did not split");

    for (const auto& root : kernel_x) {
      const auto& x0 = root.root;
      // Velu for the kernel {O, (x0, 0)}: A' = A - 5t, B' = B - 7 x0 t, t = 3 x0^2 + A.
      const auto t = big.add(big.mul(big.from_int(3), big.mul(x0, x0)), A);
      const auto a_img = big.sub(A, big.mul(big.from_int(5), t));
      const auto b_img = big.sub(B, big.mul(big.from_int(7), big.mul(x0, t)));
      const auto four_a3 = big.mul(big.from_int(4), big.mul(a_img, big.mul(a_img, a_img)));
      const auto denom = big.add(four_a3, big.mul(big.from_int(27), big.mul(b_img, b_img)));
      const auto j_img = big.mul(big.mul(big.from_int(1728), four_a3), big.inv(denom));
      const auto j_small = emb.down(j_img);
      if (!j_small)
        throw Error(ErrorCode::NonSupersingularRoot, "2-isogenous j-invariant is not in F_p^2 (vertex " +
                                                         std::to_string(i) + ")");
      const auto idx = basis.index_of(*j_small);
      if (!idx)
        throw Error(ErrorCode::NonSupersingularRoot, "2-isogenous j-invariant is not a vertex (vertex " +
                                                         std::to_string(i) + ")");
      m.at(i, *idx) += 1;
    }
  }
  return m;
}

}  // namespace ssmod::ssgraph
