#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "ssmod/errors.hpp"
#include "ssmod/modpoly.hpp"
#include "ssmod/ssgraph.hpp"

using namespace ssmod;
using modpoly::BigInt;

namespace {

// Truncated Laurent series sum c[k] q^(val + k), exact for exponents < prec.
struct Laurent {
  int val = 0;
  int prec = 0;
  std::vector<BigInt> c;
};

Laurent mul(const Laurent& a, const Laurent& b) {
  Laurent out;
  out.val = a.val + b.val;
  out.prec = std::min(a.prec + b.val, b.prec + a.val);
  out.c.assign(static_cast<std::size_t>(std::max(0, out.prec - out.val)), BigInt(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t k = 0; k < b.c.size() && i + k < out.c.size(); ++k) out.c[i + k] += a.c[i] * b.c[k];
  }
  return out;
}

void add_scaled(Laurent& acc, const Laurent& t, const BigInt& s) {
  const int val = std::min(acc.val, t.val);
  const int prec = std::min(acc.prec, t.prec);
  std::vector<BigInt> c(static_cast<std::size_t>(prec - val), BigInt(0));
  for (std::size_t i = 0; i < acc.c.size(); ++i)
    if (acc.val + static_cast<int>(i) < prec) c[acc.val - val + i] += acc.c[i];
  for (std::size_t i = 0; i < t.c.size(); ++i)
    if (t.val + static_cast<int>(i) < prec) c[t.val - val + i] += s * t.c[i];
  acc = {val, prec, std::move(c)};
}

// j(q) = E4^3 / Delta to absolute precision prec.
Laurent j_series(int prec) {
  const int n = prec + 1;  // power series terms needed before dividing by q
  std::vector<BigInt> e4(n, BigInt(0)), eta24(n, BigInt(0));
  e4[0] = 1;
  for (int m = 1; m < n; ++m) {
    BigInt sigma3 = 0;
    for (int d = 1; d <= m; ++d)
      if (m % d == 0) sigma3 += BigInt(d) * d * d;
    e4[m] = 240 * sigma3;
  }
  eta24[0] = 1;
  for (int m = 1; m < n; ++m)
    for (int r = 0; r < 24; ++r)
      for (int k = n - 1; k >= m; --k) eta24[k] -= eta24[k - m];
  auto cube = [&](const std::vector<BigInt>& f) {
    std::vector<BigInt> sq(n, BigInt(0)), cu(n, BigInt(0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; i + k < n; ++k) sq[i + k] += f[i] * f[k];
    for (int i = 0; i < n; ++i)
      for (int k = 0; i + k < n; ++k) cu[i + k] += sq[i] * f[k];
    return cu;
  };
  const auto num = cube(e4);
  std::vector<BigInt> quo(n, BigInt(0));
  for (int k = 0; k < n; ++k) {
    BigInt s = num[k];
    for (int i = 1; i <= k; ++i) s -= eta24[i] * quo[k - i];
    quo[k] = s;  // eta24[0] == 1
  }
  return {-1, prec, quo};
}

// f(q^l), cut back to the precision of f itself.
Laurent substitute_power(const Laurent& f, int ell) {
  Laurent out;
  out.val = f.val * ell;
  out.prec = f.prec;
  out.c.assign(static_cast<std::size_t>(out.prec - out.val), BigInt(0));
  for (std::size_t i = 0; i * ell < out.c.size() && i < f.c.size(); ++i) out.c[i * ell] = f.c[i];
  return out;
}

// Phi_l(j(q), j(q^l)) must vanish identically; returns the range of
// exponents actually checked (lowest, first unchecked).
std::pair<int, int> check_q_expansion(const modpoly::ModularPolynomial& phi, int prec) {
  const unsigned l = phi.ell;
  const auto j1 = j_series(prec);
  const auto j2 = substitute_power(j1, static_cast<int>(l));
  std::vector<Laurent> p1{{0, 1 << 20, {BigInt(1)}}}, p2{{0, 1 << 20, {BigInt(1)}}};
  for (unsigned i = 1; i <= l + 1; ++i) {
    p1.push_back(mul(p1.back(), j1));
    p2.push_back(mul(p2.back(), j2));
  }
  Laurent acc{0, 1 << 20, {}};
  for (unsigned i = 0; i <= l + 1; ++i)
    for (unsigned k = 0; k <= l + 1; ++k) {
      const auto c = phi.coefficient(i, k);
      if (c != 0) add_scaled(acc, mul(p1[i], p2[k]), c);
    }
  for (const auto& x : acc.c) CHECK(x == 0);
  return {acc.val, acc.prec};
}

std::string serialize(unsigned ell, const std::vector<std::tuple<unsigned, unsigned, BigInt>>& rows,
                      std::optional<std::uint64_t> checksum = std::nullopt) {
  std::ostringstream out;
  out << "MODPOLY v1 ell=" << ell << "\n";
  std::uint64_t sum = 0;
  for (const auto& [i, j, c] : rows) {
    out << i << " " << j << " " << c << "\n";
    sum = (sum + modpoly::checksum_term(i, j, c)) % modpoly::kChecksumModulus;
  }
  out << "CHECKSUM " << checksum.value_or(sum) << "\n";
  return out.str();
}

std::vector<std::tuple<unsigned, unsigned, BigInt>> phi2_rows() {
  return {{3, 0, BigInt(1)},          {2, 2, BigInt(-1)},          {2, 1, BigInt(1488)},
          {2, 0, BigInt(-162000)},    {1, 1, BigInt(40773375)},    {1, 0, BigInt(8748000000LL)},
          {0, 0, BigInt("-157464000000000")}};
}

ErrorCode load_error(unsigned ell, const std::string& text) {
  std::istringstream in(text);
  try {
    modpoly::load_modular_polynomial(ell, in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("loaded without error");
  return ErrorCode::IOError;
}

}  // namespace

TEST_CASE("Phi_2 matches the closed form") {
  const auto& phi = modpoly::shipped(2);
  CHECK(phi.coefficient(3, 0) == 1);
  CHECK(phi.coefficient(0, 3) == 1);
  CHECK(phi.coefficient(2, 2) == -1);
  CHECK(phi.coefficient(2, 1) == 1488);
  CHECK(phi.coefficient(1, 2) == 1488);
  CHECK(phi.coefficient(2, 0) == -162000);
  CHECK(phi.coefficient(1, 1) == 40773375);
  CHECK(phi.coefficient(1, 0) == 8748000000LL);
  CHECK(phi.coefficient(0, 0) == BigInt("-157464000000000"));
  CHECK(phi.coefficient(3, 1) == 0);
  CHECK(phi.degree_x() == 3);
}

TEST_CASE("shipped polynomials vanish on (j(q), j(q^l))") {
  for (unsigned ell : {2u, 3u, 5u, 7u}) {
    CAPTURE(ell);
    const int prec = static_cast<int>(ell * (ell + 1) + 2 * (ell + 1) + 20);
    const auto [lo, hi] = check_q_expansion(modpoly::shipped(ell), prec);
    CHECK(lo <= -static_cast<int>(ell * (ell + 1)));
    CHECK(hi >= 10);
  }
}

TEST_CASE("large shipped polynomials vanish on (j(q), j(q^l))") {
  for (unsigned ell : {11u, 13u}) {
    CAPTURE(ell);
    const int prec = static_cast<int>(ell * (ell + 1) + 2 * (ell + 1) + 10);
    const auto [lo, hi] = check_q_expansion(modpoly::shipped(ell), prec);
    CHECK(lo <= -static_cast<int>(ell * (ell + 1)));
    CHECK(hi >= 5);
  }
}

TEST_CASE("structural shape of every shipped polynomial") {
  for (unsigned ell : modpoly::kSupportedEll) {
    CAPTURE(ell);
    const auto& phi = modpoly::shipped(ell);
    CHECK(phi.degree_x() == ell + 1);
    CHECK(phi.coefficient(ell + 1, 0) == 1);
    CHECK(phi.coefficient(ell, ell) == -1);
    // Kronecker: Phi_l = (X^l - Y)(X - Y^l) mod l.
    for (unsigned i = 0; i <= ell + 1; ++i)
      for (unsigned j = 0; j <= ell + 1; ++j) {
        BigInt expect = 0;
        if ((i == ell + 1 && j == 0) || (i == 0 && j == ell + 1)) expect = 1;
        if ((i == ell && j == ell) || (i == 1 && j == 1)) expect = -1;
        BigInt diff = (phi.coefficient(i, j) - expect) % ell;
        CHECK(diff == 0);
      }
  }
}

TEST_CASE("shipped checksum key is stable") {
  const auto a = modpoly::shipped_checksum_key();
  CHECK(a == modpoly::shipped_checksum_key());
  CHECK(a.find("2:1151328032973") == 0);
}

TEST_CASE("loader accepts a well-formed file and its mirrored spelling") {
  std::istringstream in(serialize(2, phi2_rows()));
  const auto phi = modpoly::load_modular_polynomial(2, in);
  CHECK(phi.coefficient(2, 1) == 1488);

  auto rows = phi2_rows();
  rows.emplace_back(1, 2, BigInt(1488));
  std::istringstream in2(serialize(2, rows));
  CHECK(modpoly::load_modular_polynomial(2, in2).coefficient(1, 2) == 1488);
}

TEST_CASE("loader rejects malformed files") {
  CHECK(load_error(2, "") == ErrorCode::ParseError);
  CHECK(load_error(2, "MODPOLY v2 ell=2\nCHECKSUM 0\n") == ErrorCode::ParseError);
  CHECK(load_error(3, serialize(2, phi2_rows())) == ErrorCode::ParseError);

  std::string good = serialize(2, phi2_rows());
  CHECK(load_error(2, good.substr(0, good.find("CHECKSUM"))) == ErrorCode::ParseError);
  CHECK(load_error(2, serialize(2, phi2_rows(), 12345)) == ErrorCode::ParseError);

  auto garbage = phi2_rows();
  std::string text = serialize(2, garbage);
  text.insert(text.find("CHECKSUM"), "1 0 12x\n");
  CHECK(load_error(2, text) == ErrorCode::ParseError);

  auto dup = phi2_rows();
  dup.emplace_back(2, 1, BigInt(1488));
  CHECK(load_error(2, serialize(2, dup)) == ErrorCode::ParseError);

  auto asym = phi2_rows();
  asym.emplace_back(1, 2, BigInt(1489));
  CHECK(load_error(2, serialize(2, asym)) == ErrorCode::SymmetryViolation);

  auto extra_degree = phi2_rows();
  extra_degree.emplace_back(4, 0, BigInt(2));
  CHECK(load_error(2, serialize(2, extra_degree)) == ErrorCode::DegreeMismatch);

  auto not_monic = phi2_rows();
  std::get<2>(not_monic[0]) = 3;
  CHECK(load_error(2, serialize(2, not_monic)) == ErrorCode::DegreeMismatch);

  auto mixed_top = phi2_rows();
  mixed_top.emplace_back(3, 1, BigInt(2));
  CHECK(load_error(2, serialize(2, mixed_top)) == ErrorCode::DegreeMismatch);

  auto kronecker = phi2_rows();
  std::get<2>(kronecker[2]) = 1489;  // X^2 Y: 1488 is even, 1489 is not
  CHECK(load_error(2, serialize(2, kronecker)) == ErrorCode::KroneckerViolation);
}

TEST_CASE("reduction mod p") {
  const auto& phi = modpoly::shipped(3);
  try {
    modpoly::reduce_mod_p(phi, 3);
    FAIL("expected EllEqualsP");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EllEqualsP);
  }
  const auto r = modpoly::reduce_mod_p(modpoly::shipped(2), 11);
  REQUIRE(r.coeffs.size() == 4);
  CHECK(r.coeffs[2][1] == 1488 % 11);
  CHECK(r.coeffs[1][2] == 1488 % 11);
  CHECK(r.coeffs[0][0] == static_cast<std::uint64_t>((BigInt("-157464000000000") % 11 + 11) % 11));
}

TEST_CASE("specialization at a supersingular j is monic and splits over F_p^2") {
  for (std::uint64_t p : {11, 23, 37}) {
    const auto basis = ssgraph::enumerate_basis(p);
    for (unsigned ell : modpoly::kSupportedEll) {
      if (ell == p) continue;
      const auto rphi = modpoly::reduce_mod_p(modpoly::shipped(ell), p);
      for (const auto j : basis.vertices) {
        const auto f = modpoly::specialize(rphi, basis.ctx, j);
        REQUIRE(f.size() == ell + 2);
        CHECK(f.back() == basis.ctx.one());
        unsigned total = 0;
        for (const auto& r : poly::roots_with_multiplicity(basis.ctx, f)) {
          total += r.multiplicity;
          CHECK(basis.index_of(r.root).has_value());
        }
        CHECK(total == ell + 1);
      }
    }
  }
}
