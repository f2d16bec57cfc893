#pragma once

// Rational elliptic curves of prime conductor: integral Weierstrass models,
// Frobenius traces by point counting, L-series coefficients, the torsion
// order and numerical special values L(E, 1), L(E x chi_-4, 1).

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ssmod::curve {

using BigInt = boost::multiprecision::cpp_int;

struct WeierstrassCurve {
  std::array<BigInt, 5> a;  // a1, a2, a3, a4, a6
  BigInt b2, b4, b6, b8;
  BigInt c4, c6;
  BigInt discriminant;
  std::uint64_t conductor = 0;  // the prime p with |discriminant| = p^k
  unsigned disc_exponent = 0;   // k

  const BigInt& a1() const { return a[0]; }
  const BigInt& a2() const { return a[1]; }
  const BigInt& a3() const { return a[2]; }
  const BigInt& a4() const { return a[3]; }
  const BigInt& a6() const { return a[4]; }
};

// Validates a globally minimal model with multiplicative reduction at a
// single prime. Errors: SingularCurve, NonMinimalModel, NonPrimeConductor,
// AdditiveReduction.
WeierstrassCurve parse_curve(const std::array<BigInt, 5>& coefficients);
// "a1,a2,a3,a4,a6" (ParseError on malformed text).
WeierstrassCurve parse_curve_literal(std::string_view literal);
std::array<BigInt, 5> parse_coefficients(std::string_view literal);

// Projective points on the model reduced mod the prime ell (singular
// reductions included, the singular point counted once).
std::int64_t count_points(const WeierstrassCurve& e, std::uint64_t ell);

// a_l = l + 1 - #E(F_l) for l != p (BadReductionPrime otherwise).
std::int64_t a_ell(const WeierstrassCurve& e, std::uint64_t ell);

// +1 for split, -1 for non-split multiplicative reduction at p.
int a_p_at_conductor(const WeierstrassCurve& e);

struct LSeriesCoefficients {
  std::size_t bound = 0;
  std::vector<std::int64_t> a;  // a[0] unused, a[n] for 1 <= n <= bound
};

LSeriesCoefficients an_coefficients(const WeierstrassCurve& e, std::size_t bound);

// Coefficients of the quadratic twist by -4 (equivalently by Q(i)):
// point counts on y^2 = 4x^3 - b2 x^2 + 2 b4 x - b6 at odd l, a_2 = 0.
LSeriesCoefficients twist_neg4_coefficients(const WeierstrassCurve& e, std::size_t bound);
std::uint64_t twist_neg4_conductor(const WeierstrassCurve& e);

// Exact |E(Q)_tors|.
unsigned torsion_order(const WeierstrassCurve& e);
// gcd of #E(F_l) over good l in {3, ..., 23}.
std::uint64_t torsion_bound(const WeierstrassCurve& e);
// Distinct integer roots (sorted) of a squarefree polynomial, little-endian.
std::vector<BigInt> integer_roots(std::vector<BigInt> f);

// ---------------------------------------------------------------------------
// L-values

inline constexpr double kDefaultTol = 1e-8;
inline constexpr double kDefaultZeroThreshold = 1e-6;
inline constexpr std::size_t kMinTerms = 1000;
inline constexpr std::size_t kMaxTerms = 10'000'000;

struct LOptions {
  double tol = kDefaultTol;
  double zero_threshold = kDefaultZeroThreshold;
};

// max(1000, 3 * ceil(sqrt(N)/(2 pi) * log(10/tol))), capped at 10^7.
std::size_t default_terms(double conductor, double tol);

// S(t) = sum_{n <= M} a_n / n * exp(-2 pi n t / sqrt(N)).
double partial_sum(const LSeriesCoefficients& c, double conductor, double t);

// Upper bound on the omitted tail of 2 * S(1) after `terms` terms.
double tail_bound(double conductor, std::size_t terms);

struct RootNumberSolve {
  int epsilon = 0;
  double raw = 0.0;   // unrounded solution of the two-point system
  double l_a = 0.0;   // S(1.1) + eps S(1/1.1)
  double l_b = 0.0;   // S(1.3) + eps S(1/1.3)
  std::size_t terms = 0;
};

using CoefficientSource = std::function<LSeriesCoefficients(std::size_t)>;

// Sign of the functional equation from L(1) = S(t) + eps S(1/t) at t = 1.1
// and t = 1.3; retries once with twice the terms, then Inconclusive.
RootNumberSolve solve_root_number(const CoefficientSource& source, double conductor, double tol);

int root_number(const WeierstrassCurve& e, double tol = kDefaultTol);

struct LValue {
  double value = 0.0;
  bool exact_zero = false;        // forced by root number -1
  bool numerically_zero = false;  // |value| below the zero threshold
  double tail_bound = 0.0;
  std::size_t terms = 0;
  int root_number = 0;
  double conductor = 0.0;
};

LValue l_value(const WeierstrassCurve& e, const LOptions& opts = {});
// Requires p = 3 mod 4 (WrongResidueClass otherwise).
LValue l_value_twist_neg4(const WeierstrassCurve& e, const LOptions& opts = {});

std::string to_string(const BigInt& v);

}  // namespace ssmod::curve
