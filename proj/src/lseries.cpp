#include <cmath>
#include <numbers>

#include "ssmod/curve.hpp"
#include "ssmod/errors.hpp"

namespace ssmod::curve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kT1 = 1.1;
constexpr double kT2 = 1.3;

struct Attempt {
  RootNumberSolve solve;
  bool accepted = false;
};

Attempt attempt(const LSeriesCoefficients& c, double conductor, double tol) {
  const double s1 = partial_sum(c, conductor, kT1);
  const double s2 = partial_sum(c, conductor, kT2);
  const double s1i = partial_sum(c, conductor, 1.0 / kT1);
  const double s2i = partial_sum(c, conductor, 1.0 / kT2);
  Attempt a;
  a.solve.terms = c.bound;
  a.solve.raw = (s2 - s1) / (s1i - s2i);
  a.solve.epsilon = a.solve.raw >= 0 ? 1 : -1;
  a.solve.l_a = s1 + a.solve.epsilon * s1i;
  a.solve.l_b = s2 + a.solve.epsilon * s2i;
  a.accepted = std::isfinite(a.solve.raw) && std::abs(std::abs(a.solve.raw) - 1.0) < tol &&
               std::abs(a.solve.l_a - a.solve.l_b) < tol;
  return a;
}

}  // namespace

std::size_t default_terms(double conductor, double tol) {
  const double base = std::ceil(std::sqrt(conductor) / kTwoPi * std::log(10.0 / tol));
  const double m = std::max(static_cast<double>(kMinTerms), 3.0 * base);
  return static_cast<std::size_t>(std::min(m, static_cast<double>(kMaxTerms)));
}

double partial_sum(const LSeriesCoefficients& c, double conductor, double t) {
  const double q = std::exp(-kTwoPi * t / std::sqrt(conductor));
  double power = 1.0;
  double sum = 0.0;
  for (std::size_t n = 1; n <= c.bound; ++n) {
    power *= q;
    if (power == 0.0) break;
    if (c.a[n] != 0) sum += static_cast<double>(c.a[n]) / static_cast<double>(n) * power;
  }
  return sum;
}

double tail_bound(double conductor, std::size_t terms) {
  // |a_n| <= d(n) sqrt(n) <= 2n, so each omitted term of 2 S(1) is below 4 q^n.
  const double c = kTwoPi / std::sqrt(conductor);
  return 4.0 * std::exp(-c * static_cast<double>(terms + 1)) / (1.0 - std::exp(-c));
}

RootNumberSolve solve_root_number(const CoefficientSource& source, double conductor, double tol) {
  std::size_t terms = default_terms(conductor, tol);
  Attempt a = attempt(source(terms), conductor, tol);
  if (a.accepted) return a.solve;
  terms = std::min<std::size_t>(2 * terms, kMaxTerms);
  a = attempt(source(terms), conductor, tol);
  if (a.accepted) return a.solve;
  throw Error(ErrorCode::Inconclusive, "root number solve did not settle (raw " + std::to_string(a.solve.raw) +
                                           ", residual " + std::to_string(std::abs(a.solve.l_a - a.solve.l_b)) +
                                           ")");
}

int root_number(const WeierstrassCurve& e, double tol) {
  const auto source = [&](std::size_t m) { return an_coefficients(e, m); };
  return solve_root_number(source, static_cast<double>(e.conductor), tol).epsilon;
}

namespace {

LValue evaluate(const CoefficientSource& source, double conductor, const LOptions& opts) {
  if (!(opts.tol > 0) || !(opts.zero_threshold > 0))
    throw Error(ErrorCode::ParseError, "tolerances must be positive");
  const RootNumberSolve solve = solve_root_number(source, conductor, opts.tol);
  LValue out;
  out.root_number = solve.epsilon;
  out.conductor = conductor;
  out.terms = solve.terms;
  out.tail_bound = tail_bound(conductor, solve.terms);
  if (solve.epsilon == -1) {
    out.value = 0.0;
    out.exact_zero = true;
    out.numerically_zero = true;
    return out;
  }
  out.value = 2.0 * partial_sum(source(solve.terms), conductor, 1.0);
  out.numerically_zero = std::abs(out.value) < opts.zero_threshold;
  return out;
}

}  // namespace

LValue l_value(const WeierstrassCurve& e, const LOptions& opts) {
  return evaluate([&](std::size_t m) { return an_coefficients(e, m); }, static_cast<double>(e.conductor), opts);
}

LValue l_value_twist_neg4(const WeierstrassCurve& e, const LOptions& opts) {
  if (e.conductor % 4 != 3)
    throw Error(ErrorCode::WrongResidueClass, "twist by -4 requires p = 3 mod 4, got p = " + std::to_string(e.conductor));
  return evaluate([&](std::size_t m) { return twist_neg4_coefficients(e, m); },
                  static_cast<double>(twist_neg4_conductor(e)), opts);
}

}  // namespace ssmod::curve
