#pragma once

// Checks on v_E: Mestre's degree formula, m_4 = v_E(e_k), parity and
// vanishing statements, the Frobenius sign, and the per-curve report.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssmod/curve.hpp"
#include "ssmod/eigenmod.hpp"
#include "ssmod/ssgraph.hpp"

namespace ssmod::watkins {

using BigInt = boost::multiprecision::cpp_int;
using eigenmod::ModuleVector;
using ssgraph::SupersingularBasis;

enum class Status { Pass, Fail, NotApplicable };
std::string to_string(Status s);

struct Leg {
  std::string name;
  Status status = Status::NotApplicable;
  std::string note;
};

struct Verdict {
  Status status = Status::NotApplicable;
  std::string reason;
  std::vector<Leg> legs;

  static Verdict pass(std::string reason = {}) { return {Status::Pass, std::move(reason), {}}; }
  static Verdict fail(std::string reason) { return {Status::Fail, std::move(reason), {}}; }
  static Verdict not_applicable(std::string reason) { return {Status::NotApplicable, std::move(reason), {}}; }
};

// <v, v> / t (NonDivisibleNorm unless t divides it).
BigInt modular_degree(const ModuleVector& v, const SupersingularBasis& basis, unsigned t);

// v(e_k) at the weight-2 vertex (NoWeightTwoVertex when p = 1 mod 4).
std::int64_t m4(const ModuleVector& v, const SupersingularBasis& basis);

Verdict check_zero_sum(const ModuleVector& v);
Verdict check_w_parity(const SupersingularBasis& basis);

// sum_i w_i^2 v_i^3.
BigInt gross_kudla_sum(const ModuleVector& v, const SupersingularBasis& basis);

enum class FrobeniusSign { Plus, Minus, Mixed, Degenerate };
std::string to_string(FrobeniusSign s);

// Plus/Minus: v(e_ibar) = +-v(e_i) for all i. Degenerate: there are
// conjugate pairs but v vanishes on all of them (the sign is then not
// determined by v). Without conjugate pairs the sign is Plus. Mixed: none
// of these, an invariant violation.
FrobeniusSign frobenius_sign(const ModuleVector& v, const SupersingularBasis& basis);

// |v(e_ibar)| = |v(e_i)| for all i.
bool frobenius_abs_symmetric(const ModuleVector& v, const SupersingularBasis& basis);

struct CheckInputs {
  const SupersingularBasis& basis;
  ModuleVector v;
  unsigned torsion = 1;
  int root_number = 1;
  bool l_zero = false;                // L(E, 1) numerically zero
  std::optional<bool> twist_l_zero;   // L(E x chi_-4, 1) numerically zero (p = 3 mod 4)
  std::optional<int> rank;
};

// Odd modular degree forces rank 0, through the parity chain
// <v,v> even (p = 1, 5 mod 12), <v,v> = v(e_k) mod 2 (p = 7, 11 mod 12).
Verdict theorem1_check(const CheckInputs& in);
// (m_4 = 0) <=> (L(E,1) L(E x chi_-4,1) numerically zero); p = 3 mod 4 only.
Verdict gw_vanishing_check(const CheckInputs& in);
// For rank > 0: m_E = sum v_i^2 mod 4, v = 0 on vertices with w != 1, and
// under the evenness hypothesis 4 | m_E with an even number of
// conjugate pairs carrying odd entries.
Verdict theorem2_check(const CheckInputs& in);
// For root number +1 and rank > 0: every Frobenius-fixed entry is even.
Verdict conjecture1_check(const CheckInputs& in);
// Nontrivial torsion only for p in {11, 17, 19, 37} or t = 2, p = u^2 + 64;
// trivial torsion whenever rank > 0.
Verdict torsion_check(const CheckInputs& in);
// rank > 0 implies L(E, 1) numerically zero.
Verdict rank_vanishing_check(const CheckInputs& in);
// L(E, 1) numerically zero implies the Gross-Kudla sum is 0.
Verdict gross_kudla_check(const CheckInputs& in);

// ---------------------------------------------------------------------------
// Report

struct LSummary {
  double value = 0.0;
  bool numerically_zero = false;
  bool exact_zero = false;
  double tail_bound = 0.0;
  std::size_t terms = 0;
  int root_number = 0;
  std::uint64_t conductor = 0;
};

struct NamedVerdict {
  std::string name;
  Verdict verdict;
};

enum class ReportStatus { Pass, Fail, Invalid };
std::string to_string(ReportStatus s);

struct VerificationReport {
  std::string label;
  std::array<BigInt, 5> coefficients;
  std::uint64_t p = 0;
  std::optional<int> rank;
  double tol = curve::kDefaultTol;
  double zero_threshold = curve::kDefaultZeroThreshold;

  std::size_t n = 0;
  std::optional<ModuleVector> v;
  std::vector<unsigned> ells_used;
  std::optional<BigInt> norm;
  std::optional<unsigned> torsion;
  std::optional<BigInt> modular_degree;
  std::optional<int> a_p;
  std::optional<LSummary> l_value;
  std::optional<LSummary> l_twist;
  std::optional<std::int64_t> m4;
  std::optional<BigInt> gross_kudla;
  std::optional<FrobeniusSign> sigma;
  std::vector<std::pair<std::size_t, std::int64_t>> fixed_entries;  // (index, v_i) for i = ibar

  std::vector<NamedVerdict> checks;
  ReportStatus status = ReportStatus::Invalid;
  std::string invalid_reason;
};

struct ReportInputs {
  std::string label;
  const curve::WeierstrassCurve& curve;
  const SupersingularBasis& basis;
  eigenmod::Extraction extraction;
  unsigned torsion = 1;
  curve::LValue l_value;
  std::optional<curve::LValue> l_twist;
  std::optional<int> rank;
  curve::LOptions options;
};

// Computes every derived quantity and verdict. Invariant violations (mixed
// Frobenius sign, |v| not Frobenius-symmetric) mark the report Invalid.
VerificationReport assemble_report(const ReportInputs& in);

// A report that could not be completed; `reason` says why.
VerificationReport invalid_report(std::string label, const std::array<BigInt, 5>& coefficients, std::uint64_t p,
                                  std::optional<int> rank, std::string reason);

// 0 = every applicable check passes, 2 = some check failed, 3 = invalid.
int exit_code(const VerificationReport& r);

}  // namespace ssmod::watkins
