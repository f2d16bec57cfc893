#include "ssmod/watkins.hpp"

#include <sstream>

#include "ssmod/errors.hpp"

namespace ssmod::watkins {

namespace {

bool is_even(std::int64_t x) { return x % 2 == 0; }

BigInt mod_pos(const BigInt& v, int m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

Verdict combine(std::vector<Leg> legs, std::string pass_reason) {
  Verdict v;
  v.status = Status::Pass;
  v.reason = std::move(pass_reason);
  bool any_applicable = false;
  for (const auto& leg : legs) {
    if (leg.status == Status::Fail && v.status != Status::Fail) {
      v.status = Status::Fail;
      v.reason = leg.name + ": " + leg.note;
    }
    any_applicable = any_applicable || leg.status != Status::NotApplicable;
  }
  if (!any_applicable) {
    v.status = Status::NotApplicable;
    v.reason = "no applicable leg";
  }
  v.legs = std::move(legs);
  return v;
}

std::optional<BigInt> degree_or_none(const CheckInputs& in) {
  try {
    return modular_degree(in.v, in.basis, in.torsion);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::int64_t> fixed_values(const CheckInputs& in) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < in.basis.size(); ++i)
    if (in.basis.is_frobenius_fixed(i)) out.push_back(in.v[i]);
  return out;
}

std::string parity_list(const std::vector<std::int64_t>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += is_even(values[i]) ? "even" : "odd";
  }
  return s + "]";
}

std::string str(const BigInt& x) { return x.str(); }

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

std::string to_string(FrobeniusSign s) {
  switch (s) {
    case FrobeniusSign::Plus: return "+1";
    case FrobeniusSign::Minus: return "-1";
    case FrobeniusSign::Mixed: return "mixed";
    case FrobeniusSign::Degenerate: return "degenerate";
  }
  return "?";
}

std::string to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Pass: return "PASS";
    case ReportStatus::Fail: return "FAIL";
    case ReportStatus::Invalid: return "INVALID";
  }
  return "?";
}

BigInt modular_degree(const ModuleVector& v, const SupersingularBasis& basis, unsigned t) {
  if (t == 0) throw Error(ErrorCode::NonDivisibleNorm, "torsion order 0");
  const BigInt nv = eigenmod::norm(v, basis);
  if (nv % t != 0)
    throw Error(ErrorCode::NonDivisibleNorm, "<v,v> = " + str(nv) + " is not divisible by t = " + std::to_string(t));
  return nv / t;
}

std::int64_t m4(const ModuleVector& v, const SupersingularBasis& basis) {
  const auto k = basis.weight_two_index();
  if (!k) throw Error(ErrorCode::NoWeightTwoVertex, "p = " + std::to_string(basis.p()) + " has no vertex of weight 2");
  if (v.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from n");
  return v[*k];
}

Verdict check_zero_sum(const ModuleVector& v) {
  BigInt s = 0;
  for (auto x : v.coords) s += x;
  if (s == 0) return Verdict::pass("sum = 0");
  return Verdict::fail("sum = " + str(s));
}

Verdict check_w_parity(const SupersingularBasis& basis) {
  const auto r = basis.p() % 12;
  std::size_t even = 0, twos = 0;
  for (int w : basis.weights) {
    if (w % 2 == 0) ++even;
    if (w == 2) ++twos;
  }
  if (r == 1 || r == 5) {
    if (even == 0) return Verdict::pass("all weights odd");
    return Verdict::fail(std::to_string(even) + " even weights for p = " + std::to_string(r) + " mod 12");
  }
  if (even == 1 && twos == 1) return Verdict::pass("exactly one weight equals 2");
  return Verdict::fail(std::to_string(even) + " even weights for p = " + std::to_string(r) + " mod 12");
}

BigInt gross_kudla_sum(const ModuleVector& v, const SupersingularBasis& basis) {
  if (v.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from n");
  BigInt s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const BigInt x = v[i];
    s += BigInt(basis.weights[i] * basis.weights[i]) * x * x * x;
  }
  return s;
}

FrobeniusSign frobenius_sign(const ModuleVector& v, const SupersingularBasis& basis) {
  bool plus = true, minus = true, pairs = false, all_zero = true;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::size_t j = basis.bar[i];
    if (v[j] != v[i]) plus = false;
    if (v[j] != -v[i]) minus = false;
    if (j != i) {
      pairs = true;
      if (v[i] != 0) all_zero = false;
    }
  }
  if (!pairs) return FrobeniusSign::Plus;
  if (all_zero) return FrobeniusSign::Degenerate;
  if (plus) return FrobeniusSign::Plus;
  if (minus) return FrobeniusSign::Minus;
  return FrobeniusSign::Mixed;
}

bool frobenius_abs_symmetric(const ModuleVector& v, const SupersingularBasis& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (std::abs(v[basis.bar[i]]) != std::abs(v[i])) return false;
  return true;
}

Verdict theorem1_check(const CheckInputs& in) {
  std::vector<Leg> legs;
  const BigInt nv = eigenmod::norm(in.v, in.basis);
  const auto r = in.basis.p() % 12;
  if (r == 1 || r == 5) {
    const bool ok = mod_pos(nv, 2) == 0;
    legs.push_back({"norm_even", ok ? Status::Pass : Status::Fail, "<v,v> = " + str(nv)});
  } else {
    const std::int64_t vk = m4(in.v, in.basis);
    const bool ok = mod_pos(nv - vk, 2) == 0;
    legs.push_back({"norm_matches_v_ek_mod_2", ok ? Status::Pass : Status::Fail,
                    "<v,v> = " + str(nv) + ", v(e_k) = " + std::to_string(vk)});
  }
  const auto m = degree_or_none(in);
  if (!m) {
    legs.push_back({"odd_degree_rank_zero", Status::Fail, "t does not divide <v,v>"});
  } else if (mod_pos(*m, 2) == 0) {
    legs.push_back({"odd_degree_rank_zero", Status::NotApplicable, "m_E = " + str(*m) + " is even"});
  } else {
    std::string why;
    if (in.l_zero) why += "L(E,1) numerically zero; ";
    if (in.root_number != 1) why += "root number " + std::to_string(in.root_number) + "; ";
    if (in.rank && *in.rank != 0) why += "rank " + std::to_string(*in.rank) + "; ";
    if (why.empty())
      legs.push_back({"odd_degree_rank_zero", Status::Pass, "m_E = " + str(*m) + ", L(E,1) != 0, root number +1"});
    else
      legs.push_back({"odd_degree_rank_zero", Status::Fail, "m_E = " + str(*m) + " odd but " + why.substr(0, why.size() - 2)});
  }
  return combine(std::move(legs), "parity chain holds");
}

Verdict gw_vanishing_check(const CheckInputs& in) {
  if (in.basis.p() % 4 != 3) return Verdict::not_applicable("p = 1 mod 4");
  if (!in.twist_l_zero) return Verdict::not_applicable("twisted L-value unavailable");
  const std::int64_t vk = m4(in.v, in.basis);
  const bool lhs = in.l_zero || *in.twist_l_zero;
  const std::string detail = "m4 = " + std::to_string(vk) + ", L(E,1) " + (in.l_zero ? "zero" : "nonzero") +
                             ", L(E x chi_-4,1) " + (*in.twist_l_zero ? "zero" : "nonzero");
  if (lhs == (vk == 0)) return Verdict::pass(detail);
  return Verdict::fail(detail);
}

Verdict theorem2_check(const CheckInputs& in) {
  if (!in.rank) return Verdict::not_applicable("rank metadata absent");
  if (*in.rank <= 0) return Verdict::not_applicable("rank 0");
  std::vector<Leg> legs;
  const auto m = degree_or_none(in);
  BigInt sum_sq = 0;
  for (auto x : in.v.coords) sum_sq += BigInt(x) * x;
  if (!m) {
    legs.push_back({"congruence_mod_4", Status::Fail, "t does not divide <v,v>"});
  } else {
    const bool ok = mod_pos(*m - sum_sq, 4) == 0;
    legs.push_back({"congruence_mod_4", ok ? Status::Pass : Status::Fail,
                    "m_E = " + str(*m) + ", sum v_i^2 = " + str(sum_sq)});
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < in.basis.size(); ++i)
      if (in.basis.weights[i] != 1 && in.v[i] != 0) bad += " " + std::to_string(i);
    legs.push_back({"vanishes_where_w_ne_1", bad.empty() ? Status::Pass : Status::Fail,
                    bad.empty() ? "v = 0 on every vertex with w != 1" : "nonzero at vertices" + bad});
  }
  const auto fixed = fixed_values(in);
  const bool hypothesis = std::all_of(fixed.begin(), fixed.end(), is_even);
  const auto sigma = frobenius_sign(in.v, in.basis);
  std::string gate;
  if (!hypothesis) gate = "some Frobenius-fixed entry is odd";
  else if (sigma == FrobeniusSign::Minus) gate = "sigma_E = -1 (v(e_i) = -v(e_ibar))";
  else if (sigma == FrobeniusSign::Mixed) gate = "Frobenius sign mixed";
  if (!gate.empty()) {
    legs.push_back({"four_divides_m", Status::NotApplicable, gate});
    legs.push_back({"odd_pairs_even", Status::NotApplicable, gate});
  } else {
    if (m) {
      const bool ok = mod_pos(*m, 4) == 0;
      legs.push_back({"four_divides_m", ok ? Status::Pass : Status::Fail, "m_E = " + str(*m)});
    }
    std::size_t odd_pairs = 0;
    for (std::size_t i = 0; i < in.basis.size(); ++i)
      if (in.basis.bar[i] > i && !is_even(in.v[i])) ++odd_pairs;
    legs.push_back({"odd_pairs_even", odd_pairs % 2 == 0 ? Status::Pass : Status::Fail,
                    std::to_string(odd_pairs) + " conjugate pairs with odd entries"});
  }
  return combine(std::move(legs), "all applicable legs hold");
}

Verdict conjecture1_check(const CheckInputs& in) {
  const auto fixed = fixed_values(in);
  const std::string parities = "fixed-vertex parities " + parity_list(fixed);
  if (!in.rank) return Verdict::not_applicable("rank metadata absent; " + parities);
  if (in.root_number != 1 || *in.rank <= 0)
    return Verdict::not_applicable("needs root number +1 and rank > 0; " + parities);
  if (std::all_of(fixed.begin(), fixed.end(), is_even)) return Verdict::pass(parities);
  return Verdict::fail(parities);
}

Verdict torsion_check(const CheckInputs& in) {
  const std::uint64_t p = in.basis.p();
  if (in.torsion == 1) return Verdict::pass("t = 1");
  if (in.rank && *in.rank > 0) return Verdict::fail("t = " + std::to_string(in.torsion) + " with rank > 0");
  if (p == 11 || p == 17 || p == 19 || p == 37) return Verdict::pass("t = " + std::to_string(in.torsion) + ", exceptional level");
  if (in.torsion == 2 && p > 64) {
    const auto u = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(p - 64))));
    if (u * u == p - 64) return Verdict::pass("t = 2, p = " + std::to_string(u) + "^2 + 64");
  }
  return Verdict::fail("t = " + std::to_string(in.torsion) + " at p = " + std::to_string(p));
}

Verdict rank_vanishing_check(const CheckInputs& in) {
  if (!in.rank) return Verdict::not_applicable("rank metadata absent");
  if (*in.rank <= 0) return Verdict::not_applicable("rank 0");
  if (in.l_zero) return Verdict::pass("L(E,1) numerically zero");
  return Verdict::fail("rank " + std::to_string(*in.rank) + " but L(E,1) is not numerically zero");
}

Verdict gross_kudla_check(const CheckInputs& in) {
  const BigInt s = gross_kudla_sum(in.v, in.basis);
  if (!in.l_zero) return Verdict::not_applicable("L(E,1) nonzero; sum = " + str(s));
  if (s == 0) return Verdict::pass("sum = 0");
  return Verdict::fail("L(E,1) numerically zero but sum = " + str(s));
}

namespace {

LSummary summarize(const curve::LValue& l) {
  return {l.value,       l.numerically_zero, l.exact_zero, l.tail_bound, l.terms, l.root_number,
          static_cast<std::uint64_t>(l.conductor)};
}

}  // namespace

VerificationReport assemble_report(const ReportInputs& in) {
  VerificationReport r;
  r.label = in.label;
  r.coefficients = in.curve.a;
  r.p = in.curve.conductor;
  r.rank = in.rank;
  r.tol = in.options.tol;
  r.zero_threshold = in.options.zero_threshold;
  r.n = in.basis.size();
  r.v = in.extraction.v;
  r.ells_used = in.extraction.ells_used;
  r.torsion = in.torsion;
  r.a_p = curve::a_p_at_conductor(in.curve);
  r.l_value = summarize(in.l_value);
  if (in.l_twist) r.l_twist = summarize(*in.l_twist);

  const ModuleVector& v = in.extraction.v;
  r.norm = eigenmod::norm(v, in.basis);
  r.gross_kudla = gross_kudla_sum(v, in.basis);
  r.sigma = frobenius_sign(v, in.basis);
  for (std::size_t i = 0; i < in.basis.size(); ++i)
    if (in.basis.is_frobenius_fixed(i)) r.fixed_entries.emplace_back(i, v[i]);
  if (in.basis.weight_two_index()) r.m4 = m4(v, in.basis);

  const CheckInputs ci{in.basis,
                       v,
                       in.torsion,
                       in.l_value.root_number,
                       in.l_value.numerically_zero,
                       in.l_twist ? std::optional<bool>(in.l_twist->numerically_zero) : std::nullopt,
                       in.rank};

  Verdict degree;
  try {
    r.modular_degree = modular_degree(v, in.basis, in.torsion);
    degree = Verdict::pass("<v,v> = " + str(*r.norm) + " = m_E * t");
  } catch (const Error& e) {
    degree = Verdict::fail(e.what());
  }

  r.checks = {
      {"mestre_degree", degree},
      {"zero_sum", check_zero_sum(v)},
      {"w_parity", check_w_parity(in.basis)},
      {"torsion", torsion_check(ci)},
      {"rank_vanishing", rank_vanishing_check(ci)},
      {"gross_kudla", gross_kudla_check(ci)},
      {"theorem1", theorem1_check(ci)},
      {"gw_vanishing", gw_vanishing_check(ci)},
      {"theorem2", theorem2_check(ci)},
      {"conjecture1", conjecture1_check(ci)},
  };

  std::string invalid;
  if (*r.sigma == FrobeniusSign::Mixed) invalid = "Frobenius sign of v_E is mixed";
  if (!frobenius_abs_symmetric(v, in.basis)) invalid = "|v(e_ibar)| != |v(e_i)| for some i";
  if (!invalid.empty()) {
    r.status = ReportStatus::Invalid;
    r.invalid_reason = invalid;
    return r;
  }
  r.status = ReportStatus::Pass;
  for (const auto& c : r.checks)
    if (c.verdict.status == Status::Fail) r.status = ReportStatus::Fail;
  return r;
}

VerificationReport invalid_report(std::string label, const std::array<BigInt, 5>& coefficients, std::uint64_t p,
                                  std::optional<int> rank, std::string reason) {
  VerificationReport r;
  r.label = std::move(label);
  r.coefficients = coefficients;
  r.p = p;
  r.rank = rank;
  r.status = ReportStatus::Invalid;
  r.invalid_reason = std::move(reason);
  return r;
}

int exit_code(const VerificationReport& r) {
  switch (r.status) {
    case ReportStatus::Pass: return 0;
    case ReportStatus::Fail: return 2;
    case ReportStatus::Invalid: return 3;
  }
  return 3;
}

}  // namespace ssmod::watkins
