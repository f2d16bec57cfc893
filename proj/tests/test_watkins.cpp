#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ssmod/curve.hpp"
#include "ssmod/eigenmod.hpp"
#include "ssmod/errors.hpp"
#include "ssmod/graph_cache.hpp"
#include "ssmod/watkins.hpp"

using namespace ssmod;
using eigenmod::ModuleVector;
using watkins::Status;

namespace {

const graph_cache::GraphData& graph(std::uint64_t p) {
  static std::map<std::uint64_t, graph_cache::GraphData> memo;
  auto it = memo.find(p);
  if (it == memo.end()) it = memo.emplace(p, graph_cache::build_graph(p)).first;
  return it->second;
}

watkins::CheckInputs inputs(const ssgraph::SupersingularBasis& basis, ModuleVector v, unsigned t, int eps,
                            bool l_zero, std::optional<bool> twist_zero, std::optional<int> rank) {
  return {basis, std::move(v), t, eps, l_zero, twist_zero, rank};
}

const watkins::Leg* leg(const watkins::Verdict& v, const std::string& name) {
  for (const auto& l : v.legs)
    if (l.name == name) return &l;
  return nullptr;
}

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IOError;
}

// Two distinct conjugate pairs (i, ibar), or none.
std::optional<std::pair<std::size_t, std::size_t>> two_pairs(const ssgraph::SupersingularBasis& b) {
  std::vector<std::size_t> firsts;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.bar[i] > i) firsts.push_back(i);
  if (firsts.size() < 2) return std::nullopt;
  return std::pair{firsts[0], firsts[1]};
}

watkins::VerificationReport report_for(const std::array<curve::BigInt, 5>& a, std::optional<int> rank,
                                       std::optional<ModuleVector> override_v = std::nullopt) {
  const auto e = curve::parse_curve(a);
  const auto& g = graph(e.conductor);
  auto x = eigenmod::extract_ve(g.basis, g.hecke, e);
  if (override_v) x.v = *override_v;
  std::optional<curve::LValue> tw;
  if (e.conductor % 4 == 3) tw = curve::l_value_twist_neg4(e);
  return watkins::assemble_report(
      {"test", e, g.basis, x, curve::torsion_order(e), curve::l_value(e), tw, rank, curve::LOptions{}});
}

}  // namespace

TEST_CASE("p = 11 quantities") {
  const auto& b = graph(11).basis;
  const ModuleVector v{{1, -1}};
  CHECK(watkins::modular_degree(v, b, 5) == 1);
  CHECK(watkins::m4(v, b) == -1);
  // sum w_i^2 v_i^3 = 9 * 1 + 4 * (-1)
  CHECK(watkins::gross_kudla_sum(v, b) == 5);
  CHECK(watkins::frobenius_sign(v, b) == watkins::FrobeniusSign::Plus);
  CHECK(watkins::check_zero_sum(v).status == Status::Pass);
  CHECK(watkins::check_zero_sum({{1, 1}}).status == Status::Fail);
  CHECK(watkins::check_w_parity(b).status == Status::Pass);
  CHECK(error_of([&] { watkins::modular_degree(v, b, 3); }) == ErrorCode::NonDivisibleNorm);

  const auto t1 = watkins::theorem1_check(inputs(b, v, 5, 1, false, false, 0));
  CHECK(t1.status == Status::Pass);
  REQUIRE(leg(t1, "norm_matches_v_ek_mod_2"));
  CHECK(leg(t1, "norm_matches_v_ek_mod_2")->status == Status::Pass);
  CHECK(leg(t1, "odd_degree_rank_zero")->status == Status::Pass);

  CHECK(watkins::gw_vanishing_check(inputs(b, v, 5, 1, false, false, 0)).status == Status::Pass);
  CHECK(watkins::gw_vanishing_check(inputs(b, v, 5, 1, false, true, 0)).status == Status::Fail);
  CHECK(watkins::gw_vanishing_check(inputs(b, v, 5, 1, false, std::nullopt, 0)).status == Status::NotApplicable);
}

TEST_CASE("odd modular degree with vanishing L-value fails the odd-degree check") {
  const auto& b = graph(11).basis;
  const auto bad = watkins::theorem1_check(inputs(b, {{1, -1}}, 5, 1, true, false, std::nullopt));
  CHECK(bad.status == Status::Fail);
  CHECK(leg(bad, "odd_degree_rank_zero")->status == Status::Fail);
  const auto eps = watkins::theorem1_check(inputs(b, {{1, -1}}, 5, -1, false, false, std::nullopt));
  CHECK(eps.status == Status::Fail);
  const auto rank = watkins::theorem1_check(inputs(b, {{1, -1}}, 5, 1, false, false, 1));
  CHECK(rank.status == Status::Fail);
}

TEST_CASE("p = 37: 37a and 37b") {
  const auto& b = graph(37).basis;
  const ModuleVector va{{1, -1, 0}}, vb{{1, 1, -2}};
  CHECK(watkins::modular_degree(va, b, 1) == 2);
  CHECK(watkins::modular_degree(vb, b, 3) == 2);
  CHECK(watkins::frobenius_sign(va, b) == watkins::FrobeniusSign::Minus);
  CHECK(watkins::frobenius_sign(vb, b) == watkins::FrobeniusSign::Plus);
  CHECK(watkins::gross_kudla_sum(va, b) == 0);
  CHECK(watkins::gross_kudla_sum(vb, b) == 1 + 1 - 8);
  CHECK(error_of([&] { watkins::m4(va, b); }) == ErrorCode::NoWeightTwoVertex);
  CHECK(watkins::gw_vanishing_check(inputs(b, va, 1, -1, true, true, 1)).status == Status::NotApplicable);

  const auto t2 = watkins::theorem2_check(inputs(b, va, 1, -1, true, std::nullopt, 1));
  CHECK(t2.status == Status::Pass);
  CHECK(leg(t2, "congruence_mod_4")->status == Status::Pass);
  CHECK(leg(t2, "vanishes_where_w_ne_1")->status == Status::Pass);
  CHECK(leg(t2, "four_divides_m")->status == Status::NotApplicable);
  CHECK(leg(t2, "odd_pairs_even")->status == Status::NotApplicable);
  CHECK(watkins::theorem2_check(inputs(b, va, 1, -1, true, std::nullopt, 0)).status == Status::NotApplicable);
  CHECK(watkins::theorem2_check(inputs(b, va, 1, -1, true, std::nullopt, std::nullopt)).status ==
        Status::NotApplicable);

  const auto t1 = watkins::theorem1_check(inputs(b, va, 1, -1, true, std::nullopt, 1));
  CHECK(leg(t1, "norm_even")->status == Status::Pass);
  CHECK(leg(t1, "odd_degree_rank_zero")->status == Status::NotApplicable);

  CHECK(watkins::gross_kudla_check(inputs(b, va, 1, -1, true, std::nullopt, 1)).status == Status::Pass);
  CHECK(watkins::gross_kudla_check(inputs(b, vb, 3, 1, true, std::nullopt, 1)).status == Status::Fail);
  CHECK(watkins::gross_kudla_check(inputs(b, vb, 3, 1, false, std::nullopt, 0)).status == Status::NotApplicable);
}

TEST_CASE("Frobenius sign classification") {
  for (std::uint64_t p : {389, 433, 1009}) {
    const auto& b = graph(p).basis;
    const auto pr = two_pairs(b);
    REQUIRE(pr);
    auto [i, k] = *pr;
    ModuleVector v{std::vector<std::int64_t>(b.size(), 0)};
    CHECK(watkins::frobenius_sign(v, b) == watkins::FrobeniusSign::Degenerate);
    for (std::size_t f = 0; f < b.size(); ++f)
      if (b.is_frobenius_fixed(f)) v.coords[f] = 3;
    CHECK(watkins::frobenius_sign(v, b) == watkins::FrobeniusSign::Degenerate);
    v.coords[i] = v.coords[b.bar[i]] = 2;
    CHECK(watkins::frobenius_sign(v, b) == watkins::FrobeniusSign::Plus);
    v.coords[k] = 5;
    v.coords[b.bar[k]] = -5;
    CHECK(watkins::frobenius_sign(v, b) == watkins::FrobeniusSign::Mixed);
    CHECK(watkins::frobenius_abs_symmetric(v, b));
    v.coords[k] = 4;
    CHECK_FALSE(watkins::frobenius_abs_symmetric(v, b));
  }
}

TEST_CASE("Frobenius-pairing check gating under sigma = +1") {
  const auto& b = graph(389).basis;
  const auto pr = two_pairs(b);
  REQUIRE(pr);
  // One conjugate pair of odd entries, the rest zero: the odd-pair count is 1.
  ModuleVector v{std::vector<std::int64_t>(b.size(), 0)};
  v.coords[pr->first] = v.coords[b.bar[pr->first]] = 1;
  v.coords[pr->second] = v.coords[b.bar[pr->second]] = -1;
  const auto both = watkins::theorem2_check(inputs(b, v, 1, 1, true, std::nullopt, 2));
  CHECK(leg(both, "odd_pairs_even")->status == Status::Pass);
  CHECK(leg(both, "four_divides_m")->status == Status::Pass);
  v.coords[pr->second] = v.coords[b.bar[pr->second]] = 0;
  const auto one = watkins::theorem2_check(inputs(b, v, 1, 1, true, std::nullopt, 2));
  CHECK(one.status == Status::Fail);
  CHECK(leg(one, "odd_pairs_even")->status == Status::Fail);
  CHECK(leg(one, "four_divides_m")->status == Status::Fail);  // m = 2
}

TEST_CASE("evenness check applicability") {
  const auto& b = graph(389).basis;
  ModuleVector v{std::vector<std::int64_t>(b.size(), 0)};
  std::size_t fixed = b.size();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.is_frobenius_fixed(i)) fixed = i;
  REQUIRE(fixed < b.size());
  v.coords[fixed] = 2;
  CHECK(watkins::conjecture1_check(inputs(b, v, 1, 1, true, std::nullopt, 2)).status == Status::Pass);
  v.coords[fixed] = 1;
  const auto odd = watkins::conjecture1_check(inputs(b, v, 1, 1, true, std::nullopt, 2));
  CHECK(odd.status == Status::Fail);
  CHECK(odd.reason.find("odd") != std::string::npos);
  CHECK(watkins::conjecture1_check(inputs(b, v, 1, -1, true, std::nullopt, 1)).status == Status::NotApplicable);
  CHECK(watkins::conjecture1_check(inputs(b, v, 1, 1, false, std::nullopt, 0)).status == Status::NotApplicable);
  CHECK(watkins::conjecture1_check(inputs(b, v, 1, 1, true, std::nullopt, std::nullopt)).status ==
        Status::NotApplicable);
}

TEST_CASE("torsion rule") {
  auto verdict = [](std::uint64_t p, unsigned t, std::optional<int> rank) {
    const auto& b = graph(p).basis;
    return watkins::torsion_check(inputs(b, {std::vector<std::int64_t>(b.size(), 0)}, t, 1, false, std::nullopt, rank))
        .status;
  };
  CHECK(verdict(11, 5, 0) == Status::Pass);
  CHECK(verdict(11, 5, 1) == Status::Fail);
  CHECK(verdict(17, 4, 0) == Status::Pass);
  CHECK(verdict(19, 3, 0) == Status::Pass);
  CHECK(verdict(37, 3, 0) == Status::Pass);
  CHECK(verdict(73, 2, 0) == Status::Pass);   // 73 = 3^2 + 64
  CHECK(verdict(89, 2, 0) == Status::Pass);   // 89 = 5^2 + 64
  CHECK(verdict(97, 2, 0) == Status::Fail);
  CHECK(verdict(73, 3, 0) == Status::Fail);
  CHECK(verdict(389, 1, 2) == Status::Pass);
}

TEST_CASE("weight parity by residue class") {
  for (std::uint64_t p : {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 389, 433}) {
    CAPTURE(p);
    CHECK(watkins::check_w_parity(graph(p).basis).status == Status::Pass);
  }
  auto tampered = graph(37).basis;
  tampered.weights[0] = 2;
  CHECK(watkins::check_w_parity(tampered).status == Status::Fail);
}

TEST_CASE("rank vanishing") {
  const auto& b = graph(37).basis;
  const ModuleVector v{{1, -1, 0}};
  CHECK(watkins::rank_vanishing_check(inputs(b, v, 1, -1, true, std::nullopt, 1)).status == Status::Pass);
  CHECK(watkins::rank_vanishing_check(inputs(b, v, 1, -1, false, std::nullopt, 1)).status == Status::Fail);
  CHECK(watkins::rank_vanishing_check(inputs(b, v, 1, -1, false, std::nullopt, 0)).status == Status::NotApplicable);
}

TEST_CASE("assembled reports") {
  const auto r11 = report_for({0, -1, 1, -10, -20}, 0);
  CHECK(r11.status == watkins::ReportStatus::Pass);
  CHECK(r11.modular_degree == 1);
  CHECK(r11.m4 == -1);
  CHECK(r11.gross_kudla == 5);
  CHECK(watkins::exit_code(r11) == 0);
  REQUIRE(r11.checks.size() == 10);
  CHECK(r11.checks.front().name == "mestre_degree");
  CHECK(r11.checks.back().name == "conjecture1");

  const auto wrong = report_for({0, -1, 1, -10, -20}, 1);
  CHECK(wrong.status == watkins::ReportStatus::Fail);
  CHECK(watkins::exit_code(wrong) == 2);

  const auto r37 = report_for({0, 0, 1, -1, 0}, 1);
  CHECK(r37.status == watkins::ReportStatus::Pass);
  CHECK(r37.sigma == watkins::FrobeniusSign::Minus);

  const auto r389 = report_for({0, 1, 1, -2, 0}, 2);
  CHECK(r389.status == watkins::ReportStatus::Pass);
  CHECK(r389.modular_degree == 40);
  CHECK(r389.gross_kudla == 0);

  // A v_E with mixed Frobenius sign cannot come from a curve: Invalid.
  const auto& b = graph(389).basis;
  const auto pr = two_pairs(b);
  REQUIRE(pr);
  ModuleVector mixed{std::vector<std::int64_t>(b.size(), 0)};
  mixed.coords[pr->first] = mixed.coords[b.bar[pr->first]] = 1;
  mixed.coords[pr->second] = 1;
  mixed.coords[b.bar[pr->second]] = -1;
  const auto inv = report_for({0, 1, 1, -2, 0}, 2, mixed);
  CHECK(inv.status == watkins::ReportStatus::Invalid);
  CHECK(watkins::exit_code(inv) == 3);
  CHECK(inv.invalid_reason.find("mixed") != std::string::npos);

  const auto blank = watkins::invalid_report("x", {0, 0, 0, 0, 0}, 11, std::nullopt, "why");
  CHECK(blank.status == watkins::ReportStatus::Invalid);
  CHECK(watkins::exit_code(blank) == 3);
}
