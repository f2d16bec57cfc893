#include "ssmod/report.hpp"

namespace ssmod::report {

using nlohmann::ordered_json;

ordered_json integer(const boost::multiprecision::cpp_int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

namespace {

ordered_json l_json(const watkins::LSummary& l, double threshold) {
  ordered_json j;
  j["value"] = l.value;
  j["numerically_zero"] = l.numerically_zero;
  j["exact_zero"] = l.exact_zero;
  j["zero_threshold"] = threshold;
  j["tail_bound"] = l.tail_bound;
  j["terms"] = l.terms;
  j["root_number"] = l.root_number;
  j["conductor"] = l.conductor;
  return j;
}

template <class T>
ordered_json optional(const std::optional<T>& x) {
  if (!x) return nullptr;
  return *x;
}

ordered_json optional_int(const std::optional<boost::multiprecision::cpp_int>& x) {
  if (!x) return nullptr;
  return integer(*x);
}

}  // namespace

ordered_json to_json(const watkins::VerificationReport& r) {
  ordered_json j;
  j["label"] = r.label;
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : r.coefficients) coeffs.push_back(integer(c));
  j["coefficients"] = coeffs;
  j["p"] = r.p;
  j["rank"] = optional(r.rank);
  j["status"] = watkins::to_string(r.status);
  if (r.status == watkins::ReportStatus::Invalid) j["invalid_reason"] = r.invalid_reason;
  if (!r.v) return j;

  j["n"] = r.n;
  j["v_E"] = r.v->coords;
  j["hecke_operators_used"] = r.ells_used;
  j["norm"] = optional_int(r.norm);
  j["t"] = optional(r.torsion);
  j["m_E"] = optional_int(r.modular_degree);
  j["m_E_parity"] = r.modular_degree ? ordered_json(*r.modular_degree % 2 == 0 ? "even" : "odd") : ordered_json();
  j["root_number"] = r.l_value ? ordered_json(r.l_value->root_number) : ordered_json();
  j["a_p"] = optional(r.a_p);
  j["root_number_matches_a_p"] = r.l_value && r.a_p ? ordered_json(r.l_value->root_number == *r.a_p) : ordered_json();
  j["L_E_1"] = r.l_value ? l_json(*r.l_value, r.zero_threshold) : ordered_json();
  j["L_twist_neg4_1"] = r.l_twist ? l_json(*r.l_twist, r.zero_threshold) : ordered_json();
  j["m4"] = optional(r.m4);
  j["gross_kudla_sum"] = optional_int(r.gross_kudla);
  j["sigma_E"] = r.sigma ? ordered_json(watkins::to_string(*r.sigma)) : ordered_json();
  ordered_json fixed = ordered_json::array();
  for (const auto& [i, x] : r.fixed_entries) fixed.push_back({{"index", i}, {"value", x}, {"even", x % 2 == 0}});
  j["frobenius_fixed_entries"] = fixed;
  j["tol"] = r.tol;

  ordered_json checks = ordered_json::object();
  for (const auto& [name, v] : r.checks) {
    ordered_json c;
    c["status"] = watkins::to_string(v.status);
    c["reason"] = v.reason;
    if (!v.legs.empty()) {
      ordered_json legs = ordered_json::array();
      for (const auto& leg : v.legs)
        legs.push_back({{"name", leg.name}, {"status", watkins::to_string(leg.status)}, {"note", leg.note}});
      c["legs"] = legs;
    }
    checks[name] = c;
  }
  j["checks"] = checks;
  return j;
}

ordered_json error_row(const std::string& label, std::size_t line, const Error& e) {
  ordered_json j;
  j["label"] = label;
  j["line"] = line;
  j["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  return j;
}

}  // namespace ssmod::report
