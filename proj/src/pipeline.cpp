#include "ssmod/pipeline.hpp"

#include <atomic>
#include <regex>
#include <thread>

#include "ssmod/eigenmod.hpp"
#include "ssmod/report.hpp"

namespace ssmod::pipeline {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

const std::regex& integer_re() {
  static const std::regex re(R"([-+]?\d+)");
  return re;
}

curve::BigInt parse_integer(const std::string& field, const char* name) {
  if (!std::regex_match(field, integer_re()))
    throw Error(ErrorCode::ParseError, std::string(name) + " is not an integer: \"" + field + "\"");
  return curve::BigInt(field[0] == '+' ? field.substr(1) : field);
}

}  // namespace

watkins::VerificationReport verify_curve(const CurveInput& input, const curve::LOptions& opts,
                                         graph_cache::GraphProvider& graphs) {
  if (!(opts.tol > 0) || !(opts.zero_threshold > 0))
    throw Error(ErrorCode::ParseError, "tolerances must be positive");
  const curve::WeierstrassCurve e = curve::parse_curve(input.coefficients);
  try {
    const auto graph = graphs.get(e.conductor);
    auto extraction = eigenmod::extract_ve(graph->basis, graph->hecke, e);
    const unsigned t = curve::torsion_order(e);
    const auto l = curve::l_value(e, opts);
    std::optional<curve::LValue> twist;
    if (e.conductor % 4 == 3) twist = curve::l_value_twist_neg4(e, opts);
    return watkins::assemble_report(
        {input.label, e, graph->basis, std::move(extraction), t, l, twist, input.rank, opts});
  } catch (const Error& err) {
    return watkins::invalid_report(input.label, input.coefficients, e.conductor, input.rank, err.what());
  }
}

std::vector<BatchRow> read_csv(std::istream& in) {
  std::vector<BatchRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      const std::vector<std::string> full{"label", "a1", "a2", "a3", "a4", "a6", "rank"};
      const std::vector<std::string> short_form(full.begin(), full.end() - 1);
      if (fields != full && fields != short_form)
        throw Error(ErrorCode::ParseError, "expected header label,a1,a2,a3,a4,a6,rank; got \"" + trim(line) + "\"");
      continue;
    }
    BatchRow row;
    row.line = line_no;
    row.label = fields.empty() ? "" : fields[0];
    try {
      if (fields.size() != 6 && fields.size() != 7)
        throw Error(ErrorCode::ParseError, "expected 6 or 7 fields, got " + std::to_string(fields.size()));
      CurveInput ci;
      ci.label = fields[0];
      static const char* names[] = {"a1", "a2", "a3", "a4", "a6"};
      for (int i = 0; i < 5; ++i) ci.coefficients[i] = parse_integer(fields[i + 1], names[i]);
      if (fields.size() == 7 && !fields[6].empty()) {
        const auto r = parse_integer(fields[6], "rank");
        if (r < 0 || r > 1000) throw Error(ErrorCode::ParseError, "rank out of range: " + fields[6]);
        ci.rank = r.convert_to<int>();
      }
      row.input = std::move(ci);
    } catch (const Error& e) {
      row.error = e;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

BatchSummary run_batch(const std::vector<BatchRow>& rows, std::ostream& out, const curve::LOptions& opts,
                       unsigned jobs, graph_cache::GraphProvider& graphs) {
  struct Outcome {
    nlohmann::ordered_json json;
    std::optional<watkins::VerificationReport> report;
  };
  std::vector<Outcome> outcomes(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const auto& row = rows[i];
      if (row.error) {
        outcomes[i].json = report::error_row(row.label, row.line, *row.error);
        continue;
      }
      try {
        auto r = verify_curve(*row.input, opts, graphs);
        outcomes[i].json = report::to_json(r);
        outcomes[i].report = std::move(r);
      } catch (const Error& e) {
        outcomes[i].json = report::error_row(row.label, row.line, e);
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }

  BatchSummary s;
  for (const auto& o : outcomes) {
    out << o.json.dump() << '\n';
    ++s.rows;
    if (!o.report) {
      ++s.errors;
      continue;
    }
    ++s.status[watkins::to_string(o.report->status)];
    for (const auto& c : o.report->checks) ++s.checks[c.name][watkins::to_string(c.verdict.status)];
  }
  return s;
}

nlohmann::ordered_json to_json(const BatchSummary& s) {
  nlohmann::ordered_json j;
  j["rows"] = s.rows;
  j["errors"] = s.errors;
  nlohmann::ordered_json status;
  for (const char* k : {"PASS", "FAIL", "INVALID"}) status[k] = s.status.count(k) ? s.status.at(k) : 0;
  j["status"] = status;
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [name, counts] : s.checks) {
    nlohmann::ordered_json c;
    for (const char* k : {"pass", "fail", "not-applicable"}) c[k] = counts.count(k) ? counts.at(k) : 0;
    checks[name] = c;
  }
  j["checks"] = checks;
  return j;
}

}  // namespace ssmod::pipeline
