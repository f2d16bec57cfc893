#pragma once

// End-to-end verification of one curve and of CSV batches.

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssmod/curve.hpp"
#include "ssmod/graph_cache.hpp"
#include "ssmod/watkins.hpp"

namespace ssmod::pipeline {

struct CurveInput {
  std::string label;
  std::array<curve::BigInt, 5> coefficients;
  std::optional<int> rank;
};

// Errors while validating the curve itself propagate as ssmod::Error.
// Failures after that (graph, extraction, L-values) yield an Invalid report.
watkins::VerificationReport verify_curve(const CurveInput& input, const curve::LOptions& opts,
                                         graph_cache::GraphProvider& graphs);

struct BatchRow {
  std::size_t line = 0;  // 1-based line number in the CSV
  std::string label;
  std::optional<CurveInput> input;
  std::optional<Error> error;
};

// Header `label,a1,a2,a3,a4,a6,rank` (rank column optional). Malformed
// rows become rows carrying an error; a bad header is a ParseError.
std::vector<BatchRow> read_csv(std::istream& in);

struct BatchSummary {
  std::size_t rows = 0;
  std::size_t errors = 0;
  std::map<std::string, std::size_t> status;                       // PASS / FAIL / INVALID
  std::map<std::string, std::map<std::string, std::size_t>> checks;  // check -> verdict -> count
};

// Writes one JSON object per row, in input order, for any `jobs`.
BatchSummary run_batch(const std::vector<BatchRow>& rows, std::ostream& out, const curve::LOptions& opts,
                       unsigned jobs, graph_cache::GraphProvider& graphs);

nlohmann::ordered_json to_json(const BatchSummary& s);

}  // namespace ssmod::pipeline
