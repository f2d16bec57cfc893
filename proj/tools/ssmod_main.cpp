#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssmod/eigenmod.hpp"
#include "ssmod/errors.hpp"
#include "ssmod/graph_cache.hpp"
#include "ssmod/modpoly.hpp"
#include "ssmod/pipeline.hpp"
#include "ssmod/report.hpp"
#include "ssmod/ssgraph.hpp"

namespace {

using namespace ssmod;
using nlohmann::ordered_json;

constexpr int kExitError = 4;

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SSMOD_DATA"); env && *env) return env;
  return SSMOD_DATA_DIR;
}

std::uint64_t checked_prime(std::int64_t p) {
  if (p < 5) throw Error(ErrorCode::UnsupportedPrime, "p must be a prime >= 5, got " + std::to_string(p));
  if (!ff::is_prime(static_cast<std::uint64_t>(p))) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  return static_cast<std::uint64_t>(p);
}

// A coefficient literal, or a label from the bundled curve list.
pipeline::CurveInput resolve_curve(const std::string& text, std::optional<int> rank) {
  pipeline::CurveInput in;
  try {
    in.coefficients = curve::parse_coefficients(text);
    in.label = text;
  } catch (const Error&) {
    std::ifstream csv(data_dir() / "curves" / "prime_conductor.csv");
    bool found = false;
    if (csv) {
      for (auto& row : pipeline::read_csv(csv)) {
        if (row.input && row.label == text) {
          in = *row.input;
          found = true;
          break;
        }
      }
    }
    if (!found) throw;
  }
  if (rank) in.rank = rank;
  return in;
}

std::optional<std::filesystem::path> cache_choice(const std::string& dir, bool no_cache) {
  if (no_cache) return std::nullopt;
  if (!dir.empty()) return std::filesystem::path(dir);
  return graph_cache::default_cache_dir();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

int cmd_graph(std::int64_t p_in, const std::string& cache, bool force, unsigned workers) {
  const auto p = checked_prime(p_in);
  const auto dir = cache.empty() ? graph_cache::default_cache_dir() : std::filesystem::path(cache);
  graph_cache::CacheOutcome outcome = graph_cache::CacheOutcome::Built;
  const auto g = force ? graph_cache::refresh(dir, p, workers) : graph_cache::load_or_build(dir, p, workers, &outcome);
  std::map<int, std::size_t> hist;
  for (int w : g.basis.weights) ++hist[w];
  std::cout << "p = " << p << "\n";
  std::cout << "n = " << g.basis.size() << "\n";
  std::cout << "weights:";
  for (const auto& [w, c] : hist) std::cout << " w=" << w << ":" << c;
  std::cout << "\n";
  std::cout << "mass formula sum 1/w = (p-1)/12: " << (ssgraph::mass_formula_holds(g.basis) ? "ok" : "FAILED") << "\n";
  std::cout << "hecke operators:";
  for (const auto& [ell, m] : g.hecke) std::cout << " " << ell;
  std::cout << "\n";
  const char* what = force ? "rebuilt" : outcome == graph_cache::CacheOutcome::Hit ? "loaded" : "written";
  std::cout << "cache " << what << ": " << graph_cache::cache_file(dir, p).string() << "\n";
  return ssgraph::mass_formula_holds(g.basis) ? 0 : 3;
}

int cmd_hecke(std::int64_t p_in, unsigned ell, const std::string& backend) {
  const auto p = checked_prime(p_in);
  const auto basis = ssgraph::enumerate_basis(p);
  ssgraph::HeckeMatrix m;
  if (backend == "velu") {
    if (ell != 2) throw Error(ErrorCode::ParseError, "the velu backend only computes l = 2");
    m = ssgraph::hecke_matrix_velu2(basis);
  } else {
    if (std::find(modpoly::kSupportedEll.begin(), modpoly::kSupportedEll.end(), ell) == modpoly::kSupportedEll.end())
      throw Error(ErrorCode::ParseError, "unsupported l = " + std::to_string(ell));
    m = ssgraph::hecke_matrix(basis, modpoly::reduce_mod_p(modpoly::shipped(ell), p));
  }
  ordered_json j;
  j["p"] = p;
  j["ell"] = ell;
  ordered_json vertices = ordered_json::array();
  for (const auto& v : basis.vertices) vertices.push_back({v.a, v.b});
  j["vertices"] = vertices;
  j["weights"] = basis.weights;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t k = 0; k < m.n; ++k) row.push_back(m.at(i, k));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_eigen(const std::string& text, const std::string& cache, bool no_cache) {
  const auto input = resolve_curve(text, std::nullopt);
  const auto e = curve::parse_curve(input.coefficients);
  graph_cache::GraphProvider graphs(cache_choice(cache, no_cache));
  const auto g = graphs.get(e.conductor);
  const auto x = eigenmod::extract_ve(g->basis, g->hecke, e);
  ordered_json j;
  j["label"] = input.label;
  j["p"] = e.conductor;
  j["n"] = g->basis.size();
  j["v_E"] = x.v.coords;
  j["hecke_operators_used"] = x.ells_used;
  j["norm"] = report::integer(eigenmod::norm(x.v, g->basis));
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_verify(const std::string& text, std::optional<int> rank, const curve::LOptions& opts, const std::string& out,
               const std::string& cache, bool no_cache) {
  const auto input = resolve_curve(text, rank);
  graph_cache::GraphProvider graphs(cache_choice(cache, no_cache));
  const auto r = pipeline::verify_curve(input, opts, graphs);
  write_output(out, report::to_json(r).dump(2) + "\n");
  return watkins::exit_code(r);
}

int cmd_batch(const std::string& csv_path, const std::string& out_path, unsigned jobs, const curve::LOptions& opts,
              const std::string& cache, bool no_cache) {
  std::ifstream csv(csv_path);
  if (!csv) throw Error(ErrorCode::IOError, "cannot read " + csv_path);
  const auto rows = pipeline::read_csv(csv);
  graph_cache::GraphProvider graphs(cache_choice(cache, no_cache));
  std::ostringstream jsonl;
  const auto summary = pipeline::run_batch(rows, jsonl, opts, jobs, graphs);
  write_output(out_path, jsonl.str());
  std::cout << pipeline::to_json(summary).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supersingular module, Hecke eigenvectors and modular degrees of prime-conductor curves"};
  app.require_subcommand(1);

  std::int64_t p = 0;
  unsigned ell = 2, jobs = 1, workers = 1;
  std::string cache, out, csv, curve_text, backend = "modpoly";
  bool force = false, no_cache = false;
  std::optional<int> rank;
  curve::LOptions lopts;

  auto* graph = app.add_subcommand("graph", "Build or load the cached supersingular graph for p");
  graph->add_option("--p", p, "prime")->required();
  graph->add_option("--cache", cache, "cache directory (default $SSMOD_CACHE or ~/.cache/ssmod)");
  graph->add_option("--workers", workers, "threads for Hecke rows")->check(CLI::Range(1u, 256u));
  graph->add_flag("--force", force, "rebuild even if the cache is current");

  auto* hecke = app.add_subcommand("hecke", "Print the Brandt matrix B(l) as JSON");
  hecke->add_option("--p", p, "prime")->required();
  hecke->add_option("--ell", ell, "l in {2,3,5,7,11,13}")->required();
  hecke->add_option("--backend", backend, "modpoly or velu")->check(CLI::IsMember({"modpoly", "velu"}));

  auto add_curve = [&](CLI::App* sub) {
    sub->add_option("--curve", curve_text, "a1,a2,a3,a4,a6 or a bundled label")->required();
    sub->add_option("--cache", cache, "cache directory");
    sub->add_flag("--no-cache", no_cache, "build graphs in memory only");
  };
  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--tol", lopts.tol, "L-series tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--lzero-threshold", lopts.zero_threshold, "|L| below this is numerically zero")
        ->check(CLI::PositiveNumber);
  };

  auto* eigen = app.add_subcommand("eigen", "Print the normalized eigenvector v_E");
  add_curve(eigen);

  auto* verify = app.add_subcommand("verify", "Run every check on one curve");
  add_curve(verify);
  add_tolerances(verify);
  verify->add_option("--rank", rank, "rank (metadata)");
  verify->add_option("--out", out, "report file (default stdout)");

  auto* batch = app.add_subcommand("batch", "Verify every row of a CSV file");
  batch->add_option("--csv", csv, "input CSV")->required();
  batch->add_option("--out", out, "JSONL output")->required();
  batch->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  batch->add_option("--cache", cache, "cache directory");
  batch->add_flag("--no-cache", no_cache, "build graphs in memory only");
  add_tolerances(batch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*graph) return cmd_graph(p, cache, force, workers);
    if (*hecke) return cmd_hecke(p, ell, backend);
    if (*eigen) return cmd_eigen(curve_text, cache, no_cache);
    if (*verify) return cmd_verify(curve_text, rank, lopts, out, cache, no_cache);
    if (*batch) return cmd_batch(csv, out, jobs, lopts, cache, no_cache);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
