#pragma once

// Supersingular basis plus every supported Hecke matrix for one prime, and
// its on-disk JSON cache:
//   { "format": "ssmod-graph", "version": 1, "phi_checksum": "...",
//     "p": int, "s": int, "vertices": [[a,b],...], "weights": [int],
//     "bar": [int], "hecke": { "2": [[int]], ... } }
// Files are written atomically (temp file + rename) under a per-prime lock.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "ssmod/errors.hpp"
#include "ssmod/ssgraph.hpp"

namespace ssmod::graph_cache {

inline constexpr int kFormatVersion = 1;

struct GraphData {
  ssgraph::SupersingularBasis basis;
  std::map<unsigned, ssgraph::HeckeMatrix> hecke;  // every supported l != p
};

// Enumerates the basis and builds B(l) for all supported l != p, then
// checks pairwise commutation.
GraphData build_graph(std::uint64_t p, unsigned workers = 1);

nlohmann::ordered_json to_json(const GraphData& g);
// Validates structure and every basis/Hecke invariant; CacheCorrupt on failure.
GraphData from_json(const nlohmann::ordered_json& j);

std::filesystem::path default_cache_dir();  // $SSMOD_CACHE, else ~/.cache/ssmod
std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t p);

void write_atomic(const std::filesystem::path& path, const std::string& contents);

enum class CacheOutcome { Hit, Built, Rebuilt };

// Loads the cache for p if its key (p, version, modular polynomial checksum)
// matches, otherwise builds and writes it. A file whose key matches but whose
// content is unreadable or violates an invariant raises CacheCorrupt.
GraphData load_or_build(const std::filesystem::path& dir, std::uint64_t p, unsigned workers = 1,
                        CacheOutcome* outcome = nullptr);

// Rebuilds unconditionally and rewrites the cache file.
GraphData refresh(const std::filesystem::path& dir, std::uint64_t p, unsigned workers = 1);

// Memoizing, thread-safe front end used by the verifier; without a cache
// directory graphs are built in memory only.
class GraphProvider {
 public:
  explicit GraphProvider(std::optional<std::filesystem::path> cache_dir = std::nullopt, unsigned workers = 1)
      : cache_dir_(std::move(cache_dir)), workers_(workers) {}

  std::shared_ptr<const GraphData> get(std::uint64_t p);

 private:
  std::optional<std::filesystem::path> cache_dir_;
  unsigned workers_;
  std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<std::mutex>> locks_;
  std::map<std::uint64_t, std::shared_ptr<const GraphData>> graphs_;
  std::map<std::uint64_t, std::exception_ptr> failures_;
};

}  // namespace ssmod::graph_cache
