#include "ssmod/graph_cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ssmod/errors.hpp"
#include "ssmod/modpoly.hpp"

namespace ssmod::graph_cache {

namespace {

using nlohmann::ordered_json;

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// flock(2) on a sidecar file; released on destruction.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::IOError, "cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::IOError, "cannot lock " + path.string());
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

bool key_matches(const ordered_json& j, std::uint64_t p) {
  return j.is_object() && j.value("format", "") == "ssmod-graph" && j.value("version", -1) == kFormatVersion &&
         j.value("phi_checksum", "") == modpoly::shipped_checksum_key() && j.contains("p") &&
         j["p"].is_number_unsigned() && j["p"].get<std::uint64_t>() == p;
}

std::string dump(const GraphData& g) { return to_json(g).dump() + "\n"; }

}  // namespace

GraphData build_graph(std::uint64_t p, unsigned workers) {
  GraphData g{ssgraph::enumerate_basis(p), {}};
  std::vector<ssgraph::HeckeMatrix> all;
  for (unsigned ell : modpoly::kSupportedEll) {
    if (ell == p) continue;
    const auto rphi = modpoly::reduce_mod_p(modpoly::shipped(ell), p);
    auto m = ssgraph::hecke_matrix(g.basis, rphi, workers);
    all.push_back(m);
    g.hecke.emplace(ell, std::move(m));
  }
  if (auto bad = ssgraph::commutation_violations(all); !bad.empty())
    throw Error(ErrorCode::HeckeInvariantViolation, joined(bad));
  return g;
}

ordered_json to_json(const GraphData& g) {
  ordered_json j;
  j["format"] = "ssmod-graph";
  j["version"] = kFormatVersion;
  j["phi_checksum"] = modpoly::shipped_checksum_key();
  j["p"] = g.basis.p();
  j["s"] = g.basis.ctx.nonresidue();
  ordered_json vertices = ordered_json::array();
  for (const auto& v : g.basis.vertices) vertices.push_back({v.a, v.b});
  j["vertices"] = std::move(vertices);
  j["weights"] = g.basis.weights;
  j["bar"] = g.basis.bar;
  ordered_json hecke = ordered_json::object();
  for (const auto& [ell, m] : g.hecke) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.n; ++i)
      rows.push_back(std::vector<std::int64_t>(m.entries.begin() + i * m.n, m.entries.begin() + (i + 1) * m.n));
    hecke[std::to_string(ell)] = std::move(rows);
  }
  j["hecke"] = std::move(hecke);
  return j;
}

GraphData from_json(const ordered_json& j) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto ctx = ff::make_quadratic_ctx(p);
    if (j.at("s").get<std::uint64_t>() != ctx.nonresidue()) throw Error(ErrorCode::CacheCorrupt, "non-canonical s");
    std::vector<ff::Fp2> vertices;
    for (const auto& v : j.at("vertices")) {
      const auto a = v.at(0).get<std::uint64_t>();
      const auto b = v.at(1).get<std::uint64_t>();
      if (v.size() != 2 || a >= p || b >= p) throw Error(ErrorCode::CacheCorrupt, "malformed vertex");
      vertices.push_back({a, b});
    }
    ssgraph::SupersingularBasis basis{ctx, std::move(vertices), j.at("weights").get<std::vector<int>>(),
                                      j.at("bar").get<std::vector<std::size_t>>()};
    if (auto bad = ssgraph::basis_violations(basis); !bad.empty())
      throw Error(ErrorCode::CacheCorrupt, "basis: " + joined(bad));
    GraphData g{std::move(basis), {}};
    const std::size_t n = g.basis.size();
    std::vector<ssgraph::HeckeMatrix> all;
    for (unsigned ell : modpoly::kSupportedEll) {
      if (ell == p) continue;
      const auto& rows = j.at("hecke").at(std::to_string(ell));
      ssgraph::HeckeMatrix m{ell, n, {}};
      if (rows.size() != n) throw Error(ErrorCode::CacheCorrupt, "B(" + std::to_string(ell) + ") has wrong size");
      for (const auto& row : rows) {
        const auto r = row.get<std::vector<std::int64_t>>();
        if (r.size() != n) throw Error(ErrorCode::CacheCorrupt, "B(" + std::to_string(ell) + ") has a ragged row");
        m.entries.insert(m.entries.end(), r.begin(), r.end());
      }
      if (auto bad = ssgraph::hecke_violations(g.basis, m); !bad.empty())
        throw Error(ErrorCode::CacheCorrupt, "B(" + std::to_string(ell) + "): " + joined(bad));
      all.push_back(m);
      g.hecke.emplace(ell, std::move(m));
    }
    if (auto bad = ssgraph::commutation_violations(all); !bad.empty())
      throw Error(ErrorCode::CacheCorrupt, joined(bad));
    return g;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CacheCorrupt) throw;
    throw Error(ErrorCode::CacheCorrupt, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CacheCorrupt, e.what());
  }
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("SSMOD_CACHE"); env != nullptr && *env != '\0') return env;
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
    return std::filesystem::path(home) / ".cache" / "ssmod";
  return ".ssmod-cache";
}

std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t p) {
  return dir / ("graph_p" + std::to_string(p) + ".json");
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IOError, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::IOError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::IOError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

GraphData load_or_build(const std::filesystem::path& dir, std::uint64_t p, unsigned workers, CacheOutcome* outcome) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot create cache directory " + dir.string());
  const auto path = cache_file(dir, p);
  auto lock_path = path;
  lock_path += ".lock";
  FileLock lock(lock_path);

  bool existed = std::filesystem::exists(path);
  if (existed) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    ordered_json j;
    try {
      j = ordered_json::parse(text.str());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CacheCorrupt, path.string() + ": " + e.what());
    }
    if (key_matches(j, p)) {
      if (outcome) *outcome = CacheOutcome::Hit;
      return from_json(j);
    }
  }
  auto g = build_graph(p, workers);
  write_atomic(path, dump(g));
  if (outcome) *outcome = existed ? CacheOutcome::Rebuilt : CacheOutcome::Built;
  return g;
}

GraphData refresh(const std::filesystem::path& dir, std::uint64_t p, unsigned workers) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot create cache directory " + dir.string());
  const auto path = cache_file(dir, p);
  auto lock_path = path;
  lock_path += ".lock";
  FileLock lock(lock_path);
  auto g = build_graph(p, workers);
  write_atomic(path, dump(g));
  return g;
}

std::shared_ptr<const GraphData> GraphProvider::get(std::uint64_t p) {
  std::shared_ptr<std::mutex> per_prime;
  {
    std::lock_guard guard(mutex_);
    if (auto it = graphs_.find(p); it != graphs_.end()) return it->second;
    if (auto it = failures_.find(p); it != failures_.end()) std::rethrow_exception(it->second);
    auto& slot = locks_[p];
    if (!slot) slot = std::make_shared<std::mutex>();
    per_prime = slot;
  }
  std::lock_guard build_guard(*per_prime);
  {
    std::lock_guard guard(mutex_);
    if (auto it = graphs_.find(p); it != graphs_.end()) return it->second;
    if (auto it = failures_.find(p); it != failures_.end()) std::rethrow_exception(it->second);
  }
  try {
    auto g = std::make_shared<const GraphData>(cache_dir_ ? load_or_build(*cache_dir_, p, workers_)
                                                          : build_graph(p, workers_));
    std::lock_guard guard(mutex_);
    graphs_.emplace(p, g);
    return g;
  } catch (...) {
    std::lock_guard guard(mutex_);
    failures_.emplace(p, std::current_exception());
    throw;
  }
}

}  // namespace ssmod::graph_cache
