#include "ssmod/modpoly.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <regex>
#include <sstream>

#include "ssmod/errors.hpp"

namespace ssmod::modpoly {

namespace {

std::uint64_t mod_u64(const BigInt& c, std::uint64_t m) {
  BigInt r = c % m;
  if (r < 0) r += m;
  return r.convert_to<std::uint64_t>();
}

bool is_decimal_integer(const std::string& s) {
  static const std::regex re("[-+]?[0-9]+");
  return std::regex_match(s, re);
}

void validate(const ModularPolynomial& phi) {
  const unsigned top = phi.ell + 1;
  if (phi.degree_x() != top)
    throw Error(ErrorCode::DegreeMismatch,
                "deg_X = " + std::to_string(phi.degree_x()) + ", expected " + std::to_string(top));
  if (phi.coefficient(top, 0) != 1)
    throw Error(ErrorCode::DegreeMismatch, "coefficient of X^" + std::to_string(top) + " must be 1");
  for (unsigned j = 1; j <= top; ++j) {
    if (phi.coefficient(top, j) != 0)
      throw Error(ErrorCode::DegreeMismatch, "X^" + std::to_string(top) + " must not carry a power of Y");
  }
  // Phi_l == (X^l - Y)(X - Y^l) = X^(l+1) - X^l Y^l - X Y + Y^(l+1)  (mod l)
  const unsigned l = phi.ell;
  for (unsigned i = 0; i <= top; ++i) {
    for (unsigned j = 0; j <= i; ++j) {
      int expected = 0;
      if (i == top && j == 0) expected = 1;
      if ((i == l && j == l) || (i == 1 && j == 1)) expected = -1;
      const std::uint64_t got = mod_u64(phi.coefficient(i, j), l);
      const std::uint64_t want = expected < 0 ? l - 1 : static_cast<std::uint64_t>(expected);
      if (got != want)
        throw Error(ErrorCode::KroneckerViolation,
                    "coefficient of X^" + std::to_string(i) + " Y^" + std::to_string(j) + " mod " +
                        std::to_string(l));
    }
  }
}

}  // namespace

BigInt ModularPolynomial::coefficient(unsigned i, unsigned j) const {
  if (i < j) std::swap(i, j);
  auto it = coeffs.find({i, j});
  return it == coeffs.end() ? BigInt(0) : it->second;
}

unsigned ModularPolynomial::degree_x() const {
  unsigned d = 0;
  for (const auto& [key, c] : coeffs)
    if (c != 0) d = std::max(d, key.first);
  return d;
}

std::uint64_t checksum_term(unsigned i, unsigned j, const BigInt& c) {
  const auto weight = static_cast<std::uint64_t>(i) * 131 + j;
  return static_cast<std::uint64_t>((ff::u128{weight} * mod_u64(c, kChecksumModulus)) % kChecksumModulus);
}

ModularPolynomial load_modular_polynomial(unsigned ell, std::istream& source) {
  ModularPolynomial phi;
  phi.ell = ell;
  std::string line;
  if (!std::getline(source, line)) throw Error(ErrorCode::ParseError, "empty modular polynomial source");
  if (line != "MODPOLY v1 ell=" + std::to_string(ell))
    throw Error(ErrorCode::ParseError, "bad header '" + line + "' for ell=" + std::to_string(ell));

  // Entries given below the diagonal are kept aside and compared with their
  // partner once everything is read.
  std::map<std::pair<unsigned, unsigned>, BigInt> mirrored;
  std::uint64_t running = 0;
  bool have_checksum = false;
  std::uint64_t declared = 0;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_checksum) throw Error(ErrorCode::ParseError, "content after CHECKSUM line");
    std::istringstream fields(line);
    std::string a, b, c, extra;
    fields >> a >> b >> c;
    if (fields >> extra) throw Error(ErrorCode::ParseError, "trailing fields on line " + std::to_string(line_no));
    if (a == "CHECKSUM") {
      if (!is_decimal_integer(b) || !c.empty() || b[0] == '-')
        throw Error(ErrorCode::ParseError, "malformed CHECKSUM line");
      declared = std::stoull(b);
      have_checksum = true;
      continue;
    }
    if (!is_decimal_integer(a) || !is_decimal_integer(b) || !is_decimal_integer(c) || a[0] == '-' || b[0] == '-')
      throw Error(ErrorCode::ParseError, "malformed coefficient line " + std::to_string(line_no));
    const auto i = static_cast<unsigned>(std::stoul(a));
    const auto j = static_cast<unsigned>(std::stoul(b));
    const BigInt value(c[0] == '+' ? c.substr(1) : c);
    running = (running + checksum_term(i, j, value)) % kChecksumModulus;
    auto& target = i >= j ? phi.coeffs : mirrored;
    const std::pair<unsigned, unsigned> key = i >= j ? std::pair{i, j} : std::pair{j, i};
    if (!target.emplace(key, value).second)
      throw Error(ErrorCode::ParseError, "duplicate monomial on line " + std::to_string(line_no));
  }
  if (!have_checksum) throw Error(ErrorCode::ParseError, "missing CHECKSUM line");
  if (declared != running)
    throw Error(ErrorCode::ParseError,
                "checksum mismatch: declared " + std::to_string(declared) + ", computed " + std::to_string(running));

  for (const auto& [key, value] : mirrored) {
    auto it = phi.coeffs.find(key);
    const BigInt partner = it == phi.coeffs.end() ? BigInt(0) : it->second;
    if (partner != value)
      throw Error(ErrorCode::SymmetryViolation, "coefficient of X^" + std::to_string(key.second) + " Y^" +
                                                    std::to_string(key.first) + " differs from its mirror");
    if (it == phi.coeffs.end()) phi.coeffs.emplace(key, value);
  }
  phi.checksum = running;
  validate(phi);
  return phi;
}

ModularPolynomial load_modular_polynomial_file(unsigned ell, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path.string());
  return load_modular_polynomial(ell, in);
}

std::filesystem::path modpoly_dir() {
  if (const char* env = std::getenv("SSMOD_DATA"); env != nullptr && *env != '\0')
    return std::filesystem::path(env) / "modpoly";
  return std::filesystem::path(SSMOD_DATA_DIR) / "modpoly";
}

const ModularPolynomial& shipped(unsigned ell) {
  static std::mutex mutex;
  static std::map<unsigned, ModularPolynomial> loaded;
  std::lock_guard lock(mutex);
  if (auto it = loaded.find(ell); it != loaded.end()) return it->second;
  bool supported = false;
  for (unsigned l : kSupportedEll) supported = supported || l == ell;
  if (!supported) throw Error(ErrorCode::UnsupportedPrime, "no modular polynomial shipped for ell=" + std::to_string(ell));
  auto phi = load_modular_polynomial_file(ell, modpoly_dir() / ("phi_" + std::to_string(ell) + ".txt"));
  return loaded.emplace(ell, std::move(phi)).first->second;
}

std::string shipped_checksum_key() {
  std::string key;
  for (unsigned ell : kSupportedEll) {
    if (!key.empty()) key += ';';
    key += std::to_string(ell) + ':' + std::to_string(shipped(ell).checksum);
  }
  return key;
}

ReducedModularPolynomial reduce_mod_p(const ModularPolynomial& phi, std::uint64_t p) {
  if (phi.ell == p) throw Error(ErrorCode::EllEqualsP, "cannot reduce Phi_" + std::to_string(p) + " mod itself");
  if (!ff::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  ReducedModularPolynomial out;
  out.ell = phi.ell;
  out.p = p;
  const unsigned size = phi.ell + 2;
  out.coeffs.assign(size, std::vector<std::uint64_t>(size, 0));
  for (const auto& [key, c] : phi.coeffs) {
    const auto r = mod_u64(c, p);
    out.coeffs[key.first][key.second] = r;
    out.coeffs[key.second][key.first] = r;
  }
  return out;
}

poly::Poly<ff::Fp2Ctx> specialize(const ReducedModularPolynomial& rphi, const ff::Fp2Ctx& ctx, ff::Fp2 j) {
  const std::size_t size = rphi.coeffs.size();
  std::vector<ff::Fp2> powers(size);
  powers[0] = ctx.one();
  for (std::size_t i = 1; i < size; ++i) powers[i] = ctx.mul(powers[i - 1], j);
  poly::Poly<ff::Fp2Ctx> out(size, ctx.zero());
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t k = 0; k < size; ++k) {
      const auto c = rphi.coeffs[i][k];
      if (c != 0) out[k] = ctx.add(out[k], ctx.mul(ctx.from_base(c), powers[i]));
    }
  }
  poly::trim(ctx, out);
  return out;
}

}  // namespace ssmod::modpoly
