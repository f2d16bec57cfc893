#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ssmod/modpoly.hpp"
#include "ssmod/ssgraph.hpp"

using namespace ssmod;

TEST_CASE("Velu B(2) agrees with the Phi_2 backend for every prime up to 200") {
  std::size_t compared = 0;
  for (std::uint64_t p = 5; p < 200; ++p) {
    if (!ff::is_prime(p)) continue;
    CAPTURE(p);
    const auto basis = ssgraph::enumerate_basis(p);
    const auto from_phi = ssgraph::hecke_matrix(basis, modpoly::reduce_mod_p(modpoly::shipped(2), p));
    const auto from_velu = ssgraph::hecke_matrix_velu2(basis);
    CHECK(from_velu == from_phi);
    ++compared;
  }
  CHECK(compared == 44);
}

TEST_CASE("Velu B(2) at p = 11 and p = 37") {
  const auto b11 = ssgraph::hecke_matrix_velu2(ssgraph::enumerate_basis(11));
  CHECK(b11.entries == std::vector<std::int64_t>{0, 3, 2, 1});
  const auto b37 = ssgraph::hecke_matrix_velu2(ssgraph::enumerate_basis(37));
  CHECK(b37.entries == std::vector<std::int64_t>{0, 2, 1, 2, 0, 1, 1, 1, 1});
}

TEST_CASE("Velu B(2) at a few larger primes") {
  for (std::uint64_t p : {389, 433, 1009}) {
    const auto basis = ssgraph::enumerate_basis(p);
    CHECK(ssgraph::hecke_matrix_velu2(basis) ==
          ssgraph::hecke_matrix(basis, modpoly::reduce_mod_p(modpoly::shipped(2), p)));
  }
}
