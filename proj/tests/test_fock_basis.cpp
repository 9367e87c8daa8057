#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pflab/error.hpp"
#include "pflab/fock_basis.hpp"

using namespace pflab;

namespace {

/// Brute-force enumeration of all occupation tuples in the truncation.
std::vector<std::vector<int>> enumerate(std::size_t modes, const FockTruncation& t) {
  std::vector<std::vector<int>> out;
  std::vector<int> occ(modes, 0);
  const int top = t.cutoff;
  while (true) {
    int total = 0;
    bool ok = true;
    for (int o : occ) total += o;
    if (t.scheme == TruncationScheme::total_excitation) ok = total <= top;
    if (ok) out.push_back(occ);
    std::size_t k = modes;
    while (k > 0) {
      --k;
      if (occ[k] < top) {
        ++occ[k];
        break;
      }
      occ[k] = 0;
      if (k == 0) return out;
    }
    if (modes == 0) return out;
  }
}

}  // namespace

TEST_CASE("closed-form dimension equals enumeration") {
  for (auto scheme : {TruncationScheme::per_mode, TruncationScheme::total_excitation}) {
    for (std::size_t m = 1; m <= 4; ++m) {
      for (int c = 1; c <= 4; ++c) {
        const FockTruncation t{scheme, c};
        const auto ref = enumerate(m, t);
        CHECK(fock_dimension(t, m) == ref.size());
        const FockBasis basis(m, t);
        CHECK(basis.size() == ref.size());
      }
    }
  }
  CHECK(fock_dimension({TruncationScheme::per_mode, 3}, 0) == 1);
  CHECK(fock_dimension({TruncationScheme::total_excitation, 2}, 250) == 31626);
  CHECK(fock_dimension({TruncationScheme::total_excitation, 3}, 12) == 455);
  CHECK(fock_dimension({TruncationScheme::per_mode, 40}, 1) == 41);
  CHECK(fock_dimension({TruncationScheme::per_mode, 10}, 250) == kSaturated);
}

TEST_CASE("basis map is a bijection") {
  const FockBasis basis(3, {TruncationScheme::total_excitation, 3});
  std::set<std::vector<int>> seen;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto o = basis.occupations(s);
    std::vector<int> occ(o.begin(), o.end());
    CHECK(basis.index_of(occ) == static_cast<std::int64_t>(s));
    CHECK(basis.total(s) <= 3);
    seen.insert(occ);
  }
  CHECK(seen.size() == basis.size());
  CHECK(basis.index_of(std::vector<int>{2, 2, 0}) == FockBasis::npos);
  CHECK(basis.index_of(std::vector<int>{0, 0, 0}) == 0);
}

TEST_CASE("ladder tables step exactly one photon") {
  for (auto scheme : {TruncationScheme::per_mode, TruncationScheme::total_excitation}) {
    const FockBasis basis(3, {scheme, 2});
    std::uint64_t pairs = 0;
    for (std::size_t s = 0; s < basis.size(); ++s) {
      for (std::size_t k = 0; k < 3; ++k) {
        const auto lo = basis.lowered(s, k);
        if (basis.occupation(s, k) == 0) {
          CHECK(lo == FockBasis::npos);
        } else {
          REQUIRE(lo != FockBasis::npos);
          for (std::size_t j = 0; j < 3; ++j) {
            CHECK(basis.occupation(static_cast<std::size_t>(lo), j) == basis.occupation(s, j) - (j == k ? 1 : 0));
          }
          CHECK(basis.raised(static_cast<std::size_t>(lo), k) == static_cast<std::int64_t>(s));
          if (k == 0) ++pairs;
        }
      }
    }
    CHECK(pairs == fock_ladder_pairs({scheme, 2}, 3));
  }
}

TEST_CASE("ladder pair counts in closed form") {
  // per_mode: c (c+1)^(M-1); total: C(M + c - 1, c - 1) * ... summed over n >= 1
  CHECK(fock_ladder_pairs({TruncationScheme::per_mode, 3}, 2) == 3 * 4);
  for (std::size_t m = 1; m <= 5; ++m) {
    for (int c = 1; c <= 4; ++c) {
      const double ref = oracle::binomial(static_cast<int>(m) + c - 1, c - 1);
      CHECK(static_cast<double>(fock_ladder_pairs({TruncationScheme::total_excitation, c}, m)) == ref);
    }
  }
}

TEST_CASE("invalid truncations are rejected") {
  CHECK_THROWS_AS(FockBasis(2, {TruncationScheme::per_mode, 0}), ConfigError);
  CHECK_THROWS_AS(FockBasis(250, {TruncationScheme::total_excitation, 4}), CapacityError);
}
