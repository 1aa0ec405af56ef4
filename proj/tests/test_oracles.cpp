#include "oracles/oracles.hpp"

#include "doctest.h"

#include <random>

TEST_CASE("dtw_bruteforce") {
  CHECK(oracles::dtw_bruteforce({0, 1, 2}, {0, 2}) == 1.0);
  CHECK(oracles::dtw_bruteforce({1.5, -2, 3}, {1.5, -2, 3}) == 0.0);
  // 3x3 grid has D(2,2) = 13 monotone paths.
  oracles::dtw_bruteforce({1, 2, 3}, {3, 2, 1});
  CHECK(oracles::dtw_paths_enumerated() == 13);
  CHECK_THROWS_AS(oracles::dtw_bruteforce(std::vector<double>(9, 0.0), {1.0}), oracles::BudgetExceeded);
}

TEST_CASE("wilcoxon_enumerate") {
  CHECK(oracles::wilcoxon_enumerate({1, 2, 3, 4, 5}) == 0.0625);
  CHECK(oracles::wilcoxon_enumerate({3.0}) == 1.0);
  CHECK(oracles::wilcoxon_enumerate({1, -1, 2, -2}) == 1.0);
  // n = 3, ranks 1..3, W+ = 1: sign patterns with min(W+, W-) <= 1 are
  // {}, {1}, {2,3}, {1,2,3} -> 4 of 8.
  CHECK(oracles::wilcoxon_enumerate({-1, 2, 3}) == 0.5);
  CHECK_THROWS_AS(oracles::wilcoxon_enumerate(std::vector<double>(26, 1.0)), oracles::BudgetExceeded);
}
