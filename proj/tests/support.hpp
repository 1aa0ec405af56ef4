#pragma once

#include "gaitview/error.hpp"

#include "doctest.h"

#include <random>
#include <vector>

// Checks that `expr` throws gaitview::Error with the given code.
#define CHECK_ERRC(expr, errc)                                     \
  do {                                                             \
    bool thrown_ = false;                                          \
    try {                                                          \
      (void)(expr);                                                \
    } catch (const gaitview::Error& e_) {                          \
      thrown_ = true;                                              \
      CHECK_MESSAGE(e_.code() == (errc), e_.what());               \
    }                                                              \
    CHECK_MESSAGE(thrown_, "expected " #errc " from " #expr);      \
  } while (false)

namespace testing {

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t n, double mu = 0.0, double sd = 1.0) {
  std::normal_distribution<double> d(mu, sd);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace testing
