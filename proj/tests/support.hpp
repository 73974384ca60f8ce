#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "szl/errors.hpp"

namespace szl::test {

using Blocks = std::vector<std::vector<std::string>>;

/// SZL_SEED, default 42.
inline std::uint64_t seed() {
  const char* s = std::getenv("SZL_SEED");
  return s && *s ? std::stoull(s) : 42u;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() * 1000003u + salt); }

inline Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = normal(gen);
  return v / v.norm();
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected an szl::Error");
}

}  // namespace szl::test
