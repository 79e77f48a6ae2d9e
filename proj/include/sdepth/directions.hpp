#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "sdepth/spd.hpp"

namespace sdepth {

enum class DirectionScheme { UniformSphere, Antipodal, Exact2D };

std::string to_string(DirectionScheme scheme);

/// How the infimum over unit directions is approximated.
///
/// UniformSphere draws `count` normalized standard Gaussian vectors.
/// Antipodal draws ceil(count / 2) of them and appends their negatives
/// (truncated to `count`). Exact2D asks the depth routines for the exact
/// infimum over the circle and is only valid for k = 2.
struct DirectionBudget {
  int count = 10000;
  std::uint64_t seed = 0;
  DirectionScheme scheme = DirectionScheme::UniformSphere;

  static DirectionBudget uniform(int count, std::uint64_t seed) {
    return {count, seed, DirectionScheme::UniformSphere};
  }
  static DirectionBudget antipodal(int count, std::uint64_t seed) {
    return {count, seed, DirectionScheme::Antipodal};
  }
  static DirectionBudget exact2d() { return {1, 0, DirectionScheme::Exact2D}; }

  bool exact() const { return scheme == DirectionScheme::Exact2D; }
  void validate(int k) const;
};

/// Named random substreams. Every stochastic component draws from
/// substream(seed, name) so one user seed determines all randomness.
std::mt19937_64 substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

/// k x N matrix whose columns are unit directions. Not available for Exact2D.
Matrix generate_directions(int k, const DirectionBudget& budget);

/// Map u -> A^T u / ||A^T u|| column-wise (used for matched-direction checks).
Matrix pull_back_directions(const Matrix& directions, const Matrix& a);

}  // namespace sdepth
