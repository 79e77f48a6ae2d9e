#include "sdepth/directions.hpp"

#include <functional>

namespace sdepth {

std::string to_string(DirectionScheme scheme) {
  switch (scheme) {
    case DirectionScheme::UniformSphere: return "uniform";
    case DirectionScheme::Antipodal: return "antipodal";
    case DirectionScheme::Exact2D: return "exact2d";
  }
  return "unknown";
}

void DirectionBudget::validate(int k) const {
  if (count < 1) throw DomainError("direction count must be positive");
  if (scheme == DirectionScheme::Exact2D && k != 2) {
    throw DomainError("exact 2D direction handling requires k = 2");
  }
}

std::mt19937_64 substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  // FNV-1a over the stream name keeps substreams stable across platforms.
  std::uint64_t tag = 1469598103934665603ULL;
  for (char c : name) {
    tag ^= static_cast<unsigned char>(c);
    tag *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Matrix generate_directions(int k, const DirectionBudget& budget) {
  budget.validate(k);
  if (budget.exact()) throw DomainError("Exact2D budgets do not enumerate sampled directions");
  auto rng = substream(budget.seed, "directions");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int base = budget.scheme == DirectionScheme::Antipodal ? (budget.count + 1) / 2 : budget.count;
  Matrix dirs(k, budget.count);
  int filled = 0;
  while (filled < base) {
    Vector u(k);
    for (int j = 0; j < k; ++j) u(j) = gauss(rng);
    const double norm = u.norm();
    if (norm < 1e-12) continue;
    dirs.col(filled++) = u / norm;
  }
  for (int i = 0; base + i < budget.count; ++i) dirs.col(base + i) = -dirs.col(i);
  return dirs;
}

Matrix pull_back_directions(const Matrix& directions, const Matrix& a) {
  Matrix out = a.transpose() * directions;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) /= out.col(j).norm();
  return out;
}

}  // namespace sdepth
