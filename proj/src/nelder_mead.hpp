#pragma once

// Nelder-Mead for integer-valued (piecewise constant) scores, shared by the
// location searches. Not part of the public API.

#include <algorithm>
#include <vector>

#include "sdepth/spd.hpp"

namespace sdepth::detail {

struct Candidate {
  Vector point;
  int score = 0;
};

// Nelder-Mead maximization of an integer-valued score. Every evaluated point
// is appended to `log`.
template <class Score>
void nelder_mead(const Score& f, const Vector& start, const Vector& step, int max_evals,
                 std::vector<Candidate>& log) {
  const auto k = start.size();
  std::vector<Candidate> simplex;
  auto eval = [&](const Vector& x) {
    Candidate c{x, f(x)};
    log.push_back(c);
    return c;
  };
  simplex.push_back(eval(start));
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector x = start;
    x(j) += step(j);
    simplex.push_back(eval(x));
  }
  int evals = static_cast<int>(k) + 1;
  const double tol = 1e-8 * std::max(1.0, step.cwiseAbs().maxCoeff());
  while (evals < max_evals) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    double diameter = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      diameter = std::max(diameter, (simplex[i].point - simplex[0].point).cwiseAbs().maxCoeff());
    }
    if (diameter < tol) break;
    Vector centroid = Vector::Zero(k);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].point;
    centroid /= static_cast<double>(k);
    Candidate& worst = simplex.back();
    const Candidate reflected = eval(centroid + (centroid - worst.point));
    ++evals;
    if (reflected.score > simplex.front().score) {
      const Candidate expanded = eval(centroid + 2.0 * (centroid - worst.point));
      ++evals;
      worst = expanded.score > reflected.score ? expanded : reflected;
      continue;
    }
    if (reflected.score > simplex[simplex.size() - 2].score) {
      worst = reflected;
      continue;
    }
    if (reflected.score > worst.score) {
      const Candidate contracted = eval(centroid + 0.5 * (reflected.point - centroid));
      ++evals;
      if (contracted.score >= reflected.score) {
        worst = contracted;
        continue;
      }
    } else {
      const Candidate contracted = eval(centroid + 0.5 * (worst.point - centroid));
      ++evals;
      if (contracted.score > worst.score) {
        worst = contracted;
        continue;
      }
    }
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      simplex[i] = eval(simplex[0].point + 0.5 * (simplex[i].point - simplex[0].point));
      ++evals;
    }
  }
}

}  // namespace sdepth::detail
