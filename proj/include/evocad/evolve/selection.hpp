#pragma once

#include "evocad/error.hpp"
#include "evocad/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace evocad::evolve {

/// p(r_i) = exp(-λ r_i) / Σ_j exp(-λ r_j).
inline std::map<int, double> selection_probabilities(const std::map<int, double> &avg_ranks,
                                                     double lambda) {
  if (avg_ranks.empty())
    throw ConstraintError("no ranks to select from");
  if (!(lambda > 0.0))
    throw ConstraintError("lambda must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (const auto &[id, r] : avg_ranks)
    best = std::min(best, r);
  std::map<int, double> p;
  double total = 0.0;
  for (const auto &[id, r] : avg_ranks) {
    p[id] = std::exp(-lambda * (r - best));
    total += p[id];
  }
  for (auto &[id, v] : p)
    v /= total;
  return p;
}

inline constexpr int kDistinctParentTries = 100;

namespace detail {

inline int draw(const std::map<int, double> &probs, Rng &rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto &[id, p] : probs) {
    acc += p;
    if (u < acc)
      return id;
  }
  for (auto it = probs.rbegin(); it != probs.rend(); ++it)
    if (it->second > 0)
      return it->first;
  return probs.rbegin()->first;
}

} // namespace detail

/// `count` parent pairs drawn from `probs`; the second parent is redrawn until it
/// differs from the first, falling back to the best-ranked other member.
inline std::vector<std::pair<int, int>> select_parent_pairs(const std::map<int, double> &avg_ranks,
                                                            const std::map<int, double> &probs,
                                                            int count, Rng &rng) {
  if (probs.size() < 2)
    throw ConstraintError("parent selection needs at least two individuals");
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < count; ++c) {
    const int a = detail::draw(probs, rng);
    int b = a;
    for (int t = 0; t < kDistinctParentTries && b == a; ++t)
      b = detail::draw(probs, rng);
    if (b == a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &[id, r] : avg_ranks)
        if (id != a && r < best) {
          best = r;
          b = id;
        }
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

} // namespace evocad::evolve
