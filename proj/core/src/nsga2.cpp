#include "vgt/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "vgt/error.hpp"

namespace vgt {

bool dominates(const RatingVector& a, const RatingVector& b) {
  bool strictly = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

std::vector<std::vector<int>> non_dominated_sort(std::span<const RatingVector> ratings) {
  const int n = static_cast<int>(ratings.size());
  std::vector<std::vector<int>> dominated_by_me(static_cast<size_t>(n));
  std::vector<int> domination_count(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(ratings[static_cast<size_t>(p)], ratings[static_cast<size_t>(q)])) {
        dominated_by_me[static_cast<size_t>(p)].push_back(q);
      } else if (dominates(ratings[static_cast<size_t>(q)], ratings[static_cast<size_t>(p)])) {
        ++domination_count[static_cast<size_t>(p)];
      }
    }
    if (domination_count[static_cast<size_t>(p)] == 0) current.push_back(p);
  }

  while (!current.empty()) {
    std::vector<int> next;
    for (int p : current) {
      for (int q : dominated_by_me[static_cast<size_t>(p)]) {
        if (--domination_count[static_cast<size_t>(q)] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const RatingVector> front) {
  const size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n == 0) return distance;
  const size_t objectives = front[0].size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<size_t> order(n);
  for (size_t m = 0; m < objectives; ++m) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return front[a][m] < front[b][m]; });
    const double lo = front[order.front()][m];
    const double hi = front[order.back()][m];
    const double range = hi - lo;
    if (!(range > 0.0)) continue;
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    for (size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
    }
  }
  if (n == 1) distance[0] = kInf;
  return distance;
}

std::vector<int> select_indices(std::span<const RatingVector> ratings, int keep,
                                CrowdingPreference preference) {
  const int n = static_cast<int>(ratings.size());
  if (keep < 0 || keep > n) {
    throw Error(ErrorCode::kInvalidConfig, "keep must lie in [0, population size]");
  }
  std::vector<int> chosen;
  chosen.reserve(static_cast<size_t>(keep));
  for (const auto& front : non_dominated_sort(ratings)) {
    const int room = keep - static_cast<int>(chosen.size());
    if (room <= 0) break;
    if (static_cast<int>(front.size()) <= room) {
      chosen.insert(chosen.end(), front.begin(), front.end());
      continue;
    }
    std::vector<RatingVector> members;
    members.reserve(front.size());
    for (int i : front) members.push_back(ratings[static_cast<size_t>(i)]);
    const std::vector<double> cd = crowding_distance(members);

    std::vector<size_t> order(front.size());
    std::iota(order.begin(), order.end(), size_t{0});
    // front is ascending, so position order doubles as index order for ties.
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return preference == CrowdingPreference::kPreferHigh ? cd[a] > cd[b] : cd[a] < cd[b];
    });
    for (int k = 0; k < room; ++k) chosen.push_back(front[order[static_cast<size_t>(k)]]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<Genome> select(std::span<const Genome> population, int keep,
                           CrowdingPreference preference) {
  std::vector<RatingVector> ratings;
  ratings.reserve(population.size());
  for (const Genome& g : population) {
    if (!g.rating) throw Error(ErrorCode::kUnratedGenome, "selection requires rated genomes");
    ratings.push_back(*g.rating);
  }
  std::vector<Genome> out;
  for (int i : select_indices(ratings, keep, preference)) {
    out.push_back(population[static_cast<size_t>(i)]);
  }
  return out;
}

}  // namespace vgt
