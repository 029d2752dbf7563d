#pragma once

#include <span>
#include <vector>

#include "vgt/genome.hpp"

namespace vgt {

// a dominates b (maximization): a >= b everywhere and a > b somewhere.
bool dominates(const RatingVector& a, const RatingVector& b);

// Fast non-dominated sort. Front k holds the indices that are non-dominated
// once fronts 0..k-1 are removed; indices within a front are ascending.
std::vector<std::vector<int>> non_dominated_sort(std::span<const RatingVector> ratings);

// NSGA-II crowding distance of each member of one front. Boundary members of
// an objective get +inf; interior members add (next - prev) / (max - min).
// Objectives with zero range are skipped entirely.
std::vector<double> crowding_distance(std::span<const RatingVector> front);

enum class CrowdingPreference {
  kPreferHigh,  // standard NSGA-II: keep the least crowded members
  kPreferLow,   // literal reading: keep the most crowded members
};

// Indices of the `keep` survivors, ascending. Fronts are taken whole while
// they fit; the overflowing front is ranked by crowding distance, ties going
// to the lower index.
std::vector<int> select_indices(std::span<const RatingVector> ratings, int keep,
                                CrowdingPreference preference = CrowdingPreference::kPreferHigh);

// Genome-level selection; survivors keep their original relative order.
// Throws UnratedGenome if any genome lacks a rating.
std::vector<Genome> select(std::span<const Genome> population, int keep,
                           CrowdingPreference preference = CrowdingPreference::kPreferHigh);

}  // namespace vgt
