#pragma once

#include <cstdint>
#include <vector>

#include "qmap/cms.hpp"
#include "qmap/gtree.hpp"

namespace qmap {

// Brute-force oracles. Every list is duplicate-free, in canonical form and
// sorted. Throws TooLarge when the number of polygon pairings to scan
// exceeds `budget`.
inline constexpr std::uint64_t kDefaultEnumerationBudget = 5'000'000;

std::uint64_t double_factorial_odd(int k);  // 1*3*...*k, saturating

std::vector<GTree> enumerate_gtrees(int g, int n, std::uint64_t budget = kDefaultEnumerationBudget);
std::vector<WellLabeledGTree> enumerate_wl_gtrees(int g, int n, std::uint64_t budget = kDefaultEnumerationBudget);
// All labelings of one g-tree (root label 0, edge jumps at most 1).
std::vector<std::vector<int>> enumerate_labelings(const GTree& t);

// Rooted bipartite quadrangulations with n faces and genus g, built by gluing
// n squares along every perfect matching of their 4n sides. Independent of
// the tree bijection.
std::vector<CombinatorialMap> enumerate_quadrangulations(int g, int n, std::uint64_t budget = kDefaultEnumerationBudget);
// Each quadrangulation once per choice of base vertex; epsilon follows the root.
std::vector<PointedQuadrangulation> enumerate_pointed_quadrangulations(int g, int n,
                                                                       std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace qmap
