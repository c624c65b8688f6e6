#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmap/cms.hpp"
#include "qmap/gtree.hpp"
#include "qmap/random.hpp"
#include "qmap/scheme.hpp"

namespace qmap {

enum class SamplerMode { Exact, Asymptotic };

inline constexpr int kDefaultExactLimit = 2000;
inline constexpr int kDefaultAsymptoticMin = 16;

struct SamplerConfig {
  int genus = 1;
  int n = 1;
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::Exact;
  int exact_limit = kDefaultExactLimit;
  int n_min = kDefaultAsymptoticMin;  // smallest n accepted in asymptotic mode
};

Violation validate(const SamplerConfig& c);
std::string to_string(SamplerMode m);
SamplerMode parse_sampler_mode(const std::string& s);  // throws BadInput

GTree sample_plane_tree(int n, Rng& rng);

// Uniform over the valid labelings of t (root label 0).
WellLabeledGTree sample_labels(const GTree& t, Rng& rng);

// Uniform over well-labeled g-trees with n edges, 1 <= g <= max_scheme_genus().
WellLabeledGTree sample_wl_gtree_exact(int g, int n, Rng& rng, int exact_limit = kDefaultExactLimit);
// Sizes from the limit law, everything else uniform given the sizes.
WellLabeledGTree sample_wl_gtree_asymptotic(int g, int n, Rng& rng, int n_min = kDefaultAsymptoticMin);
// Dispatch on mode; genus 0 uses sample_plane_tree in both modes.
WellLabeledGTree sample_wl_gtree(const SamplerConfig& c, Rng& rng);

// Scheme, sizes and root offset of a sample, before forests are filled in.
struct SizeVector {
  Scheme scheme;
  std::vector<int> sigma;  // per scheme facial position
  std::vector<int> m;      // per scheme facial position
};
SizeVector sample_sizes_exact(int g, int n, Rng& rng);
SizeVector sample_sizes_asymptotic(int g, int n, Rng& rng);

struct SampledQuadrangulation {
  PointedQuadrangulation pointed;
  WellLabeledGTree tree;
  std::vector<int> vertex_of;  // tree facial vertex -> map vertex
};
SampledQuadrangulation sample_pointed_quadrangulation(const SamplerConfig& c, Rng& rng);
// The rooted map alone; uniform over rooted quadrangulations in exact mode.
CombinatorialMap sample_quadrangulation(const SamplerConfig& c, Rng& rng);

}  // namespace qmap
