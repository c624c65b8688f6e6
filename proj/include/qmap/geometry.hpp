#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "qmap/cms.hpp"
#include "qmap/random.hpp"

namespace qmap {

inline const double kGamma = std::pow(8.0 / 9.0, 0.25);

struct DistanceProfile {
  int source = 0;
  std::vector<int> distances;  // per map vertex
};
DistanceProfile bfs_distances(const CombinatorialMap& map, int source);
// |d(u) - d(v)| = 1 across every edge.
Violation validate(const DistanceProfile& d, const CombinatorialMap& map);

// Distances between `reps` independent uniform vertex pairs, divided by gamma n^(1/4).
std::vector<double> two_point_samples(const CombinatorialMap& map, Rng& rng, int reps);
// Mean distance from one uniform vertex to all vertices.
double mean_distance(const CombinatorialMap& map, Rng& rng);

struct LabelProfile {
  std::map<int, long> counts;
  long total() const;
  // X_(n)(x) = (gamma n^(1/4) / n) X_n(floor(gamma n^(1/4) x)).
  double rescaled(double x, int n) const;
};
LabelProfile label_profile(const WellLabeledGTree& t);

struct ScalingReport {
  int genus = 1;
  std::vector<int> sizes;
  std::vector<std::vector<double>> samples;  // per size, one statistic per rep
  double slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double gamma = kGamma;
};
// Log-log slope of the mean two-point distance against n.
// Sizes above exact_limit use the asymptotic sampler.
ScalingReport fit_distance_exponent(int g, const std::vector<int>& sizes, int reps, Rng& rng,
                                    int exact_limit = 2000, int threads = 1, int resamples = 1000);

struct VolumeReport {
  std::vector<int> radii;
  std::vector<double> mean_volume;
  double slope = 0.0;
  bool trimmed = false;  // window cut where balls reached half the map
};
// Ball volumes over r in [n^(1/8), n^(1/4)/2].
VolumeReport ball_volume_exponent(const CombinatorialMap& map, int centers, Rng& rng);

// For every corner i: d(q(i), base) = Lambda(i) - Lambda(s) + 1 with s a
// corner of minimal label, and the vertex of s is adjacent to the base.
struct BaseCheck {
  bool ok = true;
  int corners = 0;
  int failures = 0;
  // Corners whose vertex lies at distance Lambda(i) - Lambda(s) + 1 from q(s) itself.
  int literal_matches = 0;
};
BaseCheck distance_to_base_check(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                                 const std::vector<int>& vertex_of);

// Upper bound d°_n(i, j) on the corner distance.
int corner_distance(const PointedQuadrangulation& q, const WellLabeledGTree& t, const std::vector<int>& vertex_of,
                    int i, int j);
int corner_distance_bound(const WellLabeledGTree& t, int i, int j);

}  // namespace qmap
