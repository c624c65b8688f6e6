#include "qmap/geometry.hpp"

#include <algorithm>
#include <thread>

#include "qmap/sampling.hpp"
#include "qmap/stats.hpp"

namespace qmap {

DistanceProfile bfs_distances(const CombinatorialMap& map, int source) {
  return DistanceProfile{source, vertex_distances(map, source)};
}

Violation validate(const DistanceProfile& d, const CombinatorialMap& map) {
  if (d.distances[d.source] != 0) return Error(ErrorCode::BadInput, "source is not at distance 0");
  for (int h = 0; h < map.half_edge_count(); h += 2)
    if (std::abs(d.distances[map.origin(h)] - d.distances[map.origin(h ^ 1)]) != 1)
      return Error(ErrorCode::NotBipartiteQuadrangulation, "distances do not alternate across an edge");
  return std::nullopt;
}

namespace {
double scale_of(const CombinatorialMap& map) {
  const double n = map.half_edge_count() / 4.0;  // faces of a quadrangulation
  return kGamma * std::pow(n, 0.25);
}
}  // namespace

std::vector<double> two_point_samples(const CombinatorialMap& map, Rng& rng, int reps) {
  if (reps < 1) throw Error(ErrorCode::BadInput, "reps must be positive");
  const int V = map.vertex_count();
  const double scale = scale_of(map);
  std::vector<double> out;
  for (int r = 0; r < reps; ++r) {
    const int a = static_cast<int>(uniform_below(rng, V));
    const int b = static_cast<int>(uniform_below(rng, V));
    out.push_back(a == b ? 0.0 : vertex_distances(map, a)[b] / scale);
  }
  return out;
}

double mean_distance(const CombinatorialMap& map, Rng& rng) {
  const int V = map.vertex_count();
  const auto d = vertex_distances(map, static_cast<int>(uniform_below(rng, V)));
  double sum = 0;
  for (int x : d) sum += x;
  return sum / V;
}

long LabelProfile::total() const {
  long s = 0;
  for (const auto& [k, c] : counts) s += c;
  return s;
}

double LabelProfile::rescaled(double x, int n) const {
  const double g = kGamma * std::pow(static_cast<double>(n), 0.25);
  const auto it = counts.find(static_cast<int>(std::floor(g * x)));
  return it == counts.end() ? 0.0 : g / n * it->second;
}

LabelProfile label_profile(const WellLabeledGTree& t) {
  LabelProfile p;
  for (int l : t.labels) ++p.counts[l];
  return p;
}

ScalingReport fit_distance_exponent(int g, const std::vector<int>& sizes, int reps, Rng& rng, int exact_limit,
                                    int threads, int resamples) {
  std::vector<int> distinct(sizes);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw Error(ErrorCode::InsufficientSizes, "need at least two distinct sizes");
  if (reps < 1) throw Error(ErrorCode::BadInput, "reps must be positive");
  ScalingReport rep;
  rep.genus = g;
  rep.sizes = sizes;
  const std::uint64_t base = rng();
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    SamplerConfig c;
    c.genus = g;
    c.n = sizes[si];
    c.exact_limit = exact_limit;
    c.mode = c.n <= exact_limit ? SamplerMode::Exact : SamplerMode::Asymptotic;
    std::vector<double> stat(reps);
    auto work = [&](int worker) {
      for (int r = worker; r < reps; r += threads) {
        Rng local(split_seed(base, si * 1'000'000ULL + r));
        const CombinatorialMap m = sample_quadrangulation(c, local);
        stat[r] = mean_distance(m, local);
      }
    };
    if (threads <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    rep.samples.push_back(std::move(stat));
  }
  std::vector<double> x(sizes.begin(), sizes.end());
  const SlopeEstimate s = log_log_slope(x, rep.samples, resamples, rng);
  rep.slope = s.slope;
  rep.ci_low = s.ci_low;
  rep.ci_high = s.ci_high;
  return rep;
}

VolumeReport ball_volume_exponent(const CombinatorialMap& map, int centers, Rng& rng) {
  if (centers < 1) throw Error(ErrorCode::BadInput, "centers must be positive");
  const double n = map.half_edge_count() / 4.0;
  const int V = map.vertex_count();
  const int r_lo = std::max(1, static_cast<int>(std::ceil(std::pow(n, 0.125))));
  const int r_hi = std::max(r_lo + 1, static_cast<int>(std::floor(std::pow(n, 0.25) / 2)));
  VolumeReport out;
  std::vector<double> total(r_hi + 1, 0.0);
  for (int c = 0; c < centers; ++c) {
    const auto d = vertex_distances(map, static_cast<int>(uniform_below(rng, V)));
    std::vector<long> at(r_hi + 2, 0);
    for (int x : d)
      if (x <= r_hi) ++at[x];
    long cum = 0;
    for (int r = 0; r <= r_hi; ++r) total[r] += cum += at[r];
  }
  std::vector<double> lx, ly;
  for (int r = r_lo; r <= r_hi; ++r) {
    const double v = total[r] / centers;
    if (v >= 0.5 * V) {
      out.trimmed = true;
      break;
    }
    out.radii.push_back(r);
    out.mean_volume.push_back(v);
    lx.push_back(std::log(r));
    ly.push_back(std::log(v));
  }
  if (lx.size() < 2) throw Error(ErrorCode::InsufficientSizes, "window holds fewer than two radii");
  out.slope = least_squares(lx, ly).slope;
  return out;
}

BaseCheck distance_to_base_check(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                                 const std::vector<int>& vertex_of) {
  BaseCheck r;
  const int n2 = t.tree.map().half_edge_count();
  int s = 0;
  for (int i = 1; i < n2; ++i)
    if (t.label_at_corner(i) < t.label_at_corner(s)) s = i;
  const int qs = vertex_of[t.tree.corner_vertex(s)];
  const auto from_base = vertex_distances(q.map, q.base);
  const auto from_s = vertex_distances(q.map, qs);
  if (from_base[qs] != 1) r.ok = false;
  for (int i = 0; i < n2; ++i) {
    ++r.corners;
    const int v = vertex_of[t.tree.corner_vertex(i)];
    const int rhs = t.label_at_corner(i) - t.label_at_corner(s) + 1;
    if (from_base[v] != rhs) ++r.failures;
    if (from_s[v] == rhs) ++r.literal_matches;
  }
  r.ok = r.ok && r.failures == 0;
  return r;
}

int corner_distance(const PointedQuadrangulation& q, const WellLabeledGTree& t, const std::vector<int>& vertex_of,
                    int i, int j) {
  return vertex_distances(q.map, vertex_of[t.tree.corner_vertex(i)])[vertex_of[t.tree.corner_vertex(j)]];
}

int corner_distance_bound(const WellLabeledGTree& t, int i, int j) { return distance_bounds_from(t, i)[j]; }

}  // namespace qmap
