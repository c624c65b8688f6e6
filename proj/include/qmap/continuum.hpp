#pragma once

#include <string>
#include <vector>

#include "qmap/random.hpp"
#include "qmap/scheme.hpp"

namespace qmap {

// A real path on [0, lifetime] sampled on a uniform grid of N steps.
struct PathSample {
  double lifetime = 1.0;
  std::vector<double> values;  // N + 1 entries

  int grid_size() const { return static_cast<int>(values.size()) - 1; }
  double time(int i) const { return lifetime * i / grid_size(); }
  // Linear interpolation; frozen after the lifetime.
  double at(double y) const;
};

Violation validate(const PathSample& p);

PathSample sample_brownian_bridge(double m, double l0, double l1, int N, Rng& rng);

// Rescaled uniform first-passage walk; walk_steps = 0 picks max(N^2, 1e4).
PathSample sample_fp_bridge(double m, double sigma, int N, Rng& rng, long walk_steps = 0);

enum class SnakeMode { Gaussian, Discrete };
inline constexpr int kSnakeGaussianMax = 2000;

struct SnakeHead {
  PathSample F;
  PathSample Z;
  SnakeMode mode = SnakeMode::Gaussian;
  int jitter_retries = 0;
};
// Gaussian mode (Cholesky) when N <= gaussian_max, discrete snake otherwise.
SnakeHead sample_snake_head(double m, double sigma, int N, Rng& rng, int gaussian_max = kSnakeGaussianMax);

// |sigma(f) - sigma(g)| + sup_y |f(y ^ sigma(f)) - g(y ^ sigma(g))|, exact
// for piecewise linear paths.
double d_K(const PathSample& f, const PathSample& g);

// Gaussian density with variance a, and -d/dx of the density with variance m at sigma.
double ga(double a, double x);
double minus_ga_prime(double m, double sigma);

struct SchemeLimitSample {
  Scheme scheme;
  std::vector<double> m;            // per scheme facial position, sums to 1
  std::vector<double> sigma;        // per scheme facial position, equal on both sides of an edge
  std::vector<double> node_labels;  // per scheme facial vertex, entry 0 is 0
  double u = 0.0;
};
Violation validate(const SchemeLimitSample& s);

// One importance-sampling draw and its weight (target density over proposal density).
struct WeightedLimitSample {
  SchemeLimitSample sample;
  double weight = 0.0;
};
WeightedLimitSample propose_mu(int g, Rng& rng);

struct UpsilonEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  long draws = 0;
  double effective_sample_size = 0.0;
};
UpsilonEstimate estimate_upsilon(int g, long draws, Rng& rng);

// Approximate draw from mu: resampling from `pool` weighted proposals.
inline constexpr int kMuPool = 2048;
SchemeLimitSample sample_mu(int g, Rng& rng, int pool = kMuPool);

std::string to_json(const SchemeLimitSample& s);
std::string to_csv(const PathSample& p);

}  // namespace qmap
