#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "qmap/continuum.hpp"
#include "qmap/stats.hpp"

using namespace qmap;

namespace {

double occupation_above_zero(const std::vector<double>& v) {
  int above = 0;
  for (std::size_t i = 1; i < v.size(); ++i) above += v[i] > 0;
  return static_cast<double>(above) / (v.size() - 1);
}

// Simple random walk conditioned by rejection to first hit -s at step K.
std::vector<double> rejection_fp_walk(int K, int s, Rng& rng) {
  std::vector<double> v(K + 1);
  for (;;) {
    int x = 0;
    bool ok = true;
    for (int i = 1; i <= K && ok; ++i) {
      x += (rng() & 1) ? 1 : -1;
      v[i] = x;
      ok = x > -s || i == K;
    }
    if (ok && x == -s) return v;
  }
}

// Var(l^e | sigma) for every position: effective resistance of the scheme
// graph with edge resistances sigma, loops excluded.
std::vector<double> resistances(const SchemeLimitSample& s) {
  const GTree& t = s.scheme.tree;
  const int V = t.vertex_count();
  const int k = static_cast<int>(s.sigma.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(V, V);
  const auto partner = t.pairing();
  for (int p = 0; p < k; ++p) {
    if (partner[p] < p) continue;
    const int a = t.corner_vertex(p), b = t.corner_vertex(p + 1);
    if (a == b) continue;
    const double w = 1.0 / s.sigma[p];
    L(a, a) += w;
    L(b, b) += w;
    L(a, b) -= w;
    L(b, a) -= w;
  }
  const Eigen::MatrixXd G = L.bottomRightCorner(V - 1, V - 1).inverse();
  std::vector<double> out(k);
  for (int p = 0; p < k; ++p) {
    const int a = t.corner_vertex(p), b = t.corner_vertex(p + 1);
    auto g = [&](int i, int j) { return i == 0 || j == 0 ? 0.0 : G(i - 1, j - 1); };
    out[p] = g(a, a) + g(b, b) - 2 * g(a, b);
  }
  return out;
}

}  // namespace

TEST_SUITE("continuum") {
  TEST_CASE("bridge endpoints and grid") {
    Rng rng(1);
    const PathSample one = sample_brownian_bridge(2.0, 0.5, -1.5, 1, rng);
    CHECK(one.values == std::vector<double>{0.5, -1.5});
    const PathSample p = sample_brownian_bridge(3.0, 1.0, 2.0, 30, rng);
    CHECK_FALSE(validate(p));
    CHECK(p.values.front() == 1.0);
    CHECK(p.values.back() == 2.0);
    CHECK(p.time(30) == 3.0);
    CHECK(p.at(5.0) == 2.0);
    CHECK_THROWS_AS(sample_brownian_bridge(0.0, 0, 0, 4, rng), Error);
  }

  TEST_CASE("bridge midpoint variance is m/4 and the mean is the chord") {
    Rng rng(2);
    const double m = 2.0;
    const int draws = 100000;
    std::vector<double> mid, quarter;
    for (int k = 0; k < draws; ++k) {
      const auto p = sample_brownian_bridge(m, 0.0, 0.0, 4, rng);
      mid.push_back(p.values[2]);
      quarter.push_back(sample_brownian_bridge(m, 1.0, 3.0, 4, rng).values[1]);
    }
    const double v = variance(mid);
    CHECK(std::abs(v - m / 4) < 3 * (m / 4) * std::sqrt(2.0 / draws));
    const double sd = std::sqrt(m * 0.25 * 0.75);
    CHECK(std::abs(mean(quarter) - 1.5) < 3 * sd / std::sqrt(draws));
  }

  TEST_CASE("first-passage bridge constraints") {
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
      const auto p = sample_fp_bridge(1.5, 0.7, 100, rng);
      CHECK(p.values.front() == 0.0);
      CHECK(p.values.back() == -0.7);
      CHECK(*std::min_element(p.values.begin(), p.values.end() - 1) > -0.7);
    }
    CHECK_THROWS_AS(sample_fp_bridge(1.0, 0.0, 10, rng), Error);
  }

  TEST_CASE("first-passage bridge occupation time matches a rejection reference") {
    Rng rng(4);
    const int K = 400, s = 20;  // sigma = s / sqrt(K) = 1 at m = 1
    std::vector<double> ref, fp;
    for (int k = 0; k < 500; ++k) {
      ref.push_back(occupation_above_zero(rejection_fp_walk(K, s, rng)));
      fp.push_back(occupation_above_zero(sample_fp_bridge(1.0, 1.0, 400, rng).values));
    }
    CHECK(ks_two_sample(ref, fp).p_value > 0.001);
  }

  TEST_CASE("snake head: zero variance on the floor, covariance inf of F minus its running minimum") {
    Rng rng(5);
    const int N = 60, draws = 6000;
    const std::vector<std::pair<int, int>> pairs{{3, 7},   {5, 5},   {10, 30}, {12, 13}, {15, 45}, {20, 21}, {22, 40},
                                                 {25, 26}, {28, 50}, {30, 31}, {31, 59}, {33, 35}, {36, 48}, {40, 41},
                                                 {42, 55}, {44, 46}, {47, 52}, {50, 51}, {53, 58}, {1, 59}};
    std::vector<std::vector<double>> diff(pairs.size());
    for (int k = 0; k < draws; ++k) {
      const SnakeHead h = sample_snake_head(1.0, 0.8, N, rng);
      CHECK(h.mode == SnakeMode::Gaussian);
      std::vector<double> H(N + 1);
      double low = h.F.values[0];
      for (int i = 0; i <= N; ++i) {
        low = std::min(low, h.F.values[i]);
        H[i] = h.F.values[i] - low;
        if (H[i] == 0.0 && h.jitter_retries == 0) CHECK(h.Z.values[i] == 0.0);
      }
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [a, b] = pairs[q];
        const double c = *std::min_element(H.begin() + a, H.begin() + b + 1);
        diff[q].push_back(h.Z.values[a] * h.Z.values[b] - c);
      }
    }
    // 3 sigma family-wise over the 20 pairs (Bonferroni): about 4.0 per pair
    for (const auto& d : diff) CHECK(std::abs(mean(d)) < 4.0 * std::sqrt(variance(d) / draws));
  }

  TEST_CASE("discrete snake mode above the Gaussian limit") {
    Rng rng(6);
    const SnakeHead h = sample_snake_head(1.0, 1.0, 50, rng, 10);
    CHECK(h.mode == SnakeMode::Discrete);
    CHECK(h.Z.values.size() == 51);
    CHECK(h.Z.values.front() == 0.0);
  }

  TEST_CASE("d_K") {
    Rng rng(7);
    const PathSample f = sample_brownian_bridge(1.0, 0, 0, 20, rng);
    CHECK(d_K(f, f) == 0.0);
    const PathSample zero1{1.0, {0.0, 0.0}}, zero2{2.0, {0.0, 0.0, 0.0}};
    CHECK(d_K(zero1, zero2) == doctest::Approx(1.0));
    for (int k = 0; k < 100; ++k) {
      const PathSample a = sample_brownian_bridge(0.5 + uniform01(rng), 0, 0, 7, rng);
      const PathSample b = sample_brownian_bridge(0.5 + uniform01(rng), 0, 1, 11, rng);
      const PathSample c = sample_fp_bridge(0.5 + uniform01(rng), 1.0, 5, rng);
      CHECK(d_K(a, b) == doctest::Approx(d_K(b, a)));
      CHECK(d_K(a, c) <= d_K(a, b) + d_K(b, c) + 1e-12);
      CHECK(d_K(a, b) >= 0.0);
    }
  }

  TEST_CASE("Gaussian densities") {
    CHECK(ga(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)));
    CHECK(minus_ga_prime(2.0, 1.0) == doctest::Approx(0.5 * ga(2.0, 1.0)));
  }

  TEST_CASE("limit samples satisfy their constraints") {
    Rng rng(8);
    for (int g = 1; g <= 2; ++g)
      for (int k = 0; k < 200; ++k) {
        const SchemeLimitSample s = k % 2 ? sample_mu(g, rng, 64) : propose_mu(g, rng).sample;
        CHECK_FALSE(validate(s));
        double total = 0;
        for (double x : s.m) total += x;
        CHECK(total == doctest::Approx(1.0));
        CHECK(s.u < s.m[0]);
        CHECK(s.node_labels[0] == 0.0);
        CHECK(s.scheme.dominant);
      }
  }

  TEST_CASE("edge label marginal given sigma is centred Gaussian with resistance variance") {
    Rng rng(9);
    std::vector<double> z;
    for (int k = 0; k < 3000; ++k) {
      const SchemeLimitSample s = propose_mu(1 + k % 2, rng).sample;
      const auto R = resistances(s);
      for (std::size_t p = 0; p < R.size(); ++p) {
        CHECK(R[p] <= s.sigma[p] * (1 + 1e-9));
        if (R[p] <= 0) continue;
        const int a = s.scheme.tree.corner_vertex(static_cast<int>(p));
        const int b = s.scheme.tree.corner_vertex(static_cast<int>(p) + 1);
        if (p == 0) z.push_back((s.node_labels[b] - s.node_labels[a]) / std::sqrt(R[p]));
      }
    }
    CHECK(ks_one_sample(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }).p_value > 0.01);
  }

  TEST_CASE("Upsilon estimate") {
    Rng rng(10);
    const UpsilonEstimate e = estimate_upsilon(1, 20000, rng);
    CHECK(e.value > 0);
    CHECK(e.standard_error < 0.1 * e.value);
    CHECK(e.effective_sample_size > 1000);
    CHECK(e.draws == 20000);
  }

  TEST_CASE("serialisation") {
    Rng rng(11);
    const auto s = sample_mu(1, rng, 32);
    CHECK(to_json(s).find("\"sigma\"") != std::string::npos);
    const auto csv = to_csv(sample_brownian_bridge(1.0, 0, 0, 4, rng));
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 5);
  }
}
