#include <chrono>
#include <map>

#include "doctest.h"
#include "qmap/enumerate.hpp"
#include "qmap/sampling.hpp"
#include "qmap/stats.hpp"

using namespace qmap;

namespace {

template <class Key>
double uniformity_p(const std::vector<Key>& universe, long draws, const std::function<Key()>& draw) {
  std::map<Key, long> index;
  for (const auto& k : universe) index.emplace(k, static_cast<long>(index.size()));
  REQUIRE(index.size() == universe.size());
  std::vector<long> counts(universe.size(), 0);
  for (long d = 0; d < draws; ++d) {
    const auto it = index.find(draw());
    REQUIRE(it != index.end());
    ++counts[it->second];
  }
  return chi_square_gof(counts, std::vector<double>(universe.size(), 1.0 / universe.size())).p_value;
}

std::vector<std::string> texts(const std::vector<WellLabeledGTree>& v) {
  std::vector<std::string> out;
  for (const auto& t : v) out.push_back(to_text(t));
  return out;
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("configuration checks") {
    SamplerConfig c;
    c.genus = 4;
    REQUIRE(validate(c));
    CHECK(validate(c)->code() == ErrorCode::GenusOutOfRange);
    c.genus = 1;
    c.n = 5000;
    REQUIRE(validate(c));
    CHECK(validate(c)->code() == ErrorCode::TooLarge);
    c.mode = SamplerMode::Asymptotic;
    CHECK_FALSE(validate(c));
    c.n = 4;
    CHECK(validate(c));
    CHECK(parse_sampler_mode("exact") == SamplerMode::Exact);
    CHECK(parse_sampler_mode(to_string(SamplerMode::Asymptotic)) == SamplerMode::Asymptotic);
    CHECK_THROWS_AS(parse_sampler_mode("fast"), Error);
    Rng rng(1);
    CHECK_THROWS_AS(sample_wl_gtree_exact(1, 5000, rng), Error);
  }

  TEST_CASE("plane trees are uniform") {
    Rng rng(40);
    CHECK(sample_plane_tree(1, rng) == GTree::from_gluing_word("a a"));
    for (int n = 2; n <= 4; ++n) {
      std::vector<std::string> words;
      for (const auto& t : enumerate_gtrees(0, n)) words.push_back(t.gluing_word_text());
      CHECK(uniformity_p<std::string>(words, 20000, [&] { return sample_plane_tree(n, rng).gluing_word_text(); }) >
            0.001);
    }
  }

  TEST_CASE("labels of a fixed tree are uniform") {
    Rng rng(41);
    const auto edge = GTree::from_gluing_word("a a");
    CHECK(uniformity_p<std::string>(texts(enumerate_wl_gtrees(0, 1)), 30000,
                                    [&] { return to_text(sample_labels(edge, rng)); }) > 0.001);
    const auto cherry = GTree::from_gluing_word("a a b b");
    std::vector<std::string> all;
    for (const auto& lab : enumerate_labelings(cherry)) all.push_back(to_text({cherry, lab}));
    CHECK(all.size() == 9);
    CHECK(uniformity_p<std::string>(all, 27000, [&] { return to_text(sample_labels(cherry, rng)); }) > 0.001);
    for (const auto& t : enumerate_gtrees(1, 4)) {
      std::vector<std::string> labs;
      for (const auto& lab : enumerate_labelings(t)) labs.push_back(to_text({t, lab}));
      if (labs.size() < 5) continue;
      CHECK(uniformity_p<std::string>(labs, 200 * static_cast<long>(labs.size()),
                                      [&] { return to_text(sample_labels(t, rng)); }) > 0.001);
      break;
    }
  }

  TEST_CASE("label increments of a large plane tree are uniform") {
    Rng rng(42);
    std::vector<long> counts(3, 0);
    for (int k = 0; k < 50; ++k) {
      const auto t = sample_labels(sample_plane_tree(100, rng), rng);
      // every edge is walked once each way; the step law is symmetric
      for (int i = 0; i < 200; ++i) ++counts.at(t.label_at_corner(i + 1) - t.label_at_corner(i) + 1);
    }
    CHECK(chi_square_gof(counts, {1.0 / 3, 1.0 / 3, 1.0 / 3}).p_value > 0.001);
  }

  TEST_CASE("exact sampler is uniform on small sizes") {
    Rng rng(43);
    for (int k = 0; k < 20; ++k) {
      const auto t = sample_wl_gtree_exact(1, 2, rng);
      CHECK(t.tree == GTree::from_gluing_word("a b a b"));
    }
    for (auto [g, n, draws] : std::vector<std::tuple<int, int, long>>{{1, 3, 15000}, {1, 4, 30000}, {2, 4, 10000}})
      CHECK(uniformity_p<std::string>(texts(enumerate_wl_gtrees(g, n)), draws,
                                      [&] { return to_text(sample_wl_gtree_exact(g, n, rng)); }) > 0.001);
  }

  TEST_CASE("outputs are valid with the right genus and size") {
    Rng rng(44);
    for (int g = 1; g <= 3; ++g)
      for (auto mode : {SamplerMode::Exact, SamplerMode::Asymptotic}) {
        if (g == 3 && mode == SamplerMode::Exact) {
          CHECK_THROWS_AS(sample_wl_gtree_exact(3, 300, rng), Error);
          continue;
        }
        SamplerConfig c;
        c.genus = g;
        c.n = 300;
        c.mode = mode;
        for (int k = 0; k < 5; ++k) {
          const auto t = sample_wl_gtree(c, rng);
          CHECK_FALSE(validate_labels(t));
          CHECK(t.tree.genus() == g);
          CHECK(t.tree.edge_count() == 300);
        }
      }
  }

  TEST_CASE("asymptotic size vectors add up") {
    Rng rng(45);
    for (int k = 0; k < 50; ++k) {
      const int n = 20 + 37 * k;
      const SizeVector s = sample_sizes_asymptotic(1 + k % 2, n, rng);
      long total = 0;
      for (std::size_t p = 0; p < s.m.size(); ++p) {
        CHECK(s.sigma[p] >= 1);
        CHECK(s.m[p] >= 0);
        total += 2L * s.m[p] + s.sigma[p];
      }
      CHECK(total == 2L * n);
    }
  }

  TEST_CASE("asymptotic sigma at the root matches the exact sampler") {
    Rng rng(46);
    std::vector<double> exact, approx;
    const int n = 2000;
    for (int k = 0; k < 300; ++k) {
      exact.push_back(sample_sizes_exact(1, n, rng).sigma[0] / std::sqrt(2.0 * n));
      approx.push_back(sample_sizes_asymptotic(1, n, rng).sigma[0] / std::sqrt(2.0 * n));
    }
    CHECK(ks_two_sample(exact, approx).p_value > 0.01);
  }

  TEST_CASE("pointed and rooted quadrangulations are uniform") {
    Rng rng(47);
    SamplerConfig c;
    c.genus = 1;
    c.n = 3;
    std::vector<std::string> pointed, rooted;
    for (const auto& q : enumerate_pointed_quadrangulations(1, 3)) pointed.push_back(to_json(q));
    for (const auto& m : enumerate_quadrangulations(1, 3)) rooted.push_back(to_json(m));
    CHECK(uniformity_p<std::string>(pointed, 30000, [&] {
            const auto s = sample_pointed_quadrangulation(c, rng);
            CHECK(is_bipartite_quadrangulation(s.pointed.map));
            return to_json(s.pointed);
          }) > 0.001);
    CHECK(uniformity_p<std::string>(rooted, 20000, [&] { return to_json(sample_quadrangulation(c, rng).canonical()); }) >
          0.001);
  }

  TEST_CASE("asymptotic throughput") {
    Rng rng(48);
    SamplerConfig c;
    c.genus = 1;
    c.n = 100000;
    c.mode = SamplerMode::Asymptotic;
    sample_wl_gtree(c, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = sample_wl_gtree(c, rng);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(t.tree.edge_count() == 100000);
    CHECK(100000 / secs >= 1e5);
  }
}
