#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "qmap/forest.hpp"
#include "qmap/stats.hpp"

using namespace qmap;

TEST_SUITE("forest") {
  TEST_CASE("facial sequence") {
    CHECK(forest_facial_sequence(Forest(1, {{}, {}})) == std::vector<int>{0, 1});
    CHECK(forest_facial_sequence(Forest(1, {{2}, {}, {}})) == std::vector<int>{0, 2, 0, 1});
    CHECK(forest_facial_sequence(Forest(2, {{}, {3}, {}, {}})) == std::vector<int>{0, 1, 3, 1, 2});
    CHECK_THROWS_AS(Forest(1, {{}, {2}, {}}), Error);
  }

  TEST_CASE("empty forest contour") {
    const ContourPair cp = contour_pair({Forest(1, {{}, {}}), {0, 0}});
    CHECK(cp.C == std::vector<int>{1, 0});
    CHECK(cp.L == std::vector<int>{0, 0});
  }

  TEST_CASE("decode inverts the contour pair, exhaustively") {
    for (int sigma = 1; sigma <= 10; ++sigma)
      for (int m = 0; 2 * m + sigma <= 10; ++m) {
        const auto shapes = oracle::plane_forests(sigma, m);
        for (const auto& shape : shapes) {
          const Forest f = oracle::to_forest(shape);
          if (m <= 3) {
            for (const auto& lab : oracle::forest_labelings(f)) {
              const WellLabeledForest wf{f, lab};
              const ContourPair cp = contour_pair(wf);
              CHECK_FALSE(validate_contour(cp));
              CHECK(decode_contour(cp) == wf);
            }
          } else {
            const WellLabeledForest wf{f, std::vector<int>(f.node_count(), 0)};
            const ContourPair cp = contour_pair(wf);
            CHECK(cp.length() == 2 * m + sigma);
            CHECK(contour_tree_count(cp.C) == sigma);
            CHECK(contour_edge_count(cp.C) == m);
            CHECK(decode_contour(cp) == wf);
          }
        }
      }
  }

  TEST_CASE("malformed contours are rejected") {
    CHECK(validate_contour({{1, 2, 0}, {0, 0, 0}}));
    CHECK(validate_contour({{1, 0}, {0, 1}}));
    CHECK(validate_contour({{2, 1, 2, 0}, {0, 0, 0, 0}}));
  }

  TEST_CASE("count_forests matches enumeration for sigma + 2m <= 12") {
    CHECK(count_forests(1, 0) == 1);
    CHECK(count_forests(1, 2) == 2);
    CHECK(count_forests(2, 1) == 2);
    for (int sigma = 1; sigma <= 12; ++sigma)
      for (int m = 0; sigma + 2 * m <= 12; ++m) {
        CAPTURE(sigma);
        CAPTURE(m);
        const auto n = static_cast<long>(oracle::plane_forests(sigma, m).size());
        CHECK(count_forests(sigma, m) == n);
        CHECK(log_count_forests(sigma, m) == doctest::Approx(std::log(static_cast<double>(n))));
      }
  }

  TEST_CASE("Motzkin counts") {
    CHECK(motzkin_count(2, 0) == 3);
    CHECK(motzkin_count(1, 1) == 1);
    CHECK(motzkin_count(3, 3) == 1);
    CHECK(motzkin_count(3, 4) == 0);
    for (int len = 0; len <= 9; ++len)
      for (int e = -len - 1; e <= len + 1; ++e) CHECK(motzkin_count(len, e) == oracle::motzkin_brute(len, e));
  }

  TEST_CASE("a contour with seven trees and twenty edges has 48 samples") {
    Rng rng(3);
    const auto C = sample_forest_contour(7, 20, rng);
    const ContourPair cp{C, sample_contour_labels(C, rng)};
    CHECK(cp.C.size() == 48);
    CHECK_FALSE(validate_contour(cp));
    const auto wf = decode_contour(cp);
    CHECK(wf.forest.tree_count() == 7);
    CHECK(wf.forest.tree_edge_count() == 20);
    CHECK(contour_pair(wf) == cp);
  }

  TEST_CASE("forest contour sampler is uniform") {
    Rng rng(17);
    const auto shapes = oracle::plane_forests(2, 3);
    std::map<std::vector<int>, int> index;
    for (const auto& s : shapes)
      index.emplace(contour_pair({oracle::to_forest(s), std::vector<int>(6, 0)}).C, static_cast<int>(index.size()));
    REQUIRE(index.size() == 14);
    std::vector<long> counts(index.size(), 0);
    for (int k = 0; k < 28000; ++k) ++counts.at(index.at(sample_forest_contour(2, 3, rng)));
    CHECK(chi_square_gof(counts, std::vector<double>(14, 1.0 / 14)).p_value > 0.001);
  }

  TEST_CASE("Motzkin bridge sampler is uniform") {
    Rng rng(5);
    std::map<std::vector<int>, long> seen;
    for (int k = 0; k < 19000; ++k) {
      const auto M = sample_motzkin_bridge(4, 1, rng);
      CHECK_FALSE(validate(M));
      REQUIRE(M.values.back() == 1);
      ++seen[M.values];
    }
    REQUIRE(seen.size() == 16);
    std::vector<long> counts;
    for (const auto& [k, c] : seen) counts.push_back(c);
    CHECK(chi_square_gof(counts, std::vector<double>(16, 1.0 / 16)).p_value > 0.001);
  }

  TEST_CASE("running minimum") {
    CHECK(running_min({3, 4, 2, 5, 1}) == std::vector<int>{3, 3, 2, 2, 1});
  }
}
