#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qmap/enumerate.hpp"
#include "qmap/sampling.hpp"
#include "qmap/scheme.hpp"

using namespace qmap;

namespace {

// Corner labels of the whole tree read as the concatenation of the label
// contours, in scheme facial order (starting u corners before the root).
std::vector<int> concatenated_labels(const Decomposition& d) {
  std::vector<int> out;
  for (int p = 0; p < static_cast<int>(d.forests.size()); ++p) {
    const auto lab = label_contour(d, p);
    const int base = d.node_labels[d.scheme.tree.corner_vertex(p)];
    for (std::size_t i = 0; i + 1 < lab.size(); ++i) out.push_back(base + lab[i]);
  }
  return out;
}

}  // namespace

TEST_SUITE("scheme") {
  TEST_CASE("genus-1 schemes") {
    const auto& schemes = enumerate_schemes(1);
    const auto torus = GTree::from_gluing_word("a b a b");
    CHECK(std::any_of(schemes.begin(), schemes.end(), [&](const Scheme& s) { return s.tree == torus; }));
    for (const auto& s : schemes) {
      CHECK(is_scheme(s.tree));
      CHECK(s.tree.genus() == 1);
      if (s.dominant) {
        CHECK(s.tree.edge_count() == 3);
        CHECK(s.tree.vertex_count() == 2);
      }
    }
    CHECK_FALSE(is_scheme(GTree::from_gluing_word("a b c a b c d d")));
    CHECK_THROWS_AS(make_scheme(GTree::from_gluing_word("a a")), Error);
  }

  TEST_CASE("scheme counts agree with a rotation-system enumeration") {
    const auto& schemes = enumerate_schemes(1);
    for (int E = 1; E <= 3; ++E) {
      const auto c = std::count_if(schemes.begin(), schemes.end(), [&](const Scheme& s) { return s.tree.edge_count() == E; });
      CHECK(c == oracle::count_schemes_by_rotations(1, E));
    }
    for (const auto& s : enumerate_dominant_schemes(2)) {
      CHECK(s.tree.edge_count() == 9);
      CHECK(s.tree.vertex_count() == 6);
    }
    CHECK_THROWS_AS(enumerate_schemes(0), Error);
  }

  TEST_CASE("dominant scheme counts follow 2 (6g-3)! / (12^g g! (3g-2)!)") {
    const auto formula = [](int g) {
      double x = 2;
      for (int k = 2; k <= 6 * g - 3; ++k) x *= k;
      for (int k = 1; k <= g; ++k) x /= 12.0 * k;
      for (int k = 2; k <= 3 * g - 2; ++k) x /= k;
      return static_cast<long>(std::llround(x));
    };
    for (int g = 1; g <= max_dominant_scheme_genus(); ++g)
      CHECK(static_cast<long>(enumerate_dominant_schemes(g).size()) == formula(g));
  }

  TEST_CASE("the torus tree is its own scheme") {
    const auto t = GTree::from_gluing_word("a b a b");
    const ForestTriple tr = decompose(t);
    CHECK(tr.scheme.tree == t);
    for (const auto& c : tr.contours) CHECK(c == std::vector<int>{1, 0});
    const Decomposition d = decompose_labeled({t, {0}});
    CHECK(d.edge_count() == 2);
    CHECK_THROWS_AS(decompose(GTree::from_gluing_word("a a")), Error);
  }

  TEST_CASE("recompose inverts decompose for genus 1, n <= 4") {
    for (int n = 2; n <= 4; ++n) {
      for (const auto& t : enumerate_gtrees(1, n)) CHECK(recompose(decompose(t)) == t);
      for (const auto& t : enumerate_wl_gtrees(1, n)) {
        const Decomposition d = decompose_labeled(t);
        CHECK_FALSE(validate(d));
        CHECK(d.edge_count() == n);
        CHECK(recompose_labeled(d) == t);
        const auto lab = concatenated_labels(d);
        const int n2 = 2 * n;
        REQUIRE(static_cast<int>(lab.size()) == n2);
        for (int j = 0; j < n2; ++j) CHECK(t.label_at_corner(j) == lab[(j + d.u) % n2] - lab[d.u]);
      }
    }
  }

  TEST_CASE("label contour endpoints and trivial forests") {
    Rng rng(8);
    for (int k = 0; k < 30; ++k) {
      const auto t = sample_wl_gtree_exact(2, 40, rng);
      const Decomposition d = decompose_labeled(t);
      const GTree& s = d.scheme.tree;
      for (int p = 0; p < s.map().half_edge_count(); ++p) {
        const auto lab = label_contour(d, p);
        CHECK(lab.front() == 0);
        CHECK(lab.back() == d.node_labels[s.corner_vertex(p + 1)] - d.node_labels[s.corner_vertex(p)]);
        if (d.m(p) == 0)
          for (std::size_t i = 0; i < lab.size(); ++i) CHECK(lab[i] == d.motzkin[p].values[i]);
      }
    }
  }

  TEST_CASE("an instance with two nodes and root offset 10") {
    Rng rng(12);
    bool done = false;
    for (int k = 0; k < 200 && !done; ++k) {
      Decomposition d = decompose_labeled(sample_wl_gtree_exact(1, 60, rng));
      if (!d.scheme.dominant || 2 * d.m(0) + d.sigma(0) <= 10) continue;
      d.u = 10;
      const auto t = recompose_labeled(d);
      const Decomposition back = decompose_labeled(t);
      CHECK(back.u == 10);
      CHECK(back.scheme.tree.vertex_count() == 2);
      CHECK(back == d);
      done = true;
    }
    CHECK(done);
  }

  TEST_CASE("broken Motzkin reversal is rejected") {
    Rng rng(4);
    Decomposition d = decompose_labeled(sample_wl_gtree_exact(1, 30, rng));
    const int p = 0;
    const int q = d.scheme.tree.pairing()[p];
    auto& vals = d.motzkin[q].values;
    REQUIRE(vals.size() >= 3);
    // Change one interior step pair so the endpoint is kept.
    bool changed = false;
    for (std::size_t i = 1; i + 1 < vals.size() && !changed; ++i)
      if (vals[i - 1] == vals[i] && vals[i] == vals[i + 1]) {
        vals[i] += 1;
        changed = true;
      } else if (vals[i] - vals[i - 1] == 1 && vals[i + 1] - vals[i] == -1) {
        vals[i] -= 1;
        changed = true;
      } else if (vals[i] - vals[i - 1] == -1 && vals[i + 1] - vals[i] == 1) {
        vals[i] += 1;
        changed = true;
      }
    if (!changed) vals.back() += 1;
    const auto err = validate(d);
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::IncompatibleQuadruple);
    CHECK_THROWS_AS(recompose_labeled(d), Error);
  }
}
