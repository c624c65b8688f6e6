#include "qmap/verify.hpp"

#include <algorithm>
#include <functional>

#include "qmap/chapuy.hpp"
#include "qmap/cms.hpp"
#include "qmap/enumerate.hpp"
#include "qmap/scheme.hpp"

namespace qmap {

std::vector<std::string> suite_names() { return {"roundtrip", "euler", "bound", "labels", "chapuy", "decomposition"}; }

namespace {

struct Tally {
  SuiteReport& r;
  void check(bool ok, const std::string& what) {
    ++r.checked;
    if (ok) return;
    if (r.violations++ == 0) r.first_failure = what;
  }
};

std::string where(int n, std::size_t i) { return "n=" + std::to_string(n) + " object " + std::to_string(i); }

void roundtrip(Tally& t, int g, int n) {
  const auto trees = enumerate_wl_gtrees(g, n);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (int eps : {-1, 1}) {
      const CmsPreimage back = cms_inverse(cms_forward(trees[i], eps));
      t.check(back.tree == trees[i] && back.epsilon == eps, "inverse(forward) differs at " + where(n, i));
    }
  const auto quads = enumerate_pointed_quadrangulations(g, n);
  for (std::size_t i = 0; i < quads.size(); ++i) {
    const CmsPreimage pre = cms_inverse(quads[i]);
    t.check(cms_forward(pre.tree, pre.epsilon) == quads[i], "forward(inverse) differs at " + where(n, i));
  }
  t.check(quads.size() == 2 * trees.size(), "pointed quadrangulations are not twice the labeled trees at n=" +
                                                std::to_string(n));
}

void euler(Tally& t, int g, int n) {
  for (const auto& tree : enumerate_wl_gtrees(g, n))
    for (int eps : {-1, 1}) {
      const auto q = cms_forward(tree, eps);
      t.check(genus(q.map) == g && q.map.vertex_count() == n + 2 - 2 * g && is_bipartite_quadrangulation(q.map),
              "genus, vertex count or face degrees wrong at n=" + std::to_string(n));
    }
}

void bound(Tally& t, int g, int n) {
  for (const auto& tree : enumerate_wl_gtrees(g, n)) {
    std::vector<int> vertex_of;
    const auto q = cms_forward(tree, 1, &vertex_of);
    for (int i = 0; i < 2 * n; ++i) {
      const auto dist = vertex_distances(q.map, vertex_of[tree.tree.corner_vertex(i)]);
      const auto bounds = distance_bounds_from(tree, i);
      for (int j = 0; j < 2 * n; ++j)
        t.check(dist[vertex_of[tree.tree.corner_vertex(j)]] <= bounds[j],
                "distance bound fails at n=" + std::to_string(n) + " corners " + std::to_string(i) + "," +
                    std::to_string(j));
    }
  }
}

void labels(Tally& t, int g, int n) {
  for (const auto& tree : enumerate_wl_gtrees(g, n)) {
    t.check(!validate_labels(tree), "invalid labeling enumerated at n=" + std::to_string(n));
    for (int eps : {-1, 1}) {
      std::vector<int> vertex_of;
      const auto q = cms_forward(tree, eps, &vertex_of);
      t.check(distance_label_identity(q, tree, vertex_of), "labels differ from distances at n=" + std::to_string(n));
    }
  }
}

void chapuy(Tally& t, int g, int n) {
  if (g == 0) return;
  for (const auto& tree : enumerate_wl_gtrees(g, n)) {
    if (!decompose(tree.tree).scheme.dominant) continue;
    t.check(static_cast<int>(intertwined_nodes(tree.tree).size()) == 2 * g, "wrong intertwined node count");
    for (const auto& seq : opening_sequences(tree.tree)) {
      const TreeWithTriples w = open(tree, seq);
      t.check(!validate(w), "opened tree fails validation");
      const GluedTree back = glue(w);
      t.check(back.tree == tree && back.sequence == seq, "glue(open) differs at n=" + std::to_string(n));
      t.check(opened_contour_direct(w) ==
                  opened_contour_via_formulas(decompose_labeled(tree), scheme_sequence(tree.tree, seq)),
              "opened contour formulas differ at n=" + std::to_string(n));
    }
  }
}

void decomposition(Tally& t, int g, int n) {
  if (g == 0) return;
  for (const auto& tree : enumerate_wl_gtrees(g, n)) {
    const Decomposition d = decompose_labeled(tree);
    t.check(!validate(d), "decomposition fails validation");
    t.check(d.edge_count() == n, "sizes do not add up to n");
    t.check(recompose_labeled(d) == tree, "recompose(decompose) differs at n=" + std::to_string(n));
  }
}

}  // namespace

SuiteReport run_suite(const std::string& name, int g, int max_n) {
  static const std::vector<std::pair<std::string, std::function<void(Tally&, int, int)>>> suites{
      {"roundtrip", roundtrip}, {"euler", euler},   {"bound", bound},
      {"labels", labels},       {"chapuy", chapuy}, {"decomposition", decomposition}};
  const auto it = std::find_if(suites.begin(), suites.end(), [&](const auto& s) { return s.first == name; });
  if (it == suites.end()) throw Error(ErrorCode::BadInput, "unknown suite '" + name + "'");
  if (g < 0 || max_n < 1) throw Error(ErrorCode::BadInput, "need genus >= 0 and max-n >= 1");
  SuiteReport r;
  r.suite = name;
  Tally t{r};
  for (int n = std::max(1, 2 * g); n <= max_n; ++n) it->second(t, g, n);
  return r;
}

}  // namespace qmap
