#include "qmap/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace qmap {

std::uint64_t double_factorial_odd(int k) {
  std::uint64_t r = 1;
  for (int i = 3; i <= k; i += 2) {
    if (r > UINT64_MAX / static_cast<std::uint64_t>(i)) return UINT64_MAX;
    r *= i;
  }
  return r;
}

namespace {

void guard(int points, std::uint64_t budget) {
  if (double_factorial_odd(points - 1) > budget)
    throw Error(ErrorCode::TooLarge, std::to_string(points) + " points have too many pairings to scan");
}

// Calls visit(partner) for every perfect matching of 0..k-1.
void for_each_matching(int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> partner(k, -1);
  std::function<void()> rec = [&]() {
    int p = 0;
    while (p < k && partner[p] >= 0) ++p;
    if (p == k) {
      visit(partner);
      return;
    }
    for (int q = p + 1; q < k; ++q) {
      if (partner[q] >= 0) continue;
      partner[p] = q;
      partner[q] = p;
      rec();
      partner[p] = partner[q] = -1;
    }
  };
  rec();
}

int polygon_vertex_count(const std::vector<int>& partner) {
  const int k = static_cast<int>(partner.size());
  std::vector<char> seen(k, 0);
  int cycles = 0;
  for (int q = 0; q < k; ++q) {
    if (seen[q]) continue;
    ++cycles;
    for (int x = q; !seen[x]; x = (partner[x] + 1) % k) seen[x] = 1;
  }
  return cycles;
}

}  // namespace

std::vector<GTree> enumerate_gtrees(int g, int n, std::uint64_t budget) {
  if (n < 1 || g < 0) throw Error(ErrorCode::BadInput, "need n >= 1 and g >= 0");
  guard(2 * n, budget);
  std::vector<std::vector<int>> found;
  for_each_matching(2 * n, [&](const std::vector<int>& partner) {
    if (polygon_vertex_count(partner) == n + 1 - 2 * g) found.push_back(partner);
  });
  std::sort(found.begin(), found.end());
  std::vector<GTree> out;
  out.reserve(found.size());
  for (const auto& p : found) out.push_back(GTree::from_pairing(p));
  return out;
}

std::vector<std::vector<int>> enumerate_labelings(const GTree& t) {
  const CombinatorialMap& m = t.map();
  const int V = t.vertex_count();
  // Spanning tree by BFS over facial ids; labels propagate along it and the
  // remaining edges are checked afterwards.
  std::vector<int> parent(V, -1), order{0};
  std::vector<char> seen(V, 0);
  seen[0] = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int h : m.half_edges_of_vertex(t.map_vertex(order[k]))) {
      const int w = t.facial_vertex(h ^ 1);
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = order[k];
        order.push_back(w);
      }
    }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> labels(V, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == V) {
      for (int h = 0; h < m.half_edge_count(); h += 2)
        if (std::abs(labels[t.facial_vertex(h)] - labels[t.facial_vertex(h ^ 1)]) > 1) return;
      out.push_back(labels);
      return;
    }
    const int v = order[k];
    for (int d = -1; d <= 1; ++d) {
      labels[v] = labels[parent[v]] + d;
      rec(k + 1);
    }
  };
  rec(1);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<WellLabeledGTree> enumerate_wl_gtrees(int g, int n, std::uint64_t budget) {
  std::vector<WellLabeledGTree> out;
  for (const GTree& t : enumerate_gtrees(g, n, budget))
    for (auto& l : enumerate_labelings(t)) out.push_back(WellLabeledGTree{t, std::move(l)});
  return out;
}

std::vector<CombinatorialMap> enumerate_quadrangulations(int g, int n, std::uint64_t budget) {
  if (n < 1 || g < 0) throw Error(ErrorCode::BadInput, "need n >= 1 and g >= 0");
  guard(4 * n, budget);
  const int k = 4 * n;
  std::set<std::vector<int>> seen;
  std::vector<CombinatorialMap> out;
  std::vector<int> next(k);
  for_each_matching(k, [&](const std::vector<int>& opp) {
    // Side j of square f is half-edge 4f+j; the face successor of h is
    // next(opp(h)), so next(x) = side after opp(x) on its square.
    for (int x = 0; x < k; ++x) {
      const int y = opp[x];
      next[x] = (y & ~3) | ((y + 1) & 3);
    }
    if (validate(opp, next)) return;
    CombinatorialMap m = CombinatorialMap::from_permutations(opp, next, 0);
    if (m.vertex_count() != n + 2 - 2 * g) return;
    if (!is_bipartite_quadrangulation(m)) return;
    std::vector<int> key(m.next_permutation().begin(), m.next_permutation().end());
    if (seen.insert(key).second) out.push_back(std::move(m));
  });
  std::sort(out.begin(), out.end(), [](const CombinatorialMap& a, const CombinatorialMap& b) {
    return std::lexicographical_compare(a.next_permutation().begin(), a.next_permutation().end(),
                                        b.next_permutation().begin(), b.next_permutation().end());
  });
  return out;
}

std::vector<PointedQuadrangulation> enumerate_pointed_quadrangulations(int g, int n, std::uint64_t budget) {
  std::vector<PointedQuadrangulation> out;
  for (const auto& m : enumerate_quadrangulations(g, n, budget)) {
    for (int b = 0; b < m.vertex_count(); ++b) {
      const auto dist = vertex_distances(m, b);
      const int eps = dist[m.target(m.root())] < dist[m.origin(m.root())] ? -1 : 1;
      out.push_back(PointedQuadrangulation{m, b, eps});
    }
  }
  return out;
}

}  // namespace qmap
