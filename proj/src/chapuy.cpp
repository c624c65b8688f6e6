#include "qmap/chapuy.hpp"

#include <algorithm>
#include <functional>

namespace qmap {

namespace {

struct Node {
  int vertex = -1;            // map vertex id
  std::array<int, 3> core{};  // outgoing core half-edges, counterclockwise from core[0]
  bool intertwined = false;
};

std::vector<Node> analyze(const GTree& t) {
  const Skeleton sk = skeleton(t);
  const CombinatorialMap& m = t.map();
  const int n2 = m.half_edge_count();
  const int shift = sk.segment_start[0];
  std::vector<int> core_degree(m.vertex_count(), 0);
  for (int h = 0; h < n2; ++h) core_degree[m.origin(h)] += sk.core[h];
  std::vector<Node> nodes;
  for (int v = 0; v < m.vertex_count(); ++v) {
    if (core_degree[v] < 3) continue;
    if (core_degree[v] > 3) throw Error(ErrorCode::NonDominantScheme, "node of degree " + std::to_string(core_degree[v]));
    Node node;
    node.vertex = v;
    int k = 0;
    for (int h : m.half_edges_of_vertex(v))
      if (sk.core[h]) node.core[k++] = h;
    // Scheme facial order of the three half-edges is their tree facial
    // order counted from the start of the root segment.
    auto key = [&](int h) { return ((t.position_of(h) - shift) % n2 + n2) % n2; };
    int first = 0, last = 0;
    for (int j = 1; j < 3; ++j) {
      if (key(node.core[j]) < key(node.core[first])) first = j;
      if (key(node.core[j]) > key(node.core[last])) last = j;
    }
    node.intertwined = node.core[(first + 1) % 3] == node.core[last];
    nodes.push_back(node);
  }
  return nodes;
}

std::vector<int> next_of(const CombinatorialMap& m) {
  return std::vector<int>(m.next_permutation().begin(), m.next_permutation().end());
}

// Rotation at the vertex of `core`, read so that `core` comes last.
std::vector<int> block_ending_at(const CombinatorialMap& m, int core) {
  std::vector<int> block;
  for (int h = m.next(core);; h = m.next(h)) {
    block.push_back(h);
    if (h == core) break;
  }
  return block;
}

void link_cycle(std::vector<int>& next, const std::vector<int>& cyc) {
  for (std::size_t k = 0; k < cyc.size(); ++k) next[cyc[k]] = cyc[(k + 1) % cyc.size()];
}

GTree slice_impl(const GTree& t, int node, std::array<int, 3>* cores) {
  const int v = t.map_vertex(node);
  for (const Node& nd : analyze(t)) {
    if (nd.vertex != v) continue;
    if (!nd.intertwined) break;
    std::vector<int> next = next_of(t.map());
    // Block k runs from just after core k-1 to core k.
    for (int k = 0; k < 3; ++k) {
      std::vector<int> block;
      for (int h = t.map().next(nd.core[(k + 2) % 3]);; h = t.map().next(h)) {
        block.push_back(h);
        if (h == nd.core[k]) break;
      }
      link_cycle(next, block);
    }
    if (cores) *cores = nd.core;
    return GTree(CombinatorialMap(std::move(next), t.map().root()));
  }
  throw Error(ErrorCode::NotIntertwined, "vertex " + std::to_string(node) + " is not an intertwined node");
}

// Slices v_g, ..., v_1 (ids of the original tree); keeps half-edge ids.
GTree open_impl(const GTree& t, const std::vector<int>& sequence, std::vector<std::array<int, 3>>* cores) {
  const int g = t.genus();
  if (static_cast<int>(sequence.size()) != g)
    throw Error(ErrorCode::InvalidOpeningSequence, "opening sequence must have one node per unit of genus");
  analyze(t);  // dominance check up front
  GTree cur = t;
  if (cores) cores->assign(g, {});
  for (int i = g - 1; i >= 0; --i) {
    if (sequence[i] < 0 || sequence[i] >= t.vertex_count())
      throw Error(ErrorCode::InvalidOpeningSequence, "vertex id out of range");
    const int h = t.map().any_half_edge_of_vertex(t.map_vertex(sequence[i]));
    try {
      cur = slice_impl(cur, cur.facial_vertex(h), cores ? &(*cores)[i] : nullptr);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotIntertwined) throw;
      throw Error(ErrorCode::InvalidOpeningSequence, "node " + std::to_string(sequence[i]) + " is not intertwined");
    }
  }
  return cur;
}

// Leaf stripping that never removes a protected vertex; returns surviving
// edge flags.
std::vector<char> protected_core(const CombinatorialMap& m, const std::vector<char>& keep) {
  std::vector<int> deg(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) deg[v] = m.degree_of_vertex(v);
  std::vector<char> alive(m.edge_count(), 1);
  std::vector<int> leaves;
  for (int v = 0; v < m.vertex_count(); ++v)
    if (deg[v] == 1 && !keep[v]) leaves.push_back(v);
  while (!leaves.empty()) {
    const int v = leaves.back();
    leaves.pop_back();
    if (deg[v] != 1 || keep[v]) continue;
    for (int h : m.half_edges_of_vertex(v)) {
      if (!alive[h / 2]) continue;
      alive[h / 2] = 0;
      deg[v] = 0;
      const int w = m.target(h);
      if (--deg[w] == 1 && !keep[w]) leaves.push_back(w);
      break;
    }
  }
  return alive;
}

std::vector<int> label_by_half_edge(const GTree& t, const std::vector<int>& labels) {
  std::vector<int> out(t.map().half_edge_count(), 0);
  if (labels.empty()) return out;
  for (int h = 0; h < t.map().half_edge_count(); ++h) out[h] = labels[t.facial_vertex(h)];
  return out;
}

std::vector<int> labels_from_half_edges(const GTree& t, const std::vector<int>& by_half_edge) {
  std::vector<int> out(t.vertex_count());
  for (int v = 0; v < t.vertex_count(); ++v) out[v] = by_half_edge[t.map().any_half_edge_of_vertex(t.map_vertex(v))];
  return out;
}

TreeWithTriples open_labeled(const GTree& t, const std::vector<int>& labels, const std::vector<int>& sequence) {
  std::vector<std::array<int, 3>> cores;
  GTree opened = open_impl(t, sequence, &cores);
  TreeWithTriples w;
  for (const auto& c : cores) {
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) tri[k] = opened.facial_vertex(c[k]);
    std::sort(tri.begin(), tri.end());
    w.triples.push_back(tri);
  }
  if (!labels.empty()) w.labels = labels_from_half_edges(opened, label_by_half_edge(t, labels));
  w.tree = std::move(opened);
  return w;
}

}  // namespace

std::vector<int> intertwined_nodes(const GTree& t) {
  std::vector<int> out;
  for (const Node& nd : analyze(t))
    if (nd.intertwined) out.push_back(t.facial_vertex(nd.core[0]));
  std::sort(out.begin(), out.end());
  return out;
}

GTree slice(const GTree& t, int node) { return slice_impl(t, node, nullptr); }

std::vector<std::vector<int>> opening_sequences(const GTree& t) {
  std::vector<std::vector<int>> out;
  const int g = t.genus();
  std::vector<int> seq(g, -1);
  std::function<void(const GTree&, int)> rec = [&](const GTree& cur, int i) {
    if (i < 0) {
      out.push_back(seq);
      return;
    }
    for (int node : intertwined_nodes(cur)) {
      const int h = cur.map().any_half_edge_of_vertex(cur.map_vertex(node));
      seq[i] = t.facial_vertex(h);
      rec(slice(cur, node), i - 1);
    }
  };
  if (g >= 1) rec(t, g - 1);
  return out;
}

TreeWithTriples open(const WellLabeledGTree& t, const std::vector<int>& sequence) {
  if (auto err = validate_labels(t)) throw *err;
  return open_labeled(t.tree, t.labels, sequence);
}

TreeWithTriples open(const GTree& t, const std::vector<int>& sequence) { return open_labeled(t, {}, sequence); }

Violation validate(const TreeWithTriples& w) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidTriples, why); };
  if (w.tree.genus() != 0) return bad("underlying tree is not plane");
  const int V = w.tree.vertex_count();
  std::vector<char> marked(V, 0);
  for (const auto& tri : w.triples) {
    for (int v : tri) {
      if (v < 0 || v >= V) return bad("vertex id out of range");
      if (marked[v]) return bad("marked vertices are not pairwise distinct");
      marked[v] = 1;
    }
  }
  const CombinatorialMap& m = w.tree.map();
  std::vector<char> keep(m.vertex_count(), 0);
  for (int v = 0; v < V; ++v) keep[w.tree.map_vertex(v)] = marked[v];
  const auto alive = protected_core(m, keep);
  for (int v = 0; v < m.vertex_count(); ++v) {
    int d = 0;
    for (int h : m.half_edges_of_vertex(v)) d += alive[h / 2];
    if (d > 3) return bad("spanning tree of the marked vertices has a vertex of degree > 3");
    if (keep[v] && d != 1 && !w.triples.empty()) return bad("marked vertex is not a leaf of the spanning tree");
  }
  if (!w.labels.empty()) {
    if (auto err = validate_labels(WellLabeledGTree{w.tree, w.labels})) return err;
    for (const auto& tri : w.triples)
      if (w.labels[tri[0]] != w.labels[tri[1]] || w.labels[tri[0]] != w.labels[tri[2]])
        return bad("labels differ inside a triple");
  }
  return std::nullopt;
}

GluedTree glue(const TreeWithTriples& w) {
  if (auto err = validate(w)) throw *err;
  const int g = static_cast<int>(w.triples.size());
  const CombinatorialMap& base = w.tree.map();
  std::vector<std::array<int, 3>> rep(g);
  for (int i = 0; i < g; ++i)
    for (int k = 0; k < 3; ++k) rep[i][k] = base.any_half_edge_of_vertex(w.tree.map_vertex(w.triples[i][k]));
  std::vector<int> next = next_of(base);
  const int root = base.root();
  std::vector<int> node_rep(g);
  for (int i = 0; i < g; ++i) {
    const CombinatorialMap cur(next, root);
    std::vector<char> keep(cur.vertex_count(), 0);
    for (int j = i; j < g; ++j)
      for (int k = 0; k < 3; ++k) keep[cur.origin(rep[j][k])] = 1;
    const auto alive = protected_core(cur, keep);
    std::array<std::vector<int>, 3> blocks;
    for (int k = 0; k < 3; ++k) {
      int core = -1, count = 0;
      for (int h : cur.half_edges_of_vertex(cur.origin(rep[i][k])))
        if (alive[h / 2]) core = h, ++count;
      if (count != 1) throw Error(ErrorCode::InvalidTriples, "marked vertex is not a leaf of the spanning tree");
      blocks[k] = block_ending_at(cur, core);
    }
    bool done = false;
    for (const auto& order : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 1}}) {
      std::vector<int> cyc;
      for (int k : order) cyc.insert(cyc.end(), blocks[k].begin(), blocks[k].end());
      std::vector<int> trial = next;
      link_cycle(trial, cyc);
      if (face_count(CombinatorialMap(trial, root)) == 1) {
        next = std::move(trial);
        done = true;
        break;
      }
    }
    if (!done) throw Error(ErrorCode::InvalidTriples, "no gluing order keeps a single face");
    node_rep[i] = blocks[0].back();
  }
  GluedTree out;
  GTree tree{CombinatorialMap(std::move(next), root)};
  out.tree.labels = labels_from_half_edges(tree, label_by_half_edge(w.tree, w.labels));
  for (int i = 0; i < g; ++i) out.sequence.push_back(tree.facial_vertex(node_rep[i]));
  out.tree.tree = std::move(tree);
  return out;
}

ContourPair opened_contour_direct(const TreeWithTriples& w) {
  const GTree& t = w.tree;
  const int n2 = t.map().half_edge_count();
  std::vector<char> seen(n2 / 2, 0);
  ContourPair cp;
  cp.C.assign(1, 0);
  cp.L.assign(1, w.labels.empty() ? 0 : w.labels[t.corner_vertex(0)]);
  for (int p = 0; p < n2; ++p) {
    const int h = t.facial_half_edges()[p];
    cp.C.push_back(cp.C.back() + (seen[h / 2] ? -1 : 1));
    seen[h / 2] = 1;
    cp.L.push_back(w.labels.empty() ? 0 : w.labels[t.corner_vertex(p + 1)]);
  }
  return cp;
}

namespace {

// f . g: g shifted to start where f ends; g must start at 0.
void append(std::vector<int>& f, const std::vector<int>& g) {
  if (f.empty()) {
    f = g;
    return;
  }
  const int base = f.back();
  for (std::size_t s = 1; s < g.size(); ++s) f.push_back(base + g[s]);
}

std::vector<int> slice_of(const std::vector<int>& x, int from, int to) {
  return std::vector<int>(x.begin() + from, x.begin() + to + 1);
}

// (X(a+s) - 2 inf_{[a, a+s]} X + X(a)) for 0 <= s <= b - a.
std::vector<int> upward_from(const std::vector<int>& X, int a, int b) {
  std::vector<int> out;
  int low = X[a];
  for (int s = a; s <= b; ++s) {
    low = std::min(low, X[s]);
    out.push_back(X[s] - 2 * low + X[a]);
  }
  return out;
}

}  // namespace

ContourPair opened_contour_via_formulas(const Decomposition& d, const std::vector<int>& scheme_seq) {
  const GTree& s = d.scheme.tree;
  if (!d.scheme.dominant) throw Error(ErrorCode::NonDominantScheme, "opening needs a dominant scheme");
  const GTree opened = open_impl(s, scheme_seq, nullptr);
  const int k = s.map().half_edge_count();
  std::vector<int> order;  // scheme facial positions in the facial order of the opened scheme
  for (int h : opened.facial_half_edges()) order.push_back(s.position_of(h));
  std::vector<int> rank(k);
  for (int r = 0; r < k; ++r) rank[order[r]] = r;
  const auto partner = s.pairing();

  std::vector<std::vector<int>> CC(k), Lab(k);
  for (int p = 0; p < k; ++p) {
    CC[p] = d.forests[p].C;
    for (int& x : CC[p]) x -= d.sigma(p);
    Lab[p] = label_contour(d, p);
  }
  const int u = d.u;
  const int root_bar = partner[0];
  const auto& C0 = CC[0];
  const int len0 = d.forests[0].length();
  const int low_u = *std::min_element(C0.begin(), C0.begin() + u + 1);
  const int x = static_cast<int>(std::find(C0.begin(), C0.end(), low_u) - C0.begin());
  const auto& Cb = CC[root_bar];
  const int y = static_cast<int>(std::find(Cb.begin(), Cb.end(), -d.sigma(0) - low_u) - Cb.begin());

  ContourPair out;
  append(out.C, upward_from(C0, u, len0));
  {
    std::vector<int> lab1;
    for (int t = u; t <= len0; ++t) lab1.push_back(Lab[0][t] - Lab[0][u]);
    append(out.L, lab1);
  }
  for (int r = 1; r < k; ++r) {
    const int p = order[r];
    std::vector<int> piece;
    if (p == root_bar) {
      piece = slice_of(Cb, 0, y);
      append(piece, upward_from(Cb, y, static_cast<int>(Cb.size()) - 1));
    } else if (rank[p] < rank[partner[p]]) {
      const auto low = running_min(CC[p]);
      for (std::size_t t = 0; t < CC[p].size(); ++t) piece.push_back(CC[p][t] - 2 * low[t]);
    } else {
      piece = CC[p];
    }
    append(out.C, piece);
    append(out.L, Lab[p]);
  }
  {
    std::vector<int> piece = slice_of(C0, 0, x);
    std::vector<int> tail(u - x + 1);
    int low = C0[u];
    for (int t = u; t >= x; --t) {
      low = std::min(low, C0[t]);
      tail[t - x] = C0[t] - 2 * low + low_u;
    }
    append(piece, tail);
    append(out.C, piece);
    append(out.L, slice_of(Lab[0], 0, u));
  }
  return out;
}

std::vector<int> scheme_sequence(const GTree& t, const std::vector<int>& sequence) {
  const Skeleton sk = skeleton(t);
  std::vector<int> out;
  for (int v : sequence) {
    const auto it = std::find(sk.node_vertex.begin(), sk.node_vertex.end(), v);
    if (it == sk.node_vertex.end()) throw Error(ErrorCode::InvalidOpeningSequence, "vertex is not a node");
    out.push_back(static_cast<int>(it - sk.node_vertex.begin()));
  }
  return out;
}

}  // namespace qmap
