#include "qmap/cms.hpp"

#include <algorithm>

namespace qmap {

std::vector<int> shifted_corner_labels(const WellLabeledGTree& t) {
  const int n2 = t.tree.map().half_edge_count();
  const int low = *std::min_element(t.labels.begin(), t.labels.end());
  std::vector<int> out(n2);
  for (int i = 0; i < n2; ++i) out[i] = t.label_at_corner(i) - low + 1;
  return out;
}

std::vector<int> successors(const std::vector<int>& shifted) {
  const int n2 = static_cast<int>(shifted.size());
  const int top = *std::max_element(shifted.begin(), shifted.end());
  std::vector<int> last(top + 1, kNoSuccessor);
  std::vector<int> suc(n2, kNoSuccessor);
  // Two backward sweeps: the second one sees every corner after i cyclically.
  for (int k = 2 * n2 - 1; k >= 0; --k) {
    const int i = k % n2;
    const int l = shifted[i];
    if (k < n2) suc[i] = l > 1 ? last[l - 1] : kNoSuccessor;
    last[l] = i;
  }
  return suc;
}

int successor(int i, const std::vector<int>& shifted) {
  const int n2 = static_cast<int>(shifted.size());
  if (shifted[i] == 1) return kNoSuccessor;
  for (int d = 1; d <= n2; ++d)
    if (shifted[(i + d) % n2] == shifted[i] - 1) return (i + d) % n2;
  return kNoSuccessor;
}

PointedQuadrangulation cms_forward(const WellLabeledGTree& t, int eps, std::vector<int>* vertex_of) {
  if (auto err = validate_labels(t)) throw *err;
  if (eps != 1 && eps != -1) throw Error(ErrorCode::BadInput, "epsilon must be -1 or +1");
  const GTree& tree = t.tree;
  const CombinatorialMap& m = tree.map();
  const int n2 = m.half_edge_count();
  const auto shifted = shifted_corner_labels(t);
  const auto suc = successors(shifted);

  // Arc i leaves corner i as half-edge 2i and arrives as 2i+1.
  std::vector<std::vector<int>> incoming(n2);
  std::vector<int> to_base;
  for (int i = 0; i < n2; ++i) {
    if (suc[i] == kNoSuccessor)
      to_base.push_back(i);
    else
      incoming[suc[i]].push_back(i);
  }
  std::vector<int> next(2 * n2, -1);
  auto link_cycle = [&](const std::vector<int>& cyc) {
    for (std::size_t k = 0; k < cyc.size(); ++k) next[cyc[k]] = cyc[(k + 1) % cyc.size()];
  };
  // Inside corner i the sweep meets arcs toward corners i-1, i-2, ... so
  // incoming arcs come by increasing (i - j) mod 2n, the outgoing arc last.
  std::vector<int> around;
  for (int v = 0; v < tree.vertex_count(); ++v) {
    around.clear();
    const int start = m.any_half_edge_of_vertex(tree.map_vertex(v));
    int h = start;
    do {
      const int i = (tree.position_of(h ^ 1) + 1) % n2;
      auto& in = incoming[i];
      std::sort(in.begin(), in.end(), [&](int a, int b) { return (i - a + n2) % n2 < (i - b + n2) % n2; });
      for (int j : in) around.push_back(2 * j + 1);
      around.push_back(2 * i);
      h = m.next(h);
    } while (h != start);
    link_cycle(around);
  }
  around.clear();
  for (auto it = to_base.rbegin(); it != to_base.rend(); ++it) around.push_back(2 * *it + 1);
  link_cycle(around);

  std::vector<int> opp(2 * n2);
  for (int h = 0; h < 2 * n2; ++h) opp[h] = h ^ 1;
  std::vector<int> relabel;
  PointedQuadrangulation q;
  q.map = CombinatorialMap::from_permutations(opp, next, eps == -1 ? 0 : 1, &relabel);
  q.base = q.map.origin(relabel[2 * to_base.front() + 1]);
  q.epsilon = eps;
  if (vertex_of) {
    vertex_of->assign(tree.vertex_count(), -1);
    for (int i = 0; i < n2; ++i) (*vertex_of)[tree.corner_vertex(i)] = q.map.origin(relabel[2 * i]);
  }
  return q;
}

CmsPreimage cms_inverse(const PointedQuadrangulation& q) {
  const CombinatorialMap& m = q.map;
  if (!is_bipartite_quadrangulation(m)) throw Error(ErrorCode::NotBipartiteQuadrangulation, "input rejected");
  if (q.base < 0 || q.base >= m.vertex_count()) throw Error(ErrorCode::BadInput, "base vertex out of range");
  const auto dist = vertex_distances(m, q.base);
  const FaceDecomposition fd = faces(m);
  const int faces_n = static_cast<int>(fd.faces.size());
  const int n2 = 2 * faces_n;
  auto down = [&](int h) { return dist[m.target(h)] == dist[m.origin(h)] - 1; };

  const int root = m.root();
  const int eps = down(root) ? -1 : 1;
  int d = eps == -1 ? root : root ^ 1;
  std::vector<int> corner_arc(n2);
  std::vector<int> face_pos(faces_n, -1);
  std::vector<int> partner(n2, -1);
  for (int i = 0; i < n2; ++i) {
    corner_arc[i] = d;
    const int v = m.origin(d);
    const int f0 = d ^ 1;
    const int f1 = m.next(d);
    const int f2 = m.face_next(f1);
    const int f3 = m.face_next(f2);
    const int l = dist[v];
    int a;
    if (dist[m.origin(f2)] == l + 1)
      a = f2;
    else if (dist[m.origin(f3)] == l)
      a = f3;
    else
      a = f0;
    const int face = fd.face_of[f1];
    if (face_pos[face] < 0) {
      face_pos[face] = i;
    } else {
      partner[i] = face_pos[face];
      partner[face_pos[face]] = i;
    }
    d = a;
    while (!down(d)) d = m.next(d);
  }
  if (d != corner_arc[0]) throw Error(ErrorCode::NotBipartiteQuadrangulation, "corner walk does not close");
  for (int p : partner)
    if (p < 0) throw Error(ErrorCode::NotBipartiteQuadrangulation, "face visited once");

  CmsPreimage out;
  out.epsilon = eps;
  out.tree.tree = GTree::from_pairing(partner);
  out.tree.labels.assign(out.tree.tree.vertex_count(), 0);
  const int origin = dist[m.origin(corner_arc[0])];
  for (int i = 0; i < n2; ++i) out.tree.labels[out.tree.tree.corner_vertex(i)] = dist[m.origin(corner_arc[i])] - origin;
  return out;
}

std::vector<int> distance_bounds_from(const WellLabeledGTree& t, int i) {
  const int n2 = t.tree.map().half_edge_count();
  // Labels at corners 0..2n; corner 2n repeats corner 0.
  std::vector<int> lab(n2 + 1);
  for (int k = 0; k <= n2; ++k) lab[k] = t.label_at_corner(k);
  // fwd[j] = min over [i -> j], bwd[j] = min over [j -> i], per the cyclic convention on 0..2n.
  std::vector<int> fwd(n2 + 1), bwd(n2 + 1);
  {
    int cur = lab[i];
    for (int j = i; j <= n2; ++j) fwd[j] = cur = std::min(cur, lab[j]);
    const int tail = cur;  // min over [i, 2n]
    cur = tail;
    for (int j = 0; j < i; ++j) fwd[j] = cur = std::min(cur, lab[j]);
  }
  {
    int cur = lab[i];
    for (int j = i; j >= 0; --j) bwd[j] = cur = std::min(cur, lab[j]);
    const int head = cur;  // min over [0, i]
    cur = head;
    for (int j = n2; j > i; --j) bwd[j] = cur = std::min(cur, lab[j]);
  }
  std::vector<int> out(n2 + 1);
  for (int j = 0; j <= n2; ++j) out[j] = lab[i] + lab[j] - 2 * std::max(fwd[j], bwd[j]) + 2;
  return out;
}

BoundCheck check_distance_bound(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                                const std::vector<int>& vertex_of, int i, int j) {
  const auto dist = vertex_distances(q.map, vertex_of[t.tree.corner_vertex(i)]);
  BoundCheck r;
  r.distance = dist[vertex_of[t.tree.corner_vertex(j)]];
  r.bound = distance_bounds_from(t, i)[j];
  r.ok = r.distance <= r.bound;
  return r;
}

bool distance_label_identity(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                             const std::vector<int>& vertex_of) {
  const auto dist = vertex_distances(q.map, q.base);
  const int low = *std::min_element(t.labels.begin(), t.labels.end());
  for (int v = 0; v < t.tree.vertex_count(); ++v)
    if (dist[vertex_of[v]] != t.labels[v] - low + 1) return false;
  return dist[q.base] == 0;
}

}  // namespace qmap
