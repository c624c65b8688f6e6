#include "qmap/map.hpp"

#include <algorithm>
#include <queue>

namespace qmap {

namespace {

// Relabels from the root: ids are handed out in pairs (h, opposite(h)) in
// the order half-edges are discovered by scanning next() of already
// labelled half-edges. Assumes the input is valid and connected.
std::vector<int> canonical_order(std::span<const int> opposite, std::span<const int> next, int root) {
  const int n = static_cast<int>(next.size());
  std::vector<int> label(n, -1);
  std::vector<int> order;
  order.reserve(n);
  auto assign = [&](int h) {
    label[h] = static_cast<int>(order.size());
    order.push_back(h);
    label[opposite[h]] = static_cast<int>(order.size());
    order.push_back(opposite[h]);
  };
  assign(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int s = next[order[i]];
    if (label[s] < 0) assign(s);
  }
  return label;
}

}  // namespace

Violation validate(std::span<const int> opposite, std::span<const int> next) {
  const int n = static_cast<int>(next.size());
  if (n == 0 || n % 2 != 0 || static_cast<int>(opposite.size()) != n)
    return Error(ErrorCode::NotInvolution, "half-edge count must be even and positive");
  for (int h = 0; h < n; ++h) {
    const int o = opposite[h];
    if (o < 0 || o >= n || o == h || opposite[o] != h)
      return Error(ErrorCode::NotInvolution, "opposite is not a fixed-point-free involution at " + std::to_string(h));
  }
  std::vector<char> seen(n, 0);
  for (int h = 0; h < n; ++h) {
    const int s = next[h];
    if (s < 0 || s >= n || seen[s])
      return Error(ErrorCode::NotPermutation, "next is not a bijection at " + std::to_string(h));
    seen[s] = 1;
  }
  std::vector<char> reached(n, 0);
  std::vector<int> stack{0};
  reached[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int h = stack.back();
    stack.pop_back();
    for (int k : {opposite[h], next[h]}) {
      if (!reached[k]) {
        reached[k] = 1;
        ++count;
        stack.push_back(k);
      }
    }
  }
  if (count != n) return Error(ErrorCode::Disconnected, std::to_string(n - count) + " half-edges unreachable");
  return std::nullopt;
}

CombinatorialMap::CombinatorialMap(std::vector<int> next, int root) : next_(std::move(next)), root_(root) {
  const int n = static_cast<int>(next_.size());
  std::vector<int> opp(n);
  for (int h = 0; h < n; ++h) opp[h] = h ^ 1;
  if (auto err = qmap::validate(opp, next_)) throw *err;
  if (root_ < 0 || root_ >= n) throw Error(ErrorCode::BadInput, "root out of range");
  index_vertices();
}

CombinatorialMap CombinatorialMap::from_permutations(std::span<const int> opposite, std::span<const int> next,
                                                     int root, std::vector<int>* relabel) {
  if (auto err = qmap::validate(opposite, next)) throw *err;
  const int n = static_cast<int>(next.size());
  if (root < 0 || root >= n) throw Error(ErrorCode::BadInput, "root out of range");
  const std::vector<int> label = canonical_order(opposite, next, root);
  std::vector<int> out(n);
  for (int h = 0; h < n; ++h) out[label[h]] = label[next[h]];
  if (relabel) *relabel = label;
  return CombinatorialMap(std::move(out), 0);
}

void CombinatorialMap::index_vertices() {
  const int n = half_edge_count();
  prev_.assign(n, 0);
  for (int h = 0; h < n; ++h) prev_[next_[h]] = h;
  vertex_.assign(n, -1);
  vertex_rep_.clear();
  int v = 0;
  for (int h = 0; h < n; ++h) {
    if (vertex_[h] >= 0) continue;
    int k = h;
    do {
      vertex_[k] = v;
      k = next_[k];
    } while (k != h);
    vertex_rep_.push_back(h);
    ++v;
  }
  vertex_count_ = v;
}

int CombinatorialMap::degree_of_vertex(int v) const {
  const int start = vertex_rep_[v];
  int d = 0, k = start;
  do {
    ++d;
    k = next_[k];
  } while (k != start);
  return d;
}

std::vector<int> CombinatorialMap::half_edges_of_vertex(int v) const {
  std::vector<int> out;
  const int start = vertex_rep_[v];
  int k = start;
  do {
    out.push_back(k);
    k = next_[k];
  } while (k != start);
  return out;
}

CombinatorialMap CombinatorialMap::canonical(std::vector<int>* relabel) const {
  const int n = half_edge_count();
  std::vector<int> opp(n);
  for (int h = 0; h < n; ++h) opp[h] = h ^ 1;
  return from_permutations(opp, next_, root_, relabel);
}

CombinatorialMap CombinatorialMap::rerooted(int h) const {
  CombinatorialMap m = *this;
  if (h < 0 || h >= half_edge_count()) throw Error(ErrorCode::BadInput, "root out of range");
  m.root_ = h;
  return m;
}

Violation validate(const CombinatorialMap& map) {
  const int n = map.half_edge_count();
  std::vector<int> opp(n);
  for (int h = 0; h < n; ++h) opp[h] = h ^ 1;
  return validate(opp, map.next_permutation());
}

FaceDecomposition faces(const CombinatorialMap& map) {
  const int n = map.half_edge_count();
  FaceDecomposition fd;
  fd.face_of.assign(n, -1);
  for (int h = 0; h < n; ++h) {
    if (fd.face_of[h] >= 0) continue;
    std::vector<int> cycle;
    int k = h;
    do {
      fd.face_of[k] = static_cast<int>(fd.faces.size());
      cycle.push_back(k);
      k = map.face_next(k);
    } while (k != h);
    fd.faces.push_back(std::move(cycle));
  }
  return fd;
}

int face_count(const CombinatorialMap& map) {
  const int n = map.half_edge_count();
  std::vector<char> seen(n, 0);
  int f = 0;
  for (int h = 0; h < n; ++h) {
    if (seen[h]) continue;
    ++f;
    for (int k = h; !seen[k]; k = map.face_next(k)) seen[k] = 1;
  }
  return f;
}

int degree_of_face(const FaceDecomposition& fd, int face) { return static_cast<int>(fd.faces.at(face).size()); }

int vertex_count(const CombinatorialMap& map) { return map.vertex_count(); }

int euler_characteristic(const CombinatorialMap& map) {
  return map.vertex_count() - map.edge_count() + face_count(map);
}

int genus(const CombinatorialMap& map) { return (2 - euler_characteristic(map)) / 2; }

bool is_bipartite_quadrangulation(const CombinatorialMap& map) {
  const FaceDecomposition fd = faces(map);
  for (const auto& f : fd.faces)
    if (f.size() != 4) return false;
  std::vector<int> color(map.vertex_count(), -1);
  std::queue<int> q;
  color[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int h : map.half_edges_of_vertex(v)) {
      const int w = map.target(h);
      if (color[w] < 0) {
        color[w] = 1 - color[v];
        q.push(w);
      } else if (color[w] == color[v]) {
        return false;
      }
    }
  }
  return true;
}

std::vector<int> vertex_distances(const CombinatorialMap& map, int source) {
  std::vector<int> dist(map.vertex_count(), -1);
  std::vector<int> queue{source};
  queue.reserve(map.vertex_count());
  dist[source] = 0;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const int v = queue[k];
    const int start = map.any_half_edge_of_vertex(v);
    int h = start;
    do {
      const int w = map.target(h);
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      h = map.next(h);
    } while (h != start);
  }
  return dist;
}

}  // namespace qmap
