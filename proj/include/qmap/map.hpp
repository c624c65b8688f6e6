#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmap/error.hpp"

namespace qmap {

// Rotation-system encoding of a rooted map on an orientable surface.
//
// Half-edges are the dense ids 0..2E-1 and the reversal is fixed to the
// pairing 2k <-> 2k+1, so a map is fully described by `next` (the
// counterclockwise successor around the origin vertex) and the root.
//
// Face convention: the face successor of h is next(opposite(h)). Walking a
// face this way, the face lies between opposite(h) and next(opposite(h)) at
// every corner. All facial orders in the library inherit this choice.
class CombinatorialMap {
 public:
  CombinatorialMap() = default;

  // Throws Error(NotPermutation / Disconnected) on invalid input.
  CombinatorialMap(std::vector<int> next, int root);

  // Builds a map from an arbitrary involution and rotation, relabelling
  // half-edges so that the reversal becomes 2k <-> 2k+1 (canonical BFS order
  // from the root). `relabel`, when given, receives old id -> new id.
  static CombinatorialMap from_permutations(std::span<const int> opposite, std::span<const int> next,
                                            int root, std::vector<int>* relabel = nullptr);

  static constexpr int opposite(int h) { return h ^ 1; }

  int half_edge_count() const { return static_cast<int>(next_.size()); }
  int edge_count() const { return half_edge_count() / 2; }
  int root() const { return root_; }
  int next(int h) const { return next_[h]; }
  int prev(int h) const { return prev_[h]; }
  int face_next(int h) const { return next_[h ^ 1]; }
  std::span<const int> next_permutation() const { return next_; }

  int vertex_count() const { return vertex_count_; }
  // Vertex ids follow the first appearance of a vertex when scanning half-edge ids upwards.
  int origin(int h) const { return vertex_[h]; }
  int target(int h) const { return vertex_[h ^ 1]; }
  int degree_of_vertex(int v) const;
  std::vector<int> half_edges_of_vertex(int v) const;  // in rotation order
  int any_half_edge_of_vertex(int v) const { return vertex_rep_[v]; }

  // Relabels half-edges canonically from the root; two rooted maps are
  // isomorphic iff their canonical forms compare equal.
  CombinatorialMap canonical(std::vector<int>* relabel = nullptr) const;
  CombinatorialMap rerooted(int h) const;

  bool operator==(const CombinatorialMap& other) const {
    return root_ == other.root_ && next_ == other.next_;
  }

 private:
  void index_vertices();

  std::vector<int> next_;
  std::vector<int> prev_;
  std::vector<int> vertex_;
  std::vector<int> vertex_rep_;
  int root_ = 0;
  int vertex_count_ = 0;
};

struct FaceDecomposition {
  std::vector<std::vector<int>> faces;  // half-edge cycles under face_next
  std::vector<int> face_of;             // half-edge -> face index
};

// Checks the three structural invariants of a rotation system given raw arrays.
Violation validate(std::span<const int> opposite, std::span<const int> next);
Violation validate(const CombinatorialMap& map);

FaceDecomposition faces(const CombinatorialMap& map);
int face_count(const CombinatorialMap& map);
int degree_of_face(const FaceDecomposition& fd, int face);
int vertex_count(const CombinatorialMap& map);
int euler_characteristic(const CombinatorialMap& map);
int genus(const CombinatorialMap& map);
bool is_bipartite_quadrangulation(const CombinatorialMap& map);
// Graph distances from a vertex (breadth-first search over half-edges).
std::vector<int> vertex_distances(const CombinatorialMap& map, int source);

// {"half_edges": 2E, "next": [...], "root": r}
std::string to_json(const CombinatorialMap& map);
CombinatorialMap map_from_json(const std::string& text);

}  // namespace qmap
