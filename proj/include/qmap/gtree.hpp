#pragma once

#include <string>
#include <vector>

#include "qmap/map.hpp"

namespace qmap {

// A one-face map (a g-tree). The facial order e_1..e_2n starts at the root
// and follows CombinatorialMap::face_next. Vertices get "facial ids": the
// order in which the facial sequence first visits them, so tr(0) is vertex 0.
class GTree {
 public:
  GTree() = default;
  // Throws Error(NotOneFace) if the map has more than one face.
  explicit GTree(CombinatorialMap map);

  // partner[p] = position of the half-edge paired with facial position p.
  static GTree from_pairing(const std::vector<int>& partner);
  // Polygon sides read in order, equal symbols glued with reversal; root = first side.
  static GTree from_gluing_word(const std::vector<std::string>& word);
  static GTree from_gluing_word(const std::string& text);

  const CombinatorialMap& map() const { return map_; }
  int edge_count() const { return map_.edge_count(); }
  int vertex_count() const { return map_.vertex_count(); }
  int genus() const { return (edge_count() + 1 - vertex_count()) / 2; }

  // Half-edge ids in facial order; size 2n.
  const std::vector<int>& facial_half_edges() const { return order_; }
  int position_of(int half_edge) const { return position_[half_edge]; }
  // tr(i) for 0 <= i <= 2n, as facial vertex ids.
  int corner_vertex(int i) const { return corner_vertex_[i % static_cast<int>(order_.size())]; }
  std::vector<int> facial_sequence() const;
  // Facial id of the origin of a half-edge.
  int facial_vertex(int half_edge) const { return facial_id_[map_.origin(half_edge)]; }
  // Facial id -> map vertex id.
  int map_vertex(int facial) const { return map_vertex_[facial]; }
  int degree(int facial) const { return map_.degree_of_vertex(map_vertex_[facial]); }

  std::vector<int> pairing() const;
  std::vector<std::string> gluing_word() const;
  std::string gluing_word_text() const;

  bool operator==(const GTree& other) const { return pairing() == other.pairing(); }

 private:
  CombinatorialMap map_;
  std::vector<int> order_;
  std::vector<int> position_;
  std::vector<int> corner_vertex_;
  std::vector<int> facial_id_;
  std::vector<int> map_vertex_;
};

struct WellLabeledGTree {
  GTree tree;
  std::vector<int> labels;  // indexed by facial vertex id

  int label_at_corner(int i) const { return labels[tree.corner_vertex(i)]; }
  bool operator==(const WellLabeledGTree& other) const { return tree == other.tree && labels == other.labels; }
};

Violation validate_labels(const WellLabeledGTree& t);

// Two-line text format: gluing word, then labels in facial first-visit order.
std::string to_text(const WellLabeledGTree& t);
WellLabeledGTree wl_gtree_from_text(const std::string& text);

}  // namespace qmap
