#pragma once

#include <array>
#include <vector>

#include "qmap/forest.hpp"
#include "qmap/gtree.hpp"
#include "qmap/scheme.hpp"

namespace qmap {

// A plane tree with g marked vertex triples. Triple i holds the three
// vertices produced by slicing the i-th node of the opening sequence.
// Vertex ids are facial ids of `tree`; labels may be empty.
struct TreeWithTriples {
  GTree tree;
  std::vector<std::array<int, 3>> triples;
  std::vector<int> labels;

  bool operator==(const TreeWithTriples& o) const {
    return tree == o.tree && triples == o.triples && labels == o.labels;
  }
};

Violation validate(const TreeWithTriples& w);

// Facial ids of the nodes whose three scheme half-edges, taken in facial
// order, turn clockwise around the node. Throws NonDominantScheme.
std::vector<int> intertwined_nodes(const GTree& t);

// Splits an intertwined node into three vertices, each keeping one core
// half-edge and the sector that precedes it. Half-edge ids are preserved,
// so facial ids refer to the returned tree. Throws NotIntertwined.
GTree slice(const GTree& t, int node);

// Every opening sequence (v_1, ..., v_g) as facial ids of t: v_g is sliced
// first. Listed in lexicographic order of (v_g, ..., v_1).
std::vector<std::vector<int>> opening_sequences(const GTree& t);

TreeWithTriples open(const WellLabeledGTree& t, const std::vector<int>& sequence);
TreeWithTriples open(const GTree& t, const std::vector<int>& sequence);

struct GluedTree {
  WellLabeledGTree tree;
  std::vector<int> sequence;  // facial ids of tree
};
GluedTree glue(const TreeWithTriples& w);

// Height and label processes of the opened plane tree read directly.
ContourPair opened_contour_direct(const TreeWithTriples& w);
// The same processes assembled from the forests, Motzkin paths and u of
// the decomposition. `scheme_sequence` names the nodes as scheme vertices.
ContourPair opened_contour_via_formulas(const Decomposition& d, const std::vector<int>& scheme_sequence);
// Translates an opening sequence of a g-tree into scheme vertex ids.
std::vector<int> scheme_sequence(const GTree& t, const std::vector<int>& sequence);

}  // namespace qmap
