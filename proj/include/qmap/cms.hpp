#pragma once

#include <string>
#include <vector>

#include "qmap/gtree.hpp"
#include "qmap/map.hpp"

namespace qmap {

struct PointedQuadrangulation {
  CombinatorialMap map;
  int base = 0;      // vertex id of the distinguished vertex
  int epsilon = 1;   // -1: root edge steps closer to base, +1: farther

  bool operator==(const PointedQuadrangulation& o) const {
    return map == o.map && base == o.base && epsilon == o.epsilon;
  }
};

inline constexpr int kNoSuccessor = -1;

// Labels shifted so that the minimum is 1, read along corners 0..2n-1.
std::vector<int> shifted_corner_labels(const WellLabeledGTree& t);
// First corner after i (cyclically) whose shifted label is one less, or
// kNoSuccessor when corner i has shifted label 1. Linear time for all corners.
std::vector<int> successors(const std::vector<int>& shifted);
int successor(int i, const std::vector<int>& shifted);

// Draws one arc per corner to its successor (or to the added vertex). The
// root is the arc of corner 0, pointing away from that corner when
// eps = -1 and toward it when eps = +1. If `vertex_of` is given it receives
// the quadrangulation vertex of each tree vertex (indexed by facial id).
PointedQuadrangulation cms_forward(const WellLabeledGTree& t, int eps, std::vector<int>* vertex_of = nullptr);

struct CmsPreimage {
  WellLabeledGTree tree;
  int epsilon = 1;
};
CmsPreimage cms_inverse(const PointedQuadrangulation& q);

// Right-hand side of the distance bound for corner i against every corner
// j in 0..2n: l(i) + l(j) - 2 max(min over [i->j], min over [j->i]) + 2.
std::vector<int> distance_bounds_from(const WellLabeledGTree& t, int i);

struct BoundCheck {
  bool ok = true;
  int distance = 0;
  int bound = 0;
};
BoundCheck check_distance_bound(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                                const std::vector<int>& vertex_of, int i, int j);

// Shifted labels equal distances to the base vertex, vertex by vertex.
bool distance_label_identity(const PointedQuadrangulation& q, const WellLabeledGTree& t,
                             const std::vector<int>& vertex_of);

std::string to_json(const PointedQuadrangulation& q);
PointedQuadrangulation pointed_from_json(const std::string& text);

}  // namespace qmap
