#pragma once

#include <vector>

#include "qmap/forest.hpp"
#include "qmap/gtree.hpp"

namespace qmap {

// A g-tree without vertices of degree 1 or 2.
struct Scheme {
  GTree tree;
  bool dominant = false;

  bool operator==(const Scheme& o) const { return tree == o.tree; }
};

// True iff every vertex has degree >= 3.
bool is_scheme(const GTree& t);
Scheme make_scheme(const GTree& t);  // throws BadInput if not a scheme

// All rooted schemes of genus g, ordered by edge count then pairing.
// Memoized; throws OutOfRange for g < 1 or g > max_scheme_genus().
const std::vector<Scheme>& enumerate_schemes(int g);
int max_scheme_genus();
// Only the 3-regular ones; reaches one genus further.
const std::vector<Scheme>& enumerate_dominant_schemes(int g);
int max_dominant_scheme_genus();

// Where the scheme sits inside a g-tree of genus >= 1. Scheme facial
// positions are numbered from the segment that contains the tree root.
struct Skeleton {
  std::vector<char> core;             // per tree half-edge: survives leaf stripping
  std::vector<int> segment_start;     // tree facial position where segment p begins
  std::vector<int> segment_length;    // 2m + sigma of segment p
  std::vector<int> scheme_pairing;    // pairing of the scheme facial positions
  std::vector<int> node_vertex;       // scheme facial vertex id -> tree facial vertex id
  int u = 0;
};
Skeleton skeleton(const GTree& t);  // throws GenusZero

// Unlabeled decomposition: scheme, one forest contour per scheme facial position, root offset.
struct ForestTriple {
  Scheme scheme;
  std::vector<std::vector<int>> contours;
  int u = 0;
};

struct Decomposition {
  Scheme scheme;
  std::vector<ContourPair> forests;   // per scheme facial position
  std::vector<MotzkinPath> motzkin;   // per scheme facial position
  std::vector<int> node_labels;       // per scheme facial vertex id; entry 0 is 0
  int u = 0;

  int sigma(int p) const { return forests[p].C.front(); }
  int m(int p) const { return contour_edge_count(forests[p].C); }
  int edge_count() const;  // sum of m + sigma/2
  bool operator==(const Decomposition& o) const {
    return scheme == o.scheme && forests == o.forests && motzkin == o.motzkin && node_labels == o.node_labels &&
           u == o.u;
  }
};

ForestTriple decompose(const GTree& t);
GTree recompose(const ForestTriple& triple);
Decomposition decompose_labeled(const WellLabeledGTree& t);
WellLabeledGTree recompose_labeled(const Decomposition& d);
Violation validate(const Decomposition& d);

// Lab^p(t) = L^p(t) + M^p(sigma - running_min(C^p)(t)).
std::vector<int> label_contour(const Decomposition& d, int p);

}  // namespace qmap
