#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "qmap/error.hpp"
#include "qmap/random.hpp"

namespace qmap {

using BigInt = boost::multiprecision::cpp_int;

// A forest in the Ulam-Harris style. Node ids are dense: ids 0..t are the
// floor nodes 1..t+1, further ids are tree nodes in insertion order.
class Forest {
 public:
  Forest() = default;
  // children[id] lists child ids in order. Throws on malformed structure.
  Forest(int tree_count, std::vector<std::vector<int>> children);

  int tree_count() const { return tree_count_; }
  int node_count() const { return static_cast<int>(children_.size()); }
  int tree_edge_count() const { return node_count() - tree_count_ - 1; }
  bool is_floor(int id) const { return id <= tree_count_; }
  int parent(int id) const { return parent_[id]; }
  const std::vector<int>& children(int id) const { return children_[id]; }
  int child_count(int id) const { return static_cast<int>(children_[id].size()); }
  int oldest_ancestor(int id) const;  // 1-based floor index a(u)
  int depth(int id) const;            // |u|
  std::vector<int> address(int id) const;

  bool operator==(const Forest& other) const {
    return tree_count_ == other.tree_count_ && children_ == other.children_;
  }

 private:
  int tree_count_ = 0;
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_;
};

struct WellLabeledForest {
  Forest forest;
  std::vector<int> labels;  // per node id
  bool operator==(const WellLabeledForest& o) const { return forest == o.forest && labels == o.labels; }
};

// Height and label processes, sampled at integer times 0..2m+sigma.
struct ContourPair {
  std::vector<int> C;
  std::vector<int> L;
  int length() const { return static_cast<int>(C.size()) - 1; }
  bool operator==(const ContourPair& o) const { return C == o.C && L == o.L; }
};

struct MotzkinPath {
  std::vector<int> values;
  int lifetime() const { return static_cast<int>(values.size()) - 1; }
  bool operator==(const MotzkinPath& o) const { return values == o.values; }
};

// Node ids visited by the contour walk; length 2m+sigma+1.
std::vector<int> forest_facial_sequence(const Forest& f);

Violation validate(const WellLabeledForest& wf);
ContourPair contour_pair(const WellLabeledForest& wf);
Violation validate_contour(const ContourPair& cp);
WellLabeledForest decode_contour(const ContourPair& cp);
// sigma and m recovered from C alone.
int contour_tree_count(const std::vector<int>& C);
int contour_edge_count(const std::vector<int>& C);

// |F_sigma^m| = sigma/(2m+sigma) * binom(2m+sigma, m).
BigInt count_forests(int sigma, int m);
double log_count_forests(int sigma, int m);

Violation validate(const MotzkinPath& M);
BigInt motzkin_count(int length, int endpoint);
double log_motzkin_count(int length, int endpoint);
// Uniform over {-1,0,1}-step paths 0 -> endpoint of the given length.
MotzkinPath sample_motzkin_bridge(int length, int endpoint, Rng& rng);
MotzkinPath sample_motzkin_walk(int length, Rng& rng);

// Uniform first-passage walk sigma -> 0 with m up-steps (cycle lemma).
std::vector<int> sample_forest_contour(int sigma, int m, Rng& rng);
// Uniform labels given the shape: i.i.d. uniform increments on tree edges.
std::vector<int> sample_contour_labels(const std::vector<int>& C, Rng& rng);
// Running minimum of a sequence.
std::vector<int> running_min(const std::vector<int>& x);

}  // namespace qmap
