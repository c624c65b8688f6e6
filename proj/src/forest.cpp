#include "qmap/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace qmap {

Forest::Forest(int tree_count, std::vector<std::vector<int>> children)
    : tree_count_(tree_count), children_(std::move(children)) {
  const int n = static_cast<int>(children_.size());
  if (tree_count_ < 1 || n < tree_count_ + 1) throw Error(ErrorCode::BadInput, "forest needs t >= 1 and t+1 floor nodes");
  if (!children_[tree_count_].empty()) throw Error(ErrorCode::BadInput, "last floor node must have no children");
  parent_.assign(n, -1);
  for (int u = 0; u < n; ++u) {
    for (int c : children_[u]) {
      if (c <= tree_count_ || c >= n || parent_[c] != -1) throw Error(ErrorCode::BadInput, "bad child id " + std::to_string(c));
      parent_[c] = u;
    }
  }
  for (int u = tree_count_ + 1; u < n; ++u)
    if (parent_[u] < 0) throw Error(ErrorCode::BadInput, "orphan node " + std::to_string(u));
  // Reject cycles: every node must reach the floor.
  for (int u = tree_count_ + 1; u < n; ++u) {
    int k = u, steps = 0;
    while (!is_floor(k)) {
      k = parent_[k];
      if (++steps > n) throw Error(ErrorCode::BadInput, "cycle in parent links");
    }
  }
}

int Forest::oldest_ancestor(int id) const {
  while (!is_floor(id)) id = parent_[id];
  return id + 1;
}

int Forest::depth(int id) const {
  int d = 1;
  while (!is_floor(id)) {
    id = parent_[id];
    ++d;
  }
  return d;
}

std::vector<int> Forest::address(int id) const {
  std::vector<int> addr;
  while (!is_floor(id)) {
    const int p = parent_[id];
    const auto& ch = children_[p];
    addr.push_back(static_cast<int>(std::find(ch.begin(), ch.end(), id) - ch.begin()) + 1);
    id = p;
  }
  addr.push_back(id + 1);
  std::reverse(addr.begin(), addr.end());
  return addr;
}

std::vector<int> forest_facial_sequence(const Forest& f) {
  std::vector<int> seq{0};
  std::vector<int> next_child(f.node_count(), 0);
  int cur = 0;
  while (cur != f.tree_count()) {
    if (next_child[cur] < f.child_count(cur)) {
      cur = f.children(cur)[next_child[cur]++];
    } else if (!f.is_floor(cur)) {
      cur = f.parent(cur);
    } else {
      cur = cur + 1;
    }
    seq.push_back(cur);
  }
  return seq;
}

Violation validate(const WellLabeledForest& wf) {
  const Forest& f = wf.forest;
  if (static_cast<int>(wf.labels.size()) != f.node_count()) return Error(ErrorCode::BadInput, "label count mismatch");
  for (int u = 0; u <= f.tree_count(); ++u)
    if (wf.labels[u] != 0) return Error(ErrorCode::BadInput, "floor label must be 0");
  for (int u = f.tree_count() + 1; u < f.node_count(); ++u)
    if (std::abs(wf.labels[u] - wf.labels[f.parent(u)]) > 1) return Error(ErrorCode::EdgeJumpTooLarge, "forest edge");
  return std::nullopt;
}

ContourPair contour_pair(const WellLabeledForest& wf) {
  if (auto err = validate(wf)) throw *err;
  const Forest& f = wf.forest;
  ContourPair cp;
  std::vector<int> depth(f.node_count(), 1);
  const auto seq = forest_facial_sequence(f);
  for (int u : seq) {
    if (!f.is_floor(u)) depth[u] = depth[f.parent(u)] + 1;
    cp.C.push_back(depth[u] + f.tree_count() - f.oldest_ancestor(u));
    cp.L.push_back(wf.labels[u]);
  }
  return cp;
}

int contour_tree_count(const std::vector<int>& C) { return C.empty() ? 0 : C.front(); }
int contour_edge_count(const std::vector<int>& C) {
  return (static_cast<int>(C.size()) - 1 - contour_tree_count(C)) / 2;
}

Violation validate_contour(const ContourPair& cp) {
  const auto& C = cp.C;
  const auto& L = cp.L;
  if (C.empty() || C.size() != L.size()) return Error(ErrorCode::MalformedContour, "length mismatch");
  const int len = static_cast<int>(C.size()) - 1;
  const int sigma = C[0];
  if (sigma < 1) return Error(ErrorCode::MalformedContour, "C(0) must be positive");
  if (C[len] != 0) return Error(ErrorCode::MalformedContour, "C must end at 0");
  if ((len - sigma) % 2 != 0 || len < sigma) return Error(ErrorCode::MalformedContour, "length parity");
  if (L[0] != 0) return Error(ErrorCode::MalformedContour, "L(0) must be 0");
  int low = sigma;
  for (int i = 0; i < len; ++i) {
    const int step = C[i + 1] - C[i];
    if (step != 1 && step != -1) return Error(ErrorCode::MalformedContour, "C step not +-1 at " + std::to_string(i));
    if (i + 1 < len && C[i + 1] < 1) return Error(ErrorCode::MalformedContour, "C hits 0 early");
    if (C[i + 1] < low) {
      low = C[i + 1];
      if (L[i + 1] != 0 || L[i] != 0) return Error(ErrorCode::MalformedContour, "floor step with nonzero label");
    } else if (std::abs(L[i + 1] - L[i]) > 1) {
      return Error(ErrorCode::MalformedContour, "L jump on tree edge at " + std::to_string(i));
    }
  }
  return std::nullopt;
}

WellLabeledForest decode_contour(const ContourPair& cp) {
  if (auto err = validate_contour(cp)) throw *err;
  const int sigma = cp.C[0];
  const int len = cp.length();
  std::vector<std::vector<int>> children(sigma + 1);
  std::vector<int> labels(sigma + 1, 0);
  std::vector<int> parent(sigma + 1, -1);
  int cur = 0;
  int low = sigma;
  for (int i = 0; i < len; ++i) {
    if (cp.C[i + 1] > cp.C[i]) {
      const int id = static_cast<int>(children.size());
      children.emplace_back();
      labels.push_back(cp.L[i + 1]);
      parent.push_back(cur);
      children[cur].push_back(id);
      cur = id;
    } else if (cp.C[i + 1] < low) {
      low = cp.C[i + 1];
      cur = cur + 1;  // floor step: cur is a floor node here
    } else {
      cur = parent[cur];
      if (labels[cur] != cp.L[i + 1]) throw Error(ErrorCode::MalformedContour, "label changes on revisit");
    }
  }
  return WellLabeledForest{Forest(sigma, std::move(children)), std::move(labels)};
}

namespace {
BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}
double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }
}  // namespace

BigInt count_forests(int sigma, int m) {
  if (sigma < 1 || m < 0) return 0;
  return binomial(2 * m + sigma, m) * sigma / (2 * m + sigma);
}

double log_count_forests(int sigma, int m) {
  return std::log(static_cast<double>(sigma)) - std::log(static_cast<double>(2 * m + sigma)) +
         log_factorial(2 * m + sigma) - log_factorial(m) - log_factorial(m + sigma);
}

Violation validate(const MotzkinPath& M) {
  if (M.values.empty() || M.values[0] != 0) return Error(ErrorCode::BadInput, "Motzkin path must start at 0");
  for (std::size_t i = 1; i < M.values.size(); ++i)
    if (std::abs(M.values[i] - M.values[i - 1]) > 1) return Error(ErrorCode::BadInput, "Motzkin step out of range");
  return std::nullopt;
}

BigInt motzkin_count(int length, int endpoint) {
  const int a = std::abs(endpoint);
  if (length < 0 || a > length) return 0;
  // Sum over the number of up steps of the multinomial coefficient.
  BigInt total = 0;
  for (int up = a; 2 * up - a <= length; ++up) {
    const int down = up - a;
    total += binomial(length, up) * binomial(length - up, down);
  }
  return total;
}

namespace {
// log of length!/(up! down! flat!) for each admissible up count.
std::vector<double> bridge_log_weights(int length, int a) {
  std::vector<double> w;
  for (int up = a; 2 * up - a <= length; ++up) {
    const int down = up - a;
    const int flat = length - up - down;
    w.push_back(log_factorial(length) - log_factorial(up) - log_factorial(down) - log_factorial(flat));
  }
  return w;
}
}  // namespace

double log_motzkin_count(int length, int endpoint) {
  const int a = std::abs(endpoint);
  if (a > length) return -INFINITY;
  const auto w = bridge_log_weights(length, a);
  const double mx = *std::max_element(w.begin(), w.end());
  double s = 0;
  for (double x : w) s += std::exp(x - mx);
  return mx + std::log(s);
}

MotzkinPath sample_motzkin_bridge(int length, int endpoint, Rng& rng) {
  const int a = std::abs(endpoint);
  if (length < 0 || a > length)
    throw Error(ErrorCode::Unreachable, "|" + std::to_string(endpoint) + "| > " + std::to_string(length));
  const auto w = bridge_log_weights(length, a);
  const double mx = *std::max_element(w.begin(), w.end());
  std::vector<double> p(w.size());
  double total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) total += p[i] = std::exp(w[i] - mx);
  double r = uniform01(rng) * total;
  std::size_t k = 0;
  while (k + 1 < p.size() && r >= p[k]) r -= p[k++];
  const int up = a + static_cast<int>(k);
  const int down = up - a;
  const int sign = endpoint >= 0 ? 1 : -1;
  std::vector<int> steps;
  steps.reserve(length);
  steps.insert(steps.end(), up, sign);
  steps.insert(steps.end(), down, -sign);
  steps.insert(steps.end(), length - up - down, 0);
  shuffle(steps, rng);
  MotzkinPath M;
  M.values.reserve(length + 1);
  M.values.push_back(0);
  for (int s : steps) M.values.push_back(M.values.back() + s);
  return M;
}

MotzkinPath sample_motzkin_walk(int length, Rng& rng) {
  MotzkinPath M;
  M.values.reserve(length + 1);
  M.values.push_back(0);
  for (int i = 0; i < length; ++i) M.values.push_back(M.values.back() + static_cast<int>(uniform_below(rng, 3)) - 1);
  return M;
}

std::vector<int> sample_forest_contour(int sigma, int m, Rng& rng) {
  const int n = 2 * m + sigma;
  std::vector<int> steps(n, -1);
  std::fill(steps.begin(), steps.begin() + m, 1);
  shuffle(steps, rng);
  std::vector<int> S(n + 1, 0);
  for (int i = 0; i < n; ++i) S[i + 1] = S[i] + steps[i];
  // Rotation starting at i first hits -sigma at the end iff S_i is a strict
  // prefix minimum and S_k > S_i - sigma for i < k < n. Exactly sigma starts qualify.
  std::vector<int> suffix_min(n + 1, INT32_MAX);
  for (int k = n - 1; k >= 0; --k) suffix_min[k] = std::min(S[k], suffix_min[k + 1]);
  std::vector<int> good;
  int prefix_min = INT32_MAX;
  for (int i = 0; i < n; ++i) {
    if (S[i] < prefix_min && suffix_min[i + 1] > S[i] - sigma) good.push_back(i);
    prefix_min = std::min(prefix_min, S[i]);
  }
  const int start = good[uniform_below(rng, good.size())];
  std::vector<int> C(n + 1);
  C[0] = sigma;
  for (int j = 0; j < n; ++j) C[j + 1] = C[j] + steps[(start + j) % n];
  return C;
}

std::vector<int> sample_contour_labels(const std::vector<int>& C, Rng& rng) {
  const int len = static_cast<int>(C.size()) - 1;
  std::vector<int> L(C.size(), 0);
  std::vector<int> stack;  // labels of the ancestors of the current node
  int low = C.empty() ? 0 : C[0];
  for (int i = 0; i < len; ++i) {
    if (C[i + 1] > C[i]) {
      stack.push_back(L[i]);
      L[i + 1] = L[i] + static_cast<int>(uniform_below(rng, 3)) - 1;
    } else if (C[i + 1] < low) {
      low = C[i + 1];
      L[i + 1] = 0;
    } else {
      L[i + 1] = stack.back();
      stack.pop_back();
    }
  }
  return L;
}

std::vector<int> running_min(const std::vector<int>& x) {
  std::vector<int> out(x.size());
  int m = INT32_MAX;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = m = std::min(m, x[i]);
  return out;
}

}  // namespace qmap
