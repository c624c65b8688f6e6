#include "qmap/scheme.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace qmap {

bool is_scheme(const GTree& t) {
  for (int v = 0; v < t.vertex_count(); ++v)
    if (t.degree(v) < 3) return false;
  return true;
}

Scheme make_scheme(const GTree& t) {
  if (!is_scheme(t)) throw Error(ErrorCode::BadInput, "not a scheme: vertex of degree < 3");
  bool dominant = true;
  for (int v = 0; v < t.vertex_count(); ++v) dominant = dominant && t.degree(v) == 3;
  return Scheme{t, dominant};
}

int max_scheme_genus() { return 2; }
int max_dominant_scheme_genus() { return 3; }

namespace {

// Depth-first search over pairings of a 2E-gon. In the glued map the vertex
// rotation on polygon positions is rot(q) = partner(q) + 1, so vertices are
// the cycles of rot; partial cycles are pruned as soon as they close too short
// or grow longer than any admissible vertex degree.
class SchemeSearch {
 public:
  SchemeSearch(int edges, int vertices) : n_(2 * edges), vertices_(vertices), partner_(n_, -1), rot_(n_, -1) {
    max_degree_ = n_ - 3 * (vertices_ - 1);
  }

  void run(std::vector<std::vector<int>>& out) {
    out_ = &out;
    dfs();
  }

 private:
  struct Chain {
    int length;
    bool closed;
    int front;  // first element of an open chain
  };
  // The rot-chain through q.
  Chain chain(int q) const {
    int len = 1;
    int k = q;
    while (rot_[k] >= 0 && rot_[k] != q) {
      k = rot_[k];
      ++len;
    }
    if (rot_[k] == q) return {len, true, q};
    // walk backwards from q: rot(x) = b requires partner(x) = b - 1
    int b = q;
    for (;;) {
      const int cand = (b - 1 + n_) % n_;
      if (partner_[cand] < 0) break;
      b = partner_[cand];
      ++len;
    }
    return {len, false, b};
  }

  void try_pair(int p, int q) {
    partner_[p] = q;
    partner_[q] = p;
    rot_[p] = (q + 1) % n_;
    rot_[q] = (p + 1) % n_;
    const int before = closed_;
    bool ok = true;
    for (int x : {p, q}) {
      const Chain c = chain(x);
      if (c.closed ? (c.length < 3 || c.length > max_degree_) : c.length > max_degree_) ok = false;
    }
    if (ok) {
      // p and q were open before; count the cycles this pairing closes.
      const bool p_closed = chain(p).closed;
      bool q_in_p = false;
      if (p_closed)
        for (int k = rot_[p]; k != p; k = rot_[k]) q_in_p = q_in_p || k == q;
      closed_ += p_closed + (!q_in_p && chain(q).closed);
      if (closed_ <= vertices_) dfs();
    }
    closed_ = before;
    partner_[p] = partner_[q] = -1;
    rot_[p] = rot_[q] = -1;
  }

  void dfs() {
    // An open chain of maximal length must close at its next step.
    for (int q = 0; q < n_; ++q) {
      if (partner_[q] >= 0) continue;
      const Chain c = chain(q);
      if (c.length < max_degree_) continue;
      const int r = (c.front - 1 + n_) % n_;
      if (r != q && partner_[r] < 0) try_pair(std::min(q, r), std::max(q, r));
      return;
    }
    int p = 0;
    while (p < n_ && partner_[p] >= 0) ++p;
    if (p == n_) {
      if (closed_ == vertices_) out_->push_back(partner_);
      return;
    }
    for (int q = p + 1; q < n_; ++q)
      if (partner_[q] < 0) try_pair(p, q);
  }

  int n_;
  int vertices_;
  int max_degree_;
  int closed_ = 0;
  std::vector<int> partner_;
  std::vector<int> rot_;
  std::vector<std::vector<int>>* out_ = nullptr;
};

std::vector<Scheme> build_schemes(int g, bool dominant_only) {
  std::vector<Scheme> out;
  for (int e = dominant_only ? 6 * g - 3 : 2 * g; e <= 6 * g - 3; ++e) {
    const int v = e + 1 - 2 * g;
    if (v < 1) continue;
    std::vector<std::vector<int>> pairings;
    SchemeSearch(e, v).run(pairings);
    std::sort(pairings.begin(), pairings.end());
    for (const auto& p : pairings) out.push_back(make_scheme(GTree::from_pairing(p)));
  }
  return out;
}

}  // namespace

namespace {
const std::vector<Scheme>& cached_schemes(int g, bool dominant_only) {
  static std::mutex mu;
  static std::vector<std::vector<Scheme>> cache(2 * (max_dominant_scheme_genus() + 1));
  static std::vector<char> ready(cache.size(), 0);
  const std::size_t slot = 2 * g + dominant_only;
  std::lock_guard<std::mutex> lock(mu);
  if (!ready[slot]) {
    cache[slot] = build_schemes(g, dominant_only);
    ready[slot] = 1;
  }
  return cache[slot];
}
}  // namespace

const std::vector<Scheme>& enumerate_schemes(int g) {
  if (g < 1 || g > max_scheme_genus())
    throw Error(ErrorCode::OutOfRange, "full scheme enumeration supports genus 1.." + std::to_string(max_scheme_genus()));
  return cached_schemes(g, false);
}

const std::vector<Scheme>& enumerate_dominant_schemes(int g) {
  if (g < 1 || g > max_dominant_scheme_genus())
    throw Error(ErrorCode::OutOfRange,
                "dominant scheme enumeration supports genus 1.." + std::to_string(max_dominant_scheme_genus()));
  return cached_schemes(g, true);
}

Skeleton skeleton(const GTree& t) {
  if (t.genus() < 1) throw Error(ErrorCode::GenusZero, "plane trees have no scheme");
  const CombinatorialMap& m = t.map();
  const int n2 = m.half_edge_count();
  std::vector<int> deg(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) deg[v] = m.degree_of_vertex(v);
  std::vector<char> alive(n2 / 2, 1);
  std::vector<int> leaves;
  for (int v = 0; v < m.vertex_count(); ++v)
    if (deg[v] == 1) leaves.push_back(v);
  while (!leaves.empty()) {
    const int v = leaves.back();
    leaves.pop_back();
    if (deg[v] != 1) continue;
    for (int h : m.half_edges_of_vertex(v)) {
      if (!alive[h / 2]) continue;
      alive[h / 2] = 0;
      deg[v] = 0;
      const int w = m.target(h);
      if (--deg[w] == 1) leaves.push_back(w);
      break;
    }
  }

  Skeleton sk;
  sk.core.assign(n2, 0);
  for (int h = 0; h < n2; ++h) sk.core[h] = alive[h / 2];
  const auto& order = t.facial_half_edges();
  std::vector<int> starts;
  for (int p = 0; p < n2; ++p) {
    const int h = order[p];
    if (sk.core[h] && deg[m.target(h)] >= 3) starts.push_back((p + 1) % n2);
  }
  std::sort(starts.begin(), starts.end());
  const int k = static_cast<int>(starts.size());
  const int first = starts.front() == 0 ? 0 : k - 1;
  sk.u = (n2 - starts[first]) % n2;
  std::vector<int> seg_of(n2, -1);
  for (int s = 0; s < k; ++s) {
    const int begin = starts[(first + s) % k];
    const int end = starts[(first + s + 1) % k];
    const int len = ((end - begin) % n2 + n2) % n2;
    sk.segment_start.push_back(begin);
    sk.segment_length.push_back(len == 0 ? n2 : len);
    for (int i = 0; i < sk.segment_length.back(); ++i) seg_of[(begin + i) % n2] = s;
  }
  sk.scheme_pairing.assign(k, -1);
  for (int s = 0; s < k; ++s) {
    for (int i = 0; i < sk.segment_length[s]; ++i) {
      const int h = order[(sk.segment_start[s] + i) % n2];
      if (sk.core[h]) {
        sk.scheme_pairing[s] = seg_of[t.position_of(h ^ 1)];
        break;
      }
    }
  }
  const GTree scheme = GTree::from_pairing(sk.scheme_pairing);
  sk.node_vertex.assign(scheme.vertex_count(), -1);
  for (int s = 0; s < k; ++s) sk.node_vertex[scheme.corner_vertex(s)] = t.corner_vertex(sk.segment_start[s]);
  return sk;
}

namespace {

// Contour of segment s; labels (when given) produce L and the floor labels.
void segment_contour(const GTree& t, const Skeleton& sk, int s, const std::vector<int>* labels, ContourPair& cp,
                     MotzkinPath* M) {
  const int n2 = t.map().half_edge_count();
  const auto& order = t.facial_half_edges();
  const int begin = sk.segment_start[s];
  const int len = sk.segment_length[s];
  int sigma = 0;
  for (int i = 0; i < len; ++i) sigma += sk.core[order[(begin + i) % n2]];
  std::vector<char> seen(n2 / 2, 0);
  cp.C.assign(1, sigma);
  cp.L.assign(1, 0);
  auto label = [&](int pos) { return labels ? (*labels)[t.corner_vertex(pos)] : 0; };
  int floor_label = label(begin);
  const int base = floor_label;
  if (M) M->values.assign(1, 0);
  for (int i = 0; i < len; ++i) {
    const int h = order[(begin + i) % n2];
    if (sk.core[h]) {
      cp.C.push_back(cp.C.back() - 1);
      floor_label = label(begin + i + 1);
      if (M) M->values.push_back(floor_label - base);
    } else {
      cp.C.push_back(cp.C.back() + (seen[h / 2] ? -1 : 1));
      seen[h / 2] = 1;
    }
    cp.L.push_back(label(begin + i + 1) - floor_label);
  }
}

struct Assembly {
  std::vector<int> partner;  // tree pairing in concatenated order
  std::vector<int> seg_begin;
  int total = 0;
};

Assembly assemble(const std::vector<int>& scheme_pairing, const std::vector<std::vector<int>>& contours) {
  const int k = static_cast<int>(scheme_pairing.size());
  Assembly a;
  std::vector<std::vector<int>> floor_pos(k);
  for (int s = 0; s < k; ++s) {
    a.seg_begin.push_back(a.total);
    a.total += static_cast<int>(contours[s].size()) - 1;
  }
  a.partner.assign(a.total, -1);
  for (int s = 0; s < k; ++s) {
    const auto& C = contours[s];
    int low = C.front();
    std::vector<int> stack;
    for (int i = 0; i + 1 < static_cast<int>(C.size()); ++i) {
      const int pos = a.seg_begin[s] + i;
      if (C[i + 1] > C[i]) {
        stack.push_back(pos);
      } else if (C[i + 1] < low) {
        low = C[i + 1];
        floor_pos[s].push_back(pos);
      } else {
        a.partner[pos] = stack.back();
        a.partner[stack.back()] = pos;
        stack.pop_back();
      }
    }
  }
  for (int s = 0; s < k; ++s) {
    const int r = scheme_pairing[s];
    const auto& mine = floor_pos[s];
    const auto& theirs = floor_pos[r];
    if (mine.size() != theirs.size())
      throw Error(ErrorCode::IncompatibleQuadruple, "sigma differs between a half-edge and its reverse");
    const int sigma = static_cast<int>(mine.size());
    for (int j = 0; j < sigma; ++j) a.partner[mine[j]] = theirs[sigma - 1 - j];
  }
  return a;
}

GTree rotated_tree(const Assembly& a, int u) {
  const int n2 = a.total;
  std::vector<int> partner(n2);
  for (int i = 0; i < n2; ++i) partner[i] = ((a.partner[(i + u) % n2] - u) % n2 + n2) % n2;
  return GTree::from_pairing(partner);
}

void check_triple_shape(const Scheme& scheme, const std::vector<std::vector<int>>& contours, int u) {
  const int k = scheme.tree.map().half_edge_count();
  if (static_cast<int>(contours.size()) != k) throw Error(ErrorCode::IncompatibleQuadruple, "one forest per scheme half-edge");
  for (const auto& C : contours) {
    if (auto err = validate_contour(ContourPair{C, std::vector<int>(C.size(), 0)}))
      throw Error(ErrorCode::IncompatibleQuadruple, err->what());
  }
  if (u < 0 || u >= static_cast<int>(contours[0].size()) - 1)
    throw Error(ErrorCode::IncompatibleQuadruple, "u out of range");
}

}  // namespace

int Decomposition::edge_count() const {
  int total = 0;
  for (const auto& f : forests) total += f.length();
  return total / 2;
}

ForestTriple decompose(const GTree& t) {
  const Skeleton sk = skeleton(t);
  ForestTriple out{make_scheme(GTree::from_pairing(sk.scheme_pairing)), {}, sk.u};
  for (int s = 0; s < static_cast<int>(sk.segment_start.size()); ++s) {
    ContourPair cp;
    segment_contour(t, sk, s, nullptr, cp, nullptr);
    out.contours.push_back(std::move(cp.C));
  }
  return out;
}

GTree recompose(const ForestTriple& triple) {
  check_triple_shape(triple.scheme, triple.contours, triple.u);
  return rotated_tree(assemble(triple.scheme.tree.pairing(), triple.contours), triple.u);
}

Decomposition decompose_labeled(const WellLabeledGTree& t) {
  if (auto err = validate_labels(t)) throw *err;
  const Skeleton sk = skeleton(t.tree);
  Decomposition d;
  d.scheme = make_scheme(GTree::from_pairing(sk.scheme_pairing));
  d.u = sk.u;
  const int k = static_cast<int>(sk.segment_start.size());
  d.forests.resize(k);
  d.motzkin.resize(k);
  for (int s = 0; s < k; ++s) segment_contour(t.tree, sk, s, &t.labels, d.forests[s], &d.motzkin[s]);
  const int origin = t.labels[sk.node_vertex[0]];
  for (int v : sk.node_vertex) d.node_labels.push_back(t.labels[v] - origin);
  return d;
}

Violation validate(const Decomposition& d) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::IncompatibleQuadruple, why); };
  const GTree& s = d.scheme.tree;
  const int k = s.map().half_edge_count();
  if (static_cast<int>(d.forests.size()) != k || static_cast<int>(d.motzkin.size()) != k)
    return bad("one forest and one Motzkin path per scheme half-edge");
  if (static_cast<int>(d.node_labels.size()) != s.vertex_count() || d.node_labels[0] != 0)
    return bad("node labels must cover every scheme vertex with 0 at the root origin");
  const auto partner = s.pairing();
  for (int p = 0; p < k; ++p) {
    if (auto err = validate_contour(d.forests[p])) return bad(std::string("forest: ") + err->what());
    if (auto err = validate(d.motzkin[p])) return bad(std::string("Motzkin: ") + err->what());
    const int sigma = d.sigma(p);
    if (d.motzkin[p].lifetime() != sigma) return bad("Motzkin lifetime differs from sigma");
    if (d.sigma(partner[p]) != sigma) return bad("sigma differs between a half-edge and its reverse");
    const int le = d.node_labels[s.corner_vertex(p + 1)] - d.node_labels[s.corner_vertex(p)];
    if (d.motzkin[p].values.back() != le) return bad("Motzkin endpoint does not match node labels");
    const auto& rev = d.motzkin[partner[p]].values;
    for (int i = 0; i <= sigma; ++i)
      if (rev[i] != d.motzkin[p].values[sigma - i] - le) return bad("Motzkin reversal relation fails");
  }
  if (d.u < 0 || d.u >= d.forests[0].length()) return bad("u out of range");
  return std::nullopt;
}

std::vector<int> label_contour(const Decomposition& d, int p) {
  const auto& cp = d.forests[p];
  const int sigma = cp.C.front();
  const auto low = running_min(cp.C);
  std::vector<int> lab(cp.C.size());
  for (std::size_t i = 0; i < lab.size(); ++i) lab[i] = cp.L[i] + d.motzkin[p].values[sigma - low[i]];
  return lab;
}

WellLabeledGTree recompose_labeled(const Decomposition& d) {
  if (auto err = validate(d)) throw *err;
  const GTree& s = d.scheme.tree;
  const int k = s.map().half_edge_count();
  std::vector<std::vector<int>> contours;
  for (const auto& f : d.forests) contours.push_back(f.C);
  const Assembly a = assemble(s.pairing(), contours);
  GTree tree = rotated_tree(a, d.u);
  const int n2 = a.total;
  std::vector<int> corner_label(n2);
  for (int p = 0; p < k; ++p) {
    const auto lab = label_contour(d, p);
    const int base = d.node_labels[s.corner_vertex(p)];
    for (int i = 0; i + 1 < static_cast<int>(lab.size()); ++i) corner_label[a.seg_begin[p] + i] = base + lab[i];
  }
  std::vector<int> labels(tree.vertex_count(), 0);
  std::vector<char> set(tree.vertex_count(), 0);
  for (int i = 0; i < n2; ++i) {
    const int v = tree.corner_vertex(((i - d.u) % n2 + n2) % n2);
    if (set[v] && labels[v] != corner_label[i])
      throw Error(ErrorCode::IncompatibleQuadruple, "two corners of one vertex get different labels");
    labels[v] = corner_label[i];
    set[v] = 1;
  }
  const int shift = labels[0];
  for (int& x : labels) x -= shift;
  WellLabeledGTree out{std::move(tree), std::move(labels)};
  if (auto err = validate_labels(out)) throw Error(ErrorCode::IncompatibleQuadruple, err->what());
  return out;
}

}  // namespace qmap
