#include "qmap/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "qmap/continuum.hpp"
#include "qmap/forest.hpp"

namespace qmap {

Violation validate(const SamplerConfig& c) {
  if (c.genus < 0 || c.genus > 3) return Error(ErrorCode::GenusOutOfRange, "genus must be in 0..3");
  if (c.n < 1) return Error(ErrorCode::BadInput, "n must be positive");
  if (c.mode == SamplerMode::Exact && c.n > c.exact_limit)
    return Error(ErrorCode::TooLarge, "n exceeds exact_limit; use asymptotic mode");
  if (c.mode == SamplerMode::Asymptotic && c.genus > 0 && c.n < c.n_min)
    return Error(ErrorCode::BadInput, "n below n_min for asymptotic mode");
  return std::nullopt;
}

std::string to_string(SamplerMode m) { return m == SamplerMode::Exact ? "exact" : "asymptotic"; }

SamplerMode parse_sampler_mode(const std::string& s) {
  if (s == "exact") return SamplerMode::Exact;
  if (s == "asymptotic") return SamplerMode::Asymptotic;
  throw Error(ErrorCode::BadInput, "unknown mode '" + s + "'");
}

GTree sample_plane_tree(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  const std::vector<int> C = sample_forest_contour(1, n, rng);
  std::vector<int> partner(2 * n), open;
  for (int i = 0; i < 2 * n; ++i) {
    if (C[i + 1] > C[i]) {
      open.push_back(i);
    } else {
      partner[i] = open.back();
      partner[open.back()] = i;
      open.pop_back();
    }
  }
  return GTree::from_pairing(partner);
}

namespace {

// Scheme edges split into a BFS spanning tree grown from the root vertex,
// scanning each vertex's outgoing positions in increasing order.
struct SchemeFrame {
  int k = 0;
  std::vector<int> partner;
  std::vector<int> tree_positions;     // oriented away from the labeled side, BFS order
  std::vector<int> nontree_positions;  // smaller position of each remaining edge
  bool root_in_tree = true;
};

SchemeFrame frame_of(const GTree& s) {
  SchemeFrame f;
  f.k = s.map().half_edge_count();
  f.partner = s.pairing();
  const int V = s.vertex_count();
  std::vector<char> seen(V, 0), used(f.k, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (int p = 0; p < f.k; ++p) {
      if (s.corner_vertex(p) != queue[i]) continue;
      const int w = s.corner_vertex(p + 1);
      if (seen[w]) continue;
      seen[w] = 1;
      queue.push_back(w);
      f.tree_positions.push_back(p);
      used[p] = used[f.partner[p]] = 1;
    }
  }
  for (int p = 0; p < f.k; ++p)
    if (!used[p] && p < f.partner[p]) f.nontree_positions.push_back(p);
  f.root_in_tree = used[0];
  return f;
}

double motzkin_ratio(int length, int endpoint) {
  if (std::abs(endpoint) > length) return 0.0;
  return std::exp(log_motzkin_count(length, endpoint) - log_motzkin_count(length, 0));
}

void set_motzkin(Decomposition& d, int p, const std::vector<int>& partner, MotzkinPath path) {
  const int sigma = path.lifetime();
  const int le = path.values.back();
  MotzkinPath rev;
  rev.values.resize(sigma + 1);
  for (int i = 0; i <= sigma; ++i) rev.values[i] = path.values[sigma - i] - le;
  d.motzkin[partner[p]] = std::move(rev);
  d.motzkin[p] = std::move(path);
}

// Node labels and Motzkin paths given sigma per position. Tree edges get
// free walks; every other edge is kept with probability
// Motz(sigma, l^e) / Motz(sigma, 0), which makes the accepted node labels
// proportional to the product of Motzkin counts.
bool sample_scheme_labels(const GTree& s, const SchemeFrame& f, const std::vector<int>& sigma, Decomposition& d,
                          Rng& rng) {
  d.motzkin.assign(f.k, MotzkinPath{});
  d.node_labels.assign(s.vertex_count(), 0);
  for (int p : f.tree_positions) {
    MotzkinPath w = sample_motzkin_walk(sigma[p], rng);
    d.node_labels[s.corner_vertex(p + 1)] = d.node_labels[s.corner_vertex(p)] + w.values.back();
    set_motzkin(d, p, f.partner, std::move(w));
  }
  for (int p : f.nontree_positions) {
    const int delta = d.node_labels[s.corner_vertex(p + 1)] - d.node_labels[s.corner_vertex(p)];
    if (uniform01(rng) >= motzkin_ratio(sigma[p], delta)) return false;
  }
  for (int p : f.nontree_positions) {
    const int delta = d.node_labels[s.corner_vertex(p + 1)] - d.node_labels[s.corner_vertex(p)];
    set_motzkin(d, p, f.partner, sample_motzkin_bridge(sigma[p], delta, rng));
  }
  return true;
}

void fill_forest_labels(Decomposition& d, Rng& rng) {
  for (auto& cp : d.forests) cp.L = sample_contour_labels(cp.C, rng);
}

// Index drawn with probability proportional to w (not all zero).
template <class T>
int pick(const std::vector<T>& w, Rng& rng) {
  T total = 0;
  for (T x : w) total += x;
  T r = static_cast<T>(uniform01(rng)) * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (r < w[i]) return static_cast<int>(i);
    r -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i] > 0) return static_cast<int>(i);
  throw Error(ErrorCode::Unreachable, "empty weight vector");
}

// Weights exp(lw - max) for log-weights lw (-inf allowed).
std::vector<double> normalized(const std::vector<double>& lw) {
  double top = -INFINITY;
  for (double x : lw) top = std::max(top, x);
  std::vector<double> w(lw.size(), 0.0);
  if (top == -INFINITY) return w;
  for (std::size_t i = 0; i < lw.size(); ++i) w[i] = std::exp(lw[i] - top);
  return w;
}

// Forests for every position: the root forest alone, the others carved out
// of one uniform forest in position order.
void fill_forests(Decomposition& d, const std::vector<int>& sigma, int m_root, int m_rest, Rng& rng) {
  const int k = static_cast<int>(sigma.size());
  d.forests.assign(k, ContourPair{});
  d.forests[0].C = sample_forest_contour(sigma[0], m_root, rng);
  int rest_trees = 0;
  for (int p = 1; p < k; ++p) rest_trees += sigma[p];
  const std::vector<int> C = rest_trees > 0 ? sample_forest_contour(rest_trees, m_rest, rng) : std::vector<int>{0};
  int start = 0, level = rest_trees;
  for (int p = 1; p < k; ++p) {
    level -= sigma[p];
    int end = start;
    while (C[end] != level) ++end;
    d.forests[p].C.assign(C.begin() + start, C.begin() + end + 1);
    for (int& x : d.forests[p].C) x -= level;
    start = end;
  }
}

std::vector<long double> convolve(const std::vector<long double>& a, const std::vector<long double>& b) {
  const std::size_t n = a.size();
  std::vector<long double> c(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Schemes sharing an edge count and the status of the root edge share the
// same weight as a function of S = sum of sigma over edges.
struct SchemeClass {
  std::vector<int> members;  // indices into enumerate_schemes(g)
  int tree_rest = 0;         // spanning-tree edges other than the root edge
  int nontree_rest = 0;      // non-tree edges other than the root edge
  bool root_in_tree = true;
  std::vector<long double> root_weight, T, TR;
  std::vector<std::vector<long double>> R;  // R[j]: j-fold convolution of r
};

struct ExactTables {
  std::vector<SchemeClass> classes;
  std::vector<std::pair<int, int>> cells;  // (class, S)
  std::vector<double> cell_weight;
};

std::shared_ptr<const ExactTables> build_tables(int g, int n) {
  const auto& schemes = enumerate_schemes(g);
  auto tab = std::make_shared<ExactTables>();
  std::map<std::pair<int, bool>, int> index;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const SchemeFrame f = frame_of(schemes[i].tree);
    const auto key = std::make_pair(f.k / 2, f.root_in_tree);
    auto [it, fresh] = index.emplace(key, static_cast<int>(tab->classes.size()));
    if (fresh) {
      SchemeClass c;
      c.root_in_tree = f.root_in_tree;
      c.tree_rest = static_cast<int>(f.tree_positions.size()) - (f.root_in_tree ? 1 : 0);
      c.nontree_rest = static_cast<int>(f.nontree_positions.size()) - (f.root_in_tree ? 0 : 1);
      tab->classes.push_back(std::move(c));
    }
    tab->classes[it->second].members.push_back(static_cast<int>(i));
  }
  std::vector<long double> r(n + 1, 0.0L);
  for (int s = 1; s <= n; ++s)
    r[s] = std::exp(static_cast<long double>(log_motzkin_count(s, 0)) - s * std::log(3.0L));
  for (std::size_t ci = 0; ci < tab->classes.size(); ++ci) {
    SchemeClass& c = tab->classes[ci];
    c.R.assign(1, std::vector<long double>(n + 1, 0.0L));
    c.R[0][0] = 1.0L;
    for (int j = 1; j <= c.nontree_rest; ++j) c.R.push_back(convolve(c.R.back(), r));
    c.T.assign(n + 1, 0.0L);
    if (c.tree_rest == 0) {
      c.T[0] = 1.0L;
    } else {
      for (int s = c.tree_rest; s <= n; ++s)
        c.T[s] = std::exp(std::lgamma(static_cast<long double>(s)) - std::lgamma(static_cast<long double>(c.tree_rest)) -
                          std::lgamma(static_cast<long double>(s - c.tree_rest + 1)));
    }
    c.TR = convolve(c.T, c.R.back());
    c.root_weight.assign(n + 1, 0.0L);
    for (int x = 1; x <= n; ++x) c.root_weight[x] = c.root_in_tree ? x : x * r[x];
    const std::vector<long double> A = convolve(c.root_weight, c.TR);
    for (int S = 1; S <= n; ++S) {
      if (A[S] <= 0) continue;
      const double lw = std::log(static_cast<double>(c.members.size())) + static_cast<double>(std::log(A[S])) +
                        std::log(static_cast<double>(n) / S) + log_count_forests(2 * S, n - S);
      tab->cells.emplace_back(static_cast<int>(ci), S);
      tab->cell_weight.push_back(lw);
    }
  }
  tab->cell_weight = normalized(tab->cell_weight);
  return tab;
}

std::shared_ptr<const ExactTables> tables(int g, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ExactTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g, n}];
  if (!slot) slot = build_tables(g, n);
  return slot;
}

// m of the root forest given the total M of all forests.
int sample_root_size(int sigma_root, int trees_total, int M, Rng& rng) {
  std::vector<double> lw(M + 1);
  for (int x = 0; x <= M; ++x)
    lw[x] = std::log(2.0 * x + sigma_root) + log_count_forests(sigma_root, x) +
            (trees_total > sigma_root ? log_count_forests(trees_total - sigma_root, M - x) : (x == M ? 0.0 : -INFINITY));
  return pick(normalized(lw), rng);
}

}  // namespace

WellLabeledGTree sample_labels(const GTree& t, Rng& rng) {
  if (t.genus() == 0) {
    const int V = t.vertex_count();
    std::vector<int> labels(V, 0);
    std::vector<char> seen(V, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    const CombinatorialMap& m = t.map();
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (int h : m.half_edges_of_vertex(t.map_vertex(queue[i]))) {
        const int w = t.facial_vertex(h ^ 1);
        if (seen[w]) continue;
        seen[w] = 1;
        labels[w] = labels[queue[i]] + static_cast<int>(uniform_below(rng, 3)) - 1;
        queue.push_back(w);
      }
    }
    return WellLabeledGTree{t, std::move(labels)};
  }
  const ForestTriple triple = decompose(t);
  const SchemeFrame f = frame_of(triple.scheme.tree);
  std::vector<int> sigma(f.k);
  for (int p = 0; p < f.k; ++p) sigma[p] = triple.contours[p].front();
  Decomposition d;
  d.scheme = triple.scheme;
  while (!sample_scheme_labels(triple.scheme.tree, f, sigma, d, rng)) {
  }
  d.forests.resize(f.k);
  for (int p = 0; p < f.k; ++p) d.forests[p].C = triple.contours[p];
  fill_forest_labels(d, rng);
  d.u = triple.u;
  return recompose_labeled(d);
}


namespace {

long double motzkin_ratio_to_free(int s) {
  return std::exp(static_cast<long double>(log_motzkin_count(s, 0)) - s * std::log(3.0L));
}

struct SigmaDraw {
  const Scheme* scheme = nullptr;
  SchemeFrame frame;
  std::vector<int> sigma;  // per position
  int S = 0;
};

SigmaDraw draw_sigma_exact(int g, int n, Rng& rng) {
  const auto tab = tables(g, n);
  const auto [ci, S] = tab->cells[pick(tab->cell_weight, rng)];
  const SchemeClass& c = tab->classes[ci];

  std::vector<long double> w(S + 1, 0.0L);
  for (int x = 1; x <= S; ++x) w[x] = c.root_weight[x] * c.TR[S - x];
  const int x = pick(w, rng);
  const int rest = S - x;
  w.assign(rest + 1, 0.0L);
  for (int s1 = 0; s1 <= rest; ++s1) w[s1] = c.T[s1] * c.R.back()[rest - s1];
  const int s1 = pick(w, rng);

  // Uniform composition of s1 into tree_rest positive parts.
  std::vector<int> tree_sigma;
  if (c.tree_rest > 0) {
    std::vector<int> cuts(s1 - 1);
    for (int i = 0; i < s1 - 1; ++i) cuts[i] = i + 1;
    for (int i = 0; i < c.tree_rest - 1; ++i) std::swap(cuts[i], cuts[i + uniform_below(rng, cuts.size() - i)]);
    cuts.resize(c.tree_rest - 1);
    std::sort(cuts.begin(), cuts.end());
    int prev = 0;
    for (int cut : cuts) {
      tree_sigma.push_back(cut - prev);
      prev = cut;
    }
    tree_sigma.push_back(s1 - prev);
  }
  std::vector<int> nontree_sigma;
  int left = rest - s1;
  for (int j = c.nontree_rest; j >= 1; --j) {
    std::vector<long double> v(left + 1, 0.0L);
    for (int s = 1; s <= left; ++s) v[s] = motzkin_ratio_to_free(s) * c.R[j - 1][left - s];
    const int s = pick(v, rng);
    nontree_sigma.push_back(s);
    left -= s;
  }

  SigmaDraw out;
  out.scheme = &enumerate_schemes(g)[c.members[uniform_below(rng, c.members.size())]];
  out.frame = frame_of(out.scheme->tree);
  out.S = S;
  const SchemeFrame& f = out.frame;
  out.sigma.assign(f.k, 0);
  auto assign = [&](int p, int s) { out.sigma[p] = out.sigma[f.partner[p]] = s; };
  assign(0, x);
  std::size_t ti = 0, ni = 0;
  for (int p : f.tree_positions)
    if (p != 0 && f.partner[p] != 0) assign(p, tree_sigma[ti++]);
  for (int p : f.nontree_positions)
    if (p != 0) assign(p, nontree_sigma[ni++]);
  return out;
}

Decomposition exact_decomposition(int g, int n, Rng& rng) {
  for (;;) {
    const SigmaDraw x = draw_sigma_exact(g, n, rng);
    Decomposition d;
    d.scheme = *x.scheme;
    if (!sample_scheme_labels(d.scheme.tree, x.frame, x.sigma, d, rng)) continue;
    const int M = n - x.S;
    const int m_root = sample_root_size(x.sigma[0], 2 * x.S, M, rng);
    fill_forests(d, x.sigma, m_root, M - m_root, rng);
    fill_forest_labels(d, rng);
    d.u = static_cast<int>(uniform_below(rng, d.forests[0].length()));
    return d;
  }
}

void check_exact(int g, int n, int exact_limit) {
  if (g < 1 || g > max_scheme_genus())
    throw Error(ErrorCode::GenusOutOfRange, "exact sampler supports genus 1.." + std::to_string(max_scheme_genus()));
  if (n > exact_limit) throw Error(ErrorCode::TooLarge, "n exceeds exact_limit " + std::to_string(exact_limit));
  if (n < 2 * g)
    throw Error(ErrorCode::BadInput, "no g-tree of genus " + std::to_string(g) + " has " + std::to_string(n) + " edges");
}

}  // namespace

SizeVector sample_sizes_exact(int g, int n, Rng& rng) {
  check_exact(g, n, n);
  const Decomposition d = exact_decomposition(g, n, rng);
  SizeVector out{d.scheme, {}, {}};
  for (std::size_t p = 0; p < d.forests.size(); ++p) {
    out.sigma.push_back(d.sigma(static_cast<int>(p)));
    out.m.push_back(d.m(static_cast<int>(p)));
  }
  return out;
}

SizeVector sample_sizes_asymptotic(int g, int n, Rng& rng) {
  if (g < 1 || g > max_dominant_scheme_genus())
    throw Error(ErrorCode::GenusOutOfRange, "asymptotic sampler supports genus 1.." +
                                                std::to_string(max_dominant_scheme_genus()));
  const double scale = std::sqrt(2.0 * n);
  for (;;) {
    const SchemeLimitSample mu = sample_mu(g, rng);
    const std::vector<int> partner = mu.scheme.tree.pairing();
    const int k = static_cast<int>(partner.size());
    SizeVector out{mu.scheme, std::vector<int>(k), std::vector<int>(k)};
    int rest = n;
    for (int p = 0; p < k; ++p) {
      if (p > partner[p]) continue;
      const int s = std::max(1, static_cast<int>(std::lround(mu.sigma[p] * scale)));
      out.sigma[p] = out.sigma[partner[p]] = s;
      rest -= s;
    }
    bool ok = true;
    for (int p = 1; p < k && ok; ++p) {
      out.m[p] = static_cast<int>(std::lround((2.0 * n * mu.m[p] - out.sigma[p]) / 2.0));
      ok = out.m[p] >= 0;
      rest -= out.m[p];
    }
    // The root forest absorbs the rounding residue.
    out.m[0] = rest;
    if (ok && rest >= 0) return out;
  }
}

WellLabeledGTree sample_wl_gtree_exact(int g, int n, Rng& rng, int exact_limit) {
  check_exact(g, n, exact_limit);
  return recompose_labeled(exact_decomposition(g, n, rng));
}

WellLabeledGTree sample_wl_gtree_asymptotic(int g, int n, Rng& rng, int n_min) {
  if (n < n_min) throw Error(ErrorCode::BadInput, "n below n_min for asymptotic mode");
  const SizeVector sz = sample_sizes_asymptotic(g, n, rng);
  const SchemeFrame f = frame_of(sz.scheme.tree);
  Decomposition d;
  d.scheme = sz.scheme;
  while (!sample_scheme_labels(d.scheme.tree, f, sz.sigma, d, rng)) {
  }
  d.forests.resize(f.k);
  for (int p = 0; p < f.k; ++p) d.forests[p].C = sample_forest_contour(sz.sigma[p], sz.m[p], rng);
  fill_forest_labels(d, rng);
  d.u = static_cast<int>(uniform_below(rng, d.forests[0].length()));
  return recompose_labeled(d);
}

WellLabeledGTree sample_wl_gtree(const SamplerConfig& c, Rng& rng) {
  if (auto err = validate(c)) throw *err;
  if (c.genus == 0) return sample_labels(sample_plane_tree(c.n, rng), rng);
  if (c.mode == SamplerMode::Exact) return sample_wl_gtree_exact(c.genus, c.n, rng, c.exact_limit);
  return sample_wl_gtree_asymptotic(c.genus, c.n, rng, c.n_min);
}

SampledQuadrangulation sample_pointed_quadrangulation(const SamplerConfig& c, Rng& rng) {
  SampledQuadrangulation out;
  out.tree = sample_wl_gtree(c, rng);
  const int eps = uniform_below(rng, 2) == 0 ? -1 : 1;
  out.pointed = cms_forward(out.tree, eps, &out.vertex_of);
  return out;
}

CombinatorialMap sample_quadrangulation(const SamplerConfig& c, Rng& rng) {
  return sample_pointed_quadrangulation(c, rng).pointed.map;
}

}  // namespace qmap
