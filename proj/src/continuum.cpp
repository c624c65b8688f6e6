#include "qmap/continuum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "qmap/forest.hpp"

namespace qmap {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

double PathSample::at(double y) const {
  const int N = grid_size();
  if (y <= 0) return values.front();
  if (y >= lifetime) return values.back();
  const double x = y / lifetime * N;
  const int i = std::min(static_cast<int>(x), N - 1);
  const double frac = x - i;
  return values[i] + frac * (values[i + 1] - values[i]);
}

Violation validate(const PathSample& p) {
  if (p.values.size() < 2) return Error(ErrorCode::BadInput, "a path needs at least two grid values");
  if (!(p.lifetime > 0)) return Error(ErrorCode::BadInput, "lifetime must be positive");
  return std::nullopt;
}

PathSample sample_brownian_bridge(double m, double l0, double l1, int N, Rng& rng) {
  if (!(m > 0) || N < 1) throw Error(ErrorCode::BadInput, "need m > 0 and N >= 1");
  PathSample p{m, std::vector<double>(N + 1)};
  p.values[0] = l0;
  const double dt = m / N;
  for (int i = 0; i + 1 < N; ++i) {
    const double left = m - i * dt;
    const double mean = p.values[i] + (l1 - p.values[i]) * dt / left;
    const double var = dt * (left - dt) / left;
    p.values[i + 1] = mean + std::sqrt(var) * standard_normal(rng);
  }
  p.values[N] = l1;
  return p;
}

namespace {

// Uniform first-passage walk from `top` to 0 with K steps.
struct Walk {
  std::vector<int> C;
  int top = 0;
  long steps = 0;
};

Walk fp_walk(double m, double sigma, int N, Rng& rng, long walk_steps) {
  if (!(m > 0) || !(sigma > 0) || N < 1) throw Error(ErrorCode::BadInput, "need m > 0, sigma > 0 and N >= 1");
  long K = walk_steps > 0 ? walk_steps : std::max<long>(static_cast<long>(N) * N, 10000);
  int top = std::max(1, static_cast<int>(std::lround(sigma * std::sqrt(K / m))));
  if (top > K) top = static_cast<int>(K);
  if ((K - top) % 2 != 0) ++K;
  Walk w;
  w.top = top;
  w.steps = K;
  w.C = sample_forest_contour(top, static_cast<int>((K - top) / 2), rng);
  return w;
}

PathSample grid_of(const Walk& w, double m, int N, double scale, double shift) {
  PathSample p{m, std::vector<double>(N + 1)};
  for (int i = 0; i <= N; ++i) {
    const long j = i == N ? w.steps : std::lround(static_cast<double>(i) * w.steps / N);
    p.values[i] = (w.C[j] - shift) * scale;
  }
  return p;
}

}  // namespace

PathSample sample_fp_bridge(double m, double sigma, int N, Rng& rng, long walk_steps) {
  const Walk w = fp_walk(m, sigma, N, rng, walk_steps);
  PathSample p = grid_of(w, m, N, sigma / w.top, w.top);
  p.values[N] = -sigma;
  return p;
}

SnakeHead sample_snake_head(double m, double sigma, int N, Rng& rng, int gaussian_max) {
  const Walk w = fp_walk(m, sigma, N, rng, 0);
  SnakeHead out;
  out.F = grid_of(w, m, N, sigma / w.top, w.top);
  out.F.values[N] = -sigma;
  if (N > gaussian_max) {
    out.mode = SnakeMode::Discrete;
    // Labels on the walk's forest, rescaled so a unit of height carries unit variance.
    const std::vector<int> L = sample_contour_labels(w.C, rng);
    const double spatial = static_cast<double>(w.top) / sigma;
    const double label_scale = 1.0 / std::sqrt(2.0 / 3.0 * spatial);
    out.Z = grid_of(Walk{L, 0, w.steps}, m, N, label_scale, 0.0);
    return out;
  }
  out.mode = SnakeMode::Gaussian;
  const int n = N + 1;
  std::vector<double> H(n);
  double low = out.F.values[0];
  for (int i = 0; i < n; ++i) {
    low = std::min(low, out.F.values[i]);
    H[i] = std::max(0.0, out.F.values[i] - low);
  }
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    double mn = H[i];
    for (int j = i; j < n; ++j) {
      mn = std::min(mn, H[j]);
      cov(i, j) = cov(j, i) = mn;
    }
  }
  double jitter = 0.0;
  for (;;) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const Eigen::VectorXd D = ldlt.vectorD();
    const double tol = 1e-10 * std::max(1.0, D.cwiseAbs().maxCoeff());
    if (ldlt.info() == Eigen::Success && D.minCoeff() >= -tol) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = std::sqrt(std::max(0.0, D[i])) * standard_normal(rng);
      Eigen::VectorXd y = ldlt.matrixL() * z;
      Eigen::VectorXd x = ldlt.transpositionsP().transpose() * y;
      out.Z = PathSample{m, std::vector<double>(x.data(), x.data() + n)};
      for (int i = 0; i < n; ++i)
        if (H[i] == 0.0 && jitter == 0.0) out.Z.values[i] = 0.0;
      return out;
    }
    if (out.jitter_retries >= 20) throw Error(ErrorCode::CovarianceNotPSD, "snake covariance factorization failed");
    jitter = jitter == 0.0 ? 1e-12 : jitter * 10;
    cov.diagonal().array() += jitter;
    ++out.jitter_retries;
  }
}

double d_K(const PathSample& f, const PathSample& g) {
  std::vector<double> ts{f.lifetime, g.lifetime};
  for (int i = 0; i <= f.grid_size(); ++i) ts.push_back(f.time(i));
  for (int i = 0; i <= g.grid_size(); ++i) ts.push_back(g.time(i));
  double sup = 0.0;
  for (double t : ts) sup = std::max(sup, std::abs(f.at(t) - g.at(t)));
  return std::abs(f.lifetime - g.lifetime) + sup;
}

double ga(double a, double x) { return std::exp(-x * x / (2 * a)) / std::sqrt(kTwoPi * a); }

double minus_ga_prime(double m, double sigma) { return sigma / m * ga(m, sigma); }

Violation validate(const SchemeLimitSample& s) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::BadInput, why); };
  const std::vector<int> partner = s.scheme.tree.pairing();
  const std::size_t k = partner.size();
  if (s.m.size() != k || s.sigma.size() != k) return bad("one m and one sigma per scheme half-edge");
  if (static_cast<int>(s.node_labels.size()) != s.scheme.tree.vertex_count() || s.node_labels[0] != 0.0)
    return bad("node labels must cover every scheme vertex with 0 at the root origin");
  double total = 0;
  for (std::size_t p = 0; p < k; ++p) {
    if (s.m[p] < 0) return bad("negative m");
    if (!(s.sigma[p] > 0)) return bad("sigma must be positive");
    if (s.sigma[p] != s.sigma[partner[p]]) return bad("sigma differs between a half-edge and its reverse");
    total += s.m[p];
  }
  if (std::abs(total - 1.0) > 1e-9) return bad("m does not sum to 1");
  if (s.u < 0 || s.u >= s.m[0]) return bad("u out of range");
  return std::nullopt;
}

WeightedLimitSample propose_mu(int g, Rng& rng) {
  const auto& schemes = enumerate_dominant_schemes(g);
  WeightedLimitSample out;
  SchemeLimitSample& s = out.sample;
  s.scheme = schemes[uniform_below(rng, schemes.size())];
  const GTree& t = s.scheme.tree;
  const std::vector<int> partner = t.pairing();
  const int k = static_cast<int>(partner.size());
  const int V = t.vertex_count();
  const int E = k / 2;

  // Edge totals m^e + m^ebar ~ Dirichlet(1/2), split uniformly; sigma given
  // the two sizes has density proportional to sigma^2 exp(-sigma^2 / 2h),
  // h = m m' / (m + m'). Against the kernels -ga'_m(sigma) -ga'_m'(sigma)
  // everything cancels except a constant.
  std::vector<double> total(k, 0.0);
  double sum = 0;
  for (int p = 0; p < k; ++p) {
    if (p > partner[p]) continue;
    const double z = standard_normal(rng);
    sum += total[p] = z * z;
  }
  s.m.assign(k, 0.0);
  s.sigma.assign(k, 0.0);
  for (int p = 0; p < k; ++p) {
    if (p > partner[p]) continue;
    const double te = total[p] / sum, split = uniform01(rng);
    const double a = te * split, b = te - a;
    s.m[p] = a;
    s.m[partner[p]] = b;
    const double h = a * b / te;
    double r2 = 0;
    for (int i = 0; i < 3; ++i) {
      const double z = standard_normal(rng);
      r2 += z * z;
    }
    s.sigma[p] = s.sigma[partner[p]] = std::sqrt(h * r2);
  }
  s.u = uniform01(rng) * s.m[0];

  double log_w = std::log(static_cast<double>(schemes.size())) + std::log(s.m[0]) +
                 E * (0.5 * std::log(kTwoPi / 4) - std::log(kTwoPi)) + 0.5 * E * std::log(kTwoPi / 2) -
                 std::lgamma(0.5 * E);
  // Node labels: Gaussian field with precision the weighted Laplacian on
  // the vertices other than the root origin.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(V - 1, V - 1);
  for (int p = 0; p < k; ++p) {
    if (p > partner[p]) continue;
    log_w -= 0.5 * std::log(kTwoPi * s.sigma[p]);
    const int a = t.corner_vertex(p), b = t.corner_vertex(p + 1);
    if (a == b) continue;
    const double w = 1.0 / s.sigma[p];
    if (a > 0) Q(a - 1, a - 1) += w;
    if (b > 0) Q(b - 1, b - 1) += w;
    if (a > 0 && b > 0) {
      Q(a - 1, b - 1) -= w;
      Q(b - 1, a - 1) -= w;
    }
  }
  s.node_labels.assign(V, 0.0);
  if (V > 1) {
    Eigen::LLT<Eigen::MatrixXd> llt(Q);
    Eigen::VectorXd z(V - 1);
    for (int i = 0; i < V - 1; ++i) z[i] = standard_normal(rng);
    const Eigen::VectorXd x = llt.matrixU().solve(z);
    for (int i = 0; i < V - 1; ++i) s.node_labels[i + 1] = x[i];
    const Eigen::MatrixXd L = llt.matrixL();
    double log_det = 0;
    for (int i = 0; i < V - 1; ++i) log_det += 2 * std::log(L(i, i));
    log_w += 0.5 * (V - 1) * std::log(kTwoPi) - 0.5 * log_det;
  }
  out.weight = std::exp(log_w);
  return out;
}

UpsilonEstimate estimate_upsilon(int g, long draws, Rng& rng) {
  if (draws < 2) throw Error(ErrorCode::BadInput, "need at least two draws");
  double sum = 0, sum2 = 0;
  for (long i = 0; i < draws; ++i) {
    const double w = propose_mu(g, rng).weight;
    sum += w;
    sum2 += w * w;
  }
  UpsilonEstimate e;
  e.draws = draws;
  e.value = sum / draws;
  const double var = (sum2 / draws - e.value * e.value) * draws / (draws - 1);
  e.standard_error = std::sqrt(std::max(0.0, var) / draws);
  e.effective_sample_size = sum2 > 0 ? sum * sum / sum2 : 0.0;
  return e;
}

SchemeLimitSample sample_mu(int g, Rng& rng, int pool) {
  if (pool < 1) throw Error(ErrorCode::BadInput, "pool must be positive");
  std::vector<WeightedLimitSample> draws;
  draws.reserve(pool);
  double total = 0;
  for (int i = 0; i < pool; ++i) {
    draws.push_back(propose_mu(g, rng));
    total += draws.back().weight;
  }
  double r = uniform01(rng) * total;
  for (auto& d : draws) {
    if (r < d.weight) return std::move(d.sample);
    r -= d.weight;
  }
  return std::move(draws.back().sample);
}

std::string to_json(const SchemeLimitSample& s) {
  nlohmann::json j;
  j["scheme"] = s.scheme.tree.gluing_word_text();
  j["m"] = s.m;
  j["sigma"] = s.sigma;
  j["node_labels"] = s.node_labels;
  j["u"] = s.u;
  return j.dump();
}

std::string to_csv(const PathSample& p) {
  std::ostringstream os;
  os << "t,value\n" << std::setprecision(17);
  for (int i = 0; i <= p.grid_size(); ++i) os << p.time(i) << ',' << p.values[i] << '\n';
  return os.str();
}

}  // namespace qmap
