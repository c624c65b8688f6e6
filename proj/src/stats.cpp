#include "qmap/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "qmap/error.hpp"

namespace qmap {

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p(double D, double ne) {
  const double s = std::sqrt(ne);
  return kolmogorov_tail((s + 0.12 + 0.11 / s) * D);
}

}  // namespace

TestResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw Error(ErrorCode::BadInput, "empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double D = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double F = cdf(a[i]);
    D = std::max({D, (i + 1) / n - F, F - i / n});
  }
  return {D, ks_p(D, n)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::vector<double> wb(b.size(), 1.0);
  return ks_two_sample_weighted(std::move(a), b, wb);
}

TestResult ks_two_sample_weighted(std::vector<double> a, const std::vector<double>& b, const std::vector<double>& wb) {
  if (a.empty() || b.empty() || b.size() != wb.size()) throw Error(ErrorCode::BadInput, "bad KS samples");
  std::sort(a.begin(), a.end());
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });
  double wsum = 0, w2 = 0;
  for (double w : wb) {
    wsum += w;
    w2 += w * w;
  }
  const double na = static_cast<double>(a.size());
  std::size_t i = 0, j = 0;
  double Fa = 0, Fb = 0, D = 0;
  while (i < a.size() || j < idx.size()) {
    const double x = j == idx.size() || (i < a.size() && a[i] <= b[idx[j]]) ? a[i] : b[idx[j]];
    while (i < a.size() && a[i] <= x) Fa = ++i / na;
    while (j < idx.size() && b[idx[j]] <= x) Fb += wb[idx[j++]] / wsum;
    D = std::max(D, std::abs(Fa - Fb));
  }
  const double nb = wsum * wsum / w2;
  return {D, ks_p(D, na * nb / (na + nb))};
}

ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2) throw Error(ErrorCode::BadInput, "need matching bins");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * total;
    if (e <= 0) throw Error(ErrorCode::BadInput, "expected counts must be positive");
    r.statistic += (observed[i] - e) * (observed[i] - e) / e;
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw Error(ErrorCode::BadInput, "empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) throw Error(ErrorCode::BadInput, "need two values");
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::BadInput, "need two points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw Error(ErrorCode::InsufficientSizes, "all x values coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

SlopeEstimate log_log_slope(const std::vector<double>& sizes, const std::vector<std::vector<double>>& samples,
                            int resamples, Rng& rng, double level) {
  if (sizes.size() < 2 || sizes.size() != samples.size())
    throw Error(ErrorCode::InsufficientSizes, "need at least two distinct sizes");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(mean(samples[i])));
  }
  SlopeEstimate out;
  out.slope = least_squares(lx, ly).slope;
  if (resamples < 1) {
    out.ci_low = out.ci_high = out.slope;
    return out;
  }
  std::vector<double> slopes;
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto& s = samples[i];
      double sum = 0;
      for (std::size_t j = 0; j < s.size(); ++j) sum += s[uniform_below(rng, s.size())];
      ly[i] = std::log(sum / s.size());
    }
    slopes.push_back(least_squares(lx, ly).slope);
  }
  std::sort(slopes.begin(), slopes.end());
  const double a = (1 - level) / 2;
  out.ci_low = slopes[static_cast<std::size_t>(a * (slopes.size() - 1))];
  out.ci_high = slopes[static_cast<std::size_t>((1 - a) * (slopes.size() - 1))];
  return out;
}

}  // namespace qmap
