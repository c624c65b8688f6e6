#pragma once

#include <functional>
#include <vector>

#include "qmap/random.hpp"

namespace qmap {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

TestResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// Second sample weighted; its effective size (sum w)^2 / sum w^2 enters the p-value.
TestResult ks_two_sample_weighted(std::vector<double> a, const std::vector<double>& b, const std::vector<double>& wb);

// Pearson goodness of fit; expected are probabilities summing to 1.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_gof(const std::vector<long>& observed, const std::vector<double>& expected);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(mean sample) against log(size), with a percentile bootstrap
// interval obtained by resampling each size's samples.
struct SlopeEstimate {
  double slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
SlopeEstimate log_log_slope(const std::vector<double>& sizes, const std::vector<std::vector<double>>& samples,
                            int resamples, Rng& rng, double level = 0.95);

}  // namespace qmap
