#pragma once

#include <map>
#include <vector>

#include "gcdhmc/types.hpp"

namespace gcdhmc {

/// exp(-lambda) lambda^k / k!, evaluated in log space (stable to k ~ 500).
double poisson_pmf(double lambda, long k);

/// Normalized counts of an integer series.
std::map<long, double> normalized_histogram(const std::vector<long>& values);

/// Total variation in the printed convention: sum_k |a_k - b_k| over the
/// union support, without the conventional 1/2.  Inputs must each sum to 1
/// within 1e-9.
double tv_distance(const std::map<long, double>& a, const std::map<long, double>& b);

/// phi(q^N, N) = sum_{i<j} cos^2((2 pi N / L)(q_i - q_j)) for 1-D chains.
double cosine_test_function(const ArrayXXd& positions, double box_length);

/// Mean over samples of |phi_i - ref_mean| (absolute deviation inside the
/// average; converges to the mean absolute deviation, not to zero).
double weak_error(const std::vector<double>& values, double ref_mean);

/// |mean(values) - ref_mean|: the absolute error of the sample mean, the
/// quantity whose Monte Carlo decay is O(M^{-1/2}).
double abs_mean_error(const std::vector<double>& values, double ref_mean);

/// Sample autocorrelation rho(0..max_lag), normalized by the lag-0
/// variance.  Requires series length > max_lag >= 1 and nonzero variance.
std::vector<double> autocorrelation(const std::vector<double>& series, long max_lag);

/// 1 + 2 sum rho(k), truncated at the first negative rho(k) (and at
/// max_lag; max_lag <= 0 means series length - 1).
double integrated_autocorrelation_time(const std::vector<double>& series, long max_lag = 0);

/// Least-squares slope of log(ys) against log(xs); inputs must be positive.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gcdhmc
