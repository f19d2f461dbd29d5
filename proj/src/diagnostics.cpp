#include "gcdhmc/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace gcdhmc {

double poisson_pmf(double lambda, long k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_pmf: lambda must be > 0");
  if (k < 0) throw std::invalid_argument("poisson_pmf: k must be >= 0");
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

std::map<long, double> normalized_histogram(const std::vector<long>& values) {
  if (values.empty()) throw std::invalid_argument("normalized_histogram: empty input");
  std::map<long, double> hist;
  for (long v : values) hist[v] += 1.0;
  const double total = static_cast<double>(values.size());
  for (auto& [k, c] : hist) c /= total;
  return hist;
}

double tv_distance(const std::map<long, double>& a, const std::map<long, double>& b) {
  auto check_normalized = [](const std::map<long, double>& h, const char* name) {
    double sum = 0.0;
    for (const auto& [k, p] : h) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument(std::string("tv_distance: ") + name + " is not normalized");
  };
  check_normalized(a, "first argument");
  check_normalized(b, "second argument");

  double tv = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      tv += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      tv += std::abs(ib->second);
      ++ib;
    } else {
      tv += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return tv;
}

double cosine_test_function(const ArrayXXd& positions, double box_length) {
  const Index n = positions.rows();
  const double w = 2.0 * M_PI * static_cast<double>(n) / box_length;
  double value = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double c = std::cos(w * (positions(i, 0) - positions(j, 0)));
      value += c * c;
    }
  return value;
}

double weak_error(const std::vector<double>& values, double ref_mean) {
  if (values.empty()) throw std::invalid_argument("weak_error: empty sample");
  double sum = 0.0;
  for (double v : values) sum += std::abs(v - ref_mean);
  return sum / static_cast<double>(values.size());
}

double abs_mean_error(const std::vector<double>& values, double ref_mean) {
  if (values.empty()) throw std::invalid_argument("abs_mean_error: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return std::abs(sum / static_cast<double>(values.size()) - ref_mean);
}

std::vector<double> autocorrelation(const std::vector<double>& series, long max_lag) {
  const long n = static_cast<long>(series.size());
  if (max_lag < 1) throw std::invalid_argument("autocorrelation: max_lag must be >= 1");
  if (n <= max_lag) throw std::invalid_argument("autocorrelation: series too short");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) throw std::invalid_argument("autocorrelation: zero-variance series");

  std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
  rho[0] = 1.0;
  for (long k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (long t = 0; t + k < n; ++t) ck += (series[static_cast<std::size_t>(t)] - mean) *
                                           (series[static_cast<std::size_t>(t + k)] - mean);
    rho[static_cast<std::size_t>(k)] = ck / static_cast<double>(n) / c0;
  }
  return rho;
}

double integrated_autocorrelation_time(const std::vector<double>& series, long max_lag) {
  const long n = static_cast<long>(series.size());
  if (n < 2) throw std::invalid_argument("iact: series too short");
  long cap = max_lag > 0 ? std::min(max_lag, n - 1) : n - 1;

  // incremental lags with the initial-positive truncation rule
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) throw std::invalid_argument("iact: zero-variance series");

  double iact = 1.0;
  for (long k = 1; k <= cap; ++k) {
    double ck = 0.0;
    for (long t = 0; t + k < n; ++t) ck += (series[static_cast<std::size_t>(t)] - mean) *
                                           (series[static_cast<std::size_t>(t + k)] - mean);
    const double rho = ck / static_cast<double>(n) / c0;
    if (rho < 0.0) break;
    iact += 2.0 * rho;
  }
  return iact;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching inputs of length >= 2");
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("loglog_slope: inputs must be positive");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

}  // namespace gcdhmc
