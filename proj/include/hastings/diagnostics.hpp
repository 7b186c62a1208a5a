/*
 * Copyright (C) 2026 The hastings-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HASTINGS_DIAGNOSTICS_HPP
#define HASTINGS_DIAGNOSTICS_HPP

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "hastings/errors.hpp"

namespace hastings {

struct BatchMeans {
  double mean = 0.0;
  double asymptotic_variance = 0.0; ///< batch size times the variance of batch means
  double standard_error = 0.0;      ///< of `mean`
  std::size_t batches = 0;
  std::size_t batch_size = 0;
};

/**
 * Nonoverlapping batch means. With batches = 0 the count defaults to
 * floor(sqrt(N)). Trailing samples that do not fill a batch are ignored.
 */
inline BatchMeans batch_means(std::span<const double> series, std::size_t batches = 0) {
  const std::size_t n = series.size();
  if (batches == 0) {
    batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  }
  if (batches < 2 || n < 2 * batches) {
    throw Error("batch means needs at least two batches of two samples");
  }
  BatchMeans out;
  out.batches = batches;
  out.batch_size = n / batches;
  const std::size_t used = out.batches * out.batch_size;

  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(b * out.batch_size);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(out.batch_size), 0.0) /
               static_cast<double>(out.batch_size);
  }
  out.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) {
    ss += (m - out.mean) * (m - out.mean);
  }
  out.asymptotic_variance = static_cast<double>(out.batch_size) * ss / static_cast<double>(batches - 1);
  out.standard_error = std::sqrt(out.asymptotic_variance / static_cast<double>(used));
  return out;
}

/// Sample autocorrelation at `lag` (biased normalization).
inline double autocorrelation(std::span<const double> series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag >= n) {
    return 0.0;
  }
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  double ck = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c0 += (series[i] - mean) * (series[i] - mean);
    if (i + lag < n) {
      ck += (series[i] - mean) * (series[i + lag] - mean);
    }
  }
  return c0 == 0.0 ? 0.0 : ck / c0;
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double critical = 0.0; ///< upper quantile at the requested significance
  double p_value = 1.0;
  bool passed = false;
};

inline ChiSquareResult chi_square_decision(double statistic, std::size_t dof, double significance) {
  const boost::math::chi_squared dist(static_cast<double>(dof));
  ChiSquareResult out;
  out.statistic = statistic;
  out.dof = dof;
  out.critical = boost::math::quantile(boost::math::complement(dist, significance));
  out.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
  out.passed = statistic <= out.critical;
  return out;
}

/// Pearson goodness of fit for independent draws: sum (O - E)^2 / E.
inline ChiSquareResult chi_square_iid(std::span<const std::size_t> counts,
                                      std::span<const double> probabilities, double significance) {
  if (counts.size() != probabilities.size() || counts.size() < 2) {
    throw Error("chi-square needs matching count and probability vectors of length >= 2");
  }
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = total * probabilities[i];
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
  }
  return chi_square_decision(stat, counts.size() - 1, significance);
}

} // namespace hastings

#endif // HASTINGS_DIAGNOSTICS_HPP
