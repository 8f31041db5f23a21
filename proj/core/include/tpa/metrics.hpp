#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

struct MetricsReport {
  std::string dataset;
  int horizon = 0;
  std::string config_hash;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> metrics;
  int degenerate_series = 0;  // series excluded from CORR

  double metric(const std::string& name) const;
  std::string to_json_string() const;
  std::string to_csv() const;  // one row per (dataset, horizon, metric)
};

// Sum |pred - truth| over all cells, normalized by the deviation of the
// truth from its single global mean.
double rae(const Tensor& pred, const Tensor& truth);

// Root of the squared version of the same ratio.
double rse(const Tensor& pred, const Tensor& truth);

// Mean per-series Pearson correlation between prediction and truth columns.
// Series with zero variance on either side are skipped; the count of
// skipped series is reported through excluded when non-null.
double corr(const Tensor& pred, const Tensor& truth, int* excluded = nullptr);

// Micro-averaged precision/recall/F1 over all cells at the given threshold,
// plus the negative log-likelihood. Macro averaging is available behind the
// flag for comparison.
MetricsReport binary_report(const Tensor& probabilities, const Tensor& targets,
                            double threshold = 0.5, bool macro = false);

// Continuous-forecast report (RAE/RSE/CORR).
MetricsReport continuous_report(const Tensor& pred, const Tensor& truth);

}  // namespace tpa
