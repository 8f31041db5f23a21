#include "tpa/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpa/data.hpp"
#include "tpa/training.hpp"

namespace tpa {

double MetricsReport::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw std::out_of_range("metrics report has no metric " + name);
}

std::string MetricsReport::to_json_string() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["horizon"] = horizon;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["degenerate_series"] = degenerate_series;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  j["metrics"] = m;
  return j.dump(2);
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << "dataset,horizon,metric,value\n";
  char buf[40];
  for (const auto& [k, v] : metrics) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << dataset << "," << horizon << "," << k << "," << buf << "\n";
  }
  return os.str();
}

namespace {

void require_same_rank2(const char* what, const Tensor& pred, const Tensor& truth) {
  if (pred.rank() != 2 || truth.rank() != 2 || !same_shape(pred, truth)) {
    throw ShapeError(std::string(what) + ": expected equal rank-2 shapes, got " +
                     shape_str(pred.shape) + " and " + shape_str(truth.shape));
  }
}

double global_mean(const Tensor& t) {
  double acc = 0.0;
  for (int i = 0; i < t.numel(); ++i) acc += t.at(i);
  return acc / t.numel();
}

}  // namespace

double rae(const Tensor& pred, const Tensor& truth) {
  require_same_rank2("rae", pred, truth);
  double mean = global_mean(truth);
  double num = 0.0, denom = 0.0;
  for (int i = 0; i < truth.numel(); ++i) {
    num += std::fabs(pred.at(i) - truth.at(i));
    denom += std::fabs(truth.at(i) - mean);
  }
  if (denom == 0.0) throw NumericError("rae: truth is constant, denominator is zero");
  return num / denom;
}

double rse(const Tensor& pred, const Tensor& truth) {
  require_same_rank2("rse", pred, truth);
  double mean = global_mean(truth);
  double num = 0.0, denom = 0.0;
  for (int i = 0; i < truth.numel(); ++i) {
    double e = pred.at(i) - truth.at(i);
    double d = truth.at(i) - mean;
    num += e * e;
    denom += d * d;
  }
  if (denom == 0.0) throw NumericError("rse: truth is constant, denominator is zero");
  return std::sqrt(num) / std::sqrt(denom);
}

double corr(const Tensor& pred, const Tensor& truth, int* excluded) {
  require_same_rank2("corr", pred, truth);
  int rows = truth.rows(), cols = truth.cols();
  double acc = 0.0;
  int used = 0, skipped = 0;
  for (int d = 0; d < cols; ++d) {
    double mp = 0.0, mt = 0.0;
    for (int t = 0; t < rows; ++t) {
      mp += pred.at(t, d);
      mt += truth.at(t, d);
    }
    mp /= rows;
    mt /= rows;
    double cov = 0.0, vp = 0.0, vt = 0.0;
    for (int t = 0; t < rows; ++t) {
      double dp = pred.at(t, d) - mp;
      double dt = truth.at(t, d) - mt;
      cov += dp * dt;
      vp += dp * dp;
      vt += dt * dt;
    }
    if (vp == 0.0 || vt == 0.0) {
      ++skipped;
      continue;
    }
    acc += cov / std::sqrt(vp * vt);
    ++used;
  }
  if (excluded != nullptr) *excluded = skipped;
  if (used == 0) throw NumericError("corr: every series is degenerate");
  return acc / used;
}

MetricsReport binary_report(const Tensor& probabilities, const Tensor& targets,
                            double threshold, bool macro) {
  require_same_rank2("binary_report", probabilities, targets);
  if (!(threshold > 0.0 && threshold < 1.0)) throw NumericError("binary_report: threshold must be in (0,1)");
  for (int i = 0; i < targets.numel(); ++i) {
    if (targets.at(i) != 0.0 && targets.at(i) != 1.0) {
      throw DataError("binary_report: non-binary target value");
    }
  }

  MetricsReport report;
  double nll = cross_entropy_loss(probabilities, targets).item();

  auto prf = [&](long tp, long fp, long fn) {
    double p = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    double r = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    double f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    return std::array<double, 3>{p, r, f1};
  };

  if (!macro) {
    long tp = 0, fp = 0, fn = 0;
    for (int i = 0; i < targets.numel(); ++i) {
      bool hit = probabilities.at(i) >= threshold;
      bool truth = targets.at(i) == 1.0;
      if (hit && truth) ++tp;
      else if (hit && !truth) ++fp;
      else if (!hit && truth) ++fn;
    }
    auto [p, r, f1] = prf(tp, fp, fn);
    report.metrics = {{"nll", nll}, {"precision", p}, {"recall", r}, {"f1", f1}};
  } else {
    int cols = targets.cols();
    double sp = 0.0, sr = 0.0, sf = 0.0;
    for (int d = 0; d < cols; ++d) {
      long tp = 0, fp = 0, fn = 0;
      for (int t = 0; t < targets.rows(); ++t) {
        bool hit = probabilities.at(t, d) >= threshold;
        bool truth = targets.at(t, d) == 1.0;
        if (hit && truth) ++tp;
        else if (hit && !truth) ++fp;
        else if (!hit && truth) ++fn;
      }
      auto [p, r, f1] = prf(tp, fp, fn);
      sp += p;
      sr += r;
      sf += f1;
    }
    report.metrics = {{"nll", nll}, {"precision", sp / cols}, {"recall", sr / cols}, {"f1", sf / cols}};
  }
  return report;
}

MetricsReport continuous_report(const Tensor& pred, const Tensor& truth) {
  MetricsReport report;
  int excluded = 0;
  double c = corr(pred, truth, &excluded);
  report.metrics = {{"rae", rae(pred, truth)}, {"rse", rse(pred, truth)}, {"corr", c}};
  report.degenerate_series = excluded;
  return report;
}

}  // namespace tpa
