#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValueKind { Continuous, Binary };

struct TimeSeriesDataset {
  std::string name;
  std::string sampling;  // free-text sampling spacing, e.g. "1 day"
  ValueKind kind = ValueKind::Continuous;
  int length = 0;  // L rows (time steps)
  int width = 0;   // D columns (series)
  std::vector<double> values;  // row-major L x D

  double at(int t, int d) const { return values[static_cast<size_t>(t) * width + d]; }
  double& at(int t, int d) { return values[static_cast<size_t>(t) * width + d]; }
};

TimeSeriesDataset load_mts_csv(const std::string& path);

// Strict 0/1 piano-roll CSV with 128 pitch columns, one row per beat.
TimeSeriesDataset load_pianoroll(const std::string& path);

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct SplitResult {
  TimeSeriesDataset train, val, test;
  int train_rows = 0, val_rows = 0, test_rows = 0;
};

// Contiguous prefix/middle/suffix with boundaries at floor(L * cumulative).
SplitResult chronological_split(const TimeSeriesDataset& ds, const SplitRatios& ratios);

enum class NormMode { PerSeriesMax, GlobalMax, None };

const char* norm_mode_name(NormMode m);
NormMode norm_mode_from_name(const std::string& name);

struct NormalizationState {
  NormMode mode = NormMode::None;
  std::vector<double> factors;  // one per series, or a single global factor

  double factor_for(int series) const;
};

// Divides by the max absolute value per series (or globally); all-zero
// scopes keep factor 1. Binary datasets must not be normalized.
std::pair<TimeSeriesDataset, NormalizationState> normalize(const TimeSeriesDataset& ds, NormMode mode);

double denormalize_value(const NormalizationState& st, int series, double value);

// Scales a dataset by an existing state's factors (e.g. the train split's
// factors applied to validation and test rows).
TimeSeriesDataset apply_normalization(const TimeSeriesDataset& ds, const NormalizationState& st);

struct WindowSample {
  Tensor input;   // D x w, columns x_{t-w} .. x_{t-1}
  Tensor target;  // D, x_{t-1+horizon}
  int origin = 0; // t
};

// One sample per valid origin; count = L - w - horizon + 1.
std::vector<WindowSample> make_windows(const TimeSeriesDataset& ds, int window, int horizon);

enum class ToyFamily { Independent, Mixed };

const char* toy_family_name(ToyFamily f);
ToyFamily toy_family_from_name(const std::string& name);

// Sine-wave toys: series i (1-based) at step t is sin(2*pi*i*t/64); the
// mixed family adds the mean of the other series' waves.
TimeSeriesDataset toy_series(int d, ToyFamily family, int length);

// Seeded piece-level split for corpora of independent pieces.
struct PieceSplit {
  std::vector<int> train, val, test;
};
PieceSplit split_pieces(int count, const SplitRatios& ratios, uint64_t seed);

// JSON description of a split (row ranges, normalization, seed).
std::string split_manifest_json(const std::string& dataset_name, const SplitResult& split,
                                const NormalizationState& norm, uint64_t seed);

}  // namespace tpa
