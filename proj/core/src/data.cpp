#include "tpa/data.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpa/rng.hpp"

namespace tpa {

namespace {

bool parse_double(const std::string& cell, double& out) {
  const char* start = cell.c_str();
  char* end = nullptr;
  out = std::strtod(start, &end);
  if (end == start) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return true;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string basename_of(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

TimeSeriesDataset load_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  TimeSeriesDataset ds;
  ds.name = basename_of(path);
  std::string line;
  int row = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_cells(line);
    std::vector<double> parsed(cells.size());
    bool numeric = true;
    size_t bad_col = 0;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], parsed[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!numeric) {
      // A single leading non-numeric row is tolerated as a header.
      if (first_data_row) continue;
      throw DataError(path + ": non-numeric cell at row " + std::to_string(row) + ", column " +
                      std::to_string(bad_col + 1));
    }
    if (first_data_row) {
      ds.width = static_cast<int>(parsed.size());
      first_data_row = false;
    } else if (static_cast<int>(parsed.size()) != ds.width) {
      throw DataError(path + ": ragged row " + std::to_string(row) + " has " +
                      std::to_string(parsed.size()) + " cells, expected " + std::to_string(ds.width));
    }
    ds.values.insert(ds.values.end(), parsed.begin(), parsed.end());
    ++ds.length;
  }
  if (ds.length == 0) throw DataError(path + ": no numeric rows");
  return ds;
}

}  // namespace

TimeSeriesDataset load_mts_csv(const std::string& path) {
  TimeSeriesDataset ds = load_numeric_csv(path);
  ds.kind = ValueKind::Continuous;
  return ds;
}

TimeSeriesDataset load_pianoroll(const std::string& path) {
  TimeSeriesDataset ds = load_numeric_csv(path);
  if (ds.width != 128) {
    throw DataError(path + ": piano-roll must have 128 pitch columns, got " + std::to_string(ds.width));
  }
  for (int t = 0; t < ds.length; ++t) {
    for (int d = 0; d < ds.width; ++d) {
      double v = ds.at(t, d);
      if (v != 0.0 && v != 1.0) {
        throw DataError(path + ": non-binary cell at row " + std::to_string(t + 1) + ", column " +
                        std::to_string(d + 1));
      }
    }
  }
  ds.kind = ValueKind::Binary;
  ds.sampling = "1 beat";
  return ds;
}

namespace {

TimeSeriesDataset take_rows(const TimeSeriesDataset& ds, int begin, int end, const char* suffix) {
  TimeSeriesDataset out;
  out.name = ds.name + suffix;
  out.sampling = ds.sampling;
  out.kind = ds.kind;
  out.width = ds.width;
  out.length = end - begin;
  out.values.assign(ds.values.begin() + static_cast<size_t>(begin) * ds.width,
                    ds.values.begin() + static_cast<size_t>(end) * ds.width);
  return out;
}

}  // namespace

SplitResult chronological_split(const TimeSeriesDataset& ds, const SplitRatios& ratios) {
  if (!(ratios.train > 0.0) || !(ratios.val > 0.0) || !(ratios.test > 0.0)) {
    throw DataError("chronological_split: ratios must be positive");
  }
  double total = ratios.train + ratios.val + ratios.test;
  if (std::fabs(total - 1.0) > 1e-9) {
    throw DataError("chronological_split: ratios must sum to 1, got " + std::to_string(total));
  }
  int l = ds.length;
  int train_end = static_cast<int>(std::floor(l * ratios.train));
  int val_end = static_cast<int>(std::floor(l * (ratios.train + ratios.val)));
  if (train_end == 0 || val_end == train_end || val_end == l) {
    throw DataError("chronological_split: a split would receive zero rows (L=" + std::to_string(l) + ")");
  }
  SplitResult r;
  r.train = take_rows(ds, 0, train_end, ".train");
  r.val = take_rows(ds, train_end, val_end, ".val");
  r.test = take_rows(ds, val_end, l, ".test");
  r.train_rows = train_end;
  r.val_rows = val_end - train_end;
  r.test_rows = l - val_end;
  return r;
}

const char* norm_mode_name(NormMode m) {
  switch (m) {
    case NormMode::PerSeriesMax: return "per-series";
    case NormMode::GlobalMax: return "global";
    case NormMode::None: return "none";
  }
  return "?";
}

NormMode norm_mode_from_name(const std::string& name) {
  if (name == "per-series") return NormMode::PerSeriesMax;
  if (name == "global") return NormMode::GlobalMax;
  if (name == "none") return NormMode::None;
  throw std::invalid_argument("unknown normalization mode: " + name);
}

double NormalizationState::factor_for(int series) const {
  if (factors.empty()) return 1.0;
  if (factors.size() == 1) return factors[0];
  return factors[static_cast<size_t>(series)];
}

std::pair<TimeSeriesDataset, NormalizationState> normalize(const TimeSeriesDataset& ds, NormMode mode) {
  if (ds.kind == ValueKind::Binary && mode != NormMode::None) {
    throw DataError("normalize: binary datasets are not normalized");
  }
  NormalizationState st;
  st.mode = mode;
  TimeSeriesDataset out = ds;
  if (mode == NormMode::None) return {out, st};

  if (mode == NormMode::GlobalMax) {
    double mx = 0.0;
    for (double v : ds.values) mx = std::max(mx, std::fabs(v));
    if (mx == 0.0) mx = 1.0;
    st.factors = {mx};
    for (double& v : out.values) v /= mx;
    return {out, st};
  }

  st.factors.assign(static_cast<size_t>(ds.width), 0.0);
  for (int t = 0; t < ds.length; ++t) {
    for (int d = 0; d < ds.width; ++d) {
      st.factors[static_cast<size_t>(d)] = std::max(st.factors[static_cast<size_t>(d)], std::fabs(ds.at(t, d)));
    }
  }
  for (double& f : st.factors) {
    if (f == 0.0) f = 1.0;
  }
  for (int t = 0; t < ds.length; ++t) {
    for (int d = 0; d < ds.width; ++d) out.at(t, d) = ds.at(t, d) / st.factors[static_cast<size_t>(d)];
  }
  return {out, st};
}

double denormalize_value(const NormalizationState& st, int series, double value) {
  return value * st.factor_for(series);
}

TimeSeriesDataset apply_normalization(const TimeSeriesDataset& ds, const NormalizationState& st) {
  TimeSeriesDataset out = ds;
  if (st.mode == NormMode::None) return out;
  for (int t = 0; t < out.length; ++t) {
    for (int d = 0; d < out.width; ++d) out.at(t, d) = ds.at(t, d) / st.factor_for(d);
  }
  return out;
}

std::vector<WindowSample> make_windows(const TimeSeriesDataset& ds, int window, int horizon) {
  if (window < 1 || horizon < 1) throw DataError("make_windows: window and horizon must be >= 1");
  if (ds.length < window + horizon) {
    throw DataError("make_windows: series of length " + std::to_string(ds.length) +
                    " too short for window " + std::to_string(window) + " and horizon " +
                    std::to_string(horizon));
  }
  int count = ds.length - window - horizon + 1;
  std::vector<WindowSample> samples;
  samples.reserve(static_cast<size_t>(count));
  for (int start = 0; start < count; ++start) {
    WindowSample s;
    s.origin = start + window;
    Tensor in = Tensor::zeros({ds.width, window});
    for (int j = 0; j < window; ++j) {
      for (int d = 0; d < ds.width; ++d) in.at(d, j) = ds.at(start + j, d);
    }
    Tensor target = Tensor::zeros({ds.width});
    int trow = s.origin - 1 + horizon;
    for (int d = 0; d < ds.width; ++d) target.at(d) = ds.at(trow, d);
    s.input = std::move(in);
    s.target = std::move(target);
    samples.push_back(std::move(s));
  }
  return samples;
}

const char* toy_family_name(ToyFamily f) {
  return f == ToyFamily::Independent ? "independent" : "mixed";
}

ToyFamily toy_family_from_name(const std::string& name) {
  if (name == "independent") return ToyFamily::Independent;
  if (name == "mixed") return ToyFamily::Mixed;
  throw std::invalid_argument("unknown toy family: " + name);
}

TimeSeriesDataset toy_series(int d, ToyFamily family, int length) {
  if (d < 1 || length < 1) throw DataError("toy_series: D and length must be >= 1");
  TimeSeriesDataset ds;
  ds.name = std::string("toy-") + toy_family_name(family) + "-d" + std::to_string(d);
  ds.sampling = "1 step";
  ds.kind = ValueKind::Continuous;
  ds.length = length;
  ds.width = d;
  ds.values.resize(static_cast<size_t>(length) * d);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int t = 0; t < length; ++t) {
    for (int i = 1; i <= d; ++i) {
      double v = std::sin(two_pi * i * t / 64.0);
      if (family == ToyFamily::Mixed && d > 1) {
        double others = 0.0;
        for (int j = 1; j <= d; ++j) {
          if (j != i) others += std::sin(two_pi * j * t / 64.0);
        }
        v += others / (d - 1);
      }
      ds.at(t, i - 1) = v;
    }
  }
  return ds;
}

PieceSplit split_pieces(int count, const SplitRatios& ratios, uint64_t seed) {
  if (count < 3) throw DataError("split_pieces: need at least 3 pieces");
  double total = ratios.train + ratios.val + ratios.test;
  if (std::fabs(total - 1.0) > 1e-9) throw DataError("split_pieces: ratios must sum to 1");
  std::vector<int> order(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) order[static_cast<size_t>(i)] = i;
  Rng rng(seed);
  rng.shuffle(order);
  int train_end = static_cast<int>(std::floor(count * ratios.train));
  int val_end = static_cast<int>(std::floor(count * (ratios.train + ratios.val)));
  train_end = std::max(train_end, 1);
  val_end = std::max(val_end, train_end + 1);
  val_end = std::min(val_end, count - 1);
  PieceSplit split;
  split.train.assign(order.begin(), order.begin() + train_end);
  split.val.assign(order.begin() + train_end, order.begin() + val_end);
  split.test.assign(order.begin() + val_end, order.end());
  return split;
}

std::string split_manifest_json(const std::string& dataset_name, const SplitResult& split,
                                const NormalizationState& norm, uint64_t seed) {
  nlohmann::json j;
  j["dataset"] = dataset_name;
  j["rows"] = {{"train", {0, split.train_rows}},
               {"val", {split.train_rows, split.train_rows + split.val_rows}},
               {"test", {split.train_rows + split.val_rows,
                         split.train_rows + split.val_rows + split.test_rows}}};
  j["normalization"] = {{"mode", norm_mode_name(norm.mode)}, {"factors", norm.factors}};
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace tpa
