#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "run_dir.hpp"
#include "tpa/analysis.hpp"
#include "tpa/experiments.hpp"
#include "tpa/hash.hpp"

namespace tpa::cli {

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DivergenceError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const NumericError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const DataError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 1;
  return 2;
}

template <typename Fn>
int guarded(const char* command, Fn&& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << command << ": error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SplitRatios ratios_of(const std::vector<double>& split) {
  if (split.size() != 3) throw std::invalid_argument("--split expects three ratios");
  return {split[0], split[1], split[2]};
}

// Dataset input: a CSV file, or a directory of piano-roll CSVs (one piece
// per file) that is split piece-wise instead of row-wise.
struct LoadedData {
  bool piecewise = false;
  TimeSeriesDataset dataset;                 // row-wise case
  std::vector<TimeSeriesDataset> pieces;     // piece-wise case
  std::vector<std::string> input_paths;
};

LoadedData load_input(const std::string& path, bool pianoroll) {
  LoadedData out;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv files in directory " + path);
    out.piecewise = true;
    for (const std::string& f : files) {
      out.pieces.push_back(pianoroll ? load_pianoroll(f) : load_mts_csv(f));
      out.input_paths.push_back(f);
    }
    return out;
  }
  out.dataset = pianoroll ? load_pianoroll(path) : load_mts_csv(path);
  out.input_paths.push_back(path);
  return out;
}

struct PreparedSplits {
  std::vector<WindowSample> train, val, test;
  NormalizationState norm;
  ValueKind kind = ValueKind::Continuous;
  int width = 0;
  int test_row_offset = 0;  // absolute row index of the test split's first row
  std::string split_manifest;
};

PreparedSplits prepare_row_split(const TimeSeriesDataset& ds, const SplitRatios& ratios,
                                 NormMode mode, int window, int horizon, uint64_t seed) {
  SplitResult split = chronological_split(ds, ratios);
  auto [train_ds, norm] = normalize(split.train, mode);
  TimeSeriesDataset val_ds = apply_normalization(split.val, norm);
  TimeSeriesDataset test_ds = apply_normalization(split.test, norm);

  PreparedSplits out;
  out.train = make_windows(train_ds, window, horizon);
  out.val = make_windows(val_ds, window, horizon);
  out.test = make_windows(test_ds, window, horizon);
  out.norm = norm;
  out.kind = ds.kind;
  out.width = ds.width;
  out.test_row_offset = split.train_rows + split.val_rows;
  out.split_manifest = split_manifest_json(ds.name, split, norm, seed);
  return out;
}

PreparedSplits prepare_piece_split(const std::vector<TimeSeriesDataset>& pieces,
                                   const SplitRatios& ratios, int window, int horizon,
                                   uint64_t seed) {
  PieceSplit split = split_pieces(static_cast<int>(pieces.size()), ratios, seed);
  PreparedSplits out;
  out.kind = pieces.front().kind;
  out.width = pieces.front().width;
  auto gather = [&](const std::vector<int>& idx, std::vector<WindowSample>& into) {
    for (int i : idx) {
      const TimeSeriesDataset& piece = pieces[static_cast<size_t>(i)];
      if (piece.length < window + horizon) continue;  // piece too short for one window
      std::vector<WindowSample> ws = make_windows(piece, window, horizon);
      into.insert(into.end(), ws.begin(), ws.end());
    }
  };
  gather(split.train, out.train);
  gather(split.val, out.val);
  gather(split.test, out.test);
  if (out.train.empty()) throw DataError("piece split left no training windows");

  nlohmann::json j;
  j["pieces"] = {{"train", split.train}, {"val", split.val}, {"test", split.test}};
  j["seed"] = seed;
  out.split_manifest = j.dump(2);
  return out;
}

std::string history_jsonl(const std::vector<EpochStats>& history) {
  std::ostringstream os;
  for (const EpochStats& e : history) {
    nlohmann::json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    if (std::isnan(e.val_loss)) {
      j["val_loss"] = nullptr;
    } else {
      j["val_loss"] = e.val_loss;
    }
    j["lr"] = e.lr;
    j["wall_ms"] = e.wall_ms;
    os << j.dump() << "\n";
  }
  return os.str();
}

std::string predictions_csv(const EvalOutput& eval, int row_offset) {
  std::ostringstream os;
  os << "timestamp,series,truth,prediction\n";
  for (int r = 0; r < eval.predictions.rows(); ++r) {
    int origin = eval.origins[static_cast<size_t>(r)];
    for (int d = 0; d < eval.predictions.cols(); ++d) {
      os << (row_offset + origin) << "," << d << "," << fmt(eval.truths.at(r, d)) << ","
         << fmt(eval.predictions.at(r, d)) << "\n";
    }
  }
  return os.str();
}

}  // namespace

int run_toy_command(const ToyArgs& args) {
  return guarded("toy", [&] {
    if (args.d_values.empty()) throw std::invalid_argument("--d expects at least one width");
    if (args.runs < 1) throw std::invalid_argument("--runs must be >= 1");
    std::vector<ToyVariant> variants;
    for (const std::string& name : args.variants) variants.push_back(toy_variant_from_name(name));
    ToyFamily family = toy_family_from_name(args.family);

    nlohmann::json config;
    config["d"] = args.d_values;
    config["family"] = args.family;
    config["variants"] = args.variants;
    config["runs"] = args.runs;
    config["seed"] = args.seed;
    config["epochs"] = args.epochs;
    config["lr"] = args.lr;
    config["batch"] = args.batch;
    config["decay_every"] = args.decay_every;
    config["decay_rate"] = args.decay_rate;
    config["filters"] = args.filters;
    config["filter_length"] = args.filter_length;
    config["layers"] = args.layers;
    config["base_hidden"] = args.base_hidden;

    RunDir dir = make_run_dir(args.run_root, "toy", config.dump(), {});

    std::ostringstream csv;
    csv << "family,d,variant,seed,hidden,params,train_mae,log10_train_mae\n";
    for (int d : args.d_values) {
      for (ToyVariant variant : variants) {
        for (int r = 0; r < args.runs; ++r) {
          ToyRunSpec spec;
          spec.family = family;
          spec.d = d;
          spec.variant = variant;
          spec.epochs = args.epochs;
          spec.seed = args.seed + static_cast<uint64_t>(r);
          spec.lr = args.lr;
          spec.batch = args.batch;
          spec.decay_every = args.decay_every;
          spec.decay_rate = args.decay_rate;
          spec.filters = args.filters;
          spec.filter_length = args.filter_length;
          spec.layers = args.layers;
          spec.base_hidden = args.base_hidden;
          ToyRunResult result = run_toy(spec);
          csv << args.family << "," << d << "," << toy_variant_name(variant) << ","
              << spec.seed << "," << result.hidden << "," << result.params << ","
              << fmt(result.train_mae) << "," << fmt(std::log10(result.train_mae)) << "\n";
          std::cout << "toy d=" << d << " " << toy_variant_name(variant) << " seed=" << spec.seed
                    << " train_mae=" << result.train_mae << "\n";
        }
      }
    }
    write_text_file(dir.path + "/toy.csv", csv.str());
    write_manifest(dir, "toy", config.dump(), args.seed, {}, {"toy.csv"});
    std::cout << "wrote " << dir.path << "/toy.csv\n";
  });
}

namespace {

TrainConfig train_config_from(const TrainArgs& args, int window, int hidden, double lr,
                              int decay_every, const std::string& normalize, LossKind loss) {
  TrainConfig tc;
  tc.window = window;
  tc.horizon = args.horizon;
  tc.hidden = hidden;
  tc.layers = args.layers;
  tc.filters = args.filters;
  tc.filter_length = args.filter_length;
  tc.lr = lr;
  tc.decay_every = decay_every;
  tc.decay_rate = args.decay_rate;
  tc.epochs = args.epochs;
  tc.batch = args.batch;
  tc.seed = args.seed;
  tc.loss = loss;
  tc.normalization = norm_mode_from_name(normalize);
  tc.variant = variant_from_name(args.variant);
  tc.mode.axis = args.attention == "position"      ? AttendAxis::Position
                 : args.attention == "filter"      ? AttendAxis::Filter
                 : args.attention == "without-cnn" ? AttendAxis::WithoutCnn
                                                   : throw std::invalid_argument(
                                                         "unknown attention axis: " + args.attention);
  tc.mode.activation = args.activation == "sigmoid"   ? Activation::Sigmoid
                       : args.activation == "softmax" ? Activation::Softmax
                                                      : throw std::invalid_argument(
                                                            "unknown activation: " + args.activation);
  tc.mode.integration = args.integration == "scored"   ? Integration::Scored
                        : args.integration == "concat" ? Integration::Concat
                                                       : throw std::invalid_argument(
                                                             "unknown integration: " + args.integration);
  tc.ar_window = args.ar_window;
  tc.bias = !args.no_bias;
  tc.clip_norm = args.clip_norm;
  return tc;
}

}  // namespace

int run_train_command(const TrainArgs& args) {
  return guarded("train", [&] {
    if (args.data.empty()) throw DataError("--data is required");
    LoadedData input = load_input(args.data, args.pianoroll);
    SplitRatios ratios = ratios_of(args.split);
    ValueKind kind = input.piecewise ? input.pieces.front().kind : input.dataset.kind;
    LossKind loss = args.loss == "auto"
                        ? (kind == ValueKind::Binary ? LossKind::CrossEntropy : LossKind::L1)
                        : loss_kind_from_name(args.loss);
    if (loss == LossKind::CrossEntropy && kind == ValueKind::Continuous) {
      throw std::invalid_argument("cross-entropy loss requires a binary dataset");
    }
    if (loss == LossKind::L1 && kind == ValueKind::Binary) {
      throw std::invalid_argument("binary datasets train with cross-entropy loss");
    }

    if (!args.grid && (args.window.size() != 1 || args.hidden.size() != 1 || args.lr.size() != 1 ||
                       args.decay_every.size() != 1 || args.normalize.size() != 1)) {
      throw std::invalid_argument("list-valued flags require --grid");
    }

    std::vector<TrainConfig> space;
    for (int window : args.window) {
      for (int hidden : args.hidden) {
        for (double lr : args.lr) {
          for (int decay_every : args.decay_every) {
            for (const std::string& normalize : args.normalize) {
              space.push_back(train_config_from(args, window, hidden, lr, decay_every,
                                                kind == ValueKind::Binary ? "none" : normalize,
                                                loss));
            }
          }
        }
      }
    }

    nlohmann::json config = nlohmann::json::parse(space.front().to_json_string());
    config["data"] = args.data;
    config["split"] = args.split;
    config["grid"] = args.grid;
    config["grid_size"] = space.size();
    RunDir dir = make_run_dir(args.run_root, "train", config.dump(), input.input_paths);

    // Select the winning config (trivial when the space is a singleton).
    int winner = 0;
    std::ostringstream grid_csv;
    grid_csv << "index,window,hidden,lr,decay_every,normalization,best_val,best_epoch\n";
    if (space.size() > 1) {
      if (input.piecewise) throw std::invalid_argument("--grid is not supported for piece-wise corpora");
      GridResult gr = grid_search(space, chronological_split(input.dataset, ratios));
      winner = gr.best_index;
      for (size_t i = 0; i < gr.entries.size(); ++i) {
        const GridEntry& e = gr.entries[i];
        grid_csv << i << "," << e.config.window << "," << e.config.hidden << "," << e.config.lr
                 << "," << e.config.decay_every << "," << norm_mode_name(e.config.normalization)
                 << "," << fmt(e.best_val) << "," << e.best_epoch << "\n";
      }
    }

    const TrainConfig& tc = space[static_cast<size_t>(winner)];
    PreparedSplits prepared =
        input.piecewise
            ? prepare_piece_split(input.pieces, ratios, tc.window, tc.horizon, tc.seed)
            : prepare_row_split(input.dataset, ratios, tc.normalization, tc.window, tc.horizon,
                                tc.seed);

    TrainData data;
    data.train = prepared.train;
    data.val = prepared.val;
    data.kind = prepared.kind;
    data.norm = prepared.norm;
    ModelConfig mc = tc.model_config(prepared.width);
    TrainResult result = train(tc, mc, data);

    save_checkpoint(result.best, dir.path + "/checkpoint.tpa");
    write_text_file(dir.path + "/history.jsonl", history_jsonl(result.history));
    write_text_file(dir.path + "/split_manifest.json", prepared.split_manifest + "\n");
    std::vector<std::string> outputs = {"checkpoint.tpa", "history.jsonl", "split_manifest.json"};
    if (space.size() > 1) {
      write_text_file(dir.path + "/grid.csv", grid_csv.str());
      outputs.push_back("grid.csv");
      std::cout << "grid winner: index " << winner << " (window=" << tc.window
                << ", hidden=" << tc.hidden << ", lr=" << tc.lr << ", decay_every=" << tc.decay_every
                << ", normalization=" << norm_mode_name(tc.normalization) << ")\n";
    }
    nlohmann::json final_config = nlohmann::json::parse(tc.to_json_string());
    final_config["data"] = args.data;
    final_config["split"] = args.split;
    write_manifest(dir, "train", final_config.dump(), tc.seed, input.input_paths, outputs);

    std::cout << "best_epoch=" << result.best_epoch << " best_val=" << result.best_val << "\n";
    std::cout << "wrote " << dir.path << "/checkpoint.tpa\n";
  });
}

int run_eval_command(const EvalArgs& args) {
  return guarded("eval", [&] {
    if (args.checkpoint.empty()) throw DataError("--checkpoint is required");
    if (args.data.empty()) throw DataError("--data is required");
    ModelParams params = load_checkpoint(args.checkpoint);
    LoadedData input = load_input(args.data, args.pianoroll);
    SplitRatios ratios = ratios_of(args.split);

    ValueKind kind = input.piecewise ? input.pieces.front().kind : input.dataset.kind;
    int width = input.piecewise ? input.pieces.front().width : input.dataset.width;
    if (width != params.config.input_size) {
      throw ShapeError("eval: dataset width " + std::to_string(width) +
                       " does not match checkpoint input size " +
                       std::to_string(params.config.input_size));
    }

    NormMode mode = kind == ValueKind::Binary ? NormMode::None : norm_mode_from_name(args.normalize);
    PreparedSplits prepared =
        input.piecewise
            ? prepare_piece_split(input.pieces, ratios, params.config.window, args.horizon, args.seed)
            : prepare_row_split(input.dataset, ratios, mode, params.config.window, args.horizon,
                                args.seed);
    if (prepared.test.empty()) throw DataError("eval: test split has no windows");

    EvalOutput eval = kind == ValueKind::Binary
                          ? [&] {
                              EvalOutput e = evaluate_model(params, prepared.test, prepared.norm,
                                                            ValueKind::Continuous);
                              e.report = binary_report(e.predictions, e.truths, args.threshold,
                                                       args.macro);
                              return e;
                            }()
                          : evaluate_model(params, prepared.test, prepared.norm, ValueKind::Continuous);

    std::string ds_name = input.piecewise ? args.data : input.dataset.name;
    eval.report.dataset = ds_name;
    eval.report.horizon = args.horizon;
    eval.report.seed = args.seed;
    eval.report.config_hash = hash_hex(fnv1a(params.config.to_json_string()));

    nlohmann::json config;
    config["checkpoint"] = args.checkpoint;
    config["data"] = args.data;
    config["split"] = args.split;
    config["horizon"] = args.horizon;
    config["normalize"] = norm_mode_name(mode);
    config["threshold"] = args.threshold;
    std::vector<std::string> inputs = input.input_paths;
    inputs.push_back(args.checkpoint);
    RunDir dir = make_run_dir(args.run_root, "eval", config.dump(), inputs);

    write_text_file(dir.path + "/metrics.json", eval.report.to_json_string() + "\n");
    write_text_file(dir.path + "/metrics.csv", eval.report.to_csv());
    write_text_file(dir.path + "/predictions.csv", predictions_csv(eval, prepared.test_row_offset));
    write_manifest(dir, "eval", config.dump(), args.seed, inputs,
                   {"metrics.json", "metrics.csv", "predictions.csv"});

    for (const auto& [name, value] : eval.report.metrics) {
      std::cout << name << " " << value << "\n";
    }
    std::cout << "wrote " << dir.path << "/metrics.json\n";
  });
}

int run_analyze_command(const AnalyzeArgs& args) {
  return guarded("analyze", [&] {
    if (args.checkpoint.empty()) throw DataError("--checkpoint is required");
    ModelParams params = load_checkpoint(args.checkpoint);
    if (params.attn.filters.empty()) {
      throw DataError("analyze: checkpoint has no CNN filters (attention mode " +
                      std::string(attend_axis_name(params.config.mode.axis)) + "/" +
                      integration_name(params.config.mode.integration) + ")");
    }
    int window = params.config.window;

    Spectrum filter_spec = avg_dft(pad_rows(params.attn.filters, window));
    filter_spec.source = "filters";

    nlohmann::json config;
    config["checkpoint"] = args.checkpoint;
    config["filters_only"] = args.filters_only;
    config["top_j"] = args.top_j;

    if (args.filters_only) {
      RunDir dir = make_run_dir(args.run_root, "analyze", config.dump(), {args.checkpoint});
      write_text_file(dir.path + "/filter_spectrum.csv", spectrum_csv(filter_spec));
      write_manifest(dir, "analyze", config.dump(), args.seed, {args.checkpoint},
                     {"filter_spectrum.csv"});
      std::cout << "wrote " << dir.path << "/filter_spectrum.csv\n";
      return;
    }

    if (args.data.empty()) throw DataError("--data is required unless --filters-only");
    LoadedData input = load_input(args.data, false);
    if (input.piecewise) throw DataError("analyze expects a single CSV dataset");
    SplitRatios ratios = ratios_of(args.split);
    NormMode mode = norm_mode_from_name(args.normalize);
    PreparedSplits prepared = prepare_row_split(input.dataset, ratios, mode, window, args.horizon,
                                                args.seed);

    // Every row of every training input window, stacked.
    int d = input.dataset.width;
    int rows = static_cast<int>(prepared.train.size()) * d;
    Tensor stacked = Tensor::zeros({rows, window});
    int at = 0;
    for (const WindowSample& s : prepared.train) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < window; ++j) stacked.at(at, j) = s.input.at(i, j);
        ++at;
      }
    }
    Spectrum data_spec = avg_dft(stacked);
    data_spec.source = "dataset";

    AlignmentReport report = spectrum_alignment(data_spec, filter_spec, args.top_j);

    config["data"] = args.data;
    config["split"] = args.split;
    config["normalize"] = norm_mode_name(mode);
    std::vector<std::string> inputs = input.input_paths;
    inputs.push_back(args.checkpoint);
    RunDir dir = make_run_dir(args.run_root, "analyze", config.dump(), inputs);

    write_text_file(dir.path + "/data_spectrum.csv", spectrum_csv(data_spec));
    write_text_file(dir.path + "/filter_spectrum.csv", spectrum_csv(filter_spec));
    write_text_file(dir.path + "/alignment.json", report.to_json_string() + "\n");
    write_manifest(dir, "analyze", config.dump(), args.seed, inputs,
                   {"data_spectrum.csv", "filter_spectrum.csv", "alignment.json"});

    std::cout << "matched " << report.matches.size() << " of " << report.data_peaks.size()
              << " dataset peaks (fraction " << report.fraction_matched << ")\n";
    std::cout << "wrote " << dir.path << "/alignment.json\n";
  });
}

namespace {

struct AblationCell {
  std::string activation;  // softmax | sigmoid | concat
  std::string axis;        // position | filter | without-cnn
};

std::string cell_name(const AblationCell& c) { return c.activation + "/" + c.axis; }

const char* axis_label(const std::string& axis) {
  if (axis == "position") return "Position";
  if (axis == "filter") return "Filter";
  return "W/o CNN";
}

const char* activation_label(const std::string& act) {
  if (act == "softmax") return "Softmax";
  if (act == "sigmoid") return "Sigmoid";
  return "Concat";
}

std::vector<AblationCell> full_grid() {
  std::vector<AblationCell> cells;
  for (const char* act : {"softmax", "sigmoid", "concat"}) {
    for (const char* axis : {"position", "filter", "without-cnn"}) {
      cells.push_back({act, axis});
    }
  }
  return cells;
}

AblationCell parse_cell(const std::string& name) {
  size_t slash = name.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("cell name must be activation/axis: " + name);
  AblationCell cell{name.substr(0, slash), name.substr(slash + 1)};
  bool act_ok = cell.activation == "softmax" || cell.activation == "sigmoid" || cell.activation == "concat";
  bool axis_ok = cell.axis == "position" || cell.axis == "filter" || cell.axis == "without-cnn";
  if (!act_ok || !axis_ok) throw std::invalid_argument("unknown ablation cell: " + name);
  return cell;
}

}  // namespace

int run_ablate_command(const AblateArgs& args) {
  return guarded("ablate", [&] {
    if (args.data.empty()) throw DataError("--data is required");
    if (args.runs < 1) throw std::invalid_argument("--runs must be >= 1");
    LoadedData input = load_input(args.data, args.pianoroll);
    if (input.piecewise) throw std::invalid_argument("ablate expects a single CSV dataset");
    SplitRatios ratios = ratios_of(args.split);
    ValueKind kind = input.dataset.kind;

    std::vector<AblationCell> cells;
    if (args.cells.empty()) {
      cells = full_grid();
    } else {
      for (const std::string& name : args.cells) cells.push_back(parse_cell(name));
    }

    nlohmann::json config;
    config["data"] = args.data;
    config["runs"] = args.runs;
    config["seed"] = args.seed;
    config["window"] = args.window;
    config["hidden"] = args.hidden;
    config["epochs"] = args.epochs;
    std::vector<std::string> cell_names;
    for (const AblationCell& c : cells) cell_names.push_back(cell_name(c));
    config["cells"] = cell_names;
    RunDir dir = make_run_dir(args.run_root, "ablate", config.dump(), input.input_paths);

    std::ostringstream csv;
    csv << "activation,axis,metric,mean,stddev,runs\n";
    std::map<std::pair<std::string, std::string>, std::string> table_cells;

    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const AblationCell& cell = cells[ci];
      std::vector<double> scores;
      for (int r = 0; r < args.runs; ++r) {
        TrainConfig tc;
        tc.window = args.window;
        tc.horizon = args.horizon;
        tc.hidden = args.hidden;
        tc.layers = args.layers;
        tc.filters = args.filters;
        tc.filter_length = args.filter_length;
        tc.lr = args.lr;
        tc.decay_every = args.decay_every;
        tc.decay_rate = args.decay_rate;
        tc.epochs = args.epochs;
        tc.batch = args.batch;
        tc.seed = Rng::mix(args.seed, static_cast<uint64_t>(ci) * 1000 + static_cast<uint64_t>(r));
        tc.loss = kind == ValueKind::Binary ? LossKind::CrossEntropy : LossKind::L1;
        tc.normalization =
            kind == ValueKind::Binary ? NormMode::None : norm_mode_from_name(args.normalize);
        tc.variant = ModelVariant::Tpa;
        tc.mode.integration = cell.activation == "concat" ? Integration::Concat : Integration::Scored;
        tc.mode.activation = cell.activation == "softmax" ? Activation::Softmax : Activation::Sigmoid;
        tc.mode.axis = cell.axis == "position"      ? AttendAxis::Position
                       : cell.axis == "filter"      ? AttendAxis::Filter
                                                    : AttendAxis::WithoutCnn;
        tc.ar_window = args.ar_window;

        PreparedSplits prepared = prepare_row_split(input.dataset, ratios, tc.normalization,
                                                    tc.window, tc.horizon, tc.seed);
        TrainData data;
        data.train = prepared.train;
        data.val = prepared.val;
        data.kind = prepared.kind;
        data.norm = prepared.norm;
        ModelConfig mc = tc.model_config(prepared.width);
        TrainResult result = train(tc, mc, data);
        double score = validation_metric(result.best, prepared.test, prepared.kind, prepared.norm);
        scores.push_back(score);
      }
      double mean = 0.0;
      for (double s : scores) mean += s;
      mean /= static_cast<double>(scores.size());
      double var = 0.0;
      for (double s : scores) var += (s - mean) * (s - mean);
      double stddev = scores.size() > 1 ? std::sqrt(var / static_cast<double>(scores.size() - 1)) : 0.0;

      const char* metric = kind == ValueKind::Binary ? "nll" : "rse";
      csv << activation_label(cell.activation) << "," << axis_label(cell.axis) << "," << metric
          << "," << fmt(mean) << "," << fmt(stddev) << "," << args.runs << "\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f+-%.4f", mean, stddev);
      table_cells[{cell.activation, cell.axis}] = buf;
      std::cout << cell_name(cell) << ": " << mean << " +- " << stddev << "\n";
    }

    write_text_file(dir.path + "/ablation.csv", csv.str());

    // Table-shaped view when the full grid ran.
    if (args.cells.empty()) {
      std::ostringstream table;
      table << "activation,Position,Filter,W/o CNN\n";
      for (const char* act : {"Softmax", "Sigmoid", "Concat"}) {
        std::string key = act == std::string("Softmax")   ? "softmax"
                          : act == std::string("Sigmoid") ? "sigmoid"
                                                          : "concat";
        table << act;
        for (const char* axis : {"position", "filter", "without-cnn"}) {
          table << "," << table_cells[{key, axis}];
        }
        table << "\n";
      }
      write_text_file(dir.path + "/table.csv", table.str());
    }
    std::vector<std::string> outputs = {"ablation.csv"};
    if (args.cells.empty()) outputs.push_back("table.csv");
    write_manifest(dir, "ablate", config.dump(), args.seed, input.input_paths, outputs);
    std::cout << "wrote " << dir.path << "/ablation.csv\n";
  });
}

}  // namespace tpa::cli
