#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tpa::cli {

struct ToyArgs {
  std::vector<int> d_values{1};
  std::string family = "independent";
  std::vector<std::string> variants{"tpa"};
  int runs = 1;
  uint64_t seed = 1;
  int epochs = 200;
  double lr = 3e-3;
  int batch = 1;
  int decay_every = 64;
  double decay_rate = 0.99;
  int filters = 32;
  int filter_length = 0;
  int layers = 1;
  int base_hidden = 24;
  std::string run_root;
};

struct TrainArgs {
  std::string data;
  bool pianoroll = false;
  std::vector<double> split{0.6, 0.2, 0.2};
  bool grid = false;
  // grid-capable axes; must be singletons without --grid
  std::vector<int> window{64};
  std::vector<int> hidden{12};
  std::vector<double> lr{1e-3};
  std::vector<int> decay_every{0};
  std::vector<std::string> normalize{"none"};
  int horizon = 1;
  double decay_rate = 0.995;
  int epochs = 50;
  int batch = 64;
  uint64_t seed = 42;
  std::string loss = "auto";
  std::string variant = "tpa";
  std::string attention = "position";
  std::string activation = "sigmoid";
  std::string integration = "scored";
  int filters = 32;
  int filter_length = 0;
  int layers = 1;
  int ar_window = 0;
  bool no_bias = false;
  double clip_norm = 5.0;
  std::string run_root;
};

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  bool pianoroll = false;
  std::vector<double> split{0.6, 0.2, 0.2};
  int horizon = 1;
  std::string normalize = "none";
  double threshold = 0.5;
  bool macro = false;
  uint64_t seed = 0;
  std::string run_root;
};

struct AnalyzeArgs {
  std::string data;
  std::string checkpoint;
  bool filters_only = false;
  std::vector<double> split{0.6, 0.2, 0.2};
  std::string normalize = "none";
  int horizon = 1;
  int top_j = 3;
  uint64_t seed = 0;
  std::string run_root;
};

struct AblateArgs {
  std::string data;
  bool pianoroll = false;
  std::vector<double> split{0.6, 0.2, 0.2};
  std::vector<std::string> cells;  // empty selects the full 3x3 grid
  int runs = 1;
  uint64_t seed = 1;
  int window = 32;
  int horizon = 1;
  int hidden = 12;
  int layers = 1;
  int filters = 16;
  int filter_length = 0;
  double lr = 1e-3;
  int decay_every = 0;
  double decay_rate = 0.995;
  int epochs = 20;
  int batch = 64;
  std::string normalize = "none";
  int ar_window = 0;
  std::string run_root;
};

int run_toy_command(const ToyArgs& args);
int run_train_command(const TrainArgs& args);
int run_eval_command(const EvalArgs& args);
int run_analyze_command(const AnalyzeArgs& args);
int run_ablate_command(const AblateArgs& args);

}  // namespace tpa::cli
