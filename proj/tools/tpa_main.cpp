#include <CLI11.hpp>

#include "commands.hpp"
#include "run_dir.hpp"

using namespace tpa::cli;

int main(int argc, char** argv) {
  CLI::App app{"Multivariate time-series forecasting with temporal pattern attention"};
  app.name("tpa");
  app.require_subcommand(1);

  std::string run_root = default_run_root();
  app.add_option("--run-root", run_root, "Directory that receives per-run output directories")
      ->capture_default_str();

  ToyArgs toy;
  CLI::App* toy_cmd = app.add_subcommand("toy", "Train parameter-matched variants on sine-wave toys");
  toy_cmd->add_option("--d", toy.d_values, "Series counts to run")->delimiter(',')->capture_default_str();
  toy_cmd->add_option("--family", toy.family, "independent | mixed")->capture_default_str();
  toy_cmd->add_option("--variants", toy.variants, "lstm, luong, tpa, tpa-no-cnn")
      ->delimiter(',')
      ->capture_default_str();
  toy_cmd->add_option("--runs", toy.runs, "Seeded repetitions per cell")->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed, "Base seed")->capture_default_str();
  toy_cmd->add_option("--epochs", toy.epochs, "Training epochs")->capture_default_str();
  toy_cmd->add_option("--lr", toy.lr, "Adam learning rate")->capture_default_str();
  toy_cmd->add_option("--batch", toy.batch, "Mini-batch size")->capture_default_str();
  toy_cmd->add_option("--decay-every", toy.decay_every, "Steps between learning-rate decays (0 = off)")
      ->capture_default_str();
  toy_cmd->add_option("--decay-rate", toy.decay_rate, "Exponential decay rate")->capture_default_str();
  toy_cmd->add_option("--filters", toy.filters, "CNN filter count")->capture_default_str();
  toy_cmd->add_option("--filter-length", toy.filter_length, "CNN filter length (0 = window)")
      ->capture_default_str();
  toy_cmd->add_option("--layers", toy.layers, "LSTM layers")->capture_default_str();
  toy_cmd->add_option("--base-hidden", toy.base_hidden, "Hidden size of the budget reference model")
      ->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train one configuration or a grid");
  train_cmd->add_option("--data", train.data, "CSV file, or directory of piano-roll CSVs")->required();
  train_cmd->add_flag("--pianoroll", train.pianoroll, "Treat inputs as binary piano-rolls");
  train_cmd->add_option("--split", train.split, "train,val,test ratios")->delimiter(',')->capture_default_str();
  train_cmd->add_flag("--grid", train.grid, "Cartesian grid over the list-valued flags");
  train_cmd->add_option("--window", train.window, "Input window size w")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden, "LSTM hidden size m")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--lr", train.lr, "Adam learning rate")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--decay-every", train.decay_every, "Steps between lr decays (0 = off)")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--normalize", train.normalize, "per-series | global | none")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--horizon", train.horizon, "Forecast horizon")->capture_default_str();
  train_cmd->add_option("--decay-rate", train.decay_rate, "Exponential decay rate")->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--batch", train.batch, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Seed")->capture_default_str();
  train_cmd->add_option("--loss", train.loss, "auto | l1 | cross-entropy")->capture_default_str();
  train_cmd->add_option("--variant", train.variant, "lstm | luong | tpa")->capture_default_str();
  train_cmd->add_option("--attention", train.attention, "position | filter | without-cnn")
      ->capture_default_str();
  train_cmd->add_option("--activation", train.activation, "sigmoid | softmax")->capture_default_str();
  train_cmd->add_option("--integration", train.integration, "scored | concat")->capture_default_str();
  train_cmd->add_option("--filters", train.filters, "CNN filter count k")->capture_default_str();
  train_cmd->add_option("--filter-length", train.filter_length, "CNN filter length T (0 = window)")
      ->capture_default_str();
  train_cmd->add_option("--layers", train.layers, "LSTM layers")->capture_default_str();
  train_cmd->add_option("--ar-window", train.ar_window, "Autoregressive window q (0 = off)")
      ->capture_default_str();
  train_cmd->add_flag("--no-bias", train.no_bias, "Drop the LSTM gate biases");
  train_cmd->add_option("--clip-norm", train.clip_norm, "Gradient clipping norm (0 = off)")
      ->capture_default_str();

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a checkpoint on the test split");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--data", eval.data, "CSV file, or directory of piano-roll CSVs")->required();
  eval_cmd->add_flag("--pianoroll", eval.pianoroll, "Treat inputs as binary piano-rolls");
  eval_cmd->add_option("--split", eval.split, "train,val,test ratios")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--horizon", eval.horizon, "Forecast horizon")->capture_default_str();
  eval_cmd->add_option("--normalize", eval.normalize, "per-series | global | none (as trained)")
      ->capture_default_str();
  eval_cmd->add_option("--threshold", eval.threshold, "Binary decision threshold")->capture_default_str();
  eval_cmd->add_flag("--macro", eval.macro, "Macro-averaged precision/recall/F1");
  eval_cmd->add_option("--seed", eval.seed, "Seed recorded in the report (and used for piece splits)")
      ->capture_default_str();

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Average DFT spectra of data windows and trained CNN filters");
  analyze_cmd->add_option("--checkpoint", analyze.checkpoint, "Checkpoint file")->required();
  analyze_cmd->add_option("--data", analyze.data, "CSV dataset (training windows are analyzed)");
  analyze_cmd->add_flag("--filters-only", analyze.filters_only, "Emit only the filter spectrum");
  analyze_cmd->add_option("--split", analyze.split, "train,val,test ratios")
      ->delimiter(',')
      ->capture_default_str();
  analyze_cmd->add_option("--normalize", analyze.normalize, "per-series | global | none (as trained)")
      ->capture_default_str();
  analyze_cmd->add_option("--horizon", analyze.horizon, "Forecast horizon used for windowing")
      ->capture_default_str();
  analyze_cmd->add_option("--top-j", analyze.top_j, "Peaks per spectrum in the alignment report")
      ->capture_default_str();
  analyze_cmd->add_option("--seed", analyze.seed, "Seed recorded in the manifest")->capture_default_str();

  AblateArgs ablate;
  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "Attention-structure grid: activation rows x attend-axis columns");
  ablate_cmd->add_option("--data", ablate.data, "CSV dataset")->required();
  ablate_cmd->add_flag("--pianoroll", ablate.pianoroll, "Treat input as a binary piano-roll");
  ablate_cmd->add_option("--split", ablate.split, "train,val,test ratios")->delimiter(',')->capture_default_str();
  ablate_cmd->add_option("--cells", ablate.cells,
                         "Cells to run, e.g. sigmoid/position (default: the full grid)")
      ->delimiter(',');
  ablate_cmd->add_option("--runs", ablate.runs, "Seeded repetitions per cell")->capture_default_str();
  ablate_cmd->add_option("--seed", ablate.seed, "Base seed")->capture_default_str();
  ablate_cmd->add_option("--window", ablate.window, "Input window size w")->capture_default_str();
  ablate_cmd->add_option("--horizon", ablate.horizon, "Forecast horizon")->capture_default_str();
  ablate_cmd->add_option("--hidden", ablate.hidden, "LSTM hidden size m")->capture_default_str();
  ablate_cmd->add_option("--layers", ablate.layers, "LSTM layers")->capture_default_str();
  ablate_cmd->add_option("--filters", ablate.filters, "CNN filter count k")->capture_default_str();
  ablate_cmd->add_option("--filter-length", ablate.filter_length, "CNN filter length T (0 = window)")
      ->capture_default_str();
  ablate_cmd->add_option("--lr", ablate.lr, "Adam learning rate")->capture_default_str();
  ablate_cmd->add_option("--decay-every", ablate.decay_every, "Steps between lr decays (0 = off)")
      ->capture_default_str();
  ablate_cmd->add_option("--decay-rate", ablate.decay_rate, "Exponential decay rate")->capture_default_str();
  ablate_cmd->add_option("--epochs", ablate.epochs, "Training epochs per cell")->capture_default_str();
  ablate_cmd->add_option("--batch", ablate.batch, "Mini-batch size")->capture_default_str();
  ablate_cmd->add_option("--normalize", ablate.normalize, "per-series | global | none")
      ->capture_default_str();
  ablate_cmd->add_option("--ar-window", ablate.ar_window, "Autoregressive window q (0 = off)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors map to exit code 1
  }

  toy.run_root = run_root;
  train.run_root = run_root;
  eval.run_root = run_root;
  analyze.run_root = run_root;
  ablate.run_root = run_root;

  if (toy_cmd->parsed()) return run_toy_command(toy);
  if (train_cmd->parsed()) return run_train_command(train);
  if (eval_cmd->parsed()) return run_eval_command(eval);
  if (analyze_cmd->parsed()) return run_analyze_command(analyze);
  if (ablate_cmd->parsed()) return run_ablate_command(ablate);
  return 1;
}
