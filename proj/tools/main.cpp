//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//
// ddigraph command-line tool.
//
//   ddigraph train   --data pairs.csv [--mode transductive|s1|s2] [--fold k] ...
//   ddigraph eval    --checkpoint best.ckpt --data pairs.csv [--split test] [--labels 0-3,7]
//   ddigraph predict --checkpoint best.ckpt --smiles-1 CCO --smiles-2 c1ccccc1 [--top-k 3]
//   ddigraph analyze oversmooth|distance|edges ...
//   ddigraph synth   --kind groups --n 200
//   ddigraph replay  --manifest runs/train-.../manifest.json
//
// Settings resolve as built-in defaults < --config file < flags. Relative
// --out paths are placed under $DDIGRAPH_OUTPUT_ROOT when it is set.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.
//

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ddigraph/config.hpp"
#include "ddigraph/error.hpp"

namespace {

using ddigraph::Config;

// Flag values keyed by config key; only flags given on the command line
// end up in the config.
class FlagSet {
public:
  void add(CLI::App *app, const std::string &flag, const std::string &key,
           const std::string &help) {
    app->add_option(flag, values_[key], help);
    options_.emplace_back(app, key, flag);
  }

  void add_switch(CLI::App *app, const std::string &flag,
                  const std::string &key, const std::string &help) {
    app->add_flag(flag, switches_[key], help);
    flags_.emplace_back(app, key, flag);
  }

  Config collect(CLI::App *app) const {
    Config out;
    for (const auto &[owner, key, flag]: options_) {
      if (owner == app && app->count(flag) > 0)
        out.set(key, values_.at(key));
    }
    for (const auto &[owner, key, flag]: flags_) {
      if (owner == app && app->count(flag) > 0)
        out.set(key, switches_.at(key) ? "1" : "0");
    }
    return out;
  }

private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> switches_;
  std::vector<std::tuple<CLI::App *, std::string, std::string>> options_;
  std::vector<std::tuple<CLI::App *, std::string, std::string>> flags_;
};

void add_common(FlagSet &flags, CLI::App *app, std::string &config_file) {
  app->add_option("--config", config_file, "key=value settings file");
  flags.add(app, "--out", "out", "run directory");
}

void add_split(FlagSet &flags, CLI::App *app) {
  flags.add(app, "--mode", "split.mode", "transductive, s1 or s2");
  flags.add(app, "--fold", "split.fold", "fold index in [0, 5)");
  flags.add(app, "--seed", "train.seed", "seed for splits and training");
}

int fail(int code, const std::string &what) {
  std::cerr << "ddigraph: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char **argv) {
  namespace cli = ddigraph::cli;

  CLI::App app("Drug-drug interaction event prediction on joint atom graphs",
               "ddigraph");
  app.require_subcommand(1);
  FlagSet flags;
  std::string config_file;

  CLI::App *train = app.add_subcommand("train", "train a model on a pair file");
  add_common(flags, train, config_file);
  flags.add(train, "--data", "data", "pair file (smiles_1, smiles_2, label)");
  add_split(flags, train);
  flags.add(train, "--epochs", "train.epochs", "max epochs (500)");
  flags.add(train, "--batch", "train.batch_size", "batch size (512)");
  flags.add(train, "--lr", "train.lr", "learning rate (0.005)");
  flags.add(train, "--dim", "train.dim", "hidden width (32)");
  flags.add(train, "--hidden-dim", "train.hidden_dim", "FFN width (2 * dim)");
  flags.add(train, "--layers", "train.layers", "GFormer layers (3)");
  flags.add(train, "--heads", "train.heads", "attention heads (4)");
  flags.add(train, "--weight-decay", "train.weight_decay", "AdamW decay (0.01)");
  flags.add(train, "--selection", "train.selection", "accuracy or macro_f1");
  flags.add_switch(train, "--both-orders", "train.both_orders",
                   "also train on swapped drug order");

  CLI::App *eval = app.add_subcommand("eval", "score a checkpoint");
  add_common(flags, eval, config_file);
  flags.add(eval, "--checkpoint", "checkpoint", "checkpoint file");
  flags.add(eval, "--data", "data", "pair file");
  flags.add(eval, "--split", "eval.split", "train, val, test or all");
  flags.add(eval, "--labels", "eval.labels", "class subset, e.g. 0-3,35-64");
  add_split(flags, eval);

  CLI::App *predict = app.add_subcommand("predict", "class probabilities for a pair");
  add_common(flags, predict, config_file);
  flags.add(predict, "--checkpoint", "checkpoint", "checkpoint file");
  flags.add(predict, "--smiles-1", "predict.smiles_1", "first drug");
  flags.add(predict, "--smiles-2", "predict.smiles_2", "second drug");
  flags.add(predict, "--top-k", "predict.top_k", "classes to show (0 = all)");

  CLI::App *analyze = app.add_subcommand("analyze", "diagnostics");
  analyze->require_subcommand(1);
  CLI::App *oversmooth =
      analyze->add_subcommand("oversmooth", "depth probe on random joint graphs");
  add_common(flags, oversmooth, config_file);
  flags.add(oversmooth, "--seed", "probe.seed", "generator seed (7)");
  flags.add(oversmooth, "--depth", "probe.depth", "max depth (8)");
  flags.add(oversmooth, "--trials", "probe.trials", "trials (100)");
  flags.add(oversmooth, "--dim", "probe.dim", "node width (32)");
  flags.add(oversmooth, "--hidden-dim", "probe.hidden_dim", "FFN width (2 * dim)");
  flags.add(oversmooth, "--graphs", "probe.graphs", "molecules or block");
  flags.add(oversmooth, "--min-atoms", "probe.min_atoms", "block graphs: min atoms");
  flags.add(oversmooth, "--max-atoms", "probe.max_atoms", "block graphs: max atoms");

  CLI::App *distance =
      analyze->add_subcommand("distance", "metrics by shortest-path quantile");
  add_common(flags, distance, config_file);
  flags.add(distance, "--checkpoint", "checkpoint", "checkpoint file");
  flags.add(distance, "--data", "data", "pair file");
  flags.add(distance, "--split", "eval.split", "train, val, test or all");
  flags.add(distance, "--quantiles", "analysis.quantiles", "strata (5)");
  flags.add(distance, "--statistic", "analysis.statistic",
            "pair_mean or first_drug");
  add_split(flags, distance);

  CLI::App *edges =
      analyze->add_subcommand("edges", "highest-weight cross-drug atom pairs");
  add_common(flags, edges, config_file);
  flags.add(edges, "--checkpoint", "checkpoint", "checkpoint file");
  flags.add(edges, "--smiles-1", "predict.smiles_1", "first drug");
  flags.add(edges, "--smiles-2", "predict.smiles_2", "second drug");
  flags.add(edges, "--k", "analysis.k", "edges to list (10)");
  flags.add(edges, "--matrix", "analysis.matrix", "reconstructed or integrated");

  CLI::App *synth = app.add_subcommand("synth", "write a constructed dataset");
  add_common(flags, synth, config_file);
  flags.add(synth, "--kind", "synth.kind", "oxygen, groups or reference");
  flags.add(synth, "--n", "synth.n", "samples (200)");
  flags.add(synth, "--seed", "synth.seed", "seed (42)");

  CLI::App *replay = app.add_subcommand("replay", "re-run from a manifest");
  std::string manifest;
  std::string replay_out;
  replay->add_option("--manifest", manifest, "manifest.json of a run")->required();
  replay->add_option("--out", replay_out, "run directory for the replay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::vector<std::pair<CLI::App *, const char *>> commands = {
    { train, cli::kTrain },         { eval, cli::kEval },
    { predict, cli::kPredict },     { oversmooth, cli::kOversmooth },
    { distance, cli::kDistance },   { edges, cli::kEdges },
    { synth, cli::kSynth },
  };

  try {
    if (replay->parsed()) {
      const auto dir = cli::replay(
          manifest, replay_out.empty() ? std::nullopt
                                       : std::optional<std::filesystem::path>(replay_out));
      std::cerr << "run directory: " << dir.string() << '\n';
      return 0;
    }
    for (const auto &[sub, name]: commands) {
      if (!sub->parsed())
        continue;
      Config config;
      if (!config_file.empty())
        config = Config::load(config_file);
      config.merge(flags.collect(sub));
      const auto dir = cli::run(name, config);
      std::cerr << "run directory: " << dir.string() << '\n';
      return 0;
    }
    return fail(2, "no command given");
  } catch (const cli::UsageError &e) {
    return fail(2, e.what());
  } catch (const ddigraph::ParseError &e) {
    return fail(2, e.what());
  } catch (const ddigraph::Error &e) {
    switch (e.code()) {
    case ddigraph::ErrorCode::kEmptySubset:
    case ddigraph::ErrorCode::kInvalidConfig:
    case ddigraph::ErrorCode::kHeadsNotDividing:
      return fail(2, e.what());
    default:
      return fail(1, e.what());
    }
  } catch (const std::exception &e) {
    return fail(1, e.what());
  }
}
