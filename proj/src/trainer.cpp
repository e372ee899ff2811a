//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ddigraph/error.hpp"
#include "ddigraph/rng.hpp"
#include "ddigraph/training.hpp"

namespace ddigraph {
namespace {

double selection_score(const MacroMetrics &m, SelectionMetric metric) {
  return metric == SelectionMetric::kAccuracy ? m.accuracy : m.macro_f1;
}

int argmax(const RowVectorX &row) {
  Eigen::Index best;
  row.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

std::string_view to_string(SelectionMetric metric) {
  return metric == SelectionMetric::kAccuracy ? "accuracy" : "macro_f1";
}

SelectionMetric parse_selection_metric(std::string_view text) {
  if (text == "accuracy")
    return SelectionMetric::kAccuracy;
  if (text == "macro_f1" || text == "macro-f1")
    return SelectionMetric::kMacroF1;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown selection metric '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(batch_size > 0, "batch size must be positive");
  require(learning_rate >= 0, "learning rate must be nonnegative");
  require(layers > 0, "layers must be positive");
  require(heads > 0, "heads must be positive");
  require(dim > 0, "dim must be positive");
  require(hidden_dim > 0, "hidden dim must be positive");
  require(max_epochs > 0, "max epochs must be positive");
  require(weight_decay >= 0, "weight decay must be nonnegative");
  if (dim % heads != 0)
    throw Error(ErrorCode::kHeadsNotDividing,
                std::to_string(heads) + " heads for dim " + std::to_string(dim));
}

void TrainConfig::store(Config &config) const {
  config.set("train.batch_size", std::to_string(batch_size));
  config.set("train.lr", format_double(learning_rate));
  config.set("train.seed", std::to_string(seed));
  config.set("train.layers", std::to_string(layers));
  config.set("train.heads", std::to_string(heads));
  config.set("train.dim", std::to_string(dim));
  config.set("train.hidden_dim", std::to_string(hidden_dim));
  config.set("train.epochs", std::to_string(max_epochs));
  config.set("train.weight_decay", format_double(weight_decay));
  config.set("train.selection", std::string(to_string(selection)));
  config.set("train.both_orders", both_orders ? "1" : "0");
}

TrainConfig TrainConfig::from(const Config &config) {
  TrainConfig c;
  c.batch_size = static_cast<int>(config.get_int("train.batch_size", c.batch_size));
  c.learning_rate = config.get_double("train.lr", c.learning_rate);
  c.seed = static_cast<std::uint64_t>(
      config.get_int("train.seed", static_cast<long>(c.seed)));
  c.layers = static_cast<int>(config.get_int("train.layers", c.layers));
  c.heads = static_cast<int>(config.get_int("train.heads", c.heads));
  c.dim = static_cast<int>(config.get_int("train.dim", c.dim));
  c.hidden_dim = static_cast<int>(
      config.get_int("train.hidden_dim", config.contains("train.dim")
                                             ? 2 * c.dim
                                             : c.hidden_dim));
  c.max_epochs = static_cast<int>(config.get_int("train.epochs", c.max_epochs));
  c.weight_decay = config.get_double("train.weight_decay", c.weight_decay);
  c.selection = parse_selection_metric(
      config.get_string("train.selection", std::string(to_string(c.selection))));
  c.both_orders = config.get_int("train.both_orders", 0) != 0;
  c.validate();
  return c;
}

std::string RunRecord::to_jsonl() const {
  std::ostringstream os;
  for (const EpochRecord &e: epochs) {
    nlohmann::ordered_json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["train_accuracy"] = e.train_accuracy;
    if (e.has_val) {
      j["val_accuracy"] = e.val.accuracy;
      j["val_macro_f1"] = e.val.macro_f1;
      j["val_macro_precision"] = e.val.macro_precision;
      j["val_macro_recall"] = e.val.macro_recall;
    }
    j["best"] = e.epoch == best_epoch;
    os << j.dump() << '\n';
  }
  return os.str();
}

Evaluation evaluate(const ModelParams &params,
                    std::span<const DDISample> samples,
                    std::span<const std::size_t> indices,
                    FeatureCache &cache) {
  Evaluation out;
  out.preds.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t idx: indices) {
    const DDISample &s = samples[idx];
    const RowVectorX probs =
        predict(cache.graph(s.smiles_1), cache.graph(s.smiles_2), params);
    out.preds.push_back(argmax(probs));
    out.labels.push_back(s.label);
  }
  return out;
}

TrainResult train(std::span<const DDISample> samples, int classes,
                  const SplitPlan &plan, const TrainConfig &config,
                  FeatureCache &cache, const EpochCallback &on_epoch) {
  config.validate();
  if (plan.train.empty())
    throw Error(ErrorCode::kEmptyDataset, "training split is empty");
  for (const auto *list: { &plan.train, &plan.val, &plan.test }) {
    for (std::size_t idx: *list) {
      if (idx >= samples.size())
        throw Error(ErrorCode::kIndexOutOfRange,
                    "split references sample " + std::to_string(idx));
      if (samples[idx].label >= classes)
        throw Error(ErrorCode::kLabelOutOfRange,
                    "sample " + std::to_string(idx) + " has label "
                        + std::to_string(samples[idx].label));
    }
  }

  ModelShape shape;
  shape.dim = config.dim;
  shape.hidden_dim = config.hidden_dim;
  shape.layers = config.layers;
  shape.heads = config.heads;
  shape.classes = classes;
  ModelParams params = init_params(shape, config.seed);
  const std::vector<Param *> all = params.all();

  ad::AdamWOptions<Scalar> opt;
  opt.lr = config.learning_rate;
  opt.weight_decay = config.weight_decay;
  ad::AdamW<Scalar> optimizer(opt);

  // (sample index, swapped)
  std::vector<std::pair<std::size_t, bool>> items;
  for (std::size_t idx: plan.train) {
    items.emplace_back(idx, false);
    if (config.both_orders)
      items.emplace_back(idx, true);
  }

  TrainResult result;
  bool have_best = false;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng rng = Rng::derive(config.seed, static_cast<std::uint64_t>(epoch));
    rng.shuffle(items);

    double loss_sum = 0;
    std::vector<int> epoch_preds, epoch_labels;
    epoch_preds.reserve(items.size());
    epoch_labels.reserve(items.size());

    const std::size_t batch = static_cast<std::size_t>(config.batch_size);
    for (std::size_t begin = 0, b = 0; begin < items.size();
         begin += batch, ++b) {
      const std::size_t end = std::min(items.size(), begin + batch);
      params.zero_grad();
      try {
        for (std::size_t k = begin; k < end; ++k) {
          const DDISample &s = samples[items[k].first];
          const std::string &first = items[k].second ? s.smiles_2 : s.smiles_1;
          const std::string &second = items[k].second ? s.smiles_1 : s.smiles_2;
          const JointGraph joint =
              build_joint(cache.graph(first), cache.graph(second));
          Tape tape;
          const ModelVars vars = bind(tape, params);
          const ForwardPass f = forward(tape, vars, joint);
          const Var loss = ad::softmax_cross_entropy(f.logits, s.label);
          tape.backward(loss);
          loss_sum += loss.scalar();
          Eigen::Index pred;
          f.logits.value().row(0).maxCoeff(&pred);
          epoch_preds.push_back(static_cast<int>(pred));
          epoch_labels.push_back(s.label);
        }
        const Scalar inv = 1.0 / static_cast<Scalar>(end - begin);
        for (Param *p: all)
          p->grad *= inv;
        optimizer.step(all);
        for (const Param *p: all) {
          if (!p->value.allFinite())
            throw Error(ErrorCode::kNonFinite,
                        "parameter " + p->name + " diverged");
        }
      } catch (const Error &e) {
        throw Error(e.code(), "epoch " + std::to_string(epoch) + ", batch "
                                  + std::to_string(b) + ": " + e.what());
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(items.size());
    if (!std::isfinite(rec.train_loss))
      throw Error(ErrorCode::kNonFinite,
                  "epoch " + std::to_string(epoch) + ": non-finite loss");
    const MacroMetrics train_metrics =
        macro_metrics(ddigraph::accumulate(epoch_preds, epoch_labels, classes));
    rec.train_accuracy = train_metrics.accuracy;

    double score;
    if (!plan.val.empty()) {
      const Evaluation ev = evaluate(params, samples, plan.val, cache);
      rec.val = macro_metrics(ddigraph::accumulate(ev.preds, ev.labels, classes));
      rec.has_val = true;
      score = selection_score(rec.val, config.selection);
    } else {
      score = selection_score(train_metrics, config.selection);
    }

    if (!have_best || score > result.record.best_score) {
      have_best = true;
      result.record.best_score = score;
      result.record.best_epoch = epoch;
      result.best = params;
    }
    result.record.epochs.push_back(rec);
    if (on_epoch)
      on_epoch(rec);
  }
  return result;
}

}  // namespace ddigraph
