//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_TRAINING_HPP_
#define DDIGRAPH_TRAINING_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddigraph/config.hpp"
#include "ddigraph/metrics.hpp"
#include "ddigraph/model.hpp"
#include "ddigraph/smiles.hpp"

namespace ddigraph {

// ---------------------------------------------------------------------------
// Dataset

struct DDISample {
  std::string smiles_1;
  std::string smiles_2;
  int label = 0;
  std::size_t line = 0;  // 1-based line in the source file
};

struct QuarantinedRow {
  std::size_t line;
  std::string reason;
};

struct Dataset {
  std::vector<DDISample> samples;  // usable rows, file order
  int classes = 0;                 // 1 + max label over well-formed rows
  std::vector<QuarantinedRow> quarantined;
};

/// Header row naming smiles_1, smiles_2 and label (any order, extra columns
/// ignored); comma- or tab-delimited, chosen from the header line. Rows whose
/// SMILES do not parse are quarantined, not fatal.
Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path &path);

/// Lazily parsed and featurized drugs keyed by SMILES text.
class FeatureCache {
public:
  const FeaturedGraph &graph(const std::string &smiles);
  const Molecule &molecule(const std::string &smiles);

private:
  struct Entry {
    Molecule mol;
    FeaturedGraph graph;
  };
  const Entry &entry(const std::string &smiles);

  std::map<std::string, Entry> entries_;
};

// ---------------------------------------------------------------------------
// Splits

enum class SplitMode { kTransductive, kInductiveS1, kInductiveS2 };

std::string_view to_string(SplitMode mode);
SplitMode parse_split_mode(std::string_view text);

struct SplitPlan {
  SplitMode mode = SplitMode::kTransductive;
  int fold = 0;
  std::uint64_t seed = 42;
  std::vector<std::size_t> train, val, test;
  // Inductive modes only: pairs that fit none of the three lists.
  std::size_t discarded = 0;
};

inline constexpr int kFolds = 5;

/// Transductive: samples shuffled once per seed and cut into five equal
/// chunks; fold k tests on chunk k, validates on the next 10% of samples
/// in rotation order and trains on the rest (7:1:2).
///
/// Inductive: drugs are shuffled and chunked the same way. Fold k's chunk
/// holds the test-only drugs; the next 10% of drugs are validation-only;
/// the remaining drugs are seen. Training pairs use seen drugs only. S1
/// evaluation pairs combine one seen drug with one held-out drug; S2 pairs
/// use two held-out drugs.
SplitPlan make_splits(std::span<const DDISample> samples, SplitMode mode,
                      int fold, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Training

enum class SelectionMetric { kAccuracy, kMacroF1 };

std::string_view to_string(SelectionMetric metric);
SelectionMetric parse_selection_metric(std::string_view text);

struct TrainConfig {
  int batch_size = 512;
  double learning_rate = 0.005;
  std::uint64_t seed = 42;
  int layers = 3;
  int heads = 4;
  int dim = 32;
  int hidden_dim = 64;
  int max_epochs = 500;
  double weight_decay = 0.01;
  SelectionMetric selection = SelectionMetric::kAccuracy;
  // Train on (d1, d2) and (d2, d1). Off by default.
  bool both_orders = false;

  void validate() const;
  void store(Config &config) const;
  static TrainConfig from(const Config &config);
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double train_accuracy = 0;  // running, from pre-update predictions
  MacroMetrics val;
  bool has_val = false;
};

struct RunRecord {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_score = 0;

  /// One JSON object per line, one line per epoch.
  std::string to_jsonl() const;
};

struct TrainResult {
  ModelParams best;
  RunRecord record;
};

using EpochCallback = std::function<void(const EpochRecord &)>;

/// Mini-batch AdamW on mean cross-entropy. Each sample runs its own forward
/// and backward pass; gradients are summed in batch order then divided by
/// the batch size. After every epoch the selection metric is evaluated on
/// the validation list (or the epoch's training predictions when the list
/// is empty); the best epoch wins, ties going to the earlier one.
TrainResult train(std::span<const DDISample> samples, int classes,
                  const SplitPlan &plan, const TrainConfig &config,
                  FeatureCache &cache, const EpochCallback &on_epoch = {});

struct Evaluation {
  std::vector<int> preds;
  std::vector<int> labels;
};

Evaluation evaluate(const ModelParams &params,
                    std::span<const DDISample> samples,
                    std::span<const std::size_t> indices, FeatureCache &cache);

}  // namespace ddigraph

#endif  // DDIGRAPH_TRAINING_HPP_
