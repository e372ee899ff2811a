//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_METRICS_HPP_
#define DDIGRAPH_METRICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ddigraph {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  int classes() const { return static_cast<int>(counts.rows()); }
  std::int64_t total() const { return counts.sum(); }
};

struct MacroMetrics {
  double accuracy = 0;
  double macro_f1 = 0;
  double macro_precision = 0;
  double macro_recall = 0;
};

ConfusionMatrix accumulate(std::span<const int> preds,
                           std::span<const int> labels, int classes);

/// Per-class precision, recall and F1 with 0/0 taken as 0; macro values are
/// unweighted means over all classes, including classes with no samples.
MacroMetrics macro_metrics(const ConfusionMatrix &cm);

/// Restricts to samples whose true label is in `subset`; macro means run
/// over the subset classes only. Predictions outside the subset count as
/// misses for their true class.
MacroMetrics stratified_metrics(std::span<const int> preds,
                                std::span<const int> labels, int classes,
                                std::span<const int> subset);

/// `accuracy=... macro_f1=...` on one line.
std::string to_key_value(const MacroMetrics &m);

/// Parses a class subset such as "0-3,35-64" into sorted distinct indices.
/// Throws EmptySubset when nothing is listed, InvalidConfig on bad syntax.
std::vector<int> parse_label_subset(std::string_view text);

}  // namespace ddigraph

#endif  // DDIGRAPH_METRICS_HPP_
