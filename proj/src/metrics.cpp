//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ddigraph/config.hpp"
#include "ddigraph/error.hpp"

namespace ddigraph {
namespace {

struct ClassScores {
  double precision;
  double recall;
  double f1;
};

double safe_div(double num, double den) {
  return den == 0 ? 0.0 : num / den;
}

ClassScores class_scores(const ConfusionMatrix &cm, int c) {
  const double tp = static_cast<double>(cm.counts(c, c));
  const double predicted = static_cast<double>(cm.counts.col(c).sum());
  const double actual = static_cast<double>(cm.counts.row(c).sum());
  ClassScores s;
  s.precision = safe_div(tp, predicted);
  s.recall = safe_div(tp, actual);
  s.f1 = safe_div(2 * s.precision * s.recall, s.precision + s.recall);
  return s;
}

MacroMetrics macro_over(const ConfusionMatrix &cm, std::span<const int> cls) {
  MacroMetrics m;
  m.accuracy = static_cast<double>(cm.counts.trace())
               / static_cast<double>(cm.total());
  for (int c: cls) {
    const ClassScores s = class_scores(cm, c);
    m.macro_precision += s.precision;
    m.macro_recall += s.recall;
    m.macro_f1 += s.f1;
  }
  const double n = static_cast<double>(cls.size());
  m.macro_precision /= n;
  m.macro_recall /= n;
  m.macro_f1 /= n;
  return m;
}

}  // namespace

ConfusionMatrix accumulate(std::span<const int> preds,
                           std::span<const int> labels, int classes) {
  if (preds.size() != labels.size())
    throw Error(ErrorCode::kShapeMismatch,
                "accumulate: " + std::to_string(preds.size())
                    + " predictions vs " + std::to_string(labels.size())
                    + " labels");
  if (classes < 1)
    throw Error(ErrorCode::kIndexOutOfRange, "class count must be positive");
  ConfusionMatrix cm;
  cm.counts.setZero(classes, classes);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= classes || labels[i] < 0
        || labels[i] >= classes)
      throw Error(ErrorCode::kIndexOutOfRange,
                  "sample " + std::to_string(i) + ": class index outside [0, "
                      + std::to_string(classes) + ")");
    ++cm.counts(labels[i], preds[i]);
  }
  return cm;
}

MacroMetrics macro_metrics(const ConfusionMatrix &cm) {
  if (cm.classes() == 0 || cm.total() == 0)
    throw Error(ErrorCode::kEmptyMatrix, "no evaluated samples");
  std::vector<int> all(cm.classes());
  for (int c = 0; c < cm.classes(); ++c)
    all[c] = c;
  return macro_over(cm, all);
}

MacroMetrics stratified_metrics(std::span<const int> preds,
                                std::span<const int> labels, int classes,
                                std::span<const int> subset) {
  if (subset.empty())
    throw Error(ErrorCode::kEmptySubset, "label subset is empty");
  std::vector<int> cls(subset.begin(), subset.end());
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  for (int c: cls) {
    if (c < 0 || c >= classes)
      throw Error(ErrorCode::kIndexOutOfRange,
                  "subset class " + std::to_string(c) + " outside [0, "
                      + std::to_string(classes) + ")");
  }
  if (preds.size() != labels.size())
    throw Error(ErrorCode::kShapeMismatch, "stratified_metrics: length mismatch");

  std::vector<int> kept_preds, kept_labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::binary_search(cls.begin(), cls.end(), labels[i])) {
      kept_preds.push_back(preds[i]);
      kept_labels.push_back(labels[i]);
    }
  }
  if (kept_labels.empty())
    throw Error(ErrorCode::kNoMatchingSamples,
                "no samples carry a label from the subset");
  return macro_over(ddigraph::accumulate(kept_preds, kept_labels, classes), cls);
}

std::string to_key_value(const MacroMetrics &m) {
  std::ostringstream os;
  os << "accuracy=" << format_double(m.accuracy)
     << " macro_f1=" << format_double(m.macro_f1)
     << " macro_precision=" << format_double(m.macro_precision)
     << " macro_recall=" << format_double(m.macro_recall);
  return os.str();
}

std::vector<int> parse_label_subset(std::string_view text) {
  auto bad = [&text](const std::string &why) {
    return Error(ErrorCode::kInvalidConfig,
                 "label subset '" + std::string(text) + "': " + why);
  };
  auto number = [&bad](std::string_view s) {
    while (!s.empty() && s.front() == ' ')
      s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
      s.remove_suffix(1);
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || v < 0)
      throw bad("'" + std::string(s) + "' is not a class index");
    return v;
  };

  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos)
      comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    if (item.find_first_not_of(' ') != std::string_view::npos) {
      const std::size_t dash = item.find('-');
      if (dash == std::string_view::npos) {
        out.push_back(number(item));
      } else {
        const int lo = number(item.substr(0, dash));
        const int hi = number(item.substr(dash + 1));
        if (hi < lo)
          throw bad("descending range");
        for (int c = lo; c <= hi; ++c)
          out.push_back(c);
      }
    }
    start = comma + 1;
  }
  if (out.empty())
    throw Error(ErrorCode::kEmptySubset, "label subset is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ddigraph
