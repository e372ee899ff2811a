//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ddigraph/error.hpp"
#include "ddigraph/rng.hpp"
#include "ddigraph/training.hpp"

namespace ddigraph {
namespace {

std::size_t chunk_start(std::size_t n, int k) {
  return n * static_cast<std::size_t>(k) / kFolds;
}

// Rotation of `order` that begins right after chunk `fold`.
template <typename T>
std::vector<T> rest_after_chunk(const std::vector<T> &order, int fold) {
  const std::size_t n = order.size();
  const std::size_t end = chunk_start(n, fold + 1);
  const std::size_t begin = chunk_start(n, fold);
  std::vector<T> out;
  out.reserve(n - (end - begin));
  for (std::size_t i = end; i < n; ++i)
    out.push_back(order[i]);
  for (std::size_t i = 0; i < begin; ++i)
    out.push_back(order[i]);
  return out;
}

std::size_t tenth(std::size_t n) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0));
}

SplitPlan transductive(std::size_t n, int fold, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  SplitPlan plan;
  plan.test.assign(order.begin() + static_cast<long>(chunk_start(n, fold)),
                   order.begin() + static_cast<long>(chunk_start(n, fold + 1)));
  const std::vector<std::size_t> rest = rest_after_chunk(order, fold);
  const std::size_t n_val = std::min(tenth(n), rest.size());
  plan.val.assign(rest.begin(), rest.begin() + static_cast<long>(n_val));
  plan.train.assign(rest.begin() + static_cast<long>(n_val), rest.end());
  return plan;
}

SplitPlan inductive(std::span<const DDISample> samples, SplitMode mode,
                    int fold, std::uint64_t seed) {
  std::vector<std::string> drugs;
  for (const DDISample &s: samples) {
    drugs.push_back(s.smiles_1);
    drugs.push_back(s.smiles_2);
  }
  std::sort(drugs.begin(), drugs.end());
  drugs.erase(std::unique(drugs.begin(), drugs.end()), drugs.end());
  if (drugs.size() < 2 * kFolds)
    throw Error(ErrorCode::kInsufficientDrugs,
                std::to_string(drugs.size()) + " distinct drugs; inductive "
                    "splits need at least " + std::to_string(2 * kFolds));

  Rng rng(seed);
  rng.shuffle(drugs);

  enum class Role { kSeen, kVal, kTest };
  std::map<std::string, Role> role;
  for (std::size_t i = chunk_start(drugs.size(), fold);
       i < chunk_start(drugs.size(), fold + 1); ++i)
    role[drugs[i]] = Role::kTest;
  const std::vector<std::string> rest = rest_after_chunk(drugs, fold);
  const std::size_t n_val = std::max<std::size_t>(1, tenth(drugs.size()));
  for (std::size_t i = 0; i < rest.size(); ++i)
    role[rest[i]] = i < n_val ? Role::kVal : Role::kSeen;

  SplitPlan plan;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Role a = role.at(samples[i].smiles_1);
    const Role b = role.at(samples[i].smiles_2);
    if (a == Role::kSeen && b == Role::kSeen) {
      plan.train.push_back(i);
      continue;
    }
    auto held_out = [&](Role r) {
      if (mode == SplitMode::kInductiveS2)
        return a == r && b == r;
      return (a == r && b == Role::kSeen) || (a == Role::kSeen && b == r);
    };
    if (held_out(Role::kTest))
      plan.test.push_back(i);
    else if (held_out(Role::kVal))
      plan.val.push_back(i);
    else
      ++plan.discarded;
  }
  if (plan.train.empty() || plan.test.empty())
    throw Error(ErrorCode::kInsufficientDrugs,
                "fold " + std::to_string(fold) + " leaves "
                    + std::to_string(plan.train.size()) + " training and "
                    + std::to_string(plan.test.size()) + " test pairs");
  return plan;
}

}  // namespace

std::string_view to_string(SplitMode mode) {
  switch (mode) {
  case SplitMode::kTransductive:
    return "transductive";
  case SplitMode::kInductiveS1:
    return "s1";
  case SplitMode::kInductiveS2:
    return "s2";
  }
  return "transductive";
}

SplitMode parse_split_mode(std::string_view text) {
  if (text == "transductive")
    return SplitMode::kTransductive;
  if (text == "s1")
    return SplitMode::kInductiveS1;
  if (text == "s2")
    return SplitMode::kInductiveS2;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown split mode '" + std::string(text) + "'");
}

SplitPlan make_splits(std::span<const DDISample> samples, SplitMode mode,
                      int fold, std::uint64_t seed) {
  if (fold < 0 || fold >= kFolds)
    throw Error(ErrorCode::kInvalidConfig,
                "fold must be in [0, " + std::to_string(kFolds) + ")");
  if (samples.empty())
    throw Error(ErrorCode::kEmptyDataset, "no samples to split");
  SplitPlan plan = mode == SplitMode::kTransductive
                       ? transductive(samples.size(), fold, seed)
                       : inductive(samples, mode, fold, seed);
  plan.mode = mode;
  plan.fold = fold;
  plan.seed = seed;
  return plan;
}

}  // namespace ddigraph
