//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_ANALYSIS_HPP_
#define DDIGRAPH_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddigraph/metrics.hpp"
#include "ddigraph/rng.hpp"
#include "ddigraph/smiles.hpp"
#include "ddigraph/types.hpp"

namespace ddigraph {

// ---------------------------------------------------------------------------
// Shortest-path statistics

/// Mean BFS distance over unordered atom pairs. Pairs in different
/// connected components are skipped; returns 0 when no pair is connected.
double avg_shortest_path(const Molecule &mol);

enum class PathStatistic { kPairMean, kFirstDrug };

struct DistanceStratum {
  std::vector<std::size_t> members;  // positions into the evaluated samples
  std::optional<MacroMetrics> metrics;
};

struct DistanceStrata {
  std::vector<double> statistics;   // per sample
  std::vector<double> boundaries;   // quantiles - 1 cut values, nondecreasing
  std::vector<int> stratum;         // per sample
  std::vector<DistanceStratum> strata;
};

/// Cut value k (1 <= k < quantiles) is the sorted statistic at position
/// ceil(k n / quantiles) - 1. A sample falls in the first stratum whose cut
/// value is >= its statistic, so ties go to the lower stratum.
std::vector<double> quantile_boundaries(std::span<const double> values,
                                        int quantiles);
int assign_stratum(double value, std::span<const double> boundaries);

/// `mol_pairs[i]` holds the two drugs of evaluated sample i.
DistanceStrata stratify_by_distance(
    std::span<const std::pair<const Molecule *, const Molecule *>> mol_pairs,
    std::span<const int> preds, std::span<const int> labels, int classes,
    int quantiles = 5, PathStatistic statistic = PathStatistic::kPairMean);

// ---------------------------------------------------------------------------
// Over-smoothing probe

/// Mean cosine similarity over unordered pairs of distinct rows. Zero rows
/// contribute similarity 0.
double mean_pairwise_cosine(const MatrixX &rows);

/// D^-1/2 (A + I) D^-1/2 F with D the degree matrix of A + I.
MatrixX normalized_propagate(const MatrixX &adjacency, const MatrixX &features);

enum class ProbeGraphs {
  kMolecules,      // featurized random small molecules, random projection
  kBlockDiagonal,  // random tree-plus-rings blocks, Gaussian node features
};

std::string_view to_string(ProbeGraphs graphs);
ProbeGraphs parse_probe_graphs(std::string_view text);

struct DepthProbeOptions {
  std::uint64_t seed = 7;
  ProbeGraphs graphs = ProbeGraphs::kMolecules;
  int max_depth = 8;
  int trials = 100;
  int dim = 32;         // model defaults
  int hidden_dim = 64;
  int min_atoms = 3;   // per drug, block-diagonal graphs only
  int max_atoms = 12;
};

struct DepthProbeTrial {
  std::vector<double> plain;    // similarity after depth 1..max
  std::vector<double> gformer;  // same, for the GFormer stack
};

struct DepthProbeReport {
  std::vector<double> plain;    // per-depth mean over trials
  std::vector<double> gformer;
  std::vector<DepthProbeTrial> trials;
};

/// Random connected graph on n nodes: a random tree plus a few extra edges.
MatrixX random_molecular_graph(int n, Rng &rng);

/// Untrained structural probe: random joint graphs pushed through (a)
/// repeated normalized propagation and (b) freshly initialized GFormer
/// layers. Each trial draws from its own stream derived from (seed, trial).
DepthProbeReport depth_probe(const DepthProbeOptions &options);

/// Similarities after depth 1..max_depth for both stacks on one graph.
DepthProbeTrial probe_graph(const MatrixX &adjacency, const MatrixX &features,
                            int max_depth, int hidden_dim, Rng &rng);

// ---------------------------------------------------------------------------
// Edge highlighting

struct WeightedEdge {
  int p;
  int q;
  double weight;
};

/// The k largest cross-molecular entries A(p, q), p < boundary <= q, sorted by
/// weight descending then (p, q) ascending.
std::vector<WeightedEdge> top_edges(const MatrixX &adjacency, int k,
                                    int boundary);

}  // namespace ddigraph

#endif  // DDIGRAPH_ANALYSIS_HPP_
