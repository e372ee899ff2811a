//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ddigraph/error.hpp"
#include "ddigraph/model.hpp"
#include "ddigraph/scm.hpp"
#include "ddigraph/synthetic.hpp"

namespace ddigraph {

double avg_shortest_path(const Molecule &mol) {
  const int n = mol.size();
  const auto adj = mol.neighbors();
  long long total = 0;
  long long pairs = 0;
  std::vector<int> dist(n);
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::queue<int> frontier;
    frontier.push(src);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v: adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
    for (int dst = src + 1; dst < n; ++dst) {
      if (dist[dst] > 0) {
        total += dist[dst];
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0
                    : static_cast<double>(total) / static_cast<double>(pairs);
}

std::vector<double> quantile_boundaries(std::span<const double> values,
                                        int quantiles) {
  if (quantiles < 1)
    throw Error(ErrorCode::kInvalidConfig, "quantiles must be positive");
  if (values.empty())
    throw Error(ErrorCode::kEmptyDataset, "no values to stratify");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> cuts;
  for (int k = 1; k < quantiles; ++k) {
    const std::size_t pos =
        (static_cast<std::size_t>(k) * n + quantiles - 1) / quantiles;
    cuts.push_back(sorted[std::max<std::size_t>(pos, 1) - 1]);
  }
  return cuts;
}

int assign_stratum(double value, std::span<const double> boundaries) {
  int s = 0;
  while (s < static_cast<int>(boundaries.size()) && value > boundaries[s])
    ++s;
  return s;
}

DistanceStrata stratify_by_distance(
    std::span<const std::pair<const Molecule *, const Molecule *>> mol_pairs,
    std::span<const int> preds, std::span<const int> labels, int classes,
    int quantiles, PathStatistic statistic) {
  if (mol_pairs.size() != preds.size() || preds.size() != labels.size())
    throw Error(ErrorCode::kShapeMismatch,
                "stratify_by_distance: input lengths differ");

  DistanceStrata out;
  for (const auto &[a, b]: mol_pairs) {
    const double first = avg_shortest_path(*a);
    out.statistics.push_back(
        statistic == PathStatistic::kFirstDrug
            ? first
            : 0.5 * (first + avg_shortest_path(*b)));
  }
  out.boundaries = quantile_boundaries(out.statistics, quantiles);
  out.strata.resize(quantiles);
  for (std::size_t i = 0; i < out.statistics.size(); ++i) {
    const int s = assign_stratum(out.statistics[i], out.boundaries);
    out.stratum.push_back(s);
    out.strata[s].members.push_back(i);
  }
  for (DistanceStratum &stratum: out.strata) {
    if (stratum.members.empty())
      continue;
    std::vector<int> p, l;
    for (std::size_t i: stratum.members) {
      p.push_back(preds[i]);
      l.push_back(labels[i]);
    }
    stratum.metrics = macro_metrics(ddigraph::accumulate(p, l, classes));
  }
  return out;
}

double mean_pairwise_cosine(const MatrixX &rows) {
  const Eigen::Index n = rows.rows();
  if (n < 2)
    return 1.0;
  const Eigen::VectorXd norms = rows.rowwise().norm();
  const MatrixX gram = rows * rows.transpose();
  double total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double den = norms(i) * norms(j);
      total += den > 0 ? gram(i, j) / den : 0.0;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

MatrixX normalized_propagate(const MatrixX &adjacency,
                             const MatrixX &features) {
  const MatrixX with_loops =
      adjacency + MatrixX::Identity(adjacency.rows(), adjacency.cols());
  const Eigen::VectorXd inv_sqrt =
      with_loops.rowwise().sum().array().rsqrt().matrix();
  return inv_sqrt.asDiagonal()
         * (with_loops * (inv_sqrt.asDiagonal() * features));
}

MatrixX random_molecular_graph(int n, Rng &rng) {
  MatrixX a = MatrixX::Zero(n, n);
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
    a(u, v) = a(v, u) = 1.0;
  }
  // roughly one ring per six atoms
  const int extra = n / 6;
  for (int e = 0; e < extra; ++e) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (u != v)
      a(u, v) = a(v, u) = 1.0;
  }
  return a;
}

DepthProbeTrial probe_graph(const MatrixX &adjacency, const MatrixX &features,
                            int max_depth, int hidden_dim, Rng &rng) {
  DepthProbeTrial trial;
  const int dim = static_cast<int>(features.cols());

  MatrixX plain = features;
  for (int depth = 1; depth <= max_depth; ++depth) {
    plain = normalized_propagate(adjacency, plain);
    trial.plain.push_back(mean_pairwise_cosine(plain));
  }

  std::vector<GFormerLayerParams> layers;
  for (int l = 0; l < max_depth; ++l)
    layers.push_back(init_layer(dim, hidden_dim, l, rng));
  Tape tape;
  const Var adj = tape.constant(adjacency);
  Var current = tape.constant(features);
  for (int l = 0; l < max_depth; ++l) {
    const GFormerLayerParams &frozen = layers[l];
    current = gformer_layer(current, adj, bind(tape, frozen));
    trial.gformer.push_back(mean_pairwise_cosine(current.value()));
  }
  return trial;
}

std::string_view to_string(ProbeGraphs graphs) {
  return graphs == ProbeGraphs::kMolecules ? "molecules" : "block";
}

ProbeGraphs parse_probe_graphs(std::string_view text) {
  if (text == "molecules")
    return ProbeGraphs::kMolecules;
  if (text == "block")
    return ProbeGraphs::kBlockDiagonal;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown probe graph family '" + std::string(text) + "'");
}

namespace {

struct ProbeInput {
  MatrixX adjacency;
  MatrixX features;
};

ProbeInput molecule_pair_input(int dim, Rng &rng) {
  auto draw = [&rng] {
    const bool oxygen = rng.below(2) == 1;
    const bool halogen = rng.below(2) == 1;
    return featurize(parse_smiles(synthetic::random_molecule(rng, oxygen, halogen)));
  };
  const FeaturedGraph gi = draw();
  const FeaturedGraph gj = draw();
  const int ni = gi.size();
  const int nj = gj.size();
  ProbeInput in;
  in.adjacency = MatrixX::Zero(ni + nj, ni + nj);
  in.adjacency.topLeftCorner(ni, ni) = gi.adjacency;
  in.adjacency.bottomRightCorner(nj, nj) = gj.adjacency;
  MatrixX atoms(ni + nj, kAtomFeatureDim);
  atoms << gi.features, gj.features;
  // same Xavier range as the model's input projection
  const double limit = std::sqrt(6.0 / (kAtomFeatureDim + dim));
  MatrixX w(kAtomFeatureDim, dim);
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w.data()[i] = rng.uniform(-limit, limit);
  in.features = atoms * w;
  return in;
}

ProbeInput block_input(const DepthProbeOptions &options, Rng &rng) {
  const auto span = static_cast<std::uint64_t>(options.max_atoms
                                               - options.min_atoms + 1);
  const int ni = options.min_atoms + static_cast<int>(rng.below(span));
  const int nj = options.min_atoms + static_cast<int>(rng.below(span));
  ProbeInput in;
  in.adjacency = MatrixX::Zero(ni + nj, ni + nj);
  in.adjacency.topLeftCorner(ni, ni) = random_molecular_graph(ni, rng);
  in.adjacency.bottomRightCorner(nj, nj) = random_molecular_graph(nj, rng);
  in.features.resize(ni + nj, options.dim);
  for (Eigen::Index i = 0; i < in.features.size(); ++i)
    in.features.data()[i] = rng.normal();
  return in;
}

}  // namespace

DepthProbeReport depth_probe(const DepthProbeOptions &options) {
  if (options.max_depth < 2 || options.trials < 1)
    throw Error(ErrorCode::kInvalidConfig,
                "depth probe needs max depth >= 2 and at least one trial");
  if (options.dim < 1 || options.hidden_dim < 1)
    throw Error(ErrorCode::kInvalidConfig, "depth probe dims must be positive");
  if (options.graphs == ProbeGraphs::kBlockDiagonal
      && (options.min_atoms < 1 || options.max_atoms < options.min_atoms))
    throw Error(ErrorCode::kInvalidConfig, "bad atom range for depth probe");

  DepthProbeReport report;
  report.plain.assign(options.max_depth, 0.0);
  report.gformer.assign(options.max_depth, 0.0);
  for (int t = 0; t < options.trials; ++t) {
    Rng rng = Rng::derive(options.seed, static_cast<std::uint64_t>(t));
    const ProbeInput in = options.graphs == ProbeGraphs::kMolecules
                              ? molecule_pair_input(options.dim, rng)
                              : block_input(options, rng);
    DepthProbeTrial trial = probe_graph(in.adjacency, in.features,
                                        options.max_depth, options.hidden_dim,
                                        rng);
    for (int d = 0; d < options.max_depth; ++d) {
      report.plain[d] += trial.plain[d] / options.trials;
      report.gformer[d] += trial.gformer[d] / options.trials;
    }
    report.trials.push_back(std::move(trial));
  }
  return report;
}

std::vector<WeightedEdge> top_edges(const MatrixX &adjacency, int k,
                                    int boundary) {
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n || boundary < 0 || boundary > n)
    throw Error(ErrorCode::kShapeMismatch, "top_edges: bad adjacency/boundary");
  if (k < 1)
    throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  const long available = static_cast<long>(boundary) * (n - boundary);
  if (k > available)
    throw Error(ErrorCode::kKExceedsEdges,
                "requested " + std::to_string(k) + " edges, only "
                    + std::to_string(available) + " cross-molecular pairs");

  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(available));
  for (int p = 0; p < boundary; ++p) {
    for (int q = boundary; q < n; ++q)
      edges.push_back({ p, q, adjacency(p, q) });
  }
  std::partial_sort(edges.begin(), edges.begin() + k, edges.end(),
                    [](const WeightedEdge &a, const WeightedEdge &b) {
                      if (a.weight != b.weight)
                        return a.weight > b.weight;
                      if (a.p != b.p)
                        return a.p < b.p;
                      return a.q < b.q;
                    });
  edges.resize(k);
  return edges;
}

}  // namespace ddigraph
