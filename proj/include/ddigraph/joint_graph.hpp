//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_JOINT_GRAPH_HPP_
#define DDIGRAPH_JOINT_GRAPH_HPP_

#include <vector>

#include "ddigraph/smiles.hpp"
#include "ddigraph/types.hpp"

namespace ddigraph {

inline constexpr int kMaxJointAtoms = 2 * kMaxAtomsPerDrug;

/// Two drugs placed side by side: stacked features and a block-diagonal
/// adjacency. Rows [0, boundary) belong to the first drug.
struct JointGraph {
  MatrixX features;
  MatrixX adjacency;
  int boundary = 0;

  int size() const { return static_cast<int>(features.rows()); }
};

JointGraph build_joint(const FeaturedGraph &first, const FeaturedGraph &second);

struct ProjectionVars {
  Var weight;  // d x dim
  Var bias;    // 1 x dim
};

/// H = F' W + b.
Var project(const Var &features, const ProjectionVars &proj);

struct AttentionVars {
  Var query;  // dim x dim, head h uses columns [h*dk, (h+1)*dk)
  Var key;    // dim x dim
  int heads = 1;
};

/// Reconstructed adjacency: the head-average of
/// softmax_rows(Q_h K_h^T / sqrt(dim / heads)). Row-stochastic.
Var cross_attention(const Var &h, const AttentionVars &attn);

struct IntegratedAdjacency {
  Var adjacency;  // (1 - alpha) A' + alpha A_r
  Var alpha;      // 1x1, logistic(mix_logit)
};

IntegratedAdjacency integrate(const Var &joint_adjacency,
                              const Var &reconstructed, const Var &mix_logit);

}  // namespace ddigraph

#endif  // DDIGRAPH_JOINT_GRAPH_HPP_
