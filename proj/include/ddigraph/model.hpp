//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_MODEL_HPP_
#define DDIGRAPH_MODEL_HPP_

#include <cstdint>
#include <vector>

#include "ddigraph/joint_graph.hpp"
#include "ddigraph/rng.hpp"
#include "ddigraph/scm.hpp"
#include "ddigraph/smiles.hpp"
#include "ddigraph/types.hpp"

namespace ddigraph {

struct ModelShape {
  int feature_dim = kAtomFeatureDim;
  int dim = 32;
  int hidden_dim = 64;  // FFN width
  int layers = 3;
  int heads = 4;
  int classes = 2;

  void validate() const;
  bool operator==(const ModelShape &) const = default;
};

struct GFormerLayerParams {
  Param norm1_gain, norm1_bias;
  Param w1, b1, w2, b2;
  Param norm2_gain, norm2_bias;
};

struct ModelParams {
  ModelShape shape;
  Param proj_weight, proj_bias;
  Param query, key;
  Param mix_logit;  // alpha = logistic(mix_logit)
  std::vector<GFormerLayerParams> layers;
  Param head_hidden_weight, head_hidden_bias;
  Param head_out_weight, head_out_bias;

  // Stable order; identifiers are unique.
  std::vector<Param *> all();
  std::vector<const Param *> all() const;

  void zero_grad();
};

/// Xavier-uniform weights, zero biases, unit norm gains, alpha = 0.5.
ModelParams init_params(const ModelShape &shape, std::uint64_t seed);

/// Allocates every parameter with the right shape and name, all zero.
ModelParams zero_params(const ModelShape &shape);

/// Layer params with Xavier weights (shared with the depth probe).
GFormerLayerParams init_layer(int dim, int hidden_dim, int index, Rng &rng);

struct ModelVars {
  ProjectionVars projection;
  AttentionVars attention;
  Var mix_logit;
  std::vector<GFormerLayerVars> layers;
  Var head_hidden_weight, head_hidden_bias;
  Var head_out_weight, head_out_bias;
};

/// Trainable leaves: gradients flow into `params`.
ModelVars bind(Tape &tape, ModelParams &params);
/// Constant leaves.
ModelVars bind(Tape &tape, const ModelParams &params);

GFormerLayerVars bind(Tape &tape, GFormerLayerParams &p);
GFormerLayerVars bind(Tape &tape, const GFormerLayerParams &p);

struct ForwardPass {
  Var joint_adjacency;  // A'
  Var projected;        // H
  Var reconstructed;    // A_r
  Var adjacency;        // integrated A
  Var alpha;
  std::vector<Var> trace;
  Var pooled;  // h
  Var logits;  // 1 x C
};

ForwardPass forward(Tape &tape, const ModelVars &vars, const JointGraph &joint);

/// Two-layer classifier head: relu(h W_h + b_h) W_o + b_o.
Var classify(const Var &pooled, const ModelVars &vars);

/// Class probabilities for a drug pair.
RowVectorX predict(const FeaturedGraph &first, const FeaturedGraph &second,
                   const ModelParams &params);

struct PairExplanation {
  JointGraph joint;
  MatrixX reconstructed;
  MatrixX adjacency;
  Scalar alpha = 0;
  RowVectorX probabilities;
};

PairExplanation explain(const FeaturedGraph &first,
                        const FeaturedGraph &second, const ModelParams &params);

/// -log probs[label].
Scalar cross_entropy(const RowVectorX &probs, int label);

/// Fused softmax + cross entropy of the full model on one sample.
Var sample_loss(Tape &tape, const ModelVars &vars, const JointGraph &joint,
                int label);

}  // namespace ddigraph

#endif  // DDIGRAPH_MODEL_HPP_
