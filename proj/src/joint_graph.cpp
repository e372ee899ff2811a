//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/joint_graph.hpp"

#include <cmath>
#include <string>

#include "ddigraph/error.hpp"

namespace ddigraph {

JointGraph build_joint(const FeaturedGraph &first,
                       const FeaturedGraph &second) {
  const int ni = first.size();
  const int nj = second.size();
  if (ni + nj > kMaxJointAtoms)
    throw Error(ErrorCode::kSizeCapExceeded,
                "joint graph has " + std::to_string(ni + nj) + " atoms (cap "
                    + std::to_string(kMaxJointAtoms) + ")");
  if (first.features.cols() != second.features.cols())
    throw Error(ErrorCode::kShapeMismatch, "feature widths differ");

  JointGraph g;
  g.boundary = ni;
  g.features.resize(ni + nj, first.features.cols());
  g.features << first.features, second.features;
  g.adjacency = MatrixX::Zero(ni + nj, ni + nj);
  g.adjacency.topLeftCorner(ni, ni) = first.adjacency;
  g.adjacency.bottomRightCorner(nj, nj) = second.adjacency;
  return g;
}

Var project(const Var &features, const ProjectionVars &proj) {
  return ad::add_row(ad::matmul(features, proj.weight), proj.bias);
}

Var cross_attention(const Var &h, const AttentionVars &attn) {
  const Eigen::Index dim = h.cols();
  if (attn.heads < 1 || dim % attn.heads != 0)
    throw Error(ErrorCode::kHeadsNotDividing,
                std::to_string(attn.heads) + " heads for dim "
                    + std::to_string(dim));
  if (attn.query.rows() != dim || attn.key.rows() != dim
      || attn.query.cols() != dim || attn.key.cols() != dim)
    throw Error(ErrorCode::kShapeMismatch,
                "attention projections must be " + std::to_string(dim) + "x"
                    + std::to_string(dim));

  const Eigen::Index head_dim = dim / attn.heads;
  const Scalar inv_sqrt = 1.0 / std::sqrt(static_cast<Scalar>(head_dim));
  const Var q = ad::matmul(h, attn.query);
  const Var k = ad::matmul(h, attn.key);

  Var total;
  for (int head = 0; head < attn.heads; ++head) {
    const Var qh = ad::col_block(q, head * head_dim, head_dim);
    const Var kh = ad::col_block(k, head * head_dim, head_dim);
    const Var weights =
        ad::softmax_rows(ad::scale(ad::matmul_transposed(qh, kh), inv_sqrt));
    total = total.valid() ? ad::add(total, weights) : weights;
  }
  return attn.heads == 1 ? total
                         : ad::scale(total, 1.0 / static_cast<Scalar>(attn.heads));
}

IntegratedAdjacency integrate(const Var &joint_adjacency,
                              const Var &reconstructed, const Var &mix_logit) {
  ad::detail::require_same_shape(joint_adjacency, reconstructed, "integrate");
  const Var alpha = ad::sigmoid(mix_logit);
  const Var keep = ad::sub(alpha.tape()->scalar(1.0), alpha);
  const Var mixed = ad::add(ad::scalar_mul(keep, joint_adjacency),
                            ad::scalar_mul(alpha, reconstructed));
  return { mixed, alpha };
}

}  // namespace ddigraph
