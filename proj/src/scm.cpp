//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/scm.hpp"

#include "ddigraph/error.hpp"

namespace ddigraph {

Var gcn_propagate(const Var &features, const Var &adjacency) {
  if (adjacency.rows() != adjacency.cols()
      || adjacency.rows() != features.rows())
    throw Error(ErrorCode::kShapeMismatch,
                "gcn_propagate: adjacency "
                    + ad::detail::shape_str(adjacency.rows(), adjacency.cols())
                    + " for " + std::to_string(features.rows()) + " nodes");
  return ad::add(ad::matmul(adjacency, features), features);
}

Var gformer_layer(const Var &features, const Var &adjacency,
                  const GFormerLayerVars &p, Scalar eps) {
  const Var conv = gcn_propagate(features, adjacency);
  const Var x = ad::add(ad::layer_norm(conv, p.norm1_gain, p.norm1_bias, eps),
                        features);
  const Var hidden = ad::relu(ad::add_row(ad::matmul(x, p.w1), p.b1));
  const Var ffn = ad::add_row(ad::matmul(hidden, p.w2), p.b2);
  return ad::layer_norm(ad::add(ffn, x), p.norm2_gain, p.norm2_bias, eps);
}

std::vector<Var> scm_forward(const Var &h, const Var &adjacency,
                             std::span<const GFormerLayerVars> layers,
                             Scalar eps) {
  if (layers.empty())
    throw Error(ErrorCode::kInvalidConfig, "at least one GFormer layer");
  std::vector<Var> trace;
  trace.reserve(layers.size() + 1);
  trace.push_back(h);
  for (const GFormerLayerVars &layer: layers)
    trace.push_back(gformer_layer(trace.back(), adjacency, layer, eps));
  return trace;
}

Var aggregate(std::span<const Var> trace) {
  if (trace.empty())
    throw Error(ErrorCode::kInvalidConfig, "aggregate: empty trace");
  Var total = ad::sum_rows(trace.front());
  for (std::size_t l = 1; l < trace.size(); ++l)
    total = ad::add(total, ad::sum_rows(trace[l]));
  return total;
}

}  // namespace ddigraph
