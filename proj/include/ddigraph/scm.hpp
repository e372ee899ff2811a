//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_SCM_HPP_
#define DDIGRAPH_SCM_HPP_

// Structure consistency stack: GFormer layers over the integrated adjacency
// and multi-scale sum pooling.
//
// One layer maps F to
//   X   = LayerNorm((A + I) F) + F
//   out = LayerNorm(relu(X W1 + b1) W2 + b2 + X)
// Per-layer cost is O(N^2 dim + N dim d_hid) for N joint atoms.

#include <span>
#include <vector>

#include "ddigraph/types.hpp"

namespace ddigraph {

inline constexpr Scalar kLayerNormEps = 1e-5;

struct GFormerLayerVars {
  Var norm1_gain, norm1_bias;  // 1 x dim
  Var w1, b1;                  // dim x d_hid, 1 x d_hid
  Var w2, b2;                  // d_hid x dim, 1 x dim
  Var norm2_gain, norm2_bias;  // 1 x dim
};

/// (A + I) F, with no weight and no degree normalization.
Var gcn_propagate(const Var &features, const Var &adjacency);

Var gformer_layer(const Var &features, const Var &adjacency,
                  const GFormerLayerVars &p, Scalar eps = kLayerNormEps);

/// [F^0 = h, F^1, ..., F^L]; the first entry is `h` itself.
std::vector<Var> scm_forward(const Var &h, const Var &adjacency,
                             std::span<const GFormerLayerVars> layers,
                             Scalar eps = kLayerNormEps);

/// Sum over every layer in the trace and every atom: a 1 x dim row.
Var aggregate(std::span<const Var> trace);

}  // namespace ddigraph

#endif  // DDIGRAPH_SCM_HPP_
