//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_TYPES_HPP_
#define DDIGRAPH_TYPES_HPP_

#include "ddigraph/autodiff.hpp"

namespace ddigraph {

// The model runs in double precision throughout.
using Scalar = double;
using Tape = ad::Tape<Scalar>;
using Var = ad::Var<Scalar>;
using Param = ad::Param<Scalar>;
using MatrixX = Eigen::MatrixXd;
using RowVectorX = Eigen::RowVectorXd;

/// Binds a Param as a trainable leaf (mutable) or a constant (const).
inline Var leaf(Tape &tape, Param &p) {
  return tape.param(p);
}
inline Var leaf(Tape &tape, const Param &p) {
  return tape.param(p);
}

}  // namespace ddigraph

#endif  // DDIGRAPH_TYPES_HPP_
