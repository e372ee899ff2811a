//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/model.hpp"

#include <cmath>
#include <string>

#include "ddigraph/error.hpp"

namespace ddigraph {
namespace {

MatrixX xavier(int fan_in, int fan_out, Rng &rng) {
  const Scalar limit = std::sqrt(6.0 / static_cast<Scalar>(fan_in + fan_out));
  MatrixX m(fan_in, fan_out);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rng.uniform(-limit, limit);
  }
  return m;
}

std::string layer_name(int index, const char *suffix) {
  return "scm." + std::to_string(index) + "." + suffix;
}

template <typename Layer>
GFormerLayerVars bind_layer(Tape &tape, Layer &p) {
  return {
    leaf(tape, p.norm1_gain), leaf(tape, p.norm1_bias),
    leaf(tape, p.w1),         leaf(tape, p.b1),
    leaf(tape, p.w2),         leaf(tape, p.b2),
    leaf(tape, p.norm2_gain), leaf(tape, p.norm2_bias),
  };
}

template <typename Params>
ModelVars bind_model(Tape &tape, Params &p) {
  ModelVars v;
  v.projection = { leaf(tape, p.proj_weight), leaf(tape, p.proj_bias) };
  v.attention = { leaf(tape, p.query), leaf(tape, p.key), p.shape.heads };
  v.mix_logit = leaf(tape, p.mix_logit);
  v.layers.reserve(p.layers.size());
  for (auto &layer: p.layers)
    v.layers.push_back(bind_layer(tape, layer));
  v.head_hidden_weight = leaf(tape, p.head_hidden_weight);
  v.head_hidden_bias = leaf(tape, p.head_hidden_bias);
  v.head_out_weight = leaf(tape, p.head_out_weight);
  v.head_out_bias = leaf(tape, p.head_out_bias);
  return v;
}

template <typename Self, typename Out>
void collect(Self &self, std::vector<Out> &out) {
  out.push_back(&self.proj_weight);
  out.push_back(&self.proj_bias);
  out.push_back(&self.query);
  out.push_back(&self.key);
  out.push_back(&self.mix_logit);
  for (auto &layer: self.layers) {
    for (auto *p: { &layer.norm1_gain, &layer.norm1_bias, &layer.w1,
                    &layer.b1, &layer.w2, &layer.b2, &layer.norm2_gain,
                    &layer.norm2_bias })
      out.push_back(p);
  }
  out.push_back(&self.head_hidden_weight);
  out.push_back(&self.head_hidden_bias);
  out.push_back(&self.head_out_weight);
  out.push_back(&self.head_out_bias);
}

}  // namespace

void ModelShape::validate() const {
  auto require = [](bool ok, const std::string &what) {
    if (!ok)
      throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(feature_dim > 0, "feature_dim must be positive");
  require(dim > 0, "dim must be positive");
  require(hidden_dim > 0, "hidden_dim must be positive");
  require(layers >= 1, "at least one GFormer layer");
  require(classes >= 2, "at least two classes");
  if (heads < 1 || dim % heads != 0)
    throw Error(ErrorCode::kHeadsNotDividing,
                std::to_string(heads) + " heads for dim " + std::to_string(dim));
}

std::vector<Param *> ModelParams::all() {
  std::vector<Param *> out;
  collect(*this, out);
  return out;
}

std::vector<const Param *> ModelParams::all() const {
  std::vector<const Param *> out;
  collect(*this, out);
  return out;
}

void ModelParams::zero_grad() {
  for (Param *p: all())
    p->zero_grad();
}

GFormerLayerParams init_layer(int dim, int hidden_dim, int index, Rng &rng) {
  GFormerLayerParams l;
  l.norm1_gain = Param(layer_name(index, "norm1.gain"), MatrixX::Ones(1, dim));
  l.norm1_bias = Param(layer_name(index, "norm1.bias"), MatrixX::Zero(1, dim));
  l.w1 = Param(layer_name(index, "ffn.w1"), xavier(dim, hidden_dim, rng));
  l.b1 = Param(layer_name(index, "ffn.b1"), MatrixX::Zero(1, hidden_dim));
  l.w2 = Param(layer_name(index, "ffn.w2"), xavier(hidden_dim, dim, rng));
  l.b2 = Param(layer_name(index, "ffn.b2"), MatrixX::Zero(1, dim));
  l.norm2_gain = Param(layer_name(index, "norm2.gain"), MatrixX::Ones(1, dim));
  l.norm2_bias = Param(layer_name(index, "norm2.bias"), MatrixX::Zero(1, dim));
  return l;
}

ModelParams init_params(const ModelShape &shape, std::uint64_t seed) {
  shape.validate();
  Rng rng(seed);
  ModelParams p;
  p.shape = shape;
  p.proj_weight =
      Param("proj.weight", xavier(shape.feature_dim, shape.dim, rng));
  p.proj_bias = Param("proj.bias", MatrixX::Zero(1, shape.dim));
  p.query = Param("attn.query", xavier(shape.dim, shape.dim, rng));
  p.key = Param("attn.key", xavier(shape.dim, shape.dim, rng));
  p.mix_logit = Param("mix.logit", MatrixX::Zero(1, 1));
  for (int l = 0; l < shape.layers; ++l)
    p.layers.push_back(init_layer(shape.dim, shape.hidden_dim, l, rng));
  p.head_hidden_weight =
      Param("head.hidden.weight", xavier(shape.dim, shape.dim, rng));
  p.head_hidden_bias = Param("head.hidden.bias", MatrixX::Zero(1, shape.dim));
  p.head_out_weight =
      Param("head.out.weight", xavier(shape.dim, shape.classes, rng));
  p.head_out_bias = Param("head.out.bias", MatrixX::Zero(1, shape.classes));
  return p;
}

ModelParams zero_params(const ModelShape &shape) {
  ModelParams p = init_params(shape, 0);
  for (Param *param: p.all())
    param->value.setZero();
  return p;
}

ModelVars bind(Tape &tape, ModelParams &params) {
  return bind_model(tape, params);
}

ModelVars bind(Tape &tape, const ModelParams &params) {
  return bind_model(tape, params);
}

GFormerLayerVars bind(Tape &tape, GFormerLayerParams &p) {
  return bind_layer(tape, p);
}

GFormerLayerVars bind(Tape &tape, const GFormerLayerParams &p) {
  return bind_layer(tape, p);
}

Var classify(const Var &pooled, const ModelVars &vars) {
  const Var hidden = ad::relu(ad::add_row(
      ad::matmul(pooled, vars.head_hidden_weight), vars.head_hidden_bias));
  return ad::add_row(ad::matmul(hidden, vars.head_out_weight),
                     vars.head_out_bias);
}

ForwardPass forward(Tape &tape, const ModelVars &vars,
                    const JointGraph &joint) {
  ForwardPass f;
  const Var features = tape.constant(joint.features);
  f.joint_adjacency = tape.constant(joint.adjacency);
  f.projected = project(features, vars.projection);
  f.reconstructed = cross_attention(f.projected, vars.attention);
  const IntegratedAdjacency mixed =
      integrate(f.joint_adjacency, f.reconstructed, vars.mix_logit);
  f.adjacency = mixed.adjacency;
  f.alpha = mixed.alpha;
  f.trace = scm_forward(f.projected, f.adjacency, vars.layers);
  f.pooled = aggregate(f.trace);
  f.logits = classify(f.pooled, vars);
  return f;
}

RowVectorX predict(const FeaturedGraph &first, const FeaturedGraph &second,
                   const ModelParams &params) {
  return explain(first, second, params).probabilities;
}

PairExplanation explain(const FeaturedGraph &first,
                        const FeaturedGraph &second,
                        const ModelParams &params) {
  PairExplanation out;
  out.joint = build_joint(first, second);
  Tape tape;
  const ModelVars vars = bind(tape, params);
  const ForwardPass f = forward(tape, vars, out.joint);
  out.reconstructed = f.reconstructed.value();
  out.adjacency = f.adjacency.value();
  out.alpha = f.alpha.scalar();
  out.probabilities = ad::softmax_rows_value(f.logits.value()).row(0);
  return out;
}

Scalar cross_entropy(const RowVectorX &probs, int label) {
  if (label < 0 || label >= probs.size())
    throw Error(ErrorCode::kLabelOutOfRange,
                "label " + std::to_string(label) + " outside [0, "
                    + std::to_string(probs.size()) + ")");
  return -std::log(probs(label));
}

Var sample_loss(Tape &tape, const ModelVars &vars, const JointGraph &joint,
                int label) {
  return ad::softmax_cross_entropy(forward(tape, vars, joint).logits, label);
}

}  // namespace ddigraph
