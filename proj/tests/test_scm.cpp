//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include "ddigraph/error.hpp"
#include "ddigraph/model.hpp"
#include "ddigraph/scm.hpp"
#include "support.hpp"

using namespace ddigraph;
using testing::random_matrix;

namespace {

GFormerLayerParams random_layer(int dim, int hidden, Rng &rng, double scale = 0.5) {
  GFormerLayerParams p = init_layer(dim, hidden, 0, rng);
  for (Param *q: { &p.norm1_gain, &p.norm1_bias, &p.w1, &p.b1, &p.w2, &p.b2,
                   &p.norm2_gain, &p.norm2_bias })
    q->value = random_matrix(q->value.rows(), q->value.cols(), rng, scale);
  return p;
}

GFormerLayerParams biased_layer(int dim, int hidden, Rng &rng) {
  GFormerLayerParams p = init_layer(dim, hidden, 0, rng);
  p.norm1_gain.value.setZero();
  p.norm2_gain.value.setZero();
  p.norm1_bias.value = random_matrix(1, dim, rng);
  p.norm2_bias.value = random_matrix(1, dim, rng);
  return p;
}

}  // namespace

TEST_CASE("propagation with self loops", "[scm]") {
  Rng rng(1);
  Tape t;
  const MatrixX f = random_matrix(4, 3, rng);
  const Var fv = t.constant(f);

  CHECK(gcn_propagate(fv, t.constant(MatrixX::Zero(4, 4))).value() == f);
  CHECK(gcn_propagate(fv, t.constant(MatrixX::Identity(4, 4))).value() == 2 * f);

  // path 0-1-2 with one-hot features
  MatrixX a(3, 3);
  a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  MatrixX want(3, 3);
  want << 1, 1, 0, 1, 1, 1, 0, 1, 1;
  CHECK(gcn_propagate(t.constant(MatrixX::Identity(3, 3)), t.constant(a)).value() == want);

  CHECK_THROWS_AS(gcn_propagate(fv, t.constant(MatrixX::Zero(3, 3))), Error);
}

TEST_CASE("GFormer layer", "[scm]") {
  Rng rng(2);
  const int n = 5, dim = 6, hidden = 12;
  const MatrixX f = random_matrix(n, dim, rng);
  const MatrixX a = random_matrix(n, n, rng).cwiseAbs();

  SECTION("zero gains reduce to the output bias") {
    GFormerLayerParams p = biased_layer(dim, hidden, rng);
    p.w1.value.setZero();
    p.w2.value.setZero();
    Tape t;
    const MatrixX out =
        gformer_layer(t.constant(f), t.constant(a), bind(t, p)).value();
    for (int i = 0; i < n; ++i)
      CHECK(out.row(i) == p.norm2_bias.value.row(0));
  }

  SECTION("shape is preserved") {
    const GFormerLayerParams p = random_layer(dim, hidden, rng);
    Tape t;
    const MatrixX out = gformer_layer(t.constant(f), t.constant(a), bind(t, p)).value();
    CHECK(out.rows() == n);
    CHECK(out.cols() == dim);
    CHECK(out.allFinite());
  }

  SECTION("gradients match finite differences") {
    GFormerLayerParams p = random_layer(dim, hidden, rng);
    Param fp("features", f);
    Param ap("adjacency", a);
    const MatrixX w = random_matrix(dim, 1, rng);
    auto loss = [&](Tape &t) {
      return ad::sum(ad::matmul(gformer_layer(t.param(fp), t.param(ap), bind(t, p)),
                                t.constant(w)));
    };
    CHECK(ad::grad_check<Scalar>(loss, { &fp, &ap, &p.norm1_gain, &p.norm1_bias, &p.w1,
                                         &p.b1, &p.w2, &p.b2, &p.norm2_gain,
                                         &p.norm2_bias })
          < 1e-4);
  }
}

TEST_CASE("layer stack trace", "[scm]") {
  Rng rng(3);
  const int n = 4, dim = 4, hidden = 8;
  const MatrixX h = random_matrix(n, dim, rng);
  const MatrixX a = random_matrix(n, n, rng).cwiseAbs();

  SECTION("trace starts at the projection") {
    std::vector<GFormerLayerParams> params;
    for (int l = 0; l < 3; ++l)
      params.push_back(random_layer(dim, hidden, rng));
    Tape t;
    std::vector<GFormerLayerVars> vars;
    for (GFormerLayerParams &p: params)
      vars.push_back(bind(t, p));
    const auto trace = scm_forward(t.constant(h), t.constant(a), vars);
    REQUIRE(trace.size() == 4);
    CHECK(trace[0].value() == h);
    for (const Var &v: trace)
      CHECK(v.cols() == dim);
  }

  SECTION("all-zero parameters on zero input stay zero") {
    GFormerLayerParams p = init_layer(dim, hidden, 0, rng);
    for (Param *q: { &p.norm1_gain, &p.norm1_bias, &p.w1, &p.b1, &p.w2, &p.b2,
                     &p.norm2_gain, &p.norm2_bias })
      q->value.setZero();
    Tape t;
    const std::vector<GFormerLayerVars> vars = { bind(t, p), bind(t, p) };
    const auto trace = scm_forward(t.constant(MatrixX::Zero(n, dim)), t.constant(a), vars);
    for (const Var &v: trace)
      CHECK(v.value().isZero(0));
  }

  SECTION("zero gains: every layer emits its output bias") {
    const GFormerLayerParams p1 = biased_layer(dim, hidden, rng);
    const GFormerLayerParams p2 = biased_layer(dim, hidden, rng);
    Tape t;
    const std::vector<GFormerLayerVars> vars = { bind(t, p1), bind(t, p2) };
    const auto trace = scm_forward(t.constant(MatrixX::Zero(n, dim)), t.constant(a), vars);
    for (int i = 0; i < n; ++i) {
      CHECK(trace[1].value().row(i) == p1.norm2_bias.value.row(0));
      CHECK(trace[2].value().row(i) == p2.norm2_bias.value.row(0));
    }
    const MatrixX pooled = aggregate(trace).value();
    const MatrixX want = n * (p1.norm2_bias.value + p2.norm2_bias.value);
    CHECK((pooled - want).cwiseAbs().maxCoeff() < 1e-14);
  }

  SECTION("no layers") {
    Tape t;
    CHECK_THROWS_AS(scm_forward(t.constant(h), t.constant(a), {}), Error);
  }
}

TEST_CASE("isolated atoms only see themselves", "[scm]") {
  Rng rng(4);
  const int n = 4, dim = 6;
  const GFormerLayerParams p = random_layer(dim, 12, rng);
  MatrixX h = random_matrix(n, dim, rng);
  Tape t;
  const std::vector<GFormerLayerVars> vars = { bind(t, p), bind(t, p) };
  const Var zero = t.constant(MatrixX::Zero(n, n));
  const MatrixX before = scm_forward(t.constant(h), zero, vars).back().value();
  h.row(3) = random_matrix(1, dim, rng);
  const MatrixX after = scm_forward(t.constant(h), zero, vars).back().value();
  CHECK(after.topRows(3) == before.topRows(3));
  CHECK(after.row(3) != before.row(3));
}

TEST_CASE("readout", "[scm]") {
  Tape t;
  std::vector<Var> ones;
  for (int l = 0; l < 3; ++l)
    ones.push_back(t.constant(MatrixX::Ones(4, 2)));
  const MatrixX pooled = aggregate(ones).value();
  CHECK(pooled.rows() == 1);
  CHECK((pooled.array() == 12.0).all());

  CHECK_THROWS_AS(aggregate({}), Error);
}

TEST_CASE("readout ignores atom order", "[scm][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const int n = 2 + static_cast<int>(rng.below(10));
    const MatrixX x = random_matrix(n, 5, rng);
    const std::vector<int> perm = testing::random_permutation(n, rng);
    MatrixX y(n, 5);
    for (int i = 0; i < n; ++i)
      y.row(i) = x.row(perm[i]);
    Tape t;
    const std::vector<Var> a = { t.constant(x), t.constant(2 * x) };
    const std::vector<Var> b = { t.constant(y), t.constant(2 * y) };
    const MatrixX pa = aggregate(a).value();
    const MatrixX pb = aggregate(b).value();
    CHECK((pa - pb).cwiseAbs().maxCoeff() < 1e-12);
  }
}
