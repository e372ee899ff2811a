//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers and independent oracles for the unit and acceptance suites.
// Oracles here deliberately avoid the library's Var/Tape code paths: they
// are written as plain loops over Eigen storage.
//

#ifndef DDIGRAPH_TESTS_SUPPORT_HPP_
#define DDIGRAPH_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ddigraph/model.hpp"
#include "ddigraph/rng.hpp"
#include "ddigraph/smiles.hpp"

namespace ddigraph::testing {

inline MatrixX random_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng,
                             double scale = 1.0) {
  MatrixX m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = scale * rng.uniform(-1.0, 1.0);
  return m;
}

// Overwrites every parameter (gains and biases included) with random values
// so no gradient path is trivially zero.
inline void randomize(ModelParams &params, Rng &rng, double scale = 0.5) {
  for (Param *p: params.all())
    p->value = random_matrix(p->value.rows(), p->value.cols(), rng, scale);
}

// Molecules with at most five heavy atoms.
inline const std::vector<std::string> &tiny_molecules() {
  static const std::vector<std::string> kList = {
    "C",     "O",      "N",     "CC",     "CO",    "C=O",   "C#N",
    "CCO",   "CCN",    "CCl",   "OCO",    "C1CC1", "CC=C",  "NC=O",
    "CC(C)C", "CC(=O)O", "OCCO", "C1CCC1", "c1ccoc1", "[NH4+]", "C[O-]",
    "CS",    "FC(F)F", "BrCC",  "CC#N",   "NCCN",  "OC(O)O", "P(=O)(O)O",
  };
  return kList;
}

// Molecules with at most twelve heavy atoms, used for exhaustive checks.
inline const std::vector<std::string> &small_corpus() {
  static const std::vector<std::string> kList = [] {
    std::vector<std::string> v = tiny_molecules();
    for (const char *s: {
             "c1ccccc1", "Cc1ccccc1", "Oc1ccccc1", "c1ccncc1", "c1cc[nH]c1",
             "C1CCCCC1", "CC(=O)Nc1ccccc1", "OC(=O)c1ccccc1", "CCOC(=O)C",
             "C1CC2CCC1C2", "c1ccc2ccccc2c1", "CC(C)(C)O", "CN1CCCC1",
             "O=C1CCCCC1", "ClC(Cl)(Cl)Cl", "CCCCCCCCCCCC", "C1CC1C1CC1",
             "OCC(O)CO", "NC(=O)N", "CS(=O)(=O)C", "c1ccsc1", "C=CC=C" })
      v.push_back(s);
    return v;
  }();
  return kList;
}

// ---------------------------------------------------------------------------
// All-pairs shortest paths by Floyd-Warshall; mean over connected pairs.
inline double floyd_warshall_mean(const Molecule &mol) {
  const int n = mol.size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i)
    d[i][i] = 0;
  for (const Bond &b: mol.bonds)
    d[b.a][b.b] = d[b.b][b.a] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  double total = 0;
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d[i][j] < inf) {
        total += d[i][j];
        ++pairs;
      }
  return pairs == 0 ? 0.0 : total / pairs;
}

// Quantile cut k is the smallest sorted value v such that at least
// k * n / q values are <= v.
inline std::vector<double> sort_and_cut(std::vector<double> values, int q) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<double> cuts;
  for (int k = 1; k < q; ++k) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (static_cast<double>(i + 1) * q >= k * n) {
        cuts.push_back(values[i]);
        break;
      }
    }
  }
  return cuts;
}

// ---------------------------------------------------------------------------
// Straight-line forward pass: joint graph, projection, attention, mixing,
// GFormer stack, readout, classifier, softmax.

struct OracleTrace {
  MatrixX joint_adjacency;
  MatrixX reconstructed;
  MatrixX adjacency;
  double alpha = 0;
  RowVectorX pooled;
  RowVectorX probabilities;
};

namespace detail {

inline MatrixX times(const MatrixX &a, const MatrixX &b) {
  MatrixX out = MatrixX::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline MatrixX plus_row(MatrixX m, const MatrixX &row) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) += row(0, j);
  return m;
}

inline MatrixX layer_norm(const MatrixX &x, const MatrixX &gain,
                          const MatrixX &bias, double eps) {
  MatrixX out(x.rows(), x.cols());
  const double d = static_cast<double>(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double mean = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      mean += x(i, j);
    mean /= d;
    double var = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      var += (x(i, j) - mean) * (x(i, j) - mean);
    var /= d;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out(i, j) = (x(i, j) - mean) / std::sqrt(var + eps) * gain(0, j)
                  + bias(0, j);
  }
  return out;
}

inline MatrixX relu(MatrixX m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = m.data()[i] > 0 ? m.data()[i] : 0.0;
  return m;
}

}  // namespace detail

inline OracleTrace oracle_forward(const FeaturedGraph &gi,
                                  const FeaturedGraph &gj,
                                  const ModelParams &p, double eps = 1e-5) {
  using namespace detail;
  const int ni = gi.size();
  const int nj = gj.size();
  const int n = ni + nj;
  const int dim = p.shape.dim;
  const int heads = p.shape.heads;

  MatrixX f(n, gi.features.cols());
  MatrixX a0 = MatrixX::Zero(n, n);
  for (int r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < f.cols(); ++c)
      f(r, c) = r < ni ? gi.features(r, c) : gj.features(r - ni, c);
  for (int r = 0; r < ni; ++r)
    for (int c = 0; c < ni; ++c)
      a0(r, c) = gi.adjacency(r, c);
  for (int r = 0; r < nj; ++r)
    for (int c = 0; c < nj; ++c)
      a0(ni + r, ni + c) = gj.adjacency(r, c);

  const MatrixX h = plus_row(times(f, p.proj_weight.value), p.proj_bias.value);
  const MatrixX q = times(h, p.query.value);
  const MatrixX k = times(h, p.key.value);
  const int dk = dim / heads;
  MatrixX ar = MatrixX::Zero(n, n);
  for (int hd = 0; hd < heads; ++hd) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> s(n);
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        double dot = 0;
        for (int c = hd * dk; c < (hd + 1) * dk; ++c)
          dot += q(i, c) * k(j, c);
        s[j] = dot / std::sqrt(static_cast<double>(dk));
        mx = std::max(mx, s[j]);
      }
      double z = 0;
      for (int j = 0; j < n; ++j)
        z += std::exp(s[j] - mx);
      for (int j = 0; j < n; ++j)
        ar(i, j) += std::exp(s[j] - mx) / z / heads;
    }
  }
  const double alpha = 1.0 / (1.0 + std::exp(-p.mix_logit.value(0, 0)));
  MatrixX a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = (1 - alpha) * a0(i, j) + alpha * ar(i, j);

  MatrixX a_loop = a;
  for (int i = 0; i < n; ++i)
    a_loop(i, i) += 1.0;

  RowVectorX pooled = RowVectorX::Zero(dim);
  MatrixX cur = h;
  auto add_colsum = [&pooled, dim](const MatrixX &m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (int c = 0; c < dim; ++c)
        pooled(c) += m(i, c);
  };
  add_colsum(cur);
  for (const GFormerLayerParams &l: p.layers) {
    const MatrixX x =
        layer_norm(times(a_loop, cur), l.norm1_gain.value, l.norm1_bias.value,
                   eps)
        + cur;
    const MatrixX ffn = plus_row(
        times(relu(plus_row(times(x, l.w1.value), l.b1.value)), l.w2.value),
        l.b2.value);
    cur = layer_norm(ffn + x, l.norm2_gain.value, l.norm2_bias.value, eps);
    add_colsum(cur);
  }

  const MatrixX hidden = relu(plus_row(times(MatrixX(pooled), p.head_hidden_weight.value),
                                       p.head_hidden_bias.value));
  const MatrixX logits =
      plus_row(times(hidden, p.head_out_weight.value), p.head_out_bias.value);
  double mx = logits.maxCoeff();
  double z = 0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c)
    z += std::exp(logits(0, c) - mx);
  RowVectorX probs(logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c)
    probs(c) = std::exp(logits(0, c) - mx) / z;

  return { a0, ar, a, alpha, pooled, probs };
}

// Permutation helpers: perm[new] = old.
inline std::vector<int> random_permutation(int n, Rng &rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i)
    p[i] = i;
  rng.shuffle(p);
  return p;
}

inline FeaturedGraph permute(const FeaturedGraph &g, const std::vector<int> &perm) {
  FeaturedGraph out;
  const int n = g.size();
  out.features.resize(n, g.features.cols());
  out.adjacency.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.features.row(i) = g.features.row(perm[i]);
    for (int j = 0; j < n; ++j)
      out.adjacency(i, j) = g.adjacency(perm[i], perm[j]);
  }
  return out;
}

}  // namespace ddigraph::testing

#endif  // DDIGRAPH_TESTS_SUPPORT_HPP_
