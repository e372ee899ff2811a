//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_AUTODIFF_HPP_
#define DDIGRAPH_AUTODIFF_HPP_

// Tape-based reverse-mode differentiation over dense Eigen matrices.
//
// A Tape records every forward operation as a node holding its value and a
// closure that pushes the node's adjoint to its parents. Var is a cheap
// handle (tape pointer + node index). Param owns a learnable value and its
// accumulated gradient; binding a Param to a tape creates a leaf whose
// adjoint is added to Param::grad on Tape::backward().

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ddigraph/error.hpp"

namespace ddigraph::ad {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Param {
  std::string name;
  Matrix<Scalar> value;
  Matrix<Scalar> grad;

  Param() = default;
  Param(std::string id, Matrix<Scalar> init)
      : name(std::move(id)), value(std::move(init)),
        grad(Matrix<Scalar>::Zero(value.rows(), value.cols())) { }

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

template <typename Scalar>
class Tape;

template <typename Scalar>
class Var {
public:
  Var() = default;
  Var(Tape<Scalar> *tape, std::size_t id): tape_(tape), id_(id) { }

  const Matrix<Scalar> &value() const { return tape_->value(id_); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Scalar scalar() const { return value()(0, 0); }

  Tape<Scalar> *tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

private:
  Tape<Scalar> *tape_ = nullptr;
  std::size_t id_ = 0;
};

template <typename Scalar>
class Tape {
public:
  using MatrixT = Matrix<Scalar>;
  // Called during backward with the node's adjoint; adds into parents via
  // Tape::accumulate.
  using Backward = std::function<void(Tape &, const MatrixT &)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var<Scalar> constant(MatrixT value) {
    return push(std::move(value), false, nullptr);
  }

  Var<Scalar> scalar(Scalar value) {
    return constant(MatrixT::Constant(1, 1, value));
  }

  /// Leaf whose adjoint accumulates into p.grad on backward(). The tape
  /// reads p.value in place; `p` must outlive the tape and stay unmodified
  /// while it is in use.
  Var<Scalar> param(Param<Scalar> &p) {
    Var<Scalar> v = push_ref(p.value, true);
    nodes_[v.id()].param = &p;
    return v;
  }

  /// Leaf bound read-only: participates in the forward pass only. Same
  /// lifetime rule as above.
  Var<Scalar> param(const Param<Scalar> &p) { return push_ref(p.value, false); }

  /// Records an operation. `backward` is dropped when no parent needs a
  /// gradient.
  Var<Scalar> record(MatrixT value, std::initializer_list<Var<Scalar>> parents,
                     Backward backward) {
    bool needs = false;
    for (const Var<Scalar> &p: parents) {
      check_owner(p);
      needs = needs || nodes_[p.id()].requires_grad;
    }
    return push(std::move(value), needs, needs ? std::move(backward) : nullptr);
  }

  bool requires_grad(const Var<Scalar> &v) const {
    return nodes_[v.id()].requires_grad;
  }

  void accumulate(const Var<Scalar> &v, const MatrixT &adjoint) {
    Node &node = nodes_[v.id()];
    if (!node.requires_grad)
      return;
    node.grad += adjoint;
  }

  const MatrixT &value(std::size_t id) const {
    const Node &node = nodes_[id];
    return node.external != nullptr ? *node.external : node.value;
  }
  std::size_t size() const { return nodes_.size(); }

  /// Propagates d(loss)/d(node) to every reachable node and adds the result
  /// into bound Param gradients. Calling it twice accumulates twice.
  void backward(const Var<Scalar> &loss) {
    check_owner(loss);
    const MatrixT &lv = value(loss.id());
    if (lv.rows() != 1 || lv.cols() != 1)
      throw Error(ErrorCode::kNonScalarLoss,
                  "loss has shape " + std::to_string(lv.rows()) + "x"
                      + std::to_string(lv.cols()));

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].requires_grad)
        nodes_[i].grad.setZero(value(i).rows(), value(i).cols());
    }
    if (!nodes_[loss.id()].requires_grad)
      return;
    nodes_[loss.id()].grad(0, 0) = Scalar(1);

    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      Node &node = nodes_[i];
      if (!node.requires_grad)
        continue;
      if (node.backward) {
        // the closure may touch other nodes; keep the adjoint stable
        const MatrixT adjoint = node.grad;
        node.backward(*this, adjoint);
      }
      if (node.param != nullptr)
        node.param->grad += node.grad;
    }
  }

private:
  struct Node {
    MatrixT value;
    MatrixT grad;
    Backward backward;
    Param<Scalar> *param = nullptr;
    bool requires_grad = false;
    const MatrixT *external = nullptr;
  };

  Var<Scalar> push_ref(const MatrixT &value, bool requires_grad) {
    if (!value.allFinite())
      throw Error(ErrorCode::kNonFinite,
                  "non-finite parameter bound at tape node "
                      + std::to_string(nodes_.size()));
    Node node;
    node.requires_grad = requires_grad;
    node.external = &value;
    nodes_.push_back(std::move(node));
    return Var<Scalar>(this, nodes_.size() - 1);
  }

  Var<Scalar> push(MatrixT value, bool requires_grad, Backward backward) {
    if (!value.allFinite())
      throw Error(ErrorCode::kNonFinite,
                  "non-finite value produced at tape node "
                      + std::to_string(nodes_.size()));
    Node node;
    node.value = std::move(value);
    node.backward = std::move(backward);
    node.requires_grad = requires_grad;
    nodes_.push_back(std::move(node));
    return Var<Scalar>(this, nodes_.size() - 1);
  }

  void check_owner(const Var<Scalar> &v) const {
    if (v.tape() != this || v.id() >= nodes_.size())
      throw Error(ErrorCode::kShapeMismatch, "variable belongs to another tape");
  }

  std::vector<Node> nodes_;
};

namespace detail {

inline std::string shape_str(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <typename Scalar>
void require_same_shape(const Var<Scalar> &a, const Var<Scalar> &b,
                        const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::kShapeMismatch,
                std::string(op) + ": " + shape_str(a.rows(), a.cols()) + " vs "
                    + shape_str(b.rows(), b.cols()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations

template <typename Scalar>
Var<Scalar> matmul(const Var<Scalar> &a, const Var<Scalar> &b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::kShapeMismatch,
                "matmul: " + detail::shape_str(a.rows(), a.cols()) + " x "
                    + detail::shape_str(b.rows(), b.cols()));
  Tape<Scalar> &t = *a.tape();
  return t.record(a.value() * b.value(), { a, b },
                  [a, b](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
                    if (tape.requires_grad(a))
                      tape.accumulate(a, g * b.value().transpose());
                    if (tape.requires_grad(b))
                      tape.accumulate(b, a.value().transpose() * g);
                  });
}

/// a * b^T without materializing the transpose on the tape.
template <typename Scalar>
Var<Scalar> matmul_transposed(const Var<Scalar> &a, const Var<Scalar> &b) {
  if (a.cols() != b.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "matmul_transposed: " + detail::shape_str(a.rows(), a.cols())
                    + " x " + detail::shape_str(b.rows(), b.cols()) + "^T");
  Tape<Scalar> &t = *a.tape();
  return t.record(a.value() * b.value().transpose(), { a, b },
                  [a, b](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
                    if (tape.requires_grad(a))
                      tape.accumulate(a, g * b.value());
                    if (tape.requires_grad(b))
                      tape.accumulate(b, g.transpose() * a.value());
                  });
}

template <typename Scalar>
Var<Scalar> add(const Var<Scalar> &a, const Var<Scalar> &b) {
  detail::require_same_shape(a, b, "add");
  return a.tape()->record(a.value() + b.value(), { a, b },
                          [a, b](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
                            tape.accumulate(a, g);
                            tape.accumulate(b, g);
                          });
}

template <typename Scalar>
Var<Scalar> sub(const Var<Scalar> &a, const Var<Scalar> &b) {
  detail::require_same_shape(a, b, "sub");
  return a.tape()->record(a.value() - b.value(), { a, b },
                          [a, b](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
                            tape.accumulate(a, g);
                            tape.accumulate(b, -g);
                          });
}

template <typename Scalar>
Var<Scalar> scale(const Var<Scalar> &a, Scalar s) {
  return a.tape()->record(a.value() * s, { a },
                          [a, s](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
                            tape.accumulate(a, g * s);
                          });
}

/// s * m for a 1x1 variable s.
template <typename Scalar>
Var<Scalar> scalar_mul(const Var<Scalar> &s, const Var<Scalar> &m) {
  if (s.rows() != 1 || s.cols() != 1)
    throw Error(ErrorCode::kShapeMismatch,
                "scalar_mul: scale must be 1x1, got "
                    + detail::shape_str(s.rows(), s.cols()));
  return s.tape()->record(
      s.scalar() * m.value(), { s, m },
      [s, m](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        if (tape.requires_grad(s))
          tape.accumulate(s, Matrix<Scalar>::Constant(
                                 1, 1, g.cwiseProduct(m.value()).sum()));
        if (tape.requires_grad(m))
          tape.accumulate(m, g * s.scalar());
      });
}

/// Columns [start, start + count) of x.
template <typename Scalar>
Var<Scalar> col_block(const Var<Scalar> &x, Eigen::Index start,
                      Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > x.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "col_block: columns [" + std::to_string(start) + ", "
                    + std::to_string(start + count) + ") of "
                    + detail::shape_str(x.rows(), x.cols()));
  return x.tape()->record(
      x.value().middleCols(start, count), { x },
      [x, start, count](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        Matrix<Scalar> d = Matrix<Scalar>::Zero(x.rows(), x.cols());
        d.middleCols(start, count) = g;
        tape.accumulate(x, d);
      });
}

/// Adds a 1 x cols row vector to every row of m.
template <typename Scalar>
Var<Scalar> add_row(const Var<Scalar> &m, const Var<Scalar> &row) {
  if (row.rows() != 1 || row.cols() != m.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "add_row: " + detail::shape_str(m.rows(), m.cols()) + " + "
                    + detail::shape_str(row.rows(), row.cols()));
  Matrix<Scalar> out = m.value().rowwise() + row.value().row(0);
  return m.tape()->record(std::move(out), { m, row },
                          [m, row](Tape<Scalar> &tape,
                                   const Matrix<Scalar> &g) {
                            tape.accumulate(m, g);
                            if (tape.requires_grad(row))
                              tape.accumulate(row, g.colwise().sum());
                          });
}

template <typename Scalar>
Var<Scalar> relu(const Var<Scalar> &x) {
  Matrix<Scalar> out = x.value().cwiseMax(Scalar(0));
  return x.tape()->record(
      std::move(out), { x }, [x](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        tape.accumulate(
            x, (x.value().array() > Scalar(0)).select(g, Scalar(0)).matrix());
      });
}

/// Elementwise logistic function.
template <typename Scalar>
Var<Scalar> sigmoid(const Var<Scalar> &x) {
  Matrix<Scalar> out =
      (Scalar(1) / (Scalar(1) + (-x.value().array()).exp())).matrix();
  return x.tape()->record(out, { x },
                          [x, out](Tape<Scalar> &tape,
                                   const Matrix<Scalar> &g) {
                            tape.accumulate(
                                x, (g.array() * out.array()
                                    * (Scalar(1) - out.array()))
                                       .matrix());
                          });
}

template <typename Scalar>
Matrix<Scalar> softmax_rows_value(const Matrix<Scalar> &x) {
  Matrix<Scalar> out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Scalar mx = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - mx).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

template <typename Scalar>
Var<Scalar> softmax_rows(const Var<Scalar> &x) {
  if (!x.value().allFinite())
    throw Error(ErrorCode::kNonFinite, "softmax_rows: non-finite input");
  Matrix<Scalar> out = softmax_rows_value(x.value());
  return x.tape()->record(
      out, { x }, [x, out](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        // dx = y * (g - rowsum(g * y))
        const auto dots = (g.cwiseProduct(out)).rowwise().sum();
        Matrix<Scalar> dx =
            (out.array() * (g.colwise() - dots).array()).matrix();
        tape.accumulate(x, dx);
      });
}

/// Per-row normalization to zero mean and unit variance (biased), followed by
/// gain and bias given as 1 x cols rows.
template <typename Scalar>
Var<Scalar> layer_norm(const Var<Scalar> &x, const Var<Scalar> &gain,
                       const Var<Scalar> &bias, Scalar eps = Scalar(1e-5)) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (gain.rows() != 1 || gain.cols() != d || bias.rows() != 1
      || bias.cols() != d)
    throw Error(ErrorCode::kShapeMismatch,
                "layer_norm: gain/bias must be 1x" + std::to_string(d));

  Matrix<Scalar> xhat(n, d);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_std(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar mean = x.value().row(i).mean();
    const auto centered = x.value().row(i).array() - mean;
    const Scalar var = centered.square().mean();
    inv_std(i) = Scalar(1) / std::sqrt(var + eps);
    xhat.row(i) = (centered * inv_std(i)).matrix();
  }
  Matrix<Scalar> out =
      (xhat.array().rowwise() * gain.value().row(0).array()).matrix();
  out.rowwise() += bias.value().row(0);

  return x.tape()->record(
      std::move(out), { x, gain, bias },
      [x, gain, bias, xhat, inv_std, d](Tape<Scalar> &tape,
                                         const Matrix<Scalar> &g) {
        if (tape.requires_grad(gain))
          tape.accumulate(gain, g.cwiseProduct(xhat).colwise().sum());
        if (tape.requires_grad(bias))
          tape.accumulate(bias, g.colwise().sum());
        if (tape.requires_grad(x)) {
          const Matrix<Scalar> gh =
              (g.array().rowwise() * gain.value().row(0).array()).matrix();
          Matrix<Scalar> dx(gh.rows(), gh.cols());
          for (Eigen::Index i = 0; i < gh.rows(); ++i) {
            const Scalar mean_g = gh.row(i).mean();
            const Scalar mean_gx = gh.row(i).dot(xhat.row(i)) / Scalar(d);
            dx.row(i) = (inv_std(i)
                         * (gh.row(i).array() - mean_g
                            - xhat.row(i).array() * mean_gx))
                            .matrix();
          }
          tape.accumulate(x, dx);
        }
      });
}

/// Column sums as a 1 x cols row.
template <typename Scalar>
Var<Scalar> sum_rows(const Var<Scalar> &x) {
  const Eigen::Index n = x.rows();
  return x.tape()->record(
      x.value().colwise().sum(), { x },
      [x, n](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        tape.accumulate(x, g.replicate(n, 1));
      });
}

template <typename Scalar>
Var<Scalar> sum(const Var<Scalar> &x) {
  const Eigen::Index r = x.rows();
  const Eigen::Index c = x.cols();
  return x.tape()->record(Matrix<Scalar>::Constant(1, 1, x.value().sum()),
                          { x },
                          [x, r, c](Tape<Scalar> &tape,
                                    const Matrix<Scalar> &g) {
                            tape.accumulate(
                                x, Matrix<Scalar>::Constant(r, c, g(0, 0)));
                          });
}

/// -log softmax(logits)[label] for a 1 x C logit row, evaluated with the
/// log-sum-exp shift.
template <typename Scalar>
Var<Scalar> softmax_cross_entropy(const Var<Scalar> &logits, int label) {
  if (logits.rows() != 1)
    throw Error(ErrorCode::kShapeMismatch,
                "softmax_cross_entropy: logits must be a single row");
  if (label < 0 || label >= logits.cols())
    throw Error(ErrorCode::kLabelOutOfRange,
                "label " + std::to_string(label) + " outside [0, "
                    + std::to_string(logits.cols()) + ")");
  const auto &z = logits.value();
  const Scalar mx = z.maxCoeff();
  const Scalar lse = mx + std::log((z.array() - mx).exp().sum());
  const Scalar loss = lse - z(0, label);
  Matrix<Scalar> probs = (z.array() - lse).exp().matrix();
  return logits.tape()->record(
      Matrix<Scalar>::Constant(1, 1, loss), { logits },
      [logits, probs, label](Tape<Scalar> &tape, const Matrix<Scalar> &g) {
        Matrix<Scalar> d = probs;
        d(0, label) -= Scalar(1);
        tape.accumulate(logits, d * g(0, 0));
      });
}

template <typename Scalar>
Var<Scalar> operator+(const Var<Scalar> &a, const Var<Scalar> &b) {
  return add(a, b);
}

template <typename Scalar>
Var<Scalar> operator-(const Var<Scalar> &a, const Var<Scalar> &b) {
  return sub(a, b);
}

template <typename Scalar>
Var<Scalar> operator*(const Var<Scalar> &a, const Var<Scalar> &b) {
  return matmul(a, b);
}

template <typename Scalar>
Var<Scalar> operator*(Scalar s, const Var<Scalar> &a) {
  return scale(a, s);
}

// ---------------------------------------------------------------------------
// Verification

/// Central-difference check of every bound parameter entry.
///
/// `loss` builds a scalar on the supplied tape using the given params.
/// Returns max_i |analytic_i - numeric_i| / max(1, |analytic_i|, |numeric_i|).
template <typename Scalar, typename LossFn>
Scalar grad_check(LossFn &&loss, const std::vector<Param<Scalar> *> &params,
                  Scalar eps = Scalar(1e-6)) {
  for (Param<Scalar> *p: params)
    p->zero_grad();
  {
    Tape<Scalar> tape;
    Var<Scalar> l = loss(tape);
    tape.backward(l);
  }

  auto evaluate = [&]() {
    Tape<Scalar> tape;
    return loss(tape).scalar();
  };

  Scalar worst = 0;
  for (Param<Scalar> *p: params) {
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      Scalar &entry = p->value.data()[k];
      const Scalar saved = entry;
      entry = saved + eps;
      const Scalar up = evaluate();
      entry = saved - eps;
      const Scalar down = evaluate();
      entry = saved;
      const Scalar numeric = (up - down) / (Scalar(2) * eps);
      const Scalar analytic = p->grad.data()[k];
      const Scalar denom = std::max(
          { Scalar(1), std::abs(analytic), std::abs(numeric) });
      worst = std::max(worst, std::abs(analytic - numeric) / denom);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Optimizer

template <typename Scalar>
struct AdamWOptions {
  Scalar lr = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  Scalar weight_decay = Scalar(0.01);
};

template <typename Scalar>
struct AdamWState {
  Matrix<Scalar> first_moment;
  Matrix<Scalar> second_moment;
};

/// One AdamW update at step t >= 1 with decoupled weight decay:
///   p <- p (1 - lr wd) - lr m_hat / (sqrt(v_hat) + eps)
template <typename Scalar>
void adamw_step(Param<Scalar> &p, AdamWState<Scalar> &state,
                const AdamWOptions<Scalar> &opt, long t) {
  if (t < 1)
    throw Error(ErrorCode::kInvalidConfig, "adamw step index must be >= 1");
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "adamw: gradient shape differs for " + p.name);
  if (state.first_moment.size() == 0) {
    state.first_moment = Matrix<Scalar>::Zero(p.value.rows(), p.value.cols());
    state.second_moment = Matrix<Scalar>::Zero(p.value.rows(), p.value.cols());
  }
  if (state.first_moment.rows() != p.value.rows()
      || state.first_moment.cols() != p.value.cols())
    throw Error(ErrorCode::kShapeMismatch,
                "adamw: optimizer state shape differs for " + p.name);

  state.first_moment =
      opt.beta1 * state.first_moment + (Scalar(1) - opt.beta1) * p.grad;
  state.second_moment =
      opt.beta2 * state.second_moment
      + (Scalar(1) - opt.beta2) * p.grad.cwiseProduct(p.grad);
  const Scalar bc1 = Scalar(1) - std::pow(opt.beta1, static_cast<Scalar>(t));
  const Scalar bc2 = Scalar(1) - std::pow(opt.beta2, static_cast<Scalar>(t));

  p.value *= Scalar(1) - opt.lr * opt.weight_decay;
  p.value.array() -=
      opt.lr * (state.first_moment.array() / bc1)
      / ((state.second_moment.array() / bc2).sqrt() + opt.eps);
}

template <typename Scalar>
class AdamW {
public:
  explicit AdamW(AdamWOptions<Scalar> opt = {}): opt_(opt) { }

  const AdamWOptions<Scalar> &options() const { return opt_; }
  long steps() const { return t_; }

  void step(const std::vector<Param<Scalar> *> &params) {
    if (state_.size() != params.size())
      state_.resize(params.size());
    ++t_;
    for (std::size_t i = 0; i < params.size(); ++i)
      adamw_step(*params[i], state_[i], opt_, t_);
  }

private:
  AdamWOptions<Scalar> opt_;
  std::vector<AdamWState<Scalar>> state_;
  long t_ = 0;
};

}  // namespace ddigraph::ad

#endif  // DDIGRAPH_AUTODIFF_HPP_
