#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/tensor.hpp"

namespace gridwatch {

using NodeId = std::int32_t;

// Reverse-mode computation graph. Forward values are computed eagerly as ops
// are recorded; backward() walks the tape in exact reverse order. A graph is
// built per optimization step and thrown away, so nodes own their tensors.
class Graph {
 public:
  struct Node {
    Tensor value;
    Tensor grad;                       // allocated lazily in backward()
    bool needs_grad = false;
    int accum_count = 0;               // number of gradient accumulations received
    std::function<void(Graph&)> back;  // empty for leaves
  };

  NodeId input(Tensor v, bool needs_grad) {
    Node n;
    n.value = std::move(v);
    n.needs_grad = needs_grad;
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  NodeId constant(Tensor v) { return input(std::move(v), false); }

  const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  const Tensor& grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  int accum_count(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].accum_count; }
  std::size_t node_count() const { return nodes_.size(); }

  // ---- elementwise and broadcast arithmetic -------------------------------

  // add supports exact shapes and a 1xN row vector broadcast against MxN.
  NodeId add(NodeId a, NodeId b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (va.same_shape(vb)) {
      Tensor out = va;
      detail::emap(out).array() += detail::emap(vb).array();
      return record(std::move(out), {a, b}, [a, b](Graph& g) {
        const Tensor& go = g.out_grad();
        g.accumulate(a, go);
        g.accumulate(b, go);
      });
    }
    if (vb.rows() == 1 && vb.cols() == va.cols()) {
      Tensor out = va;
      detail::emap(out).rowwise() += detail::emap(vb).row(0);
      return record(std::move(out), {a, b}, [a, b](Graph& g) {
        const Tensor& go = g.out_grad();
        g.accumulate(a, go);
        if (g.wants(b)) {
          detail::emap(g.grad_buf(b)).row(0) += detail::emap(go).colwise().sum();
          g.count_accum(b);
        }
      });
    }
    throw ShapeError("add: incompatible shapes " + va.shape_str() + " + " + vb.shape_str());
  }

  NodeId sub(NodeId a, NodeId b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (!va.same_shape(vb)) throw ShapeError("sub: shape mismatch");
    Tensor out = va;
    detail::emap(out).array() -= detail::emap(vb).array();
    return record(std::move(out), {a, b}, [a, b](Graph& g) {
      const Tensor& go = g.out_grad();
      g.accumulate(a, go);
      if (g.wants(b)) {
        detail::emap(g.grad_buf(b)).array() -= detail::emap(go).array();
        g.count_accum(b);
      }
    });
  }

  NodeId mul(NodeId a, NodeId b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    if (!va.same_shape(vb)) throw ShapeError("mul: shape mismatch");
    Tensor out = va;
    detail::emap(out).array() *= detail::emap(vb).array();
    return record(std::move(out), {a, b}, [a, b](Graph& g) {
      const Tensor& go = g.out_grad();
      if (g.wants(a)) {
        detail::emap(g.grad_buf(a)).array() +=
            detail::emap(go).array() * detail::emap(g.value(b)).array();
        g.count_accum(a);
      }
      if (g.wants(b)) {
        detail::emap(g.grad_buf(b)).array() +=
            detail::emap(go).array() * detail::emap(g.value(a)).array();
        g.count_accum(b);
      }
    });
  }

  // k*x + c, elementwise with scalar coefficients.
  NodeId affine(NodeId x, double k, double c) {
    Tensor out = value(x);
    detail::emap(out).array() = k * detail::emap(out).array() + c;
    return record(std::move(out), {x}, [x, k](Graph& g) {
      if (!g.wants(x)) return;
      detail::emap(g.grad_buf(x)).array() += k * detail::emap(g.out_grad()).array();
      g.count_accum(x);
    });
  }

  NodeId relu(NodeId x) {
    Tensor out = value(x);
    detail::emap(out).array() = detail::emap(out).array().max(0.0);
    return record(std::move(out), {x}, [x](Graph& g) {
      if (!g.wants(x)) return;
      detail::emap(g.grad_buf(x)).array() +=
          (detail::emap(g.value(x)).array() > 0.0).cast<double>() *
          detail::emap(g.out_grad()).array();
      g.count_accum(x);
    });
  }

  NodeId sigmoid(NodeId x) {
    Tensor out = value(x);
    {
      auto m = detail::emap(out);
      m.array() = 1.0 / (1.0 + (-m.array()).exp());
    }
    NodeId id = record(std::move(out), {x}, {});
    set_back(id, [x, id](Graph& g) {
      if (!g.wants(x)) return;
      auto y = detail::emap(g.value(id)).array();
      detail::emap(g.grad_buf(x)).array() += detail::emap(g.out_grad()).array() * y * (1.0 - y);
      g.count_accum(x);
    });
    return id;
  }

  // tanh through the logistic identity so the whole tensor goes through the
  // vectorized exp kernel; saturation at both ends falls out of the formula.
  NodeId tanh_(NodeId x) {
    Tensor out = value(x);
    {
      auto m = detail::emap(out);
      m.array() = 1.0 - 2.0 / ((2.0 * m.array()).exp() + 1.0);
    }
    NodeId id = record(std::move(out), {x}, {});
    set_back(id, [x, id](Graph& g) {
      if (!g.wants(x)) return;
      auto y = detail::emap(g.value(id)).array();
      detail::emap(g.grad_buf(x)).array() += detail::emap(g.out_grad()).array() * (1.0 - y * y);
      g.count_accum(x);
    });
    return id;
  }

  NodeId log_(NodeId x) {
    const Tensor& vx = value(x);
    if ((detail::emap(vx).array() <= 0.0).any()) throw DomainError("log of non-positive input");
    Tensor out = vx;
    {
      auto m = detail::emap(out);
      m.array() = m.array().log();
    }
    return record(std::move(out), {x}, [x](Graph& g) {
      if (!g.wants(x)) return;
      detail::emap(g.grad_buf(x)).array() +=
          detail::emap(g.out_grad()).array() / detail::emap(g.value(x)).array();
      g.count_accum(x);
    });
  }

  NodeId clamp(NodeId x, double lo, double hi) {
    const Tensor& vx = value(x);
    Tensor out = vx;
    detail::emap(out).array() = detail::emap(out).array().max(lo).min(hi);
    return record(std::move(out), {x}, [x, lo, hi](Graph& g) {
      if (!g.wants(x)) return;
      auto v = detail::emap(g.value(x)).array();
      detail::emap(g.grad_buf(x)).array() +=
          ((v > lo).cast<double>() * (v < hi).cast<double>()) *
          detail::emap(g.out_grad()).array();
      g.count_accum(x);
    });
  }

  // Row-wise softmax with max subtraction for stability.
  NodeId softmax_rows(NodeId x) {
    Tensor out = value(x);
    for (std::int64_t r = 0; r < out.rows(); ++r) {
      double mx = out(r, 0);
      for (std::int64_t c = 1; c < out.cols(); ++c) mx = std::max(mx, out(r, c));
      double z = 0.0;
      for (std::int64_t c = 0; c < out.cols(); ++c) {
        out(r, c) = std::exp(out(r, c) - mx);
        z += out(r, c);
      }
      for (std::int64_t c = 0; c < out.cols(); ++c) out(r, c) /= z;
    }
    NodeId id = record(std::move(out), {x}, {});
    set_back(id, [x, id](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      const Tensor& y = g.value(id);
      Tensor gx = go;
      for (std::int64_t r = 0; r < y.rows(); ++r) {
        double dot = 0.0;
        for (std::int64_t c = 0; c < y.cols(); ++c) dot += go(r, c) * y(r, c);
        for (std::int64_t c = 0; c < y.cols(); ++c) gx(r, c) = (go(r, c) - dot) * y(r, c);
      }
      g.accumulate(x, gx);
    });
    return id;
  }

  // ---- linear algebra ------------------------------------------------------

  NodeId matmul_(NodeId a, NodeId b) {
    Tensor out;
    matmul_into(value(a), value(b), out);
    return record(std::move(out), {a, b}, [a, b](Graph& g) {
      const Tensor& go = g.out_grad();
      if (g.wants(a)) {
        Tensor& ga = g.grad_buf(a);
        matmul_acc_nt(go, g.value(b), ga);
        g.count_accum(a);
      }
      if (g.wants(b)) {
        Tensor& gb = g.grad_buf(b);
        matmul_acc_tn(g.value(a), go, gb);
        g.count_accum(b);
      }
    });
  }

  // Per-row layer normalization followed by a learned affine map.
  NodeId layernorm(NodeId x, NodeId gain, NodeId bias, double eps) {
    const Tensor& vx = value(x);
    const Tensor& vg = value(gain);
    const Tensor& vb = value(bias);
    std::int64_t d = vx.cols();
    if (d < 1 || eps <= 0.0) throw DomainError("layernorm: d >= 1 and eps > 0 required");
    if (vg.rows() != 1 || vg.cols() != d || vb.rows() != 1 || vb.cols() != d)
      throw ShapeError("layernorm: gain/bias must be 1x" + std::to_string(d));
    Tensor out(vx.rows(), d);
    Tensor xhat(vx.rows(), d);
    std::vector<double> inv_sd(static_cast<std::size_t>(vx.rows()));
    for (std::int64_t r = 0; r < vx.rows(); ++r) {
      auto xr = detail::emap(vx).row(r).array();
      double mean = xr.mean();
      double var = (xr - mean).square().sum() / static_cast<double>(d);
      double isd = 1.0 / std::sqrt(var + eps);
      inv_sd[static_cast<std::size_t>(r)] = isd;
      auto hr = detail::emap(xhat).row(r).array();
      hr = (xr - mean) * isd;
      detail::emap(out).row(r).array() =
          detail::emap(vg).row(0).array() * hr + detail::emap(vb).row(0).array();
    }
    return record(std::move(out), {x, gain, bias},
                  [x, gain, bias, xhat = std::move(xhat), inv_sd = std::move(inv_sd)](Graph& g) {
                    const Tensor& go = g.out_grad();
                    const Tensor& vg2 = g.value(gain);
                    std::int64_t d = go.cols();
                    if (g.wants(gain)) {
                      detail::emap(g.grad_buf(gain)).row(0) +=
                          (detail::emap(go).array() * detail::emap(xhat).array())
                              .matrix()
                              .colwise()
                              .sum();
                      g.count_accum(gain);
                    }
                    if (g.wants(bias)) {
                      detail::emap(g.grad_buf(bias)).row(0) += detail::emap(go).colwise().sum();
                      g.count_accum(bias);
                    }
                    if (g.wants(x)) {
                      Tensor& gx = g.grad_buf(x);
                      double dn = static_cast<double>(d);
                      auto gr = detail::emap(vg2).row(0).array();
                      for (std::int64_t r = 0; r < go.rows(); ++r) {
                        // dxhat = go * gain; dx = isd*(dxhat - mean(dxhat) - xhat*mean(dxhat*xhat))
                        auto dh = detail::emap(go).row(r).array() * gr;
                        auto hr = detail::emap(xhat).row(r).array();
                        double s1 = dh.sum();
                        double s2 = (dh * hr).sum();
                        double isd = inv_sd[static_cast<std::size_t>(r)];
                        detail::emap(gx).row(r).array() += isd * (dh - s1 / dn - hr * s2 / dn);
                      }
                      g.count_accum(x);
                    }
                  });
  }

  // Inverted dropout: train-only, mask drawn from the caller's seeded stream,
  // surviving activations scaled by 1/(1-rate). Identity when rate == 0.
  NodeId dropout(NodeId x, double rate, Rng& rng, bool train) {
    if (!train || rate == 0.0) return x;
    if (rate < 0.0 || rate >= 1.0) throw DomainError("dropout rate must be in [0,1)");
    const Tensor& vx = value(x);
    Tensor mask(vx.rows(), vx.cols());
    double keep = 1.0 - rate;
    for (std::int64_t i = 0; i < mask.size(); ++i)
      mask[i] = rng.uniform() < rate ? 0.0 : 1.0 / keep;
    Tensor out = vx;
    detail::emap(out).array() *= detail::emap(mask).array();
    return record(std::move(out), {x}, [x, mask = std::move(mask)](Graph& g) {
      if (!g.wants(x)) return;
      detail::emap(g.grad_buf(x)).array() +=
          detail::emap(g.out_grad()).array() * detail::emap(mask).array();
      g.count_accum(x);
    });
  }

  // ---- structure ops -------------------------------------------------------

  NodeId reshape(NodeId x, std::int64_t r, std::int64_t c) {
    Tensor out = value(x).reshaped(r, c);
    return record(std::move(out), {x}, [x](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& vx = g.value(x);
      g.accumulate(x, g.out_grad().reshaped(vx.rows(), vx.cols()));
    });
  }

  NodeId concat_cols(const std::vector<NodeId>& xs) {
    if (xs.empty()) throw ShapeError("concat_cols: no inputs");
    std::int64_t rows = value(xs[0]).rows();
    std::int64_t cols = 0;
    for (NodeId x : xs) {
      if (value(x).rows() != rows) throw ShapeError("concat_cols: row mismatch");
      cols += value(x).cols();
    }
    Tensor out(rows, cols);
    std::int64_t off = 0;
    for (NodeId x : xs) {
      const Tensor& v = value(x);
      for (std::int64_t r = 0; r < rows; ++r)
        std::memcpy(&out(r, off), &v(r, 0), static_cast<std::size_t>(v.cols()) * sizeof(double));
      off += v.cols();
    }
    return record(std::move(out), xs, [xs](Graph& g) {
      const Tensor& go = g.out_grad();
      std::int64_t off = 0;
      for (NodeId x : xs) {
        const Tensor& v = g.value(x);
        if (g.wants(x)) {
          Tensor gx(v.rows(), v.cols());
          for (std::int64_t r = 0; r < v.rows(); ++r)
            std::memcpy(&gx(r, 0), &go(r, off), static_cast<std::size_t>(v.cols()) * sizeof(double));
          g.accumulate(x, gx);
        }
        off += v.cols();
      }
    });
  }

  NodeId slice_cols(NodeId x, std::int64_t start, std::int64_t n) {
    const Tensor& vx = value(x);
    if (start < 0 || n < 1 || start + n > vx.cols()) throw ShapeError("slice_cols: out of range");
    Tensor out(vx.rows(), n);
    for (std::int64_t r = 0; r < vx.rows(); ++r)
      std::memcpy(&out(r, 0), &vx(r, start), static_cast<std::size_t>(n) * sizeof(double));
    return record(std::move(out), {x}, [x, start, n](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      const Tensor& vx2 = g.value(x);
      Tensor gx(vx2.rows(), vx2.cols());
      for (std::int64_t r = 0; r < vx2.rows(); ++r)
        std::memcpy(&gx(r, start), &go(r, 0), static_cast<std::size_t>(n) * sizeof(double));
      g.accumulate(x, gx);
    });
  }

  NodeId slice_rows(NodeId x, std::int64_t start, std::int64_t n) {
    const Tensor& vx = value(x);
    if (start < 0 || n < 1 || start + n > vx.rows()) throw ShapeError("slice_rows: out of range");
    Tensor out(n, vx.cols());
    std::memcpy(out.data(), vx.data() + start * vx.cols(),
                static_cast<std::size_t>(n * vx.cols()) * sizeof(double));
    return record(std::move(out), {x}, [x, start, n](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      const Tensor& vx2 = g.value(x);
      Tensor gx(vx2.rows(), vx2.cols());
      std::memcpy(gx.data() + start * gx.cols(), go.data(),
                  static_cast<std::size_t>(n * gx.cols()) * sizeof(double));
      g.accumulate(x, gx);
    });
  }

  NodeId stack_rows(const std::vector<NodeId>& xs) {
    if (xs.empty()) throw ShapeError("stack_rows: no inputs");
    std::int64_t cols = value(xs[0]).cols();
    std::int64_t rows = 0;
    for (NodeId x : xs) {
      if (value(x).cols() != cols) throw ShapeError("stack_rows: column mismatch");
      rows += value(x).rows();
    }
    Tensor out(rows, cols);
    std::int64_t off = 0;
    for (NodeId x : xs) {
      const Tensor& v = value(x);
      std::memcpy(out.data() + off * cols, v.data(),
                  static_cast<std::size_t>(v.size()) * sizeof(double));
      off += v.rows();
    }
    return record(std::move(out), xs, [xs](Graph& g) {
      const Tensor& go = g.out_grad();
      std::int64_t off = 0;
      for (NodeId x : xs) {
        const Tensor& v = g.value(x);
        if (g.wants(x)) {
          Tensor gx(v.rows(), v.cols());
          std::memcpy(gx.data(), go.data() + off * go.cols(),
                      static_cast<std::size_t>(v.size()) * sizeof(double));
          g.accumulate(x, gx);
        }
        off += v.rows();
      }
    });
  }

  // x holds G consecutive blocks of `block_rows` rows; each block is
  // left-multiplied by the constant square matrix A (shared across blocks).
  // Used for the normalized star-graph convolution, where A never needs a
  // gradient.
  NodeId block_rowmix(NodeId x, Tensor A, std::int64_t block_rows) {
    const Tensor& vx = value(x);
    if (A.rows() != block_rows || A.cols() != block_rows)
      throw ShapeError("block_rowmix: A must be block_rows x block_rows");
    if (vx.rows() % block_rows != 0) throw ShapeError("block_rowmix: rows not divisible");
    std::int64_t nblocks = vx.rows() / block_rows;
    std::int64_t d = vx.cols();
    Tensor out(vx.rows(), d);
    {
      detail::CEMap am(A.data(), block_rows, block_rows);
      for (std::int64_t gblk = 0; gblk < nblocks; ++gblk) {
        detail::CEMap in(vx.data() + gblk * block_rows * d, block_rows, d);
        detail::EMap o(out.data() + gblk * block_rows * d, block_rows, d);
        o.noalias() = am * in;
      }
    }
    return record(std::move(out), {x}, [x, A = std::move(A), block_rows](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      std::int64_t nblocks = go.rows() / block_rows;
      std::int64_t d = go.cols();
      Tensor gx(go.rows(), d);
      detail::CEMap am(A.data(), block_rows, block_rows);
      for (std::int64_t gblk = 0; gblk < nblocks; ++gblk) {
        detail::CEMap gi(go.data() + gblk * block_rows * d, block_rows, d);
        detail::EMap o(gx.data() + gblk * block_rows * d, block_rows, d);
        o.noalias() = am.transpose() * gi;
      }
      g.accumulate(x, gx);
    });
  }

  // (G*block_rows, d) -> (G, d): mean over each block of rows.
  NodeId block_mean_rows(NodeId x, std::int64_t block_rows) {
    const Tensor& vx = value(x);
    if (block_rows < 1 || vx.rows() % block_rows != 0)
      throw ShapeError("block_mean_rows: rows not divisible");
    std::int64_t nblocks = vx.rows() / block_rows;
    std::int64_t d = vx.cols();
    Tensor out(nblocks, d);
    double inv = 1.0 / static_cast<double>(block_rows);
    for (std::int64_t gblk = 0; gblk < nblocks; ++gblk) {
      detail::CEMap blk(vx.data() + gblk * block_rows * d, block_rows, d);
      detail::emap(out).row(gblk) = blk.colwise().sum() * inv;
    }
    return record(std::move(out), {x}, [x, block_rows](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      std::int64_t d = go.cols();
      Tensor& gx = g.grad_buf(x);
      double inv = 1.0 / static_cast<double>(block_rows);
      for (std::int64_t gblk = 0; gblk < go.rows(); ++gblk) {
        detail::EMap blk(gx.data() + gblk * block_rows * d, block_rows, d);
        blk.rowwise() += detail::emap(go).row(gblk) * inv;
      }
      g.count_accum(x);
    });
  }

  // Assembles the per-graph node matrix for a batch of G star subgraphs:
  // row 0 of each block is [ego || 0], rows 1..K are [0 || neighbor_j].
  // h_raw is (G, H); h_nbr is (G*K, H) and may have K == 0 (nbr ignored).
  NodeId build_star(NodeId h_raw, NodeId h_nbr, std::int64_t K) {
    const Tensor& vr = value(h_raw);
    std::int64_t G = vr.rows();
    std::int64_t H = vr.cols();
    if (K > 0 && (value(h_nbr).rows() != G * K || value(h_nbr).cols() != H))
      throw ShapeError("build_star: neighbor block shape mismatch");
    std::int64_t N = 1 + K;
    Tensor out(G * N, 2 * H);
    for (std::int64_t gi = 0; gi < G; ++gi) {
      std::memcpy(&out(gi * N, 0), &vr(gi, 0), static_cast<std::size_t>(H) * sizeof(double));
      for (std::int64_t j = 0; j < K; ++j)
        std::memcpy(&out(gi * N + 1 + j, H), &value(h_nbr)(gi * K + j, 0),
                    static_cast<std::size_t>(H) * sizeof(double));
    }
    std::vector<NodeId> ins = {h_raw};
    if (K > 0) ins.push_back(h_nbr);
    return record(std::move(out), ins, [h_raw, h_nbr, K](Graph& g) {
      const Tensor& go = g.out_grad();
      const Tensor& vr2 = g.value(h_raw);
      std::int64_t G = vr2.rows();
      std::int64_t H = vr2.cols();
      std::int64_t N = 1 + K;
      if (g.wants(h_raw)) {
        Tensor gr(G, H);
        for (std::int64_t gi = 0; gi < G; ++gi)
          std::memcpy(&gr(gi, 0), &go(gi * N, 0), static_cast<std::size_t>(H) * sizeof(double));
        g.accumulate(h_raw, gr);
      }
      if (K > 0 && g.wants(h_nbr)) {
        Tensor gn(G * K, H);
        for (std::int64_t gi = 0; gi < G; ++gi)
          for (std::int64_t j = 0; j < K; ++j)
            std::memcpy(&gn(gi * K + j, 0), &go(gi * N + 1 + j, H),
                        static_cast<std::size_t>(H) * sizeof(double));
        g.accumulate(h_nbr, gn);
      }
    });
  }

  // Fused GRU gate kernel. gi and gh_lin are the input and recurrent linear
  // contributions (B, 3*d_h) in gate order (update z, reset r, candidate n);
  // b_hh is the recurrent bias row. Computes
  //   z = sigm(gi_z + gh_z), r = sigm(gi_r + gh_r),
  //   n = tanh(gi_n + r*gh_n), h' = z*h + (1-z)*n
  // in one node, stashing the gate activations for the backward pass. One
  // fused node per timestep keeps the tape short where the recurrence forces
  // serial steps.
  NodeId gru_gates(NodeId gi, NodeId gh_lin, NodeId b_hh, NodeId h, std::int64_t d_h) {
    const Tensor& vgi = value(gi);
    const Tensor& vgl = value(gh_lin);
    const Tensor& vbh = value(b_hh);
    const Tensor& vh = value(h);
    std::int64_t B = vh.rows();
    if (vgi.rows() != B || vgl.rows() != B || vgi.cols() != 3 * d_h || vgl.cols() != 3 * d_h ||
        vh.cols() != d_h || vbh.rows() != 1 || vbh.cols() != 3 * d_h)
      throw ShapeError("gru_gates: shape mismatch");
    Tensor gh = vgl;
    detail::emap(gh).rowwise() += detail::emap(vbh).row(0);
    Tensor zrn(B, 3 * d_h);  // stashed activations [z | r | n]
    Tensor out(B, d_h);
    {
      auto GI = detail::emap(vgi);
      auto GH = detail::emap(gh);
      auto ZRN = detail::emap(zrn);
      ZRN.block(0, 0, B, 2 * d_h).array() =
          1.0 /
          (1.0 + (-(GI.block(0, 0, B, 2 * d_h) + GH.block(0, 0, B, 2 * d_h)).array()).exp());
      auto r = ZRN.block(0, d_h, B, d_h).array();
      ZRN.block(0, 2 * d_h, B, d_h).array() =
          1.0 - 2.0 / ((2.0 * (GI.block(0, 2 * d_h, B, d_h).array() +
                               r * GH.block(0, 2 * d_h, B, d_h).array()))
                           .exp() +
                       1.0);
      auto z = ZRN.block(0, 0, B, d_h).array();
      detail::emap(out).array() = z * detail::emap(vh).array() +
                                  (1.0 - z) * ZRN.block(0, 2 * d_h, B, d_h).array();
    }
    return record(std::move(out), {gi, gh_lin, b_hh, h},
                  [gi, gh_lin, b_hh, h, d_h, gh = std::move(gh),
                   zrn = std::move(zrn)](Graph& g) {
                    const Tensor& go = g.out_grad();
                    std::int64_t B = go.rows();
                    auto ZRN = detail::emap(zrn);
                    auto z = ZRN.block(0, 0, B, d_h).array();
                    auto r = ZRN.block(0, d_h, B, d_h).array();
                    auto n = ZRN.block(0, 2 * d_h, B, d_h).array();
                    auto dh_out = detail::emap(go).array();
                    auto gh_n = detail::emap(gh).block(0, 2 * d_h, B, d_h).array();
                    // Pre-activation gradients, laid out like the gate blocks.
                    Tensor dpre(B, 3 * d_h);
                    auto DP = detail::emap(dpre);
                    DP.block(0, 2 * d_h, B, d_h).array() =
                        dh_out * (1.0 - z) * (1.0 - n * n);                     // d n_pre
                    DP.block(0, 0, B, d_h).array() =
                        dh_out * (detail::emap(g.value(h)).array() - n) * z * (1.0 - z);  // d z_pre
                    DP.block(0, d_h, B, d_h).array() =
                        DP.block(0, 2 * d_h, B, d_h).array() * gh_n * r * (1.0 - r);      // d r_pre
                    if (g.wants(gi)) {
                      detail::emap(g.grad_buf(gi)).array() += DP.array();
                      g.count_accum(gi);
                    }
                    if (g.wants(gh_lin) || g.wants(b_hh)) {
                      // d gh: candidate block picks up the reset gate.
                      Tensor dgh = dpre;
                      detail::emap(dgh).block(0, 2 * d_h, B, d_h).array() =
                          DP.block(0, 2 * d_h, B, d_h).array() * r;
                      if (g.wants(b_hh)) {
                        detail::emap(g.grad_buf(b_hh)).row(0) +=
                            detail::emap(dgh).colwise().sum();
                        g.count_accum(b_hh);
                      }
                      if (g.wants(gh_lin)) {
                        detail::emap(g.grad_buf(gh_lin)).array() += detail::emap(dgh).array();
                        g.count_accum(gh_lin);
                      }
                    }
                    if (g.wants(h)) {
                      detail::emap(g.grad_buf(h)).array() += dh_out * z;
                      g.count_accum(h);
                    }
                  });
  }

  // Fused star-graph convolution row mix. ego is (G, C): one convolved ego row
  // per graph; nbr is (G*K, C): convolved neighbor rows. For each graph the
  // stacked (1+K, C) block is left-multiplied by the constant mix matrix A.
  // Equivalent to assembling the block-diagonal node matrix and calling
  // block_rowmix, without materializing the zero-padded blocks.
  NodeId star_mix(NodeId ego, NodeId nbr, Tensor A, std::int64_t K) {
    const Tensor& ve = value(ego);
    std::int64_t G = ve.rows();
    std::int64_t C = ve.cols();
    std::int64_t N = 1 + K;
    if (A.rows() != N || A.cols() != N) throw ShapeError("star_mix: A must be (1+K)x(1+K)");
    if (K > 0 && (value(nbr).rows() != G * K || value(nbr).cols() != C))
      throw ShapeError("star_mix: neighbor block shape mismatch");
    Tensor out(G * N, C);
    {
      detail::CEMap am(A.data(), N, N);
      const double* nbr_data = K > 0 ? value(nbr).data() : nullptr;
      for (std::int64_t gi = 0; gi < G; ++gi) {
        detail::EMap ob(out.data() + gi * N * C, N, C);
        ob.noalias() = am.col(0) * detail::emap(ve).row(gi);
        if (K > 0) {
          detail::CEMap nb(nbr_data + gi * K * C, K, C);
          ob.noalias() += am.block(0, 1, N, K) * nb;
        }
      }
    }
    std::vector<NodeId> ins = {ego};
    if (K > 0) ins.push_back(nbr);
    return record(std::move(out), ins, [ego, nbr, A = std::move(A), K](Graph& g) {
      const Tensor& go = g.out_grad();
      std::int64_t G = g.value(ego).rows();
      std::int64_t C = g.value(ego).cols();
      std::int64_t N = 1 + K;
      detail::CEMap am(A.data(), N, N);
      if (g.wants(ego)) {
        Tensor& ge = g.grad_buf(ego);
        for (std::int64_t gi = 0; gi < G; ++gi) {
          detail::CEMap gb(go.data() + gi * N * C, N, C);
          detail::emap(ge).row(gi).noalias() += am.col(0).transpose() * gb;
        }
        g.count_accum(ego);
      }
      if (K > 0 && g.wants(nbr)) {
        Tensor& gn = g.grad_buf(nbr);
        for (std::int64_t gi = 0; gi < G; ++gi) {
          detail::CEMap gb(go.data() + gi * N * C, N, C);
          detail::EMap nb(gn.data() + gi * K * C, K, C);
          nb.noalias() += am.block(0, 1, N, K).transpose() * gb;
        }
        g.count_accum(nbr);
      }
    });
  }

  // ---- reductions ----------------------------------------------------------

  NodeId sum_all(NodeId x) {
    const Tensor& vx = value(x);
    double s = detail::emap(vx).sum();
    return record(Tensor::scalar(s), {x}, [x](Graph& g) {
      if (!g.wants(x)) return;
      double go = g.out_grad()[0];
      detail::emap(g.grad_buf(x)).array() += go;
      g.count_accum(x);
    });
  }

  // sum of squares, fused to avoid a full-size intermediate (used for weight
  // decay over every parameter each step).
  NodeId sq_l2(NodeId x) {
    const Tensor& vx = value(x);
    double s = detail::emap(vx).squaredNorm();
    return record(Tensor::scalar(s), {x}, [x](Graph& g) {
      if (!g.wants(x)) return;
      double go = g.out_grad()[0];
      detail::emap(g.grad_buf(x)).array() += 2.0 * go * detail::emap(g.value(x)).array();
      g.count_accum(x);
    });
  }

  // sum of squared differences against a constant reference (proximal term).
  NodeId sq_l2_diff(NodeId x, Tensor ref) {
    const Tensor& vx = value(x);
    if (!vx.same_shape(ref)) throw ShapeError("sq_l2_diff: shape mismatch");
    double s = (detail::emap(vx) - detail::emap(ref)).squaredNorm();
    return record(Tensor::scalar(s), {x}, [x, ref = std::move(ref)](Graph& g) {
      if (!g.wants(x)) return;
      double go = g.out_grad()[0];
      detail::emap(g.grad_buf(x)).array() +=
          2.0 * go * (detail::emap(g.value(x)).array() - detail::emap(ref).array());
      g.count_accum(x);
    });
  }

  // x is (W, B): one column per window, rows are timesteps. Output (1, B) is
  // the mean of the k largest entries per column; ties resolve to the earlier
  // timestep so the pooling is deterministic.
  NodeId topk_cols_mean(NodeId x, std::int64_t k) {
    const Tensor& vx = value(x);
    std::int64_t W = vx.rows();
    std::int64_t B = vx.cols();
    if (k < 1 || k > W) throw ShapeError("topk_cols_mean: k out of range");
    Tensor out(1, B);
    std::vector<std::int64_t> picks(static_cast<std::size_t>(B * k));
    std::vector<std::int64_t> idx(static_cast<std::size_t>(W));
    for (std::int64_t b = 0; b < B; ++b) {
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](std::int64_t i, std::int64_t j) {
        double a = vx(i, b), c = vx(j, b);
        return a > c || (a == c && i < j);
      });
      double s = 0.0;
      for (std::int64_t i = 0; i < k; ++i) {
        picks[static_cast<std::size_t>(b * k + i)] = idx[static_cast<std::size_t>(i)];
        s += vx(idx[static_cast<std::size_t>(i)], b);
      }
      out(0, b) = s / static_cast<double>(k);
    }
    return record(std::move(out), {x}, [x, k, picks = std::move(picks)](Graph& g) {
      if (!g.wants(x)) return;
      const Tensor& go = g.out_grad();
      const Tensor& vx2 = g.value(x);
      Tensor gx(vx2.rows(), vx2.cols());
      double inv = 1.0 / static_cast<double>(k);
      for (std::int64_t b = 0; b < go.cols(); ++b)
        for (std::int64_t i = 0; i < k; ++i)
          gx(picks[static_cast<std::size_t>(b * k + i)], b) += go(0, b) * inv;
      g.accumulate(x, gx);
    });
  }

  // ---- backward ------------------------------------------------------------

  void backward(NodeId loss) {
    const Tensor& lv = value(loss);
    if (lv.size() != 1) throw ShapeError("backward: loss must be scalar");
    if (!std::isfinite(lv[0])) throw NumericError("backward: non-finite loss");
    for (auto& n : nodes_) {
      n.grad = Tensor();
      n.accum_count = 0;
    }
    auto& ln = nodes_[static_cast<std::size_t>(loss)];
    ln.grad = Tensor::scalar(1.0);
    for (std::int64_t i = loss; i >= 0; --i) {
      Node& n = nodes_[static_cast<std::size_t>(i)];
      if (!n.back || n.grad.size() == 0) continue;
      cur_ = static_cast<NodeId>(i);
      n.back(*this);
    }
  }

  // ---- helpers used by backward closures -----------------------------------

  const Tensor& out_grad() const { return nodes_[static_cast<std::size_t>(cur_)].grad; }

  bool wants(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }

  Tensor& grad_buf(NodeId id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() == 0) n.grad = Tensor(n.value.rows(), n.value.cols());
    return n.grad;
  }

  void accumulate(NodeId id, const Tensor& g) {
    Tensor& buf = grad_buf(id);
    if (!buf.same_shape(g)) throw ShapeError("gradient accumulation shape mismatch");
    detail::emap(buf).array() += detail::emap(g).array();
    count_accum(id);
  }

  void count_accum(NodeId id) { ++nodes_[static_cast<std::size_t>(id)].accum_count; }

 private:
  NodeId record(Tensor out, const std::vector<NodeId>& ins, std::function<void(Graph&)> back) {
    Node n;
    n.value = std::move(out);
    for (NodeId i : ins)
      if (nodes_[static_cast<std::size_t>(i)].needs_grad) n.needs_grad = true;
    if (n.needs_grad) n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void set_back(NodeId id, std::function<void(Graph&)> back) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.needs_grad) n.back = std::move(back);
  }

  std::vector<Node> nodes_;
  NodeId cur_ = -1;
};

// Packed GRU cell parameters; gate order is (update z, reset r, candidate n)
// in consecutive column blocks of width d_h.
struct GruParams {
  NodeId w_ih;  // (d_in, 3*d_h)
  NodeId w_hh;  // (d_h, 3*d_h)
  NodeId b_ih;  // (1, 3*d_h)
  NodeId b_hh;  // (1, 3*d_h)
};

// GRU step given precomputed input contributions gi = x*W_ih + b_ih.
// Candidate uses the reset gate on the recurrent term: n = tanh(gi_n + r*gh_n).
inline NodeId gru_cell_pre(Graph& g, NodeId gi, NodeId h, NodeId w_hh, NodeId b_hh,
                           std::int64_t d_h) {
  return g.gru_gates(gi, g.matmul_(h, w_hh), b_hh, h, d_h);
}

inline NodeId gru_cell(Graph& g, NodeId x, NodeId h, const GruParams& p) {
  std::int64_t d_h = g.value(h).cols();
  if (g.value(p.w_ih).rows() != g.value(x).cols() || g.value(p.w_ih).cols() != 3 * d_h ||
      g.value(p.w_hh).rows() != d_h || g.value(p.w_hh).cols() != 3 * d_h)
    throw ShapeError("gru_cell: parameter shapes inconsistent with d_in/d_h");
  NodeId gi = g.add(g.matmul_(x, p.w_ih), p.b_ih);
  return gru_cell_pre(g, gi, h, p.w_hh, p.b_hh, d_h);
}

// ---- finite-difference gradient checking -----------------------------------

struct GradCheckReport {
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  bool pass = false;
};

// build must be a pure function of the point tensors: (Graph&, inputs) -> scalar node.
// Compares reverse-mode gradients against central finite differences.
template <class BuildFn>
GradCheckReport grad_check(BuildFn&& build, const std::vector<Tensor>& point, double step,
                           double tol) {
  std::vector<Tensor> analytic;
  {
    Graph g;
    std::vector<NodeId> ids;
    ids.reserve(point.size());
    for (const Tensor& t : point) ids.push_back(g.input(t, true));
    NodeId loss = build(g, ids);
    if (!std::isfinite(g.value(loss)[0])) throw NumericError("grad_check: non-finite objective");
    g.backward(loss);
    for (NodeId id : ids) {
      Tensor gr = g.grad(id);
      if (gr.size() == 0) {
        gr = Tensor(g.value(id).rows(), g.value(id).cols());
      }
      analytic.push_back(std::move(gr));
    }
  }
  auto eval = [&](const std::vector<Tensor>& pt) {
    Graph g;
    std::vector<NodeId> ids;
    for (const Tensor& t : pt) ids.push_back(g.input(t, false));
    double v = g.value(build(g, ids))[0];
    if (!std::isfinite(v)) throw NumericError("grad_check: non-finite objective");
    return v;
  };
  GradCheckReport rep;
  std::vector<Tensor> pt = point;
  for (std::size_t ti = 0; ti < pt.size(); ++ti) {
    for (std::int64_t i = 0; i < pt[ti].size(); ++i) {
      double orig = pt[ti][i];
      pt[ti][i] = orig + step;
      double fp = eval(pt);
      pt[ti][i] = orig - step;
      double fm = eval(pt);
      pt[ti][i] = orig;
      double numeric = (fp - fm) / (2.0 * step);
      double a = analytic[ti][i];
      double abs_err = std::fabs(a - numeric);
      double rel = abs_err / std::max(1e-6, std::fabs(a) + std::fabs(numeric));
      rep.max_abs_err = std::max(rep.max_abs_err, abs_err);
      rep.max_rel_err = std::max(rep.max_rel_err, rel);
    }
  }
  rep.pass = rep.max_rel_err < tol;
  return rep;
}

}  // namespace gridwatch
