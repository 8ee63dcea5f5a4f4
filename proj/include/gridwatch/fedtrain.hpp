#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/autodiff.hpp"
#include "gridwatch/encoder.hpp"
#include "gridwatch/eval.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/fedserver.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

// ---- configuration ---------------------------------------------------------------

struct LossConfig {
  double alpha = 0.7;        // weight of the per-timestep term
  double lambda_seq = 0.20;  // weight of the pooled window term
  int k_top = 3;             // pooling takes min(k_top, W) largest probabilities
  double lambda_wd = 5e-5;
  double clip_norm = 1.0;

  void validate() const {
    if (alpha < 0.0 || lambda_seq < 0.0) throw ConfigError("loss weights must be nonnegative");
    if (k_top < 1) throw ConfigError("k_top must be >= 1");
    if (lambda_wd < 0.0) throw ConfigError("weight decay must be nonnegative");
    if (clip_norm <= 0.0) throw ConfigError("gradient clip norm must be positive");
  }
};

struct FedConfig {
  int rounds = 10;
  int local_epochs = 1;
  double mu = 0.01;  // proximal strength; 0 recovers plain weighted averaging
  double lr = 1e-3;
  int batch_size = 64;
  double fraction_fit = 1.0;
  std::uint64_t seed = 7;

  void validate() const {
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
    if (local_epochs < 1) throw ConfigError("local epochs must be >= 1");
    if (mu < 0.0) throw ConfigError("proximal strength must be nonnegative");
    if (lr <= 0.0) throw ConfigError("learning rate must be positive");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (fraction_fit != 1.0)
      throw ConfigError("only full participation is supported (fraction_fit must be 1)");
  }
};

// ---- class weights ------------------------------------------------------------------

struct ClassWeights {
  double w0 = 1.0;
  double w1 = 1.0;
};

// Inverse-frequency weights w_c = T / (2 * T_c) from training labels. A class
// that never occurs keeps weight 1 and emits a warning; an empty label set is
// a configuration error.
inline ClassWeights class_weights(std::span<const int> labels,
                                  std::vector<std::string>* warnings = nullptr) {
  if (labels.empty()) throw ConfigError("class weights need at least one training label");
  std::int64_t t1 = 0;
  for (int y : labels) t1 += y ? 1 : 0;
  std::int64_t t0 = static_cast<std::int64_t>(labels.size()) - t1;
  double total = static_cast<double>(labels.size());
  ClassWeights cw;
  if (t0 > 0) cw.w0 = total / (2.0 * static_cast<double>(t0));
  else if (warnings) warnings->push_back("no normal timesteps in training labels; w0 kept at 1");
  if (t1 > 0) cw.w1 = total / (2.0 * static_cast<double>(t1));
  else if (warnings) warnings->push_back("no attack timesteps in training labels; w1 kept at 1");
  return cw;
}

// ---- reference losses -----------------------------------------------------------------

inline constexpr double kProbClamp = 1e-12;

// Class-weighted binary cross-entropy averaged over every entry:
//   -(1/n) * sum of [ w1*y*log(p) + w0*(1-y)*log(1-p) ].
inline double timestep_loss(const Tensor& p, const Tensor& y, double w0, double w1) {
  if (!p.same_shape(y)) throw ShapeError("timestep_loss: probability/label shape mismatch");
  if (p.size() == 0) throw ShapeError("timestep_loss: empty input");
  double s = 0.0;
  for (std::int64_t i = 0; i < p.size(); ++i) {
    double pi = std::min(1.0 - kProbClamp, std::max(kProbClamp, p[i]));
    s += y[i] != 0.0 ? w1 * std::log(pi) : w0 * std::log(1.0 - pi);
  }
  return -s / static_cast<double>(p.size());
}

// Mean of the k largest values; ties between equal values cannot change the
// mean, so a plain partial sort suffices here.
inline double topk_pool(std::span<const double> p, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > p.size())
    throw DomainError("topk_pool: k out of range");
  std::vector<double> v(p.begin(), p.end());
  std::partial_sort(v.begin(), v.begin() + k, v.end(), std::greater<double>());
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += v[static_cast<std::size_t>(i)];
  return s / static_cast<double>(k);
}

// Unweighted BCE between pooled window scores and window labels.
inline double sequence_loss(std::span<const double> p, std::span<const int> y) {
  if (p.size() != y.size() || p.empty()) throw ShapeError("sequence_loss: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = std::min(1.0 - kProbClamp, std::max(kProbClamp, p[i]));
    s += y[i] ? std::log(pi) : std::log(1.0 - pi);
  }
  return -s / static_cast<double>(p.size());
}

// ---- graph-side loss construction ---------------------------------------------------------

// Weighted BCE as graph nodes; `y` enters as a constant mask so the per-entry
// weight w1*y + w0*(1-y) needs no extra ops.
inline NodeId graph_weighted_bce(Graph& g, NodeId p, const Tensor& y, double w0, double w1) {
  const Tensor& pv = g.value(p);
  if (!pv.same_shape(y)) throw ShapeError("graph_weighted_bce: shape mismatch");
  Tensor wy(y.rows(), y.cols());
  Tensor wny(y.rows(), y.cols());
  for (std::int64_t i = 0; i < y.size(); ++i) {
    wy[i] = y[i] != 0.0 ? w1 : 0.0;
    wny[i] = y[i] != 0.0 ? 0.0 : w0;
  }
  NodeId pc = g.clamp(p, kProbClamp, 1.0 - kProbClamp);
  NodeId pos = g.mul(g.constant(std::move(wy)), g.log_(pc));
  NodeId neg = g.mul(g.constant(std::move(wny)), g.log_(g.affine(pc, -1.0, 1.0)));
  return g.affine(g.sum_all(g.add(pos, neg)), -1.0 / static_cast<double>(y.size()), 0.0);
}

struct LossNodes {
  NodeId timestep = -1;
  NodeId sequence = -1;
  NodeId total = -1;  // alpha*Lt + lambda_seq*Lseq plus any regularizers
};

// Assembles the training objective on top of a forward pass. `probs` is the
// (W*B, 1) timestep-major probability column; labels/window labels arrive as
// constants. Regularizers (proximal pull toward `anchor`, weight decay) are
// only recorded when their coefficients are nonzero, so a mu of 0 leaves the
// tape identical to the plain objective.
inline LossNodes build_objective(Graph& g, NodeId probs, const Tensor& y_flat,
                                 const Tensor& y_seq, int W, int B, const LossConfig& cfg,
                                 const ClassWeights& cw, const std::vector<NodeId>& param_ids,
                                 const ModelParams* anchor, double mu) {
  LossNodes ln;
  ln.timestep = graph_weighted_bce(g, probs, y_flat, cw.w0, cw.w1);
  NodeId grid = g.reshape(probs, W, B);
  NodeId pooled = g.topk_cols_mean(grid, std::min<std::int64_t>(cfg.k_top, W));
  ln.sequence = graph_weighted_bce(g, pooled, y_seq, 1.0, 1.0);
  ln.total = g.add(g.affine(ln.timestep, cfg.alpha, 0.0), g.affine(ln.sequence, cfg.lambda_seq, 0.0));
  if (mu > 0.0) {
    if (anchor == nullptr) throw PreconditionError("proximal term needs anchor parameters");
    NodeId prox = -1;
    for (std::size_t i = 0; i < param_ids.size(); ++i) {
      NodeId s = g.sq_l2_diff(param_ids[i], anchor->params[i].value);
      prox = prox < 0 ? s : g.add(prox, s);
    }
    ln.total = g.add(ln.total, g.affine(prox, 0.5 * mu, 0.0));
  }
  if (cfg.lambda_wd > 0.0) {
    NodeId wd = -1;
    for (NodeId id : param_ids) {
      NodeId s = g.sq_l2(id);
      wd = wd < 0 ? s : g.add(wd, s);
    }
    ln.total = g.add(ln.total, g.affine(wd, cfg.lambda_wd, 0.0));
  }
  return ln;
}

// ---- optimizer -----------------------------------------------------------------------------

inline double global_grad_norm(const std::vector<Tensor>& grads) {
  double s = 0.0;
  for (const Tensor& t : grads)
    for (std::int64_t i = 0; i < t.size(); ++i) s += t[i] * t[i];
  return std::sqrt(s);
}

// Rescales the whole gradient when its global norm exceeds the bound; returns
// the pre-clip norm.
inline double clip_gradients(std::vector<Tensor>& grads, double max_norm) {
  double n = global_grad_norm(grads);
  if (!std::isfinite(n)) throw NumericError("non-finite gradient norm");
  if (max_norm > 0.0 && n > max_norm) {
    double scale = max_norm / n;
    for (Tensor& t : grads)
      for (std::int64_t i = 0; i < t.size(); ++i) t[i] *= scale;
  }
  return n;
}

class Adam {
 public:
  explicit Adam(double lr) : lr_(lr) {}

  void step(ModelParams& theta, const std::vector<Tensor>& grads) {
    if (grads.size() != theta.params.size()) throw ShapeError("Adam: gradient count mismatch");
    if (m_.empty()) {
      for (const auto& p : theta.params) {
        m_.emplace_back(p.value.rows(), p.value.cols());
        v_.emplace_back(p.value.rows(), p.value.cols());
      }
    }
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < grads.size(); ++i) {
      Tensor& th = theta.params[i].value;
      const Tensor& gr = grads[i];
      if (!th.same_shape(gr)) throw ShapeError("Adam: gradient shape mismatch");
      auto m = detail::emap(m_[i]).array();
      auto v = detail::emap(v_[i]).array();
      auto ge = detail::emap(gr).array();
      m = beta1_ * m + (1.0 - beta1_) * ge;
      v = beta2_ * v + (1.0 - beta2_) * ge * ge;
      detail::emap(th).array() -= lr_ * (m / bc1) / ((v / bc2).sqrt() + eps_);
    }
  }

 private:
  double lr_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::int64_t t_ = 0;
  std::vector<Tensor> m_, v_;
};

// ---- inference over window sets ---------------------------------------------------------------

// Runs the encoder in eval mode over a window list, batching consecutive
// same-owner runs (windows of different owners may disagree on neighbor
// count, so batches never span owners).
inline std::vector<SequencePrediction> predict_windows(const std::vector<WindowSample>& windows,
                                                       const ModelParams& mp,
                                                       const EncoderConfig& cfg, int batch_size) {
  if (batch_size < 1) throw DomainError("batch size must be >= 1");
  std::vector<SequencePrediction> out(windows.size());
  std::size_t i = 0;
  while (i < windows.size()) {
    std::size_t j = i;
    while (j < windows.size() && windows[j].ego == windows[i].ego) ++j;
    for (std::size_t b0 = i; b0 < j; b0 += static_cast<std::size_t>(batch_size)) {
      std::size_t b1 = std::min(j, b0 + static_cast<std::size_t>(batch_size));
      std::vector<const WindowSample*> ptrs;
      ptrs.reserve(b1 - b0);
      for (std::size_t k = b0; k < b1; ++k) ptrs.push_back(&windows[k]);
      BatchInput bi = pack_batch(ptrs, cfg);
      Graph g;
      std::vector<NodeId> ids = register_params(g, mp, false);
      ForwardNodes fn = encode_batch(g, bi, mp, ids, cfg, false, nullptr);
      const Tensor& p = g.value(fn.probs);
      for (std::size_t k = b0; k < b1; ++k) {
        SequencePrediction& sp = out[k];
        sp.client = windows[k].ego;
        sp.probs.resize(static_cast<std::size_t>(bi.W));
        for (int t = 0; t < bi.W; ++t)
          sp.probs[static_cast<std::size_t>(t)] =
              p(static_cast<std::int64_t>(t) * bi.B + static_cast<std::int64_t>(k - b0), 0);
        sp.labels = windows[k].labels;
      }
    }
    i = j;
  }
  return out;
}

// ---- client trainer --------------------------------------------------------------------------

// Local optimization for one participant. The same class also drives the
// pooled (non-federated) baseline: hand it every client's windows and batches
// stay grouped by owner because owners can disagree on neighbor count.
class ClientTrainer : public FederatedClient {
 public:
  ClientTrainer(int id, EncoderConfig enc, LossConfig loss, FedConfig fed, DecisionRule rule,
                ClassWeights cw, std::vector<WindowSample> train, std::vector<WindowSample> val)
      : id_(id),
        enc_(enc),
        loss_(loss),
        fed_(fed),
        rule_(rule),
        cw_(cw),
        train_(std::move(train)),
        val_(std::move(val)) {
    enc_.validate();
    loss_.validate();
    fed_.validate();
    rule_.validate();
    if (train_.empty()) throw PreconditionError("trainer needs at least one training window");
    std::size_t i = 0;
    while (i < train_.size()) {
      std::size_t j = i;
      while (j < train_.size() && train_[j].ego == train_[i].ego) ++j;
      groups_.emplace_back(i, j);
      i = j;
    }
  }

  int id() const override { return id_; }
  std::int64_t train_size() const override { return static_cast<std::int64_t>(train_.size()); }

  ClientUpdate train_round(const ModelParams& global, int round) override {
    ModelParams local = global;
    Adam opt(fed_.lr);
    Rng drop(derive_seed(fed_.seed, "dropout", seed_index(), static_cast<std::uint64_t>(round)));
    ClientUpdate up;
    up.client_id = id_;
    up.n_samples = train_size();
    for (int epoch = 0; epoch < fed_.local_epochs; ++epoch) {
      Rng shuffle(derive_seed(fed_.seed, "shuffle", seed_index(),
                              static_cast<std::uint64_t>(round) * 1000 +
                                  static_cast<std::uint64_t>(epoch)));
      for (const std::vector<std::size_t>& batch : epoch_batches(shuffle)) {
        double loss_value = run_batch(local, global, batch, opt, &drop, &up.diag);
        up.diag.batch_losses.push_back(loss_value);
      }
    }
    if (up.diag.steps > 0) up.diag.grad_norm_mean /= static_cast<double>(up.diag.steps);
    up.params = std::move(local);
    return up;
  }

  ValCounts validate(const ModelParams& global) override {
    ValCounts vc;
    std::vector<SequencePrediction> preds =
        predict_windows(val_, global, enc_, fed_.batch_size);
    for (const SequencePrediction& sp : preds) {
      std::vector<int> yhat = decide_timesteps(sp.probs, rule_.tau);
      int m_eff = std::min<int>(rule_.m, static_cast<int>(yhat.size()));
      int hat = decide_sequence(yhat, m_eff, rule_.mode);
      int truth = 0;
      for (int v : sp.labels) truth |= v;
      vc.correct += hat == truth ? 1 : 0;
      ++vc.total;
    }
    return vc;
  }

  const std::vector<WindowSample>& train_windows() const { return train_; }
  const std::vector<WindowSample>& val_windows() const { return val_; }

 private:
  std::uint64_t seed_index() const {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(id_));
  }

  // Shuffles each owner group in place, then cuts fixed-size batches inside
  // the group; the trailing short batch is kept.
  std::vector<std::vector<std::size_t>> epoch_batches(Rng& rng) const {
    std::vector<std::vector<std::size_t>> batches;
    for (auto [begin, end] : groups_) {
      std::vector<std::size_t> order(end - begin);
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = begin + k;
      for (std::size_t k = order.size(); k > 1; --k)
        std::swap(order[k - 1], order[rng.uniform_int(k)]);
      for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(fed_.batch_size)) {
        std::size_t e = std::min(order.size(), b + static_cast<std::size_t>(fed_.batch_size));
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                             order.begin() + static_cast<std::ptrdiff_t>(e));
      }
    }
    return batches;
  }

  double run_batch(ModelParams& local, const ModelParams& global,
                   const std::vector<std::size_t>& batch, Adam& opt, Rng* drop,
                   TrainDiagnostics* diag) {
    std::vector<const WindowSample*> ptrs;
    ptrs.reserve(batch.size());
    for (std::size_t idx : batch) ptrs.push_back(&train_[idx]);
    BatchInput bi = pack_batch(ptrs, enc_);

    Tensor y_flat(static_cast<std::int64_t>(bi.W) * bi.B, 1);
    Tensor y_seq(1, bi.B);
    for (int b = 0; b < bi.B; ++b) {
      const std::vector<int>& lab = ptrs[static_cast<std::size_t>(b)]->labels;
      int any = 0;
      for (int t = 0; t < bi.W; ++t) {
        y_flat(static_cast<std::int64_t>(t) * bi.B + b, 0) =
            static_cast<double>(lab[static_cast<std::size_t>(t)]);
        any |= lab[static_cast<std::size_t>(t)];
      }
      y_seq(0, b) = static_cast<double>(any);
    }

    Graph g;
    std::vector<NodeId> ids = register_params(g, local, true);
    try {
      ForwardNodes fn = encode_batch(g, bi, local, ids, enc_, true, drop);
      LossNodes ln = build_objective(g, fn.probs, y_flat, y_seq, bi.W, bi.B, loss_, cw_, ids,
                                     &global, fed_.mu);
      g.backward(ln.total);

      std::vector<Tensor> grads;
      grads.reserve(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        Tensor gt = g.grad(ids[i]);
        if (gt.size() == 0)  // parameter unused in this graph (e.g. no neighbors)
          gt = Tensor(local.params[i].value.rows(), local.params[i].value.cols());
        grads.push_back(std::move(gt));
      }
      double norm = clip_gradients(grads, loss_.clip_norm);
      opt.step(local, grads);
      if (diag) {
        diag->grad_norm_mean += norm;
        diag->grad_norm_max = std::max(diag->grad_norm_max, norm);
        ++diag->steps;
      }
      return g.value(ln.total)(0, 0);
    } catch (const NumericError& e) {
      throw NumericError("client " + std::to_string(id_) + ", batch of " +
                         std::to_string(batch.size()) + " windows: " + e.what());
    }
  }

  int id_;
  EncoderConfig enc_;
  LossConfig loss_;
  FedConfig fed_;
  DecisionRule rule_;
  ClassWeights cw_;
  std::vector<WindowSample> train_;
  std::vector<WindowSample> val_;
  std::vector<std::pair<std::size_t, std::size_t>> groups_;
};

}  // namespace gridwatch
