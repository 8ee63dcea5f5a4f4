#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridwatch/autodiff.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/params.hpp"

namespace gridwatch {

// Architecture switches for the reduced variants: GruOnly skips the graph
// convolution and fuses the neighbor average directly; GcnOnly drops the
// recurrence and classifies each fused timestep; NoGraph removes all
// graph-derived blocks from the fusion.
enum class ArchMode : std::uint8_t { Full, GruOnly, GcnOnly, NoGraph };

inline const char* to_string(ArchMode a) {
  switch (a) {
    case ArchMode::Full: return "full";
    case ArchMode::GruOnly: return "gru_only";
    case ArchMode::GcnOnly: return "gcn_only";
    case ArchMode::NoGraph: return "no_graph";
  }
  return "?";
}

struct EncoderConfig {
  int f_raw = kRawFeatureCount + kDerivedFeatureCount;  // 36; 11 without derived stats
  int f_nbr = kNeighborFeatureCount;
  int meta_dim = kMetadataDim;
  int hidden = 128;      // H: width of each fused block
  int gru_hidden = 192;  // per direction
  int gru_layers = 2;
  double dropout_gcn = 0.2;
  double dropout_gru = 0.2;
  ArchMode arch = ArchMode::Full;
  bool use_neighbor = true;
  bool use_metadata = true;

  bool has_gcn() const { return arch == ArchMode::Full || arch == ArchMode::GcnOnly; }
  bool has_gru() const { return arch != ArchMode::GcnOnly; }
  bool has_nbr_block() const { return use_neighbor && arch != ArchMode::NoGraph; }

  // Width of the fused per-timestep vector entering LayerNorm.
  int fused_dim() const {
    int blocks = 1;  // ego projection always participates
    if (has_gcn()) ++blocks;
    if (has_nbr_block()) ++blocks;
    if (use_metadata) ++blocks;
    return blocks * hidden;
  }

  int head_in() const { return has_gru() ? 2 * gru_hidden : fused_dim(); }

  void validate() const {
    if (f_raw < 1 || f_nbr < 1 || meta_dim < 0) throw DomainError("encoder input widths invalid");
    if (hidden < 1 || gru_hidden < 1 || gru_layers < 1)
      throw DomainError("encoder widths must be positive");
    if (dropout_gcn < 0.0 || dropout_gcn >= 1.0 || dropout_gru < 0.0 || dropout_gru >= 1.0)
      throw DomainError("dropout rates must lie in [0,1)");
    if (use_metadata && meta_dim < 1) throw DomainError("metadata enabled but meta_dim == 0");
  }
};

// Symmetric-normalized star adjacency with self-loops: D^{-1/2}(A+I)D^{-1/2}
// for the hub-and-spokes graph where node 0 links to all others.
inline Tensor star_norm_adjacency(int K) {
  if (K < 0) throw DomainError("negative neighbor count");
  int N = K + 1;
  Tensor A(N, N);
  if (K == 0) {
    A(0, 0) = 1.0;
    return A;
  }
  A(0, 0) = 1.0 / static_cast<double>(K + 1);
  double off = 1.0 / std::sqrt(2.0 * static_cast<double>(K + 1));
  for (int j = 1; j <= K; ++j) {
    A(0, j) = off;
    A(j, 0) = off;
    A(j, j) = 0.5;
  }
  return A;
}

// One graph-convolution layer over an explicit (small, dense) graph:
// out = Ahat * Z * Wg. The nonlinearity is the caller's.
inline Tensor gcn_layer(const Tensor& Z, const Tensor& Ahat, const Tensor& Wg) {
  if (Ahat.rows() != Z.rows() || Ahat.cols() != Z.rows())
    throw ShapeError("gcn_layer: adjacency must be NxN for N node rows");
  return matmul(Ahat, matmul(Z, Wg));
}

// Assembles the N_i x 2H node matrix of one star: ego features in the left
// half of row 0, each neighbor's features in the right half of its row.
inline Tensor build_node_matrix(const Tensor& h_raw, const Tensor& h_nbr) {
  if (h_raw.rows() != 1) throw ShapeError("build_node_matrix: ego must be a single row");
  std::int64_t H = h_raw.cols();
  std::int64_t K = h_nbr.rows();
  if (K > 0 && h_nbr.cols() != H) throw ShapeError("build_node_matrix: width mismatch");
  Tensor Z(1 + K, 2 * H);
  for (std::int64_t c = 0; c < H; ++c) Z(0, c) = h_raw(0, c);
  for (std::int64_t j = 0; j < K; ++j)
    for (std::int64_t c = 0; c < H; ++c) Z(1 + j, H + c) = h_nbr(j, c);
  return Z;
}

// ---- parameters ----------------------------------------------------------------

// Uniform fan-in initialization, one stream in declaration order so the
// layout is reproducible from (config, seed) alone.
inline ModelParams init_encoder_params(const EncoderConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ModelParams mp;
  Rng rng(derive_seed(seed, "init"));
  auto weight = [&](const std::string& name, std::int64_t fan_in, std::int64_t fan_out) {
    Tensor& w = mp.add(name, fan_in, fan_out);
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    fill_uniform(w, rng, -bound, bound);
  };
  auto bias = [&](const std::string& name, std::int64_t n) { mp.add(name, 1, n); };

  weight("proj_raw.w", cfg.f_raw, cfg.hidden);
  bias("proj_raw.b", cfg.hidden);
  if (cfg.use_neighbor && cfg.arch != ArchMode::NoGraph) {
    weight("proj_nbr.w", cfg.f_nbr, cfg.hidden);
    bias("proj_nbr.b", cfg.hidden);
  }
  if (cfg.use_metadata) {
    weight("proj_meta.w", cfg.meta_dim, cfg.hidden);
    bias("proj_meta.b", cfg.hidden);
  }
  if (cfg.has_gcn()) {
    weight("gcn1.w", 2 * cfg.hidden, 2 * cfg.hidden);
    weight("gcn2.w", 2 * cfg.hidden, cfg.hidden);
  }
  {
    Tensor& gain = mp.add("ln.gain", 1, cfg.fused_dim());
    gain.fill(1.0);
    bias("ln.bias", cfg.fused_dim());
  }
  if (cfg.has_gru()) {
    for (int l = 0; l < cfg.gru_layers; ++l) {
      std::int64_t in = l == 0 ? cfg.fused_dim() : 2 * cfg.gru_hidden;
      for (const char* dir : {"fwd", "bwd"}) {
        std::string p = "gru" + std::to_string(l) + "." + dir + ".";
        weight(p + "w_ih", in, 3 * cfg.gru_hidden);
        weight(p + "w_hh", cfg.gru_hidden, 3 * cfg.gru_hidden);
        bias(p + "b_ih", 3 * cfg.gru_hidden);
        bias(p + "b_hh", 3 * cfg.gru_hidden);
      }
    }
  }
  weight("head.w", cfg.head_in(), 2);
  bias("head.b", 2);
  return mp;
}

// Registers every parameter as a graph input, aligned with ModelParams order.
inline std::vector<NodeId> register_params(Graph& g, const ModelParams& mp, bool needs_grad) {
  std::vector<NodeId> ids;
  ids.reserve(mp.params.size());
  for (const auto& p : mp.params) ids.push_back(g.input(p.value, needs_grad));
  return ids;
}

namespace detail {

inline NodeId param_node(const ModelParams& mp, const std::vector<NodeId>& ids,
                         std::string_view name) {
  for (std::size_t i = 0; i < mp.params.size(); ++i)
    if (mp.params[i].name == name) return ids[i];
  throw PreconditionError("parameter not registered: " + std::string(name));
}

inline void check_finite(const Graph& g, NodeId id, const char* where) {
  if (!g.value(id).all_finite())
    throw NumericError(std::string("non-finite activation after ") + where);
}

}  // namespace detail

// A batch of B same-shaped windows in timestep-major layout: feature row
// g = t*B + b, neighbor row g*K + j. Metadata rows are pre-broadcast per g.
struct BatchInput {
  Tensor x_raw;  // (W*B, f_raw)
  Tensor x_nbr;  // (W*B*K, f_nbr)
  Tensor meta;   // (W*B, meta_dim) or empty
  int W = 0;
  int B = 0;
  int K = 0;
};

inline BatchInput pack_batch(const std::vector<const WindowSample*>& samples,
                             const EncoderConfig& cfg) {
  if (samples.empty()) throw PreconditionError("empty batch");
  int W = static_cast<int>(samples[0]->x_raw.rows());
  int K = cfg.use_neighbor ? samples[0]->K : 0;
  int B = static_cast<int>(samples.size());
  for (const WindowSample* s : samples) {
    if (static_cast<int>(s->x_raw.rows()) != W || s->x_raw.cols() != cfg.f_raw)
      throw ShapeError("batch windows disagree on raw feature shape");
    if (cfg.use_neighbor && s->K != K)
      throw ShapeError("batch windows disagree on neighbor count");
  }
  BatchInput bi;
  bi.W = W;
  bi.B = B;
  bi.K = K;
  bi.x_raw = Tensor(static_cast<std::int64_t>(W) * B, cfg.f_raw);
  for (int t = 0; t < W; ++t)
    for (int b = 0; b < B; ++b)
      for (int c = 0; c < cfg.f_raw; ++c)
        bi.x_raw(static_cast<std::int64_t>(t) * B + b, c) = samples[static_cast<std::size_t>(b)]->x_raw(t, c);
  if (K > 0) {
    bi.x_nbr = Tensor(static_cast<std::int64_t>(W) * B * K, cfg.f_nbr);
    for (int t = 0; t < W; ++t)
      for (int b = 0; b < B; ++b)
        for (int j = 0; j < K; ++j)
          for (int c = 0; c < cfg.f_nbr; ++c)
            bi.x_nbr((static_cast<std::int64_t>(t) * B + b) * K + j, c) =
                samples[static_cast<std::size_t>(b)]->x_nbr(static_cast<std::int64_t>(t) * K + j, c);
  } else {
    bi.x_nbr = Tensor(0, cfg.f_nbr);
  }
  if (cfg.use_metadata) {
    bi.meta = Tensor(static_cast<std::int64_t>(W) * B, cfg.meta_dim);
    for (int t = 0; t < W; ++t)
      for (int b = 0; b < B; ++b)
        for (int c = 0; c < cfg.meta_dim; ++c)
          bi.meta(static_cast<std::int64_t>(t) * B + b, c) =
              samples[static_cast<std::size_t>(b)]->meta(0, c);
  }
  return bi;
}

struct ForwardNodes {
  NodeId logits = -1;  // (W*B, 2), timestep-major
  NodeId probs = -1;   // (W*B, 1), attack-class probability
};

// Builds the full forward pass on the given graph. `param_ids` must come from
// register_params on the same ModelParams. In train mode the caller's rng
// drives the dropout masks.
inline ForwardNodes encode_batch(Graph& g, const BatchInput& bi, const ModelParams& mp,
                                 const std::vector<NodeId>& param_ids, const EncoderConfig& cfg,
                                 bool train, Rng* dropout_rng = nullptr) {
  cfg.validate();
  if (train && (cfg.dropout_gcn > 0.0 || cfg.dropout_gru > 0.0) && dropout_rng == nullptr)
    throw PreconditionError("train-mode forward needs a dropout stream");
  auto P = [&](std::string_view n) { return detail::param_node(mp, param_ids, n); };
  std::int64_t G = static_cast<std::int64_t>(bi.W) * bi.B;
  Rng unused_stream(0);  // never drawn from: eval mode makes dropout a no-op
  Rng& drop = dropout_rng != nullptr ? *dropout_rng : unused_stream;

  NodeId xraw = g.constant(bi.x_raw);
  NodeId h_raw = g.relu(g.add(g.matmul_(xraw, P("proj_raw.w")), P("proj_raw.b")));
  detail::check_finite(g, h_raw, "raw projection");

  NodeId h_nbr = -1;
  bool have_nbr_rows = cfg.use_neighbor && cfg.arch != ArchMode::NoGraph && bi.K > 0;
  if (have_nbr_rows) {
    NodeId xnbr = g.constant(bi.x_nbr);
    h_nbr = g.relu(g.add(g.matmul_(xnbr, P("proj_nbr.w")), P("proj_nbr.b")));
    detail::check_finite(g, h_nbr, "neighbor projection");
  }

  std::vector<NodeId> blocks;
  if (cfg.has_gcn()) {
    Tensor Ahat = star_norm_adjacency(bi.K);
    int N = bi.K + 1;
    int K = have_nbr_rows ? bi.K : 0;
    // The stacked star node matrix is block diagonal (ego features left, padded
    // neighbor features right), so the first convolution splits into two half
    // GEMMs against the row halves of the weight before the row mix.
    NodeId e1 = g.matmul_(h_raw, g.slice_rows(P("gcn1.w"), 0, cfg.hidden));
    NodeId n1 = have_nbr_rows
                    ? g.matmul_(h_nbr, g.slice_rows(P("gcn1.w"), cfg.hidden, cfg.hidden))
                    : -1;
    NodeId d1 = g.relu(g.star_mix(e1, n1, Ahat, K));
    d1 = g.dropout(d1, cfg.dropout_gcn, drop, train);
    NodeId d2 = g.relu(g.block_rowmix(g.matmul_(d1, P("gcn2.w")), Ahat, N));
    d2 = g.dropout(d2, cfg.dropout_gcn, drop, train);
    detail::check_finite(g, d2, "graph convolution");
    blocks.push_back(g.block_mean_rows(d2, N));
  }
  if (cfg.has_nbr_block()) {
    if (have_nbr_rows)
      blocks.push_back(g.block_mean_rows(h_nbr, bi.K));
    else
      blocks.push_back(g.constant(Tensor(G, cfg.hidden)));  // K = 0 convention
  }
  if (cfg.use_metadata) {
    NodeId xmeta = g.constant(bi.meta);
    blocks.push_back(g.relu(g.add(g.matmul_(xmeta, P("proj_meta.w")), P("proj_meta.b"))));
  }
  blocks.push_back(h_raw);

  NodeId fused = blocks.size() == 1 ? blocks[0] : g.concat_cols(blocks);
  NodeId z = g.layernorm(fused, P("ln.gain"), P("ln.bias"), 1e-5);
  detail::check_finite(g, z, "fusion layernorm");

  NodeId seq = z;
  if (cfg.has_gru()) {
    for (int l = 0; l < cfg.gru_layers; ++l) {
      std::vector<NodeId> fw(static_cast<std::size_t>(bi.W));
      std::vector<NodeId> bw(static_cast<std::size_t>(bi.W));
      for (const char* dir : {"fwd", "bwd"}) {
        std::string p = "gru" + std::to_string(l) + "." + dir + ".";
        NodeId gi_all = g.add(g.matmul_(seq, P(p + "w_ih")), P(p + "b_ih"));
        NodeId h = g.constant(Tensor(bi.B, cfg.gru_hidden));
        bool rev = dir[0] == 'b';
        for (int step = 0; step < bi.W; ++step) {
          int t = rev ? bi.W - 1 - step : step;
          NodeId gi_t = g.slice_rows(gi_all, static_cast<std::int64_t>(t) * bi.B, bi.B);
          h = gru_cell_pre(g, gi_t, h, P(p + "w_hh"), P(p + "b_hh"), cfg.gru_hidden);
          (rev ? bw : fw)[static_cast<std::size_t>(t)] = h;
        }
      }
      std::vector<NodeId> steps;
      steps.reserve(static_cast<std::size_t>(bi.W));
      for (int t = 0; t < bi.W; ++t)
        steps.push_back(g.concat_cols({fw[static_cast<std::size_t>(t)],
                                       bw[static_cast<std::size_t>(t)]}));
      seq = g.stack_rows(steps);
      detail::check_finite(g, seq, ("gru layer " + std::to_string(l)).c_str());
      if (l + 1 < cfg.gru_layers) seq = g.dropout(seq, cfg.dropout_gru, drop, train);
    }
  }

  ForwardNodes out;
  out.logits = g.add(g.matmul_(seq, P("head.w")), P("head.b"));
  detail::check_finite(g, out.logits, "output head");
  out.probs = g.slice_cols(g.softmax_rows(out.logits), 1, 1);
  return out;
}

struct EncoderOutput {
  Tensor logits;  // (W, 2)
  Tensor probs;   // (W, 1)
};

// Convenience single-window forward (batch of one).
inline EncoderOutput encode_window(const WindowSample& ws, const ModelParams& mp,
                                   const EncoderConfig& cfg, bool train = false,
                                   Rng* dropout_rng = nullptr) {
  Graph g;
  std::vector<const WindowSample*> one = {&ws};
  BatchInput bi = pack_batch(one, cfg);
  std::vector<NodeId> ids = register_params(g, mp, false);
  ForwardNodes fn = encode_batch(g, bi, mp, ids, cfg, train, dropout_rng);
  EncoderOutput out;
  out.logits = g.value(fn.logits);
  out.probs = g.value(fn.probs);
  return out;
}

}  // namespace gridwatch
