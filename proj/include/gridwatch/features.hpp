#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gridwatch/telemetry.hpp"
#include "gridwatch/tensor.hpp"
#include "gridwatch/topology.hpp"

namespace gridwatch {

// ---- temporal splits ---------------------------------------------------------

enum class Split : std::uint8_t { Train, Val, Test, Buffer };

inline const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Buffer: return "buffer";
  }
  return "?";
}

struct SplitSpec {
  double train_ratio = 0.70;
  double val_ratio = 0.15;
  int buffer_len = 5;
};

// Inclusive segment bounds. Buffers sit between train/val and val/test; no
// windows are drawn from them and the attack scheduler keeps them label-free.
struct SplitBounds {
  int train_begin = 0, train_end = -1;
  int val_begin = 0, val_end = -1;
  int test_begin = 0, test_end = -1;
  std::vector<std::pair<int, int>> buffers;

  Split split_of(int t) const {
    if (t >= train_begin && t <= train_end) return Split::Train;
    if (t >= val_begin && t <= val_end) return Split::Val;
    if (t >= test_begin && t <= test_end) return Split::Test;
    return Split::Buffer;
  }

  // Start of the contiguous segment containing t; trailing statistics never
  // reach across this boundary.
  int segment_start(int t) const {
    if (t >= train_begin && t <= train_end) return train_begin;
    if (t >= val_begin && t <= val_end) return val_begin;
    if (t >= test_begin && t <= test_end) return test_begin;
    for (auto [a, b] : buffers)
      if (t >= a && t <= b) return a;
    throw DomainError("timestep outside every segment");
  }
};

inline SplitBounds compute_split(const SplitSpec& spec, int t_total) {
  if (spec.train_ratio <= 0.0 || spec.val_ratio <= 0.0 ||
      spec.train_ratio + spec.val_ratio >= 1.0)
    throw DomainError("split ratios must be positive and sum below 1");
  if (spec.buffer_len < 0) throw DomainError("buffer length must be nonnegative");
  int idx0 = static_cast<int>(std::floor(spec.train_ratio * t_total));
  int idx1 = static_cast<int>(std::floor((spec.train_ratio + spec.val_ratio) * t_total));
  SplitBounds b;
  b.train_begin = 0;
  b.train_end = idx0 - 1;
  b.val_begin = idx0 + spec.buffer_len;
  b.val_end = idx1 - 1;
  b.test_begin = idx1 + spec.buffer_len;
  b.test_end = t_total - 1;
  if (spec.buffer_len > 0) {
    b.buffers.emplace_back(idx0, idx0 + spec.buffer_len - 1);
    b.buffers.emplace_back(idx1, idx1 + spec.buffer_len - 1);
  }
  if (b.train_end < b.train_begin || b.val_end < b.val_begin || b.test_end < b.test_begin)
    throw PreconditionError("horizon too short for the requested split ratios and buffers");
  return b;
}

// ---- per-timestep statistics ---------------------------------------------------

// Shannon entropy (bits) of a histogram over `bins` equal-width cells spanning
// [min,max] of the input, with additive smoothing. A flat input occupies a
// single cell; the top-edge value falls in the last cell.
inline double csi_entropy(const std::vector<double>& amps, int bins, double eps) {
  if (bins < 2) throw DomainError("csi_entropy needs at least 2 bins");
  if (eps <= 0.0) throw DomainError("csi_entropy smoothing must be positive");
  if (amps.empty()) throw DomainError("csi_entropy needs a nonempty sample");
  double lo = amps[0], hi = amps[0];
  for (double a : amps) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  if (hi > lo) {
    double width = (hi - lo) / static_cast<double>(bins);
    for (double a : amps) {
      int idx = a >= hi ? bins - 1 : static_cast<int>((a - lo) / width);
      idx = std::min(bins - 1, std::max(0, idx));
      counts[static_cast<std::size_t>(idx)] += 1.0;
    }
  } else {
    counts[0] = static_cast<double>(amps.size());
  }
  double total = static_cast<double>(amps.size()) + eps * static_cast<double>(bins);
  double h = 0.0;
  for (double c : counts) {
    double p = (c + eps) / total;
    h -= p * std::log2(p);
  }
  return h;
}

struct DerivedStats {
  double skew = 0.0;
  double kurt = 0.0;
  double slope = 0.0;
  double drift = 0.0;
  double flatness = 1.0;
};

// Shape statistics of a short series: moment-based sample skewness and excess
// kurtosis, least-squares slope against t = 0..n-1, last-minus-first drift,
// and spectral flatness (geometric over arithmetic mean of the DFT magnitude
// spectrum, DC bin excluded). Zero-variance input returns the documented
// degenerate convention (0,0,0,0,1).
inline DerivedStats derived_stats(std::span<const double> series) {
  std::size_t n = series.size();
  if (n < 4) throw DomainError("derived_stats needs at least 4 points");
  double dn = static_cast<double>(n);
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : series) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;

  DerivedStats out;
  // Constant input: no shape, no trend, flat spectrum. Returning here also
  // keeps DFT rounding noise from leaking into the flatness of a pure-DC
  // series.
  if (m2 <= 0.0) return out;
  out.skew = m3 / std::pow(m2, 1.5);
  out.kurt = m4 / (m2 * m2) - 3.0;
  double tbar = (dn - 1.0) / 2.0;
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dt = static_cast<double>(i) - tbar;
    stt += dt * dt;
    stx += dt * (series[i] - mean);
  }
  out.slope = stt > 0.0 ? stx / stt : 0.0;
  out.drift = series[n - 1] - series[0];

  // Magnitude spectrum via direct DFT; n is small so O(n^2) is fine.
  double gm_log = 0.0, am = 0.0;
  bool any_zero = false;
  for (std::size_t f = 1; f < n; ++f) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      double ang = -2.0 * std::numbers::pi * static_cast<double>(f) * static_cast<double>(t) / dn;
      acc += series[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    double mag = std::abs(acc);
    am += mag;
    if (mag > 0.0)
      gm_log += std::log(mag);
    else
      any_zero = true;
  }
  am /= (dn - 1.0);
  if (am <= 0.0)
    out.flatness = 1.0;  // pure-DC series
  else if (any_zero)
    out.flatness = 0.0;
  else
    out.flatness = std::exp(gm_log / (dn - 1.0)) / am;
  out.flatness = std::min(1.0, std::max(0.0, out.flatness));
  return out;
}

// Pearson correlation over paired samples; returns 0 when either side has no
// variance or fewer than two points.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("pearson: length mismatch");
  std::size_t n = a.size();
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::min(1.0, std::max(-1.0, sab / std::sqrt(saa * sbb)));
}

// ---- feature tables -------------------------------------------------------------

inline constexpr int kRawFeatureCount = 11;
inline constexpr int kDerivedFeatureCount = 25;
inline constexpr int kNeighborFeatureCount = 8;
inline constexpr int kEntropyBins = 16;
inline constexpr double kEntropyEps = 1e-9;
inline constexpr int kLatencySmoothLen = 5;

// Column order of the 11 instantaneous features.
enum RawCol : int {
  kColCsiAmpMean = 0,
  kColCsiAmpStd,
  kColCsiDrift,
  kColCsiEntropy,
  kColSnrDb,
  kColSnrDelta,
  kColLatencySmoothed,
  kColPer,
  kColPerDelta,
  kColTxCount,
  kColTimeSinceLastTx,
};

inline std::vector<std::string> raw_feature_names() {
  return {"csi_amp_mean", "csi_amp_std",  "csi_drift", "csi_entropy",
          "snr_db",       "snr_delta",    "latency_smoothed", "per",
          "per_delta",    "tx_count",     "time_since_last_tx"};
}

inline std::vector<std::string> derived_feature_names() {
  std::vector<std::string> out;
  for (const char* ch : {"csi_amp_mean", "snr_db", "latency_smoothed", "per", "csi_drift"})
    for (const char* st : {"skew", "kurt", "slope", "drift", "flat"})
      out.push_back(std::string(st) + "_" + ch);
  return out;
}

inline std::vector<std::string> neighbor_feature_names() {
  return {"nbr_latency", "nbr_snr",  "nbr_per",  "nbr_csi_drift",
          "corr_latency", "corr_snr", "disp_snr", "disp_latency"};
}

// Instantaneous features for one node. Trailing quantities (deltas, the
// latency moving average, CSI drift) restart at every segment boundary so no
// information crosses a split or buffer edge.
inline Tensor compute_raw_features(const std::vector<TelemetryFrame>& frames,
                                   const SplitBounds& bounds) {
  int t_total = static_cast<int>(frames.size());
  Tensor out(t_total, kRawFeatureCount);
  for (int t = 0; t < t_total; ++t) {
    const TelemetryFrame& fr = frames[static_cast<std::size_t>(t)];
    int seg0 = bounds.segment_start(t);
    int n_sub = fr.csi.n_sub();
    std::vector<double> amps = fr.csi.amplitudes();
    double amean = 0.0;
    for (double a : amps) amean += a;
    amean /= static_cast<double>(n_sub);
    double avar = 0.0;
    for (double a : amps) avar += (a - amean) * (a - amean);
    avar /= static_cast<double>(n_sub);

    out(t, kColCsiAmpMean) = amean;
    out(t, kColCsiAmpStd) = std::sqrt(avar);
    out(t, kColCsiDrift) =
        t > seg0 ? csi_drift(fr.csi, frames[static_cast<std::size_t>(t - 1)].csi) : 0.0;
    out(t, kColCsiEntropy) = csi_entropy(amps, kEntropyBins, kEntropyEps);
    out(t, kColSnrDb) = fr.snr_db;
    out(t, kColSnrDelta) =
        t > seg0 ? fr.snr_db - frames[static_cast<std::size_t>(t - 1)].snr_db : 0.0;
    double lsum = 0.0;
    int lo = std::max(seg0, t - (kLatencySmoothLen - 1));
    for (int u = lo; u <= t; ++u) lsum += frames[static_cast<std::size_t>(u)].latency_ms;
    out(t, kColLatencySmoothed) = lsum / static_cast<double>(t - lo + 1);
    out(t, kColPer) = fr.per;
    out(t, kColPerDelta) = t > seg0 ? fr.per - frames[static_cast<std::size_t>(t - 1)].per : 0.0;
    out(t, kColTxCount) = static_cast<double>(fr.tx_count);
    out(t, kColTimeSinceLastTx) = static_cast<double>(fr.time_since_last_tx);
  }
  return out;
}

// Shape statistics of five base channels over a trailing window of length
// `window` ending at t (clipped to the segment). Rows with fewer than 4
// in-segment points take the degenerate convention (0,0,0,0,1).
inline Tensor compute_derived_features(const Tensor& raw, const SplitBounds& bounds, int window) {
  if (window < 4) throw DomainError("derived-feature window must be >= 4");
  static constexpr int kChannels[5] = {kColCsiAmpMean, kColSnrDb, kColLatencySmoothed, kColPer,
                                       kColCsiDrift};
  Tensor out(raw.rows(), kDerivedFeatureCount);
  std::vector<double> buf(static_cast<std::size_t>(window));
  for (std::int64_t t = 0; t < raw.rows(); ++t) {
    int seg0 = bounds.segment_start(static_cast<int>(t));
    int lo = std::max(seg0, static_cast<int>(t) - (window - 1));
    int n = static_cast<int>(t) - lo + 1;
    for (int c = 0; c < 5; ++c) {
      DerivedStats ds;  // default is the degenerate convention
      if (n >= 4) {
        for (int u = 0; u < n; ++u)
          buf[static_cast<std::size_t>(u)] = raw(lo + u, kChannels[c]);
        ds = derived_stats(std::span<const double>(buf.data(), static_cast<std::size_t>(n)));
      }
      out(t, c * 5 + 0) = ds.skew;
      out(t, c * 5 + 1) = ds.kurt;
      out(t, c * 5 + 2) = ds.slope;
      out(t, c * 5 + 3) = ds.drift;
      out(t, c * 5 + 4) = ds.flatness;
    }
  }
  return out;
}

// Per-neighbor descriptors for one ego at every timestep: the neighbor's own
// smoothed latency, SNR, PER and CSI drift, trailing ego-neighbor
// correlations, and the dispersion of the neighborhood (shared across rows).
// Row layout is t*K + j. Averaging the K rows at a timestep yields the
// aggregate neighbor-statistics vector; K = 0 egos get an empty tensor and
// the aggregate convention is all-zero.
inline Tensor compute_neighbor_features(const Tensor& ego_raw, const std::vector<Tensor>& nbr_raw,
                                        const SplitBounds& bounds, int window) {
  int K = static_cast<int>(nbr_raw.size());
  if (K == 0) return Tensor(0, kNeighborFeatureCount);
  std::int64_t t_total = ego_raw.rows();
  Tensor out(t_total * K, kNeighborFeatureCount);
  std::vector<double> ea(static_cast<std::size_t>(window)), eb(static_cast<std::size_t>(window));
  for (std::int64_t t = 0; t < t_total; ++t) {
    int seg0 = bounds.segment_start(static_cast<int>(t));
    int lo = std::max(seg0, static_cast<int>(t) - (window - 1));
    int n = static_cast<int>(t) - lo + 1;
    // Neighborhood dispersion at this timestep (population std).
    double snr_m = 0.0, lat_m = 0.0;
    for (int j = 0; j < K; ++j) {
      snr_m += nbr_raw[static_cast<std::size_t>(j)](t, kColSnrDb);
      lat_m += nbr_raw[static_cast<std::size_t>(j)](t, kColLatencySmoothed);
    }
    snr_m /= K;
    lat_m /= K;
    double snr_v = 0.0, lat_v = 0.0;
    for (int j = 0; j < K; ++j) {
      double ds = nbr_raw[static_cast<std::size_t>(j)](t, kColSnrDb) - snr_m;
      double dl = nbr_raw[static_cast<std::size_t>(j)](t, kColLatencySmoothed) - lat_m;
      snr_v += ds * ds;
      lat_v += dl * dl;
    }
    double disp_snr = std::sqrt(snr_v / K);
    double disp_lat = std::sqrt(lat_v / K);

    for (int j = 0; j < K; ++j) {
      const Tensor& nb = nbr_raw[static_cast<std::size_t>(j)];
      std::int64_t row = t * K + j;
      out(row, 0) = nb(t, kColLatencySmoothed);
      out(row, 1) = nb(t, kColSnrDb);
      out(row, 2) = nb(t, kColPer);
      out(row, 3) = nb(t, kColCsiDrift);
      for (int u = 0; u < n; ++u) {
        ea[static_cast<std::size_t>(u)] = ego_raw(lo + u, kColLatencySmoothed);
        eb[static_cast<std::size_t>(u)] = nb(lo + u, kColLatencySmoothed);
      }
      out(row, 4) = pearson(std::span<const double>(ea.data(), static_cast<std::size_t>(n)),
                            std::span<const double>(eb.data(), static_cast<std::size_t>(n)));
      for (int u = 0; u < n; ++u) {
        ea[static_cast<std::size_t>(u)] = ego_raw(lo + u, kColSnrDb);
        eb[static_cast<std::size_t>(u)] = nb(lo + u, kColSnrDb);
      }
      out(row, 5) = pearson(std::span<const double>(ea.data(), static_cast<std::size_t>(n)),
                            std::span<const double>(eb.data(), static_cast<std::size_t>(n)));
      out(row, 6) = disp_snr;
      out(row, 7) = disp_lat;
    }
  }
  return out;
}

// Aggregate neighbor statistics at one timestep: column mean over the K
// per-neighbor rows, or all-zero when the ego has no wireless neighbors.
inline Tensor neighbor_stats(const Tensor& nbr_features, int K, int t) {
  Tensor out(1, kNeighborFeatureCount);
  if (K == 0) return out;
  for (int j = 0; j < K; ++j)
    for (int c = 0; c < kNeighborFeatureCount; ++c)
      out(0, c) += nbr_features(static_cast<std::int64_t>(t) * K + j, c) / K;
  return out;
}

// ---- client assembly --------------------------------------------------------------

struct FeatureFlags {
  bool derived = true;
  bool neighbor = true;
  bool metadata = true;
};

// Everything one federated client derives from its own ego view of the grid.
struct ClientData {
  int ego = -1;
  int K = 0;
  std::vector<int> neighbors;
  Tensor feats;             // (T, 11 or 36), unnormalized
  Tensor nbr;               // (T*K, 8), unnormalized; empty when K == 0
  Tensor meta;              // (1, 15)
  std::vector<int> labels;  // per timestep
};

inline std::vector<ClientData> build_client_data(
    const std::vector<std::vector<TelemetryFrame>>& frames, const GridTopology& topo,
    const SplitBounds& bounds, int window, const FeatureFlags& flags) {
  // Raw tables for every node once; clients then reference their neighbors'.
  std::vector<Tensor> raw(static_cast<std::size_t>(topo.size()));
  for (int n = 0; n < topo.size(); ++n)
    raw[static_cast<std::size_t>(n)] =
        compute_raw_features(frames[static_cast<std::size_t>(n)], bounds);

  std::vector<ClientData> out;
  for (int ego : wireless_clients(topo)) {
    StarSubgraph star = star_subgraph(topo, ego);
    ClientData cd;
    cd.ego = ego;
    cd.meta = metadata_vector(topo.node(ego));
    const Tensor& ego_raw = raw[static_cast<std::size_t>(ego)];
    if (flags.derived) {
      Tensor der = compute_derived_features(ego_raw, bounds, window);
      cd.feats = Tensor(ego_raw.rows(), kRawFeatureCount + kDerivedFeatureCount);
      for (std::int64_t t = 0; t < ego_raw.rows(); ++t) {
        for (int c = 0; c < kRawFeatureCount; ++c) cd.feats(t, c) = ego_raw(t, c);
        for (int c = 0; c < kDerivedFeatureCount; ++c)
          cd.feats(t, kRawFeatureCount + c) = der(t, c);
      }
    } else {
      cd.feats = ego_raw;
    }
    if (flags.neighbor) {
      cd.K = star.K;
      cd.neighbors = star.neighbors;
      std::vector<Tensor> nbr_raw;
      for (int j : star.neighbors) nbr_raw.push_back(raw[static_cast<std::size_t>(j)]);
      cd.nbr = compute_neighbor_features(ego_raw, nbr_raw, bounds, window);
    } else {
      cd.K = 0;
      cd.nbr = Tensor(0, kNeighborFeatureCount);
    }
    cd.labels.reserve(frames[static_cast<std::size_t>(ego)].size());
    for (const auto& fr : frames[static_cast<std::size_t>(ego)]) cd.labels.push_back(fr.label);
    out.push_back(std::move(cd));
  }
  return out;
}

// ---- windows -----------------------------------------------------------------------

struct WindowSample {
  int ego = -1;
  int start = 0;  // absolute timestep of the first row
  Split split = Split::Train;
  int K = 0;
  Tensor x_raw;             // (W, F_raw)
  Tensor x_nbr;             // (W*K, 8); empty when K == 0
  Tensor meta;              // (1, 15); empty when metadata disabled
  std::vector<int> labels;  // length W
};

// Per-column mean and standard deviation fitted on training rows only;
// zero-variance columns keep std 1 so they pass through unscaled.
struct NormStats {
  Tensor mean;
  Tensor std;
};

inline NormStats fit_norm(const Tensor& rows) {
  NormStats ns;
  ns.mean = Tensor(1, rows.cols());
  ns.std = Tensor(1, rows.cols());
  if (rows.rows() == 0) {
    ns.std.fill(1.0);
    return ns;
  }
  for (std::int64_t c = 0; c < rows.cols(); ++c) {
    double m = 0.0;
    for (std::int64_t r = 0; r < rows.rows(); ++r) m += rows(r, c);
    m /= static_cast<double>(rows.rows());
    double v = 0.0;
    for (std::int64_t r = 0; r < rows.rows(); ++r) v += (rows(r, c) - m) * (rows(r, c) - m);
    v /= static_cast<double>(rows.rows());
    ns.mean(0, c) = m;
    ns.std(0, c) = v > 0.0 ? std::sqrt(v) : 1.0;
  }
  return ns;
}

inline void apply_norm(Tensor& rows, const NormStats& ns) {
  for (std::int64_t r = 0; r < rows.rows(); ++r)
    for (std::int64_t c = 0; c < rows.cols(); ++c)
      rows(r, c) = (rows(r, c) - ns.mean(0, c)) / ns.std(0, c);
}

// Slides length-W windows (stride fixed) over each split segment of each
// client, normalizing with that client's training statistics. Segments
// shorter than W yield nothing and add a warning. Output ordering is
// deterministic: ascending ego, then split segment order, then start.
inline std::vector<WindowSample> make_windows(const std::vector<ClientData>& clients,
                                              const SplitBounds& bounds, int window, int stride,
                                              const FeatureFlags& flags,
                                              std::vector<std::string>* warnings = nullptr) {
  if (window < 1) throw DomainError("window length must be >= 1");
  if (stride < 1) throw DomainError("stride must be >= 1");
  std::vector<WindowSample> out;
  for (const ClientData& cd : clients) {
    // Normalization statistics from this client's training rows only.
    Tensor train_feats(bounds.train_end - bounds.train_begin + 1, cd.feats.cols());
    for (std::int64_t t = 0; t < train_feats.rows(); ++t)
      for (std::int64_t c = 0; c < cd.feats.cols(); ++c)
        train_feats(t, c) = cd.feats(bounds.train_begin + t, c);
    NormStats feat_norm = fit_norm(train_feats);
    NormStats nbr_norm;
    if (cd.K > 0) {
      Tensor train_nbr((bounds.train_end - bounds.train_begin + 1) * cd.K, kNeighborFeatureCount);
      for (std::int64_t r = 0; r < train_nbr.rows(); ++r)
        for (std::int64_t c = 0; c < kNeighborFeatureCount; ++c)
          train_nbr(r, c) =
              cd.nbr(static_cast<std::int64_t>(bounds.train_begin) * cd.K + r, c);
      nbr_norm = fit_norm(train_nbr);
    }

    const std::pair<int, int> segments[3] = {{bounds.train_begin, bounds.train_end},
                                             {bounds.val_begin, bounds.val_end},
                                             {bounds.test_begin, bounds.test_end}};
    for (auto [seg_begin, seg_end] : segments) {
      if (seg_end - seg_begin + 1 < window) {
        if (warnings)
          warnings->push_back("client " + std::to_string(cd.ego) + ": " +
                              to_string(bounds.split_of(seg_begin)) + " segment of length " +
                              std::to_string(seg_end - seg_begin + 1) +
                              " is shorter than the window; no windows emitted");
        continue;
      }
      for (int s = seg_begin; s + window - 1 <= seg_end; s += stride) {
        WindowSample ws;
        ws.ego = cd.ego;
        ws.start = s;
        ws.split = bounds.split_of(s);
        ws.K = cd.K;
        ws.x_raw = Tensor(window, cd.feats.cols());
        for (int r = 0; r < window; ++r)
          for (std::int64_t c = 0; c < cd.feats.cols(); ++c)
            ws.x_raw(r, c) = cd.feats(s + r, c);
        apply_norm(ws.x_raw, feat_norm);
        if (cd.K > 0) {
          ws.x_nbr = Tensor(static_cast<std::int64_t>(window) * cd.K, kNeighborFeatureCount);
          for (std::int64_t r = 0; r < ws.x_nbr.rows(); ++r)
            for (std::int64_t c = 0; c < kNeighborFeatureCount; ++c)
              ws.x_nbr(r, c) = cd.nbr(static_cast<std::int64_t>(s) * cd.K + r, c);
          apply_norm(ws.x_nbr, nbr_norm);
        } else {
          ws.x_nbr = Tensor(0, kNeighborFeatureCount);
        }
        ws.meta = flags.metadata ? cd.meta : Tensor();
        ws.labels.assign(cd.labels.begin() + s, cd.labels.begin() + s + window);
        out.push_back(std::move(ws));
      }
    }
  }
  return out;
}

}  // namespace gridwatch
