#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/rng.hpp"
#include "gridwatch/topology.hpp"

namespace gridwatch {

// ---- physical-layer primitives ----------------------------------------------

inline double per_from_ber(double ber, std::int64_t packet_bits) {
  if (ber < 0.0 || ber > 1.0) throw DomainError("ber must lie in [0,1]");
  if (packet_bits < 1) throw DomainError("packet_bits must be >= 1");
  return 1.0 - std::pow(1.0 - ber, static_cast<double>(packet_bits));
}

inline double snr_db(double p_signal, double p_noise) {
  if (p_signal <= 0.0 || p_noise <= 0.0) throw DomainError("snr_db requires positive powers");
  return 10.0 * std::log10(p_signal / p_noise);
}

inline double phase_drift(double f_off_hz, double t_symb_s) {
  if (t_symb_s <= 0.0) throw DomainError("symbol duration must be positive");
  return 2.0 * std::numbers::pi * f_off_hz * t_symb_s;
}

// Wraps into [-pi, pi).
inline double wrap_phase(double phi) {
  double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi + std::numbers::pi, two_pi);
  if (phi < 0.0) phi += two_pi;
  return phi - std::numbers::pi;
}

// ---- domain types ------------------------------------------------------------

// Complex channel coefficients H_k = re_k + j*im_k. Stored rectangular so
// the on-disk real/imag columns round-trip bit for bit; amplitude and phase
// views are derived on demand.
struct ChannelState {
  std::vector<double> re;
  std::vector<double> im;
  double f_off_hz = 0.0;
  double t_symb_s = 1e-4;

  int n_sub() const { return static_cast<int>(re.size()); }

  double amp(int k) const {
    return std::hypot(re[static_cast<std::size_t>(k)], im[static_cast<std::size_t>(k)]);
  }
  double phase(int k) const {
    return wrap_phase(
        std::atan2(im[static_cast<std::size_t>(k)], re[static_cast<std::size_t>(k)]));
  }
  std::vector<double> amplitudes() const {
    std::vector<double> a(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) a[k] = std::hypot(re[k], im[k]);
    return a;
  }
};

// Mean modulus of the per-subcarrier channel change between two snapshots.
inline double csi_drift(const ChannelState& now, const ChannelState& prev) {
  if (now.n_sub() != prev.n_sub()) throw DomainError("csi_drift: subcarrier count mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < now.re.size(); ++k)
    s += std::hypot(now.re[k] - prev.re[k], now.im[k] - prev.im[k]);
  return s / static_cast<double>(now.n_sub());
}

struct TelemetryFrame {
  int node = -1;
  int t = -1;
  ChannelState csi;
  double snr_db = 0.0;
  double latency_ms = 0.0;
  double per = 0.0;
  int tx_count = 1;            // attempts per delivered packet
  int time_since_last_tx = 0;  // timesteps
  int label = 0;
};

struct AttackWindow {
  int node = -1;
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  int ramp_len = 1;
};

struct AttackSchedule {
  std::vector<AttackWindow> windows;  // sorted by (node, start)
};

// Per-technology baseline channel behavior.
struct TechProfile {
  double snr_mean_db = 20.0;
  double latency_mean_ms = 10.0;
  double ber_base = 1e-4;
};

struct GeneratorConfig {
  int n_sub = 16;
  int t_total = 5000;
  std::uint64_t seed = 7;
  double t_symb_s = 1e-4;
  double f_off_max_hz = 40.0;  // per-node carrier offset drawn uniformly in +-max
  int packet_bits = 1024;

  // Baseline profiles indexed by Technology enum order.
  TechProfile tech[kTechnologyCount] = {
      {22.0, 12.0, 4e-4},  // ZigBee
      {18.0, 8.0, 8e-4},   // PLC
      {28.0, 25.0, 1e-4},  // LTE
      {38.0, 2.0, 1e-5},   // FiberEthernet
  };

  // Baseline dynamics.
  double csi_fading_rho = 0.95;
  double csi_fading_sigma = 0.02;  // innovation scale relative to subcarrier mean
  double snr_ar_rho = 0.9;
  double snr_ar_sigma = 0.35;      // dB
  double common_snr_sigma = 0.6;   // shared wireless environment process, dB
  double ber_log_sigma = 0.3;
  double latency_log_sigma = 0.06;
  double latency_jitter_frac = 0.04;
  double tx_event_prob = 0.25;

  // Attack perturbation magnitudes (all zero-able for null experiments;
  // ber multiplier's neutral value is 1).
  double attack_snr_drop_db = 1.5;
  double attack_ber_mult = 3.0;
  double attack_latency_shift = 0.10;   // fraction of baseline mean
  double attack_latency_jitter = 0.05;  // extra jitter, fraction of baseline mean
  double attack_csi_amp_frac = 0.05;    // extra-path amplitude relative to subcarrier mean
  double attack_phase_bias_hz = 15.0;   // added carrier offset while under attack
  double attack_csi_beat = 0.7;         // extra-path rotation, radians per timestep

  // Scheduling.
  double coverage_target = 0.30;
  double coverage_tol = 0.005;
  int ramp_len = 10;
  int min_window = 30;
  int max_window = 80;
  int min_gap = 15;
  std::vector<std::pair<int, int>> no_attack_zones;  // inclusive spans, no labels inside
};

inline void validate_generator_config(const GeneratorConfig& cfg) {
  if (cfg.n_sub < 1) throw DomainError("n_sub must be >= 1");
  if (cfg.t_symb_s <= 0.0) throw DomainError("t_symb_s must be positive");
  if (cfg.packet_bits < 1) throw DomainError("packet_bits must be >= 1");
  if (cfg.csi_fading_rho < 0.0 || cfg.csi_fading_rho >= 1.0)
    throw DomainError("csi_fading_rho must lie in [0,1)");
  if (cfg.snr_ar_rho < 0.0 || cfg.snr_ar_rho >= 1.0)
    throw DomainError("snr_ar_rho must lie in [0,1)");
  for (const auto& tp : cfg.tech) {
    if (tp.latency_mean_ms <= 0.0) throw DomainError("latency mean must be positive");
    if (tp.ber_base < 0.0 || tp.ber_base > 1.0) throw DomainError("ber base must lie in [0,1]");
  }
  if (cfg.attack_snr_drop_db < 0.0 || cfg.attack_latency_shift < 0.0 ||
      cfg.attack_latency_jitter < 0.0 || cfg.attack_csi_amp_frac < 0.0 ||
      cfg.attack_phase_bias_hz < 0.0)
    throw DomainError("attack magnitudes must be nonnegative");
  if (cfg.attack_ber_mult < 1.0) throw DomainError("attack_ber_mult must be >= 1");
  if (cfg.coverage_target <= 0.0 || cfg.coverage_target >= 1.0)
    throw DomainError("coverage target must lie in (0,1)");
  if (cfg.coverage_tol <= 0.0) throw DomainError("coverage tolerance must be positive");
  if (cfg.ramp_len < 1) throw DomainError("ramp length must be >= 1");
  if (cfg.min_window < 1 || cfg.max_window < cfg.min_window)
    throw DomainError("window length bounds invalid");
  if (cfg.min_gap < 0) throw DomainError("min gap must be nonnegative");
  for (auto [a, b] : cfg.no_attack_zones)
    if (a < 0 || b < a) throw DomainError("no-attack zone bounds invalid");
}

// ---- attack scheduling --------------------------------------------------------

namespace detail {

inline bool span_blocked(int start, int end, const std::vector<std::pair<int, int>>& zones) {
  for (auto [a, b] : zones)
    if (start <= b && a <= end) return true;
  return false;
}

inline bool span_conflicts(int start, int end, const std::vector<AttackWindow>& placed, int node,
                           int min_gap) {
  for (const auto& w : placed) {
    if (w.node != node) continue;
    if (start <= w.end + min_gap && w.start - min_gap <= end) return true;
  }
  return false;
}

}  // namespace detail

// Draws attack windows on wireless nodes until the labeled fraction of the
// wireless timeline hits the coverage target exactly (in cells). Nodes are
// cycled round-robin first so coverage spreads before role weighting takes
// over; gateways and the substation controller are favored afterwards since
// they see the most traffic worth intercepting.
inline AttackSchedule make_attack_schedule(const GridTopology& topo, const GeneratorConfig& cfg) {
  std::vector<int> clients = wireless_clients(topo);
  if (clients.empty()) throw PreconditionError("no wireless nodes to schedule attacks on");
  std::int64_t cells = static_cast<std::int64_t>(clients.size()) * cfg.t_total;
  std::int64_t target = std::llround(cfg.coverage_target * static_cast<double>(cells));
  if (target < 1) throw PreconditionError("coverage target rounds to zero cells");

  auto weight = [&](int id) {
    switch (topo.node(id).role) {
      case Role::NeighborhoodGateway: return 1.5;
      case Role::SubstationController: return 1.2;
      default: return 1.0;
    }
  };

  Rng rng(derive_seed(cfg.seed, "schedule"));
  AttackSchedule sched;
  std::int64_t remaining = target;
  std::int64_t attempts = 0;
  const std::int64_t max_attempts = 200000 + 50 * target;
  std::size_t rr = 0;  // round-robin cursor for the first pass over clients

  while (remaining > 0) {
    if (++attempts > max_attempts)
      throw PreconditionError(
          "attack coverage target unattainable: placed " +
          std::to_string(target - remaining) + " of " + std::to_string(target) + " cells");
    int node;
    if (rr < clients.size()) {
      node = clients[rr];
    } else {
      double total_w = 0.0;
      for (int id : clients) total_w += weight(id);
      double pick = rng.uniform(0.0, total_w);
      node = clients.back();
      for (int id : clients) {
        pick -= weight(id);
        if (pick <= 0.0) {
          node = id;
          break;
        }
      }
    }
    std::int64_t span = cfg.min_window +
                        static_cast<std::int64_t>(rng.uniform_int(
                            static_cast<std::uint64_t>(cfg.max_window - cfg.min_window + 1)));
    // Final windows shrink to land exactly on the target; never below one ramp.
    if (span > remaining) span = std::max<std::int64_t>(remaining, 1);
    if (span > cfg.t_total) continue;
    int start = static_cast<int>(
        rng.uniform_int(static_cast<std::uint64_t>(cfg.t_total - span + 1)));
    int end = start + static_cast<int>(span) - 1;
    if (detail::span_blocked(start, end, cfg.no_attack_zones)) continue;
    if (detail::span_conflicts(start, end, sched.windows, node, cfg.min_gap)) continue;
    sched.windows.push_back({node, start, end, cfg.ramp_len});
    remaining -= span;
    if (rr < clients.size()) ++rr;
  }

  std::sort(sched.windows.begin(), sched.windows.end(), [](const AttackWindow& a,
                                                           const AttackWindow& b) {
    return a.node != b.node ? a.node < b.node : a.start < b.start;
  });
  double cov = static_cast<double>(target) / static_cast<double>(cells);
  if (std::fabs(cov - cfg.coverage_target) > cfg.coverage_tol)
    throw PreconditionError("scheduled coverage " + std::to_string(cov) +
                            " misses target beyond tolerance");
  return sched;
}

// ---- simulation ----------------------------------------------------------------

struct SimResult {
  std::vector<std::vector<TelemetryFrame>> frames;  // frames[node][t]
  AttackSchedule schedule;
};

// Linear onset factor in [0,1]: reaches 1 after ramp_len steps and persists.
inline double attack_ramp(int t, const AttackWindow& w) {
  if (t < w.start || t > w.end) return 0.0;
  return std::min(1.0, static_cast<double>(t - w.start + 1) / static_cast<double>(w.ramp_len));
}

// Generates one frame per node per timestep. Normal dynamics: per-subcarrier
// complex AR(1) fading around a fixed mean, slowly wandering SNR with a
// shared wireless environment component, lognormal latency and BER wander.
// Attack windows (wireless only) ramp in: an SNR drop, a BER multiplier, a
// latency shift plus jitter, an extra CSI scattering path rotating at a
// fixed beat, and a carrier-offset bias. Perturbation draws come from
// dedicated streams and are consumed regardless of magnitude, so a
// zero-magnitude run is bit-identical to its unperturbed baseline.
inline SimResult simulate(const GridTopology& topo, const GeneratorConfig& cfg,
                          std::vector<std::string>* warnings = nullptr) {
  if (cfg.t_total < 2 * cfg.ramp_len)
    throw PreconditionError("t_total must cover at least two attack ramps");
  if (cfg.t_total < 100 && warnings)
    warnings->push_back("t_total below 100 timesteps; splits will be very thin");
  validate_generator_config(cfg);
  for (auto [a, b] : cfg.no_attack_zones)
    if (b >= cfg.t_total) throw DomainError("no-attack zone exceeds horizon");

  SimResult out;
  out.schedule = make_attack_schedule(topo, cfg);

  // Shared wireless environment (weather, interference floor): AR(1) in dB.
  std::vector<double> common(static_cast<std::size_t>(cfg.t_total));
  {
    Rng crng(derive_seed(cfg.seed, "common"));
    double g = 0.0;
    for (int t = 0; t < cfg.t_total; ++t) {
      g = 0.9 * g + cfg.common_snr_sigma * std::sqrt(1.0 - 0.81) * crng.normal();
      common[static_cast<std::size_t>(t)] = g;
    }
  }

  out.frames.resize(static_cast<std::size_t>(topo.size()));
  for (int node = 0; node < topo.size(); ++node) {
    const NodeDescriptor& nd = topo.node(node);
    const TechProfile& tp = cfg.tech[static_cast<int>(nd.technology)];
    std::vector<AttackWindow> wins;
    for (const auto& w : out.schedule.windows)
      if (w.node == node) wins.push_back(w);

    Rng chan(derive_seed(cfg.seed, "chan", static_cast<std::uint64_t>(node)));
    Rng tx(derive_seed(cfg.seed, "tx", static_cast<std::uint64_t>(node)));
    Rng events(derive_seed(cfg.seed, "event", static_cast<std::uint64_t>(node)));
    Rng atk(derive_seed(cfg.seed, "atk", static_cast<std::uint64_t>(node)));

    // Static node character.
    std::vector<double> mean_re(static_cast<std::size_t>(cfg.n_sub));
    std::vector<double> mean_im(static_cast<std::size_t>(cfg.n_sub));
    for (int k = 0; k < cfg.n_sub; ++k) {
      double m = 1.0 + 0.3 * chan.uniform(-1.0, 1.0);
      double ph = chan.uniform(-std::numbers::pi, std::numbers::pi);
      mean_re[static_cast<std::size_t>(k)] = m * std::cos(ph);
      mean_im[static_cast<std::size_t>(k)] = m * std::sin(ph);
    }
    double f_off_base = chan.uniform(-cfg.f_off_max_hz, cfg.f_off_max_hz);
    double snr_offset = chan.uniform(-1.0, 1.0);
    double lat_factor = std::exp(0.1 * chan.uniform(-1.0, 1.0));

    // Extra scattering path per attack window: fixed per-subcarrier phases.
    std::vector<std::vector<double>> path_phase(wins.size());
    for (std::size_t wi = 0; wi < wins.size(); ++wi) {
      Rng prng(derive_seed(cfg.seed, "atkpath", static_cast<std::uint64_t>(node),
                           static_cast<std::uint64_t>(wi)));
      path_phase[wi].resize(static_cast<std::size_t>(cfg.n_sub));
      for (int k = 0; k < cfg.n_sub; ++k)
        path_phase[wi][static_cast<std::size_t>(k)] =
            prng.uniform(-std::numbers::pi, std::numbers::pi);
    }

    std::vector<double> ar_re(static_cast<std::size_t>(cfg.n_sub), 0.0);
    std::vector<double> ar_im(static_cast<std::size_t>(cfg.n_sub), 0.0);
    double snr_ar = 0.0, ber_ar = 0.0, lat_ar = 0.0, f_wobble = 0.0, phi_acc = 0.0;
    int since_tx = 0;

    auto& stream = out.frames[static_cast<std::size_t>(node)];
    stream.reserve(static_cast<std::size_t>(cfg.t_total));

    for (int t = 0; t < cfg.t_total; ++t) {
      // Active window and onset factor (wireless nodes only ever have windows).
      double ramp = 0.0;
      const std::vector<double>* extra_phase = nullptr;
      int win_start = 0;
      for (std::size_t wi = 0; wi < wins.size(); ++wi) {
        double r = attack_ramp(t, wins[wi]);
        if (r > 0.0) {
          ramp = r;
          extra_phase = &path_phase[wi];
          win_start = wins[wi].start;
          break;
        }
      }

      // Channel fading state (draw order fixed; see header comment).
      double snr_innov = chan.normal();
      double ber_innov = chan.normal();
      double lat_innov = chan.normal();
      double lat_jit = chan.normal();
      double f_innov = chan.normal();
      snr_ar = cfg.snr_ar_rho * snr_ar +
               cfg.snr_ar_sigma * std::sqrt(1.0 - cfg.snr_ar_rho * cfg.snr_ar_rho) * snr_innov;
      ber_ar = 0.9 * ber_ar + std::sqrt(1.0 - 0.81) * ber_innov;
      lat_ar = 0.9 * lat_ar + std::sqrt(1.0 - 0.81) * lat_innov;
      f_wobble = 0.95 * f_wobble + 0.5 * f_innov;

      // Attack-stream draws, consumed every step to keep the baseline streams
      // aligned whether or not this node is under attack.
      double atk_jit = atk.normal();

      double com = nd.wireless ? common[static_cast<std::size_t>(t)] : 0.0;

      TelemetryFrame fr;
      fr.node = node;
      fr.t = t;
      fr.label = ramp > 0.0 ? 1 : 0;

      // CSI: fading around the subcarrier mean, one shared rotation from the
      // carrier offset, plus the ramped extra path while under attack.
      double f_off_eff = f_off_base + f_wobble + ramp * cfg.attack_phase_bias_hz;
      phi_acc = wrap_phase(phi_acc + phase_drift(f_off_eff, cfg.t_symb_s));
      fr.csi.f_off_hz = f_off_eff;
      fr.csi.t_symb_s = cfg.t_symb_s;
      fr.csi.re.resize(static_cast<std::size_t>(cfg.n_sub));
      fr.csi.im.resize(static_cast<std::size_t>(cfg.n_sub));
      double cosr = std::cos(phi_acc), sinr = std::sin(phi_acc);
      for (int k = 0; k < cfg.n_sub; ++k) {
        std::size_t ku = static_cast<std::size_t>(k);
        double m_abs = std::hypot(mean_re[ku], mean_im[ku]);
        double i1 = chan.normal();
        double i2 = chan.normal();
        double sig = cfg.csi_fading_sigma * m_abs *
                     std::sqrt(1.0 - cfg.csi_fading_rho * cfg.csi_fading_rho);
        ar_re[ku] = cfg.csi_fading_rho * ar_re[ku] + sig * i1;
        ar_im[ku] = cfg.csi_fading_rho * ar_im[ku] + sig * i2;
        double re = mean_re[ku] + ar_re[ku];
        double im = mean_im[ku] + ar_im[ku];
        if (extra_phase != nullptr) {
          double beat = (*extra_phase)[ku] + cfg.attack_csi_beat * static_cast<double>(t - win_start);
          re += ramp * cfg.attack_csi_amp_frac * m_abs * std::cos(beat);
          im += ramp * cfg.attack_csi_amp_frac * m_abs * std::sin(beat);
        }
        // Apply the accumulated carrier rotation.
        fr.csi.re[ku] = re * cosr - im * sinr;
        fr.csi.im[ku] = re * sinr + im * cosr;
      }

      // SNR through the power ratio: baseline power times the ramped drop.
      double base_db = tp.snr_mean_db + snr_offset + snr_ar + com;
      double ps = std::pow(10.0, base_db / 10.0);
      double drop_scale = std::pow(10.0, -ramp * cfg.attack_snr_drop_db / 10.0);
      fr.snr_db = snr_db(ps * drop_scale, 1.0);

      // BER -> PER.
      double ber = tp.ber_base * std::exp(cfg.ber_log_sigma * ber_ar);
      ber *= 1.0 + (cfg.attack_ber_mult - 1.0) * ramp;
      ber = std::min(1.0, ber);
      fr.per = per_from_ber(ber, cfg.packet_bits);

      // Latency: lognormal wander, shared environment tilt, ramped shift and
      // extra jitter under attack.
      double lat = tp.latency_mean_ms * lat_factor * std::exp(cfg.latency_log_sigma * lat_ar);
      if (nd.wireless) lat *= std::exp(0.02 * com);
      lat += cfg.latency_jitter_frac * tp.latency_mean_ms * std::fabs(lat_jit);
      lat *= 1.0 + ramp * cfg.attack_latency_shift;
      lat += ramp * cfg.attack_latency_jitter * tp.latency_mean_ms * std::fabs(atk_jit);
      fr.latency_ms = lat;

      // Transmission attempts per delivery: geometric in the loss rate via
      // one inverse-CDF draw, capped to keep the tail sane.
      double u = tx.uniform();
      int attempts = 1;
      if (fr.per >= 1.0) {
        attempts = 16;
      } else if (fr.per > 0.0) {
        double extra = std::floor(std::log1p(-u) / std::log(fr.per));
        attempts = 1 + static_cast<int>(std::min(extra, 15.0));
      }
      fr.tx_count = std::min(attempts, 16);

      // Application transmissions arrive as a Bernoulli process.
      bool sent = events.uniform() < cfg.tx_event_prob;
      since_tx = sent ? 0 : since_tx + 1;
      fr.time_since_last_tx = since_tx;

      if (!std::isfinite(fr.snr_db) || !std::isfinite(fr.latency_ms) || fr.latency_ms <= 0.0 ||
          fr.per < 0.0 || fr.per > 1.0)
        throw NumericError("telemetry frame out of range at node " + std::to_string(node) +
                           " t " + std::to_string(t));
      stream.push_back(std::move(fr));
    }
  }
  return out;
}

}  // namespace gridwatch
