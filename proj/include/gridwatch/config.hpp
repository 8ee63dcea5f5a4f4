#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridwatch/encoder.hpp"
#include "gridwatch/eval.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/fedtrain.hpp"
#include "gridwatch/telemetry.hpp"
#include "gridwatch/textio.hpp"

namespace gridwatch {

// ---- key registry -------------------------------------------------------------

enum class KeyType : std::uint8_t { Int, Real, Bool, Text };

struct KeySpec {
  const char* key;
  KeyType type;
  const char* default_value;
  const char* help;
};

// Every run knob, one flat key per line in config files; section prefixes
// group the keys by consuming stage. Values shown here are the run defaults.
inline const std::vector<KeySpec>& config_registry() {
  static const std::vector<KeySpec> kRegistry = {
      {"run.seed", KeyType::Int, "7", "master seed; every random stream derives from it"},
      {"run.out", KeyType::Text, "runs/default", "output directory for the invoked stage"},
      {"run.force", KeyType::Bool, "false", "allow writing into a non-empty output directory"},
      {"run.dataset", KeyType::Text, "", "dataset directory consumed by train/evaluate/sweep"},
      {"run.checkpoint", KeyType::Text, "", "checkpoint directory consumed by evaluate/sweep"},

      {"generator.n_sub", KeyType::Int, "16", "subcarriers per CSI snapshot"},
      {"generator.t_total", KeyType::Int, "5000", "timeline length in timesteps"},
      {"generator.t_symb_s", KeyType::Real, "0.0001", "symbol duration, seconds"},
      {"generator.f_off_max_hz", KeyType::Real, "40", "per-node carrier offset bound, Hz"},
      {"generator.packet_bits", KeyType::Int, "1024", "packet length for PER computation"},
      {"generator.csi_fading_rho", KeyType::Real, "0.95", "CSI fading AR(1) coefficient"},
      {"generator.csi_fading_sigma", KeyType::Real, "0.02",
       "CSI fading innovation scale, fraction of subcarrier mean"},
      {"generator.snr_ar_rho", KeyType::Real, "0.9", "SNR wander AR(1) coefficient"},
      {"generator.snr_ar_sigma", KeyType::Real, "0.35", "SNR wander scale, dB"},
      {"generator.common_snr_sigma", KeyType::Real, "0.6",
       "shared wireless environment scale, dB"},
      {"generator.ber_log_sigma", KeyType::Real, "0.3", "BER lognormal wander scale"},
      {"generator.latency_log_sigma", KeyType::Real, "0.06", "latency lognormal wander scale"},
      {"generator.latency_jitter_frac", KeyType::Real, "0.04",
       "baseline latency jitter, fraction of mean"},
      {"generator.tx_event_prob", KeyType::Real, "0.25", "per-step transmission probability"},
      {"generator.attack_snr_drop_db", KeyType::Real, "1.5", "attack SNR drop at full ramp, dB"},
      {"generator.attack_ber_mult", KeyType::Real, "3", "attack BER multiplier at full ramp"},
      {"generator.attack_latency_shift", KeyType::Real, "0.1",
       "attack latency shift, fraction of baseline mean"},
      {"generator.attack_latency_jitter", KeyType::Real, "0.05",
       "attack extra latency jitter, fraction of baseline mean"},
      {"generator.attack_csi_amp_frac", KeyType::Real, "0.05",
       "attack extra-path amplitude, fraction of subcarrier mean"},
      {"generator.attack_phase_bias_hz", KeyType::Real, "15",
       "attack carrier-offset bias, Hz"},
      {"generator.attack_csi_beat", KeyType::Real, "0.7",
       "attack extra-path rotation, radians per timestep"},
      {"generator.coverage_target", KeyType::Real, "0.3",
       "labeled fraction of wireless timelines"},
      {"generator.coverage_tol", KeyType::Real, "0.005", "allowed coverage deviation"},
      {"generator.ramp_len", KeyType::Int, "10", "attack onset ramp length, timesteps"},
      {"generator.min_window", KeyType::Int, "30", "shortest attack window"},
      {"generator.max_window", KeyType::Int, "80", "longest attack window"},
      {"generator.min_gap", KeyType::Int, "15", "minimum gap between windows on one node"},
      {"generator.tech.zigbee.snr_mean_db", KeyType::Real, "22", "ZigBee baseline SNR, dB"},
      {"generator.tech.zigbee.latency_mean_ms", KeyType::Real, "12", "ZigBee baseline latency"},
      {"generator.tech.zigbee.ber_base", KeyType::Real, "0.0004", "ZigBee baseline BER"},
      {"generator.tech.plc.snr_mean_db", KeyType::Real, "18", "PLC baseline SNR, dB"},
      {"generator.tech.plc.latency_mean_ms", KeyType::Real, "8", "PLC baseline latency"},
      {"generator.tech.plc.ber_base", KeyType::Real, "0.0008", "PLC baseline BER"},
      {"generator.tech.lte.snr_mean_db", KeyType::Real, "28", "LTE baseline SNR, dB"},
      {"generator.tech.lte.latency_mean_ms", KeyType::Real, "25", "LTE baseline latency"},
      {"generator.tech.lte.ber_base", KeyType::Real, "0.0001", "LTE baseline BER"},
      {"generator.tech.fiber.snr_mean_db", KeyType::Real, "38", "fiber baseline SNR, dB"},
      {"generator.tech.fiber.latency_mean_ms", KeyType::Real, "2", "fiber baseline latency"},
      {"generator.tech.fiber.ber_base", KeyType::Real, "0.00001", "fiber baseline BER"},

      {"split.train_ratio", KeyType::Real, "0.7", "training fraction of the timeline"},
      {"split.val_ratio", KeyType::Real, "0.15", "validation fraction of the timeline"},
      {"split.buffer_len", KeyType::Int, "5", "attack-free buffer after each boundary"},

      {"features.window", KeyType::Int, "9", "sliding window length W"},
      {"features.stride", KeyType::Int, "1", "sliding window stride"},
      {"features.derived", KeyType::Bool, "true", "include trailing shape statistics"},
      {"features.neighbor", KeyType::Bool, "true", "include neighbor features"},
      {"features.metadata", KeyType::Bool, "true", "include node metadata one-hots"},

      {"model.arch", KeyType::Text, "full",
       "architecture: full, gru_only, gcn_only or no_graph"},
      {"model.hidden", KeyType::Int, "128", "fused block width H"},
      {"model.gru_hidden", KeyType::Int, "192", "GRU width per direction"},
      {"model.gru_layers", KeyType::Int, "2", "stacked bidirectional GRU layers"},
      {"model.dropout_gcn", KeyType::Real, "0.2", "dropout after each graph convolution"},
      {"model.dropout_gru", KeyType::Real, "0.2", "dropout between GRU layers"},

      {"train.rounds", KeyType::Int, "10", "federated rounds R"},
      {"train.local_epochs", KeyType::Int, "1", "local epochs per round"},
      {"train.mu", KeyType::Real, "0.01", "proximal strength; 0 recovers plain averaging"},
      {"train.lr", KeyType::Real, "0.001", "Adam learning rate"},
      {"train.batch_size", KeyType::Int, "64", "minibatch size"},
      {"train.fraction_fit", KeyType::Real, "1", "participating client fraction (must be 1)"},
      {"train.alpha", KeyType::Real, "0.7", "timestep loss weight"},
      {"train.lambda_seq", KeyType::Real, "0.2", "window loss weight"},
      {"train.k_top", KeyType::Int, "3", "top-k pooling size (capped at W)"},
      {"train.weight_decay", KeyType::Real, "0.00005", "L2 penalty coefficient"},
      {"train.clip_norm", KeyType::Real, "1", "global gradient norm bound"},
      {"train.centralized", KeyType::Bool, "false",
       "train one pooled model instead of federating"},

      {"eval.tau", KeyType::Real, "0.55", "timestep decision threshold"},
      {"eval.m", KeyType::Int, "2", "sequence rule run length"},
      {"eval.mode", KeyType::Text, "consecutive", "sequence rule: consecutive or any"},
      {"eval.split", KeyType::Text, "test", "split evaluated by the evaluate stage"},

      {"sweep.tau_min", KeyType::Real, "0.4", "sweep threshold grid start"},
      {"sweep.tau_max", KeyType::Real, "0.7", "sweep threshold grid end (inclusive)"},
      {"sweep.tau_step", KeyType::Real, "0.05", "sweep threshold grid step"},
      {"sweep.m_min", KeyType::Int, "1", "sweep run-length grid start"},
      {"sweep.m_max", KeyType::Int, "4", "sweep run-length grid end (inclusive)"},
  };
  return kRegistry;
}

// ---- run configuration -----------------------------------------------------------

// Holds canonical text values for every registered key. Typed views are
// materialized on demand; validation lives with the consuming module types.
class RunConfig {
 public:
  static RunConfig defaults() {
    RunConfig rc;
    // Through set() so stored text is in canonical number form.
    for (const KeySpec& ks : config_registry()) rc.set(ks.key, ks.default_value);
    return rc;
  }

  void set(const std::string& key, const std::string& value) {
    const KeySpec* ks = find(key);
    if (ks == nullptr) throw ConfigError("unknown config key: " + key);
    try {
      switch (ks->type) {
        case KeyType::Int: values_[key] = format_int(parse_int(value)); break;
        case KeyType::Real: values_[key] = format_real(parse_real(value)); break;
        case KeyType::Bool: values_[key] = format_bool(parse_bool(value)); break;
        case KeyType::Text: values_[key] = value; break;
      }
    } catch (const DomainError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key: " + key);
    return it->second;
  }

  std::int64_t get_int(const std::string& key) const { return parse_int(get(key)); }
  double get_real(const std::string& key) const { return parse_real(get(key)); }
  bool get_bool(const std::string& key) const { return parse_bool(get(key)); }

  // One "key value" line per registered key, registry order. This text is
  // both the config file format and the manifest echo.
  std::string serialize() const {
    std::ostringstream os;
    for (const KeySpec& ks : config_registry()) {
      const std::string& v = values_.at(ks.key);
      os << ks.key;
      if (!v.empty()) os << " " << v;
      os << "\n";
    }
    return os.str();
  }

  // Parses config text: blank lines and '#' comments ignored; each other line
  // is "key value" with the value running to end of line. A key with no value
  // sets the empty string, which only text keys accept.
  void apply_text(const std::string& text, const std::string& origin) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string::npos || line[start] == '#') continue;
      std::size_t sep = line.find_first_of(" \t\r", start);
      std::string key = line.substr(start, sep == std::string::npos ? line.size() - start
                                                                    : sep - start);
      std::string value;
      if (sep != std::string::npos) {
        std::size_t vstart = line.find_first_not_of(" \t", sep);
        std::size_t vend = line.find_last_not_of(" \t\r");
        if (vstart != std::string::npos && vstart <= vend)
          value = line.substr(vstart, vend - vstart + 1);
      }
      try {
        set(key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  // ---- typed views -----------------------------------------------------------

  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("run.seed")); }
  std::string out_dir() const { return get("run.out"); }
  bool force() const { return get_bool("run.force"); }
  std::string dataset_dir() const { return get("run.dataset"); }
  std::string checkpoint_dir() const { return get("run.checkpoint"); }
  bool centralized() const { return get_bool("train.centralized"); }
  int window() const { return static_cast<int>(get_int("features.window")); }
  int stride() const { return static_cast<int>(get_int("features.stride")); }

  GeneratorConfig generator() const {
    GeneratorConfig gc;
    gc.n_sub = static_cast<int>(get_int("generator.n_sub"));
    gc.t_total = static_cast<int>(get_int("generator.t_total"));
    gc.seed = seed();
    gc.t_symb_s = get_real("generator.t_symb_s");
    gc.f_off_max_hz = get_real("generator.f_off_max_hz");
    gc.packet_bits = static_cast<int>(get_int("generator.packet_bits"));
    const char* tech_names[kTechnologyCount] = {"zigbee", "plc", "lte", "fiber"};
    for (int i = 0; i < kTechnologyCount; ++i) {
      std::string p = std::string("generator.tech.") + tech_names[i] + ".";
      gc.tech[i].snr_mean_db = get_real(p + "snr_mean_db");
      gc.tech[i].latency_mean_ms = get_real(p + "latency_mean_ms");
      gc.tech[i].ber_base = get_real(p + "ber_base");
    }
    gc.csi_fading_rho = get_real("generator.csi_fading_rho");
    gc.csi_fading_sigma = get_real("generator.csi_fading_sigma");
    gc.snr_ar_rho = get_real("generator.snr_ar_rho");
    gc.snr_ar_sigma = get_real("generator.snr_ar_sigma");
    gc.common_snr_sigma = get_real("generator.common_snr_sigma");
    gc.ber_log_sigma = get_real("generator.ber_log_sigma");
    gc.latency_log_sigma = get_real("generator.latency_log_sigma");
    gc.latency_jitter_frac = get_real("generator.latency_jitter_frac");
    gc.tx_event_prob = get_real("generator.tx_event_prob");
    gc.attack_snr_drop_db = get_real("generator.attack_snr_drop_db");
    gc.attack_ber_mult = get_real("generator.attack_ber_mult");
    gc.attack_latency_shift = get_real("generator.attack_latency_shift");
    gc.attack_latency_jitter = get_real("generator.attack_latency_jitter");
    gc.attack_csi_amp_frac = get_real("generator.attack_csi_amp_frac");
    gc.attack_phase_bias_hz = get_real("generator.attack_phase_bias_hz");
    gc.attack_csi_beat = get_real("generator.attack_csi_beat");
    gc.coverage_target = get_real("generator.coverage_target");
    gc.coverage_tol = get_real("generator.coverage_tol");
    gc.ramp_len = static_cast<int>(get_int("generator.ramp_len"));
    gc.min_window = static_cast<int>(get_int("generator.min_window"));
    gc.max_window = static_cast<int>(get_int("generator.max_window"));
    gc.min_gap = static_cast<int>(get_int("generator.min_gap"));
    return gc;
  }

  SplitSpec split() const {
    SplitSpec ss;
    ss.train_ratio = get_real("split.train_ratio");
    ss.val_ratio = get_real("split.val_ratio");
    ss.buffer_len = static_cast<int>(get_int("split.buffer_len"));
    return ss;
  }

  FeatureFlags features() const {
    FeatureFlags ff;
    ff.derived = get_bool("features.derived");
    ff.neighbor = get_bool("features.neighbor");
    ff.metadata = get_bool("features.metadata");
    return ff;
  }

  ArchMode arch() const {
    const std::string& a = get("model.arch");
    if (a == "full") return ArchMode::Full;
    if (a == "gru_only") return ArchMode::GruOnly;
    if (a == "gcn_only") return ArchMode::GcnOnly;
    if (a == "no_graph") return ArchMode::NoGraph;
    throw ConfigError("model.arch must be full, gru_only, gcn_only or no_graph; got '" + a + "'");
  }

  EncoderConfig encoder() const {
    EncoderConfig ec;
    FeatureFlags ff = features();
    ec.f_raw = ff.derived ? kRawFeatureCount + kDerivedFeatureCount : kRawFeatureCount;
    ec.f_nbr = kNeighborFeatureCount;
    ec.meta_dim = kMetadataDim;
    ec.hidden = static_cast<int>(get_int("model.hidden"));
    ec.gru_hidden = static_cast<int>(get_int("model.gru_hidden"));
    ec.gru_layers = static_cast<int>(get_int("model.gru_layers"));
    ec.dropout_gcn = get_real("model.dropout_gcn");
    ec.dropout_gru = get_real("model.dropout_gru");
    ec.arch = arch();
    ec.use_neighbor = ff.neighbor;
    ec.use_metadata = ff.metadata;
    return ec;
  }

  LossConfig loss() const {
    LossConfig lc;
    lc.alpha = get_real("train.alpha");
    lc.lambda_seq = get_real("train.lambda_seq");
    lc.k_top = static_cast<int>(get_int("train.k_top"));
    lc.lambda_wd = get_real("train.weight_decay");
    lc.clip_norm = get_real("train.clip_norm");
    return lc;
  }

  FedConfig fed() const {
    FedConfig fc;
    fc.rounds = static_cast<int>(get_int("train.rounds"));
    fc.local_epochs = static_cast<int>(get_int("train.local_epochs"));
    fc.mu = get_real("train.mu");
    fc.lr = get_real("train.lr");
    fc.batch_size = static_cast<int>(get_int("train.batch_size"));
    fc.fraction_fit = get_real("train.fraction_fit");
    fc.seed = seed();
    return fc;
  }

  DecisionRule rule() const {
    DecisionRule dr;
    dr.tau = get_real("eval.tau");
    dr.m = static_cast<int>(get_int("eval.m"));
    const std::string& mode = get("eval.mode");
    if (mode == "consecutive") dr.mode = SequenceRuleMode::Consecutive;
    else if (mode == "any") dr.mode = SequenceRuleMode::Any;
    else throw ConfigError("eval.mode must be consecutive or any; got '" + mode + "'");
    return dr;
  }

  Split eval_split() const {
    const std::string& s = get("eval.split");
    if (s == "train") return Split::Train;
    if (s == "val") return Split::Val;
    if (s == "test") return Split::Test;
    throw ConfigError("eval.split must be train, val or test; got '" + s + "'");
  }

  std::vector<double> sweep_taus() const {
    double lo = get_real("sweep.tau_min");
    double hi = get_real("sweep.tau_max");
    double step = get_real("sweep.tau_step");
    if (step <= 0.0 || hi < lo) throw ConfigError("sweep threshold grid is empty or inverted");
    std::vector<double> out;
    for (int i = 0;; ++i) {
      double tau = lo + step * i;
      if (tau > hi + 1e-12) break;
      out.push_back(tau);
    }
    return out;
  }

  std::vector<int> sweep_ms() const {
    int lo = static_cast<int>(get_int("sweep.m_min"));
    int hi = static_cast<int>(get_int("sweep.m_max"));
    if (lo < 1 || hi < lo) throw ConfigError("sweep run-length grid is empty or inverted");
    std::vector<int> out;
    for (int m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }

 private:
  static const KeySpec* find(const std::string& key) {
    for (const KeySpec& ks : config_registry())
      if (key == ks.key) return &ks;
    return nullptr;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace gridwatch
