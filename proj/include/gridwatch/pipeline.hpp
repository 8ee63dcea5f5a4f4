#pragma once

// Stage drivers behind the command-line tool. Each run_* function takes a
// fully resolved RunConfig, produces its artifacts under run.out, and returns
// a small summary for callers that want the numbers without re-reading files.
//
// Shared conventions:
//   - an output directory is claimed up front: non-empty dirs are refused
//     unless run.force is set, in which case the old contents are removed;
//   - manifest.txt is the first file written, checksums.txt the last;
//   - run.log collects timestamped progress lines and is excluded from
//     checksums, as is round_log.txt (wall-clock times are not reproducible).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/config.hpp"
#include "gridwatch/dataset_io.hpp"
#include "gridwatch/encoder.hpp"
#include "gridwatch/errors.hpp"
#include "gridwatch/eval.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/fedserver.hpp"
#include "gridwatch/fedtrain.hpp"
#include "gridwatch/telemetry.hpp"
#include "gridwatch/topology.hpp"

namespace gridwatch {

inline std::pair<int, int> segment_range(const SplitBounds& b, Split s) {
  switch (s) {
    case Split::Train: return {b.train_begin, b.train_end};
    case Split::Val: return {b.val_begin, b.val_end};
    case Split::Test: return {b.test_begin, b.test_end};
    default: throw DomainError("buffers are not a window source");
  }
}

inline int segment_len(const SplitBounds& b, Split s) {
  auto [lo, hi] = segment_range(b, s);
  return hi - lo + 1;
}

inline void claim_out_dir(const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!force)
      throw PreconditionError("output directory " + dir.string() +
                              " is not empty; set run.force=true to overwrite");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOutput {
  std::filesystem::path dir;
  double coverage = 0.0;
  std::vector<std::string> warnings;
};

inline GenerateOutput run_generate(const RunConfig& cfg) {
  const std::filesystem::path out = cfg.out_dir();
  claim_out_dir(out, cfg.force());
  append_run_log(out, "generate: start");

  const GridTopology topo = default_topology();
  GeneratorConfig gc = cfg.generator();
  const SplitBounds bounds = compute_split(cfg.split(), gc.t_total);
  gc.no_attack_zones = bounds.buffers;

  std::vector<std::string> warnings;
  SimResult sim = simulate(topo, gc, &warnings);

  DatasetManifest man;
  man.config = cfg;
  man.topology = topo;
  man.schedule = sim.schedule;
  man.warnings = warnings;
  write_text_file(out / "manifest.txt", serialize_dataset_manifest(man));

  for (int n = 0; n < topo.size(); ++n)
    write_text_file(out / frame_file_name(n),
                    serialize_frames(sim.frames[static_cast<std::size_t>(n)]));

  const FeatureFlags flags = cfg.features();
  const std::vector<ClientData> clients =
      build_client_data(sim.frames, topo, bounds, cfg.window(), flags);
  for (const ClientData& cd : clients) {
    write_text_file(out / feature_file_name(cd.ego), serialize_feature_table(cd, flags));
    if (cd.K > 0)
      write_text_file(out / neighbor_file_name(cd.ego), serialize_neighbor_table(cd));
  }

  write_checksums(out);
  append_run_log(out, "generate: done");

  GenerateOutput res;
  res.dir = out;
  res.warnings = warnings;
  std::int64_t attacked = 0;
  std::int64_t eligible = 0;
  for (int n = 0; n < topo.size(); ++n) {
    if (!is_wireless(topo.node(n).technology)) continue;  // wired nodes are never attacked
    for (const TelemetryFrame& fr : sim.frames[static_cast<std::size_t>(n)]) {
      ++eligible;
      attacked += fr.label;
    }
  }
  res.coverage = eligible > 0 ? static_cast<double>(attacked) / static_cast<double>(eligible) : 0.0;
  return res;
}

// ---------------------------------------------------------------------------
// shared train/evaluate plumbing

// Per-client window sets, keyed by ego node id in ascending order.
struct WindowSets {
  std::vector<int> egos;
  std::map<int, std::vector<WindowSample>> train;
  std::map<int, std::vector<WindowSample>> val;
  std::map<int, std::vector<WindowSample>> test;
  std::vector<std::string> warnings;

  std::map<int, std::vector<WindowSample>>& of(Split s) {
    switch (s) {
      case Split::Train: return train;
      case Split::Val: return val;
      default: return test;
    }
  }
};

inline WindowSets build_window_sets(const std::vector<std::vector<TelemetryFrame>>& frames,
                                    const GridTopology& topo, const SplitBounds& bounds, int window,
                                    int stride, const FeatureFlags& flags) {
  const std::vector<ClientData> clients = build_client_data(frames, topo, bounds, window, flags);
  WindowSets ws;
  std::vector<WindowSample> all = make_windows(clients, bounds, window, stride, flags, &ws.warnings);
  for (const ClientData& cd : clients) ws.egos.push_back(cd.ego);
  for (int ego : ws.egos) {
    ws.train[ego] = {};
    ws.val[ego] = {};
    ws.test[ego] = {};
  }
  for (WindowSample& w : all) {
    switch (w.split) {
      case Split::Train: ws.train[w.ego].push_back(std::move(w)); break;
      case Split::Val: ws.val[w.ego].push_back(std::move(w)); break;
      case Split::Test: ws.test[w.ego].push_back(std::move(w)); break;
    }
  }
  return ws;
}

inline std::size_t count_windows(const std::map<int, std::vector<WindowSample>>& m) {
  std::size_t n = 0;
  for (const auto& [ego, v] : m) n += v.size();
  return n;
}

// Training and evaluation recompute features from the frame files; the dataset
// must therefore have been generated with the same generator and split
// settings the run expects, and from the same seed.
inline void require_dataset_match(const RunConfig& cfg, const RunConfig& dataset_cfg) {
  std::vector<std::string> mismatched;
  for (const KeySpec& ks : config_registry()) {
    const std::string key = ks.key;
    const bool checked =
        key.rfind("generator.", 0) == 0 || key.rfind("split.", 0) == 0 || key == "run.seed";
    if (checked && cfg.get(key) != dataset_cfg.get(key)) mismatched.push_back(key);
  }
  if (!mismatched.empty()) {
    std::string msg = "config disagrees with the dataset manifest on:";
    for (const std::string& k : mismatched) msg += " " + k;
    throw PreconditionError(msg);
  }
}

inline std::string dataset_digest(const std::filesystem::path& dataset_dir) {
  return digest_hex(read_text_file(dataset_dir / kChecksumFile));
}

// Keys that determine checkpoint content: everything the dataset depends on
// plus the model and training settings.
inline bool checkpoint_config_key(const std::string& key) {
  return dataset_config_key(key) || key.rfind("model.", 0) == 0 || key.rfind("train.", 0) == 0;
}

// Keys a checkpoint carries so that evaluation can rebuild the feature
// pipeline and encoder without the original config file.
inline const std::vector<std::string>& checkpoint_config_keys() {
  static const std::vector<std::string> keys = {
      "run.seed",          "features.window",     "features.stride",
      "features.derived",  "features.neighbor",   "features.metadata",
      "model.arch",        "model.hidden",        "model.gru_hidden",
      "model.gru_layers",  "model.dropout_gcn",   "model.dropout_gru",
      "train.batch_size",  "train.centralized",
  };
  return keys;
}

inline std::string meta_get(const Checkpoint& ck, const std::string& key) {
  for (const auto& [k, v] : ck.meta)
    if (k == key) return v;
  throw PreconditionError("checkpoint is missing metadata key " + key);
}

// ---------------------------------------------------------------------------
// train

struct TrainOutput {
  std::filesystem::path dir;
  FederatedResult result;
  int n_clients = 0;
};

namespace detail {

inline std::vector<int> segment_labels(const ClientData& cd, const SplitBounds& bounds, Split s) {
  auto [lo, hi] = segment_range(bounds, s);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int t = lo; t <= hi; ++t) out.push_back(cd.labels[static_cast<std::size_t>(t)]);
  return out;
}

}  // namespace detail

inline TrainOutput run_train(const RunConfig& cfg) {
  if (cfg.dataset_dir().empty()) throw ConfigError("train requires run.dataset");
  const std::filesystem::path ds_dir = cfg.dataset_dir();
  const std::filesystem::path out = cfg.out_dir();
  if (std::filesystem::weakly_canonical(out) == std::filesystem::weakly_canonical(ds_dir))
    throw PreconditionError("output directory equals the dataset directory");

  const Dataset ds = load_dataset(ds_dir);
  require_dataset_match(cfg, ds.manifest.config);
  const std::string ds_digest = dataset_digest(ds_dir);

  claim_out_dir(out, cfg.force());
  {
    // The checkpoint manifest carries only content-determining keys, like the
    // dataset manifest: paths and other operational knobs would make equal
    // checkpoints compare unequal. The dataset is referenced by its content
    // digest, not by where it happened to live.
    std::ostringstream man;
    man << "format " << kRunFormat << "\n";
    man << "stage train\n";
    man << "dataset_digest " << ds_digest << "\n";
    man << "[config]\n";
    for (const KeySpec& ks : config_registry()) {
      if (!checkpoint_config_key(ks.key)) continue;
      const std::string& v = cfg.get(ks.key);
      man << ks.key;
      if (!v.empty()) man << " " << v;
      man << "\n";
    }
    write_text_file(out / "manifest.txt", man.str());
  }
  append_run_log(out, "train: start");

  const SplitBounds bounds = compute_split(cfg.split(), cfg.generator().t_total);
  const FeatureFlags flags = cfg.features();
  WindowSets ws = build_window_sets(ds.frames, ds.manifest.topology, bounds, cfg.window(),
                                    cfg.stride(), flags);

  // Every client needs training windows and the pool needs validation windows,
  // otherwise there is nothing to fit or to select the best round with.
  for (int ego : ws.egos)
    if (ws.train[ego].empty())
      throw PreconditionError("client " + std::to_string(ego) +
                              " has no training windows: train segment holds " +
                              std::to_string(segment_len(bounds, Split::Train)) +
                              " timesteps but the window length is " +
                              std::to_string(cfg.window()));
  if (count_windows(ws.val) == 0)
    throw PreconditionError("no validation windows: val segment holds " +
                            std::to_string(segment_len(bounds, Split::Val)) +
                            " timesteps but the window length is " + std::to_string(cfg.window()));

  const EncoderConfig enc = cfg.encoder();
  LossConfig loss = cfg.loss();
  FedConfig fed = cfg.fed();
  const DecisionRule rule = cfg.rule();

  const std::vector<ClientData> clients =
      build_client_data(ds.frames, ds.manifest.topology, bounds, cfg.window(), flags);
  std::map<int, const ClientData*> by_ego;
  for (const ClientData& cd : clients) by_ego[cd.ego] = &cd;

  std::vector<std::string> warnings = ws.warnings;
  std::vector<std::unique_ptr<ClientTrainer>> trainers;
  if (cfg.centralized()) {
    // Pooled baseline: all clients' windows feed one trainer, class balance is
    // computed globally, and the proximal pull is dropped because there is no
    // separate global model to pull toward.
    fed.mu = 0.0;
    std::vector<int> all_labels;
    std::vector<WindowSample> train_pool;
    std::vector<WindowSample> val_pool;
    for (int ego : ws.egos) {
      const std::vector<int> seg = detail::segment_labels(*by_ego.at(ego), bounds, Split::Train);
      all_labels.insert(all_labels.end(), seg.begin(), seg.end());
      for (WindowSample& w : ws.train[ego]) train_pool.push_back(std::move(w));
      for (WindowSample& w : ws.val[ego]) val_pool.push_back(std::move(w));
    }
    const ClassWeights cw = class_weights(all_labels, &warnings);
    trainers.push_back(std::make_unique<ClientTrainer>(0, enc, loss, fed, rule, cw,
                                                       std::move(train_pool), std::move(val_pool)));
  } else {
    for (int ego : ws.egos) {
      const ClassWeights cw =
          class_weights(detail::segment_labels(*by_ego.at(ego), bounds, Split::Train), &warnings);
      trainers.push_back(std::make_unique<ClientTrainer>(ego, enc, loss, fed, rule, cw,
                                                         std::move(ws.train[ego]),
                                                         std::move(ws.val[ego])));
    }
  }
  std::vector<FederatedClient*> handles;
  for (auto& t : trainers) handles.push_back(t.get());

  append_run_log(out, "train: " + std::to_string(handles.size()) + " clients, " +
                          std::to_string(fed.rounds) + " rounds");
  FederatedResult result = run_rounds(handles, init_encoder_params(enc, cfg.seed()), fed.rounds);
  for (const RoundRecord& rr : result.log)
    append_run_log(out, "train: round " + std::to_string(rr.round) + " done");

  Checkpoint ck;
  ck.params = result.best;
  for (const std::string& key : checkpoint_config_keys()) ck.meta.emplace_back(key, cfg.get(key));
  ck.meta.emplace_back("dataset_digest", ds_digest);
  ck.meta.emplace_back("best_round", format_int(result.best_round));
  ck.meta.emplace_back("best_val_accuracy", format_real(result.best_val_accuracy));
  for (const std::string& w : warnings) ck.meta.emplace_back("warning", w);
  save_checkpoint(out, ck);

  write_text_file(out / kRoundLogFile, serialize_round_log(result.log));
  write_checksums(out);
  append_run_log(out, "train: done, best round " + std::to_string(result.best_round));

  TrainOutput res;
  res.dir = out;
  res.result = std::move(result);
  res.n_clients = static_cast<int>(handles.size());
  return res;
}

// ---------------------------------------------------------------------------
// evaluate

// Everything evaluation needs, reconstructed from a checkpoint plus the
// dataset it was trained on.
struct LoadedModel {
  Checkpoint ck;
  EncoderConfig enc;
  FeatureFlags flags;
  int window = 0;
  int stride = 0;
  int batch_size = 0;
  std::uint64_t seed = 0;
};

inline LoadedModel load_model(const std::filesystem::path& checkpoint_dir,
                              const std::filesystem::path& ds_dir) {
  LoadedModel lm;
  lm.ck = load_checkpoint(checkpoint_dir);
  const std::string want = meta_get(lm.ck, "dataset_digest");
  const std::string have = dataset_digest(ds_dir);
  if (want != have)
    throw PreconditionError("checkpoint was trained on a dataset with digest " + want +
                            " but " + ds_dir.string() + " has digest " + have);
  RunConfig rc = RunConfig::defaults();
  for (const std::string& key : checkpoint_config_keys()) rc.set(key, meta_get(lm.ck, key));
  lm.enc = rc.encoder();
  lm.flags = rc.features();
  lm.window = rc.window();
  lm.stride = rc.stride();
  lm.batch_size = static_cast<int>(rc.get_int("train.batch_size"));
  lm.seed = rc.seed();
  return lm;
}

inline std::vector<SequencePrediction> predict_split(const LoadedModel& lm, const Dataset& ds,
                                                     Split split) {
  const SplitBounds bounds =
      compute_split(ds.manifest.config.split(), ds.manifest.config.generator().t_total);
  WindowSets ws = build_window_sets(ds.frames, ds.manifest.topology, bounds, lm.window, lm.stride,
                                    lm.flags);
  std::vector<WindowSample> pool;
  for (int ego : ws.egos)
    for (WindowSample& w : ws.of(split)[ego]) pool.push_back(std::move(w));
  if (pool.empty())
    throw PreconditionError("no windows in the requested split: segment holds " +
                            std::to_string(segment_len(bounds, split)) +
                            " timesteps but the window length is " + std::to_string(lm.window));
  return predict_windows(pool, lm.ck.params, lm.enc, lm.batch_size);
}

struct EvaluateOutput {
  std::filesystem::path dir;
  MetricsReport report;
};

inline EvaluateOutput run_evaluate(const RunConfig& cfg) {
  if (cfg.dataset_dir().empty()) throw ConfigError("evaluate requires run.dataset");
  if (cfg.checkpoint_dir().empty()) throw ConfigError("evaluate requires run.checkpoint");
  const Dataset ds = load_dataset(cfg.dataset_dir());
  const LoadedModel lm = load_model(cfg.checkpoint_dir(), cfg.dataset_dir());

  const std::filesystem::path out = cfg.out_dir();
  claim_out_dir(out, cfg.force());
  {
    std::ostringstream man;
    man << "format " << kRunFormat << "\n";
    man << "stage evaluate\n";
    man << "dataset " << cfg.dataset_dir() << "\n";
    man << "dataset_digest " << dataset_digest(cfg.dataset_dir()) << "\n";
    man << "checkpoint " << cfg.checkpoint_dir() << "\n";
    man << "[config]\n" << cfg.serialize();
    write_text_file(out / "manifest.txt", man.str());
  }
  append_run_log(out, "evaluate: start");

  const std::vector<SequencePrediction> preds = predict_split(lm, ds, cfg.eval_split());
  const MetricsReport report = compute_metrics(preds, cfg.rule());
  write_text_file(out / "report.txt", serialize_report(report));
  write_text_file(out / "report_table.txt", format_report_table(report));
  write_checksums(out);
  append_run_log(out, "evaluate: done");

  EvaluateOutput res;
  res.dir = out;
  res.report = report;
  return res;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOutput {
  std::filesystem::path dir;
  std::vector<SweepRow> rows;
};

inline SweepOutput run_sweep(const RunConfig& cfg) {
  if (cfg.dataset_dir().empty()) throw ConfigError("sweep requires run.dataset");
  if (cfg.checkpoint_dir().empty()) throw ConfigError("sweep requires run.checkpoint");
  const Dataset ds = load_dataset(cfg.dataset_dir());
  const LoadedModel lm = load_model(cfg.checkpoint_dir(), cfg.dataset_dir());

  const std::filesystem::path out = cfg.out_dir();
  claim_out_dir(out, cfg.force());
  {
    std::ostringstream man;
    man << "format " << kRunFormat << "\n";
    man << "stage sweep\n";
    man << "dataset " << cfg.dataset_dir() << "\n";
    man << "dataset_digest " << dataset_digest(cfg.dataset_dir()) << "\n";
    man << "checkpoint " << cfg.checkpoint_dir() << "\n";
    man << "[config]\n" << cfg.serialize();
    write_text_file(out / "manifest.txt", man.str());
  }
  append_run_log(out, "sweep: start");

  // Probabilities are computed once; the grid only re-applies decision rules.
  const std::vector<SequencePrediction> preds = predict_split(lm, ds, cfg.eval_split());
  const std::vector<SweepRow> rows =
      sweep(preds, cfg.sweep_taus(), cfg.sweep_ms(), cfg.rule().mode);
  write_text_file(out / "sweep.csv", sweep_csv(rows));
  write_checksums(out);
  append_run_log(out, "sweep: done");

  SweepOutput res;
  res.dir = out;
  res.rows = rows;
  return res;
}

// ---------------------------------------------------------------------------
// ablate

struct AblationRow {
  std::string variant;
  double seq_f1 = 0.0;
  double seq_fpr = 0.0;
  double t_f1 = 0.0;
  double exact_rate = 0.0;
};

struct AblateOutput {
  std::filesystem::path dir;
  std::vector<AblationRow> rows;
};

inline std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant,seq_f1,seq_fpr,t_f1,exact_rate\n";
  for (const AblationRow& r : rows) {
    out += r.variant;
    out += ',';
    out += format_real(r.seq_f1);
    out += ',';
    out += format_real(r.seq_fpr);
    out += ',';
    out += format_real(r.t_f1);
    out += ',';
    out += format_real(r.exact_rate);
    out += '\n';
  }
  return out;
}

inline AblateOutput run_ablate(const RunConfig& cfg) {
  if (cfg.dataset_dir().empty()) throw ConfigError("ablate requires run.dataset");
  const std::filesystem::path out = cfg.out_dir();
  claim_out_dir(out, cfg.force());
  {
    std::ostringstream man;
    man << "format " << kRunFormat << "\n";
    man << "stage ablate\n";
    man << "dataset " << cfg.dataset_dir() << "\n";
    man << "dataset_digest " << dataset_digest(cfg.dataset_dir()) << "\n";
    man << "[config]\n" << cfg.serialize();
    write_text_file(out / "manifest.txt", man.str());
  }
  append_run_log(out, "ablate: start");

  // Each variant drops one input family and retrains from scratch with the
  // same seed, rounds, and dataset, so rows differ only in what the model saw.
  const std::vector<std::pair<std::string, std::string>> variants = {
      {"all_inputs", ""},
      {"no_metadata", "features.metadata"},
      {"no_derived", "features.derived"},
      {"no_neighbor", "features.neighbor"},
  };

  AblateOutput res;
  res.dir = out;
  for (const auto& [name, off_key] : variants) {
    RunConfig vcfg = cfg;
    vcfg.set("run.out", (out / name).string());
    vcfg.set("run.force", "false");
    if (!off_key.empty()) vcfg.set(off_key, "false");
    append_run_log(out, "ablate: training " + name);
    TrainOutput tr = run_train(vcfg);

    RunConfig ecfg = vcfg;
    ecfg.set("run.checkpoint", tr.dir.string());
    ecfg.set("run.out", (out / name / "eval").string());
    EvaluateOutput ev = run_evaluate(ecfg);

    AblationRow row;
    row.variant = name;
    row.seq_f1 = ev.report.global.sequence.f1();
    row.seq_fpr = ev.report.global.sequence.fpr();
    row.t_f1 = ev.report.global.timestep.f1();
    row.exact_rate = ev.report.global.exact_rate();
    res.rows.push_back(row);
  }

  write_text_file(out / "ablation.csv", ablation_csv(res.rows));
  append_run_log(out, "ablate: done");
  return res;
}

// ---------------------------------------------------------------------------
// report

// Renders a stored metrics report as a human-readable table. Accepts either
// the report file itself or the directory an evaluate run wrote it to.
inline std::string run_report(const std::filesystem::path& in) {
  namespace fs = std::filesystem;
  fs::path file = in;
  if (fs::is_directory(in)) file = in / "report.txt";
  if (!fs::exists(file)) throw PreconditionError("no report found at " + file.string());
  const MetricsReport report = parse_report(read_text_file(file));
  return format_report_table(report);
}

}  // namespace gridwatch
