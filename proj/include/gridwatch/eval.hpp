#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridwatch/errors.hpp"

namespace gridwatch {

// ---- decision rule -------------------------------------------------------------

enum class SequenceRuleMode : std::uint8_t { Consecutive, Any };

inline const char* to_string(SequenceRuleMode m) {
  return m == SequenceRuleMode::Consecutive ? "consecutive" : "any";
}

struct DecisionRule {
  double tau = 0.55;
  int m = 2;
  SequenceRuleMode mode = SequenceRuleMode::Consecutive;

  void validate() const {
    if (tau <= 0.0 || tau >= 1.0) throw DomainError("tau must lie in (0,1)");
    if (m < 1) throw DomainError("run length m must be >= 1");
  }
};

inline std::vector<int> decide_timesteps(const std::vector<double>& p, double tau) {
  if (tau <= 0.0 || tau >= 1.0) throw DomainError("tau must lie in (0,1)");
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] >= tau ? 1 : 0;
  return out;
}

inline int decide_sequence(const std::vector<int>& yhat, int m, SequenceRuleMode mode) {
  if (m < 1 || static_cast<std::size_t>(m) > yhat.size())
    throw DomainError("run length m out of range");
  if (mode == SequenceRuleMode::Any) {
    int count = 0;
    for (int v : yhat) count += v;
    return count >= m ? 1 : 0;
  }
  int run = 0;
  for (int v : yhat) {
    run = v ? run + 1 : 0;
    if (run >= m) return 1;
  }
  return 0;
}

inline int exact_match(const std::vector<int>& yhat, const std::vector<int>& y) {
  if (yhat.size() != y.size()) throw ShapeError("exact_match: length mismatch");
  return yhat == y ? 1 : 0;
}

// ---- metrics -------------------------------------------------------------------

// One evaluated window: the model's per-timestep attack probabilities and the
// ground-truth labels, tagged with the owning client.
struct SequencePrediction {
  int client = -1;
  std::vector<double> probs;
  std::vector<int> labels;
};

struct Confusion {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  double accuracy() const { return total() ? static_cast<double>(tp + tn) / total() : 0.0; }
  // Zero denominators are defined as 0 so degenerate splits stay reportable.
  double precision() const { return tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0; }
  double recall() const { return tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0; }
  double f1() const {
    double p = precision(), r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  double fpr() const { return fp + tn ? static_cast<double>(fp) / (fp + tn) : 0.0; }
  // The same statistics with class 0 treated as the positive class.
  double precision_neg() const { return tn + fn ? static_cast<double>(tn) / (tn + fn) : 0.0; }
  double recall_neg() const { return tn + fp ? static_cast<double>(tn) / (tn + fp) : 0.0; }
  double f1_neg() const {
    double p = precision_neg(), r = recall_neg();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
};

struct MetricsSection {
  Confusion timestep;
  Confusion sequence;
  std::int64_t exact = 0;
  std::int64_t windows = 0;

  double exact_rate() const { return windows ? static_cast<double>(exact) / windows : 0.0; }
};

struct MetricsReport {
  DecisionRule rule;
  MetricsSection global;
  std::map<int, MetricsSection> per_client;
};

inline MetricsReport compute_metrics(const std::vector<SequencePrediction>& preds,
                                     const DecisionRule& rule) {
  rule.validate();
  if (preds.empty()) throw PreconditionError("no windows to evaluate");
  MetricsReport rep;
  rep.rule = rule;
  for (const auto& pr : preds) {
    if (pr.probs.size() != pr.labels.size() || pr.probs.empty())
      throw ShapeError("prediction/label length mismatch");
    std::vector<int> yhat = decide_timesteps(pr.probs, rule.tau);
    int seq_hat = decide_sequence(yhat, std::min<int>(rule.m, static_cast<int>(yhat.size())),
                                  rule.mode);
    int seq_true = 0;
    for (int v : pr.labels) seq_true |= v;
    MetricsSection& cs = rep.per_client[pr.client];
    for (MetricsSection* s : {&rep.global, &cs}) {
      for (std::size_t t = 0; t < yhat.size(); ++t) {
        if (pr.labels[t] && yhat[t]) ++s->timestep.tp;
        else if (!pr.labels[t] && yhat[t]) ++s->timestep.fp;
        else if (!pr.labels[t] && !yhat[t]) ++s->timestep.tn;
        else ++s->timestep.fn;
      }
      if (seq_true && seq_hat) ++s->sequence.tp;
      else if (!seq_true && seq_hat) ++s->sequence.fp;
      else if (!seq_true && !seq_hat) ++s->sequence.tn;
      else ++s->sequence.fn;
      s->exact += exact_match(yhat, pr.labels);
      ++s->windows;
    }
  }
  return rep;
}

// ---- sweeps --------------------------------------------------------------------

struct SweepRow {
  double tau = 0.0;
  int m = 0;
  double seq_f1 = 0.0;
  double seq_fpr = 0.0;
  double seq_acc = 0.0;
  double exact_rate = 0.0;
};

inline std::vector<double> default_tau_grid() {
  return {0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70};
}
inline std::vector<int> default_m_grid() { return {1, 2, 3, 4}; }

// Re-thresholds cached probabilities over the grid; no model inference.
inline std::vector<SweepRow> sweep(const std::vector<SequencePrediction>& preds,
                                   const std::vector<double>& tau_grid,
                                   const std::vector<int>& m_grid, SequenceRuleMode mode) {
  if (tau_grid.empty() || m_grid.empty()) throw DomainError("sweep grids must be nonempty");
  std::vector<SweepRow> rows;
  for (double tau : tau_grid) {
    for (int m : m_grid) {
      DecisionRule rule{tau, m, mode};
      MetricsReport rep = compute_metrics(preds, rule);
      SweepRow r;
      r.tau = tau;
      r.m = m;
      r.seq_f1 = rep.global.sequence.f1();
      r.seq_fpr = rep.global.sequence.fpr();
      r.seq_acc = rep.global.sequence.accuracy();
      r.exact_rate = rep.global.exact_rate();
      rows.push_back(r);
    }
  }
  return rows;
}

// ---- serialization ----------------------------------------------------------------

namespace detail {

inline void emit_section(std::ostream& os, const std::string& prefix, const MetricsSection& s) {
  auto kv = [&](const std::string& k, double v) { os << prefix << k << " " << v << "\n"; };
  auto kc = [&](const std::string& k, std::int64_t v) { os << prefix << k << " " << v << "\n"; };
  kc("windows", s.windows);
  kc("t.tp", s.timestep.tp);
  kc("t.fp", s.timestep.fp);
  kc("t.tn", s.timestep.tn);
  kc("t.fn", s.timestep.fn);
  kv("t.accuracy", s.timestep.accuracy());
  kv("t.precision_attack", s.timestep.precision());
  kv("t.recall_attack", s.timestep.recall());
  kv("t.f1_attack", s.timestep.f1());
  kv("t.precision_normal", s.timestep.precision_neg());
  kv("t.recall_normal", s.timestep.recall_neg());
  kv("t.f1_normal", s.timestep.f1_neg());
  kc("s.tp", s.sequence.tp);
  kc("s.fp", s.sequence.fp);
  kc("s.tn", s.sequence.tn);
  kc("s.fn", s.sequence.fn);
  kv("s.accuracy", s.sequence.accuracy());
  kv("s.precision", s.sequence.precision());
  kv("s.recall", s.sequence.recall());
  kv("s.f1", s.sequence.f1());
  kv("s.fpr", s.sequence.fpr());
  kc("exact", s.exact);
  kv("exact_rate", s.exact_rate());
}

}  // namespace detail

// Machine-readable key/value form; floats printed with enough digits to
// round-trip exactly.
inline std::string serialize_report(const MetricsReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "rule.tau " << rep.rule.tau << "\n";
  os << "rule.m " << rep.rule.m << "\n";
  os << "rule.mode " << to_string(rep.rule.mode) << "\n";
  detail::emit_section(os, "global.", rep.global);
  for (const auto& [client, sec] : rep.per_client)
    detail::emit_section(os, "client." + std::to_string(client) + ".", sec);
  return os.str();
}

inline MetricsReport parse_report(const std::string& text) {
  std::istringstream is(text);
  std::string key;
  MetricsReport rep;
  std::string line;
  auto section_of = [&rep](const std::string& k, std::string& field) -> MetricsSection* {
    if (k.rfind("global.", 0) == 0) {
      field = k.substr(7);
      return &rep.global;
    }
    if (k.rfind("client.", 0) == 0) {
      std::size_t dot = k.find('.', 7);
      if (dot == std::string::npos) return nullptr;
      int id = std::stoi(k.substr(7, dot - 7));
      field = k.substr(dot + 1);
      return &rep.per_client[id];
    }
    return nullptr;
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string val;
    ls >> key >> val;
    if (key == "rule.tau") rep.rule.tau = std::stod(val);
    else if (key == "rule.m") rep.rule.m = std::stoi(val);
    else if (key == "rule.mode")
      rep.rule.mode = val == "any" ? SequenceRuleMode::Any : SequenceRuleMode::Consecutive;
    else {
      std::string field;
      MetricsSection* s = section_of(key, field);
      if (s == nullptr) throw PreconditionError("unrecognized report key: " + key);
      if (field == "windows") s->windows = std::stoll(val);
      else if (field == "t.tp") s->timestep.tp = std::stoll(val);
      else if (field == "t.fp") s->timestep.fp = std::stoll(val);
      else if (field == "t.tn") s->timestep.tn = std::stoll(val);
      else if (field == "t.fn") s->timestep.fn = std::stoll(val);
      else if (field == "s.tp") s->sequence.tp = std::stoll(val);
      else if (field == "s.fp") s->sequence.fp = std::stoll(val);
      else if (field == "s.tn") s->sequence.tn = std::stoll(val);
      else if (field == "s.fn") s->sequence.fn = std::stoll(val);
      else if (field == "exact") s->exact = std::stoll(val);
      // Derived rates are recomputed from counts; stored values are display-only.
    }
  }
  return rep;
}

// Human-readable companion table.
inline std::string format_report_table(const MetricsReport& rep) {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  auto row = [&os](const std::string& name, const MetricsSection& s) {
    os << name << "\n"
       << "  timestep: acc " << s.timestep.accuracy() << "  P " << s.timestep.precision()
       << "  R " << s.timestep.recall() << "  F1 " << s.timestep.f1() << "\n"
       << "  sequence: acc " << s.sequence.accuracy() << "  P " << s.sequence.precision()
       << "  R " << s.sequence.recall() << "  F1 " << s.sequence.f1() << "  FPR "
       << s.sequence.fpr() << "\n"
       << "  exact-match rate " << s.exact_rate() << "  (" << s.windows << " windows)\n";
  };
  os << "decision rule: tau " << rep.rule.tau << ", m " << rep.rule.m << ", mode "
     << to_string(rep.rule.mode) << "\n";
  row("global", rep.global);
  for (const auto& [client, sec] : rep.per_client) row("client " + std::to_string(client), sec);
  return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "tau,m,seq_f1,seq_fpr,seq_acc,exact_rate\n";
  for (const auto& r : rows)
    os << r.tau << "," << r.m << "," << r.seq_f1 << "," << r.seq_fpr << "," << r.seq_acc << ","
       << r.exact_rate << "\n";
  return os.str();
}

}  // namespace gridwatch
