#pragma once

// Server-side federation: client interface, weighted aggregation, round loop.
// This header deliberately depends only on the parameter container so the
// aggregation logic stays independent of model and training internals.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/params.hpp"

namespace gridwatch {

struct TrainDiagnostics {
  std::vector<double> batch_losses;
  double grad_norm_mean = 0.0;
  double grad_norm_max = 0.0;
  std::int64_t steps = 0;

  double mean_loss() const {
    if (batch_losses.empty()) return 0.0;
    double s = 0.0;
    for (double v : batch_losses) s += v;
    return s / static_cast<double>(batch_losses.size());
  }
};

struct ClientUpdate {
  int client_id = -1;
  ModelParams params;
  std::int64_t n_samples = 0;
  TrainDiagnostics diag;
};

struct ValCounts {
  std::int64_t correct = 0;
  std::int64_t total = 0;
};

class FederatedClient {
 public:
  virtual ~FederatedClient() = default;
  virtual int id() const = 0;
  virtual std::int64_t train_size() const = 0;
  // Trains locally from the broadcast parameters and returns the new local
  // parameters together with the local sample count.
  virtual ClientUpdate train_round(const ModelParams& global, int round) = 0;
  // Sequence-level validation decisions under the run's decision rule.
  virtual ValCounts validate(const ModelParams& global) = 0;
};

// Sample-weighted parameter mean. Computed as an anchored drift sum,
//
//   theta = theta_a + sum_i (n_i / n_tot) * (theta_i - theta_a),
//
// with the anchor theta_a taken from the lowest client id after sorting.
// This form is algebraically the weighted mean but has two properties the
// naive sum-of-products lacks: identical inputs reproduce themselves bit for
// bit (every drift term is exactly zero), and the client visiting order no
// longer matters because updates are sorted before summation.
inline ModelParams aggregate(const std::vector<ClientUpdate>& updates) {
  if (updates.empty()) throw PreconditionError("aggregate: no client updates");
  std::vector<const ClientUpdate*> sorted;
  sorted.reserve(updates.size());
  for (const auto& u : updates) sorted.push_back(&u);
  std::sort(sorted.begin(), sorted.end(),
            [](const ClientUpdate* a, const ClientUpdate* b) { return a->client_id < b->client_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->client_id == sorted[i - 1]->client_id)
      throw PreconditionError("aggregate: duplicate client id " +
                              std::to_string(sorted[i]->client_id));
  }
  std::int64_t n_tot = 0;
  for (const auto* u : sorted) {
    if (u->n_samples <= 0) throw PreconditionError("aggregate: client sample count must be positive");
    require_same_manifest(sorted.front()->params, u->params, "aggregate");
    n_tot += u->n_samples;
  }
  ModelParams out = sorted.front()->params;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    double w = static_cast<double>(sorted[i]->n_samples) / static_cast<double>(n_tot);
    for (std::size_t p = 0; p < out.params.size(); ++p) {
      Tensor& acc = out.params[p].value;
      const Tensor& theta = sorted[i]->params.params[p].value;
      const Tensor& anchor = sorted.front()->params.params[p].value;
      for (std::int64_t k = 0; k < acc.size(); ++k) acc[k] += w * (theta[k] - anchor[k]);
    }
  }
  return out;
}

struct RoundRecord {
  int round = 0;
  std::vector<std::pair<int, double>> client_mean_loss;
  double val_accuracy = 0.0;
  bool is_best = false;
  double wall_ms = 0.0;  // informational only; excluded from determinism guarantees
};

struct FederatedResult {
  ModelParams best;
  int best_round = -1;
  double best_val_accuracy = -1.0;
  std::vector<RoundRecord> log;
};

// Synchronous rounds: broadcast, train every client, aggregate, validate.
// Keeps the parameters from the round with the highest pooled validation
// accuracy; ties keep the earlier round.
inline FederatedResult run_rounds(const std::vector<FederatedClient*>& clients, ModelParams init,
                                  int rounds) {
  if (clients.empty()) throw PreconditionError("run_rounds: no clients");
  if (rounds < 1) throw PreconditionError("run_rounds: rounds must be >= 1");
  FederatedResult res;
  ModelParams global = std::move(init);
  for (int r = 1; r <= rounds; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ClientUpdate> updates;
    updates.reserve(clients.size());
    RoundRecord rec;
    rec.round = r;
    for (FederatedClient* c : clients) {
      ClientUpdate u = c->train_round(global, r);
      rec.client_mean_loss.emplace_back(u.client_id, u.diag.mean_loss());
      updates.push_back(std::move(u));
    }
    global = aggregate(updates);
    ValCounts pooled;
    for (FederatedClient* c : clients) {
      ValCounts v = c->validate(global);
      pooled.correct += v.correct;
      pooled.total += v.total;
    }
    rec.val_accuracy =
        pooled.total ? static_cast<double>(pooled.correct) / static_cast<double>(pooled.total) : 0.0;
    if (rec.val_accuracy > res.best_val_accuracy) {
      res.best_val_accuracy = rec.val_accuracy;
      res.best_round = r;
      res.best = global;
      rec.is_best = true;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    res.log.push_back(std::move(rec));
  }
  return res;
}

}  // namespace gridwatch
