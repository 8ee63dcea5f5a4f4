#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <span>
#include <vector>

#include "gridwatch/features.hpp"
#include "gridwatch/telemetry.hpp"
#include "gridwatch/topology.hpp"
#include "oracle_tables.h"

using namespace gridwatch;

namespace {

SplitBounds default_split_100() {
  SplitSpec spec;  // defaults: 0.70 / 0.15, buffer 5
  return compute_split(spec, 100);
}

// One simulation shared by the feature-table tests below.
struct SimFixture {
  GridTopology topo = default_topology();
  SimResult sim;
  SplitBounds bounds;

  explicit SimFixture(std::uint64_t seed, int t_total = 300) {
    GeneratorConfig gc;
    gc.seed = seed;
    gc.t_total = t_total;
    sim = simulate(topo, gc);
    bounds = compute_split(SplitSpec{}, t_total);
  }
};

bool tensors_equal(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::int64_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("a 100-step horizon splits into the documented segments") {
  SplitBounds b = default_split_100();
  CHECK(b.train_begin == 0);
  CHECK(b.train_end == 69);
  REQUIRE(b.buffers.size() == 2);
  CHECK(b.buffers[0] == std::pair<int, int>{70, 74});
  CHECK(b.val_begin == 75);
  CHECK(b.val_end == 84);
  CHECK(b.buffers[1] == std::pair<int, int>{85, 89});
  CHECK(b.test_begin == 90);
  CHECK(b.test_end == 99);

  CHECK(b.split_of(0) == Split::Train);
  CHECK(b.split_of(69) == Split::Train);
  CHECK(b.split_of(70) == Split::Buffer);
  CHECK(b.split_of(74) == Split::Buffer);
  CHECK(b.split_of(75) == Split::Val);
  CHECK(b.split_of(84) == Split::Val);
  CHECK(b.split_of(85) == Split::Buffer);
  CHECK(b.split_of(89) == Split::Buffer);
  CHECK(b.split_of(90) == Split::Test);
  CHECK(b.split_of(99) == Split::Test);

  CHECK(b.segment_start(42) == 0);
  CHECK(b.segment_start(75) == 75);
  CHECK(b.segment_start(84) == 75);
  CHECK(b.segment_start(93) == 90);
  CHECK(b.segment_start(72) == 70);
  CHECK(b.segment_start(87) == 85);
  CHECK_THROWS_AS(b.segment_start(-1), DomainError);
  CHECK_THROWS_AS(b.segment_start(100), DomainError);
}

TEST_CASE("split computation rejects impossible requests") {
  SplitSpec bad;
  bad.train_ratio = 0.0;
  CHECK_THROWS_AS(compute_split(bad, 100), DomainError);
  bad = SplitSpec{};
  bad.val_ratio = -0.1;
  CHECK_THROWS_AS(compute_split(bad, 100), DomainError);
  bad = SplitSpec{};
  bad.train_ratio = 0.9;
  bad.val_ratio = 0.2;
  CHECK_THROWS_AS(compute_split(bad, 100), DomainError);
  bad = SplitSpec{};
  bad.buffer_len = -1;
  CHECK_THROWS_AS(compute_split(bad, 100), DomainError);
  // Horizon too short: the buffers swallow the validation segment entirely.
  CHECK_THROWS_AS(compute_split(SplitSpec{}, 10), PreconditionError);
}

TEST_CASE("histogram entropy matches the frozen table and its edge conventions") {
  for (const auto& c : kEntropyCases) {
    std::vector<double> amps(c.amps, c.amps + c.n);
    CHECK(std::fabs(csi_entropy(amps, c.bins, c.eps) - c.expected) <= 1e-10);
  }

  // Two occupied bins out of two: exactly one bit up to smoothing.
  CHECK(csi_entropy({0.0, 0.0, 1.0, 1.0}, 2, 1e-9) == Catch::Approx(1.0).margin(1e-6));
  // A flat sample occupies a single cell.
  CHECK(csi_entropy({3.5, 3.5, 3.5, 3.5}, 16, 1e-9) < 1e-6);
  // One sample per cell saturates at log2(bins).
  std::vector<double> spread;
  for (int i = 0; i < 16; ++i) spread.push_back(static_cast<double>(i));
  CHECK(csi_entropy(spread, 16, 1e-9) == Catch::Approx(4.0).margin(1e-6));

  CHECK_THROWS_AS(csi_entropy({1.0, 2.0}, 1, 1e-9), DomainError);
  CHECK_THROWS_AS(csi_entropy({1.0, 2.0}, 8, 0.0), DomainError);
  CHECK_THROWS_AS(csi_entropy({}, 8, 1e-9), DomainError);
}

TEST_CASE("series shape statistics match the frozen table") {
  for (const auto& c : kDerivedCases) {
    DerivedStats ds = derived_stats(std::span<const double>(c.series, c.series + c.n));
    CHECK(std::fabs(ds.skew - c.expected[0]) <= 1e-10);
    CHECK(std::fabs(ds.kurt - c.expected[1]) <= 1e-10);
    CHECK(std::fabs(ds.slope - c.expected[2]) <= 1e-10);
    CHECK(std::fabs(ds.drift - c.expected[3]) <= 1e-10);
    CHECK(std::fabs(ds.flatness - c.expected[4]) <= 1e-10);
  }
}

TEST_CASE("series shape statistics honor their documented conventions") {
  {
    const double ramp[4] = {0.0, 1.0, 2.0, 3.0};
    DerivedStats ds = derived_stats(std::span<const double>(ramp, 4));
    CHECK(ds.slope == Catch::Approx(1.0).margin(1e-12));
    CHECK(ds.drift == Catch::Approx(3.0).margin(1e-12));
    CHECK(ds.skew == Catch::Approx(0.0).margin(1e-12));
  }
  {
    const double flat[5] = {5.0, 5.0, 5.0, 5.0, 5.0};
    DerivedStats ds = derived_stats(std::span<const double>(flat, 5));
    CHECK(ds.skew == 0.0);
    CHECK(ds.kurt == 0.0);
    CHECK(ds.slope == 0.0);
    CHECK(ds.drift == 0.0);
    CHECK(ds.flatness == 1.0);
  }
  {
    const double spike[4] = {0.0, 0.0, 0.0, 10.0};
    DerivedStats ds = derived_stats(std::span<const double>(spike, 4));
    CHECK(ds.skew > 0.0);
    CHECK(ds.drift == 10.0);
  }
  const double tiny[3] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(derived_stats(std::span<const double>(tiny, 3)), DomainError);
}

TEST_CASE("pearson correlation matches the frozen table and its conventions") {
  for (const auto& c : kPearsonCases) {
    std::span<const double> a(c.a, c.a + c.n), b(c.b, c.b + c.n);
    CHECK(std::fabs(pearson(a, b) - c.expected) <= 1e-10);
  }
  const double x[3] = {1.0, 2.0, 3.0}, flat[3] = {4.0, 4.0, 4.0};
  CHECK(pearson(std::span<const double>(x, 3), std::span<const double>(flat, 3)) == 0.0);
  CHECK(pearson(std::span<const double>(x, 1), std::span<const double>(flat, 1)) == 0.0);
  CHECK_THROWS_AS(pearson(std::span<const double>(x, 3), std::span<const double>(flat, 2)),
                  ShapeError);
}

TEST_CASE("instantaneous features restart trailing state at segment boundaries") {
  SimFixture fx(404);
  const auto& frames = fx.sim.frames[0];
  Tensor raw = compute_raw_features(frames, fx.bounds);
  REQUIRE(raw.rows() == 300);
  REQUIRE(raw.cols() == kRawFeatureCount);

  // Deltas and drift are zero on the first step of every segment.
  std::vector<int> starts = {fx.bounds.train_begin, fx.bounds.val_begin, fx.bounds.test_begin,
                             fx.bounds.buffers[0].first, fx.bounds.buffers[1].first};
  for (int s : starts) {
    CHECK(raw(s, kColCsiDrift) == 0.0);
    CHECK(raw(s, kColSnrDelta) == 0.0);
    CHECK(raw(s, kColPerDelta) == 0.0);
    CHECK(raw(s, kColLatencySmoothed) == frames[static_cast<std::size_t>(s)].latency_ms);
  }

  // One step in, the delta is exactly the difference of the underlying series.
  int t = fx.bounds.val_begin + 1;
  CHECK(raw(t, kColSnrDelta) ==
        frames[static_cast<std::size_t>(t)].snr_db - frames[static_cast<std::size_t>(t - 1)].snr_db);

  // The latency moving average spans at most 5 in-segment steps.
  t = fx.bounds.val_begin + 2;
  double expect = (frames[static_cast<std::size_t>(t - 2)].latency_ms +
                   frames[static_cast<std::size_t>(t - 1)].latency_ms +
                   frames[static_cast<std::size_t>(t)].latency_ms) /
                  3.0;
  CHECK(raw(t, kColLatencySmoothed) == Catch::Approx(expect).margin(1e-12));
  t = 42;  // deep inside train: full 5-step window
  expect = 0.0;
  for (int u = t - 4; u <= t; ++u) expect += frames[static_cast<std::size_t>(u)].latency_ms;
  CHECK(raw(t, kColLatencySmoothed) == Catch::Approx(expect / 5.0).margin(1e-12));

  // Pass-through columns.
  CHECK(raw(7, kColSnrDb) == frames[7].snr_db);
  CHECK(raw(7, kColPer) == frames[7].per);
  CHECK(raw(7, kColTxCount) == static_cast<double>(frames[7].tx_count));
  CHECK(raw(7, kColTimeSinceLastTx) == static_cast<double>(frames[7].time_since_last_tx));
}

TEST_CASE("derived features use only the trailing in-segment window") {
  SimFixture fx(405);
  Tensor raw = compute_raw_features(fx.sim.frames[0], fx.bounds);
  Tensor der = compute_derived_features(raw, fx.bounds, 9);
  REQUIRE(der.cols() == kDerivedFeatureCount);

  // Fewer than 4 in-segment points: the degenerate convention for all 5 channels.
  for (int off = 0; off < 3; ++off) {
    int t = fx.bounds.val_begin + off;
    for (int c = 0; c < 5; ++c) {
      CHECK(der(t, c * 5 + 0) == 0.0);
      CHECK(der(t, c * 5 + 1) == 0.0);
      CHECK(der(t, c * 5 + 2) == 0.0);
      CHECK(der(t, c * 5 + 3) == 0.0);
      CHECK(der(t, c * 5 + 4) == 1.0);
    }
  }

  // Deep inside a segment the row equals a direct evaluation on the window.
  int t = 50;
  std::vector<double> win;
  for (int u = t - 8; u <= t; ++u) win.push_back(raw(u, kColSnrDb));
  DerivedStats ds = derived_stats(std::span<const double>(win.data(), win.size()));
  CHECK(der(t, 5 + 0) == ds.skew);
  CHECK(der(t, 5 + 2) == ds.slope);
  CHECK(der(t, 5 + 4) == ds.flatness);

  CHECK_THROWS_AS(compute_derived_features(raw, fx.bounds, 3), DomainError);
}

TEST_CASE("feature rows in one split never depend on frames from another") {
  SimFixture fx(406);
  const int ego = 0;
  Tensor raw1 = compute_raw_features(fx.sim.frames[ego], fx.bounds);
  Tensor der1 = compute_derived_features(raw1, fx.bounds, 9);

  // Corrupt everything outside the validation segment, then recompute.
  auto frames = fx.sim.frames[ego];
  for (int t = 0; t < static_cast<int>(frames.size()); ++t) {
    if (fx.bounds.split_of(t) == Split::Val) continue;
    auto& fr = frames[static_cast<std::size_t>(t)];
    fr.snr_db += 50.0;
    fr.latency_ms *= 10.0;
    fr.per = 0.5;
    for (double& re : fr.csi.re) re *= 3.0;
  }
  Tensor raw2 = compute_raw_features(frames, fx.bounds);
  Tensor der2 = compute_derived_features(raw2, fx.bounds, 9);

  for (int t = fx.bounds.val_begin; t <= fx.bounds.val_end; ++t) {
    for (int c = 0; c < kRawFeatureCount; ++c) CHECK(raw1(t, c) == raw2(t, c));
    for (int c = 0; c < kDerivedFeatureCount; ++c) CHECK(der1(t, c) == der2(t, c));
  }
}

TEST_CASE("neighbor descriptors aggregate the star neighborhood") {
  // Synthetic raw tables: the ego and two neighbors with fixed SNR/latency.
  SplitBounds b = default_split_100();
  const int T = 100;
  Tensor ego(T, kRawFeatureCount);
  Tensor n1(T, kRawFeatureCount), n2(T, kRawFeatureCount);
  for (int t = 0; t < T; ++t) {
    ego(t, kColLatencySmoothed) = 10.0 + t;
    ego(t, kColSnrDb) = 20.0 + 0.5 * t;
    n1(t, kColLatencySmoothed) = 10.0 + t;  // moves exactly with the ego
    n1(t, kColSnrDb) = 10.0;
    n1(t, kColPer) = 0.25;
    n1(t, kColCsiDrift) = 0.5;
    n2(t, kColLatencySmoothed) = 200.0 - t;  // moves exactly against it
    n2(t, kColSnrDb) = 20.0;
    n2(t, kColPer) = 0.75;
    n2(t, kColCsiDrift) = 1.5;
  }
  Tensor nf = compute_neighbor_features(ego, {n1, n2}, b, 9);
  REQUIRE(nf.rows() == 2 * T);
  REQUIRE(nf.cols() == kNeighborFeatureCount);

  const int t = 40;
  // Row t*K+j carries neighbor j's own channel quality.
  CHECK(nf(t * 2 + 0, 1) == 10.0);
  CHECK(nf(t * 2 + 1, 1) == 20.0);
  CHECK(nf(t * 2 + 0, 2) == 0.25);
  CHECK(nf(t * 2 + 1, 3) == 1.5);
  // Trailing latency correlation: +1 with the first neighbor, -1 with the second.
  CHECK(nf(t * 2 + 0, 4) == Catch::Approx(1.0).margin(1e-12));
  CHECK(nf(t * 2 + 1, 4) == Catch::Approx(-1.0).margin(1e-12));
  // Dispersion of {10, 20} dB is 5 dB and is shared across the rows.
  CHECK(nf(t * 2 + 0, 6) == Catch::Approx(5.0).margin(1e-12));
  CHECK(nf(t * 2 + 1, 6) == Catch::Approx(5.0).margin(1e-12));

  // The aggregate at a timestep is the column mean over neighbors.
  Tensor agg = neighbor_stats(nf, 2, t);
  CHECK(agg(0, 1) == Catch::Approx(15.0).margin(1e-12));
  CHECK(agg(0, 2) == Catch::Approx(0.5).margin(1e-12));
  CHECK(agg(0, 6) == Catch::Approx(5.0).margin(1e-12));

  // No wireless neighbors: empty table, all-zero aggregate.
  Tensor none = compute_neighbor_features(ego, {}, b, 9);
  CHECK(none.rows() == 0);
  Tensor zero = neighbor_stats(none, 0, t);
  for (int c = 0; c < kNeighborFeatureCount; ++c) CHECK(zero(0, c) == 0.0);
}

TEST_CASE("normalization is fitted on training rows only") {
  SplitBounds b = default_split_100();
  GridTopology topo = default_topology();
  GeneratorConfig gc;
  gc.seed = 88;
  gc.t_total = 100;
  SimResult sim = simulate(topo, gc);
  FeatureFlags flags;
  std::vector<ClientData> clients = build_client_data(sim.frames, topo, b, 9, flags);
  REQUIRE(!clients.empty());

  const ClientData& cd = clients[0];
  Tensor train_rows(b.train_end - b.train_begin + 1, cd.feats.cols());
  for (std::int64_t t = 0; t < train_rows.rows(); ++t)
    for (std::int64_t c = 0; c < cd.feats.cols(); ++c)
      train_rows(t, c) = cd.feats(b.train_begin + t, c);
  NormStats ns = fit_norm(train_rows);

  std::vector<WindowSample> wins = make_windows(clients, b, 9, 1, flags);
  // First window of client 0 starts at train_begin; undo the normalization and
  // compare against the unnormalized table.
  const WindowSample& w0 = wins.front();
  REQUIRE(w0.ego == cd.ego);
  REQUIRE(w0.start == b.train_begin);
  for (int r = 0; r < 9; ++r)
    for (std::int64_t c = 0; c < cd.feats.cols(); ++c) {
      double undone = w0.x_raw(r, c) * ns.std(0, c) + ns.mean(0, c);
      CHECK(undone == Catch::Approx(cd.feats(w0.start + r, c)).margin(1e-9));
    }

  // A zero-variance column passes through unscaled.
  Tensor flat(10, 2);
  for (int r = 0; r < 10; ++r) {
    flat(r, 0) = 7.0;
    flat(r, 1) = r;
  }
  NormStats fs = fit_norm(flat);
  CHECK(fs.mean(0, 0) == 7.0);
  CHECK(fs.std(0, 0) == 1.0);
  Tensor probe(1, 2);
  probe(0, 0) = 9.0;
  probe(0, 1) = 4.5;
  apply_norm(probe, fs);
  CHECK(probe(0, 0) == 2.0);
}

TEST_CASE("window assembly is deterministic and ordered") {
  SimFixture fx(511, 200);
  FeatureFlags flags;
  std::vector<ClientData> clients =
      build_client_data(fx.sim.frames, fx.topo, fx.bounds, 9, flags);
  std::vector<WindowSample> a = make_windows(clients, fx.bounds, 9, 3, flags);
  std::vector<WindowSample> b = make_windows(clients, fx.bounds, 9, 3, flags);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ego == b[i].ego);
    CHECK(a[i].start == b[i].start);
    CHECK(tensors_equal(a[i].x_raw, b[i].x_raw));
    CHECK(tensors_equal(a[i].x_nbr, b[i].x_nbr));
    CHECK(a[i].labels == b[i].labels);
  }

  // Ascending ego, then segment order (train, val, test), then start.
  auto segment_rank = [](Split s) {
    return s == Split::Train ? 0 : s == Split::Val ? 1 : 2;
  };
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].ego != a[i - 1].ego) {
      CHECK(a[i].ego > a[i - 1].ego);
      continue;
    }
    int r0 = segment_rank(a[i - 1].split), r1 = segment_rank(a[i].split);
    CHECK(r1 >= r0);
    if (r1 == r0) CHECK(a[i].start > a[i - 1].start);
  }

  // Windows stay inside one segment and labels mirror the frames.
  for (const WindowSample& w : a) {
    CHECK(fx.bounds.split_of(w.start) == w.split);
    CHECK(fx.bounds.split_of(w.start + 8) == w.split);
    for (int r = 0; r < 9; ++r)
      CHECK(w.labels[static_cast<std::size_t>(r)] ==
            fx.sim.frames[static_cast<std::size_t>(w.ego)][static_cast<std::size_t>(w.start + r)]
                .label);
  }

  CHECK_THROWS_AS(make_windows(clients, fx.bounds, 0, 1, flags), DomainError);
  CHECK_THROWS_AS(make_windows(clients, fx.bounds, 9, 0, flags), DomainError);
}

TEST_CASE("segments shorter than the window emit nothing and a warning") {
  // 60 steps: validation covers floor(0.85*60)-1 - (42+5) + 1 = 4 steps < 9.
  SimFixture fx(512, 60);
  FeatureFlags flags;
  std::vector<ClientData> clients =
      build_client_data(fx.sim.frames, fx.topo, fx.bounds, 9, flags);
  std::vector<std::string> warnings;
  std::vector<WindowSample> wins = make_windows(clients, fx.bounds, 9, 1, flags, &warnings);
  CHECK(!warnings.empty());
  for (const WindowSample& w : wins) CHECK(w.split != Split::Val);
}

TEST_CASE("feature flags control the assembled dimensions") {
  SimFixture fx(513, 200);
  FeatureFlags all;
  FeatureFlags lean;
  lean.derived = false;
  lean.neighbor = false;
  lean.metadata = false;

  std::vector<ClientData> full = build_client_data(fx.sim.frames, fx.topo, fx.bounds, 9, all);
  std::vector<ClientData> bare = build_client_data(fx.sim.frames, fx.topo, fx.bounds, 9, lean);
  REQUIRE(full.size() == bare.size());

  // Only wireless nodes become clients.
  std::vector<int> egos;
  for (const ClientData& cd : full) egos.push_back(cd.ego);
  CHECK(egos == wireless_clients(fx.topo));

  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(full[i].feats.cols() == kRawFeatureCount + kDerivedFeatureCount);
    CHECK(bare[i].feats.cols() == kRawFeatureCount);
    CHECK(bare[i].K == 0);
    CHECK(bare[i].nbr.rows() == 0);
    CHECK(full[i].meta.cols() == kMetadataDim);
    // The raw columns are identical with and without the derived block.
    for (std::int64_t t = 0; t < full[i].feats.rows(); ++t)
      for (int c = 0; c < kRawFeatureCount; ++c)
        CHECK(full[i].feats(t, c) == bare[i].feats(t, c));
  }

  std::vector<WindowSample> wf = make_windows(full, fx.bounds, 9, 3, all);
  std::vector<WindowSample> wb = make_windows(bare, fx.bounds, 9, 3, lean);
  REQUIRE(!wf.empty());
  CHECK(wf[0].x_raw.cols() == kRawFeatureCount + kDerivedFeatureCount);
  CHECK(wb[0].x_raw.cols() == kRawFeatureCount);
  CHECK(wb[0].x_nbr.rows() == 0);
  CHECK(wf[0].meta.cols() == kMetadataDim);
  CHECK(wb[0].meta.size() == 0);
}

TEST_CASE("feature name lists match the advertised widths") {
  CHECK(static_cast<int>(raw_feature_names().size()) == kRawFeatureCount);
  CHECK(static_cast<int>(derived_feature_names().size()) == kDerivedFeatureCount);
  CHECK(static_cast<int>(neighbor_feature_names().size()) == kNeighborFeatureCount);
}
