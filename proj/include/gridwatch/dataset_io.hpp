#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridwatch/config.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/fedserver.hpp"
#include "gridwatch/telemetry.hpp"
#include "gridwatch/textio.hpp"
#include "gridwatch/topology.hpp"

namespace gridwatch {

inline constexpr const char* kDatasetFormat = "gridwatch-dataset-v1";
inline constexpr const char* kRunFormat = "gridwatch-run-v1";

// ---- plain file helpers ---------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + p.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void write_text_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw PreconditionError("cannot write " + p.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw PreconditionError("write failed for " + p.string());
}

// 16-hex-digit FNV-1a digest of a byte string.
inline std::string digest_hex(std::string_view content) {
  std::uint64_t h = fnv1a64(content);
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

// ---- frame tables -----------------------------------------------------------------

// One row per timestep: t, interleaved re/im per subcarrier, then the scalar
// measurements and the label. The '#' header documents the column layout.
inline std::string serialize_frames(const std::vector<TelemetryFrame>& frames) {
  if (frames.empty()) throw PreconditionError("serialize_frames: empty stream");
  int n_sub = frames.front().csi.n_sub();
  std::ostringstream os;
  os << "# t";
  for (int k = 1; k <= n_sub; ++k) os << " csi_re_" << k << " csi_im_" << k;
  os << " snr_db latency_ms per tx_count time_since_last_tx label\n";
  for (const TelemetryFrame& fr : frames) {
    if (fr.csi.n_sub() != n_sub) throw ShapeError("serialize_frames: subcarrier count varies");
    os << format_int(fr.t);
    for (int k = 0; k < n_sub; ++k)
      os << " " << format_real(fr.csi.re[static_cast<std::size_t>(k)]) << " "
         << format_real(fr.csi.im[static_cast<std::size_t>(k)]);
    os << " " << format_real(fr.snr_db) << " " << format_real(fr.latency_ms) << " "
       << format_real(fr.per) << " " << format_int(fr.tx_count) << " "
       << format_int(fr.time_since_last_tx) << " " << format_int(fr.label) << "\n";
  }
  return os.str();
}

inline std::vector<TelemetryFrame> parse_frames(const std::string& text, int node) {
  std::vector<TelemetryFrame> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tok = detail::split_ws(line);
    if (tok.size() < 9 || (tok.size() - 7) % 2 != 0)
      throw PreconditionError("frame table line " + std::to_string(lineno) +
                              ": wrong column count");
    int n_sub = static_cast<int>((tok.size() - 7) / 2);
    TelemetryFrame fr;
    fr.node = node;
    try {
      std::size_t c = 0;
      fr.t = static_cast<int>(parse_int(tok[c++]));
      fr.csi.re.resize(static_cast<std::size_t>(n_sub));
      fr.csi.im.resize(static_cast<std::size_t>(n_sub));
      for (int k = 0; k < n_sub; ++k) {
        fr.csi.re[static_cast<std::size_t>(k)] = parse_real(tok[c++]);
        fr.csi.im[static_cast<std::size_t>(k)] = parse_real(tok[c++]);
      }
      fr.snr_db = parse_real(tok[c++]);
      fr.latency_ms = parse_real(tok[c++]);
      fr.per = parse_real(tok[c++]);
      fr.tx_count = static_cast<int>(parse_int(tok[c++]));
      fr.time_since_last_tx = static_cast<int>(parse_int(tok[c++]));
      fr.label = static_cast<int>(parse_int(tok[c++]));
    } catch (const DomainError& e) {
      throw PreconditionError("frame table line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(fr));
  }
  if (out.empty()) throw PreconditionError("frame table holds no rows");
  return out;
}

// ---- feature tables --------------------------------------------------------------

// Per-client feature matrix in the same columnar text form as frames. The
// ego table holds one row per timestep; the optional neighbor table holds one
// row per (timestep, neighbor) pair tagged with the neighbor's node id.
inline std::string serialize_feature_table(const ClientData& cd, const FeatureFlags& flags) {
  std::ostringstream os;
  os << "# client " << cd.ego << "\n";
  os << "# t";
  for (const std::string& n : raw_feature_names()) os << " " << n;
  if (flags.derived)
    for (const std::string& n : derived_feature_names()) os << " " << n;
  os << " label\n";
  for (std::int64_t t = 0; t < cd.feats.rows(); ++t) {
    os << format_int(t);
    for (std::int64_t c = 0; c < cd.feats.cols(); ++c) os << " " << format_real(cd.feats(t, c));
    os << " " << format_int(cd.labels[static_cast<std::size_t>(t)]) << "\n";
  }
  return os.str();
}

inline std::string serialize_neighbor_table(const ClientData& cd) {
  std::ostringstream os;
  os << "# client " << cd.ego << " neighbors";
  for (int j : cd.neighbors) os << " " << j;
  os << "\n# t neighbor";
  for (const std::string& n : neighbor_feature_names()) os << " " << n;
  os << "\n";
  std::int64_t t_total = cd.K > 0 ? cd.nbr.rows() / cd.K : 0;
  for (std::int64_t t = 0; t < t_total; ++t)
    for (int j = 0; j < cd.K; ++j) {
      os << format_int(t) << " " << format_int(cd.neighbors[static_cast<std::size_t>(j)]);
      for (std::int64_t c = 0; c < cd.nbr.cols(); ++c)
        os << " " << format_real(cd.nbr(t * cd.K + j, c));
      os << "\n";
    }
  return os.str();
}

// ---- topology and schedule sections ------------------------------------------------

inline Role role_from_string(const std::string& s) {
  for (int i = 0; i < kRoleCount; ++i)
    if (s == to_string(static_cast<Role>(i))) return static_cast<Role>(i);
  throw PreconditionError("unknown role: " + s);
}

inline Layer layer_from_string(const std::string& s) {
  for (int i = 0; i < kLayerCount; ++i)
    if (s == to_string(static_cast<Layer>(i))) return static_cast<Layer>(i);
  throw PreconditionError("unknown layer: " + s);
}

inline Technology technology_from_string(const std::string& s) {
  for (int i = 0; i < kTechnologyCount; ++i)
    if (s == to_string(static_cast<Technology>(i))) return static_cast<Technology>(i);
  throw PreconditionError("unknown technology: " + s);
}

inline void emit_topology(std::ostream& os, const GridTopology& topo) {
  for (const NodeDescriptor& n : topo.nodes)
    os << "node " << n.id << " " << to_string(n.role) << " " << to_string(n.layer) << " "
       << to_string(n.technology) << " " << (n.wireless ? "wireless" : "wired") << "\n";
  for (auto [a, b] : topo.edges) os << "edge " << a << " " << b << "\n";
}

inline void emit_schedule(std::ostream& os, const AttackSchedule& sched) {
  for (const AttackWindow& w : sched.windows)
    os << "window " << w.node << " " << w.start << " " << w.end << " " << w.ramp_len << "\n";
}

// ---- dataset manifest ------------------------------------------------------------------

struct DatasetManifest {
  RunConfig config;
  GridTopology topology;
  AttackSchedule schedule;
  std::vector<std::string> warnings;
};

// Keys that determine dataset content. Operational knobs (output paths, the
// force flag) and training settings stay out of the manifest so that equal
// data means equal bytes.
inline bool dataset_config_key(const std::string& key) {
  return key == "run.seed" || key.rfind("generator.", 0) == 0 || key.rfind("split.", 0) == 0 ||
         key.rfind("features.", 0) == 0;
}

inline std::string serialize_dataset_manifest(const DatasetManifest& m) {
  std::ostringstream os;
  os << "format " << kDatasetFormat << "\n";
  os << "[config]\n";
  for (const KeySpec& ks : config_registry()) {
    if (!dataset_config_key(ks.key)) continue;
    const std::string& v = m.config.get(ks.key);
    os << ks.key;
    if (!v.empty()) os << " " << v;
    os << "\n";
  }
  os << "[topology]\n";
  emit_topology(os, m.topology);
  os << "[schedule]\n";
  emit_schedule(os, m.schedule);
  if (!m.warnings.empty()) {
    os << "[warnings]\n";
    for (const std::string& w : m.warnings) os << w << "\n";
  }
  return os.str();
}

inline DatasetManifest parse_dataset_manifest(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != std::string("format ") + kDatasetFormat)
    throw PreconditionError("dataset manifest has wrong or missing format line");
  DatasetManifest m;
  m.config = RunConfig::defaults();
  std::vector<NodeDescriptor> nodes;
  std::vector<std::pair<int, int>> edges;
  std::string section;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    if (section == "config") {
      std::size_t sep = line.find(' ');
      m.config.set(sep == std::string::npos ? line : line.substr(0, sep),
                   sep == std::string::npos ? std::string() : line.substr(sep + 1));
    } else if (section == "topology") {
      std::vector<std::string> tok = detail::split_ws(line);
      if (tok[0] == "node" && tok.size() == 6) {
        NodeDescriptor nd;
        nd.id = static_cast<int>(parse_int(tok[1]));
        nd.role = role_from_string(tok[2]);
        nd.layer = layer_from_string(tok[3]);
        nd.technology = technology_from_string(tok[4]);
        nd.wireless = tok[5] == "wireless";
        nodes.push_back(nd);
      } else if (tok[0] == "edge" && tok.size() == 3) {
        edges.emplace_back(static_cast<int>(parse_int(tok[1])),
                           static_cast<int>(parse_int(tok[2])));
      } else {
        throw PreconditionError("unrecognized topology line: " + line);
      }
    } else if (section == "schedule") {
      std::vector<std::string> tok = detail::split_ws(line);
      if (tok.size() != 5 || tok[0] != "window")
        throw PreconditionError("unrecognized schedule line: " + line);
      AttackWindow w;
      w.node = static_cast<int>(parse_int(tok[1]));
      w.start = static_cast<int>(parse_int(tok[2]));
      w.end = static_cast<int>(parse_int(tok[3]));
      w.ramp_len = static_cast<int>(parse_int(tok[4]));
      m.schedule.windows.push_back(w);
    } else if (section == "warnings") {
      m.warnings.push_back(line);
    } else {
      throw PreconditionError("manifest line outside any section: " + line);
    }
  }
  m.topology = make_topology(std::move(nodes), std::move(edges));
  return m;
}

// ---- checksums ---------------------------------------------------------------------------

inline constexpr const char* kChecksumFile = "checksums.txt";
inline constexpr const char* kRunLogFile = "run.log";
inline constexpr const char* kRoundLogFile = "round_log.txt";

// Logs carry timestamps and wall times, so they stay outside the digest set;
// everything else in the directory must be reproducible from (config, seed).
inline bool checksum_excluded(const std::string& rel) {
  return rel == kChecksumFile || rel == kRunLogFile || rel == kRoundLogFile;
}

inline std::vector<std::string> checksummed_files(const std::filesystem::path& dir) {
  std::vector<std::string> rels;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string rel = std::filesystem::relative(entry.path(), dir).generic_string();
    if (!checksum_excluded(rel)) rels.push_back(rel);
  }
  std::sort(rels.begin(), rels.end());
  return rels;
}

inline std::string build_checksum_text(const std::filesystem::path& dir) {
  std::ostringstream os;
  os << "# fnv1a64 digests; logs excluded\n";
  for (const std::string& rel : checksummed_files(dir))
    os << digest_hex(read_text_file(dir / rel)) << " " << rel << "\n";
  return os.str();
}

inline void write_checksums(const std::filesystem::path& dir) {
  write_text_file(dir / kChecksumFile, build_checksum_text(dir));
}

// Recomputes every digest and compares against the stored table; any
// mismatch, missing file, or unlisted file is a hard error.
inline void verify_checksums(const std::filesystem::path& dir) {
  std::string stored = read_text_file(dir / kChecksumFile);
  if (stored != build_checksum_text(dir))
    throw PreconditionError("checksum mismatch in " + dir.string() +
                            "; artifacts were modified or are incomplete");
}

// ---- run log ------------------------------------------------------------------------------

inline std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void append_run_log(const std::filesystem::path& dir, const std::string& message) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / kRunLogFile, std::ios::binary | std::ios::app);
  if (!f) throw PreconditionError("cannot append to run log in " + dir.string());
  f << iso_timestamp() << " " << message << "\n";
}

// ---- round log ----------------------------------------------------------------------------

inline std::string serialize_round_log(const std::vector<RoundRecord>& log) {
  std::ostringstream os;
  os << "# round val_acc best wall_ms client:mean_loss...\n";
  for (const RoundRecord& r : log) {
    os << "round " << r.round << " val_acc " << format_real(r.val_accuracy) << " best "
       << (r.is_best ? 1 : 0) << " wall_ms " << format_real(r.wall_ms);
    for (auto [cid, loss] : r.client_mean_loss) os << " " << cid << ":" << format_real(loss);
    os << "\n";
  }
  return os.str();
}

// ---- dataset load ---------------------------------------------------------------------------

struct Dataset {
  DatasetManifest manifest;
  std::vector<std::vector<TelemetryFrame>> frames;  // frames[node][t]
};

inline std::string frame_file_name(int node) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frames/node_%02d.txt", node);
  return buf;
}

inline std::string feature_file_name(int ego) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "features/client_%02d.txt", ego);
  return buf;
}

inline std::string neighbor_file_name(int ego) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "features/client_%02d_neighbors.txt", ego);
  return buf;
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "manifest.txt"))
    throw PreconditionError("no dataset manifest under " + dir.string());
  verify_checksums(dir);
  Dataset ds;
  ds.manifest = parse_dataset_manifest(read_text_file(dir / "manifest.txt"));
  int n = ds.manifest.topology.size();
  ds.frames.resize(static_cast<std::size_t>(n));
  for (int node = 0; node < n; ++node) {
    ds.frames[static_cast<std::size_t>(node)] =
        parse_frames(read_text_file(dir / frame_file_name(node)), node);
    if (static_cast<int>(ds.frames[static_cast<std::size_t>(node)].size()) !=
        static_cast<int>(ds.manifest.config.get_int("generator.t_total")))
      throw PreconditionError("frame table for node " + std::to_string(node) +
                              " does not match the manifest horizon");
  }
  return ds;
}

}  // namespace gridwatch
