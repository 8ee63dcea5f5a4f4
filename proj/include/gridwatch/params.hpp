#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gridwatch/tensor.hpp"

namespace gridwatch {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian float64; big-endian hosts unsupported");

struct NamedParam {
  std::string name;
  Tensor value;
};

// Ordered, named parameter set. Order is fixed at construction and defines
// both the checkpoint payload layout and the aggregation walk.
struct ModelParams {
  std::vector<NamedParam> params;

  Tensor& add(std::string name, std::int64_t rows, std::int64_t cols) {
    params.push_back({std::move(name), Tensor(rows, cols)});
    return params.back().value;
  }

  Tensor& at(std::string_view name) {
    for (auto& p : params)
      if (p.name == name) return p.value;
    throw PreconditionError("unknown parameter: " + std::string(name));
  }
  const Tensor& at(std::string_view name) const {
    for (const auto& p : params)
      if (p.name == name) return p.value;
    throw PreconditionError("unknown parameter: " + std::string(name));
  }
  bool has(std::string_view name) const {
    for (const auto& p : params)
      if (p.name == name) return true;
    return false;
  }

  std::int64_t scalar_count() const {
    std::int64_t n = 0;
    for (const auto& p : params) n += p.value.size();
    return n;
  }

  // Same names, same order, same shapes.
  bool same_manifest(const ModelParams& o) const {
    if (params.size() != o.params.size()) return false;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].name != o.params[i].name) return false;
      if (!params[i].value.same_shape(o.params[i].value)) return false;
    }
    return true;
  }
};

inline void require_same_manifest(const ModelParams& a, const ModelParams& b,
                                  const char* context) {
  if (!a.same_manifest(b))
    throw PreconditionError(std::string(context) + ": parameter manifest mismatch");
}

// ---- checkpoint persistence -------------------------------------------------
//
// A checkpoint is a directory holding model.manifest.txt and model.bin.
// The manifest is line-oriented text: a format tag, caller-supplied metadata
// (hyperparameters echoed from the run config), and one record per parameter
// with its shape and byte offset into the payload. The payload is the
// concatenation of all parameter tensors, row-major float64.

struct Checkpoint {
  std::vector<std::pair<std::string, std::string>> meta;
  ModelParams params;
};

inline constexpr const char* kCheckpointFormat = "gridwatch-checkpoint-v1";

inline void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ck) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream mf(dir / "model.manifest.txt", std::ios::binary);
    if (!mf) throw PreconditionError("cannot write " + (dir / "model.manifest.txt").string());
    mf << "format " << kCheckpointFormat << "\n";
    mf << "meta_count " << ck.meta.size() << "\n";
    for (const auto& [k, v] : ck.meta) mf << "meta " << k << " " << v << "\n";
    mf << "param_count " << ck.params.params.size() << "\n";
    std::int64_t off = 0;
    for (const auto& p : ck.params.params) {
      mf << "param " << p.name << " " << p.value.rows() << " " << p.value.cols() << " " << off
         << "\n";
      off += p.value.size() * static_cast<std::int64_t>(sizeof(double));
    }
    mf << "payload_bytes " << off << "\n";
  }
  {
    std::ofstream bf(dir / "model.bin", std::ios::binary);
    if (!bf) throw PreconditionError("cannot write " + (dir / "model.bin").string());
    for (const auto& p : ck.params.params)
      bf.write(reinterpret_cast<const char*>(p.value.data()),
               static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
}

namespace detail {

inline std::string next_manifest_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError(std::string("checkpoint manifest truncated at ") + what);
  return line;
}

}  // namespace detail

inline Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "model.manifest.txt", std::ios::binary);
  if (!mf) throw PreconditionError("missing checkpoint manifest in " + dir.string());
  Checkpoint ck;
  std::string tag, fmt;
  {
    std::istringstream ls(detail::next_manifest_line(mf, "format"));
    ls >> tag >> fmt;
    if (tag != "format" || fmt != kCheckpointFormat)
      throw PreconditionError("unrecognized checkpoint format: " + fmt);
  }
  std::size_t meta_count = 0;
  {
    std::istringstream ls(detail::next_manifest_line(mf, "meta_count"));
    ls >> tag >> meta_count;
    if (tag != "meta_count") throw PreconditionError("checkpoint manifest: expected meta_count");
  }
  for (std::size_t i = 0; i < meta_count; ++i) {
    std::istringstream ls(detail::next_manifest_line(mf, "meta"));
    std::string k, v;
    ls >> tag >> k;
    std::getline(ls, v);
    if (!v.empty() && v.front() == ' ') v.erase(0, 1);
    if (tag != "meta") throw PreconditionError("checkpoint manifest: expected meta record");
    ck.meta.emplace_back(k, v);
  }
  std::size_t param_count = 0;
  {
    std::istringstream ls(detail::next_manifest_line(mf, "param_count"));
    ls >> tag >> param_count;
    if (tag != "param_count") throw PreconditionError("checkpoint manifest: expected param_count");
  }
  std::int64_t expect_off = 0;
  for (std::size_t i = 0; i < param_count; ++i) {
    std::istringstream ls(detail::next_manifest_line(mf, "param"));
    std::string name;
    std::int64_t rows = 0, cols = 0, off = 0;
    ls >> tag >> name >> rows >> cols >> off;
    if (tag != "param" || !ls) throw PreconditionError("checkpoint manifest: bad param record");
    if (off != expect_off) throw PreconditionError("checkpoint manifest: byte offset mismatch");
    ck.params.add(name, rows, cols);
    expect_off += rows * cols * static_cast<std::int64_t>(sizeof(double));
  }
  std::int64_t payload_bytes = -1;
  {
    std::istringstream ls(detail::next_manifest_line(mf, "payload_bytes"));
    ls >> tag >> payload_bytes;
    if (tag != "payload_bytes" || payload_bytes != expect_off)
      throw PreconditionError("checkpoint manifest: payload size mismatch");
  }
  std::ifstream bf(dir / "model.bin", std::ios::binary);
  if (!bf) throw PreconditionError("missing checkpoint payload in " + dir.string());
  for (auto& p : ck.params.params) {
    bf.read(reinterpret_cast<char*>(p.value.data()),
            static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    if (bf.gcount() != static_cast<std::streamsize>(p.value.size() * sizeof(double)))
      throw PreconditionError("checkpoint payload truncated at " + p.name);
  }
  char extra;
  if (bf.read(&extra, 1) && bf.gcount() == 1)
    throw PreconditionError("checkpoint payload has trailing bytes");
  return ck;
}

}  // namespace gridwatch
