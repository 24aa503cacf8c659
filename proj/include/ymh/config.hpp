#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ymh/model.hpp"
#include "ymh/sampler.hpp"

namespace ymh {

/** Resolved run configuration (key = value text format). */
struct RunConfig {
  std::string group = "SU";
  int N = 2;
  std::string target = "sphere";  // sphere | flat
  double beta = 0.0;
  double kappa = 0.0;
  std::vector<double> vcoeff = {0.0, 1.0, -1.0};  // V(r) = r - r^2
  int d = 2;
  int L = 4;
  SamplerPlan plan;
  std::uint64_t seed = 12345;
  int threads = 1;
  double z_threshold = 4.0;
  std::int64_t iid_samples = 1000000;
  double magic_tol = 1e-10;
  double grad_tol = 1e-5;

  GroupSpec group_spec() const;
  HiggsSpec higgs_spec() const;
  ModelParams model_params() const;

  std::string render() const;
  /** Stable hash of the rendered configuration (manifest / snapshot header). */
  std::uint64_t hash() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/** Written alongside every output; re-running it reproduces outputs bit-for-bit. */
struct RunManifest {
  std::string command;
  RunConfig config;
  std::string version;
  std::string timestamp;
  std::vector<std::string> outputs;

  std::string render_json() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// --- sample snapshots ---------------------------------------------------------
// binary, versioned header: magic, version, config hash, geometry, scalar kind

class SnapshotWriter {
 public:
  SnapshotWriter(const std::string& path, const RunConfig& cfg);
  ~SnapshotWriter();
  void append(const FieldConfig& c);
  std::int64_t count() const { return count_; }
  void close();

 private:
  struct Impl;
  Impl* impl_;
  std::int64_t count_ = 0;
};

std::vector<FieldConfig> load_snapshot(const std::string& path, const RunConfig& cfg);

}  // namespace ymh
