#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ymh/model.hpp"

namespace ymh {

struct SamplerPlan {
  int burnin_sweeps = 10000;
  int thinning = 10;
  int chains = 8;
  std::int64_t total_samples = 80000;  // retained, across chains
  double sigma_edge = 0.5;
  double sigma_site = 0.5;
  bool adapt = true;          // short frozen-before-measurement warm-up
  int adapt_sweeps = 1000;
  int reproject_every = 1000;  // in sweeps

  void validate() const;
};

struct AcceptanceStats {
  std::int64_t edge_proposals = 0;
  std::int64_t edge_accepts = 0;
  std::int64_t site_proposals = 0;
  std::int64_t site_accepts = 0;

  double edge_rate() const {
    return edge_proposals ? static_cast<double>(edge_accepts) / edge_proposals : 0.0;
  }
  double site_rate() const {
    return site_proposals ? static_cast<double>(site_accepts) / site_proposals : 0.0;
  }
};

class ChainState {
 public:
  ChainState(const ModelParams& p, std::uint64_t seed);

  FieldConfig& config() { return config_; }
  const FieldConfig& config() const { return config_; }
  Rng& rng() { return rng_; }
  const AcceptanceStats& stats() const { return stats_; }
  std::int64_t sweeps() const { return sweeps_; }

  void metropolis_edge_update(std::int64_t link, double sigma);
  void metropolis_site_update(std::int32_t x, double sigma);

  /** One systematic sweep: all links, then all sites. */
  void sweep(double sigma_edge, double sigma_site);

  void reset_stats() { stats_ = {}; }
  void reproject_all();

 private:
  const ModelParams* params_;
  FieldConfig config_;
  Rng rng_;
  AcceptanceStats stats_;
  std::int64_t sweeps_ = 0;
};

/**
 * Per-sample sink. May be invoked concurrently from different chains/blocks;
 * calls within one chain arrive in index order. (chain, index) identifies the
 * sample independently of the thread count.
 */
using SampleSink = std::function<void(int chain, std::int64_t index, const FieldConfig&)>;

/** Fixed shard count of the iid sampler; the stream layout never depends on threads. */
inline constexpr int kIidBlocks = 64;

/** Samples emitted by iid_product_sample into block `b` out of a total of n. */
std::int64_t iid_block_size(std::int64_t n, int b);

struct RunDiagnostics {
  std::vector<AcceptanceStats> per_chain;
  std::vector<double> sigma_edge_used;
  std::vector<double> sigma_site_used;
  double rhat = 0.0;  // split-chain potential scale reduction of mean Re Tr Q_p
};

/**
 * Runs `plan.chains` chains (seeded seed, seed+1, ...), burn-in then emission
 * of every `thinning`-th sweep. Deterministic given the seed; chains may run
 * on `threads` OS threads, sink calls are serialized.
 */
RunDiagnostics run_chain(const ModelParams& p, const SamplerPlan& plan, std::uint64_t seed,
                         const SampleSink& sink, int threads = 1);

/** Exact iid sampler for beta = kappa = 0; rejects other couplings. */
void iid_product_sample(const ModelParams& p, std::uint64_t seed, std::int64_t n,
                        const SampleSink& sink, int threads = 1);

}  // namespace ymh
