#include "ymh/sampler.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "ymh/errors.hpp"

namespace ymh {

void SamplerPlan::validate() const {
  if (burnin_sweeps < 0 || thinning < 1 || chains < 1 || total_samples < 0)
    throw ParameterError("invalid sampler plan");
  if (sigma_edge <= 0 || sigma_site <= 0) throw ParameterError("proposal scales must be positive");
}

ChainState::ChainState(const ModelParams& p, std::uint64_t seed)
    : params_(&p), config_(p.geometry, p.group.N), rng_(seed) {
  // hot start from the product measure
  for (std::int64_t l = 0; l < config_.num_links(); ++l)
    config_.link(l) = haar_sample(p.group, rng_);
  if (p.higgs.sphere()) {
    for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x)
      config_.phi(x) = sphere_sample(p.higgs, rng_);
  } else {
    FlatSiteSampler fs(p.higgs);
    for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x) config_.phi(x) = fs(rng_);
  }
}

void ChainState::metropolis_edge_update(std::int64_t link, double sigma) {
  const ModelParams& p = *params_;
  OrientedEdge e = p.geometry.link_edge(link);
  const Matrix old = config_.link(link);
  const double s_old = local_action_edge(p, config_, e);
  Matrix xi = sigma * gaussian_lie(p.group, rng_);
  config_.link(link) = xi.exp() * old;
  const double s_new = local_action_edge(p, config_, e);
  ++stats_.edge_proposals;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (std::log(unif(rng_) + 1e-300) < s_new - s_old) {
    ++stats_.edge_accepts;
  } else {
    config_.link(link) = old;
  }
}

void ChainState::metropolis_site_update(std::int32_t x, double sigma) {
  const ModelParams& p = *params_;
  const Vector old = config_.phi(x);
  const double s_old = local_action_site(p, config_, x);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector z(p.group.N);
  for (int i = 0; i < p.group.N; ++i)
    z(i) = p.higgs.complex_scalars ? Complex(gauss(rng_), gauss(rng_))
                                   : Complex(gauss(rng_), 0.0);
  if (p.higgs.sphere()) {
    // geodesic step with an isotropic tangent Gaussian; symmetric by isotropy
    Vector w = sigma * sphere_project(old, z);
    double theta = w.norm();
    if (theta > 1e-14)
      config_.phi(x) = std::cos(theta) * old + (std::sin(theta) / theta) * w;
  } else {
    config_.phi(x) = old + sigma * z;
  }
  const double s_new = local_action_site(p, config_, x);
  ++stats_.site_proposals;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (std::log(unif(rng_) + 1e-300) < s_new - s_old) {
    ++stats_.site_accepts;
  } else {
    config_.phi(x) = old;
  }
}

void ChainState::sweep(double sigma_edge, double sigma_site) {
  const ModelParams& p = *params_;
  for (std::int64_t l = 0; l < config_.num_links(); ++l) metropolis_edge_update(l, sigma_edge);
  for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x)
    metropolis_site_update(x, sigma_site);
  ++sweeps_;
}

void ChainState::reproject_all() {
  const ModelParams& p = *params_;
  for (std::int64_t l = 0; l < config_.num_links(); ++l)
    config_.link(l) = reproject(p.group, config_.link(l));
  if (p.higgs.sphere())
    for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x)
      config_.phi(x) /= config_.phi(x).norm();
}

namespace {

double mean_plaquette(const ModelParams& p, const FieldConfig& c) {
  double acc = 0.0;
  auto plqs = p.geometry.positive_plaquettes();
  for (const auto& pl : plqs)
    acc += c.path_product({pl.edges.begin(), pl.edges.end()}).trace().real();
  return acc / static_cast<double>(plqs.size());
}

/** Split-chain R-hat on scalar series (one series per chain). */
double split_rhat(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> halves;
  for (const auto& ch : chains) {
    if (ch.size() < 4) return 0.0;
    std::size_t h = ch.size() / 2;
    halves.emplace_back(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(h));
    halves.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(h),
                        ch.begin() + static_cast<std::ptrdiff_t>(2 * h));
  }
  const std::size_t m = halves.size();
  const std::size_t n = halves[0].size();
  std::vector<double> means(m);
  double grand = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (double v : halves[i]) s += v;
    means[i] = s / static_cast<double>(n);
    grand += means[i];
  }
  grand /= static_cast<double>(m);
  double B = 0.0, W = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    B += (means[i] - grand) * (means[i] - grand);
    double w = 0.0;
    for (double v : halves[i]) w += (v - means[i]) * (v - means[i]);
    W += w / (static_cast<double>(n) - 1.0);
  }
  B *= static_cast<double>(n) / (static_cast<double>(m) - 1.0);
  W /= static_cast<double>(m);
  if (W <= 0.0) return 1.0;
  double var = (static_cast<double>(n) - 1.0) / static_cast<double>(n) * W +
               B / static_cast<double>(n);
  return std::sqrt(var / W);
}

double tune_sigma(ChainState& st, bool edge, double sigma0, int sweeps, double sig_other) {
  // crude doubling/halving toward 30-60% acceptance, frozen afterwards
  double sigma = sigma0;
  const int block = 50;
  for (int done = 0; done < sweeps; done += block) {
    st.reset_stats();
    for (int k = 0; k < block; ++k)
      st.sweep(edge ? sigma : sig_other, edge ? sig_other : sigma);
    double rate = edge ? st.stats().edge_rate() : st.stats().site_rate();
    if (rate < 0.30)
      sigma *= 0.7;
    else if (rate > 0.60)
      sigma *= 1.4;
    sigma = std::clamp(sigma, 1e-4, 10.0);
  }
  return sigma;
}

}  // namespace

RunDiagnostics run_chain(const ModelParams& p, const SamplerPlan& plan, std::uint64_t seed,
                         const SampleSink& sink, int threads) {
  plan.validate();
  RunDiagnostics diag;
  diag.per_chain.resize(static_cast<std::size_t>(plan.chains));
  diag.sigma_edge_used.resize(static_cast<std::size_t>(plan.chains));
  diag.sigma_site_used.resize(static_cast<std::size_t>(plan.chains));
  std::vector<std::vector<double>> plaq_series(static_cast<std::size_t>(plan.chains));

  const std::int64_t per_chain = plan.total_samples / plan.chains;
  const std::int64_t remainder = plan.total_samples % plan.chains;

  auto run_one = [&](int chain) {
    ChainState st(p, seed + static_cast<std::uint64_t>(chain));
    double se = plan.sigma_edge, ss = plan.sigma_site;
    if (plan.adapt) {
      se = tune_sigma(st, true, se, plan.adapt_sweeps / 2, ss);
      ss = tune_sigma(st, false, ss, plan.adapt_sweeps / 2, se);
    }
    diag.sigma_edge_used[static_cast<std::size_t>(chain)] = se;
    diag.sigma_site_used[static_cast<std::size_t>(chain)] = ss;
    for (int k = 0; k < plan.burnin_sweeps; ++k) {
      st.sweep(se, ss);
      if (plan.reproject_every > 0 && st.sweeps() % plan.reproject_every == 0)
        st.reproject_all();
    }
    st.reset_stats();
    std::int64_t want = per_chain + (chain < remainder ? 1 : 0);
    for (std::int64_t i = 0; i < want; ++i) {
      for (int t = 0; t < plan.thinning; ++t) {
        st.sweep(se, ss);
        if (plan.reproject_every > 0 && st.sweeps() % plan.reproject_every == 0)
          st.reproject_all();
      }
      plaq_series[static_cast<std::size_t>(chain)].push_back(mean_plaquette(p, st.config()));
      sink(chain, i, st.config());
    }
    diag.per_chain[static_cast<std::size_t>(chain)] = st.stats();
  };

  if (threads <= 1 || plan.chains == 1) {
    for (int c = 0; c < plan.chains; ++c) run_one(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int nt = std::min(threads, plan.chains);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < plan.chains; c = next.fetch_add(1)) run_one(c);
      });
    for (auto& th : pool) th.join();
  }

  diag.rhat = plan.chains >= 2 ? split_rhat(plaq_series) : 0.0;
  return diag;
}

std::int64_t iid_block_size(std::int64_t n, int b) {
  const std::int64_t per = n / kIidBlocks;
  return per + (b < n % kIidBlocks ? 1 : 0);
}

void iid_product_sample(const ModelParams& p, std::uint64_t seed, std::int64_t n,
                        const SampleSink& sink, int threads) {
  if (p.beta != 0.0 || p.kappa != 0.0)
    throw ParameterError("iid product sampling requires beta = kappa = 0");
  const bool sphere = p.higgs.sphere();
  std::optional<FlatSiteSampler> flat;
  if (!sphere) flat.emplace(p.higgs);

  // fixed block partition: the (block, index) stream layout is identical for
  // every thread count, so reductions never depend on parallelism
  auto run_block = [&](int block) {
    const std::int64_t count = iid_block_size(n, block);
    if (count == 0) return;
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(block + 1));
    FieldConfig c(p.geometry, p.group.N);
    for (std::int64_t i = 0; i < count; ++i) {
      for (std::int64_t l = 0; l < c.num_links(); ++l) c.link(l) = haar_sample(p.group, rng);
      for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x)
        c.phi(x) = sphere ? sphere_sample(p.higgs, rng) : (*flat)(rng);
      sink(block, i, c);
    }
  };

  if (threads <= 1) {
    for (int b = 0; b < kIidBlocks; ++b) run_block(b);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < std::min(threads, kIidBlocks); ++t)
    pool.emplace_back([&] {
      for (int b = next.fetch_add(1); b < kIidBlocks; b = next.fetch_add(1)) run_block(b);
    });
  for (auto& th : pool) th.join();
}

}  // namespace ymh
