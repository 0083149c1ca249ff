#include "satsim/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace satsim::estimation {

double estimate_t_sat(std::span<const double> x_a, std::span<const double> x_b,
                      double gain, double eta_b, double v_a) {
  if (x_a.empty() || x_a.size() != x_b.size()) {
    throw std::invalid_argument("estimate_t_sat: blocks must be non-empty and equal length");
  }
  if (!(gain > 0.0) || !(eta_b > 0.0) || !(v_a > 0.0)) {
    throw std::invalid_argument("estimate_t_sat: gain, eta_b and v_a must be > 0");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x_a.size(); ++i) acc += x_a[i] * x_b[i];
  const double cov = acc / static_cast<double>(x_a.size());
  return 2.0 * cov * cov / (gain * eta_b * v_a * v_a);
}

double estimate_xi_sat(double v_b_sat, double t_sat, double gain, double eta_b,
                       double v_a, double v_ele) {
  if (!(t_sat > 0.0)) {
    throw std::domain_error("estimate_xi_sat: undefined for t_sat <= 0");
  }
  return 2.0 / (gain * eta_b * t_sat) *
         (v_b_sat - gain * (eta_b * t_sat / 2.0) * v_a - 1.0 - v_ele);
}

double block_variance(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("block_variance: need at least 2 samples");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size() - 1);
}

namespace {

std::pair<double, double> one_block(const protocol::ProtocolParams& p, const attack::AttackParams& a,
                                    std::size_t block_size, std::uint64_t master_seed,
                                    std::uint64_t block_index) {
  Rng rng(Rng::derive_stream(master_seed, block_index));
  auto [x_a, x_b] = attack::attack_run(p, a, block_size, rng);
  const double t = estimate_t_sat(x_a.values, x_b.values, a.gain, p.eta_b, p.v_a);
  const double v_b = block_variance(x_b.values);
  const double xi = estimate_xi_sat(v_b, t, a.gain, p.eta_b, p.v_a, p.v_ele);
  return {t, xi};
}

}  // namespace

ChannelEstimate block_estimates(const protocol::ProtocolParams& p, const attack::AttackParams& a,
                                std::size_t blocks, std::size_t block_size,
                                std::uint64_t master_seed, int threads) {
  if (blocks < 2) throw std::invalid_argument("block_estimates: need at least 2 blocks");
  if (block_size < 2) throw std::invalid_argument("block_estimates: block_size too small");

  unsigned n_workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(blocks));

  ChannelEstimate est;
  est.per_block.resize(blocks);
  if (n_workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      est.per_block[b] = one_block(p, a, block_size, master_seed, b);
    }
  } else {
    // Independent per-block streams claimed through a shared counter:
    // results are identical for any worker count, only the wall time moves.
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_workers);
    auto worker = [&](unsigned slot) {
      try {
        for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
          est.per_block[b] = one_block(p, a, block_size, master_seed, b);
        }
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  double mt = 0.0, mx = 0.0;
  for (const auto& [t, xi] : est.per_block) {
    mt += t;
    mx += xi;
  }
  mt /= static_cast<double>(blocks);
  mx /= static_cast<double>(blocks);
  double st = 0.0, sx = 0.0;
  for (const auto& [t, xi] : est.per_block) {
    st += (t - mt) * (t - mt);
    sx += (xi - mx) * (xi - mx);
  }
  est.t_sat = mt;
  est.xi_sat = mx;
  est.std_t = std::sqrt(st / static_cast<double>(blocks - 1));
  est.std_xi = std::sqrt(sx / static_cast<double>(blocks - 1));
  return est;
}

AnalyticEstimate analytic_estimates(const protocol::ProtocolParams& p, const attack::AttackParams& a,
                                    const snu::QuadratureOptions& opts) {
  p.validate();
  a.validate();
  if (!(a.gain > 0.0)) throw std::invalid_argument("analytic_estimates: gain must be > 0");
  if (!(p.v_a > 0.0)) throw std::invalid_argument("analytic_estimates: v_a must be > 0");

  // Pre-clamp signal at Bob: Y = scale*X_A + offset + N(0, noise), where the
  // noise collects the heterodyne and preparation vacua, Eve's technical
  // noise, the strategy noise and Bob's detection terms.
  const double scale = std::sqrt(p.eta_b * a.gain / 2.0);
  const double offset = std::sqrt(p.eta_b) * a.delta_x();
  const double s = attack::strategy_noise_variance(a);
  const double noise = p.eta_b * ((a.gain / 2.0) * (2.0 + a.tech_noise) + 1.0 + s) +
                       (1.0 - p.eta_b) + p.v_ele;

  const double cov = snu::clipped_covariance(scale, offset, p.v_a, noise, p.limits, opts);
  const double t_sat = 2.0 * cov * cov / (a.gain * p.eta_b * p.v_a * p.v_a);
  const auto mom = snu::clipped_moments({offset, scale * scale * p.v_a + noise}, p.limits);
  if (!(t_sat > 0.0)) {
    throw std::domain_error("analytic_estimates: t_sat collapsed to zero (output fully saturated)");
  }
  const double xi_sat = estimate_xi_sat(mom.variance, t_sat, a.gain, p.eta_b, p.v_a, p.v_ele);
  return {t_sat, xi_sat};
}

}  // namespace satsim::estimation
