#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "satsim/attack.hpp"
#include "satsim/protocol.hpp"

namespace satsim::estimation {

// Channel parameters as Alice and Bob would estimate them from saturated
// homodyne data:
//   T_sat  = 2 <X_A X_B>^2 / (G eta_B V_A^2)
//   xi_sat = 2 / (G eta_B T_sat) (V_B - G (eta_B T_sat / 2) V_A - 1 - v_ele)
// xi_sat may come out negative and is reported raw; an artificially low noise
// estimate is exactly the attack's signature.
//
// Standing assumption: the shot-noise calibration itself is honest (the
// attacker does not tamper with the calibration phase), so N0 = 1 holds in
// both estimators.
struct ChannelEstimate {
  double t_sat = 0.0;
  double xi_sat = 0.0;
  std::vector<std::pair<double, double>> per_block;  // (t, xi) per block
  double std_t = 0.0;   // sample standard deviation across blocks
  double std_xi = 0.0;
};

// Empirical covariance uses the known-zero mean of Alice's modulation.
double estimate_t_sat(std::span<const double> x_a, std::span<const double> x_b,
                      double gain, double eta_b, double v_a);

double estimate_xi_sat(double v_b_sat, double t_sat, double gain, double eta_b,
                       double v_a, double v_ele);

// Sample variance (mean-subtracted, n-1 normalization) of Bob's block.
double block_variance(std::span<const double> values);

// Runs attack_run once per block with independent streams derived from
// master_seed; results are independent of scheduling and aggregated in block
// order. threads == 0 uses the hardware concurrency.
ChannelEstimate block_estimates(const protocol::ProtocolParams& p, const attack::AttackParams& a,
                                std::size_t blocks, std::size_t block_size,
                                std::uint64_t master_seed, int threads = 0);

struct AnalyticEstimate {
  double t_sat;
  double xi_sat;
};

// Deterministic evaluation of the estimators through the exact clipped
// statistics of the pre-clamp Gaussian mixture; the optimizer runs on this.
AnalyticEstimate analytic_estimates(const protocol::ProtocolParams& p, const attack::AttackParams& a,
                                    const snu::QuadratureOptions& opts = {});

}  // namespace satsim::estimation
