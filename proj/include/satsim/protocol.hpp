#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "satsim/rng.hpp"
#include "satsim/snu.hpp"

namespace satsim::protocol {

// Gaussian-modulated coherent-state link parameters. Only one quadrature is
// simulated: the protocol is symmetric in X and P (the displacement splits
// evenly), so the second quadrature carries no extra information about the
// quantities studied here.
struct ProtocolParams {
  double v_a = 19.0;     // Alice modulation variance (N0)
  double eta_b = 0.55;   // Bob detection efficiency
  double v_ele = 0.01;   // electronic noise (N0)
  snu::DetectorLimits limits{-106.0, 3.3 * 106.0 / 2.5};
  double t = 1.0;           // channel transmittance (baseline path)
  double xi_channel = 0.01;  // true channel excess noise (N0, baseline path)
  void validate() const;
};

struct SampleBlock {
  std::vector<double> values;  // quadrature samples (sqrt(N0))
  std::uint64_t seed = 0;
  std::uint64_t block_index = 0;
};

// n i.i.d. draws from N(0, v_a). v_a == 0 yields the all-zero block.
SampleBlock alice_modulate(std::size_t n, double v_a, Rng& rng);

// T = 10^(-loss * d / 10); standard fiber is 0.2 dB/km.
double distance_to_transmittance(double d_km, double loss_db_per_km);

// Balanced homodyne measurement of the field arriving at Bob's input:
// X_B = clamp(sqrt(eta_B) x + sqrt(1 - eta_B) X_vac + X_ele, alpha1, alpha2).
// Detection noise is applied before the clamp; saturation is the final stage.
SampleBlock bob_homodyne(const SampleBlock& x_in, const ProtocolParams& p, Rng& rng);

// No-attack reference path: modulation -> fiber -> homodyne.
// Pre-clamp statistics: X_B = sqrt(eta_B T) X_A + N(0, 1 + eta_B T xi + v_ele).
std::pair<SampleBlock, SampleBlock> baseline_run(const ProtocolParams& p, std::size_t n, Rng& rng);

}  // namespace satsim::protocol
