#include "satsim/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace satsim::protocol {

void ProtocolParams::validate() const {
  if (!(v_a >= 0.0)) throw std::invalid_argument("protocol: v_a must be >= 0");
  if (!(eta_b > 0.0 && eta_b <= 1.0)) throw std::invalid_argument("protocol: eta_b must be in (0, 1]");
  if (!(v_ele >= 0.0)) throw std::invalid_argument("protocol: v_ele must be >= 0");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("protocol: t must be in (0, 1]");
  if (!(xi_channel >= 0.0)) throw std::invalid_argument("protocol: xi_channel must be >= 0");
  limits.validate();
}

SampleBlock alice_modulate(std::size_t n, double v_a, Rng& rng) {
  if (n == 0) throw std::invalid_argument("alice_modulate: n must be > 0");
  if (v_a < 0.0) throw std::invalid_argument("alice_modulate: v_a must be >= 0");
  SampleBlock block;
  block.seed = rng.seed();
  block.values.resize(n);
  if (v_a == 0.0) return block;  // degenerate modulation
  const double sigma = std::sqrt(v_a);
  for (auto& x : block.values) x = sigma * rng.gaussian();
  return block;
}

double distance_to_transmittance(double d_km, double loss_db_per_km) {
  if (d_km < 0.0) throw std::invalid_argument("distance_to_transmittance: d must be >= 0");
  if (!(loss_db_per_km > 0.0)) throw std::invalid_argument("distance_to_transmittance: loss must be > 0");
  return std::pow(10.0, -loss_db_per_km * d_km / 10.0);
}

SampleBlock bob_homodyne(const SampleBlock& x_in, const ProtocolParams& p, Rng& rng) {
  p.validate();
  SampleBlock out;
  out.seed = rng.seed();
  out.block_index = x_in.block_index;
  out.values.resize(x_in.values.size());
  const double sig = std::sqrt(p.eta_b);
  const double vac = std::sqrt(1.0 - p.eta_b);
  const double ele = std::sqrt(p.v_ele);
  for (std::size_t i = 0; i < x_in.values.size(); ++i) {
    double y = sig * x_in.values[i];
    if (vac > 0.0) y += vac * rng.gaussian();
    if (ele > 0.0) y += ele * rng.gaussian();
    out.values[i] = clamp_quadrature(y, p.limits);
  }
  return out;
}

std::pair<SampleBlock, SampleBlock> baseline_run(const ProtocolParams& p, std::size_t n, Rng& rng) {
  p.validate();
  SampleBlock x_a = alice_modulate(n, p.v_a, rng);
  // Field at Bob's input: sqrt(T) X_A plus the transmitted preparation vacuum,
  // loss vacuum and channel excess noise, which together carry variance
  // 1 + T xi.
  SampleBlock at_bob;
  at_bob.seed = rng.seed();
  at_bob.values.resize(n);
  const double sig = std::sqrt(p.t);
  const double noise = std::sqrt(1.0 + p.t * p.xi_channel);
  for (std::size_t i = 0; i < n; ++i) {
    at_bob.values[i] = sig * x_a.values[i] + noise * rng.gaussian();
  }
  SampleBlock x_b = bob_homodyne(at_bob, p, rng);
  return {std::move(x_a), std::move(x_b)};
}

}  // namespace satsim::protocol
