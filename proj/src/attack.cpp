#include "satsim/attack.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace satsim::attack {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

const char* to_string(Strategy s) {
  return s == Strategy::coherent ? "coherent" : "incoherent";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "coherent") return Strategy::coherent;
  if (name == "incoherent") return Strategy::incoherent;
  throw std::invalid_argument("unknown strategy '" + name + "' (expected coherent|incoherent)");
}

CoherentNoiseModel CoherentNoiseModel::ideal_locking() {
  CoherentNoiseModel m;
  m.drift_rate_rad_per_s = 0.0;
  m.latency_s = 0.0;
  m.quad_coeff = 2.0381e-4;  // fitted: minimum feasible distance at 50 km
  return m;
}

void CoherentNoiseModel::validate() const {
  if (drift_rate_rad_per_s < 0.0 || latency_s < 0.0 || quad_coeff < 0.0) {
    throw std::invalid_argument("coherent noise model: drift, latency and quad_coeff must be >= 0");
  }
}

void IncoherentModel::validate() const {
  if (lin_coeff < 0.0) throw std::invalid_argument("incoherent model: lin_coeff must be >= 0");
  if (!(i_lo > 0.0)) throw std::invalid_argument("incoherent model: i_lo must be > 0");
  if (!(t_bs >= 0.0 && t_bs <= 1.0)) throw std::invalid_argument("incoherent model: t_bs must be in [0, 1]");
  if (!(eta_b > 0.0 && eta_b <= 1.0)) throw std::invalid_argument("incoherent model: eta_b must be in (0, 1]");
}

double AttackParams::delta_x() const {
  const double sign = toward_upper_limit ? 1.0 : -1.0;
  return sign * delta * kInvSqrt2;
}

void AttackParams::validate() const {
  if (!(gain >= 0.0)) throw std::invalid_argument("attack: gain must be >= 0");
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::invalid_argument("attack: delta must be finite and >= 0");
  }
  if (!(tech_noise >= 0.0)) throw std::invalid_argument("attack: tech_noise must be >= 0");
  coherent.validate();
  incoherent.validate();
}

protocol::SampleBlock eve_heterodyne(const protocol::SampleBlock& x_a, Rng& rng) {
  protocol::SampleBlock out;
  out.seed = rng.seed();
  out.block_index = x_a.block_index;
  out.values.resize(x_a.values.size());
  for (std::size_t i = 0; i < x_a.values.size(); ++i) {
    out.values[i] = x_a.values[i] + rng.gaussian() + rng.gaussian();
  }
  return out;
}

protocol::SampleBlock eve_resend(const protocol::SampleBlock& x_m, const AttackParams& a, Rng& rng) {
  a.validate();
  protocol::SampleBlock out;
  out.seed = rng.seed();
  out.block_index = x_m.block_index;
  out.values.resize(x_m.values.size());
  const double amp = std::sqrt(a.gain / 2.0);
  const double tech = std::sqrt(a.tech_noise);
  const double dx = a.delta_x();
  for (std::size_t i = 0; i < x_m.values.size(); ++i) {
    double v = x_m.values[i];
    if (tech > 0.0) v += tech * rng.gaussian();
    out.values[i] = amp * v + dx + rng.gaussian();
  }
  return out;
}

double displacement_from_intensity(double intensity, const IncoherentModel& m) {
  m.validate();
  if (intensity < 0.0) throw std::invalid_argument("displacement_from_intensity: intensity must be >= 0");
  return std::sqrt(m.eta_b / m.i_lo) * (1.0 - 2.0 * m.t_bs) * intensity;
}

double photons_per_pulse(double power_watts, double rep_rate_hz, double wavelength_m) {
  if (power_watts < 0.0 || !(rep_rate_hz > 0.0) || !(wavelength_m > 0.0)) {
    throw std::invalid_argument("photons_per_pulse: invalid power, rate or wavelength");
  }
  constexpr double kPlanck = 6.62607015e-34;
  constexpr double kSpeedOfLight = 2.99792458e8;
  const double photon_energy = kPlanck * kSpeedOfLight / wavelength_m;
  return power_watts / rep_rate_hz / photon_energy;
}

double coherent_phase_error(const CoherentNoiseModel& m) {
  m.validate();
  return m.drift_rate_rad_per_s * m.latency_s;
}

ResidualNoise coherent_residual_noise(double delta, const CoherentNoiseModel& m) {
  if (delta < 0.0) throw std::invalid_argument("coherent_residual_noise: delta must be >= 0");
  const double fluct = delta * std::sin(coherent_phase_error(m));
  return {fluct, fluct * fluct + m.quad_coeff * delta * delta};
}

double incoherent_excess_noise(double delta, const IncoherentModel& m) {
  m.validate();
  if (delta < 0.0) throw std::invalid_argument("incoherent_excess_noise: delta must be >= 0");
  return m.lin_coeff * delta;
}

double strategy_noise_variance(const AttackParams& a) {
  if (a.strategy == Strategy::coherent) {
    return coherent_residual_noise(a.delta, a.coherent).added_variance;
  }
  return incoherent_excess_noise(a.delta, a.incoherent);
}

std::pair<protocol::SampleBlock, protocol::SampleBlock> attack_run(
    const protocol::ProtocolParams& p, const AttackParams& a, std::size_t n, Rng& rng) {
  p.validate();
  a.validate();
  protocol::SampleBlock x_a = protocol::alice_modulate(n, p.v_a, rng);
  protocol::SampleBlock x_m = eve_heterodyne(x_a, rng);
  protocol::SampleBlock x_e = eve_resend(x_m, a, rng);
  const double s = strategy_noise_variance(a);
  if (s > 0.0) {
    const double sd = std::sqrt(s);
    for (auto& v : x_e.values) v += sd * rng.gaussian();
  }
  protocol::SampleBlock x_b = bob_homodyne(x_e, p, rng);
  return {std::move(x_a), std::move(x_b)};
}

}  // namespace satsim::attack
