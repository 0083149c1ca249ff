#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "satsim/protocol.hpp"
#include "satsim/rng.hpp"

namespace satsim::attack {

enum class Strategy { coherent, incoherent };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

// Reference setup constants for the incoherent injection stage. The local
// oscillator level is derived from the observed anchor: an injected average
// power of 5.55 uW (1 MHz pulses at 1550.12 nm) drives the equivalent
// displacement exactly to the 106 sqrt(N0) detection limit.
namespace setup {
inline constexpr double kEtaB = 0.55;
inline constexpr double kSplitterTbs = 0.49;
inline constexpr double kAnchorPowerW = 5.55e-6;
inline constexpr double kPulseRateHz = 1.0e6;
inline constexpr double kWavelengthM = 1550.12e-9;
inline constexpr double kDetectionLimitSnu = 106.0;
inline constexpr double kPhotonEnergyJ = 6.62607015e-34 * 2.99792458e8 / kWavelengthM;
inline constexpr double kAnchorPhotonsPerPulse = kAnchorPowerW / kPulseRateHz / kPhotonEnergyJ;
inline constexpr double kLoPhotonsPerPulse =
    kEtaB * ((1.0 - 2.0 * kSplitterTbs) * kAnchorPhotonsPerPulse / kDetectionLimitSnu) *
    ((1.0 - 2.0 * kSplitterTbs) * kAnchorPhotonsPerPulse / kDetectionLimitSnu);
}  // namespace setup

// Phase-drift model of the interferometric displacement stage plus the
// empirically fitted quadratic excess-noise coefficient of that stage.
//
// The default quad_coeff reproduces the phase-compensation-limited setup in
// which no displacement/gain pair passes the success conditions anywhere in
// 0-100 km. ideal_locking() models the same stage with perfect phase lock
// (drift contribution removed, quadratic coefficient fitted so the minimum
// feasible distance lands at 50 km).
struct CoherentNoiseModel {
  double drift_rate_rad_per_s = 2.0 * 3.14159265358979323846;  // 2*pi per second
  double latency_s = 500e-6;                                   // feedback latency
  // Fitted via tools/calibrate: smallest coefficient that defeats the attack
  // at every distance in 0-100 km, times a 1.3 safety margin.
  double quad_coeff = 1.3288e-3;  // N0 per (sqrt(N0))^2 of displacement
  static CoherentNoiseModel ideal_locking();
  void validate() const;
};

// Laser-injection model: the injected intensity maps to an equivalent
// displacement through the splitter imbalance, and the light contributes
// excess noise linear in that displacement.
struct IncoherentModel {
  // Fitted via tools/calibrate so the minimum feasible attack distance under
  // the full success conditions lands at 35 km (just below, so the 35 km
  // sweep point itself is feasible).
  double lin_coeff = 2.1950e-2;  // N0 per sqrt(N0) of displacement
  double eta_b = setup::kEtaB;
  double i_lo = setup::kLoPhotonsPerPulse;  // photons per pulse
  double t_bs = setup::kSplitterTbs;  // effective transmittance for the injected light
  void validate() const;
};

struct AttackParams {
  Strategy strategy = Strategy::incoherent;
  double delta = 0.0;       // total displacement magnitude (sqrt(N0))
  double gain = 2.0;        // amplification G
  double tech_noise = 0.0;  // Alice/Eve technical noise variance (N0)
  bool toward_upper_limit = false;  // displacement aimed at alpha2 instead of alpha1
  CoherentNoiseModel coherent{};
  IncoherentModel incoherent{};

  // Per-quadrature displacement, signed toward the targeted limit.
  double delta_x() const;
  void validate() const;
};

// Eve's heterodyne intercept: X_M = X_A + X_0 + X_0', adding two independent
// unit-variance vacuum terms (preparation and the heterodyne split).
protocol::SampleBlock eve_heterodyne(const protocol::SampleBlock& x_a, Rng& rng);

// Resent state: X_E = sqrt(G/2) (X_M + N_tech) + Delta_X + N_prep.
protocol::SampleBlock eve_resend(const protocol::SampleBlock& x_m, const AttackParams& a, Rng& rng);

// Equivalent displacement of an injected incoherent intensity (photons per
// pulse): Delta = sqrt(eta_b / I_lo) (1 - 2 T_bs) I. Odd in (1 - 2 T_bs).
double displacement_from_intensity(double intensity, const IncoherentModel& m);

// Photon number per pulse for a given average power, repetition rate and
// wavelength; used to express injected laser power in displacement units.
double photons_per_pulse(double power_watts, double rep_rate_hz, double wavelength_m);

// Residual phase error accumulated within one feedback interval.
double coherent_phase_error(const CoherentNoiseModel& m);

struct ResidualNoise {
  double fluctuation_std;  // sqrt(N0), displacement leakage delta*sin(dphi)
  double added_variance;   // N0 at Eve's output plane
};

// Displacement-scaled residual of the coherent stage: the phase-error leakage
// plus the fitted quadratic term.
ResidualNoise coherent_residual_noise(double delta, const CoherentNoiseModel& m);

// Shot noise of the injected laser, linear in the equivalent displacement.
double incoherent_excess_noise(double delta, const IncoherentModel& m);

// Strategy-dependent extra Gaussian variance injected at Eve's output plane.
double strategy_noise_variance(const AttackParams& a);

// Full intercept-resend pipeline. Eve resends adjacent to Bob, so no channel
// loss applies after the resend stage; p.t plays no role here.
std::pair<protocol::SampleBlock, protocol::SampleBlock> attack_run(
    const protocol::ProtocolParams& p, const AttackParams& a, std::size_t n, Rng& rng);

}  // namespace satsim::attack
