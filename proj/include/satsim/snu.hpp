#pragma once

#include <utility>
#include <vector>

namespace satsim::snu {

// All quadrature amplitudes are expressed in sqrt(N0) and variances in N0,
// where N0 = 1 is the shot-noise variance. Volts appear only at the
// calibration boundary below.
struct ShotNoiseCalibration {
  double volts_per_sqrt_n0 = 2.5 / 106.0;  // -2.5 V detection limit at -106 sqrt(N0)
  void validate() const;
};

// Linear range of the homodyne electronics, [alpha1, alpha2] in sqrt(N0).
// The math routines accept any alpha1 < alpha2 (including +-inf); the
// physical-detector constraint alpha1 < 0 < alpha2 is enforced separately
// at configuration load.
struct DetectorLimits {
  double alpha1;
  double alpha2;
  void validate() const;           // alpha1 < alpha2, not both equal
  void validate_detector() const;  // alpha1 < 0 < alpha2, both finite
};

struct GaussianSpec {
  double mean = 0.0;      // sqrt(N0)
  double variance = 1.0;  // N0
  void validate() const;
};

struct Moments {
  double mean;
  double variance;
};

double volts_to_snu(double volts, const ShotNoiseCalibration& cal);
double snu_to_volts(double snu, const ShotNoiseCalibration& cal);

// Hard clamp of one quadrature sample to the detector's linear range.
double clamp_quadrature(double x, const DetectorLimits& limits);

// Standard-normal pdf/cdf, erfc-backed for far-tail accuracy.
double normal_pdf(double z);
double normal_cdf(double z);

// Mean of clamp(X) for X ~ N(mean, variance), exact closed form.
double clipped_mean(double mean, double variance, const DetectorLimits& limits);

// Mean and variance of clamp(X) for X ~ g, exact closed form.
// variance == 0 degenerates to the deterministic clamp of the mean.
Moments clipped_moments(const GaussianSpec& g, const DetectorLimits& limits);

// Gauss-Hermite rule for integral f(t) exp(-t^2) dt ~ sum w_i f(t_i).
// Rules are computed once per order and cached (thread-safe).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int order);

struct QuadratureOptions {
  int order = 128;
  int check_order = 256;
  double rel_tol = 1e-9;  // discrepancy between the two orders above this is an error
};

// Cov(X, clamp(a*X + c + N)) for X ~ N(0, x_var), N ~ N(0, n_var) independent.
// Outer Gauss-Hermite over X, inner conditional clipped mean in closed form;
// n_var == 0 is evaluated fully in closed form (the integrand kink would
// spoil quadrature convergence).
double clipped_covariance(double scale, double offset, double x_var, double n_var,
                          const DetectorLimits& limits,
                          const QuadratureOptions& opts = {});

}  // namespace satsim::snu
