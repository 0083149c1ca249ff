#include "satsim/snu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace satsim::snu {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

void ShotNoiseCalibration::validate() const {
  if (!(volts_per_sqrt_n0 > 0.0)) {
    throw std::invalid_argument("shot-noise calibration: volts_per_sqrt_n0 must be > 0");
  }
}

void DetectorLimits::validate() const {
  if (!(alpha1 < alpha2)) {
    throw std::invalid_argument("detector limits: require alpha1 < alpha2");
  }
}

void DetectorLimits::validate_detector() const {
  validate();
  if (!(alpha1 < 0.0) || !(alpha2 > 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2)) {
    throw std::invalid_argument("detector limits: physical range requires finite alpha1 < 0 < alpha2");
  }
}

void GaussianSpec::validate() const {
  if (!(variance >= 0.0)) {
    throw std::invalid_argument("gaussian spec: variance must be >= 0");
  }
}

double volts_to_snu(double volts, const ShotNoiseCalibration& cal) {
  cal.validate();
  return volts / cal.volts_per_sqrt_n0;
}

double snu_to_volts(double snu, const ShotNoiseCalibration& cal) {
  cal.validate();
  return snu * cal.volts_per_sqrt_n0;
}

double clamp_quadrature(double x, const DetectorLimits& limits) {
  limits.validate();
  return std::clamp(x, limits.alpha1, limits.alpha2);
}

double normal_pdf(double z) {
  if (!std::isfinite(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
  if (z == std::numeric_limits<double>::infinity()) return 1.0;
  if (z == -std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

double clipped_mean(double mean, double variance, const DetectorLimits& limits) {
  const double a = limits.alpha1;
  const double b = limits.alpha2;
  if (variance <= 0.0) return std::clamp(mean, a, b);
  const double s = std::sqrt(variance);
  const double za = (a - mean) / s;
  const double zb = (b - mean) / s;
  const double cdf_a = normal_cdf(za);
  const double sf_b = normal_cdf(-zb);  // P(X > b)
  const double pdf_a = normal_pdf(za);
  const double pdf_b = normal_pdf(zb);
  const double p_mid = std::max(0.0, normal_cdf(zb) - cdf_a);
  double m = mean * p_mid + s * (pdf_a - pdf_b);
  if (cdf_a > 0.0) m += a * cdf_a;  // guard: a may be -inf with cdf_a == 0
  if (sf_b > 0.0) m += b * sf_b;
  return m;
}

Moments clipped_moments(const GaussianSpec& g, const DetectorLimits& limits) {
  g.validate();
  limits.validate();
  const double a = limits.alpha1;
  const double b = limits.alpha2;
  if (g.variance <= 0.0) {
    return {std::clamp(g.mean, a, b), 0.0};
  }
  const double s = std::sqrt(g.variance);
  const double za = (a - g.mean) / s;
  const double zb = (b - g.mean) / s;
  const double cdf_a = normal_cdf(za);
  const double sf_b = normal_cdf(-zb);
  const double pdf_a = normal_pdf(za);
  const double pdf_b = normal_pdf(zb);
  const double p_mid = std::max(0.0, normal_cdf(zb) - cdf_a);

  double m1 = g.mean * p_mid + s * (pdf_a - pdf_b);
  if (cdf_a > 0.0) m1 += a * cdf_a;
  if (sf_b > 0.0) m1 += b * sf_b;

  // E[X^2 1{a<=X<=b}] via integral z^2 phi(z) = Phi(z) - z phi(z) pieces.
  double zpa = (pdf_a > 0.0) ? za * pdf_a : 0.0;
  double zpb = (pdf_b > 0.0) ? zb * pdf_b : 0.0;
  const double ex2_mid = g.mean * g.mean * p_mid + 2.0 * g.mean * s * (pdf_a - pdf_b) +
                         g.variance * (p_mid + zpa - zpb);
  double m2 = ex2_mid;
  if (cdf_a > 0.0) m2 += a * a * cdf_a;
  if (sf_b > 0.0) m2 += b * b * sf_b;

  return {m1, std::max(0.0, m2 - m1 * m1)};
}

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix, tracking only the
// first row of the eigenvector matrix (all that Golub-Welsch needs).
// d: diagonal, e: subdiagonal (e[n-1] unused), z: first-row accumulator.
bool tridiagonal_ql_first_row(int n, std::vector<double>& d, std::vector<double>& e,
                              std::vector<double>& z) {
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 64) return false;
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  return true;
}

// Golub-Welsch for the weight exp(-x^2): Jacobi matrix has zero diagonal and
// subdiagonal sqrt(k/2); eigenvalues are the nodes, weights are sqrt(pi)
// times the squared first eigenvector components. Symmetry is enforced
// afterwards so odd integrands cancel exactly.
GaussHermiteRule compute_gauss_hermite(int n) {
  std::vector<double> d(n, 0.0), e(n, 0.0), z(n, 0.0);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k / 2.0);
  z[0] = 1.0;
  if (!tridiagonal_ql_first_row(n, d, e, z)) {
    throw std::runtime_error("gauss_hermite: eigenvalue iteration failed to converge");
  }
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = d[idx[i]];
    rule.weights[i] = kSqrtPi * z[idx[i]] * z[idx[i]];
  }
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1 || order > 2048) {
    throw std::invalid_argument("gauss_hermite: order must be in [1, 2048]");
  }
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, compute_gauss_hermite(order)).first;
  }
  return it->second;
}

namespace {

double clipped_covariance_once(double scale, double offset, double x_var, double n_var,
                               const DetectorLimits& limits, int order) {
  const GaussHermiteRule& rule = gauss_hermite(order);
  const double sx = std::sqrt(2.0 * x_var);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = sx * rule.nodes[i];
    acc += rule.weights[i] * x * clipped_mean(scale * x + offset, n_var, limits);
  }
  return acc / kSqrtPi;
}

// Closed form for Cov(X, clamp(aX + c)) with X ~ N(0, x_var): split the
// expectation at the clamp corners x1 = (alpha1-c)/a, x2 = (alpha2-c)/a.
double clipped_covariance_degenerate(double scale, double offset, double x_var,
                                     const DetectorLimits& limits) {
  if (scale == 0.0) return 0.0;
  const double s = std::sqrt(x_var);
  double lo = (limits.alpha1 - offset) / scale;
  double hi = (limits.alpha2 - offset) / scale;
  if (scale < 0.0) std::swap(lo, hi);
  const double zl = lo / s;
  const double zh = hi / s;
  const double pdf_l = normal_pdf(zl);
  const double pdf_h = normal_pdf(zh);
  const double p_mid = std::max(0.0, normal_cdf(zh) - normal_cdf(zl));
  // E[X (aX + c) 1{lo<X<hi}] with E[X 1] and E[X^2 1] closed forms
  const double ex1 = s * (pdf_l - pdf_h);
  double zpl = (pdf_l > 0.0) ? zl * pdf_l : 0.0;
  double zph = (pdf_h > 0.0) ? zh * pdf_h : 0.0;
  const double ex2 = x_var * (p_mid + zpl - zph);
  double cov = scale * ex2 + offset * ex1;
  // clamped branches contribute const * E[X 1{branch}]
  const double lo_val = (scale > 0.0) ? limits.alpha1 : limits.alpha2;
  const double hi_val = (scale > 0.0) ? limits.alpha2 : limits.alpha1;
  cov += lo_val * (-s * pdf_l);
  cov += hi_val * (s * pdf_h);
  return cov;
}

}  // namespace

double clipped_covariance(double scale, double offset, double x_var, double n_var,
                          const DetectorLimits& limits, const QuadratureOptions& opts) {
  limits.validate();
  if (!(x_var > 0.0)) throw std::invalid_argument("clipped_covariance: x_var must be > 0");
  if (n_var < 0.0) throw std::invalid_argument("clipped_covariance: n_var must be >= 0");
  if (n_var == 0.0) {
    return clipped_covariance_degenerate(scale, offset, x_var, limits);
  }
  const double coarse = clipped_covariance_once(scale, offset, x_var, n_var, limits, opts.order);
  const double fine = clipped_covariance_once(scale, offset, x_var, n_var, limits, opts.check_order);
  const double denom = std::max(1.0, std::abs(fine));
  if (std::abs(fine - coarse) > opts.rel_tol * denom) {
    std::ostringstream msg;
    msg << "clipped_covariance: quadrature not converged at orders " << opts.order << "/"
        << opts.check_order << " (discrepancy " << std::abs(fine - coarse) / denom << ")";
    throw std::runtime_error(msg.str());
  }
  return fine;
}

}  // namespace satsim::snu
