#include "satsim/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satsim::security {

namespace {
constexpr double kXiNegativeTolerance = 1e-6;  // estimates this far below zero count as 0
constexpr double kEigenTolerance = 1e-9;
}  // namespace

void SecurityParams::validate() const {
  if (!(v_a > 0.0)) throw std::invalid_argument("security: v_a must be > 0");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("security: t must be in (0, 1]");
  if (!(xi >= -kXiNegativeTolerance)) {
    throw std::invalid_argument("security: xi below the accepted negative tolerance");
  }
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("security: eta must be in (0, 1]");
  if (!(v_ele >= 0.0)) throw std::invalid_argument("security: v_ele must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("security: beta must be in (0, 1]");
}

double g_entropy(double x) {
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

namespace {

struct Channel {
  double V, chi_line, chi_hom, chi_tot;
};

Channel channel_terms(const SecurityParams& s) {
  const double xi = std::max(s.xi, 0.0);
  Channel c;
  c.V = s.v_a + 1.0;
  c.chi_line = 1.0 / s.t - 1.0 + xi;
  c.chi_hom = (1.0 - s.eta + s.v_ele) / s.eta;
  c.chi_tot = c.chi_line + c.chi_hom / s.t;
  return c;
}

double symplectic_from(double sum, double prod_sq, const char* what) {
  // eigenvalue pair: lambda^2 = (sum +- sqrt(sum^2 - 4 prod_sq))/2
  const double disc = sum * sum - 4.0 * prod_sq;
  if (disc < -kEigenTolerance * std::max(1.0, sum * sum)) {
    throw std::domain_error(std::string("holevo_bound: negative discriminant for ") + what);
  }
  return std::sqrt(std::max(disc, 0.0));
}

double check_eigen(double lambda_sq, const char* what) {
  const double lambda = std::sqrt(std::max(lambda_sq, 0.0));
  if (lambda < 1.0 - 1e-6) {
    throw std::domain_error(std::string("holevo_bound: symplectic eigenvalue below 1 for ") + what +
                            " (invalid covariance)");
  }
  return std::max(lambda, 1.0);
}

}  // namespace

double mutual_information(const SecurityParams& s) {
  s.validate();
  const Channel c = channel_terms(s);
  return 0.5 * std::log2((c.V + c.chi_tot) / (1.0 + c.chi_tot));
}

double holevo_bound(const SecurityParams& s) {
  s.validate();
  const Channel c = channel_terms(s);
  const double T = s.t;
  const double A = c.V * c.V * (1.0 - 2.0 * T) + 2.0 * T + T * T * (c.V + c.chi_line) * (c.V + c.chi_line);
  const double sqB = T * std::abs(c.V * c.chi_line + 1.0);
  const double B = sqB * sqB;

  const double root_ab = symplectic_from(A, B, "lambda12");
  const double l1 = check_eigen(0.5 * (A + root_ab), "lambda1");
  const double l2 = check_eigen(0.5 * (A - root_ab), "lambda2");

  const double denom = T * (c.V + c.chi_tot);
  const double C = (c.V * sqB + T * (c.V + c.chi_line) + A * c.chi_hom) / denom;
  const double D = sqB * (c.V + sqB * c.chi_hom) / denom;
  const double root_cd = symplectic_from(C, D, "lambda34");
  const double l3 = check_eigen(0.5 * (C + root_cd), "lambda3");
  const double l4 = check_eigen(0.5 * (C - root_cd), "lambda4");

  return g_entropy((l1 - 1.0) / 2.0) + g_entropy((l2 - 1.0) / 2.0) -
         g_entropy((l3 - 1.0) / 2.0) - g_entropy((l4 - 1.0) / 2.0);
}

double key_rate(const SecurityParams& s) {
  return s.beta * mutual_information(s) - holevo_bound(s);
}

double null_key_threshold(double t, double v_a, double eta, double v_ele, double beta) {
  SecurityParams s{v_a, t, 0.0, eta, v_ele, beta};
  auto k_at = [&](double xi) {
    s.xi = xi;
    return key_rate(s);
  };
  if (!(k_at(0.0) > 0.0)) {
    throw std::runtime_error("null_key_threshold: no positive-key regime at this distance");
  }
  double lo = 0.0;
  double hi = 0.25;
  while (k_at(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e4) throw std::runtime_error("null_key_threshold: no sign change in bracket");
  }
  // K is strictly decreasing in xi on [lo, hi]
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (k_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double optimal_v_a(double t, double eta, double v_ele, double beta,
                   double xi_nominal, double tol) {
  auto k_at = [&](double v) {
    return key_rate({v, t, xi_nominal, eta, v_ele, beta});
  };
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = 0.1, b = 100.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = k_at(c), fd = k_at(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = k_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = k_at(d);
    }
  }
  const double v_star = 0.5 * (a + b);
  if (!(k_at(v_star) > 0.0)) {
    throw std::runtime_error("optimal_v_a: no positive key rate for any modulation variance");
  }
  return v_star;
}

}  // namespace satsim::security
