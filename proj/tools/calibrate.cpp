// Fits the strategy-noise coefficients that the built-in defaults pin:
//   - incoherent lin_coeff: minimum feasible distance at 35 km
//   - coherent quad_coeff under ideal phase locking: boundary at 50 km
//   - coherent quad_coeff default: infeasible at every distance in 0-100 km,
//     with a safety margin above the smallest such coefficient
// Run after changing detector or protocol defaults, then refresh the values
// in include/satsim/attack.hpp.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "satsim/optimizer.hpp"

using namespace satsim;

namespace {

optimizer::Scenario scenario_with(attack::Strategy strategy, double coeff, bool zero_phase) {
  optimizer::Scenario sc;
  sc.attack.strategy = strategy;
  if (strategy == attack::Strategy::incoherent) {
    sc.attack.incoherent.lin_coeff = coeff;
  } else {
    sc.attack.coherent.quad_coeff = coeff;
    if (zero_phase) {
      sc.attack.coherent.drift_rate_rad_per_s = 0.0;
      sc.attack.coherent.latency_s = 0.0;
    }
  }
  return sc;
}

std::optional<double> boundary_km(attack::Strategy strategy, double coeff, bool zero_phase) {
  const optimizer::SuccessConditions cond;
  const optimizer::SearchSettings settings;
  try {
    return optimizer::feasibility_boundary(strategy, cond, scenario_with(strategy, coeff, zero_phase),
                                           1.0, 100.0, 0.25, settings);
  } catch (const std::exception&) {
    return std::nullopt;  // infeasible across the whole range
  }
}

double fit_to_boundary(attack::Strategy strategy, bool zero_phase, double target_km,
                       double lo, double hi) {
  for (int i = 0; i < 18; ++i) {
    const double mid = std::sqrt(lo * hi);
    const auto b = boundary_km(strategy, mid, zero_phase);
    std::printf("  coeff %.6e -> boundary %s\n", mid, b ? std::to_string(*b).c_str() : "none");
    std::fflush(stdout);
    if (!b || *b > target_km) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi / lo < 1.0005) break;
  }
  return std::sqrt(lo * hi);
}

double fit_infeasible_everywhere(attack::Strategy strategy, double lo, double hi) {
  // smallest coefficient with no feasible distance at all
  for (int i = 0; i < 18; ++i) {
    const double mid = std::sqrt(lo * hi);
    const auto b = boundary_km(strategy, mid, false);
    std::printf("  coeff %.6e -> boundary %s\n", mid, b ? std::to_string(*b).c_str() : "none");
    std::fflush(stdout);
    if (b) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo < 1.0005) break;
  }
  return hi;
}

}  // namespace

int main() {
  std::printf("incoherent lin_coeff, target boundary 35 km:\n");
  const double lin = fit_to_boundary(attack::Strategy::incoherent, false, 35.0, 5e-3, 8e-2);
  std::printf("fitted lin_coeff = %.6e (boundary %s)\n\n", lin,
              boundary_km(attack::Strategy::incoherent, lin, false)
                  ? std::to_string(*boundary_km(attack::Strategy::incoherent, lin, false)).c_str()
                  : "none");

  std::printf("coherent quad_coeff under ideal phase locking, target boundary 50 km:\n");
  const double quad_ideal = fit_to_boundary(attack::Strategy::coherent, true, 50.0, 5e-5, 2e-3);
  std::printf("fitted ideal-locking quad_coeff = %.6e (boundary %s)\n\n", quad_ideal,
              boundary_km(attack::Strategy::coherent, quad_ideal, true)
                  ? std::to_string(*boundary_km(attack::Strategy::coherent, quad_ideal, true)).c_str()
                  : "none");

  std::printf("coherent default quad_coeff, infeasible across 0-100 km:\n");
  const double quad_min = fit_infeasible_everywhere(attack::Strategy::coherent, 5e-4, 2e-2);
  const double quad_default = quad_min * 1.3;
  std::printf("smallest infeasible-everywhere quad_coeff = %.6e; default with margin = %.6e\n",
              quad_min, quad_default);

  std::printf("\nverification scan of the default coherent model (every 10 km):\n");
  for (double d = 10.0; d <= 100.0; d += 10.0) {
    const auto sol = optimizer::optimize_attack(
        d, attack::Strategy::coherent, {}, scenario_with(attack::Strategy::coherent, quad_default, false), {});
    std::printf("  d=%5.1f feasible=%d (%s)\n", d, sol.feasible, sol.report.reason.c_str());
  }
  return 0;
}
