#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satsim/attack.hpp"
#include "satsim/estimation.hpp"
#include "satsim/protocol.hpp"
#include "satsim/security.hpp"

namespace satsim::optimizer {

struct SuccessConditions {
  bool require_t_match = true;  // T_sat must equal the true channel transmittance
  double t_tolerance = 0.01;    // relative tolerance on the match
  bool require_xi_below_null = true;
  bool require_positive_key = true;
  void validate() const;
};

struct ConditionReport {
  bool feasible = false;
  bool t_match_ok = false;
  bool xi_ok = false;
  bool key_ok = false;
  double t_rel_mismatch = 0.0;
  double xi_sat = 0.0;
  double xi_null = 0.0;
  double key_rate = 0.0;
  std::string reason;  // first failed condition, empty when feasible
};

ConditionReport success_check(double t_sat, double xi_sat, double t_true, double xi_null,
                              double k, const SuccessConditions& cond);
ConditionReport success_check(const estimation::ChannelEstimate& est, double t_true,
                              double xi_null, double k, const SuccessConditions& cond);

// Everything the per-distance search needs besides (delta, gain): protocol
// template (v_a is replaced by Alice's per-distance optimum), attack template
// (delta/gain replaced by the search), and the link/economics constants.
struct Scenario {
  protocol::ProtocolParams protocol{};
  attack::AttackParams attack{};
  double beta = 0.95;
  double loss_db_per_km = 0.2;
  double xi_nominal = 0.01;  // channel noise Alice assumes when choosing V_A
};

struct SearchSettings {
  int grid_delta = 49;
  int grid_g = 41;
  double g_min = 0.02;
  double g_max = 8.0;
  double delta_max_factor = 3.0;  // delta upper bound, times |alpha1|
  double refine_tol = 1e-3;       // per-variable refinement tolerance
  int max_sweeps = 25;
  snu::QuadratureOptions quadrature{};
};

struct AttackSolution {
  double d_km = 0.0;
  attack::Strategy strategy = attack::Strategy::incoherent;
  double t_true = 0.0;
  double v_a = 0.0;      // Alice's optimal modulation variance at this distance
  double xi_null = 0.0;
  double delta = 0.0;
  double gain = 0.0;
  double t_sat = 0.0;
  double xi_sat = 0.0;
  double key_rate = 0.0;         // from the estimated parameters, xi floored at 0
  double key_rate_honest = 0.0;  // no-attack reference at the nominal channel noise
  bool feasible = false;
  ConditionReport report;
};

// Two-stage search: a coarse (delta, gain) grid on the analytic estimates —
// augmented, when the T-match condition is active, with the per-gain
// displacement that restores T_sat = T exactly — followed by coordinate
// descent to refine_tol on each variable, maximizing the estimated key rate
// subject to success_check. Infeasibility is a result: the returned solution
// then carries the least-violating witness.
AttackSolution optimize_attack(double d_km, attack::Strategy strategy,
                               const SuccessConditions& cond, const Scenario& scenario,
                               const SearchSettings& settings = {});

// Minimum feasible distance by bisection at the given resolution. Requires a
// feasible far end; throws otherwise.
double feasibility_boundary(attack::Strategy strategy, const SuccessConditions& cond,
                            const Scenario& scenario, double d_near = 1.0, double d_far = 100.0,
                            double resolution_km = 0.5, const SearchSettings& settings = {});

std::vector<AttackSolution> distance_sweep(attack::Strategy strategy,
                                           const std::vector<double>& d_list,
                                           const SuccessConditions& cond, const Scenario& scenario,
                                           const SearchSettings& settings = {});

struct MonteCarloCheck {
  estimation::ChannelEstimate estimate;
  bool confirmed = false;  // every enabled condition holds within 3 standard errors
  std::string detail;
};

// Re-verifies a solution with block Monte Carlo; the analytic optimizer must
// never declare feasibility that the simulation contradicts.
MonteCarloCheck verify_solution_monte_carlo(const AttackSolution& sol, const Scenario& scenario,
                                            const SuccessConditions& cond, std::size_t blocks,
                                            std::size_t block_size, std::uint64_t master_seed,
                                            int threads = 0);

}  // namespace satsim::optimizer
