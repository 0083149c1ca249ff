#include "satsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace satsim::optimizer {

void SuccessConditions::validate() const {
  if (!(t_tolerance > 0.0)) throw std::invalid_argument("success conditions: t_tolerance must be > 0");
}

ConditionReport success_check(double t_sat, double xi_sat, double t_true, double xi_null,
                              double k, const SuccessConditions& cond) {
  cond.validate();
  ConditionReport r;
  r.xi_sat = xi_sat;
  r.xi_null = xi_null;
  r.key_rate = k;
  r.t_rel_mismatch = std::abs(t_sat - t_true) / t_true;
  r.t_match_ok = !cond.require_t_match || r.t_rel_mismatch <= cond.t_tolerance;
  r.xi_ok = !cond.require_xi_below_null || xi_sat < xi_null;
  r.key_ok = !cond.require_positive_key || k > 0.0;
  r.feasible = r.t_match_ok && r.xi_ok && r.key_ok;
  if (!r.t_match_ok) {
    r.reason = "transmittance mismatch";
  } else if (!r.xi_ok) {
    r.reason = "noise detected";
  } else if (!r.key_ok) {
    r.reason = "no positive key";
  }
  return r;
}

ConditionReport success_check(const estimation::ChannelEstimate& est, double t_true,
                              double xi_null, double k, const SuccessConditions& cond) {
  return success_check(est.t_sat, est.xi_sat, t_true, xi_null, k, cond);
}

namespace {

struct Eval {
  bool valid = false;
  double delta = 0.0;
  double gain = 0.0;
  double t_sat = 0.0;
  double xi_sat = 0.0;
  double key = 0.0;
  double violation = std::numeric_limits<double>::infinity();
  ConditionReport report;
};

// Per-distance search context. Alice's V_A and the null-key threshold are
// fixed once per distance, matching the protocol's public parameter choice.
class Problem {
 public:
  Problem(double d_km, attack::Strategy strategy, const SuccessConditions& cond,
          const Scenario& scenario, const SearchSettings& settings)
      : cond_(cond), settings_(settings) {
    t_true_ = protocol::distance_to_transmittance(d_km, scenario.loss_db_per_km);
    proto_ = scenario.protocol;
    proto_.t = t_true_;
    v_a_ = security::optimal_v_a(t_true_, proto_.eta_b, proto_.v_ele, scenario.beta,
                                 scenario.xi_nominal);
    proto_.v_a = v_a_;
    xi_null_ = security::null_key_threshold(t_true_, v_a_, proto_.eta_b, proto_.v_ele,
                                            scenario.beta);
    beta_ = scenario.beta;
    attack_template_ = scenario.attack;
    attack_template_.strategy = strategy;
    delta_max_ = settings.delta_max_factor * std::abs(proto_.limits.alpha1);
  }

  double t_true() const { return t_true_; }
  double v_a() const { return v_a_; }
  double xi_null() const { return xi_null_; }
  double delta_max() const { return delta_max_; }
  const protocol::ProtocolParams& protocol_params() const { return proto_; }
  const attack::AttackParams& attack_template() const { return attack_template_; }

  Eval evaluate(double delta, double gain) const {
    Eval e;
    e.delta = delta;
    e.gain = gain;
    if (!(gain > 0.0) || delta < 0.0 || delta > delta_max_) return e;
    attack::AttackParams a = attack_template_;
    a.delta = delta;
    a.gain = gain;
    estimation::AnalyticEstimate est{};
    try {
      est = estimation::analytic_estimates(proto_, a, settings_.quadrature);
    } catch (const std::exception&) {
      return e;  // fully saturated or degenerate point
    }
    e.valid = true;
    e.t_sat = std::min(est.t_sat, 1.0);
    e.xi_sat = est.xi_sat;
    e.key = security::key_rate(
        {v_a_, e.t_sat, std::max(e.xi_sat, 0.0), proto_.eta_b, proto_.v_ele, beta_});
    e.report = success_check(e.t_sat, e.xi_sat, t_true_, xi_null_, e.key, cond_);
    e.violation = violation_of(e.report);
    return e;
  }

  // Acceptance ordering for the search: a feasible point always beats an
  // infeasible one; among feasible points the higher estimated key rate wins
  // (ties broken toward the most plausible, i.e. largest, noise estimate);
  // among infeasible points the smaller constraint violation wins.
  static bool better(const Eval& a, const Eval& b) {
    if (a.valid != b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.report.feasible != b.report.feasible) return a.report.feasible;
    if (a.report.feasible) {
      if (std::abs(a.key - b.key) > 1e-12) return a.key > b.key;
      return a.xi_sat > b.xi_sat + 1e-15;
    }
    return a.violation < b.violation;
  }

  // Displacement restoring T_sat = T at the given gain. T_sat decreases
  // monotonically as the displacement pushes deeper into the limit.
  std::optional<double> solve_delta_for_t(double gain) const {
    auto t_at = [&](double delta) -> double {
      const Eval e = evaluate(delta, gain);
      return e.valid ? e.t_sat : 0.0;  // invalid means fully saturated
    };
    const double target = t_true_;
    double lo = 0.0, hi = delta_max_;
    const double f_lo = t_at(lo) - target;
    const double f_hi = t_at(hi) - target;
    if (f_lo < 0.0 || f_hi > 0.0) return std::nullopt;
    while (hi - lo > 1e-7 * delta_max_) {
      const double mid = 0.5 * (lo + hi);
      ((t_at(mid) - target) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  double violation_of(const ConditionReport& r) const {
    double v = 0.0;
    if (cond_.require_t_match) {
      v += std::max(0.0, r.t_rel_mismatch - cond_.t_tolerance) / cond_.t_tolerance;
    }
    if (cond_.require_xi_below_null) {
      v += std::max(0.0, r.xi_sat - r.xi_null) / std::max(0.01, std::abs(r.xi_null));
    }
    if (cond_.require_positive_key) {
      v += std::max(0.0, -r.key_rate);
    }
    return v;
  }

  SuccessConditions cond_;
  SearchSettings settings_;
  protocol::ProtocolParams proto_;
  attack::AttackParams attack_template_;
  double t_true_ = 0.0;
  double v_a_ = 0.0;
  double xi_null_ = 0.0;
  double beta_ = 0.95;
  double delta_max_ = 0.0;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(std::max(n, 2)));
  const double step = (hi - lo) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

// Trial displacement values for a gain candidate: the current displacement
// and, when the T-match constraint is active, the displacement that restores
// the match at this gain.
void consider_gain(const Problem& problem, const SuccessConditions& cond, double gain,
                   double current_delta, Eval& best) {
  const Eval at_current = problem.evaluate(current_delta, gain);
  if (Problem::better(at_current, best)) best = at_current;
  if (cond.require_t_match) {
    if (auto dd = problem.solve_delta_for_t(gain)) {
      const Eval restored = problem.evaluate(*dd, gain);
      if (Problem::better(restored, best)) best = restored;
    }
  }
}

}  // namespace

AttackSolution optimize_attack(double d_km, attack::Strategy strategy,
                               const SuccessConditions& cond, const Scenario& scenario,
                               const SearchSettings& settings) {
  cond.validate();
  AttackSolution sol;
  sol.d_km = d_km;
  sol.strategy = strategy;

  std::optional<Problem> problem;
  try {
    problem.emplace(d_km, strategy, cond, scenario, settings);
  } catch (const std::exception& ex) {
    // No positive-key regime at this distance: nothing for Eve to fake.
    sol.feasible = false;
    sol.t_true = protocol::distance_to_transmittance(d_km, scenario.loss_db_per_km);
    sol.report.reason = std::string("no positive-key regime: ") + ex.what();
    return sol;
  }

  const double delta_max = problem->delta_max();
  const auto deltas = linspace(0.0, delta_max, settings.grid_delta);
  const auto gains = linspace(settings.g_min, settings.g_max, settings.grid_g);

  // Stage 1: coarse grid plus the per-gain T-match restorations.
  Eval best;
  for (double g : gains) {
    for (double dd : deltas) {
      const Eval e = problem->evaluate(dd, g);
      if (Problem::better(e, best)) best = e;
    }
    if (cond.require_t_match) {
      if (auto dd = problem->solve_delta_for_t(g)) {
        const Eval e = problem->evaluate(*dd, g);
        if (Problem::better(e, best)) best = e;
      }
    }
  }

  // Stage 2: coordinate descent with shrinking brackets. The gain sweep
  // re-restores the T-match at each trial gain, since the matched set is a
  // thin one-dimensional family in (delta, gain).
  if (best.valid) {
    double h_g = (settings.g_max - settings.g_min) / static_cast<double>(settings.grid_g - 1);
    double h_d = delta_max / static_cast<double>(settings.grid_delta - 1);
    for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
      bool improved = false;

      {  // gain coordinate
        const double lo = std::max(settings.g_min, best.gain - h_g);
        const double hi = std::min(settings.g_max, best.gain + h_g);
        Eval cand = best;
        for (double g : linspace(lo, hi, 13)) {
          consider_gain(*problem, cond, g, best.delta, cand);
        }
        if (Problem::better(cand, best)) {
          best = cand;
          improved = true;
        }
      }

      {  // displacement coordinate
        const double lo = std::max(0.0, best.delta - h_d);
        const double hi = std::min(delta_max, best.delta + h_d);
        Eval cand = best;
        for (double dd : linspace(lo, hi, 13)) {
          const Eval e = problem->evaluate(dd, best.gain);
          if (Problem::better(e, cand)) cand = e;
        }
        if (Problem::better(cand, best)) {
          best = cand;
          improved = true;
        }
      }

      const bool converged = h_g <= settings.refine_tol && h_d <= settings.refine_tol;
      h_g = std::max(h_g / 2.0, settings.refine_tol);
      h_d = std::max(h_d / 2.0, settings.refine_tol);
      if (!improved && converged) break;
    }
  }

  sol.t_true = problem->t_true();
  sol.v_a = problem->v_a();
  sol.xi_null = problem->xi_null();
  sol.key_rate_honest = security::key_rate({problem->v_a(), problem->t_true(), scenario.xi_nominal,
                                            scenario.protocol.eta_b, scenario.protocol.v_ele,
                                            scenario.beta});
  if (best.valid) {
    sol.delta = best.delta;
    sol.gain = best.gain;
    sol.t_sat = best.t_sat;
    sol.xi_sat = best.xi_sat;
    sol.key_rate = best.key;
    sol.feasible = best.report.feasible;
    sol.report = best.report;
  } else {
    sol.feasible = false;
    sol.report.reason = "no evaluable point in the search box";
  }
  return sol;
}

double feasibility_boundary(attack::Strategy strategy, const SuccessConditions& cond,
                            const Scenario& scenario, double d_near, double d_far,
                            double resolution_km, const SearchSettings& settings) {
  if (!(d_near < d_far) || !(resolution_km > 0.0)) {
    throw std::invalid_argument("feasibility_boundary: need d_near < d_far and resolution > 0");
  }
  auto feasible_at = [&](double d) {
    return optimize_attack(d, strategy, cond, scenario, settings).feasible;
  };
  if (!feasible_at(d_far)) {
    throw std::runtime_error("feasibility_boundary: no feasible distance in range (far end infeasible)");
  }
  if (feasible_at(d_near)) return d_near;
  double lo = d_near, hi = d_far;
  while (hi - lo > resolution_km) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<AttackSolution> distance_sweep(attack::Strategy strategy,
                                           const std::vector<double>& d_list,
                                           const SuccessConditions& cond, const Scenario& scenario,
                                           const SearchSettings& settings) {
  std::vector<AttackSolution> out;
  out.reserve(d_list.size());
  for (double d : d_list) {
    out.push_back(optimize_attack(d, strategy, cond, scenario, settings));
  }
  return out;
}

MonteCarloCheck verify_solution_monte_carlo(const AttackSolution& sol, const Scenario& scenario,
                                            const SuccessConditions& cond, std::size_t blocks,
                                            std::size_t block_size, std::uint64_t master_seed,
                                            int threads) {
  protocol::ProtocolParams p = scenario.protocol;
  p.t = sol.t_true;
  p.v_a = sol.v_a;
  attack::AttackParams a = scenario.attack;
  a.strategy = sol.strategy;
  a.delta = sol.delta;
  a.gain = sol.gain;

  MonteCarloCheck check;
  check.estimate = estimation::block_estimates(p, a, blocks, block_size, master_seed, threads);
  const auto& est = check.estimate;
  const double n_blocks = static_cast<double>(blocks);
  const double se_t = est.std_t / std::sqrt(n_blocks);
  const double se_xi = est.std_xi / std::sqrt(n_blocks);

  std::ostringstream detail;
  bool ok = true;
  if (cond.require_t_match) {
    const double mismatch = std::abs(est.t_sat - sol.t_true) / sol.t_true;
    const double allowed = cond.t_tolerance + 3.0 * se_t / sol.t_true;
    if (mismatch > allowed) {
      ok = false;
      detail << "t mismatch " << mismatch << " > " << allowed << "; ";
    }
  }
  if (cond.require_xi_below_null) {
    if (!(est.xi_sat - 3.0 * se_xi < sol.xi_null)) {
      ok = false;
      detail << "xi " << est.xi_sat << " +- " << se_xi << " not below " << sol.xi_null << "; ";
    }
  }
  if (cond.require_positive_key) {
    const double xi_low = std::max(est.xi_sat - 3.0 * se_xi, 0.0);
    const double k = security::key_rate({sol.v_a, std::min(est.t_sat, 1.0), xi_low,
                                         scenario.protocol.eta_b, scenario.protocol.v_ele,
                                         scenario.beta});
    if (!(k > 0.0)) {
      ok = false;
      detail << "key rate " << k << " not positive; ";
    }
  }
  check.confirmed = ok;
  check.detail = detail.str();
  return check;
}

}  // namespace satsim::optimizer
