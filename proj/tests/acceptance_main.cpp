// Acceptance suite: one line per criterion, pinned tolerances, exit status 0
// only when every requested criterion passes. Run a single criterion with
// --criterion N (1..7).

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "satsim/cli.hpp"
#include "satsim/estimation.hpp"
#include "satsim/optimizer.hpp"
#include "satsim/rating.hpp"
#include "satsim/security.hpp"
#include "satsim/snu.hpp"

using namespace satsim;

namespace {

struct Checker {
  bool ok = true;
  std::string first_failure;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- C1
bool criterion_rating() {
  Checker c;
  using namespace rating;
  const FactorLevels coherent{Expertise::Expert, Knowledge::Restricted, Window::Difficult,
                              Equipment::Bespoke, {}};
  const FactorLevels incoherent{Expertise::Proficient, Knowledge::Restricted, Window::Moderate,
                                Equipment::Specialized, {}};
  c.expect(attack_potential(coherent) == 26, "coherent AP != 26");
  c.expect(severity(attack_potential(coherent)) == Severity::BeyondHigh, "coherent not Beyond High");
  c.expect(attack_potential(incoherent) == 14, "incoherent AP != 14");
  c.expect(severity(attack_potential(incoherent)) == Severity::Moderate, "incoherent not Moderate");
  for (int ap = 0; ap <= 40; ++ap) {
    const Severity expected = ap <= 10   ? Severity::Basic
                              : ap <= 15 ? Severity::Moderate
                              : ap <= 19 ? Severity::High
                                         : Severity::BeyondHigh;
    c.expect(severity(ap) == expected, "severity band mismatch at AP " + std::to_string(ap));
  }
  std::printf("%s  C1 rating reproduction: AP 26 -> Beyond High, AP 14 -> Moderate, bands exact%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C2
bool criterion_calibration() {
  Checker c;
  const snu::ShotNoiseCalibration cal{2.5 / 106.0};
  c.expect(std::abs(snu::volts_to_snu(-2.5, cal) - (-106.0)) <= 1e-12 * 106.0,
           "-2.5 V does not map to -106 sqrt(N0)");
  for (double v : {-2.5, 3.3, 0.017, -1.0}) {
    const double rt = snu::snu_to_volts(snu::volts_to_snu(v, cal), cal);
    c.expect(std::abs(rt - v) <= 1e-12 * std::max(1.0, std::abs(v)), "volt round trip beyond 1e-12");
  }
  const attack::CoherentNoiseModel drift{};  // 2*pi rad/s, 500 us
  const double deg = attack::coherent_phase_error(drift) * 180.0 / std::numbers::pi;
  c.expect(std::abs(deg - 0.18) <= 1e-3, "phase error not 0.18 degrees");
  c.expect(deg > 0.15 && deg < 0.25, "phase error not about 0.2 degrees");
  std::printf("%s  C2 calibration constants: -2.5 V <-> -106 sqrt(N0) (1e-12), phase error %s deg%s%s\n",
              c.ok ? "PASS" : "FAIL", fmt(deg).c_str(), c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C3
bool criterion_estimators() {
  Checker c;
  protocol::ProtocolParams p;
  p.v_a = 19.0;
  p.limits = {-1e9, 1e9};  // saturation disabled
  attack::AttackParams a;
  a.strategy = attack::Strategy::incoherent;
  a.incoherent.lin_coeff = 0.0;
  a.gain = 2.0;
  a.delta = 0.0;

  // 10 blocks of 1e7: T_sat = 1 and xi_sat = injected 2 N0 within 4 sigma
  const auto est = estimation::block_estimates(p, a, 10, 10'000'000, 0xACCE5501, 0);
  const double se_t = est.std_t / std::sqrt(10.0);
  const double se_xi = est.std_xi / std::sqrt(10.0);
  c.expect(std::abs(est.t_sat - 1.0) <= 4.0 * se_t,
           "T_sat " + fmt(est.t_sat) + " not 1 within 4 sigma (" + fmt(se_t) + ")");
  c.expect(std::abs(est.xi_sat - 2.0) <= 4.0 * se_xi,
           "xi_sat " + fmt(est.xi_sat) + " not 2 N0 within 4 sigma (" + fmt(se_xi) + ")");

  // technical noise shifts the injected level to 2 + tech
  attack::AttackParams a_tech = a;
  a_tech.tech_noise = 0.25;
  const auto est_tech = estimation::block_estimates(p, a_tech, 10, 2'000'000, 0xACCE5502, 0);
  c.expect(std::abs(est_tech.xi_sat - 2.25) <= 4.0 * est_tech.std_xi / std::sqrt(10.0),
           "xi_sat does not track injected technical noise");

  // analytic estimates vs Monte Carlo across >= 20 randomized draws. Draws
  // are kept only where the transmittance estimate is statistically
  // resolvable (t_sat >= 0.01): past full saturation the empirical
  // squared-covariance is pure noise bias and the block estimator has no
  // meaningful standard error to agree within.
  Rng seeder(0xACCE5503);
  int draws_checked = 0;
  for (int i = 0; draws_checked < 20 && i < 100; ++i) {
    protocol::ProtocolParams pp;
    pp.v_a = 4.0 + 26.0 * seeder.uniform();
    pp.eta_b = 0.4 + 0.5 * seeder.uniform();
    pp.v_ele = 0.05 * seeder.uniform();
    attack::AttackParams aa;
    aa.strategy = attack::Strategy::incoherent;
    aa.incoherent.lin_coeff = 0.03 * seeder.uniform();
    aa.delta = 230.0 * seeder.uniform();
    aa.gain = 0.2 + 4.0 * seeder.uniform();
    aa.tech_noise = 0.2 * seeder.uniform();
    estimation::AnalyticEstimate analytic{};
    try {
      analytic = estimation::analytic_estimates(pp, aa);
    } catch (const std::exception&) {
      continue;  // fully saturated draw has no defined estimate
    }
    if (analytic.t_sat < 0.01) continue;
    const auto mc = estimation::block_estimates(pp, aa, 10, 1'000'000, 0xACCE5510 + i, 0);
    const double set = mc.std_t / std::sqrt(10.0);
    const double sex = mc.std_xi / std::sqrt(10.0);
    c.expect(std::abs(analytic.t_sat - mc.t_sat) <= 4.0 * set,
             "draw " + std::to_string(i) + ": analytic T_sat off by " +
                 fmt(std::abs(analytic.t_sat - mc.t_sat) / std::max(set, 1e-300)) + " sigma");
    c.expect(std::abs(analytic.xi_sat - mc.xi_sat) <= 4.0 * sex,
             "draw " + std::to_string(i) + ": analytic xi_sat off by " +
                 fmt(std::abs(analytic.xi_sat - mc.xi_sat) / std::max(sex, 1e-300)) + " sigma");
    ++draws_checked;
  }
  c.expect(draws_checked >= 20, "fewer than 20 evaluable randomized draws");
  std::printf("%s  C3 estimator soundness: T_sat=%s xi_sat=%s at G=2 unsaturated; %d randomized draws at 4 sigma%s%s\n",
              c.ok ? "PASS" : "FAIL", fmt(est.t_sat).c_str(), fmt(est.xi_sat).c_str(), draws_checked,
              c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C4
bool criterion_clipped_oracle() {
  Checker c;
  Rng seeder(0xACCE5504);
  const std::size_t n = 10'000'000;
  int cases = 0;
  for (int i = 0; i < 50; ++i) {
    const double a1 = -150.0 + 60.0 * seeder.uniform();
    const double a2 = 60.0 + 120.0 * seeder.uniform();
    const snu::DetectorLimits lim{a1, a2};

    // clipped_moments case
    const double mean = -170.0 + 340.0 * seeder.uniform();
    const double var = 1.0 + 45.0 * seeder.uniform();
    const auto closed = snu::clipped_moments({mean, var}, lim);
    c.expect(closed.variance <= var + 1e-12, "variance contraction violated");
    Rng rng(0xACCE5520 + i);
    double s1 = 0, s2 = 0, s4 = 0;
    const double sd = std::sqrt(var);
    for (std::size_t k = 0; k < n; ++k) {
      const double y = snu::clamp_quadrature(mean + sd * rng.gaussian(), lim);
      s1 += y;
      s2 += y * y;
      s4 += y * y * y * y;
    }
    const double m = s1 / n;
    const double m2 = s2 / n - m * m;
    const double m4 = s4 / n;
    const double se_mean = std::sqrt(std::max(m2, 0.0) / n);
    // Var(s^2) ~ (m4' - m2^2)/n with m4' the 4th central moment; the raw 4th
    // moment bound is conservative. Tiny absolute floor: tail mass below ~1/n
    // is invisible to the sampler.
    const double se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    c.expect(std::abs(closed.mean - m) <= 4.0 * se_mean + 1e-7,
             "case " + std::to_string(i) + ": clipped mean off");
    c.expect(std::abs(closed.variance - m2) <= 4.0 * se_var + 1e-7,
             "case " + std::to_string(i) + ": clipped variance off");

    // clipped_covariance case
    const double scale = 0.2 + 1.5 * seeder.uniform();
    const double offset = -140.0 + 200.0 * seeder.uniform();
    const double x_var = 2.0 + 30.0 * seeder.uniform();
    const double n_var = 0.5 + 10.0 * seeder.uniform();
    const double closed_cov = snu::clipped_covariance(scale, offset, x_var, n_var, lim);
    Rng rng2(0xACCE5570 + i);
    const double sx = std::sqrt(x_var), sn = std::sqrt(n_var);
    double acc = 0, acc2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = sx * rng2.gaussian();
      const double y = snu::clamp_quadrature(scale * x + offset + sn * rng2.gaussian(), lim);
      acc += x * y;
      acc2 += x * y * x * y;
    }
    const double mc = acc / n;
    const double se = std::sqrt(std::max(acc2 / n - mc * mc, 0.0) / n);
    c.expect(std::abs(closed_cov - mc) <= 4.0 * se + 1e-7,
             "case " + std::to_string(i) + ": clipped covariance off (" + fmt(closed_cov) +
                 " vs " + fmt(mc) + ")");
    ++cases;
  }
  std::printf("%s  C4 clipped-statistics oracle: %d randomized cases vs 1e7-sample Monte Carlo at 4 SE, contraction holds%s%s\n",
              c.ok ? "PASS" : "FAIL", cases, c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C5
bool criterion_boundaries() {
  Checker c;
  const optimizer::Scenario defaults;
  const optimizer::SuccessConditions cond;
  const optimizer::SearchSettings settings;

  // incoherent boundary at 35 +- 5 km
  double boundary = 0.0;
  try {
    boundary = optimizer::feasibility_boundary(attack::Strategy::incoherent, cond, defaults, 1.0,
                                               100.0, 0.5, settings);
  } catch (const std::exception& ex) {
    c.expect(false, std::string("incoherent boundary search failed: ") + ex.what());
  }
  c.expect(boundary >= 30.0 && boundary <= 40.0,
           "incoherent boundary " + fmt(boundary) + " outside 35 +- 5 km");

  // below the boundary the optimizer reports infeasible
  for (double d : {20.0, 30.0, boundary - 2.0}) {
    if (d <= 0.0) continue;
    const auto sol = optimizer::optimize_attack(d, attack::Strategy::incoherent, cond, defaults, settings);
    c.expect(!sol.feasible, "incoherent unexpectedly feasible at " + fmt(d) + " km");
  }

  // coherent with the default residual-phase-noise model: infeasible everywhere
  for (double d = 5.0; d <= 100.0; d += 5.0) {
    const auto sol = optimizer::optimize_attack(d, attack::Strategy::coherent, cond, defaults, settings);
    c.expect(!sol.feasible, "coherent default unexpectedly feasible at " + fmt(d) + " km");
  }
  bool threw = false;
  try {
    optimizer::feasibility_boundary(attack::Strategy::coherent, cond, defaults, 1.0, 100.0, 0.5,
                                    settings);
  } catch (const std::exception&) {
    threw = true;
  }
  c.expect(threw, "coherent default boundary search did not report infeasibility");

  // idealized phase locking brings the coherent strategy back near 50 km
  optimizer::Scenario ideal = defaults;
  ideal.attack.coherent = attack::CoherentNoiseModel::ideal_locking();
  double coherent_boundary = 0.0;
  try {
    coherent_boundary = optimizer::feasibility_boundary(attack::Strategy::coherent, cond, ideal,
                                                        1.0, 100.0, 0.5, settings);
  } catch (const std::exception& ex) {
    c.expect(false, std::string("ideal-locking boundary search failed: ") + ex.what());
  }
  c.expect(coherent_boundary >= 45.0 && coherent_boundary <= 55.0,
           "ideal-locking coherent boundary " + fmt(coherent_boundary) + " not in the 50 km regime");

  // sweep 35..100 km: xi_sat below the threshold, key rate monotone
  // decreasing, and every feasible solution re-verified by 10 x 1e7 Monte
  // Carlo at 3 sigma
  std::vector<double> distances;
  for (double d = 35.0; d <= 100.0; d += 5.0) distances.push_back(d);
  const auto sweep = optimizer::distance_sweep(attack::Strategy::incoherent, distances, cond,
                                               defaults, settings);
  double prev_key = 1e9;
  std::size_t feasible_rows = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& sol = sweep[i];
    c.expect(sol.feasible, "sweep point " + fmt(sol.d_km) + " km infeasible");
    if (!sol.feasible) continue;
    ++feasible_rows;
    c.expect(sol.xi_sat < sol.xi_null,
             "xi_sat not below the null-key threshold at " + fmt(sol.d_km) + " km");
    c.expect(sol.key_rate < prev_key, "attack key rate not decreasing at " + fmt(sol.d_km) + " km");
    prev_key = sol.key_rate;

    const auto mc = optimizer::verify_solution_monte_carlo(sol, defaults, cond, 10, 10'000'000,
                                                           0xACCE5540 + i, 0);
    c.expect(mc.confirmed, "Monte Carlo contradicts the analytic verdict at " + fmt(sol.d_km) +
                               " km: " + mc.detail);
  }
  std::printf("%s  C5 feasibility boundaries: incoherent %s km (35 +- 5), coherent default infeasible 0-100, ideal locking %s km, %zu sweep rows verified%s%s\n",
              c.ok ? "PASS" : "FAIL", fmt(boundary).c_str(), fmt(coherent_boundary).c_str(),
              feasible_rows, c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C6
bool criterion_security() {
  Checker c;
  c.expect(security::g_entropy(0.0) == 0.0, "g(0) != 0");
  const double chi_ideal = security::holevo_bound({7.0, 1.0, 0.0, 1.0, 0.0, 0.95});
  c.expect(std::abs(chi_ideal) <= 1e-9, "chi_BE not zero for the lossless noiseless channel");

  Rng seeder(0xACCE5506);
  for (int i = 0; i < 25; ++i) {
    const double va = 2.0 + 25.0 * seeder.uniform();
    const double t = 0.05 + 0.9 * seeder.uniform();
    const double eta = 0.35 + 0.6 * seeder.uniform();
    const double vele = 0.1 * seeder.uniform();
    const double xi = 0.25 * seeder.uniform();
    const double k0 = security::key_rate({va, t, xi, eta, vele, 0.95});
    const double k1 = security::key_rate({va, t, xi + 0.01, eta, vele, 0.95});
    c.expect(k1 < k0, "key rate not strictly decreasing in xi");
  }

  const double t50 = protocol::distance_to_transmittance(50.0, 0.2);
  const double va = security::optimal_v_a(t50, 0.55, 0.01, 0.95);
  const double xi_null = security::null_key_threshold(t50, va, 0.55, 0.01, 0.95);
  const double k_below = security::key_rate({va, t50, xi_null - 1e-5, 0.55, 0.01, 0.95});
  const double k_above = security::key_rate({va, t50, xi_null + 1e-5, 0.55, 0.01, 0.95});
  c.expect(k_below > 0.0 && k_above < 0.0,
           "K(xi_null +- 1e-5) does not straddle zero: " + fmt(k_below) + ", " + fmt(k_above));
  std::printf("%s  C6 security self-consistency: g(0)=0, chi_BE(ideal)=%s, K monotone, bracket (%s, %s)%s%s\n",
              c.ok ? "PASS" : "FAIL", fmt(chi_ideal).c_str(), fmt(k_below).c_str(),
              fmt(k_above).c_str(), c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

// ---------------------------------------------------------------- C7
bool criterion_determinism() {
  Checker c;
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "satsim_acceptance_c7";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path cfg_path = base / "config.json";
  {
    std::ofstream f(cfg_path);
    f << R"({"blocks": {"count": 4, "size": 100000}, "distances_km": [40.0, 60.0], "seed": 24601})";
  }
  auto run_once = [&](const std::string& tag, const std::string& threads) {
    const fs::path out = base / tag;
    std::ostringstream so, se;
    const int code = cli::run({"simulate", "--config", cfg_path.string(), "--out", out.string(),
                               "--threads", threads},
                              so, se);
    if (code != 0) return std::string();
    std::ifstream in(out / "results.csv", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = run_once("a", "1");
  const std::string b = run_once("b", "1");
  const std::string d = run_once("d", "4");
  c.expect(!a.empty(), "simulate run failed");
  c.expect(a == b, "two identical runs differ byte-wise");
  c.expect(a == d, "output differs across thread counts");
  std::printf("%s  C7 determinism: byte-identical CSV across repeated runs and thread counts (%zu bytes)%s%s\n",
              c.ok ? "PASS" : "FAIL", a.size(), c.ok ? "" : " | ", c.first_failure.c_str());
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc + 1; ++i) {
    if (i < argc && std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }
  const std::vector<std::pair<int, std::function<bool()>>> criteria = {
      {1, criterion_rating},     {2, criterion_calibration}, {3, criterion_estimators},
      {4, criterion_clipped_oracle}, {5, criterion_boundaries},  {6, criterion_security},
      {7, criterion_determinism},
  };
  bool all_ok = true;
  for (const auto& [num, fn] : criteria) {
    if (only != 0 && num != only) continue;
    all_ok = fn() && all_ok;
  }
  return all_ok ? 0 : 1;
}
