#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "satsim/attack.hpp"
#include "satsim/config.hpp"
#include "satsim/estimation.hpp"
#include "satsim/optimizer.hpp"
#include "satsim/protocol.hpp"
#include "satsim/rating.hpp"
#include "satsim/security.hpp"
#include "satsim/snu.hpp"

namespace py = pybind11;
using namespace satsim;

PYBIND11_MODULE(_satsim, m) {
  m.doc() = "saturation-attack simulator and optimizer for GMCS CV-QKD";
  m.attr("__version__") = SATSIM_VERSION;

  // ---- shot-noise-unit core ----
  py::class_<snu::ShotNoiseCalibration>(m, "ShotNoiseCalibration")
      .def(py::init<>())
      .def(py::init([](double v) { return snu::ShotNoiseCalibration{v}; }), py::arg("volts_per_sqrt_n0"))
      .def_readwrite("volts_per_sqrt_n0", &snu::ShotNoiseCalibration::volts_per_sqrt_n0);

  py::class_<snu::DetectorLimits>(m, "DetectorLimits")
      .def(py::init([](double a1, double a2) { return snu::DetectorLimits{a1, a2}; }),
           py::arg("alpha1"), py::arg("alpha2"))
      .def_readwrite("alpha1", &snu::DetectorLimits::alpha1)
      .def_readwrite("alpha2", &snu::DetectorLimits::alpha2);

  py::class_<snu::GaussianSpec>(m, "GaussianSpec")
      .def(py::init([](double mean, double var) { return snu::GaussianSpec{mean, var}; }),
           py::arg("mean"), py::arg("variance"))
      .def_readwrite("mean", &snu::GaussianSpec::mean)
      .def_readwrite("variance", &snu::GaussianSpec::variance);

  py::class_<snu::Moments>(m, "Moments")
      .def_readonly("mean", &snu::Moments::mean)
      .def_readonly("variance", &snu::Moments::variance);

  m.def("volts_to_snu", &snu::volts_to_snu, py::arg("volts"), py::arg("cal") = snu::ShotNoiseCalibration{});
  m.def("snu_to_volts", &snu::snu_to_volts, py::arg("snu"), py::arg("cal") = snu::ShotNoiseCalibration{});
  m.def("clamp_quadrature", &snu::clamp_quadrature, py::arg("x"), py::arg("limits"));
  m.def("clipped_moments", &snu::clipped_moments, py::arg("spec"), py::arg("limits"));
  m.def(
      "clipped_covariance",
      [](double scale, double offset, double x_var, double n_var, const snu::DetectorLimits& lim) {
        return snu::clipped_covariance(scale, offset, x_var, n_var, lim);
      },
      py::arg("scale"), py::arg("offset"), py::arg("x_var"), py::arg("n_var"), py::arg("limits"));

  // ---- protocol ----
  py::class_<protocol::ProtocolParams>(m, "ProtocolParams")
      .def(py::init<>())
      .def_readwrite("v_a", &protocol::ProtocolParams::v_a)
      .def_readwrite("eta_b", &protocol::ProtocolParams::eta_b)
      .def_readwrite("v_ele", &protocol::ProtocolParams::v_ele)
      .def_readwrite("limits", &protocol::ProtocolParams::limits)
      .def_readwrite("t", &protocol::ProtocolParams::t)
      .def_readwrite("xi_channel", &protocol::ProtocolParams::xi_channel);

  m.def("distance_to_transmittance", &protocol::distance_to_transmittance, py::arg("d_km"),
        py::arg("loss_db_per_km") = 0.2);
  m.def(
      "baseline_run",
      [](const protocol::ProtocolParams& p, std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        auto [xa, xb] = protocol::baseline_run(p, n, rng);
        return std::make_pair(xa.values, xb.values);
      },
      py::arg("params"), py::arg("n"), py::arg("seed"));

  // ---- attack ----
  py::enum_<attack::Strategy>(m, "Strategy")
      .value("coherent", attack::Strategy::coherent)
      .value("incoherent", attack::Strategy::incoherent);

  py::class_<attack::CoherentNoiseModel>(m, "CoherentNoiseModel")
      .def(py::init<>())
      .def_static("ideal_locking", &attack::CoherentNoiseModel::ideal_locking)
      .def_readwrite("drift_rate_rad_per_s", &attack::CoherentNoiseModel::drift_rate_rad_per_s)
      .def_readwrite("latency_s", &attack::CoherentNoiseModel::latency_s)
      .def_readwrite("quad_coeff", &attack::CoherentNoiseModel::quad_coeff);

  py::class_<attack::IncoherentModel>(m, "IncoherentModel")
      .def(py::init<>())
      .def_readwrite("lin_coeff", &attack::IncoherentModel::lin_coeff)
      .def_readwrite("eta_b", &attack::IncoherentModel::eta_b)
      .def_readwrite("i_lo", &attack::IncoherentModel::i_lo)
      .def_readwrite("t_bs", &attack::IncoherentModel::t_bs);

  py::class_<attack::AttackParams>(m, "AttackParams")
      .def(py::init<>())
      .def_readwrite("strategy", &attack::AttackParams::strategy)
      .def_readwrite("delta", &attack::AttackParams::delta)
      .def_readwrite("gain", &attack::AttackParams::gain)
      .def_readwrite("tech_noise", &attack::AttackParams::tech_noise)
      .def_readwrite("toward_upper_limit", &attack::AttackParams::toward_upper_limit)
      .def_readwrite("coherent", &attack::AttackParams::coherent)
      .def_readwrite("incoherent", &attack::AttackParams::incoherent)
      .def("delta_x", &attack::AttackParams::delta_x);

  py::class_<attack::ResidualNoise>(m, "ResidualNoise")
      .def_readonly("fluctuation_std", &attack::ResidualNoise::fluctuation_std)
      .def_readonly("added_variance", &attack::ResidualNoise::added_variance);

  m.def("displacement_from_intensity", &attack::displacement_from_intensity, py::arg("intensity"),
        py::arg("model"));
  m.def("photons_per_pulse", &attack::photons_per_pulse, py::arg("power_watts"),
        py::arg("rep_rate_hz"), py::arg("wavelength_m"));
  m.def("coherent_phase_error", &attack::coherent_phase_error, py::arg("model"));
  m.def("coherent_residual_noise", &attack::coherent_residual_noise, py::arg("delta"), py::arg("model"));
  m.def("incoherent_excess_noise", &attack::incoherent_excess_noise, py::arg("delta"), py::arg("model"));
  m.def("strategy_noise_variance", &attack::strategy_noise_variance, py::arg("params"));
  m.def(
      "attack_run",
      [](const protocol::ProtocolParams& p, const attack::AttackParams& a, std::size_t n,
         std::uint64_t seed) {
        Rng rng(seed);
        auto [xa, xb] = attack::attack_run(p, a, n, rng);
        return std::make_pair(xa.values, xb.values);
      },
      py::arg("protocol"), py::arg("attack"), py::arg("n"), py::arg("seed"));

  // ---- estimation ----
  py::class_<estimation::ChannelEstimate>(m, "ChannelEstimate")
      .def_readonly("t_sat", &estimation::ChannelEstimate::t_sat)
      .def_readonly("xi_sat", &estimation::ChannelEstimate::xi_sat)
      .def_readonly("per_block", &estimation::ChannelEstimate::per_block)
      .def_readonly("std_t", &estimation::ChannelEstimate::std_t)
      .def_readonly("std_xi", &estimation::ChannelEstimate::std_xi);

  py::class_<estimation::AnalyticEstimate>(m, "AnalyticEstimate")
      .def_readonly("t_sat", &estimation::AnalyticEstimate::t_sat)
      .def_readonly("xi_sat", &estimation::AnalyticEstimate::xi_sat);

  m.def(
      "estimate_t_sat",
      [](const std::vector<double>& xa, const std::vector<double>& xb, double g, double eta,
         double va) { return estimation::estimate_t_sat(xa, xb, g, eta, va); },
      py::arg("x_a"), py::arg("x_b"), py::arg("gain"), py::arg("eta_b"), py::arg("v_a"));
  m.def("estimate_xi_sat", &estimation::estimate_xi_sat, py::arg("v_b_sat"), py::arg("t_sat"),
        py::arg("gain"), py::arg("eta_b"), py::arg("v_a"), py::arg("v_ele"));
  m.def("block_estimates", &estimation::block_estimates, py::arg("protocol"), py::arg("attack"),
        py::arg("blocks"), py::arg("block_size"), py::arg("master_seed"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "analytic_estimates",
      [](const protocol::ProtocolParams& p, const attack::AttackParams& a) {
        return estimation::analytic_estimates(p, a);
      },
      py::arg("protocol"), py::arg("attack"));

  // ---- security ----
  py::class_<security::SecurityParams>(m, "SecurityParams")
      .def(py::init([](double v_a, double t, double xi, double eta, double v_ele, double beta) {
             return security::SecurityParams{v_a, t, xi, eta, v_ele, beta};
           }),
           py::arg("v_a"), py::arg("t"), py::arg("xi"), py::arg("eta") = 0.55,
           py::arg("v_ele") = 0.01, py::arg("beta") = 0.95)
      .def_readwrite("v_a", &security::SecurityParams::v_a)
      .def_readwrite("t", &security::SecurityParams::t)
      .def_readwrite("xi", &security::SecurityParams::xi)
      .def_readwrite("eta", &security::SecurityParams::eta)
      .def_readwrite("v_ele", &security::SecurityParams::v_ele)
      .def_readwrite("beta", &security::SecurityParams::beta);

  m.def("g_entropy", &security::g_entropy, py::arg("x"));
  m.def("mutual_information", &security::mutual_information, py::arg("params"));
  m.def("holevo_bound", &security::holevo_bound, py::arg("params"));
  m.def("key_rate", &security::key_rate, py::arg("params"));
  m.def("null_key_threshold", &security::null_key_threshold, py::arg("t"), py::arg("v_a"),
        py::arg("eta"), py::arg("v_ele"), py::arg("beta"));
  m.def("optimal_v_a", &security::optimal_v_a, py::arg("t"), py::arg("eta"), py::arg("v_ele"),
        py::arg("beta"), py::arg("xi_nominal") = 0.01, py::arg("tol") = 1e-3);

  // ---- optimizer ----
  py::class_<optimizer::SuccessConditions>(m, "SuccessConditions")
      .def(py::init<>())
      .def_readwrite("require_t_match", &optimizer::SuccessConditions::require_t_match)
      .def_readwrite("t_tolerance", &optimizer::SuccessConditions::t_tolerance)
      .def_readwrite("require_xi_below_null", &optimizer::SuccessConditions::require_xi_below_null)
      .def_readwrite("require_positive_key", &optimizer::SuccessConditions::require_positive_key);

  py::class_<optimizer::ConditionReport>(m, "ConditionReport")
      .def_readonly("feasible", &optimizer::ConditionReport::feasible)
      .def_readonly("t_match_ok", &optimizer::ConditionReport::t_match_ok)
      .def_readonly("xi_ok", &optimizer::ConditionReport::xi_ok)
      .def_readonly("key_ok", &optimizer::ConditionReport::key_ok)
      .def_readonly("t_rel_mismatch", &optimizer::ConditionReport::t_rel_mismatch)
      .def_readonly("reason", &optimizer::ConditionReport::reason);

  py::class_<optimizer::Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("protocol", &optimizer::Scenario::protocol)
      .def_readwrite("attack", &optimizer::Scenario::attack)
      .def_readwrite("beta", &optimizer::Scenario::beta)
      .def_readwrite("loss_db_per_km", &optimizer::Scenario::loss_db_per_km)
      .def_readwrite("xi_nominal", &optimizer::Scenario::xi_nominal);

  py::class_<optimizer::SearchSettings>(m, "SearchSettings")
      .def(py::init<>())
      .def_readwrite("grid_delta", &optimizer::SearchSettings::grid_delta)
      .def_readwrite("grid_g", &optimizer::SearchSettings::grid_g)
      .def_readwrite("g_min", &optimizer::SearchSettings::g_min)
      .def_readwrite("g_max", &optimizer::SearchSettings::g_max)
      .def_readwrite("delta_max_factor", &optimizer::SearchSettings::delta_max_factor)
      .def_readwrite("refine_tol", &optimizer::SearchSettings::refine_tol)
      .def_readwrite("max_sweeps", &optimizer::SearchSettings::max_sweeps);

  py::class_<optimizer::AttackSolution>(m, "AttackSolution")
      .def_readonly("d_km", &optimizer::AttackSolution::d_km)
      .def_readonly("strategy", &optimizer::AttackSolution::strategy)
      .def_readonly("t_true", &optimizer::AttackSolution::t_true)
      .def_readonly("v_a", &optimizer::AttackSolution::v_a)
      .def_readonly("xi_null", &optimizer::AttackSolution::xi_null)
      .def_readonly("delta", &optimizer::AttackSolution::delta)
      .def_readonly("gain", &optimizer::AttackSolution::gain)
      .def_readonly("t_sat", &optimizer::AttackSolution::t_sat)
      .def_readonly("xi_sat", &optimizer::AttackSolution::xi_sat)
      .def_readonly("key_rate", &optimizer::AttackSolution::key_rate)
      .def_readonly("key_rate_honest", &optimizer::AttackSolution::key_rate_honest)
      .def_readonly("feasible", &optimizer::AttackSolution::feasible)
      .def_readonly("report", &optimizer::AttackSolution::report);

  m.def(
      "success_check",
      [](double t_sat, double xi_sat, double t_true, double xi_null, double k,
         const optimizer::SuccessConditions& cond) {
        return optimizer::success_check(t_sat, xi_sat, t_true, xi_null, k, cond);
      },
      py::arg("t_sat"), py::arg("xi_sat"), py::arg("t_true"), py::arg("xi_null"), py::arg("k"),
      py::arg("conditions"));
  m.def("optimize_attack", &optimizer::optimize_attack, py::arg("d_km"), py::arg("strategy"),
        py::arg("conditions") = optimizer::SuccessConditions{},
        py::arg("scenario") = optimizer::Scenario{},
        py::arg("settings") = optimizer::SearchSettings{},
        py::call_guard<py::gil_scoped_release>());
  m.def("feasibility_boundary", &optimizer::feasibility_boundary, py::arg("strategy"),
        py::arg("conditions") = optimizer::SuccessConditions{},
        py::arg("scenario") = optimizer::Scenario{}, py::arg("d_near") = 1.0,
        py::arg("d_far") = 100.0, py::arg("resolution_km") = 0.5,
        py::arg("settings") = optimizer::SearchSettings{},
        py::call_guard<py::gil_scoped_release>());
  m.def("distance_sweep", &optimizer::distance_sweep, py::arg("strategy"), py::arg("d_list"),
        py::arg("conditions") = optimizer::SuccessConditions{},
        py::arg("scenario") = optimizer::Scenario{},
        py::arg("settings") = optimizer::SearchSettings{},
        py::call_guard<py::gil_scoped_release>());

  // ---- rating ----
  py::enum_<rating::Expertise>(m, "Expertise")
      .value("Laymen", rating::Expertise::Laymen)
      .value("Proficient", rating::Expertise::Proficient)
      .value("Expert", rating::Expertise::Expert)
      .value("MultipleExperts", rating::Expertise::MultipleExperts);
  py::enum_<rating::Knowledge>(m, "Knowledge")
      .value("Public", rating::Knowledge::Public)
      .value("Restricted", rating::Knowledge::Restricted)
      .value("Sensitive", rating::Knowledge::Sensitive)
      .value("Critical", rating::Knowledge::Critical);
  py::enum_<rating::Window>(m, "Window")
      .value("Unnecessary", rating::Window::Unnecessary)
      .value("Easy", rating::Window::Easy)
      .value("Moderate", rating::Window::Moderate)
      .value("Difficult", rating::Window::Difficult);
  py::enum_<rating::Equipment>(m, "Equipment")
      .value("Standard", rating::Equipment::Standard)
      .value("Specialized", rating::Equipment::Specialized)
      .value("Bespoke", rating::Equipment::Bespoke)
      .value("MultipleBespoke", rating::Equipment::MultipleBespoke)
      .value("Quantum", rating::Equipment::Quantum);
  py::enum_<rating::Severity>(m, "Severity")
      .value("Basic", rating::Severity::Basic)
      .value("Moderate", rating::Severity::Moderate)
      .value("High", rating::Severity::High)
      .value("BeyondHigh", rating::Severity::BeyondHigh);

  py::class_<rating::FactorLevels>(m, "FactorLevels")
      .def(py::init([](rating::Expertise e, rating::Knowledge k, rating::Window w,
                       rating::Equipment q) {
             rating::FactorLevels f;
             f.expertise = e;
             f.knowledge = k;
             f.window = w;
             f.equipment = q;
             return f;
           }),
           py::arg("expertise"), py::arg("knowledge"), py::arg("window"), py::arg("equipment"))
      .def_readwrite("expertise", &rating::FactorLevels::expertise)
      .def_readwrite("knowledge", &rating::FactorLevels::knowledge)
      .def_readwrite("window", &rating::FactorLevels::window)
      .def_readwrite("equipment", &rating::FactorLevels::equipment);

  py::class_<rating::RatingSheet>(m, "RatingSheet")
      .def_readonly("attack_name", &rating::RatingSheet::attack_name)
      .def_readonly("factors", &rating::RatingSheet::factors)
      .def_readonly("attack_potential", &rating::RatingSheet::attack_potential)
      .def_readonly("severity", &rating::RatingSheet::severity)
      .def_readonly("unbounded_equipment", &rating::RatingSheet::unbounded_equipment)
      .def_readonly("notes", &rating::RatingSheet::notes);

  m.def("attack_potential", &rating::attack_potential, py::arg("factors"));
  m.def("severity", &rating::severity, py::arg("attack_potential"));
  m.def("rate", &rating::rate, py::arg("name"), py::arg("factors"), py::arg("notes") = "");
  m.def(
      "rate_catalog",
      [](const std::vector<std::pair<std::string, rating::FactorLevels>>& entries) {
        std::vector<rating::CatalogEntry> catalog;
        for (const auto& [name, factors] : entries) catalog.push_back({name, factors, ""});
        return rating::rate_catalog(catalog);
      },
      py::arg("entries"));
}
