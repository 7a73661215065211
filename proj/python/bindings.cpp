#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasim/errors.hpp"
#include "phasim/estimator.hpp"
#include "phasim/harness/cli.hpp"
#include "phasim/harness/scaling.hpp"
#include "phasim/models.hpp"
#include "phasim/perturbation.hpp"

namespace py = pybind11;
using namespace phasim;

namespace {

Outcome outcome_from(int u) {
    if (u != 0 && u != 1) throw Error(ErrorKind::InvalidArgument, "outcome must be 0 or 1");
    return u == 0 ? Outcome::Even : Outcome::Odd;
}

}  // namespace

PYBIND11_MODULE(phasim, m) {
    m.doc() = "Adaptive NOON-state phase estimation with ideal and classical-light detectors";

    static py::exception<Error> error_type(m, "PhasimError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            error_type(e.what());
        }
    });

    m.def("normalize_phase", &Phase::normalize, py::arg("radians"));
    m.def("noon_outcome_prob",
          [](int n, double phi, double feedback, int u) {
              return models::noon_outcome_prob(n, Phase(phi), Phase(feedback), outcome_from(u));
          },
          py::arg("n"), py::arg("phi"), py::arg("feedback"), py::arg("u"));

    py::class_<models::DetectorConfig>(m, "DetectorConfig")
        .def_static("uniform", &models::DetectorConfig::uniform, py::arg("n"), py::arg("omega_s"), py::arg("omega_d"),
                    py::arg("detuning"), py::arg("delta"), py::arg("t"), py::arg("gamma") = 0.0)
        .def_readonly("n", &models::DetectorConfig::n)
        .def_readonly("delta", &models::DetectorConfig::delta)
        .def_readonly("t", &models::DetectorConfig::t);

    m.def("effective_rabi", &models::effective_rabi, py::arg("config"));
    m.def("accuracy_factor", &models::accuracy_factor, py::arg("config"));
    m.def("max_excitation_rate", &models::max_excitation_rate, py::arg("config"));
    m.def("classical_outcome_prob",
          [](const models::DetectorConfig& cfg, double phi, double feedback, int u, bool nonresonant) {
              return models::classical_outcome_prob(cfg, Phase(phi), Phase(feedback), outcome_from(u), nonresonant);
          },
          py::arg("config"), py::arg("phi"), py::arg("feedback"), py::arg("u"), py::arg("include_nonresonant") = false);
    m.def("model_probability",
          [](const std::string& kind, int n, double phi, double feedback, int u) {
              return models::MeasurementModel::make(models::parse_model_kind(kind))
                  .probability(n, Phase(phi), Phase(feedback), outcome_from(u));
          },
          py::arg("model"), py::arg("n"), py::arg("phi"), py::arg("feedback"), py::arg("u"));

    m.def("dyadic_estimate",
          [](const std::string& bits) {
              return estimator::dyadic_estimate(DyadicPhase::from_string(bits), models::MeasurementModel::ideal())
                  .to_string();
          },
          py::arg("bits"), "Recovers a dyadic phase given as bits a_K...a_0.");

    m.def("run_protocol",
          [](double true_phase, int K, int M, const std::string& model, std::uint64_t seed) {
              estimator::ProtocolConfig cfg;
              cfg.K = K;
              cfg.M = M;
              cfg.model = models::MeasurementModel::make(models::parse_model_kind(model));
              const auto r = estimator::run_protocol(Phase(true_phase), cfg, seed);
              py::list log;
              for (const auto& rec : r.outcome_log) {
                  log.append(py::make_tuple(rec.n, rec.feedback.value(), rec.outcome == Outcome::Even ? 0 : 1));
              }
              py::dict d;
              d["estimate"] = r.estimate.value();
              d["holevo_variance"] = r.holevo_variance;
              d["sharpness"] = r.sharpness;
              d["n_resources"] = r.n_resources;
              d["clamped_steps"] = r.clamped_steps;
              d["outcomes"] = log;
              return d;
          },
          py::arg("true_phase"), py::arg("K"), py::arg("M") = 1, py::arg("model") = "ideal", py::arg("seed") = 0);

    m.def("holevo_variance", [](const std::vector<double>& errors) { return estimator::holevo_variance_of_errors(errors); },
          py::arg("errors"));
    m.def("fit_loglog",
          [](const std::vector<std::int64_t>& n, const std::vector<double>& v) {
              const auto f = harness::fit_loglog(n, v);
              return py::make_tuple(f.slope, f.intercept);
          },
          py::arg("n"), py::arg("variance"));

    py::class_<perturbation::FourLevelParams>(m, "FourLevelParams")
        .def_static("make", &perturbation::FourLevelParams::make, py::arg("omega_s"), py::arg("omega_d"),
                    py::arg("delta1_plus"), py::arg("delta1_minus"), py::arg("delta2_plus"), py::arg("delta2_minus"),
                    py::arg("k_plus"), py::arg("k_minus"), py::arg("t"))
        .def_static("from_beat", &perturbation::FourLevelParams::from_beat, py::arg("omega_s"), py::arg("omega_d"),
                    py::arg("delta1_plus"), py::arg("delta2_plus"), py::arg("delta"), py::arg("k_plus"),
                    py::arg("k_minus"), py::arg("t"))
        .def_readonly("delta", &perturbation::FourLevelParams::delta);

    m.def("first_order_full", &perturbation::first_order_full, py::arg("params"), py::arg("x"));
    m.def("first_order_resonant", &perturbation::first_order_resonant, py::arg("params"), py::arg("x"));
    m.def("quadrature_oracle",
          [](const perturbation::FourLevelParams& p, double x, int nodes_per_period, int threads) {
              return perturbation::quadrature_oracle(p, x, {nodes_per_period, threads});
          },
          py::arg("params"), py::arg("x"), py::arg("nodes_per_period") = 20, py::arg("threads") = 1);
    m.def("second_order_factors",
          [](const perturbation::FourLevelParams& p) {
              const auto r = perturbation::second_order_factors(p);
              return py::make_tuple(r.r1, r.r2, r.r3);
          },
          py::arg("params"));

    m.def("cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = harness::cli_dispatch(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs a CLI subcommand; returns (exit_code, stdout, stderr).");
}
