#include "phasim/harness/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasim/errors.hpp"
#include "phasim/estimator.hpp"
#include "phasim/harness/campaign.hpp"
#include "phasim/harness/config.hpp"
#include "phasim/harness/validation.hpp"

namespace phasim::harness {

namespace {

bool is_validation_error(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::ConfigError:
        case ErrorKind::RegimeViolation:
        case ErrorKind::ZeroDetuning:
        case ErrorKind::ZeroShiftedDetuning:
        case ErrorKind::ZeroBeat:
        case ErrorKind::NonUniformDetunings:
        case ErrorKind::BudgetTooSmall:
        case ErrorKind::BudgetExceeded:
            return true;
        default:
            return false;
    }
}

struct EstimateArgs {
    std::string phase;
    int K = 0;
    int M = 1;
    std::string model = "ideal";
    std::uint64_t seed = 0;
    int grid = 256;
    std::string order = "blocked";
    std::string objective = "stage";
};

struct CampaignArgs {
    std::string config;
    std::optional<int> threads;
    std::optional<std::string> output_dir;
};

struct ValidateArgs {
    int sets = 10;
    std::uint64_t seed = 1;
    int nodes_per_period = 20;
    double detuning_scale = 1.0e7;
    int threads = 1;
    std::string output;
};

struct TableArgs {
    int n = 2;
    int grid = 16;
    std::string feedback = "0";
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
    const Phase truth = parse_phase_literal(a.phase);
    estimator::ProtocolConfig cfg;
    cfg.K = a.K;
    cfg.M = a.M;
    cfg.model = models::MeasurementModel::make(models::parse_model_kind(a.model));
    cfg.feedback_grid = a.grid;
    if (a.order == "interleaved") cfg.order = estimator::MeasurementOrder::Interleaved;
    if (a.objective == "first") cfg.objective = estimator::FeedbackObjective::FirstHarmonic;
    cfg.validate();

    const auto result = estimator::run_protocol(truth, cfg, a.seed);
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& m : result.outcome_log) {
        outcomes.push_back({{"n", m.n}, {"feedback", m.feedback.value()}, {"outcome", std::string(to_string(m.outcome))}});
    }
    nlohmann::json j = {
        {"true_phase", truth.value()},
        {"estimate", result.estimate.value()},
        {"estimate_over_pi", result.estimate.value() / kPi},
        {"error", wrapped_difference(result.estimate.value(), truth.value())},
        {"holevo_variance", std::isfinite(result.holevo_variance) ? nlohmann::json(result.holevo_variance)
                                                                  : nlohmann::json(format_number(result.holevo_variance))},
        {"sharpness", result.sharpness},
        {"n_resources", result.n_resources},
        {"clamped_steps", result.clamped_steps},
        {"model", std::string(models::to_string(cfg.model.kind()))},
        {"outcomes", outcomes},
    };
    out << j.dump(2) << '\n';
    return kExitOk;
}

CampaignSpec load_campaign(const CampaignArgs& a) {
    auto spec = CampaignSpec::from_config(KeyValueConfig::load(a.config));
    if (a.threads) spec.threads = *a.threads;
    if (a.output_dir) spec.output_dir = *a.output_dir;
    return spec;
}

int run_campaign_command(const CampaignArgs& a, bool require_fit, std::ostream& out) {
    const auto spec = load_campaign(a);
    const auto outcome = run_campaign(spec);
    out << summary_csv(spec, outcome.points);
    if (require_fit) {
        if (!outcome.fit) throw Error(ErrorKind::DegenerateFit, "scaling fit needs at least 3 finite points");
        out << fit_csv(*outcome.fit);
    }
    return kExitOk;
}

int run_validate(const ValidateArgs& a, std::ostream& out) {
    const perturbation::QuadratureBudget budget{a.nodes_per_period, a.threads};
    std::vector<OracleComparison> rows;
    for (const auto& set : oracle_parameter_sets(a.sets, a.seed, a.detuning_scale)) {
        rows.push_back(compare_with_oracle(set, budget));
    }
    const auto csv = validation_csv(rows);
    if (!a.output.empty()) {
        std::ofstream file(a.output, std::ios::binary | std::ios::trunc);
        if (!file || !(file << csv)) throw Error(ErrorKind::IoFailure, "cannot write " + a.output);
    }
    out << csv;
    return kExitOk;
}

int run_table(const TableArgs& a, std::ostream& out) {
    if (a.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be at least 1");
    if (a.grid < 1) throw Error(ErrorKind::InvalidArgument, "--grid must be at least 1");
    const Phase feedback = parse_phase_literal(a.feedback);
    const models::DetectorFamily family;
    const auto ideal = models::MeasurementModel::ideal();
    const auto resonant = models::MeasurementModel::classical_resonant(family);
    const auto nonresonant = models::MeasurementModel::classical_nonresonant(family);
    out << "phi,ideal,classical_resonant,classical_nonresonant\r\n";
    for (int i = 0; i < a.grid; ++i) {
        const Phase phi(kTwoPi * i / a.grid);
        out << format_number(phi.value()) << ',' << format_number(ideal.probability(a.n, phi, feedback, Outcome::Even))
            << ',' << format_number(resonant.probability(a.n, phi, feedback, Outcome::Even)) << ','
            << format_number(nonresonant.probability(a.n, phi, feedback, Outcome::Even)) << "\r\n";
    }
    return kExitOk;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive NOON-state phase estimation simulator", "phasim"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Single adaptive estimation run");
    estimate->add_option("--phase", est.phase, "True phase: <float>, <float>pi or dyadic:<bits>")->required();
    estimate->add_option("--K", est.K, "Largest stage exponent")->check(CLI::Range(0, 30));
    estimate->add_option("--M", est.M, "Repeats per stage")->check(CLI::PositiveNumber);
    estimate->add_option("--model", est.model, "ideal | classical-resonant | classical-nonresonant");
    estimate->add_option("--seed", est.seed, "Random seed");
    estimate->add_option("--grid", est.grid, "Feedback scan points")->check(CLI::PositiveNumber);
    estimate->add_option("--order", est.order, "blocked | interleaved")->check(CLI::IsMember({"blocked", "interleaved"}));
    estimate->add_option("--objective", est.objective, "stage | first")->check(CLI::IsMember({"stage", "first"}));

    CampaignArgs camp;
    auto* campaign = app.add_subcommand("campaign", "Monte Carlo campaign from a config file");
    auto* scaling = app.add_subcommand("scaling", "Campaign followed by a log-log scaling fit");
    for (auto* sub : {campaign, scaling}) {
        sub->add_option("--config", camp.config, "Config file")->required();
        sub->add_option("--threads", camp.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--output-dir", camp.output_dir, "Output directory");
    }

    ValidateArgs val;
    auto* validate = app.add_subcommand("validate-perturbation", "Closed form against the quadrature oracle");
    validate->add_option("--sets", val.sets, "Number of parameter sets")->check(CLI::PositiveNumber);
    validate->add_option("--seed", val.seed, "Random seed");
    validate->add_option("--nodes-per-period", val.nodes_per_period, "Quadrature nodes per shortest period");
    validate->add_option("--detuning-scale", val.detuning_scale, "Smallest |Delta t|");
    validate->add_option("--threads", val.threads, "Worker threads")->check(CLI::PositiveNumber);
    validate->add_option("--output", val.output, "Also write the CSV here");

    TableArgs tab;
    auto* table = app.add_subcommand("models-table", "Outcome probability tables for every back-end");
    table->add_option("--n", tab.n, "NOON size");
    table->add_option("--grid", tab.grid, "Number of phase points");
    table->add_option("--feedback", tab.feedback, "Feedback phase literal");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*estimate) return run_estimate(est, out);
        if (*campaign) return run_campaign_command(camp, false, out);
        if (*scaling) return run_campaign_command(camp, true, out);
        if (*validate) return run_validate(val, out);
        if (*table) return run_table(tab, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_validation_error(e.kind()) ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace phasim::harness
