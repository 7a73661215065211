#include "phasim/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "phasim/errors.hpp"
#include "phasim/rng.hpp"

namespace phasim::harness {

namespace {

using nlohmann::json;

json number_or_inf(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

double read_number(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(ErrorKind::InvalidArgument, "unexpected numeric string '" + s + "'");
    }
    return j.get<double>();
}

estimator::MeasurementOrder parse_order(const std::string& s) {
    if (s == "blocked") return estimator::MeasurementOrder::Blocked;
    if (s == "interleaved") return estimator::MeasurementOrder::Interleaved;
    throw Error(ErrorKind::ConfigError, "protocol.order must be 'blocked' or 'interleaved', got '" + s + "'");
}

estimator::FeedbackObjective parse_objective(const std::string& s) {
    if (s == "stage") return estimator::FeedbackObjective::StageHarmonic;
    if (s == "first") return estimator::FeedbackObjective::FirstHarmonic;
    throw Error(ErrorKind::ConfigError, "protocol.objective must be 'stage' or 'first', got '" + s + "'");
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw Error(ErrorKind::ConfigError, key + " must be a boolean, got '" + s + "'");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

std::string record_name(int K, int trial) {
    std::ostringstream s;
    s << "K" << K << "_trial" << trial << ".jsonl";
    return s.str();
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::int64_t measurement_budget(std::int64_t configured) {
    if (const char* env = std::getenv("PHASIM_BUDGET"); env != nullptr && *env != '\0') {
        std::int64_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v <= 0) {
            throw Error(ErrorKind::ConfigError, "PHASIM_BUDGET must be a positive integer, got '" + std::string(s) + "'");
        }
        return v;
    }
    return configured;
}

std::vector<int> CampaignSpec::sweep() const {
    if (k_sweep.empty()) return {protocol.K};
    return k_sweep;
}

std::int64_t CampaignSpec::measurement_load() const {
    std::int64_t largest = 0;
    for (int K : sweep()) {
        auto p = protocol;
        p.K = K;
        largest = std::max(largest, p.resources());
    }
    return largest * trials;
}

void CampaignSpec::validate() const {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "campaign needs at least one trial");
    if (threads < 1) throw Error(ErrorKind::InvalidArgument, "thread count must be at least 1");
    if (bootstrap < 2) throw Error(ErrorKind::InvalidArgument, "bootstrap needs at least 2 resamples");
    auto ks = sweep();
    for (int K : ks) {
        auto p = protocol;
        p.K = K;
        p.validate();
    }
    if (!std::is_sorted(ks.begin(), ks.end()) || std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
        throw Error(ErrorKind::InvalidArgument, "k_sweep must be strictly increasing");
    }
    const auto guard = measurement_budget(budget);
    if (measurement_load() > guard) {
        throw Error(ErrorKind::BudgetExceeded, "trials x largest N = " + std::to_string(measurement_load()) +
                                                   " exceeds the measurement budget " + std::to_string(guard));
    }
}

CampaignSpec CampaignSpec::from_config(const KeyValueConfig& cfg) {
    CampaignSpec spec;
    auto& p = spec.protocol;
    p.K = static_cast<int>(cfg.get_int("protocol.K", 0));
    p.M = static_cast<int>(cfg.get_int("protocol.M", 1));
    p.feedback_grid = static_cast<int>(cfg.get_int("protocol.feedback_grid", 256));
    p.order = parse_order(cfg.get_string("protocol.order", "blocked"));
    p.objective = parse_objective(cfg.get_string("protocol.objective", "stage"));

    models::DetectorFamily family;
    family.omega_s = cfg.get_double("detector.omega_s", family.omega_s);
    family.omega_d = cfg.get_double("detector.omega_d", family.omega_d);
    family.detuning = cfg.get_double("detector.detuning", family.detuning);
    family.delta = cfg.get_double("detector.delta", family.delta);
    family.t = cfg.get_double("detector.t", family.t);
    family.gamma = cfg.get_double("detector.gamma", family.gamma);
    try {
        p.model = models::MeasurementModel::make(models::parse_model_kind(cfg.get_string("protocol.model", "ideal")),
                                                 family);
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }

    spec.trials = static_cast<int>(cfg.get_int("campaign.trials", 1));
    spec.k_sweep = cfg.get_int_list("campaign.k_sweep");
    spec.root_seed = static_cast<std::uint64_t>(cfg.get_int("campaign.root_seed", 0));
    spec.output_dir = cfg.get_string("campaign.output_dir", spec.output_dir.string());
    spec.threads = static_cast<int>(cfg.get_int("campaign.threads", 1));
    spec.bootstrap = static_cast<int>(cfg.get_int("campaign.bootstrap", 1000));
    spec.budget = cfg.get_int("campaign.budget", kDefaultMeasurementBudget);
    spec.write_records = parse_bool(cfg.get_string("campaign.write_records", "true"), "campaign.write_records");
    if (const auto tp = cfg.find("campaign.true_phase")) spec.true_phase = parse_phase_literal(*tp);

    if (const auto unused = cfg.unused_keys(); !unused.empty()) {
        std::string list;
        for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
        throw Error(ErrorKind::ConfigError, cfg.origin() + ": unknown keys: " + list);
    }
    return spec;
}

std::string serialize_record(const RunRecord& r) {
    json outcomes = json::array();
    for (const auto& m : r.result.outcome_log) {
        outcomes.push_back(json::array({m.n, m.feedback.value(), std::string(to_string(m.outcome))}));
    }
    json j = {
        {"K", r.K},
        {"M", r.M},
        {"trial", r.trial},
        {"model", r.model},
        {"seed", r.seed},
        {"true_phase", r.true_phase.value()},
        {"error", r.error},
        {"estimate", r.result.estimate.value()},
        {"holevo_variance", number_or_inf(r.result.holevo_variance)},
        {"sharpness", r.result.sharpness},
        {"n_resources", r.result.n_resources},
        {"clamped_steps", r.result.clamped_steps},
        {"outcomes", std::move(outcomes)},
    };
    return j.dump();
}

RunRecord parse_record(const std::string& line) {
    try {
        const json j = json::parse(line);
        RunRecord r;
        r.K = j.at("K").get<int>();
        r.M = j.at("M").get<int>();
        r.trial = j.at("trial").get<int>();
        r.model = j.at("model").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.true_phase = Phase(j.at("true_phase").get<double>());
        r.error = j.at("error").get<double>();
        r.result.estimate = Phase(j.at("estimate").get<double>());
        r.result.holevo_variance = read_number(j.at("holevo_variance"));
        r.result.sharpness = j.at("sharpness").get<double>();
        r.result.n_resources = j.at("n_resources").get<std::int64_t>();
        r.result.clamped_steps = j.at("clamped_steps").get<int>();
        for (const auto& m : j.at("outcomes")) {
            const auto u = m.at(2).get<std::string>();
            if (u != "even" && u != "odd") throw Error(ErrorKind::InvalidArgument, "bad outcome '" + u + "'");
            r.result.outcome_log.push_back(
                {m.at(0).get<int>(), Phase(m.at(1).get<double>()), u == "even" ? Outcome::Even : Outcome::Odd});
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed run record: ") + e.what());
    }
}

std::string summary_csv(const CampaignSpec& spec, const std::vector<ScalingPoint>& points) {
    std::ostringstream out;
    out << "K,N,M,model,trials,V_H,stderr\r\n";
    for (const auto& p : points) {
        out << p.K << ',' << p.N << ',' << spec.protocol.M << ',' << models::to_string(spec.protocol.model.kind()) << ','
            << spec.trials << ',' << format_number(p.holevo_variance) << ',' << format_number(p.std_error) << "\r\n";
    }
    return out.str();
}

std::string fit_csv(const ScalingResult& fit) {
    std::ostringstream out;
    out << "slope,intercept,slope_ci_lo,slope_ci_hi\r\n";
    out << format_number(fit.slope) << ',' << format_number(fit.intercept) << ',' << format_number(fit.slope_lo) << ','
        << format_number(fit.slope_hi) << "\r\n";
    return out.str();
}

CampaignOutcome run_campaign(const CampaignSpec& spec) {
    spec.validate();
    const auto ks = spec.sweep();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    const std::size_t jobs = ks.size() * trials;
    std::vector<RunRecord> records(jobs);

    auto run_job = [&](std::size_t job) {
        const int K = ks[job / trials];
        const int trial = static_cast<int>(job % trials);
        auto protocol = spec.protocol;
        protocol.K = K;
        const auto k64 = static_cast<std::uint64_t>(K);
        const auto t64 = static_cast<std::uint64_t>(trial);
        const Phase truth = spec.true_phase.value_or(Phase(kTwoPi * uniform01(derive_seed(spec.root_seed, {k64, t64, 0}), 0)));
        RunRecord& r = records[job];
        r.K = K;
        r.M = protocol.M;
        r.trial = trial;
        r.model = std::string(models::to_string(protocol.model.kind()));
        r.seed = derive_seed(spec.root_seed, {k64, t64, 1});
        r.true_phase = truth;
        r.result = estimator::run_protocol(truth, protocol, r.seed);
        r.error = wrapped_difference(r.result.estimate.value(), truth.value());
    };

    const int width = std::min<int>(spec.threads, static_cast<int>(jobs));
    if (width <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < width; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t j = next++; j < jobs; j = next++) {
                        try {
                            run_job(j);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                            next = jobs;
                        }
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    CampaignOutcome outcome;
    for (std::size_t s = 0; s < ks.size(); ++s) {
        ErrorSample sample;
        sample.K = ks[s];
        auto protocol = spec.protocol;
        protocol.K = ks[s];
        sample.N = protocol.resources();
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& r = records[s * trials + t];
            sample.errors.push_back(r.error);
            outcome.measurements += static_cast<std::int64_t>(r.result.outcome_log.size());
        }
        outcome.samples.push_back(std::move(sample));
    }

    const std::uint64_t boot_seed = derive_seed(spec.root_seed, {0xB0075712ULL});
    outcome.points = summarize_samples(outcome.samples, spec.bootstrap, boot_seed);
    try {
        outcome.fit = fit_scaling(outcome.samples, spec.bootstrap, boot_seed);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateFit) throw;
    }

    // single writer
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + spec.output_dir.string() + ": " + ec.message());
    if (spec.write_records) {
        const auto dir = spec.output_dir / "records";
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
        for (const auto& r : records) write_file(dir / record_name(r.K, r.trial), serialize_record(r) + "\n");
    }
    outcome.summary_csv = spec.output_dir / "summary.csv";
    write_file(outcome.summary_csv, summary_csv(spec, outcome.points));
    if (outcome.fit) write_file(spec.output_dir / "scaling_fit.csv", fit_csv(*outcome.fit));
    return outcome;
}

}  // namespace phasim::harness
