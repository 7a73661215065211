#include "phasim/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phasim/errors.hpp"
#include "phasim/rng.hpp"

namespace phasim::estimator {

namespace {

constexpr double kTieTolerance = 1e-14;
constexpr double kDeterministicTolerance = 1e-9;

double feedback_objective(const Posterior& p, int n, double feedback, const ProtocolConfig& cfg) {
    const int harmonic = cfg.objective == FeedbackObjective::StageHarmonic ? n : 1;
    return expected_sharpness(p, n, Phase(feedback), cfg.model, harmonic);
}

// Maximizes f on [a, b]; returns the abscissa.
template <typename F>
double golden_section_max(F&& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

}  // namespace

LikelihoodKernel inference_kernel(const MeasurementModel& /*model*/, int n, Phase feedback, Outcome u) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "NOON size must be at least 1");
    // 1/2 + (-1)^u/4 (e^{in(phi - feedback)} + c.c.)
    const Complex w = 0.25 * parity_sign(u) * std::polar(1.0, -static_cast<double>(n) * feedback.value());
    return LikelihoodKernel{{{0, Complex(0.5, 0.0)}, {n, w}}};
}

double sharpness(const Posterior& p) { return p.sharpness(); }

double expected_sharpness(const Posterior& p, int n, Phase feedback, const MeasurementModel& model, int harmonic) {
    double total = 0.0;
    for (Outcome u : {Outcome::Even, Outcome::Odd}) {
        const LikelihoodKernel kernel = inference_kernel(model, n, feedback, u);
        // coefficient of e^{-i h phi} in p * L
        Complex acc{};
        for (const auto& [m, w] : kernel.terms) {
            acc += w * p.coeff(-harmonic - m);
            if (m != 0) acc += std::conj(w) * p.coeff(-harmonic + m);
        }
        total += kTwoPi * std::abs(acc);
    }
    return total;
}

void ProtocolConfig::validate() const {
    if (K < 0 || K > 30) throw Error(ErrorKind::InvalidArgument, "K must lie in [0, 30]");
    if (M < 1) throw Error(ErrorKind::InvalidArgument, "M must be at least 1");
    if (feedback_grid < 8) throw Error(ErrorKind::InvalidArgument, "feedback grid needs at least 8 candidates");
}

Phase choose_feedback(const Posterior& p, int n, const ProtocolConfig& cfg) {
    const double period = kTwoPi / n;
    const double step = period / cfg.feedback_grid;

    int best_index = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.feedback_grid; ++i) {
        const double v = feedback_objective(p, n, i * step, cfg);
        if (v > best_value + kTieTolerance) {
            best_value = v;
            best_index = i;
        }
    }

    const double center = best_index * step;
    auto f = [&](double fb) { return feedback_objective(p, n, fb, cfg); };
    double refined = golden_section_max(f, center - step, center + step, 1e-10);
    refined -= period * std::floor(refined / period);
    if (refined >= period) refined = 0.0;
    if (f(refined) > best_value + kTieTolerance) return Phase(refined);
    return Phase(center);
}

Posterior bayes_update(const Posterior& p, int n, Phase feedback, Outcome u, const MeasurementModel& model) {
    Posterior out = p;
    out.multiply(inference_kernel(model, n, feedback, u));
    return out;
}

double holevo_from_sharpness(double mu) {
    if (!(mu > 1e-12)) return std::numeric_limits<double>::infinity();
    return std::max(0.0, 1.0 / (mu * mu) - 1.0);
}

DyadicPhase dyadic_estimate(const DyadicPhase& true_phase, const MeasurementModel& model) {
    const int K = true_phase.depth();
    const Phase phi = true_phase.to_phase();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(K) + 1, 0);
    double feedback = 0.0;  // pi * sum_{j > k} a_j / 2^j
    for (int k = K; k >= 0; --k) {
        const int n = 1 << k;
        const double even = model.probability(n, phi, Phase(feedback), Outcome::Even);
        std::uint8_t digit;
        if (even >= 1.0 - kDeterministicTolerance) {
            digit = 0;
        } else if (even <= kDeterministicTolerance) {
            digit = 1;
        } else {
            throw Error(ErrorKind::NondeterministicOutcome,
                        "round n = " + std::to_string(n) + " has P(even) = " + std::to_string(even));
        }
        bits[static_cast<std::size_t>(k)] = digit;
        if (digit) feedback += kPi * std::ldexp(1.0, -k);
    }
    return DyadicPhase(std::move(bits));
}

EstimateResult run_protocol(Phase true_phase, const ProtocolConfig& cfg, std::uint64_t rng_seed) {
    cfg.validate();
    const std::int64_t resources = cfg.resources();
    Posterior posterior = Posterior::uniform(static_cast<int>(resources));

    std::vector<int> schedule;
    schedule.reserve(static_cast<std::size_t>(cfg.M) * static_cast<std::size_t>(cfg.K + 1));
    if (cfg.order == MeasurementOrder::Blocked) {
        for (int k = cfg.K; k >= 0; --k)
            for (int r = 0; r < cfg.M; ++r) schedule.push_back(1 << k);
    } else {
        for (int r = 0; r < cfg.M; ++r)
            for (int k = cfg.K; k >= 0; --k) schedule.push_back(1 << k);
    }

    EstimateResult result;
    result.n_resources = resources;
    result.outcome_log.reserve(schedule.size());
    std::uint64_t step = 0;
    for (int n : schedule) {
        const Phase feedback = choose_feedback(posterior, n, cfg);
        const auto prob = cfg.model.outcome_probability(n, true_phase, feedback, Outcome::Even);
        if (prob.clamped) ++result.clamped_steps;
        const Outcome u = uniform01(rng_seed, step++) < prob.value ? Outcome::Even : Outcome::Odd;
        posterior.multiply(inference_kernel(cfg.model, n, feedback, u));
        result.outcome_log.push_back({n, feedback, u});
    }

    result.estimate = posterior.mean_direction();
    result.sharpness = posterior.sharpness();
    result.holevo_variance = holevo_from_sharpness(result.sharpness);
    return result;
}

double holevo_variance_of_errors(std::span<const double> errors) {
    if (errors.empty()) throw Error(ErrorKind::EmptyEnsemble, "no errors to average");
    Complex sum{};
    for (double e : errors) sum += std::polar(1.0, e);
    return holevo_from_sharpness(std::abs(sum) / static_cast<double>(errors.size()));
}

double holevo_variance_ensemble(std::span<const EstimateResult> results, std::span<const Phase> true_phases) {
    if (results.empty()) throw Error(ErrorKind::EmptyEnsemble, "ensemble is empty");
    if (results.size() != true_phases.size()) {
        throw Error(ErrorKind::InvalidArgument, "results and true phases differ in length");
    }
    std::vector<double> errors(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        errors[i] = wrapped_difference(results[i].estimate.value(), true_phases[i].value());
    }
    return holevo_variance_of_errors(errors);
}

}  // namespace phasim::estimator
