#include "phasim/models.hpp"

#include <algorithm>
#include <cmath>

namespace phasim::models {

namespace {

bool finite(double v) { return std::isfinite(v); }

double beat_ratio(const DetectorConfig& cfg) {
    const double dt = cfg.delta * cfg.t;
    return static_cast<double>(cfg.n) * std::sin(dt) / dt;
}

// Terms inside the braces of the fringe probability, so that
// P_a = 2 Omega_eff^2 t^2 * braces.
double fringe_braces(int n, double diff, double nonresonant_ratio, bool include_nonresonant) {
    const double nd = static_cast<double>(n);
    double braces = 1.0 + std::cos(nd * diff);
    if (include_nonresonant) {
        braces += 4.0 * nonresonant_ratio * std::cos(0.5 * nd * diff) * std::cos(0.5 * (nd - 2.0) * diff);
    }
    return braces;
}

void require_perturbative(const DetectorConfig& cfg) {
    const double omega_eff_t = std::abs(effective_rabi(cfg)) * cfg.t;
    if (!(omega_eff_t < 1.0)) {
        throw RegimeViolation(Precondition::Perturbative,
                              "Omega_eff * t = " + std::to_string(omega_eff_t) + " is not below 1");
    }
}

void require_beat(const DetectorConfig& cfg) {
    if (cfg.delta == 0.0) throw Error(ErrorKind::ZeroBeat, "beat frequency delta is zero");
}

void require_nonresonant_small(const DetectorConfig& cfg) {
    require_beat(cfg);
    const double ratio = std::abs(beat_ratio(cfg));
    if (!(ratio < 1.0)) {
        throw RegimeViolation(Precondition::NonresonantSuppression,
                              "n |sin(delta t)| / (delta t) = " + std::to_string(ratio) + " is not below 1");
    }
}

}  // namespace

DetectorConfig DetectorConfig::uniform(int n, double omega_s, double omega_d, double detuning, double delta, double t,
                                       double gamma) {
    DetectorConfig cfg;
    cfg.omega_s = omega_s;
    cfg.omega_d = omega_d;
    cfg.delta = delta;
    cfg.t = t;
    cfg.gamma = gamma;
    cfg.n = n;
    if (n >= 1) cfg.detunings.assign(static_cast<std::size_t>(2 * (n - 1)), DetuningPair{detuning, detuning + delta});
    validate_config(cfg);
    return cfg;
}

void validate_config(const DetectorConfig& cfg) {
    if (cfg.n < 1) throw Error(ErrorKind::InvalidArgument, "photon number n must be at least 1");
    if (cfg.detunings.size() != static_cast<std::size_t>(2 * (cfg.n - 1))) {
        throw Error(ErrorKind::InvalidArgument, "expected 2(n-1) = " + std::to_string(2 * (cfg.n - 1)) +
                                                    " detuning pairs, got " + std::to_string(cfg.detunings.size()));
    }
    if (!finite(cfg.omega_s) || !finite(cfg.omega_d) || !finite(cfg.delta)) {
        throw Error(ErrorKind::InvalidArgument, "non-finite detector parameter");
    }
    if (!(cfg.t > 0.0) || !finite(cfg.t)) throw Error(ErrorKind::InvalidArgument, "interaction time must be positive");
    if (!(cfg.gamma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "decay rate must be non-negative");
    if (cfg.delta < 0.0) throw Error(ErrorKind::InvalidArgument, "beat frequency must be non-negative");
    for (const auto& d : cfg.detunings) {
        if (!finite(d.plus) || !finite(d.minus)) throw Error(ErrorKind::InvalidArgument, "non-finite detuning");
    }
}

double noon_outcome_prob(int n, Phase phi, Phase feedback, Outcome u) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "NOON size must be at least 1");
    const double diff = phi.value() - feedback.value();
    return 0.5 * (1.0 + parity_sign(u) * std::cos(static_cast<double>(n) * diff));
}

double effective_rabi(const DetectorConfig& cfg) {
    double value = cfg.omega_s;
    for (int j = 0; j + 1 < cfg.n; ++j) {
        const double a = cfg.detunings.at(static_cast<std::size_t>(2 * j)).plus;
        const double b = cfg.detunings.at(static_cast<std::size_t>(2 * j + 1)).plus;
        if (a == 0.0 || b == 0.0) throw Error(ErrorKind::ZeroDetuning, "one-photon detuning is zero");
        value *= cfg.omega_s * cfg.omega_d / (a * b);
    }
    return value;
}

double classical_excitation_prob(const DetectorConfig& cfg, Phase phi, Phase feedback, bool include_nonresonant) {
    require_perturbative(cfg);
    double ratio = 0.0;
    if (include_nonresonant) {
        require_nonresonant_small(cfg);
        ratio = beat_ratio(cfg);
    }
    const double omega_eff_t = effective_rabi(cfg) * cfg.t;
    const double braces = fringe_braces(cfg.n, phi.value() - feedback.value(), ratio, include_nonresonant);
    return 2.0 * omega_eff_t * omega_eff_t * std::max(braces, 0.0);
}

OutcomeProbability classical_outcome_detail(const DetectorConfig& cfg, Phase phi, Phase feedback, Outcome u,
                                            bool include_nonresonant) {
    require_perturbative(cfg);
    double ratio = 0.0;
    if (include_nonresonant) {
        require_nonresonant_small(cfg);
        ratio = beat_ratio(cfg);
    }
    // P_a / (4 Omega_eff^2 t^2) evaluated without forming Omega_eff^2, which
    // underflows for large n.
    const double raw = 0.5 * fringe_braces(cfg.n, phi.value() - feedback.value(), ratio, include_nonresonant);
    const double even = std::clamp(raw, 0.0, 1.0);
    const bool clamped = even != raw;
    return {u == Outcome::Even ? even : 1.0 - even, clamped};
}

double classical_outcome_prob(const DetectorConfig& cfg, Phase phi, Phase feedback, Outcome u,
                              bool include_nonresonant) {
    return classical_outcome_detail(cfg, phi, feedback, u, include_nonresonant).value;
}

double max_excitation_rate(const DetectorConfig& cfg) {
    const double omega_eff = effective_rabi(cfg);
    return 8.0 * omega_eff * omega_eff * cfg.t;
}

RateScaling rate_scaling(const DetectorConfig& cfg) {
    if (cfg.detunings.empty()) {
        throw Error(ErrorKind::InvalidArgument, "rate scaling needs at least one intermediate transition (n >= 2)");
    }
    const double magnitude = std::abs(cfg.detunings.front().plus);
    if (magnitude == 0.0) throw Error(ErrorKind::ZeroDetuning, "one-photon detuning is zero");
    for (const auto& d : cfg.detunings) {
        for (double v : {d.plus, d.minus}) {
            if (std::abs(std::abs(v) - magnitude) > 1e-12 * magnitude) {
                throw Error(ErrorKind::NonUniformDetunings, "detunings do not share one magnitude");
            }
        }
    }
    const double d2 = magnitude * magnitude;
    const double coupling = cfg.omega_s * cfg.omega_d / d2;
    RateScaling out;
    out.eta = coupling * coupling;
    const double lever = 2.0 * d2 / cfg.omega_d;
    out.r_max = 2.0 * lever * lever * std::pow(out.eta, cfg.n) * cfg.t;
    return out;
}

double accuracy_factor(const DetectorConfig& cfg) {
    require_beat(cfg);
    const double shift = 2.0 * beat_ratio(cfg);
    if (!(std::abs(shift) < 1.0)) {
        throw RegimeViolation(Precondition::AccuracyFactor,
                              "2n |sin(delta t)| / (delta t) = " + std::to_string(std::abs(shift)) + " is not below 1");
    }
    return 1.0 / (1.0 + shift);
}

RegimeReport validity_report(const DetectorConfig& cfg) {
    validate_config(cfg);
    RegimeReport r;
    r.omega_eff_t = std::abs(effective_rabi(cfg)) * cfg.t;
    r.perturbative = r.omega_eff_t < 1.0;
    r.perturbative_margin = r.omega_eff_t < 0.1;
    r.gamma_t = cfg.gamma * cfg.t;
    r.narrow_band = r.gamma_t < 1.0;
    r.delta_t = cfg.delta * cfg.t;
    r.beat_resolved = r.delta_t > 10.0;
    r.nonresonant_ratio = cfg.delta > 0.0 ? std::abs(beat_ratio(cfg)) : INFINITY;
    r.nonresonant_small = r.nonresonant_ratio < 1.0;
    r.nonresonant_margin = r.nonresonant_ratio < 0.1;
    for (std::size_t j = 0; j + 1 < cfg.detunings.size(); j += 2) {
        const double plus = cfg.detunings[j].plus * cfg.detunings[j + 1].plus;
        const double minus = cfg.detunings[j].minus * cfg.detunings[j + 1].minus;
        const double imbalance = minus == 0.0 ? INFINITY : std::abs(std::abs(plus / minus) - 1.0);
        r.worst_branch_imbalance = std::max(r.worst_branch_imbalance, imbalance);
    }
    r.branches_balanced = r.worst_branch_imbalance <= 0.1;
    return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ideal: return "ideal";
        case ModelKind::ClassicalResonant: return "classical-resonant";
        case ModelKind::ClassicalNonresonant: return "classical-nonresonant";
    }
    return "ideal";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "ideal") return ModelKind::Ideal;
    if (name == "classical-resonant") return ModelKind::ClassicalResonant;
    if (name == "classical-nonresonant") return ModelKind::ClassicalNonresonant;
    throw Error(ErrorKind::InvalidArgument,
                "unknown model '" + std::string(name) + "' (ideal | classical-resonant | classical-nonresonant)");
}

MeasurementModel MeasurementModel::make(ModelKind kind, DetectorFamily family) {
    switch (kind) {
        case ModelKind::Ideal: return ideal();
        case ModelKind::ClassicalResonant: return classical_resonant(family);
        case ModelKind::ClassicalNonresonant: return classical_nonresonant(family);
    }
    return ideal();
}

OutcomeProbability MeasurementModel::outcome_probability(int n, Phase phi, Phase feedback, Outcome u) const {
    switch (kind_) {
        case ModelKind::Ideal: return {noon_outcome_prob(n, phi, feedback, u), false};
        case ModelKind::ClassicalResonant:
            return classical_outcome_detail(family_->for_size(n), phi, feedback, u, false);
        case ModelKind::ClassicalNonresonant:
            return classical_outcome_detail(family_->for_size(n), phi, feedback, u, true);
    }
    return {};
}

}  // namespace phasim::models
