#pragma once

// Outcome probabilities for the two measurement back-ends: an ideal NOON
// state in a Mach-Zehnder interferometer, and a multiphoton
// frequency-selective atomic detector driven by classical light.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasim/errors.hpp"
#include "phasim/phase.hpp"

namespace phasim::models {

/// One-photon detunings (Delta_{j+}, Delta_{j-}) of a single intermediate transition.
struct DetuningPair {
    double plus = 0.0;
    double minus = 0.0;
};

/// Classical-light detector for an n-photon directional resonance.
///
/// `detunings` lists the 2(n-1) one-photon detunings entering the effective
/// Rabi frequency; n = 1 needs none.
struct DetectorConfig {
    double omega_s = 0.0;  ///< signal Rabi frequency
    double omega_d = 0.0;  ///< drive Rabi frequency
    std::vector<DetuningPair> detunings;
    double delta = 0.0;    ///< beat frequency nu_+ - nu_-
    double t = 0.0;        ///< interaction time
    double gamma = 0.0;    ///< upper-level decay rate
    int n = 1;

    /// All 2(n-1) detunings set to (detuning, detuning + delta).
    static DetectorConfig uniform(int n, double omega_s, double omega_d, double detuning, double delta, double t,
                                  double gamma = 0.0);
};

/// Regime diagnostics; the constructor never rejects a config, this reports it.
struct RegimeReport {
    double omega_eff_t = 0.0;
    bool perturbative = false;          ///< |Omega_eff| t < 1
    bool perturbative_margin = false;   ///< |Omega_eff| t < 0.1
    double gamma_t = 0.0;
    bool narrow_band = false;           ///< gamma t < 1
    double delta_t = 0.0;
    bool beat_resolved = false;         ///< delta t > 10
    double nonresonant_ratio = 0.0;     ///< n |sin(delta t)| / (delta t)
    bool nonresonant_small = false;     ///< ratio < 1
    bool nonresonant_margin = false;    ///< ratio < 0.1
    double worst_branch_imbalance = 0.0;
    bool branches_balanced = false;     ///< |D+ / D-| within 10% of 1 for every pair

    bool all_hard_ok() const { return perturbative && nonresonant_small; }
};

enum class Precondition { Perturbative, NonresonantSuppression, AccuracyFactor };

class RegimeViolation : public Error {
public:
    RegimeViolation(Precondition which, const std::string& what)
        : Error(ErrorKind::RegimeViolation, what), which_(which) {}
    Precondition which() const noexcept { return which_; }

private:
    Precondition which_;
};

void validate_config(const DetectorConfig& cfg);
RegimeReport validity_report(const DetectorConfig& cfg);

/// 1/2 {1 + (-1)^u cos[n(phi - feedback)]}
double noon_outcome_prob(int n, Phase phi, Phase feedback, Outcome u);

/// Omega_S^n Omega_D^(n-1) / prod_j Delta_{2j-1,+} Delta_{2j,+}
double effective_rabi(const DetectorConfig& cfg);

/// Excitation probability of the upper level; optionally includes the
/// leading one-photon-exchange non-resonant term. Clamped below at zero.
double classical_excitation_prob(const DetectorConfig& cfg, Phase phi, Phase feedback, bool include_nonresonant);

struct OutcomeProbability {
    double value = 0.0;
    bool clamped = false;
};

/// Excitation probability normalized by its resonant maximum 4 Omega_eff^2 t^2,
/// read as the probability of the Even outcome.
OutcomeProbability classical_outcome_detail(const DetectorConfig& cfg, Phase phi, Phase feedback, Outcome u,
                                            bool include_nonresonant);
double classical_outcome_prob(const DetectorConfig& cfg, Phase phi, Phase feedback, Outcome u,
                              bool include_nonresonant);

/// 8 Omega_eff^2 t
double max_excitation_rate(const DetectorConfig& cfg);

struct RateScaling {
    double eta = 0.0;    ///< |Omega_S Omega_D / Delta^2|^2
    double r_max = 0.0;  ///< 2 |2 Delta^2 / Omega_D|^2 eta^n t
};

/// Requires every detuning (both branches) to share one magnitude.
RateScaling rate_scaling(const DetectorConfig& cfg);

/// 1 / (1 + 2n sin(delta t)/(delta t))
double accuracy_factor(const DetectorConfig& cfg);

// ---------------------------------------------------------------------------

enum class ModelKind { Ideal, ClassicalResonant, ClassicalNonresonant };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// Detector parameters that are reused for every NOON size of a protocol.
struct DetectorFamily {
    double omega_s = 0.5;
    double omega_d = 0.5;
    double detuning = 1.0e4;
    double delta = 100.0;
    double t = 1.0;
    double gamma = 0.0;

    DetectorConfig for_size(int n) const {
        return DetectorConfig::uniform(n, omega_s, omega_d, detuning, delta, t, gamma);
    }

    friend bool operator==(const DetectorFamily&, const DetectorFamily&) = default;
};

/// Outcome-probability source selected at runtime.
class MeasurementModel {
public:
    MeasurementModel() = default;

    static MeasurementModel ideal() { return MeasurementModel(ModelKind::Ideal, std::nullopt); }
    static MeasurementModel classical_resonant(DetectorFamily family) {
        return MeasurementModel(ModelKind::ClassicalResonant, family);
    }
    static MeasurementModel classical_nonresonant(DetectorFamily family) {
        return MeasurementModel(ModelKind::ClassicalNonresonant, family);
    }
    static MeasurementModel make(ModelKind kind, DetectorFamily family = {});

    ModelKind kind() const noexcept { return kind_; }
    const std::optional<DetectorFamily>& detector() const noexcept { return family_; }

    /// Probability that sampling yields `u`.
    OutcomeProbability outcome_probability(int n, Phase phi, Phase feedback, Outcome u) const;
    double probability(int n, Phase phi, Phase feedback, Outcome u) const {
        return outcome_probability(n, phi, feedback, u).value;
    }

    friend bool operator==(const MeasurementModel&, const MeasurementModel&) = default;

private:
    MeasurementModel(ModelKind kind, std::optional<DetectorFamily> family) : kind_(kind), family_(family) {}

    ModelKind kind_ = ModelKind::Ideal;
    std::optional<DetectorFamily> family_;
};

}  // namespace phasim::models
