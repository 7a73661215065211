#pragma once

// Adaptive phase estimation: exact binary-digit recovery, Bayesian
// posterior tracking with sharpness-maximizing feedback, and Holevo
// variance bookkeeping.

#include <cstdint>
#include <span>
#include <vector>

#include "phasim/models.hpp"
#include "phasim/phase.hpp"
#include "phasim/posterior.hpp"

namespace phasim::estimator {

using models::MeasurementModel;

/// Likelihood P(u | phi, feedback) the estimator conditions on.
///
/// Every back-end is inferred with the two-outcome fringe
/// 1/2 {1 + (-1)^u cos[n(phi - feedback)]}. For the non-resonant detector
/// the sampled probabilities deviate from it; that mismatch is the
/// imperfection being studied.
LikelihoodKernel inference_kernel(const MeasurementModel& model, int n, Phase feedback, Outcome u);

/// 2 pi |c_1|
double sharpness(const Posterior& p);

/// sum_u |integral e^{i h phi} p(phi) P(u|phi, feedback) dphi| for harmonic h.
/// With h = 1 this is the expected sharpness after one measurement.
double expected_sharpness(const Posterior& p, int n, Phase feedback, const MeasurementModel& model, int harmonic = 1);

/// Which circular moment the feedback search maximizes.
enum class FeedbackObjective {
    /// Moment of n*phi for a size-n measurement: the digit this stage resolves.
    StageHarmonic,
    /// Moment of phi itself at every stage.
    FirstHarmonic,
};

enum class MeasurementOrder {
    Blocked,      ///< all M repeats of size 2^K, then 2^(K-1), ...
    Interleaved,  ///< M sweeps over K..0
};

struct ProtocolConfig {
    int K = 0;
    int M = 1;
    MeasurementModel model = MeasurementModel::ideal();
    int feedback_grid = 256;
    MeasurementOrder order = MeasurementOrder::Blocked;
    FeedbackObjective objective = FeedbackObjective::StageHarmonic;

    /// N = M (2^{K+1} - 1)
    std::int64_t resources() const { return static_cast<std::int64_t>(M) * ((std::int64_t{2} << K) - 1); }
    void validate() const;

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

/// Maximizes the expected moment over feedback in [0, 2pi/n): grid scan
/// followed by golden-section refinement. Ties go to the smallest candidate.
Phase choose_feedback(const Posterior& p, int n, const ProtocolConfig& cfg);

Posterior bayes_update(const Posterior& p, int n, Phase feedback, Outcome u, const MeasurementModel& model);

struct MeasurementRecord {
    int n = 1;
    Phase feedback;
    Outcome outcome = Outcome::Even;

    friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct EstimateResult {
    Phase estimate;
    double holevo_variance = 0.0;
    double sharpness = 0.0;
    std::int64_t n_resources = 0;
    std::vector<MeasurementRecord> outcome_log;
    int clamped_steps = 0;

    friend bool operator==(const EstimateResult&, const EstimateResult&) = default;
};

/// mu^{-2} - 1, +infinity for (numerically) vanishing mu.
double holevo_from_sharpness(double mu);

/// Recovers every digit of a dyadic phase with deterministic outcomes.
/// Throws NondeterministicOutcome if a round is not certain to 1e-9.
DyadicPhase dyadic_estimate(const DyadicPhase& true_phase, const MeasurementModel& model);

/// Adaptive Bayesian protocol from a uniform prior.
EstimateResult run_protocol(Phase true_phase, const ProtocolConfig& cfg, std::uint64_t rng_seed);

/// Holevo variance of the ensemble of signed errors estimate - truth.
double holevo_variance_ensemble(std::span<const EstimateResult> results, std::span<const Phase> true_phases);
double holevo_variance_of_errors(std::span<const double> errors);

}  // namespace phasim::estimator
