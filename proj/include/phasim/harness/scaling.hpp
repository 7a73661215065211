#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace phasim::harness {

/// Per-resource-count ensemble of signed phase errors.
struct ErrorSample {
    int K = 0;
    std::int64_t N = 0;
    std::vector<double> errors;
};

struct ScalingPoint {
    int K = 0;
    std::int64_t N = 0;
    double holevo_variance = 0.0;
    double std_error = 0.0;  ///< bootstrap standard deviation of the variance

    friend bool operator==(const ScalingPoint&, const ScalingPoint&) = default;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;  ///< ascending in N
    double slope = 0.0;
    double intercept = 0.0;
    double slope_lo = 0.0;  ///< 95% bootstrap interval
    double slope_hi = 0.0;

    friend bool operator==(const ScalingResult&, const ScalingResult&) = default;
};

/// Ordinary least squares of log V against log N.
/// Throws DegenerateFit with fewer than 3 finite positive points or a single N.
LineFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> variance);

/// Holevo variance per sample, bootstrap standard errors, log-log slope and
/// a percentile interval from `resamples` resamplings of the per-trial errors.
ScalingResult fit_scaling(std::span<const ErrorSample> samples, int resamples, std::uint64_t seed);

/// Variance and bootstrap stderr for every sample, without the slope fit.
std::vector<ScalingPoint> summarize_samples(std::span<const ErrorSample> samples, int resamples, std::uint64_t seed);

}  // namespace phasim::harness
