#include "phasim/harness/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phasim/errors.hpp"
#include "phasim/estimator.hpp"
#include "phasim/rng.hpp"

namespace phasim::harness {

namespace {

struct UnitVectors {
    std::vector<double> c, s;
};

UnitVectors unit_vectors(const std::vector<double>& errors) {
    UnitVectors u;
    u.c.reserve(errors.size());
    u.s.reserve(errors.size());
    for (double e : errors) {
        u.c.push_back(std::cos(e));
        u.s.push_back(std::sin(e));
    }
    return u;
}

double resampled_variance(const UnitVectors& u, std::uint64_t seed) {
    CounterRng rng(seed);
    const auto n = u.c.size();
    double sc = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(rng.below(n));
        sc += u.c[j];
        ss += u.s[j];
    }
    return estimator::holevo_from_sharpness(std::hypot(sc, ss) / static_cast<double>(n));
}

double percentile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void check_samples(std::span<const ErrorSample> samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].errors.empty()) throw Error(ErrorKind::EmptyEnsemble, "scaling sample without trials");
        if (i > 0 && samples[i].N < samples[i - 1].N) {
            throw Error(ErrorKind::InvalidArgument, "scaling samples must be sorted by N");
        }
    }
}

// variance[b][s] for every resample b and sample s
std::vector<std::vector<double>> bootstrap_variances(std::span<const ErrorSample> samples, int resamples,
                                                     std::uint64_t seed) {
    std::vector<UnitVectors> units;
    units.reserve(samples.size());
    for (const auto& s : samples) units.push_back(unit_vectors(s.errors));
    std::vector<std::vector<double>> out(static_cast<std::size_t>(resamples), std::vector<double>(samples.size()));
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t s = 0; s < samples.size(); ++s) {
            out[static_cast<std::size_t>(b)][s] =
                resampled_variance(units[s], derive_seed(seed, {static_cast<std::uint64_t>(b), s}));
        }
    }
    return out;
}

std::vector<ScalingPoint> points_from(std::span<const ErrorSample> samples,
                                      const std::vector<std::vector<double>>& boot) {
    std::vector<ScalingPoint> points;
    points.reserve(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        ScalingPoint p;
        p.K = samples[s].K;
        p.N = samples[s].N;
        p.holevo_variance = estimator::holevo_variance_of_errors(samples[s].errors);
        if (boot.size() >= 2) {
            double mean = 0.0, m2 = 0.0;
            bool finite = true;
            for (std::size_t b = 0; b < boot.size(); ++b) {
                const double v = boot[b][s];
                if (!std::isfinite(v)) finite = false;
                // Welford
                const double d = v - mean;
                mean += d / static_cast<double>(b + 1);
                m2 += d * (v - mean);
            }
            p.std_error = finite ? std::sqrt(m2 / static_cast<double>(boot.size() - 1))
                                 : std::numeric_limits<double>::infinity();
        }
        points.push_back(p);
    }
    return points;
}

}  // namespace

LineFit fit_loglog(std::span<const std::int64_t> n, std::span<const double> variance) {
    if (n.size() != variance.size()) throw Error(ErrorKind::InvalidArgument, "N and V differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] > 0 && std::isfinite(variance[i]) && variance[i] > 0.0) {
            xs.push_back(std::log(static_cast<double>(n[i])));
            ys.push_back(std::log(variance[i]));
        }
    }
    if (xs.size() < 3) throw Error(ErrorKind::DegenerateFit, "need at least 3 finite positive points");
    const double count = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 1e-12)) throw Error(ErrorKind::DegenerateFit, "all resource counts coincide");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

std::vector<ScalingPoint> summarize_samples(std::span<const ErrorSample> samples, int resamples, std::uint64_t seed) {
    check_samples(samples);
    return points_from(samples, bootstrap_variances(samples, resamples, seed));
}

ScalingResult fit_scaling(std::span<const ErrorSample> samples, int resamples, std::uint64_t seed) {
    check_samples(samples);
    if (resamples < 2) throw Error(ErrorKind::InvalidArgument, "bootstrap needs at least 2 resamples");
    const auto boot = bootstrap_variances(samples, resamples, seed);

    ScalingResult result;
    result.points = points_from(samples, boot);

    std::vector<std::int64_t> ns;
    std::vector<double> vs;
    for (const auto& p : result.points) {
        ns.push_back(p.N);
        vs.push_back(p.holevo_variance);
    }
    const LineFit fit = fit_loglog(ns, vs);
    result.slope = fit.slope;
    result.intercept = fit.intercept;

    std::vector<double> slopes;
    slopes.reserve(boot.size());
    for (const auto& row : boot) {
        try {
            slopes.push_back(fit_loglog(ns, row).slope);
        } catch (const Error&) {
            // resample left too few finite points
        }
    }
    if (slopes.size() * 2 < boot.size()) {
        throw Error(ErrorKind::DegenerateFit, "most bootstrap resamples produced no finite fit");
    }
    result.slope_lo = percentile(slopes, 0.025);
    result.slope_hi = percentile(slopes, 0.975);
    return result;
}

}  // namespace phasim::harness
