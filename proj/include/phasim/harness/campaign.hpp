#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phasim/estimator.hpp"
#include "phasim/harness/config.hpp"
#include "phasim/harness/scaling.hpp"

namespace phasim::harness {

inline constexpr std::int64_t kDefaultMeasurementBudget = 10'000'000;

struct CampaignSpec {
    estimator::ProtocolConfig protocol;
    int trials = 1;
    std::vector<int> k_sweep;  ///< empty: just protocol.K
    std::uint64_t root_seed = 0;
    std::filesystem::path output_dir = "phasim-out";
    int threads = 1;
    int bootstrap = 1000;
    std::optional<Phase> true_phase;  ///< unset: uniform random per trial
    std::int64_t budget = kDefaultMeasurementBudget;
    bool write_records = true;

    std::vector<int> sweep() const;
    /// trials * (largest N)
    std::int64_t measurement_load() const;
    void validate() const;

    /// Reads protocol.*, detector.*, campaign.* keys; rejects unknown keys.
    /// PHASIM_BUDGET, when set, overrides campaign.budget.
    static CampaignSpec from_config(const KeyValueConfig& cfg);
};

/// Budget guard honoring the PHASIM_BUDGET environment variable.
std::int64_t measurement_budget(std::int64_t configured);

struct RunRecord {
    int K = 0;
    int M = 1;
    int trial = 0;
    std::string model;
    std::uint64_t seed = 0;
    Phase true_phase;
    double error = 0.0;  ///< estimate - truth wrapped to [-pi, pi)
    estimator::EstimateResult result;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// One JSON object on a single line.
std::string serialize_record(const RunRecord& record);
RunRecord parse_record(const std::string& line);

struct CampaignOutcome {
    std::vector<ErrorSample> samples;        ///< one per swept K, ascending N
    std::vector<ScalingPoint> points;
    std::optional<ScalingResult> fit;        ///< present with >= 3 usable points
    std::filesystem::path summary_csv;
    std::int64_t measurements = 0;           ///< elementary measurements performed
};

/// Seeds are derived per (K, trial) from root_seed, so output does not
/// depend on `threads`.
CampaignOutcome run_campaign(const CampaignSpec& spec);

/// Summary table: K,N,M,model,trials,V_H,stderr
std::string summary_csv(const CampaignSpec& spec, const std::vector<ScalingPoint>& points);
std::string fit_csv(const ScalingResult& fit);

/// Shortest round-trip decimal form; "inf" for infinities.
std::string format_number(double v);

}  // namespace phasim::harness
