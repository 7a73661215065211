#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "phasim/errors.hpp"
#include "phasim/harness/campaign.hpp"
#include "test_util.hpp"

using namespace phasim;
using namespace phasim::harness;

namespace {

CampaignSpec small_spec(const std::filesystem::path& dir, int threads = 1) {
    CampaignSpec spec;
    spec.protocol.M = 2;
    spec.trials = 40;
    spec.k_sweep = {0, 1, 2, 3};
    spec.root_seed = 77;
    spec.output_dir = dir;
    spec.threads = threads;
    spec.bootstrap = 100;
    return spec;
}

std::vector<std::string> csv_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        rows.push_back(line);
    }
    return rows;
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
    ~ScopedEnv() { unsetenv(name_); }

private:
    const char* name_;
};

}  // namespace

TEST(FormatNumber, RoundTripsAndSentinels) {
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(0.5), "0.5");
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Campaign, SingleTrialSingleMeasurement) {
    const auto dir = testutil::scratch_dir("campaign-single");
    CampaignSpec spec;
    spec.output_dir = dir;
    spec.bootstrap = 10;
    const auto out = run_campaign(spec);
    EXPECT_EQ(out.measurements, 1);
    ASSERT_EQ(out.samples.size(), 1u);
    EXPECT_EQ(out.samples[0].N, 1);
    EXPECT_FALSE(out.fit.has_value());
    EXPECT_TRUE(std::filesystem::exists(dir / "records" / "K0_trial0.jsonl"));
    const auto rows = csv_rows(testutil::slurp(out.summary_csv));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "K,N,M,model,trials,V_H,stderr");
    EXPECT_EQ(rows[1], "0,1,1,ideal,1,0,0");  // a single error has zero spread
}

TEST(Campaign, SummaryTrialCountsAddUp) {
    const auto dir = testutil::scratch_dir("campaign-counts");
    const auto spec = small_spec(dir);
    const auto out = run_campaign(spec);
    const auto rows = csv_rows(testutil::slurp(out.summary_csv));
    ASSERT_EQ(rows.size(), spec.k_sweep.size() + 1);
    long total = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<std::string> cols;
        std::istringstream line(rows[i]);
        for (std::string c; std::getline(line, c, ',');) cols.push_back(c);
        ASSERT_EQ(cols.size(), 7u);
        total += std::stol(cols[4]);
    }
    EXPECT_EQ(total, spec.trials * static_cast<long>(spec.k_sweep.size()));
    EXPECT_TRUE(out.fit.has_value());
    EXPECT_TRUE(std::filesystem::exists(dir / "scaling_fit.csv"));
    EXPECT_EQ(out.measurements, spec.trials * 2 * (1 + 2 + 3 + 4));
}

TEST(Campaign, ByteIdenticalAcrossRerunsAndThreadCounts) {
    const auto da = testutil::scratch_dir("campaign-a");
    const auto db = testutil::scratch_dir("campaign-b");
    const auto dc = testutil::scratch_dir("campaign-c");
    run_campaign(small_spec(da, 1));
    run_campaign(small_spec(db, 1));
    run_campaign(small_spec(dc, 4));
    const auto ref = testutil::slurp(da / "summary.csv");
    EXPECT_FALSE(ref.empty());
    EXPECT_EQ(testutil::slurp(db / "summary.csv"), ref);
    EXPECT_EQ(testutil::slurp(dc / "summary.csv"), ref);
    EXPECT_EQ(testutil::slurp(dc / "scaling_fit.csv"), testutil::slurp(da / "scaling_fit.csv"));
    for (const auto& name : {"K3_trial17.jsonl", "K0_trial0.jsonl"}) {
        EXPECT_EQ(testutil::slurp(dc / "records" / name), testutil::slurp(da / "records" / name));
    }
}

TEST(Campaign, FixedTruePhaseIsUsed) {
    auto spec = small_spec(testutil::scratch_dir("campaign-fixed"));
    spec.true_phase = Phase(1.25 * kPi);
    spec.trials = 3;
    spec.protocol.M = 1;
    run_campaign(spec);
    const auto rec = parse_record(testutil::slurp(spec.output_dir / "records" / "K2_trial1.jsonl"));
    EXPECT_EQ(rec.true_phase, Phase(1.25 * kPi));
    EXPECT_LT(std::abs(rec.error), 1e-9);
}

TEST(RunRecord, SerializationRoundTrips) {
    const auto dir = testutil::scratch_dir("campaign-records");
    const auto spec = small_spec(dir);
    run_campaign(spec);
    for (int K : spec.k_sweep) {
        for (int trial = 0; trial < spec.trials; ++trial) {
            const auto text = testutil::slurp(dir / "records" / ("K" + std::to_string(K) + "_trial" + std::to_string(trial) + ".jsonl"));
            ASSERT_EQ(text.back(), '\n');
            ASSERT_EQ(text.find('\n'), text.size() - 1);
            const auto rec = parse_record(text);
            EXPECT_EQ(rec.K, K);
            EXPECT_EQ(serialize_record(rec) + "\n", text);
            EXPECT_EQ(parse_record(serialize_record(rec)), rec);
        }
    }
}

TEST(RunRecord, InfiniteVarianceRoundTrips) {
    RunRecord r;
    r.model = "ideal";
    r.result.holevo_variance = std::numeric_limits<double>::infinity();
    r.result.outcome_log = {{4, Phase(0.3), Outcome::Odd}, {1, Phase(2.0), Outcome::Even}};
    const auto text = serialize_record(r);
    EXPECT_NE(text.find("\"inf\""), std::string::npos);
    EXPECT_EQ(parse_record(text), r);
    EXPECT_THROW(parse_record("{not json"), Error);
    EXPECT_THROW(parse_record("{}"), Error);
}

TEST(CampaignSpec, ReadsConfig) {
    const auto cfg = KeyValueConfig::parse(
        "protocol.K = 2\nprotocol.M = 3\nprotocol.model = classical-nonresonant\nprotocol.order = interleaved\n"
        "protocol.objective = first\nprotocol.feedback_grid = 64\n"
        "detector.delta = 500\ndetector.detuning = 2e4\n"
        "campaign.trials = 12\ncampaign.k_sweep = 1,2,3\ncampaign.root_seed = 9\ncampaign.output_dir = out\n"
        "campaign.threads = 2\ncampaign.bootstrap = 50\ncampaign.true_phase = dyadic:11\ncampaign.budget = 1000\n"
        "campaign.write_records = false\n");
    const auto spec = CampaignSpec::from_config(cfg);
    EXPECT_EQ(spec.protocol.K, 2);
    EXPECT_EQ(spec.protocol.M, 3);
    EXPECT_EQ(spec.protocol.model.kind(), models::ModelKind::ClassicalNonresonant);
    EXPECT_DOUBLE_EQ(spec.protocol.model.detector()->delta, 500.0);
    EXPECT_DOUBLE_EQ(spec.protocol.model.detector()->detuning, 2e4);
    EXPECT_EQ(spec.protocol.order, estimator::MeasurementOrder::Interleaved);
    EXPECT_EQ(spec.protocol.objective, estimator::FeedbackObjective::FirstHarmonic);
    EXPECT_EQ(spec.protocol.feedback_grid, 64);
    EXPECT_EQ(spec.trials, 12);
    EXPECT_EQ(spec.sweep(), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(spec.root_seed, 9u);
    EXPECT_EQ(spec.output_dir, "out");
    EXPECT_EQ(spec.threads, 2);
    EXPECT_EQ(spec.bootstrap, 50);
    EXPECT_EQ(spec.true_phase, Phase(1.5 * kPi));
    EXPECT_EQ(spec.budget, 1000);
    EXPECT_FALSE(spec.write_records);
    EXPECT_EQ(spec.measurement_load(), 12 * 3 * 15);
}

TEST(CampaignSpec, RejectsUnknownKeysAndBadValues) {
    auto kind = [](const std::string& text) {
        try {
            CampaignSpec::from_config(KeyValueConfig::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::IoFailure;
    };
    EXPECT_EQ(kind("protocol.Q = 1\n"), ErrorKind::ConfigError);
    EXPECT_EQ(kind("protocol.order = sideways\n"), ErrorKind::ConfigError);
    EXPECT_EQ(kind("protocol.model = magic\n"), ErrorKind::ConfigError);
    EXPECT_EQ(kind("campaign.write_records = maybe\n"), ErrorKind::ConfigError);
    EXPECT_EQ(kind("campaign.trials = many\n"), ErrorKind::ConfigError);
}

TEST(CampaignSpec, ValidationRules) {
    CampaignSpec spec;
    spec.trials = 0;
    EXPECT_THROW(spec.validate(), Error);
    spec.trials = 1;
    spec.k_sweep = {3, 1};
    EXPECT_THROW(spec.validate(), Error);
    spec.k_sweep = {1, 1};
    EXPECT_THROW(spec.validate(), Error);
    spec.k_sweep = {};
    spec.threads = 0;
    EXPECT_THROW(spec.validate(), Error);
}

TEST(CampaignSpec, BudgetGuard) {
    CampaignSpec spec;
    spec.trials = 1000;
    spec.k_sweep = {1, 10};
    spec.budget = 1000;
    try {
        spec.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
    spec.budget = kDefaultMeasurementBudget;
    EXPECT_NO_THROW(spec.validate());
    {
        ScopedEnv env("PHASIM_BUDGET", "100");
        EXPECT_EQ(measurement_budget(kDefaultMeasurementBudget), 100);
        EXPECT_THROW(spec.validate(), Error);
    }
    {
        ScopedEnv env("PHASIM_BUDGET", "lots");
        EXPECT_THROW(measurement_budget(1), Error);
    }
    EXPECT_EQ(measurement_budget(5), 5);
}

TEST(Campaign, UnwritableOutputIsIoFailure) {
    const auto dir = testutil::scratch_dir("campaign-io");
    testutil::write_text(dir / "blocker", "x");
    CampaignSpec spec;
    spec.output_dir = dir / "blocker" / "sub";
    spec.bootstrap = 10;
    try {
        run_campaign(spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
    }
}
