#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tsn;
namespace fs = std::filesystem;

namespace {

std::string records_csv(const ScenarioConfig& c) {
    std::ostringstream os;
    write_records_csv(os, run_scenario(c));
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const SummaryRow* row_for(const std::vector<SummaryRow>& rows, const std::string& flow) {
    for (const auto& r : rows) {
        if (r.flow == flow) return &r;
    }
    return nullptr;
}

}  // namespace

TEST(Scenario, SameConfigGivesByteIdenticalRecords) {
    auto c = make_preset(Experiment::SamePriorityBlocking, LinkSpeed::Fast100M);
    c.duration_ns = 200'000'000;
    c.clock_default.jitter_ns = 80;
    const auto a = records_csv(c);
    EXPECT_EQ(a, records_csv(c));
    EXPECT_GT(a.size(), 1000u);
    c.seed = 2;
    EXPECT_NE(a, records_csv(c));
}

TEST(Scenario, TasGivesZeroVariationWithPerfectClocks) {
    for (auto s : {LinkSpeed::Fast100M, LinkSpeed::Gigabit}) {
        auto c = make_preset(Experiment::TimeAwareShaper, s);
        c.duration_ns = 500'000'000;
        const auto r = run_scenario(c);
        for (const char* f : {"F_A1", "F_A2"}) {
            const SummaryRow* row = row_for(r.summary, f);
            ASSERT_NE(row, nullptr);
            EXPECT_EQ(row->stats.max_minus_min, Duration::zero()) << preset_name(Experiment::TimeAwareShaper, s) << f;
            EXPECT_EQ(row->stats.count, 500u);
        }
    }
}

TEST(Scenario, SummaryRowsCarryTheTableKeys) {
    auto c = make_preset(Experiment::LowerPriorityBlocking, LinkSpeed::Gigabit);
    c.duration_ns = 20'000'000;
    const auto r = run_scenario(c);
    ASSERT_EQ(r.summary.size(), 2u);
    const SummaryRow* a1 = row_for(r.summary, "F_A1");
    ASSERT_NE(a1, nullptr);
    EXPECT_EQ(a1->actuator, "A1");
    EXPECT_EQ(a1->queue, "ST");
    EXPECT_EQ(a1->policy, "SP");
    EXPECT_EQ(a1->load, "900 Mbps");
    EXPECT_EQ(a1->capacity, "1 Gbps");
    const auto nl = run_scenario(without_load(c));
    EXPECT_EQ(row_for(nl.summary, "F_A1")->load, "-");
}

TEST(Sweep, RangeErrors) {
    EXPECT_THROW(sweep_range(10, 0, 1), std::invalid_argument);
    EXPECT_THROW(sweep_range(0, 10, 0), std::invalid_argument);
    EXPECT_THROW(sweep_range(0, 10, -2), std::invalid_argument);
    EXPECT_EQ(sweep_range(0, 10, 5), (std::vector<std::int64_t>{0, 5, 10}));
    EXPECT_EQ(sweep_range(3, 3, 7), (std::vector<std::int64_t>{3}));
}

TEST(Sweep, ParameterPaths) {
    const auto c = make_preset(Experiment::LowerPriorityBlocking, LinkSpeed::Fast100M);
    EXPECT_EQ(parse_sweep_target("phase:F_A1", c).parameter, SweepParameter::FlowPhase);
    EXPECT_EQ(parse_sweep_target("load:F_S", c).parameter, SweepParameter::LoadRate);
    EXPECT_EQ(parse_sweep_target("jitter", c).parameter, SweepParameter::ClockJitter);
    EXPECT_THROW(parse_sweep_target("phase:F_X", c), std::invalid_argument);
    EXPECT_THROW(parse_sweep_target("load:F_A1", c), std::invalid_argument);
    EXPECT_THROW(parse_sweep_target("colour:F_A1", c), std::invalid_argument);
    EXPECT_THROW(parse_sweep_target("phase", c), std::invalid_argument);
}

TEST(Sweep, InvalidPointIsRejectedBeforeRunning) {
    auto c = make_preset(Experiment::LowerPriorityBlocking, LinkSpeed::Fast100M);
    const auto t = parse_sweep_target("phase:F_A1", c);
    EXPECT_THROW(sweep(c, t, {0, 2'000'000}), ConfigValidationError);
}

TEST(Sweep, CbfLoadMaxIsNonDecreasing) {
    // Full 10 s runs: shorter samples under-sample the K1 + d_t(MTU) plateau.
    const auto c = make_preset(Experiment::SamePriorityBlocking, LinkSpeed::Fast100M);
    const auto t = parse_sweep_target("load:F_S", c);
    const auto pts = sweep(c, t, {0, 30'000'000, 60'000'000, 90'000'000});
    Duration prev{};
    for (const auto& p : pts) {
        const SummaryRow* a1 = row_for(p.rows, "F_A1");
        ASSERT_NE(a1, nullptr);
        EXPECT_GE(a1->stats.max, prev) << "load " << p.value;
        prev = a1->stats.max;
    }
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    auto c = make_preset(Experiment::LowerPriorityBlocking, LinkSpeed::Gigabit);
    c.duration_ns = 100'000'000;
    const auto t = parse_sweep_target("phase:F_A1", c);
    const auto values = sweep_range(0, 90'000, 10'000);
    std::ostringstream serial, threaded;
    write_sweep_csv(serial, sweep(c, t, values, 1));
    write_sweep_csv(threaded, sweep(c, t, values, 4));
    EXPECT_EQ(serial.str(), threaded.str());
    EXPECT_GT(serial.str().size(), 100u);
}

TEST(Outputs, WritesEveryFile) {
    auto c = make_preset(Experiment::LowerPriorityBlocking, LinkSpeed::Fast100M);
    c.duration_ns = 50'000'000;
    const auto r = run_scenario(c);
    const fs::path d = fs::temp_directory_path() / ("tsnsim_out_" + std::to_string(::getpid()));
    write_outputs(d, r, c.output);
    for (const char* f : {"records.csv", "summary.csv", "summary.md", "drops.csv", "plot.gp", "series_F_A1.csv",
                          "series_F_A2.csv"}) {
        EXPECT_TRUE(fs::exists(d / f)) << f;
    }
    const auto rec = slurp(d / "records.csv");
    EXPECT_EQ(rec.substr(0, rec.find('\n')), "flow,seq,t_tx_ns,t_rx_ns,delay_ns");
    // Two actuators, 50 frames each, plus the header.
    EXPECT_EQ(std::count(rec.begin(), rec.end(), '\n'), 101);
    EXPECT_NE(slurp(d / "summary.md").find("| A2 | ST | SP |"), std::string::npos);
    fs::remove_all(d);
}
