#include "kfr/generators.hpp"
#include "kfr/online2.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using kfr::FacilityPair;
using kfr::Rational;
using kfr::testing::ints;
using kfr::testing::make;

namespace {

std::pair<kfr::OnlineState, kfr::StageTrace> step_from(long x1, long x2, std::initializer_list<long> agents) {
    kfr::OnlineState s;
    s.x = {Rational(x1), Rational(x2)};
    auto a = ints(agents);
    return kfr::online_step(s, a);
}

kfr::Positions random_multiset(std::mt19937_64& rng, std::size_t n, long hi) {
    kfr::Positions out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(static_cast<long>(rng() % static_cast<unsigned long>(hi + 1)));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(OneMedian, Examples) {
    auto a = kfr::one_median(ints({1, 2, 3}));
    EXPECT_EQ(a.interval.low, 2);
    EXPECT_EQ(a.interval.high, 2);
    EXPECT_EQ(a.cost, 2);

    auto b = kfr::one_median(ints({0, 2}));
    EXPECT_EQ(b.interval.low, 0);
    EXPECT_EQ(b.interval.high, 2);
    EXPECT_EQ(b.cost, 2);

    auto c = kfr::one_median(ints({5}));
    EXPECT_EQ(c.interval.low, 5);
    EXPECT_EQ(c.cost, 0);

    EXPECT_THROW(kfr::one_median(kfr::Positions{}), std::invalid_argument);
    EXPECT_EQ(kfr::one_median_cost(kfr::Positions{}), 0);
}

TEST(OneMedian, CostEqualsScanMinimum) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        auto c = random_multiset(rng, 1 + rng() % 9, 30);
        auto m = kfr::one_median(c);
        EXPECT_EQ(m.cost, kfr::testing::scan_median_cost(c));
        // every point of the interval is a minimizer
        Rational at_high = 0;
        for (const auto& a : c) at_high += kfr::testing::dist(a, m.interval.high);
        EXPECT_EQ(at_high, m.cost);
    }
}

TEST(BestPartition, Examples) {
    auto p = kfr::best_partition(ints({0, 1, 10, 11}));
    EXPECT_EQ(p.left, ints({0, 1}));
    EXPECT_EQ(p.right, ints({10, 11}));
    EXPECT_EQ(p.cost, 2);

    auto q = kfr::best_partition(ints({0, 100}));
    EXPECT_EQ(q.left, ints({0}));
    EXPECT_EQ(q.right, ints({100}));
    EXPECT_EQ(q.cost, 0);

    auto single = kfr::best_partition(ints({4}));
    EXPECT_EQ(single.cost, 0);
    EXPECT_EQ(single.left.size() + single.right.size(), 1u);
}

TEST(BestPartition, EqualsExhaustiveAssignment) {
    std::mt19937_64 rng(8);
    for (std::size_t n = 1; n <= 10; ++n)
        for (int trial = 0; trial < 12; ++trial) {
            auto c = random_multiset(rng, n, trial % 2 ? 8 : 50);
            auto p = kfr::best_partition(c);
            EXPECT_EQ(p.cost, kfr::testing::brute_two_cluster_cost(c)) << "n=" << n;
            EXPECT_EQ(kfr::one_median_cost(p.left) + kfr::one_median_cost(p.right), p.cost);
            EXPECT_EQ(p.left.size() + p.right.size(), n);
        }
}

TEST(OnlineStep, HandTraceLeftOfAgents) {
    auto [next, tr] = step_from(0, 1, {5, 6});
    EXPECT_EQ(tr.step1, kfr::Step1Case::LeftOfAgents);
    EXPECT_EQ(tr.z, (FacilityPair{0, 5}));
    EXPECT_EQ(tr.h, 1);
    EXPECT_EQ(tr.step2, kfr::Step2Branch::MedianRight);
    EXPECT_EQ(tr.x, (FacilityPair{3, 5}));
    EXPECT_EQ(next.x, tr.x);
}

TEST(OnlineStep, HandTraceStraddle) {
    auto [next, tr] = step_from(2, 9, {4, 5});
    EXPECT_EQ(tr.step1, kfr::Step1Case::Straddle);
    EXPECT_EQ(tr.z, (FacilityPair{4, 7}));
    EXPECT_EQ(tr.step2, kfr::Step2Branch::Partition);
    ASSERT_TRUE(tr.partition.has_value());
    EXPECT_EQ(tr.partition->left, ints({4}));
    EXPECT_EQ(tr.partition->right, ints({5}));
    EXPECT_EQ(tr.x, (FacilityPair{4, 5}));
}

TEST(OnlineStep, HandTraceNoStep1Move) {
    auto [next, tr] = step_from(0, 10, {0, 10});
    EXPECT_EQ(tr.step1, kfr::Step1Case::None);
    EXPECT_EQ(tr.step2, kfr::Step2Branch::Partition);
    EXPECT_EQ(tr.x, (FacilityPair{0, 10}));
    EXPECT_EQ(tr.moving() + tr.connection, 0);
}

TEST(OnlineStep, RightOfAgentsAndMedianLeft) {
    // both facilities right of a tight cluster: facility 1 clamps to the cluster
    auto [next, tr] = step_from(10, 20, {0, 1, 2});
    EXPECT_EQ(tr.step1, kfr::Step1Case::RightOfAgents);
    EXPECT_EQ(tr.z, (FacilityPair{2, 20}));
    EXPECT_EQ(tr.step2, kfr::Step2Branch::MedianLeft);
    EXPECT_EQ(tr.x, (FacilityPair{1, 14}));
}

TEST(OnlineRun, RejectsOtherFacilityCounts) {
    try {
        kfr::run_online(make({0, 1, 2}, {{1}}));
        FAIL();
    } catch (const kfr::OnlineScopeError& e) {
        EXPECT_NE(std::string(e.what()).find("online algorithm defined for K=2"), std::string::npos);
    }
    EXPECT_THROW(kfr::run_online(make({0}, {{1}})), kfr::OnlineScopeError);
}

TEST(OnlineRun, SingleStageIsOneStep) {
    auto inst = make({0, 1}, {{5, 6}});
    auto run = kfr::run_online(inst);
    auto [next, tr] = step_from(0, 1, {5, 6});
    EXPECT_EQ(run.schedule.positions[0], ints({3, 5}));
    EXPECT_EQ(run.schedule.total(), tr.moving() + tr.connection);
}

TEST(OnlineRun, StationaryAgentsStopMoving) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        auto agents = random_multiset(rng, 1 + rng() % 5, 20);
        kfr::Positions x0{Rational(static_cast<long>(rng() % 21)), Rational(static_cast<long>(rng() % 21))};
        auto inst = kfr::make_instance(x0, std::vector<kfr::Positions>(40, agents));
        auto run = kfr::run_online(inst);
        // once a configuration repeats it is a fixed point, and one is reached
        bool settled = false;
        for (std::size_t t = 1; t < run.traces.size(); ++t) {
            bool same = run.traces[t].x == run.traces[t - 1].x;
            if (settled) {
                EXPECT_TRUE(same) << "trial " << trial << " stage " << t + 1;
            }
            settled = settled || same;
        }
        EXPECT_TRUE(settled) << "trial " << trial;
        EXPECT_EQ(run.traces.back().moving(), 0);
    }
}

TEST(OnlineRun, StationaryTightClusterSettlesAfterTwoStages) {
    auto inst = make({0, 20}, {{4, 5, 6}, {4, 5, 6}, {4, 5, 6}, {4, 5, 6}, {4, 5, 6}});
    auto run = kfr::run_online(inst);
    for (std::size_t t = 2; t < run.traces.size(); ++t) EXPECT_EQ(run.traces[t].moving(), 0);
}

TEST(OnlineRun, TraceMovingMatchesScheduleMoving) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        kfr::GenSpec spec = kfr::suite_spec(seed, 5, 6, 2);
        spec.facilities = 2;
        auto inst = kfr::generate(spec);
        auto run = kfr::run_online(inst);
        ASSERT_EQ(run.traces.size(), inst.stage_count());
        for (std::size_t t = 0; t < run.traces.size(); ++t) {
            EXPECT_EQ(run.traces[t].moving(), run.schedule.per_stage_moving[t]) << "seed " << seed;
            EXPECT_EQ(run.traces[t].connection, run.schedule.per_stage_connection[t]);
            EXPECT_LE(run.traces[t].x.first, run.traces[t].x.second);
        }
    }
}

TEST(OnlineRun, TraceSerialization) {
    auto run = kfr::run_online(make({0, 1}, {{5, 6}, {0, 10}}));
    std::string jsonl = kfr::traces_to_jsonl(run.traces);
    std::istringstream lines(jsonl);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["stage"], count + 1);
        ++count;
    }
    EXPECT_EQ(count, 2u);
    std::string csv = kfr::traces_to_csv(run.traces);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "stage,step1,branch,H,moving,connection");
    EXPECT_NE(csv.find("1,left-of-agents,median-right,1,"), std::string::npos);
}
