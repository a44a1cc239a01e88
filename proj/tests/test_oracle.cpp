#include "kfr/generators.hpp"
#include "kfr/oracle.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using kfr::Rational;
using kfr::testing::ints;
using kfr::testing::make;

TEST(DpOracle, SpecExamples) {
    auto a = kfr::dp_optimal(make({0}, {{1, 3}}));
    EXPECT_EQ(a.total(), 3);
    EXPECT_EQ(a.positions[0], ints({1}));

    auto b = kfr::dp_optimal(make({0}, {{10}, {10}}));
    EXPECT_EQ(b.total(), 10);
    EXPECT_EQ(b.positions[0], ints({10}));
    EXPECT_EQ(b.positions[1], ints({10}));

    EXPECT_EQ(kfr::dp_optimal(make({0, 10}, {{0, 10}})).total(), 0);
}

TEST(EnumerationOracle, SpecExamples) {
    EXPECT_EQ(kfr::enumerate_optimal(make({0}, {{0}})).total(), 0);
    EXPECT_EQ(kfr::enumerate_optimal(make({0}, {{1, 3}})).total(), 3);
    EXPECT_EQ(kfr::enumerate_optimal(make({0}, {{10}, {10}})).total(), 10);
}

TEST(DpOracle, MatchesNaiveRecursion) {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        auto inst = kfr::generate(kfr::suite_spec(seed, 5, 4, 2));
        EXPECT_EQ(kfr::dp_optimal(inst).total(), kfr::testing::naive_optimal_cost(inst)) << "seed " << seed;
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto spec = kfr::suite_spec(seed, 3, 2, 3, 0, 8);
        spec.facilities = 3;
        auto inst = kfr::generate(spec);
        EXPECT_EQ(kfr::dp_optimal(inst).total(), kfr::testing::naive_optimal_cost(inst)) << "K=3 seed " << seed;
    }
}

TEST(DpOracle, ScheduleCostIsConsistent) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto inst = kfr::generate(kfr::suite_spec(seed));
        auto s = kfr::dp_optimal(inst);
        EXPECT_EQ(kfr::total_cost(inst, s), s.total());
        EXPECT_GE(s.total(), 0);
    }
}

TEST(EnumerationOracle, AgreesWithDpOnTinyInstances) {
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 200 && checked < 60; ++seed) {
        auto inst = kfr::generate(kfr::suite_spec(seed, 3, 3, 2, 0, 6));
        if (!kfr::enumeration_within_budget(inst, 200'000)) continue;
        ++checked;
        EXPECT_EQ(kfr::enumerate_optimal(inst).total(), kfr::dp_optimal(inst).total()) << "seed " << seed;
    }
    EXPECT_GE(checked, 30u);
}

TEST(Oracles, BudgetExceeded) {
    auto inst = make({0, 1, 2}, {{3, 4, 5, 6, 7}, {8, 9, 10, 11, 12}});
    EXPECT_THROW(kfr::dp_optimal(inst, 100), kfr::BudgetExceeded);
    EXPECT_THROW(kfr::enumerate_optimal(inst, 1000), kfr::BudgetExceeded);
    EXPECT_FALSE(kfr::enumeration_within_budget(inst, 1000));
    try {
        kfr::dp_optimal(inst, 100);
    } catch (const kfr::BudgetExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("KFR_ORACLE_BUDGET"), std::string::npos);
    }
}

TEST(Oracles, BudgetFromEnvironment) {
    ::setenv("KFR_ORACLE_BUDGET", "1234", 1);
    EXPECT_EQ(kfr::oracle_budget_from_env(), 1234u);
    ::setenv("KFR_ORACLE_BUDGET", "junk", 1);
    EXPECT_EQ(kfr::oracle_budget_from_env(), kfr::default_oracle_budget);
    ::unsetenv("KFR_ORACLE_BUDGET");
    EXPECT_EQ(kfr::oracle_budget_from_env(), kfr::default_oracle_budget);
}

TEST(DpOracle, SortedConfigurations) {
    auto c = kfr::detail::sorted_configurations(3, 2);
    ASSERT_EQ(c.size(), 6u);
    EXPECT_EQ(c.front(), (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(c[1], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(c.back(), (std::vector<std::size_t>{2, 2}));
}

TEST(DpOracle, TiesResolveDeterministically) {
    // staying at 0 or moving to 2 both cost 2 for a single agent at 2 with one stage
    auto inst = make({0}, {{2}});
    auto a = kfr::dp_optimal(inst);
    auto b = kfr::dp_optimal(inst);
    EXPECT_EQ(a.positions, b.positions);
    EXPECT_EQ(a.positions[0], ints({0}));
}

TEST(DpOracle, FractionalCoordinates) {
    auto inst = kfr::parse_instance(R"({"x0":["1/3","7/2"],"stages":[["1/2","5/3"],["3"],["1/7","22/7"]]})");
    EXPECT_EQ(kfr::dp_optimal(inst).total(), kfr::testing::naive_optimal_cost(inst));
    EXPECT_EQ(kfr::enumerate_optimal(inst).total(), kfr::testing::naive_optimal_cost(inst));
}
