#include "kfr/generators.hpp"

#include <gtest/gtest.h>

#include <random>

using kfr::GenModel;
using kfr::GenSpec;
using kfr::Rational;

TEST(SeededRandom, MatchesReferenceEngine) {
    // the raw stream is the standard MT19937-64 sequence
    kfr::SeededRandom r(5489);
    std::mt19937_64 ref;
    for (int i = 0; i < 100; ++i) EXPECT_EQ(r.next(), ref());
    std::mt19937_64 tenk;
    tenk.discard(9999);
    EXPECT_EQ(tenk(), 9981545732273789042ULL);
}

TEST(SeededRandom, BoundedDrawsStayInRange) {
    kfr::SeededRandom r(1);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        auto v = r.between(-3, 3);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 3);
        ++seen[static_cast<std::size_t>(v + 3)];
    }
    for (int c : seen) EXPECT_GT(c, 800);
    EXPECT_EQ(r.between(4, 4), 4);
}

TEST(Generate, UniformWithinRange) {
    GenSpec spec;
    spec.agents = 3;
    spec.stages = 2;
    spec.facilities = 2;
    auto inst = kfr::generate(spec);
    EXPECT_EQ(inst.facility_count(), 2u);
    EXPECT_EQ(inst.stage_count(), 2u);
    for (const auto& s : inst.stages) {
        EXPECT_EQ(s.size(), 3u);
        for (const auto& a : s) {
            EXPECT_GE(a, 0);
            EXPECT_LE(a, 20);
        }
    }
}

TEST(Generate, SameSeedSameInstance) {
    for (auto model : {GenModel::Uniform, GenModel::RandomWalk, GenModel::Clustered, GenModel::AlternatingAdversary}) {
        GenSpec spec;
        spec.model = model;
        spec.agents = 4;
        spec.stages = 5;
        spec.seed = 77;
        EXPECT_EQ(kfr::generate(spec), kfr::generate(spec));
        EXPECT_EQ(kfr::instance_to_json(kfr::generate(spec)).dump(), kfr::instance_to_json(kfr::generate(spec)).dump());
    }
    GenSpec a, b;
    b.seed = 2;
    EXPECT_NE(kfr::generate(a), kfr::generate(b));
}

TEST(Generate, AlternatingAdversary) {
    GenSpec spec;
    spec.model = GenModel::AlternatingAdversary;
    spec.agents = 3;
    spec.stages = 5;
    spec.lo = 0;
    spec.hi = 50;
    auto inst = kfr::generate(spec);
    for (std::size_t t = 0; t < inst.stage_count(); ++t)
        for (const auto& a : inst.stages[t]) EXPECT_EQ(a, (t % 2 == 0) ? 0 : 50) << "stage " << t + 1;
}

TEST(Generate, RandomWalkAndClusteredStayInRange) {
    for (auto model : {GenModel::RandomWalk, GenModel::Clustered}) {
        GenSpec spec;
        spec.model = model;
        spec.agents = 5;
        spec.stages = 20;
        spec.spread = 6;
        spec.denominator = 4;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            spec.seed = seed;
            auto inst = kfr::generate(spec);
            for (const auto& s : inst.stages)
                for (const auto& a : s) {
                    EXPECT_GE(a, 0);
                    EXPECT_LE(a, 20);
                    EXPECT_EQ(Rational(a * 4).get_den(), 1);
                }
        }
    }
}

TEST(Generate, RandomWalkStepsAreBounded) {
    GenSpec spec;
    spec.model = GenModel::RandomWalk;
    spec.agents = 1;
    spec.stages = 30;
    spec.spread = 2;
    auto inst = kfr::generate(spec);
    for (std::size_t t = 1; t < inst.stage_count(); ++t) EXPECT_LE(kfr::abs_diff(inst.stages[t][0], inst.stages[t - 1][0]), 2);
}

TEST(GenSpecJson, RoundTripAndValidation) {
    GenSpec spec;
    spec.model = GenModel::Clustered;
    spec.agents = 4;
    spec.seed = 99;
    EXPECT_EQ(kfr::gen_spec_from_json(kfr::gen_spec_to_json(spec)), spec);
    EXPECT_THROW(kfr::gen_spec_from_json(nlohmann::json{{"model", "zigzag"}}), kfr::GenSpecError);
    EXPECT_THROW(kfr::gen_spec_from_json(nlohmann::json{{"agents", 0}}), kfr::GenSpecError);
    EXPECT_THROW(kfr::gen_spec_from_json(nlohmann::json{{"lo", 5}, {"hi", 1}}), kfr::GenSpecError);
    EXPECT_THROW(kfr::gen_spec_from_json(nlohmann::json{{"agents", "three"}}), kfr::GenSpecError);
}

TEST(SuiteSpec, SizesWithinLimits) {
    std::array<int, 4> models{};
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto spec = kfr::suite_spec(seed);
        EXPECT_GE(spec.agents, 1);
        EXPECT_LE(spec.agents, 5);
        EXPECT_LE(spec.stages, 4);
        EXPECT_LE(spec.facilities, 3);
        ++models[static_cast<std::size_t>(spec.model)];
        EXPECT_EQ(kfr::suite_spec(seed), spec);
    }
    for (int m : models) EXPECT_EQ(m, 50);
}
