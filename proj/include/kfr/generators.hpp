#pragma once

// Seeded instance generators.
//
// Randomness comes from std::mt19937_64 (MT19937-64, whose output sequence is
// fixed by the C++ standard). Bounded integers use rejection sampling: draw u,
// reject u >= 2^64 - (2^64 mod r), return lo + u mod r. No std:: distribution
// is used, so a seed yields the same instance with any standard library or in
// any language with an MT19937-64 implementation.

#include "kfr/instance.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kfr {

enum class GenModel { Uniform, RandomWalk, Clustered, AlternatingAdversary };

inline const char* to_string(GenModel m) {
    switch (m) {
        case GenModel::Uniform: return "uniform";
        case GenModel::RandomWalk: return "random-walk";
        case GenModel::Clustered: return "clustered";
        case GenModel::AlternatingAdversary: return "alternating-adversary";
    }
    return "?";
}

class GenSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline GenModel parse_gen_model(const std::string& name) {
    if (name == "uniform") return GenModel::Uniform;
    if (name == "random-walk") return GenModel::RandomWalk;
    if (name == "clustered") return GenModel::Clustered;
    if (name == "alternating-adversary") return GenModel::AlternatingAdversary;
    throw GenSpecError("unknown model '" + name + "' (uniform | random-walk | clustered | alternating-adversary)");
}

struct GenSpec {
    GenModel model = GenModel::Uniform;
    std::int64_t agents = 3;
    std::int64_t stages = 3;
    std::int64_t facilities = 2;
    std::int64_t lo = 0;
    std::int64_t hi = 20;
    std::int64_t spread = 2;       // random-walk step / cluster radius
    std::int64_t denominator = 1;  // coordinates are multiples of 1/denominator
    std::uint64_t seed = 1;

    friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

inline void validate(const GenSpec& spec) {
    if (spec.agents < 1) throw GenSpecError("agents must be >= 1");
    if (spec.stages < 1) throw GenSpecError("stages must be >= 1");
    if (spec.facilities < 1) throw GenSpecError("facilities must be >= 1");
    if (spec.lo > spec.hi) throw GenSpecError("empty coordinate range: lo > hi");
    if (spec.spread < 0) throw GenSpecError("spread must be >= 0");
    if (spec.denominator < 1) throw GenSpecError("denominator must be >= 1");
    constexpr std::int64_t limit = std::int64_t{1} << 40;
    if (spec.lo < -limit || spec.hi > limit || spec.denominator > limit / 1024 || spec.spread > limit)
        throw GenSpecError("coordinate range too large");
}

class SeededRandom {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit span
        const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - range) % range;  // 2^64 - (2^64 mod r)
        std::uint64_t u;
        do {
            u = next();
        } while (limit != 0 && u >= limit);
        return lo + static_cast<std::int64_t>(u % range);
    }

private:
    std::mt19937_64 engine_;
};

inline Instance generate(const GenSpec& spec) {
    validate(spec);
    SeededRandom rng(spec.seed);
    const std::int64_t d = spec.denominator;
    const std::int64_t lo = spec.lo * d;
    const std::int64_t hi = spec.hi * d;
    const std::int64_t step = spec.spread * d;
    auto clamp = [&](std::int64_t v) { return v < lo ? lo : (v > hi ? hi : v); };
    auto coordinate = [&](std::int64_t scaled) {
        Rational r(mpz_class(static_cast<long>(scaled)), mpz_class(static_cast<long>(d)));
        r.canonicalize();
        return r;
    };

    Positions x0;
    for (std::int64_t k = 0; k < spec.facilities; ++k) x0.push_back(coordinate(rng.between(lo, hi)));

    std::vector<Positions> stages;
    std::vector<std::int64_t> walkers;
    std::vector<std::int64_t> centers;
    for (std::int64_t t = 0; t < spec.stages; ++t) {
        Positions stage;
        switch (spec.model) {
            case GenModel::Uniform:
                for (std::int64_t i = 0; i < spec.agents; ++i) stage.push_back(coordinate(rng.between(lo, hi)));
                break;
            case GenModel::RandomWalk:
                if (t == 0) {
                    for (std::int64_t i = 0; i < spec.agents; ++i) walkers.push_back(rng.between(lo, hi));
                } else {
                    for (auto& w : walkers) w = clamp(w + rng.between(-step, step));
                }
                for (auto w : walkers) stage.push_back(coordinate(w));
                break;
            case GenModel::Clustered:
                if (t == 0) {
                    for (std::int64_t k = 0; k < spec.facilities; ++k) centers.push_back(rng.between(lo, hi));
                } else {
                    for (auto& c : centers) c = clamp(c + rng.between(-step, step));
                }
                for (std::int64_t i = 0; i < spec.agents; ++i) {
                    std::int64_t c = centers[static_cast<std::size_t>(rng.between(0, spec.facilities - 1))];
                    stage.push_back(coordinate(clamp(c + rng.between(-step, step))));
                }
                break;
            case GenModel::AlternatingAdversary:
                stage.assign(static_cast<std::size_t>(spec.agents), coordinate(t % 2 == 0 ? lo : hi));
                break;
        }
        stages.push_back(std::move(stage));
    }
    return make_instance(std::move(x0), std::move(stages));
}

inline nlohmann::json gen_spec_to_json(const GenSpec& spec) {
    return {{"model", to_string(spec.model)}, {"agents", spec.agents}, {"stages", spec.stages},
            {"facilities", spec.facilities},  {"lo", spec.lo},         {"hi", spec.hi},
            {"spread", spec.spread},          {"denominator", spec.denominator}, {"seed", spec.seed}};
}

inline GenSpec gen_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw GenSpecError("GenSpec must be a JSON object");
    GenSpec spec;
    try {
        if (j.contains("model")) spec.model = parse_gen_model(j.at("model").get<std::string>());
        if (j.contains("agents")) spec.agents = j.at("agents").get<std::int64_t>();
        if (j.contains("stages")) spec.stages = j.at("stages").get<std::int64_t>();
        if (j.contains("facilities")) spec.facilities = j.at("facilities").get<std::int64_t>();
        if (j.contains("lo")) spec.lo = j.at("lo").get<std::int64_t>();
        if (j.contains("hi")) spec.hi = j.at("hi").get<std::int64_t>();
        if (j.contains("spread")) spec.spread = j.at("spread").get<std::int64_t>();
        if (j.contains("denominator")) spec.denominator = j.at("denominator").get<std::int64_t>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw GenSpecError(std::string("malformed GenSpec: ") + e.what());
    }
    validate(spec);
    return spec;
}

/// Spec for member `seed` of the randomized verification suite: sizes drawn
/// uniformly from [1, max_*], model cycling by seed, integer coordinates in [lo, hi].
inline GenSpec suite_spec(std::uint64_t seed, std::int64_t max_agents = 5, std::int64_t max_stages = 4,
                          std::int64_t max_facilities = 3, std::int64_t lo = 0, std::int64_t hi = 20) {
    SeededRandom rng(seed ^ 0x9E3779B97F4A7C15ULL);
    GenSpec spec;
    static constexpr GenModel models[] = {GenModel::Uniform, GenModel::RandomWalk, GenModel::Clustered,
                                          GenModel::AlternatingAdversary};
    spec.model = models[seed % 4];
    spec.agents = rng.between(1, max_agents);
    spec.stages = rng.between(1, max_stages);
    spec.facilities = rng.between(1, max_facilities);
    spec.lo = lo;
    spec.hi = hi;
    spec.spread = rng.between(1, 4);
    spec.seed = seed;
    return spec;
}

}  // namespace kfr
