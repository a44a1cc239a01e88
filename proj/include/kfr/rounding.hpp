#pragma once

// Rounding an optimal fractional solution to an integral schedule.
//
// Prefix rule: facility m (1-based) goes to the first node j whose cumulative
// capacity sum_{l<=j} c[l,t] exceeds m-1.
// Leftmost rule: facility m goes to the leftmost node where its own mass f[m,j,t] > 0.

#include "kfr/instance.hpp"
#include "kfr/lp.hpp"
#include "kfr/path.hpp"

#include <json.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kfr {

enum class RoundingRule { Prefix, Leftmost };

inline const char* to_string(RoundingRule rule) { return rule == RoundingRule::Prefix ? "prefix" : "leftmost-positive"; }

class RoundingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RoundingDecision {
    std::size_t node;   // 0-based
    Rational prefix;    // sum_{l<=node} c[l,t]
};

struct RoundingTrace {
    RoundingRule rule = RoundingRule::Prefix;
    std::vector<std::vector<RoundingDecision>> decisions;  // [t][m]

    bool monotone() const {
        for (const auto& stage : decisions)
            for (std::size_t m = 1; m < stage.size(); ++m)
                if (stage[m].node < stage[m - 1].node) return false;
        return true;
    }
};

/// Nodes chosen by the prefix rule for one stage's capacity profile.
inline std::vector<std::size_t> prefix_nodes(std::span<const Rational> capacity, std::size_t facilities) {
    Rational total = 0;
    for (const auto& c : capacity) total += c;
    if (total < static_cast<long>(facilities))
        throw RoundingError("capacity deficit: total mass " + to_exact_string(total) + " < K=" +
                            std::to_string(facilities));
    std::vector<std::size_t> out;
    out.reserve(facilities);
    Rational prefix = 0;
    std::size_t j = 0;
    prefix += capacity[0];
    for (std::size_t m = 0; m < facilities; ++m) {
        // first j with prefix_j > m (m is 0-based, so the threshold m-1 in 1-based terms)
        while (!(prefix > static_cast<long>(m))) {
            ++j;
            prefix += capacity[j];
        }
        out.push_back(j);
    }
    return out;
}

/// Leftmost node with positive mass; throws when the facility carries no mass.
inline std::size_t leftmost_node(std::span<const Rational> mass) {
    for (std::size_t j = 0; j < mass.size(); ++j)
        if (sgn(mass[j]) > 0) return j;
    throw RoundingError("facility has zero total mass");
}

namespace detail {

inline std::pair<Schedule, RoundingTrace> finish_rounding(const FractionalSolution& frac, const PathModel& path,
                                                          const Instance& instance, RoundingRule rule,
                                                          std::vector<std::vector<std::size_t>> chosen) {
    RoundingTrace trace;
    trace.rule = rule;
    std::vector<Positions> positions;
    positions.reserve(chosen.size());
    for (std::size_t t = 0; t < chosen.size(); ++t) {
        std::vector<Rational> prefix(path.size());
        Rational running = 0;
        for (std::size_t j = 0; j < path.size(); ++j) {
            running += frac.capacity[t][j];
            prefix[j] = running;
        }
        Positions stage;
        std::vector<RoundingDecision> decisions;
        for (std::size_t node : chosen[t]) {
            stage.push_back(path.nodes[node]);
            decisions.push_back({node, prefix[node]});
        }
        positions.push_back(std::move(stage));
        trace.decisions.push_back(std::move(decisions));
    }
    return {evaluate_schedule(instance, std::move(positions)), std::move(trace)};
}

}  // namespace detail

inline std::pair<Schedule, RoundingTrace> round_prefix(const FractionalSolution& frac, const PathModel& path,
                                                       const Instance& instance) {
    std::vector<std::vector<std::size_t>> chosen;
    for (std::size_t t = 0; t < frac.capacity.size(); ++t) {
        try {
            chosen.push_back(prefix_nodes(frac.capacity[t], instance.facility_count()));
        } catch (const RoundingError& e) {
            throw RoundingError("stage " + std::to_string(t + 1) + ": " + e.what());
        }
    }
    return detail::finish_rounding(frac, path, instance, RoundingRule::Prefix, std::move(chosen));
}

inline std::pair<Schedule, RoundingTrace> round_leftmost(const FractionalSolution& frac, const PathModel& path,
                                                         const Instance& instance) {
    std::vector<std::vector<std::size_t>> chosen;
    for (std::size_t t = 0; t < frac.mass.size(); ++t) {
        std::vector<std::size_t> stage;
        for (std::size_t k = 0; k < frac.mass[t].size(); ++k) {
            try {
                stage.push_back(leftmost_node(frac.mass[t][k]));
            } catch (const RoundingError& e) {
                throw RoundingError("stage " + std::to_string(t + 1) + ", facility " + std::to_string(k + 1) + ": " +
                                    e.what());
            }
        }
        chosen.push_back(std::move(stage));
    }
    return detail::finish_rounding(frac, path, instance, RoundingRule::Leftmost, std::move(chosen));
}

/// Node indices are written 1-based.
inline nlohmann::json rounding_trace_to_json(const RoundingTrace& trace) {
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t t = 0; t < trace.decisions.size(); ++t) {
        nlohmann::json facilities = nlohmann::json::array();
        for (std::size_t m = 0; m < trace.decisions[t].size(); ++m)
            facilities.push_back({{"facility", m + 1},
                                  {"node", trace.decisions[t][m].node + 1},
                                  {"prefix", to_exact_string(trace.decisions[t][m].prefix)}});
        stages.push_back({{"stage", t + 1}, {"facilities", std::move(facilities)}});
    }
    return {{"rule", to_string(trace.rule)}, {"monotone", trace.monotone()}, {"stages", std::move(stages)}};
}

}  // namespace kfr
