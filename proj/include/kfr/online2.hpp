#pragma once

// Online two-facility reallocation.
//
// Each stage: Step 1 moves facilities that lie entirely on one side of the
// agents (or straddle them) toward the agent interval; Step 2 either serves
// every agent from the one-median while pulling the outside facility in by
// 3*H(C_t), or splits the agents into the best contiguous pair of clusters.

#include "kfr/instance.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kfr {

/// Which point of an even-size median interval represents it.
enum class MedianRepresentative { Lower, Upper };

inline const char* to_string(MedianRepresentative rep) { return rep == MedianRepresentative::Lower ? "lower" : "upper"; }

struct MedianInterval {
    Rational low;
    Rational high;
    Rational pick(MedianRepresentative rep) const { return rep == MedianRepresentative::Lower ? low : high; }
};

struct OneMedian {
    MedianInterval interval;
    Rational cost;  // H(C)
};

/// Median interval of a sorted, nonempty multiset and its one-facility connection cost.
inline OneMedian one_median(std::span<const Rational> sorted) {
    if (sorted.empty()) throw std::invalid_argument("one_median: empty multiset (H of the empty set is 0 by convention)");
    const std::size_t n = sorted.size();
    MedianInterval interval{sorted[(n - 1) / 2], sorted[n / 2]};
    Rational cost = 0;
    for (const auto& a : sorted) cost += abs_diff(a, interval.low);
    return {std::move(interval), std::move(cost)};
}

/// H(C) with H(empty) = 0.
inline Rational one_median_cost(std::span<const Rational> sorted) {
    return sorted.empty() ? Rational(0) : one_median(sorted).cost;
}

struct Partition {
    Positions left;   // O1, a prefix of the sorted agents
    Positions right;  // O2, the remaining suffix
    Rational cost;    // H(O1) + H(O2)
};

/// Best split of a sorted multiset into a prefix and a suffix. Ties prefer both parts
/// nonempty, then the shortest prefix.
inline Partition best_partition(std::span<const Rational> sorted) {
    const std::size_t n = sorted.size();
    if (n == 0) return {};
    std::vector<Rational> prefix(n + 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];
    // H of sorted[a, b) via prefix sums around its lower median.
    auto range_cost = [&](std::size_t a, std::size_t b) -> Rational {
        if (a >= b) return 0;
        std::size_t m = a + (b - a - 1) / 2;
        const Rational& med = sorted[m];
        Rational below = med * static_cast<long>(m - a) - (prefix[m] - prefix[a]);
        Rational above = (prefix[b] - prefix[m + 1]) - med * static_cast<long>(b - m - 1);
        return below + above;
    };
    std::size_t best = n + 1;
    Rational best_cost;
    auto consider = [&](std::size_t s) {
        Rational c = range_cost(0, s) + range_cost(s, n);
        if (best == n + 1 || c < best_cost) {
            best = s;
            best_cost = std::move(c);
        }
    };
    for (std::size_t s = 1; s < n; ++s) consider(s);
    consider(0);
    consider(n);
    Partition out;
    out.left.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(best));
    out.right.assign(sorted.begin() + static_cast<std::ptrdiff_t>(best), sorted.end());
    out.cost = std::move(best_cost);
    return out;
}

enum class Step1Case { None, LeftOfAgents, RightOfAgents, Straddle };
enum class Step2Branch { MedianLeft, MedianRight, Partition };

inline const char* to_string(Step1Case c) {
    switch (c) {
        case Step1Case::None: return "none";
        case Step1Case::LeftOfAgents: return "left-of-agents";
        case Step1Case::RightOfAgents: return "right-of-agents";
        case Step1Case::Straddle: return "straddle";
    }
    return "?";
}

inline const char* to_string(Step2Branch b) {
    switch (b) {
        case Step2Branch::MedianLeft: return "median-left";
        case Step2Branch::MedianRight: return "median-right";
        case Step2Branch::Partition: return "partition";
    }
    return "?";
}

struct FacilityPair {
    Rational first;
    Rational second;
    friend bool operator==(const FacilityPair&, const FacilityPair&) = default;
};

struct StageTrace {
    std::size_t stage = 0;  // 1-based
    Positions agents;
    FacilityPair previous;  // x^{t-1}
    FacilityPair z;         // after Step 1
    Step1Case step1 = Step1Case::None;
    Step2Branch step2 = Step2Branch::Partition;
    Rational h;             // H(C_t)
    MedianInterval median;  // M_{C_t}
    std::optional<Partition> partition;
    FacilityPair x;         // x^t
    Rational step1_moving;
    Rational step2_moving;
    Rational connection;

    Rational moving() const { return step1_moving + step2_moving; }
};

struct OnlineState {
    FacilityPair x;
    std::size_t stage = 0;
    Rational moving = 0;
    Rational connection = 0;
    MedianRepresentative representative = MedianRepresentative::Lower;
};

class OnlineScopeError : public std::invalid_argument {
public:
    OnlineScopeError() : std::invalid_argument("online algorithm defined for K=2 only") {}
};

inline OnlineState initial_online_state(const Instance& instance,
                                        MedianRepresentative rep = MedianRepresentative::Lower) {
    if (instance.facility_count() != 2) throw OnlineScopeError();
    OnlineState s;
    s.x = {instance.initial_positions[0], instance.initial_positions[1]};
    s.representative = rep;
    return s;
}

/// One stage of the online algorithm. `agents` must be sorted and nonempty.
inline std::pair<OnlineState, StageTrace> online_step(const OnlineState& state, std::span<const Rational> agents) {
    if (agents.empty()) throw std::invalid_argument("online_step: empty stage");
    const Rational& a1 = agents.front();
    const Rational& an = agents.back();

    StageTrace tr;
    tr.stage = state.stage + 1;
    tr.agents.assign(agents.begin(), agents.end());
    tr.previous = state.x;

    Rational z1 = state.x.first;
    Rational z2 = state.x.second;
    if (z1 > an) {
        z1 = an;
        tr.step1 = Step1Case::RightOfAgents;
    }
    if (z2 < a1) {
        z2 = a1;
        tr.step1 = Step1Case::LeftOfAgents;
    }
    if (z1 < a1 && z2 > an) {
        Rational shift = a1 - z1;
        if (z2 - an < shift) shift = z2 - an;
        z1 += shift;
        z2 -= shift;
        tr.step1 = Step1Case::Straddle;
    }
    tr.z = {z1, z2};

    OneMedian med = one_median(agents);
    tr.h = med.cost;
    tr.median = med.interval;
    const Rational three_h = 3 * med.cost;
    const Rational rep = med.interval.pick(state.representative);

    Rational x1, x2;
    if (a1 <= z1 && z1 <= an && z2 - an >= three_h) {
        tr.step2 = Step2Branch::MedianLeft;
        x1 = rep;
        x2 = z2 - three_h;
    } else if (a1 <= z2 && z2 <= an && a1 - z1 >= three_h) {
        tr.step2 = Step2Branch::MedianRight;
        x1 = z1 + three_h;
        x2 = rep;
    } else {
        tr.step2 = Step2Branch::Partition;
        Partition p = best_partition(agents);
        x1 = p.left.empty() ? z1 : one_median(p.left).interval.pick(state.representative);
        x2 = p.right.empty() ? z2 : one_median(p.right).interval.pick(state.representative);
        tr.partition = std::move(p);
    }
    tr.x = {x1, x2};
    tr.step1_moving = abs_diff(z1, state.x.first) + abs_diff(z2, state.x.second);
    tr.step2_moving = abs_diff(x1, z1) + abs_diff(x2, z2);
    tr.connection = connection_at(tr.agents, Positions{x1, x2});

    OnlineState next = state;
    next.x = tr.x;
    next.stage = tr.stage;
    next.moving += tr.moving();
    next.connection += tr.connection;
    return {std::move(next), std::move(tr)};
}

struct OnlineRun {
    Schedule schedule;
    std::vector<StageTrace> traces;
};

inline OnlineRun run_online(const Instance& instance, MedianRepresentative rep = MedianRepresentative::Lower) {
    OnlineState state = initial_online_state(instance, rep);
    OnlineRun run;
    std::vector<Positions> positions;
    for (const auto& stage : instance.stages) {
        auto [next, trace] = online_step(state, stage);
        positions.push_back({trace.x.first, trace.x.second});
        run.traces.push_back(std::move(trace));
        state = std::move(next);
    }
    run.schedule = evaluate_schedule(instance, std::move(positions));
    return run;
}

inline nlohmann::json stage_trace_to_json(const StageTrace& tr) {
    auto pair = [](const FacilityPair& p) { return nlohmann::json::array({to_exact_string(p.first), to_exact_string(p.second)}); };
    auto list = [](const Positions& ps) {
        auto out = nlohmann::json::array();
        for (const auto& p : ps) out.push_back(to_exact_string(p));
        return out;
    };
    nlohmann::json j{{"stage", tr.stage},
                     {"agents", list(tr.agents)},
                     {"previous", pair(tr.previous)},
                     {"z", pair(tr.z)},
                     {"step1", to_string(tr.step1)},
                     {"step2", to_string(tr.step2)},
                     {"H", to_exact_string(tr.h)},
                     {"median", nlohmann::json::array({to_exact_string(tr.median.low), to_exact_string(tr.median.high)})},
                     {"x", pair(tr.x)},
                     {"moving", to_exact_string(tr.moving())},
                     {"connection", to_exact_string(tr.connection)}};
    if (tr.partition)
        j["partition"] = {{"O1", list(tr.partition->left)}, {"O2", list(tr.partition->right)},
                          {"cost", to_exact_string(tr.partition->cost)}};
    else
        j["partition"] = nullptr;
    return j;
}

/// One JSON object per line, in stage order.
inline std::string traces_to_jsonl(const std::vector<StageTrace>& traces) {
    std::string out;
    for (const auto& tr : traces) {
        out += stage_trace_to_json(tr).dump();
        out += '\n';
    }
    return out;
}

inline std::string traces_to_csv(const std::vector<StageTrace>& traces) {
    std::string out = "stage,step1,branch,H,moving,connection\n";
    for (const auto& tr : traces)
        out += std::to_string(tr.stage) + "," + to_string(tr.step1) + "," + to_string(tr.step2) + "," +
               to_exact_string(tr.h) + "," + to_exact_string(tr.moving()) + "," + to_exact_string(tr.connection) + "\n";
    return out;
}

}  // namespace kfr
