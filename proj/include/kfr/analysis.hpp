#pragma once

// Mechanical check of the competitive analysis of the two-facility online
// algorithm against an exact offline optimum.
//
// y^t places facility k at the median of the agents the optimum serves from k
// (or where the optimum has it, when that cluster is empty). The potential is
//   Phi_t(x1, x2) = 2 (|x1 - y1^t| + |x2 - y2^t|) + |x1 - x2|.
// Checked bounds, all in exact arithmetic:
//   L-y   sum_t sum_k [H(C*_kt) + |y_k^t - y_k^{t-1}|]            <= 3 Cost(x*)
//   L-z1  sum_k |z_k - x_k^{t-1}|          <= 2 sum_k |dy_k| - Phi_t(z) + Phi_{t-1}(x^{t-1})
//   L-z2  sum_k [H(C_kt) + |x_k^t - z_k|]  <= 21 sum_k H(C*_kt) - Phi_t(x^t) + Phi_t(z)
//   L-21  stage cost                       <= 21 sum_k [H(C*_kt) + |dy_k|] - Phi_t(x^t) + Phi_{t-1}(x^{t-1})
//   T-63  Cost(x)                          <= 63 Cost(x*) + |x1^0 - x2^0|

#include "kfr/instance.hpp"
#include "kfr/online2.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kfr {

struct YSolution {
    std::vector<FacilityPair> y;                       // y[0] = x^0, y[t] for stage t
    std::vector<std::array<Positions, 2>> clusters;    // clusters[t-1][k]: agents the optimum serves from k
};

/// How an agent equidistant from both facilities is assigned.
///   Ordered: to the first facility unless the agent lies strictly right of the
///     second one (only possible when the facilities coincide). Clusters stay
///     left/right of each other, so y_1 <= y_2.
///   FirstFacility: always to the first facility. With coinciding facilities this
///     can put every agent right of them into cluster 1 and give y_1 > y_2.
enum class ClusterTies { Ordered, FirstFacility };

inline const char* to_string(ClusterTies t) { return t == ClusterTies::Ordered ? "ordered" : "first-facility"; }

/// Splits sorted agents by nearest facility (facilities.first <= facilities.second).
inline std::array<Positions, 2> nearest_clusters(const Positions& agents, const FacilityPair& facilities,
                                                 ClusterTies ties = ClusterTies::Ordered) {
    std::array<Positions, 2> out;
    for (const auto& a : agents) {
        Rational d1 = abs_diff(a, facilities.first);
        Rational d2 = abs_diff(a, facilities.second);
        bool first = d1 < d2 || (d1 == d2 && (ties == ClusterTies::FirstFacility || a <= facilities.second));
        out[first ? 0 : 1].push_back(a);
    }
    return out;
}

inline YSolution build_y(const Instance& instance, const Schedule& optimal,
                         MedianRepresentative rep = MedianRepresentative::Lower,
                         ClusterTies ties = ClusterTies::Ordered) {
    if (instance.facility_count() != 2) throw OnlineScopeError();
    if (optimal.positions.size() != instance.stage_count())
        throw std::invalid_argument("build_y: schedule and instance stage counts differ");
    YSolution out;
    out.y.push_back({instance.initial_positions[0], instance.initial_positions[1]});
    for (std::size_t t = 0; t < instance.stage_count(); ++t) {
        FacilityPair opt{optimal.positions[t][0], optimal.positions[t][1]};
        // sorting the pair never raises the moving cost, so it is still optimal
        if (opt.second < opt.first) std::swap(opt.first, opt.second);
        auto clusters = nearest_clusters(instance.stages[t], opt, ties);
        FacilityPair y{clusters[0].empty() ? opt.first : one_median(clusters[0]).interval.pick(rep),
                       clusters[1].empty() ? opt.second : one_median(clusters[1]).interval.pick(rep)};
        out.y.push_back(std::move(y));
        out.clusters.push_back(std::move(clusters));
    }
    return out;
}

inline Rational potential(const FacilityPair& x, const FacilityPair& y) {
    return 2 * (abs_diff(x.first, y.first) + abs_diff(x.second, y.second)) + abs_diff(x.first, x.second);
}

struct BoundCheck {
    Rational lhs;
    Rational rhs;
    bool holds() const { return lhs <= rhs; }
    Rational slack() const { return rhs - lhs; }
};

struct StageChecks {
    std::size_t stage = 0;
    BoundCheck z1;              // L-z1
    BoundCheck z2;              // L-z2
    BoundCheck amortized;       // L-21 with -Phi_t(x^t) + Phi_{t-1}(x^{t-1})
    BoundCheck as_printed;      // L-21 with +Phi_t(x^t) - Phi_{t-1}(x^{t-1}); informational
};

struct InequalityReport {
    Rational online_cost;
    Rational optimal_cost;
    Rational additive;            // |x1^0 - x2^0|
    BoundCheck lemma_y;           // L-y
    std::vector<StageChecks> stages;
    BoundCheck telescoped;        // Cost(x) <= sum_t rhs(L-21)
    BoundCheck telescoped_to_63;  // sum_t rhs(L-21) <= 63 Cost(x*) + Phi_0(x^0)
    BoundCheck competitive;       // T-63
    std::optional<Rational> ratio;  // Cost(x) / Cost(x*) when Cost(x*) > 0

    bool per_stage_holds() const {
        for (const auto& s : stages)
            if (!s.z1.holds() || !s.z2.holds() || !s.amortized.holds()) return false;
        return true;
    }
    bool all_hold() const {
        return lemma_y.holds() && per_stage_holds() && telescoped.holds() && telescoped_to_63.holds() &&
               competitive.holds();
    }
};

class AnalysisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline InequalityReport check_inequalities(const Instance& instance, const OnlineRun& online, const Schedule& optimal,
                                           MedianRepresentative rep = MedianRepresentative::Lower,
                                           ClusterTies ties = ClusterTies::Ordered) {
    if (instance.facility_count() != 2) throw OnlineScopeError();
    const std::size_t T = instance.stage_count();
    if (online.traces.size() != T || online.schedule.positions.size() != T)
        throw AnalysisError("online run is missing stage traces");
    YSolution ys = build_y(instance, optimal, rep, ties);

    InequalityReport report;
    report.online_cost = online.schedule.total();
    report.optimal_cost = optimal.total();
    report.additive = abs_diff(instance.initial_positions[0], instance.initial_positions[1]);

    Rational y_sum = 0;
    Rational rhs_sum = 0;
    const FacilityPair x0{instance.initial_positions[0], instance.initial_positions[1]};
    for (std::size_t t = 1; t <= T; ++t) {
        const StageTrace& tr = online.traces[t - 1];
        const FacilityPair& y_now = ys.y[t];
        const FacilityPair& y_before = ys.y[t - 1];
        const FacilityPair& x_before = t == 1 ? x0 : online.traces[t - 2].x;
        if (!(tr.previous == x_before)) throw AnalysisError("stage trace " + std::to_string(t) + " does not chain");

        Rational opt_h = one_median_cost(ys.clusters[t - 1][0]) + one_median_cost(ys.clusters[t - 1][1]);
        Rational dy = abs_diff(y_now.first, y_before.first) + abs_diff(y_now.second, y_before.second);
        y_sum += opt_h + dy;

        Rational phi_prev = potential(x_before, y_before);
        Rational phi_z = potential(tr.z, y_now);
        Rational phi_x = potential(tr.x, y_now);

        StageChecks sc;
        sc.stage = t;
        sc.z1 = {abs_diff(tr.z.first, x_before.first) + abs_diff(tr.z.second, x_before.second),
                 2 * dy - phi_z + phi_prev};
        auto online_clusters = nearest_clusters(tr.agents, tr.x);
        sc.z2 = {one_median_cost(online_clusters[0]) + one_median_cost(online_clusters[1]) +
                     abs_diff(tr.x.first, tr.z.first) + abs_diff(tr.x.second, tr.z.second),
                 21 * opt_h - phi_x + phi_z};
        Rational stage_cost = online.schedule.per_stage_moving[t - 1] + online.schedule.per_stage_connection[t - 1];
        sc.amortized = {stage_cost, 21 * (opt_h + dy) - phi_x + phi_prev};
        sc.as_printed = {stage_cost, 21 * (opt_h + dy) + phi_x - phi_prev};
        rhs_sum += sc.amortized.rhs;
        report.stages.push_back(std::move(sc));
    }
    report.lemma_y = {y_sum, 3 * report.optimal_cost};
    report.telescoped = {report.online_cost, rhs_sum};
    report.telescoped_to_63 = {rhs_sum, 63 * report.optimal_cost + potential(x0, ys.y[0])};
    report.competitive = {report.online_cost, 63 * report.optimal_cost + report.additive};
    if (sgn(report.optimal_cost) > 0) report.ratio = report.online_cost / report.optimal_cost;
    return report;
}

inline nlohmann::json bound_to_json(const BoundCheck& b) {
    return {{"pass", b.holds()},
            {"lhs", to_exact_string(b.lhs)},
            {"rhs", to_exact_string(b.rhs)},
            {"slack", to_exact_string(b.slack())},
            {"slack_float", to_double(b.slack())}};
}

inline nlohmann::json inequality_report_to_json(const InequalityReport& r) {
    nlohmann::json z1 = nlohmann::json::array(), z2 = nlohmann::json::array(), l21 = nlohmann::json::array(),
                   printed = nlohmann::json::array();
    for (const auto& s : r.stages) {
        auto with_stage = [&](const BoundCheck& b) {
            auto j = bound_to_json(b);
            j["stage"] = s.stage;
            return j;
        };
        z1.push_back(with_stage(s.z1));
        z2.push_back(with_stage(s.z2));
        l21.push_back(with_stage(s.amortized));
        printed.push_back(with_stage(s.as_printed));
    }
    return {{"online_cost", exact_value_json(r.online_cost)},
            {"optimal_cost", exact_value_json(r.optimal_cost)},
            {"additive", to_exact_string(r.additive)},
            {"lemma_y", bound_to_json(r.lemma_y)},
            {"lemma_z1", std::move(z1)},
            {"lemma_z2", std::move(z2)},
            {"per_stage_21", std::move(l21)},
            {"per_stage_21_opposite_sign", std::move(printed)},
            {"telescoped", bound_to_json(r.telescoped)},
            {"telescoped_to_63", bound_to_json(r.telescoped_to_63)},
            {"competitive_63", bound_to_json(r.competitive)},
            {"ratio", r.ratio ? nlohmann::json(exact_value_json(*r.ratio)) : nlohmann::json(nullptr)},
            {"all_pass", r.all_hold()}};
}

}  // namespace kfr
