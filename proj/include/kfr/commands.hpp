#pragma once

// Solve / online / verify / compare workflows behind the command-line tool.
// Each returns JSON documents; the tool only parses flags and writes files.

#include "kfr/analysis.hpp"
#include "kfr/generators.hpp"
#include "kfr/instance.hpp"
#include "kfr/lp.hpp"
#include "kfr/online2.hpp"
#include "kfr/oracle.hpp"
#include "kfr/path.hpp"
#include "kfr/rounding.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kfr {

/// FNV-1a 64-bit over the canonical instance JSON, as 16 hex digits.
inline std::string instance_digest(const Instance& instance) {
    std::string text = instance_to_json(instance).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline nlohmann::json stage_breakdown_json(const Schedule& s) {
    auto out = nlohmann::json::array();
    for (std::size_t t = 0; t < s.positions.size(); ++t)
        out.push_back({{"stage", t + 1},
                       {"moving", to_exact_string(s.per_stage_moving[t])},
                       {"connection", to_exact_string(s.per_stage_connection[t])}});
    return out;
}

inline nlohmann::json run_report_json(const Instance& instance, const std::string& method, const Schedule& schedule,
                                      std::optional<double> wall_ms) {
    nlohmann::json r{{"instance_digest", instance_digest(instance)},
                     {"method", method},
                     {"K", instance.facility_count()},
                     {"T", instance.stage_count()},
                     {"total", exact_value_json(schedule.total())},
                     {"moving", to_exact_string(schedule.moving_cost())},
                     {"connection", to_exact_string(schedule.connection_cost())},
                     {"stages", stage_breakdown_json(schedule)}};
    if (wall_ms) r["wall_ms"] = *wall_ms;
    return r;
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------
// solve

enum class SolveMethod { Lp, Dp, Enumerate };

inline SolveMethod parse_solve_method(const std::string& name) {
    if (name == "lp") return SolveMethod::Lp;
    if (name == "dp") return SolveMethod::Dp;
    if (name == "enum") return SolveMethod::Enumerate;
    throw std::invalid_argument("unknown method '" + name + "' (lp | dp | enum)");
}

struct SolveOptions {
    SolveMethod method = SolveMethod::Lp;
    RoundingRule rounding = RoundingRule::Prefix;
    std::uint64_t budget = default_oracle_budget;
    bool timing = false;
};

struct SolveOutcome {
    Schedule schedule;
    nlohmann::json report;
    std::optional<RoundingTrace> rounding;
    std::optional<Rational> lp_objective;
};

/// The LP pipeline: path, model, exact relaxation, rounding.
struct LpPipeline {
    PathModel path;
    FractionalSolution fractional;
    std::pair<Schedule, RoundingTrace> prefix;
    std::pair<Schedule, RoundingTrace> leftmost;
};

inline LpPipeline run_lp_pipeline(const Instance& instance) {
    LpPipeline p;
    p.path = build_path(instance);
    LpModel model = build_model(p.path, instance);
    p.fractional = solve_lp(model);
    p.prefix = round_prefix(p.fractional, p.path, instance);
    p.leftmost = round_leftmost(p.fractional, p.path, instance);
    return p;
}

inline SolveOutcome run_solve(const Instance& instance, const SolveOptions& options) {
    Stopwatch clock;
    SolveOutcome out;
    std::string method;
    switch (options.method) {
        case SolveMethod::Lp: {
            PathModel path = build_path(instance);
            LpModel model = build_model(path, instance);
            FractionalSolution frac = solve_lp(model);
            auto rounded = options.rounding == RoundingRule::Prefix ? round_prefix(frac, path, instance)
                                                                    : round_leftmost(frac, path, instance);
            out.schedule = std::move(rounded.first);
            out.rounding = std::move(rounded.second);
            out.lp_objective = frac.objective;
            method = options.rounding == RoundingRule::Prefix ? "lp+round" : "lp+round-leftmost";
            break;
        }
        case SolveMethod::Dp:
            out.schedule = dp_optimal(instance, options.budget);
            method = "dp";
            break;
        case SolveMethod::Enumerate:
            out.schedule = enumerate_optimal(instance, options.budget);
            method = "enum";
            break;
    }
    out.report = run_report_json(instance, method, out.schedule,
                                 options.timing ? std::optional<double>(clock.elapsed_ms()) : std::nullopt);
    if (out.lp_objective) {
        out.report["lp_objective"] = exact_value_json(*out.lp_objective);
        out.report["rounding"] = rounding_trace_to_json(*out.rounding);
    }
    return out;
}

// ---------------------------------------------------------------------------
// online

struct OnlineOutcome {
    OnlineRun run;
    nlohmann::json report;
    std::string trace_jsonl;
    std::string summary_csv;
};

inline OnlineOutcome run_online_command(const Instance& instance, bool timing = false,
                                        MedianRepresentative rep = MedianRepresentative::Lower) {
    Stopwatch clock;
    OnlineOutcome out;
    out.run = run_online(instance, rep);
    out.report = run_report_json(instance, "online", out.run.schedule,
                                 timing ? std::optional<double>(clock.elapsed_ms()) : std::nullopt);
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& tr : out.run.traces)
        branches.push_back({{"stage", tr.stage}, {"step1", to_string(tr.step1)}, {"step2", to_string(tr.step2)}});
    out.report["branches"] = std::move(branches);
    out.report["median_representative"] = to_string(rep);
    out.trace_jsonl = traces_to_jsonl(out.run.traces);
    out.summary_csv = traces_to_csv(out.run.traces);
    return out;
}

// ---------------------------------------------------------------------------
// verify

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"theorem1", "rounding-equiv", "lemma-y", "per-stage", "competitive"};
    return names;
}

/// Parses "a,b,c" (or "all"); throws std::invalid_argument on an unknown name.
inline std::set<std::string> parse_checks(const std::string& text) {
    std::set<std::string> out;
    if (text == "all") {
        out.insert(known_checks().begin(), known_checks().end());
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        bool known = false;
        for (const auto& k : known_checks()) known = known || k == item;
        if (!known) throw std::invalid_argument("unknown check '" + item + "'");
        out.insert(item);
    }
    if (out.empty()) throw std::invalid_argument("no checks requested");
    return out;
}

struct NamedInstance {
    std::string name;
    Instance instance;
};

struct VerifyOutcome {
    nlohmann::json report;
    bool all_pass = true;
};

inline VerifyOutcome run_verify(const std::vector<NamedInstance>& instances, const std::set<std::string>& checks,
                                std::uint64_t budget = default_oracle_budget,
                                MedianRepresentative rep = MedianRepresentative::Lower) {
    VerifyOutcome out;
    const bool need_lp = checks.count("theorem1") || checks.count("rounding-equiv");
    const bool need_online = checks.count("lemma-y") || checks.count("per-stage") || checks.count("competitive");
    nlohmann::json rows = nlohmann::json::array();
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // check -> (passed, evaluated)
    std::optional<Rational> worst_ratio;
    std::string worst_ratio_instance;

    auto record = [&](nlohmann::json& row, const std::string& check, bool pass, nlohmann::json detail) {
        detail["pass"] = pass;
        row["checks"][check] = std::move(detail);
        auto& t = tally[check];
        t.second += 1;
        if (pass) t.first += 1;
        out.all_pass = out.all_pass && pass;
    };

    for (const auto& item : instances) {
        const Instance& inst = item.instance;
        nlohmann::json row{{"name", item.name}, {"digest", instance_digest(inst)},
                           {"K", inst.facility_count()}, {"T", inst.stage_count()}, {"checks", nlohmann::json::object()}};
        Schedule optimal = dp_optimal(inst, budget);
        row["optimal"] = to_exact_string(optimal.total());

        if (need_lp) {
            LpPipeline lp = run_lp_pipeline(inst);
            const Rational& z = lp.fractional.objective;
            Rational prefix_cost = total_cost(inst, lp.prefix.first);
            Rational leftmost_cost = total_cost(inst, lp.leftmost.first);
            if (checks.count("theorem1"))
                record(row, "theorem1", z == prefix_cost && prefix_cost == optimal.total(),
                       {{"lp", to_exact_string(z)},
                        {"rounded", to_exact_string(prefix_cost)},
                        {"dp", to_exact_string(optimal.total())},
                        {"monotone", lp.prefix.second.monotone()}});
            if (checks.count("rounding-equiv"))
                record(row, "rounding-equiv", leftmost_cost == prefix_cost,
                       {{"prefix", to_exact_string(prefix_cost)},
                        {"leftmost", to_exact_string(leftmost_cost)},
                        {"leftmost_monotone", lp.leftmost.second.monotone()}});
        }

        if (need_online) {
            if (inst.facility_count() != 2) {
                row["online"] = "skipped: K != 2";
            } else {
                OnlineRun run = run_online(inst, rep);
                InequalityReport ineq = check_inequalities(inst, run, optimal, rep);
                if (checks.count("lemma-y")) record(row, "lemma-y", ineq.lemma_y.holds(), bound_to_json(ineq.lemma_y));
                if (checks.count("per-stage")) {
                    auto j = inequality_report_to_json(ineq);
                    record(row, "per-stage", ineq.per_stage_holds() && ineq.telescoped.holds() && ineq.telescoped_to_63.holds(),
                           {{"lemma_z1", j["lemma_z1"]},
                            {"lemma_z2", j["lemma_z2"]},
                            {"per_stage_21", j["per_stage_21"]},
                            {"per_stage_21_opposite_sign", j["per_stage_21_opposite_sign"]},
                            {"telescoped", j["telescoped"]},
                            {"telescoped_to_63", j["telescoped_to_63"]}});
                }
                if (checks.count("competitive")) {
                    auto detail = bound_to_json(ineq.competitive);
                    detail["online"] = to_exact_string(ineq.online_cost);
                    detail["ratio"] = ineq.ratio ? nlohmann::json(exact_value_json(*ineq.ratio)) : nlohmann::json(nullptr);
                    record(row, "competitive", ineq.competitive.holds(), std::move(detail));
                }
                if (ineq.ratio && (!worst_ratio || *ineq.ratio > *worst_ratio)) {
                    worst_ratio = *ineq.ratio;
                    worst_ratio_instance = item.name;
                }
            }
        }
        rows.push_back(std::move(row));
    }

    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [check, counts] : tally)
        summary[check] = {{"passed", counts.first}, {"evaluated", counts.second}};
    out.report = {{"instances", std::move(rows)},
                  {"summary", std::move(summary)},
                  {"all_pass", out.all_pass},
                  {"median_representative", to_string(rep)},
                  {"cluster_ties", to_string(ClusterTies::Ordered)}};
    out.report["worst_ratio"] = worst_ratio
                                    ? nlohmann::json{{"value", exact_value_json(*worst_ratio)}, {"instance", worst_ratio_instance}}
                                    : nlohmann::json(nullptr);
    return out;
}

// ---------------------------------------------------------------------------
// compare

inline nlohmann::json run_compare(const Instance& instance, std::uint64_t budget = default_oracle_budget) {
    nlohmann::json out{{"instance_digest", instance_digest(instance)},
                       {"K", instance.facility_count()},
                       {"T", instance.stage_count()}};
    LpPipeline lp = run_lp_pipeline(instance);
    out["lp_objective"] = exact_value_json(lp.fractional.objective);
    out["lp_round_prefix"] = exact_value_json(lp.prefix.first.total());
    out["lp_round_leftmost"] = exact_value_json(lp.leftmost.first.total());
    Schedule opt = dp_optimal(instance, budget);
    out["dp"] = exact_value_json(opt.total());
    if (enumeration_within_budget(instance, budget)) out["enum"] = exact_value_json(enumerate_optimal(instance, budget).total());
    if (instance.facility_count() == 2) {
        OnlineRun run = run_online(instance);
        out["online"] = exact_value_json(run.schedule.total());
        out["ratio"] = sgn(opt.total()) > 0 ? nlohmann::json(exact_value_json(run.schedule.total() / opt.total()))
                                            : nlohmann::json(nullptr);
    }
    return out;
}

}  // namespace kfr
