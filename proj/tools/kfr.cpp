#include "kfr/commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_operational = 1;
constexpr int exit_claim_failed = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

kfr::Instance load_instance(const std::string& path) {
    std::string text = read_file(path);
    try {
        return kfr::parse_instance(text);
    } catch (const kfr::InstanceError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

// "7" or "1..200"
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    auto number = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("bad seed range '" + text + "'");
        return std::stoull(s);
    };
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        auto v = number(text);
        return {v, v};
    }
    auto lo = number(text.substr(0, dots));
    auto hi = number(text.substr(dots + 2));
    if (lo > hi) throw UsageError("empty seed range '" + text + "'");
    return {lo, hi};
}

kfr::MedianRepresentative parse_representative(const std::string& name) {
    if (name == "lower") return kfr::MedianRepresentative::Lower;
    if (name == "upper") return kfr::MedianRepresentative::Upper;
    throw UsageError("unknown median representative '" + name + "' (lower | upper)");
}

struct GenFlags {
    std::string model = "uniform";
    std::int64_t agents = 3, stages = 3, facilities = 2, lo = 0, hi = 20, spread = 2, denominator = 1;
    std::uint64_t seed = 1;
    std::string spec_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "uniform | random-walk | clustered | alternating-adversary");
        cmd->add_option("--agents", agents, "agents per stage");
        cmd->add_option("--stages", stages, "number of stages T");
        cmd->add_option("--facilities", facilities, "number of facilities K");
        cmd->add_option("--lo", lo, "smallest coordinate");
        cmd->add_option("--hi", hi, "largest coordinate");
        cmd->add_option("--spread", spread, "walk step / cluster radius");
        cmd->add_option("--denominator", denominator, "coordinates are multiples of 1/denominator");
        cmd->add_option("--spec", spec_path, "GenSpec JSON file (overrides the flags)");
    }

    kfr::GenSpec spec() const {
        if (!spec_path.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(spec_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw std::runtime_error(spec_path + ": " + e.what());
            }
            return kfr::gen_spec_from_json(j);
        }
        kfr::GenSpec s;
        s.model = kfr::parse_gen_model(model);
        s.agents = agents;
        s.stages = stages;
        s.facilities = facilities;
        s.lo = lo;
        s.hi = hi;
        s.spread = spread;
        s.denominator = denominator;
        s.seed = seed;
        kfr::validate(s);
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact k-facility reallocation: offline LP/DP solvers, the two-facility online algorithm, and claim checks"};
    app.require_subcommand(1);

    std::string input, output, report_path;
    bool timing = false;

    // gen
    GenFlags gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance");
    gen.attach(gen_cmd);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--output,-o", output, "instance file (default stdout)");

    // solve
    std::string method = "lp", rounding = "prefix", lp_dump;
    auto* solve_cmd = app.add_subcommand("solve", "offline optimum via LP + rounding, DP, or enumeration");
    solve_cmd->add_option("--input,-i", input, "instance JSON")->required();
    solve_cmd->add_option("--method", method, "lp | dp | enum");
    solve_cmd->add_option("--rounding", rounding, "prefix | leftmost (method lp)");
    solve_cmd->add_option("--output,-o", output, "schedule JSON (default: not written)");
    solve_cmd->add_option("--report", report_path, "run report JSON (default stdout)");
    solve_cmd->add_option("--lp-dump", lp_dump, "write the LP in CPLEX LP format");
    solve_cmd->add_flag("--timing", timing, "include wall time in the report");

    // online
    std::string representative = "lower", csv_path;
    auto* online_cmd = app.add_subcommand("online", "run the two-facility online algorithm");
    online_cmd->add_option("--input,-i", input, "instance JSON (K = 2)")->required();
    online_cmd->add_option("--output,-o", output, "stage trace, one JSON object per line (default: not written)");
    online_cmd->add_option("--csv", csv_path, "per-stage summary CSV");
    online_cmd->add_option("--report", report_path, "run report JSON (default stdout)");
    online_cmd->add_option("--median", representative, "representative of an even median interval: lower | upper");
    online_cmd->add_flag("--timing", timing, "include wall time in the report");

    // verify
    std::vector<std::string> inputs;
    std::string checks_text = "all", seeds_text, suite_text;
    GenFlags vgen;
    bool use_generator = false;
    auto* verify_cmd = app.add_subcommand("verify", "check the exactness and competitive claims on instances");
    verify_cmd->add_option("--input,-i", inputs, "instance JSON file(s)");
    verify_cmd->add_option("--checks", checks_text, "comma list of theorem1,rounding-equiv,lemma-y,per-stage,competitive or all");
    verify_cmd->add_option("--suite", suite_text, "seed range A..B of the randomized suite");
    vgen.attach(verify_cmd);
    verify_cmd->add_option("--seed", seeds_text, "seed or seed range A..B for the generator flags");
    verify_cmd->add_option("--median", representative, "lower | upper");
    verify_cmd->add_option("--output,-o", output, "report JSON (default stdout)");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "cost of every method on one instance");
    compare_cmd->add_option("--input,-i", input, "instance JSON")->required();
    compare_cmd->add_option("--output,-o", output, "report JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_operational;
    }

    try {
        const std::uint64_t budget = kfr::oracle_budget_from_env();

        if (*gen_cmd) {
            write_json(output, kfr::instance_to_json(kfr::generate(gen.spec())));
            return exit_ok;
        }

        if (*solve_cmd) {
            kfr::SolveOptions opts;
            try {
                opts.method = kfr::parse_solve_method(method);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (rounding == "prefix")
                opts.rounding = kfr::RoundingRule::Prefix;
            else if (rounding == "leftmost")
                opts.rounding = kfr::RoundingRule::Leftmost;
            else
                throw UsageError("unknown rounding '" + rounding + "' (prefix | leftmost)");
            opts.budget = budget;
            opts.timing = timing;
            kfr::Instance instance = load_instance(input);
            if (!lp_dump.empty()) {
                std::ostringstream lp;
                kfr::PathModel path = kfr::build_path(instance);
                kfr::write_lp_text(lp, kfr::build_model(path, instance));
                write_text(lp_dump, lp.str());
            }
            kfr::SolveOutcome result = kfr::run_solve(instance, opts);
            if (!output.empty()) write_json(output, kfr::schedule_to_json(result.schedule));
            write_json(report_path, result.report);
            return exit_ok;
        }

        if (*online_cmd) {
            kfr::Instance instance = load_instance(input);
            kfr::OnlineOutcome result = kfr::run_online_command(instance, timing, parse_representative(representative));
            if (!output.empty()) write_text(output, result.trace_jsonl);
            if (!csv_path.empty()) write_text(csv_path, result.summary_csv);
            write_json(report_path, result.report);
            return exit_ok;
        }

        if (*verify_cmd) {
            std::set<std::string> checks;
            try {
                checks = kfr::parse_checks(checks_text);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            use_generator = !vgen.spec_path.empty() || verify_cmd->count("--model") > 0;
            std::vector<kfr::NamedInstance> instances;
            for (const auto& path : inputs) instances.push_back({path, load_instance(path)});
            if (!suite_text.empty()) {
                auto [lo, hi] = parse_seed_range(suite_text);
                for (auto s = lo;; ++s) {
                    instances.push_back({"suite:" + std::to_string(s), kfr::generate(kfr::suite_spec(s))});
                    if (s == hi) break;
                }
            }
            if (use_generator) {
                auto [lo, hi] = seeds_text.empty() ? std::pair<std::uint64_t, std::uint64_t>{1, 1}
                                                   : parse_seed_range(seeds_text);
                kfr::GenSpec base = vgen.spec();
                if (!seeds_text.empty() || vgen.spec_path.empty()) {
                    for (auto s = lo;; ++s) {
                        kfr::GenSpec spec = base;
                        spec.seed = s;
                        instances.push_back({std::string(kfr::to_string(spec.model)) + ":" + std::to_string(s),
                                             kfr::generate(spec)});
                        if (s == hi) break;
                    }
                } else {
                    instances.push_back({std::string(kfr::to_string(base.model)) + ":" + std::to_string(base.seed),
                                         kfr::generate(base)});
                }
            }
            if (instances.empty()) throw UsageError("verify needs --input, --suite, --model or --spec");
            kfr::VerifyOutcome result = kfr::run_verify(instances, checks, budget, parse_representative(representative));
            write_json(output, result.report);
            if (!result.all_pass) std::cerr << "kfr verify: at least one check failed\n";
            return result.all_pass ? exit_ok : exit_claim_failed;
        }

        if (*compare_cmd) {
            write_json(output, kfr::run_compare(load_instance(input), budget));
            return exit_ok;
        }
    } catch (const UsageError& e) {
        std::cerr << "kfr: usage error: " << e.what() << "\n";
        return exit_operational;
    } catch (const std::exception& e) {
        std::cerr << "kfr: " << e.what() << "\n";
        return exit_operational;
    }
    return exit_operational;
}
