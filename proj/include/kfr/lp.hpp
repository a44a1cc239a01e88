#pragma once

// The reallocation program over a path: variables, constraint rows, exact LP solve.
//
// Variables (stage t = 1..T, agent i, nodes j,l, facility k):
//   x[i,j,t]   agent i served at node j
//   f[k,j,t]   facility k located at node j
//   c[j,t]     total facility mass at node j          (= sum_k f[k,j,t])
//   S[k,j,l,t] facility k moved from j (stage t-1) to l (stage t)
//   Sk[k,t]    moving cost of facility k at stage t   (= sum_{j,l} d(j,l) S[k,j,l,t])
// f[k,j,0] are constants fixed by the initial placement.

#include "kfr/checked_rational.hpp"
#include "kfr/instance.hpp"
#include "kfr/path.hpp"
#include "kfr/simplex.hpp"

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace kfr {

enum class RowKind {
    AgentAssigned,      // sum_j x[i,j,t] = 1
    AgentCapacity,      // x[i,j,t] <= c[j,t]
    CapacityDefinition, // c[j,t] = sum_k f[k,j,t]
    FacilityPlaced,     // sum_j f[k,j,t] = 1
    MoveCostDefinition, // Sk[k,t] = sum_{j,l} d(j,l) S[k,j,l,t]
    FlowArrive,         // sum_j S[k,j,l,t] = f[k,l,t]
    FlowLeave,          // sum_l S[k,j,l,t] = f[k,j,t-1]
};

struct LpRow {
    RowKind kind;
    simplex::Constraint<Rational> constraint;
};

class LpModel {
public:
    LpModel(const PathModel& path, const Instance& instance)
        : facilities_(instance.facility_count()), stages_(instance.stage_count()), nodes_(path.size()) {
        agent_offset_.reserve(stages_ + 1);
        std::size_t offset = 0;
        for (std::size_t t = 0; t < stages_; ++t) {
            agents_.push_back(instance.stages[t].size());
            agent_offset_.push_back(offset);
            offset += agents_.back() * nodes_;
        }
        x_count_ = offset;
        f_base_ = x_count_;
        c_base_ = f_base_ + facilities_ * nodes_ * stages_;
        s_base_ = c_base_ + nodes_ * stages_;
        sk_base_ = s_base_ + facilities_ * nodes_ * nodes_ * stages_;
        variable_count_ = sk_base_ + facilities_ * stages_;

        initial_.assign(facilities_, std::vector<Rational>(nodes_, Rational(0)));
        for (std::size_t k = 0; k < facilities_; ++k) initial_[k][path.init_node[k]] = 1;

        distance_.assign(nodes_, std::vector<Rational>(nodes_));
        for (std::size_t j = 0; j < nodes_; ++j)
            for (std::size_t l = 0; l < nodes_; ++l) distance_[j][l] = path.distance(j, l);

        objective_.assign(variable_count_, Rational(0));
        for (std::size_t t = 0; t < stages_; ++t) {
            for (std::size_t i = 0; i < agents_[t]; ++i)
                for (std::size_t j = 0; j < nodes_; ++j) objective_[x(t, i, j)] = distance_[path.loc[t][i]][j];
            for (std::size_t k = 0; k < facilities_; ++k) objective_[moving(t, k)] = 1;
        }
        build_rows();
    }

    std::size_t facility_count() const { return facilities_; }
    std::size_t stage_count() const { return stages_; }
    std::size_t node_count() const { return nodes_; }
    std::size_t agent_count(std::size_t t) const { return agents_[t]; }
    std::size_t variable_count() const { return variable_count_; }

    std::size_t x_variable_count() const { return x_count_; }
    std::size_t f_variable_count() const { return c_base_ - f_base_; }
    std::size_t c_variable_count() const { return s_base_ - c_base_; }
    std::size_t s_variable_count() const { return sk_base_ - s_base_; }
    std::size_t moving_variable_count() const { return variable_count_ - sk_base_; }

    // Variable indices; every stage argument is 0-based (stage 1 is t = 0).
    std::size_t x(std::size_t t, std::size_t i, std::size_t j) const { return agent_offset_[t] + i * nodes_ + j; }
    std::size_t f(std::size_t t, std::size_t k, std::size_t j) const {
        return f_base_ + (t * facilities_ + k) * nodes_ + j;
    }
    std::size_t c(std::size_t t, std::size_t j) const { return c_base_ + t * nodes_ + j; }
    std::size_t s(std::size_t t, std::size_t k, std::size_t j, std::size_t l) const {
        return s_base_ + ((t * facilities_ + k) * nodes_ + j) * nodes_ + l;
    }
    std::size_t moving(std::size_t t, std::size_t k) const { return sk_base_ + t * facilities_ + k; }

    const Rational& initial_mass(std::size_t k, std::size_t j) const { return initial_[k][j]; }
    const Rational& distance(std::size_t j, std::size_t l) const { return distance_[j][l]; }
    const std::vector<Rational>& objective() const { return objective_; }
    const std::vector<LpRow>& rows() const { return rows_; }

    std::string variable_name(std::size_t v) const {
        auto n = [](std::size_t a) { return std::to_string(a + 1); };
        if (v < f_base_) {
            std::size_t t = 0;
            while (t + 1 < stages_ && agent_offset_[t + 1] <= v) ++t;
            std::size_t rel = v - agent_offset_[t];
            return "x_" + n(rel / nodes_) + "_" + n(rel % nodes_) + "_" + n(t);
        }
        if (v < c_base_) {
            std::size_t rel = v - f_base_;
            std::size_t j = rel % nodes_;
            rel /= nodes_;
            return "f_" + n(rel % facilities_) + "_" + n(j) + "_" + n(rel / facilities_);
        }
        if (v < s_base_) {
            std::size_t rel = v - c_base_;
            return "c_" + n(rel % nodes_) + "_" + n(rel / nodes_);
        }
        if (v < sk_base_) {
            std::size_t rel = v - s_base_;
            std::size_t l = rel % nodes_;
            rel /= nodes_;
            std::size_t j = rel % nodes_;
            rel /= nodes_;
            return "S_" + n(rel % facilities_) + "_" + n(j) + "_" + n(l) + "_" + n(rel / facilities_);
        }
        std::size_t rel = v - sk_base_;
        return "Sk_" + n(rel % facilities_) + "_" + n(rel / facilities_);
    }

private:
    void add_row(RowKind kind, std::vector<simplex::Term<Rational>> terms, simplex::Sense sense, Rational rhs) {
        rows_.push_back(LpRow{kind, simplex::Constraint<Rational>{std::move(terms), sense, std::move(rhs)}});
    }

    void build_rows() {
        using simplex::Sense;
        using T = simplex::Term<Rational>;
        for (std::size_t t = 0; t < stages_; ++t) {
            for (std::size_t i = 0; i < agents_[t]; ++i) {
                std::vector<T> terms;
                for (std::size_t j = 0; j < nodes_; ++j) terms.push_back({x(t, i, j), 1});
                add_row(RowKind::AgentAssigned, std::move(terms), Sense::Equal, 1);
            }
            for (std::size_t i = 0; i < agents_[t]; ++i)
                for (std::size_t j = 0; j < nodes_; ++j)
                    add_row(RowKind::AgentCapacity, {{x(t, i, j), 1}, {c(t, j), -1}}, Sense::LessEqual, 0);
            for (std::size_t j = 0; j < nodes_; ++j) {
                std::vector<T> terms{{c(t, j), 1}};
                for (std::size_t k = 0; k < facilities_; ++k) terms.push_back({f(t, k, j), -1});
                add_row(RowKind::CapacityDefinition, std::move(terms), Sense::Equal, 0);
            }
            for (std::size_t k = 0; k < facilities_; ++k) {
                std::vector<T> terms;
                for (std::size_t j = 0; j < nodes_; ++j) terms.push_back({f(t, k, j), 1});
                add_row(RowKind::FacilityPlaced, std::move(terms), Sense::Equal, 1);
            }
            for (std::size_t k = 0; k < facilities_; ++k) {
                std::vector<T> terms{{moving(t, k), 1}};
                for (std::size_t j = 0; j < nodes_; ++j)
                    for (std::size_t l = 0; l < nodes_; ++l)
                        if (distance_[j][l] != 0) terms.push_back({s(t, k, j, l), -distance_[j][l]});
                add_row(RowKind::MoveCostDefinition, std::move(terms), Sense::Equal, 0);
            }
            for (std::size_t k = 0; k < facilities_; ++k)
                for (std::size_t l = 0; l < nodes_; ++l) {
                    std::vector<T> terms;
                    for (std::size_t j = 0; j < nodes_; ++j) terms.push_back({s(t, k, j, l), 1});
                    terms.push_back({f(t, k, l), -1});
                    add_row(RowKind::FlowArrive, std::move(terms), Sense::Equal, 0);
                }
            for (std::size_t k = 0; k < facilities_; ++k)
                for (std::size_t j = 0; j < nodes_; ++j) {
                    std::vector<T> terms;
                    for (std::size_t l = 0; l < nodes_; ++l) terms.push_back({s(t, k, j, l), 1});
                    if (t == 0) {
                        add_row(RowKind::FlowLeave, std::move(terms), Sense::Equal, initial_[k][j]);
                    } else {
                        terms.push_back({f(t - 1, k, j), -1});
                        add_row(RowKind::FlowLeave, std::move(terms), Sense::Equal, 0);
                    }
                }
        }
    }

    std::size_t facilities_;
    std::size_t stages_;
    std::size_t nodes_;
    std::vector<std::size_t> agents_;
    std::vector<std::size_t> agent_offset_;
    std::size_t x_count_ = 0;
    std::size_t f_base_ = 0;
    std::size_t c_base_ = 0;
    std::size_t s_base_ = 0;
    std::size_t sk_base_ = 0;
    std::size_t variable_count_ = 0;
    std::vector<std::vector<Rational>> initial_;
    std::vector<std::vector<Rational>> distance_;
    std::vector<Rational> objective_;
    std::vector<LpRow> rows_;
};

inline LpModel build_model(const PathModel& path, const Instance& instance) { return LpModel(path, instance); }

/// Exact optimal basic solution of the relaxation, reported over every model variable.
struct FractionalSolution {
    std::vector<Rational> values;                 // indexed like LpModel variables
    Rational objective;                           // Z*_LP
    std::vector<std::vector<Rational>> capacity;  // capacity[t][j] = c[j,t]
    std::vector<std::vector<std::vector<Rational>>> mass;  // mass[t][k][j] = f[k,j,t]
    std::vector<std::string> basis;               // names of basic structural variables
    std::size_t pivots = 0;

    /// f[k,j,t] as a per-node vector for stage t (0-based) and facility k.
    std::vector<Rational> facility_mass(const LpModel& model, std::size_t t, std::size_t k) const {
        std::vector<Rational> out;
        out.reserve(model.node_count());
        for (std::size_t j = 0; j < model.node_count(); ++j) out.push_back(values[model.f(t, k, j)]);
        return out;
    }
};

class LpSolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Tries checked 64-bit rationals first and repeats the solve over GMP if any
// intermediate value overflows. Both paths pivot identically.
inline simplex::Result<Rational> solve_with_fast_path(const simplex::Problem<Rational>& problem,
                                                      simplex::Options options) {
    try {
        simplex::Problem<CheckedRational> fast;
        fast.variable_count = problem.variable_count;
        fast.objective.reserve(problem.objective.size());
        for (const auto& c : problem.objective) fast.objective.push_back(CheckedRational::from_mpq(c));
        fast.constraints.reserve(problem.constraints.size());
        for (const auto& row : problem.constraints) {
            simplex::Constraint<CheckedRational> out;
            out.sense = row.sense;
            out.rhs = CheckedRational::from_mpq(row.rhs);
            out.terms.reserve(row.terms.size());
            for (const auto& t : row.terms) out.terms.push_back({t.column, CheckedRational::from_mpq(t.coefficient)});
            fast.constraints.push_back(std::move(out));
        }
        auto r = simplex::solve(fast, options);
        simplex::Result<Rational> out;
        out.status = r.status;
        out.objective = r.objective.to_mpq();
        out.values.reserve(r.values.size());
        for (const auto& v : r.values) out.values.push_back(v.to_mpq());
        out.basic_columns = std::move(r.basic_columns);
        out.pivots = r.pivots;
        return out;
    } catch (const RationalOverflow&) {
        return simplex::solve(problem, options);
    }
}

}  // namespace detail

/// Solves the relaxation. The definitional variables c and Sk are substituted out
/// before pivoting and reconstructed afterwards.
inline FractionalSolution solve_lp(const LpModel& model, simplex::Options options = {}) {
    using simplex::Sense;
    using Term = simplex::Term<Rational>;
    const std::size_t K = model.facility_count();
    const std::size_t T = model.stage_count();
    const std::size_t V = model.node_count();

    // Compact columns: x, f and S keep their model index order.
    std::vector<std::size_t> to_model;
    std::vector<std::size_t> to_compact(model.variable_count(), static_cast<std::size_t>(-1));
    auto keep = [&](std::size_t v) {
        to_compact[v] = to_model.size();
        to_model.push_back(v);
    };
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < model.agent_count(t); ++i)
            for (std::size_t j = 0; j < V; ++j) keep(model.x(t, i, j));
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < V; ++j) keep(model.f(t, k, j));
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < V; ++j)
                for (std::size_t l = 0; l < V; ++l) keep(model.s(t, k, j, l));

    simplex::Problem<Rational> problem;
    problem.variable_count = to_model.size();
    problem.objective.assign(to_model.size(), Rational(0));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < model.agent_count(t); ++i)
            for (std::size_t j = 0; j < V; ++j)
                problem.objective[to_compact[model.x(t, i, j)]] = model.objective()[model.x(t, i, j)];
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < V; ++j)
                for (std::size_t l = 0; l < V; ++l)
                    problem.objective[to_compact[model.s(t, k, j, l)]] = model.distance(j, l);
    }

    for (const auto& row : model.rows()) {
        if (row.kind == RowKind::CapacityDefinition || row.kind == RowKind::MoveCostDefinition) continue;
        simplex::Constraint<Rational> out;
        out.sense = row.constraint.sense;
        out.rhs = row.constraint.rhs;
        for (const auto& term : row.constraint.terms) {
            std::size_t v = term.column;
            if (to_compact[v] != static_cast<std::size_t>(-1)) {
                out.terms.push_back({to_compact[v], term.coefficient});
                continue;
            }
            // c[j,t] appears only in capacity rows: expand to sum_k f[k,j,t].
            std::size_t rel = v - model.c(0, 0);
            std::size_t t = rel / V;
            std::size_t j = rel % V;
            for (std::size_t k = 0; k < K; ++k) out.terms.push_back(Term{to_compact[model.f(t, k, j)], term.coefficient});
        }
        problem.constraints.push_back(std::move(out));
    }

    auto result = detail::solve_with_fast_path(problem, options);
    if (result.status != simplex::Status::Optimal)
        throw LpSolveError(result.status == simplex::Status::Infeasible ? "relaxation reported infeasible"
                                                                         : "relaxation reported unbounded");

    FractionalSolution sol;
    sol.values.assign(model.variable_count(), Rational(0));
    for (std::size_t c = 0; c < to_model.size(); ++c) sol.values[to_model[c]] = result.values[c];
    sol.capacity.assign(T, std::vector<Rational>(V, Rational(0)));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < V; ++j) {
            Rational mass = 0;
            for (std::size_t k = 0; k < K; ++k) mass += sol.values[model.f(t, k, j)];
            sol.values[model.c(t, j)] = mass;
            sol.capacity[t][j] = std::move(mass);
        }
        for (std::size_t k = 0; k < K; ++k) {
            Rational cost = 0;
            for (std::size_t j = 0; j < V; ++j)
                for (std::size_t l = 0; l < V; ++l) {
                    const Rational& v = sol.values[model.s(t, k, j, l)];
                    if (v != 0) cost += model.distance(j, l) * v;
                }
            sol.values[model.moving(t, k)] = std::move(cost);
        }
    }
    sol.mass.assign(T, std::vector<std::vector<Rational>>(K));
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < K; ++k) sol.mass[t][k] = sol.facility_mass(model, t, k);
    sol.objective = 0;
    for (std::size_t v = 0; v < model.variable_count(); ++v)
        if (model.objective()[v] != 0 && sol.values[v] != 0) sol.objective += model.objective()[v] * sol.values[v];
    for (std::size_t c : result.basic_columns) sol.basis.push_back(model.variable_name(to_model[c]));
    sol.pivots = result.pivots;
    return sol;
}

/// Names of model rows the solution violates (empty when it is feasible), plus any negative variable.
inline std::vector<std::string> violated_constraints(const LpModel& model, const FractionalSolution& sol) {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < model.variable_count(); ++v)
        if (sol.values[v] < 0) out.push_back(model.variable_name(v) + " < 0");
    for (std::size_t r = 0; r < model.rows().size(); ++r) {
        const auto& row = model.rows()[r].constraint;
        Rational lhs = 0;
        for (const auto& t : row.terms) lhs += t.coefficient * sol.values[t.column];
        bool ok = row.sense == simplex::Sense::Equal       ? lhs == row.rhs
                  : row.sense == simplex::Sense::LessEqual ? lhs <= row.rhs
                                                           : lhs >= row.rhs;
        if (!ok) out.push_back("row " + std::to_string(r + 1));
    }
    return out;
}

/// CPLEX LP text format. Coefficients print as decimals when finite, p/q otherwise.
inline void write_lp_text(std::ostream& os, const LpModel& model) {
    auto coef = [](const Rational& r) { return to_display_string(abs_of(r)); };
    auto write_terms = [&](const std::vector<simplex::Term<Rational>>& terms) {
        bool first = true;
        for (const auto& t : terms) {
            if (t.coefficient == 0) continue;
            if (sgn(t.coefficient) < 0)
                os << (first ? "- " : " - ");
            else if (!first)
                os << " + ";
            if (t.coefficient != 1 && t.coefficient != -1) os << coef(t.coefficient) << ' ';
            os << model.variable_name(t.column);
            first = false;
        }
        if (first) os << "0 " << model.variable_name(0);
    };
    os << "\\ K-facility reallocation relaxation: K=" << model.facility_count() << " T=" << model.stage_count()
       << " |V|=" << model.node_count() << "\nMinimize\n obj: ";
    std::vector<simplex::Term<Rational>> obj;
    for (std::size_t v = 0; v < model.variable_count(); ++v)
        if (model.objective()[v] != 0) obj.push_back({v, model.objective()[v]});
    write_terms(obj);
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < model.rows().size(); ++r) {
        const auto& row = model.rows()[r].constraint;
        os << " r" << (r + 1) << ": ";
        write_terms(row.terms);
        os << (row.sense == simplex::Sense::Equal ? " = " : row.sense == simplex::Sense::LessEqual ? " <= " : " >= ")
           << (sgn(row.rhs) < 0 ? "-" : "") << coef(row.rhs) << '\n';
    }
    os << "End\n";
}

}  // namespace kfr
