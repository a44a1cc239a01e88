#pragma once

// Two-phase primal simplex over an exact field (sparse rows, dense reduced-cost row).
//
//   minimize    c^T x
//   subject to  a_i^T x (= | <= | >=) b_i,   x >= 0
//
// Pivoting uses Bland's rule by default, which cannot cycle. The Dantzig
// (most negative reduced cost) rule is available and falls back to Bland
// after a run of degenerate pivots.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kfr::simplex {

enum class Sense { Equal, LessEqual, GreaterEqual };

template <class Scalar>
struct Term {
    std::size_t column;
    Scalar coefficient;
};

template <class Scalar>
struct Constraint {
    std::vector<Term<Scalar>> terms;
    Sense sense = Sense::Equal;
    Scalar rhs{};
};

template <class Scalar>
struct Problem {
    std::size_t variable_count = 0;
    std::vector<Scalar> objective;  // size variable_count, minimized
    std::vector<Constraint<Scalar>> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

enum class PivotRule { Bland, Dantzig };

struct Options {
    PivotRule rule = PivotRule::Bland;
    std::size_t degenerate_run_before_bland = 64;  // Dantzig only
    std::size_t max_pivots = std::numeric_limits<std::size_t>::max();
};

template <class Scalar>
struct Result {
    Status status = Status::Infeasible;
    Scalar objective{};
    std::vector<Scalar> values;               // structural variables only
    std::vector<std::size_t> basic_columns;   // structural columns that ended basic, ascending
    std::size_t pivots = 0;
};

class PivotLimitExceeded : public std::runtime_error {
public:
    PivotLimitExceeded() : std::runtime_error("simplex pivot limit exceeded") {}
};

namespace detail {

template <class Scalar>
using SparseRow = std::vector<std::pair<std::size_t, Scalar>>;

template <class Scalar>
const Scalar* find_entry(const SparseRow<Scalar>& row, std::size_t column) {
    auto it = std::lower_bound(row.begin(), row.end(), column,
                               [](const auto& entry, std::size_t c) { return entry.first < c; });
    if (it == row.end() || it->first != column) return nullptr;
    return &it->second;
}

// target -= factor * source, both sorted by column.
template <class Scalar>
void axpy_row(SparseRow<Scalar>& target, const Scalar& factor, const SparseRow<Scalar>& source,
              SparseRow<Scalar>& scratch) {
    scratch.clear();
    scratch.reserve(target.size() + source.size());
    auto a = target.begin();
    auto b = source.begin();
    while (a != target.end() || b != source.end()) {
        if (b == source.end() || (a != target.end() && a->first < b->first)) {
            scratch.push_back(std::move(*a));
            ++a;
        } else if (a == target.end() || b->first < a->first) {
            scratch.emplace_back(b->first, -(factor * b->second));
            ++b;
        } else {
            Scalar v = a->second - factor * b->second;
            if (v != 0) scratch.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    target.swap(scratch);
}

template <class Scalar>
class Tableau {
public:
    Tableau(const Problem<Scalar>& problem, Options options) : options_(options), structural_(problem.variable_count) {
        if (problem.objective.size() != problem.variable_count)
            throw std::invalid_argument("objective size does not match variable count");

        std::size_t slack_count = 0;
        for (const auto& c : problem.constraints)
            if (c.sense != Sense::Equal) ++slack_count;
        first_artificial_ = structural_ + slack_count;

        std::size_t next_slack = structural_;
        std::size_t next_artificial = first_artificial_;
        rows_.reserve(problem.constraints.size());
        for (const auto& c : problem.constraints) {
            SparseRow<Scalar> row;
            row.reserve(c.terms.size() + 1);
            for (const auto& t : c.terms) {
                if (t.column >= structural_) throw std::out_of_range("constraint references unknown column");
                if (t.coefficient != 0) row.emplace_back(t.column, t.coefficient);
            }
            std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            // merge duplicate columns
            SparseRow<Scalar> merged;
            merged.reserve(row.size() + 1);
            for (auto& e : row) {
                if (!merged.empty() && merged.back().first == e.first) {
                    merged.back().second += e.second;
                    if (merged.back().second == 0) merged.pop_back();
                } else {
                    merged.push_back(std::move(e));
                }
            }
            std::optional<std::size_t> slack;
            if (c.sense == Sense::LessEqual) merged.emplace_back(slack.emplace(next_slack++), Scalar(1));
            if (c.sense == Sense::GreaterEqual) merged.emplace_back(slack.emplace(next_slack++), Scalar(-1));
            Scalar rhs = c.rhs;
            if (rhs < 0) {
                for (auto& e : merged) e.second = -e.second;
                rhs = -rhs;
            }
            std::size_t basic;
            if (slack && find_entry(merged, *slack) && *find_entry(merged, *slack) == 1) {
                basic = *slack;
            } else {
                basic = next_artificial++;
                merged.emplace_back(basic, Scalar(1));
            }
            rows_.push_back(std::move(merged));
            rhs_.push_back(std::move(rhs));
            basis_.push_back(basic);
        }
        columns_ = next_artificial;
        cost_ = problem.objective;
    }

    Result<Scalar> run() {
        Result<Scalar> result;
        if (columns_ > first_artificial_) {
            // Phase 1: minimize the sum of artificials.
            reduced_.assign(columns_, Scalar(0));
            for (std::size_t j = first_artificial_; j < columns_; ++j) reduced_[j] = 1;
            value_ = 0;
            price_out_basis([&](std::size_t col) { return col >= first_artificial_ ? Scalar(1) : Scalar(0); });
            if (!iterate(false)) throw std::logic_error("phase 1 cannot be unbounded");
            if (value_ != 0) {
                result.status = Status::Infeasible;
                result.pivots = pivots_;
                return result;
            }
            drive_out_artificials();
        }
        // Phase 2.
        reduced_.assign(columns_, Scalar(0));
        for (std::size_t j = 0; j < structural_; ++j) reduced_[j] = cost_[j];
        value_ = 0;
        price_out_basis([&](std::size_t col) { return col < structural_ ? cost_[col] : Scalar(0); });
        if (!iterate(false)) {
            result.status = Status::Unbounded;
            result.pivots = pivots_;
            return result;
        }
        result.status = Status::Optimal;
        result.values.assign(structural_, Scalar(0));
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (basis_[r] < structural_) {
                result.values[basis_[r]] = rhs_[r];
                result.basic_columns.push_back(basis_[r]);
            }
        std::sort(result.basic_columns.begin(), result.basic_columns.end());
        result.objective = 0;
        for (std::size_t j = 0; j < structural_; ++j)
            if (result.values[j] != 0) result.objective += cost_[j] * result.values[j];
        result.pivots = pivots_;
        return result;
    }

private:
    // reduced_ holds raw costs on entry; subtract c_B * row for each basic row.
    // value_ accumulates the current objective c_B^T b.
    template <class CostOf>
    void price_out_basis(CostOf cost_of) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            Scalar cb = cost_of(basis_[r]);
            if (cb == 0) continue;
            for (const auto& [col, v] : rows_[r]) reduced_[col] -= cb * v;
            value_ += cb * rhs_[r];
        }
    }

    bool eligible(std::size_t col, bool allow_artificial) const {
        return allow_artificial || col < first_artificial_;
    }

    std::optional<std::size_t> choose_entering(bool allow_artificial, bool bland) const {
        std::optional<std::size_t> best;
        for (std::size_t j = 0; j < columns_; ++j) {
            if (!eligible(j, allow_artificial) || reduced_[j] >= 0) continue;
            if (bland) return j;
            if (!best || reduced_[j] < reduced_[*best]) best = j;
        }
        return best;
    }

    std::optional<std::size_t> choose_leaving(std::size_t q) const {
        std::optional<std::size_t> best;
        const Scalar* best_a = nullptr;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Scalar* a = find_entry(rows_[r], q);
            if (!a || *a <= 0) continue;
            if (!best) {
                best = r;
                best_a = a;
                continue;
            }
            // rhs_r / a  vs  rhs_best / a_best
            Scalar lhs = rhs_[r] * *best_a;
            Scalar rhs = rhs_[*best] * *a;
            if (lhs < rhs || (lhs == rhs && basis_[r] < basis_[*best])) {
                best = r;
                best_a = a;
            }
        }
        return best;
    }

    bool iterate(bool allow_artificial) {
        std::size_t degenerate_run = 0;
        for (;;) {
            bool bland = options_.rule == PivotRule::Bland || degenerate_run >= options_.degenerate_run_before_bland;
            auto q = choose_entering(allow_artificial, bland);
            if (!q) return true;
            auto r = choose_leaving(*q);
            if (!r) return false;
            if (pivots_ >= options_.max_pivots) throw PivotLimitExceeded();
            if (rhs_[*r] == 0)
                ++degenerate_run;
            else
                degenerate_run = 0;
            pivot(*r, *q);
        }
    }

    void pivot(std::size_t r, std::size_t q) {
        ++pivots_;
        Scalar inv = 1 / *find_entry(rows_[r], q);
        for (auto& e : rows_[r]) e.second *= inv;
        rhs_[r] *= inv;
        const SparseRow<Scalar>& prow = rows_[r];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            const Scalar* a = find_entry(rows_[i], q);
            if (!a) continue;
            Scalar factor = *a;
            rhs_[i] -= factor * rhs_[r];
            axpy_row(rows_[i], factor, prow, scratch_);
        }
        Scalar dq = reduced_[q];
        if (dq != 0) {
            for (const auto& [col, v] : prow) reduced_[col] -= dq * v;
            value_ += dq * rhs_[r];
        }
        basis_[r] = q;
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < rows_.size();) {
            if (basis_[r] < first_artificial_) {
                ++r;
                continue;
            }
            std::optional<std::size_t> q;
            for (const auto& [col, v] : rows_[r])
                if (col < first_artificial_ && v != 0) {
                    q = col;
                    break;
                }
            if (q) {
                pivot(r, *q);
                ++r;
            } else {
                // Redundant row.
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
            }
        }
        for (auto& row : rows_)
            std::erase_if(row, [&](const auto& e) { return e.first >= first_artificial_; });
    }

    Options options_;
    std::size_t structural_;
    std::size_t first_artificial_ = 0;
    std::size_t columns_ = 0;
    std::vector<SparseRow<Scalar>> rows_;
    std::vector<Scalar> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<Scalar> cost_;
    std::vector<Scalar> reduced_;
    Scalar value_{};
    std::size_t pivots_ = 0;
    SparseRow<Scalar> scratch_;
};

}  // namespace detail

template <class Scalar>
Result<Scalar> solve(const Problem<Scalar>& problem, Options options = {}) {
    detail::Tableau<Scalar> tableau(problem, options);
    return tableau.run();
}

}  // namespace kfr::simplex
