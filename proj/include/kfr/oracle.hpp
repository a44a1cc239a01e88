#pragma once

// Independent exact optima over the candidate positions: a dynamic program over
// sorted facility configurations, and brute-force enumeration of every
// trajectory for tiny instances.

#include "kfr/checked_rational.hpp"
#include "kfr/instance.hpp"
#include "kfr/path.hpp"

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kfr {

inline constexpr std::uint64_t default_oracle_budget = 1'000'000;
inline constexpr const char* oracle_budget_env = "KFR_ORACLE_BUDGET";

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Budget from KFR_ORACLE_BUDGET when set to a positive integer, else the default.
inline std::uint64_t oracle_budget_from_env() {
    const char* text = std::getenv(oracle_budget_env);
    if (!text || !*text) return default_oracle_budget;
    char* end = nullptr;
    unsigned long long v = std::strtoull(text, &end, 10);
    if (*end != '\0' || v == 0) return default_oracle_budget;
    return v;
}

namespace detail {

// base^exponent, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

template <class Scalar>
Scalar to_scalar(const Rational& r) {
    if constexpr (std::is_same_v<Scalar, Rational>)
        return r;
    else
        return Scalar::from_mpq(r);
}

template <class Scalar>
Scalar scalar_abs(const Scalar& v) {
    return v < Scalar(0) ? Scalar(0) - v : v;
}

template <class Scalar>
struct Distances {
    std::vector<std::vector<Scalar>> node;                  // node[j][l]
    std::vector<std::vector<std::vector<Scalar>>> agent;    // agent[t][i][j]

    Distances(const PathModel& path, const Instance& instance) {
        const std::size_t V = path.size();
        std::vector<Scalar> coord;
        coord.reserve(V);
        for (const auto& x : path.nodes) coord.push_back(to_scalar<Scalar>(x));
        node.assign(V, std::vector<Scalar>(V));
        for (std::size_t j = 0; j < V; ++j)
            for (std::size_t l = 0; l < V; ++l) node[j][l] = scalar_abs<Scalar>(coord[j] - coord[l]);
        agent.resize(instance.stage_count());
        for (std::size_t t = 0; t < instance.stage_count(); ++t)
            for (std::size_t i = 0; i < instance.stages[t].size(); ++i) agent[t].push_back(node[path.loc[t][i]]);
    }

    Scalar connection(std::size_t t, const std::vector<std::size_t>& config) const {
        Scalar total(0);
        for (const auto& row : agent[t]) {
            Scalar best = row[config[0]];
            for (std::size_t m = 1; m < config.size(); ++m)
                if (row[config[m]] < best) best = row[config[m]];
            total += best;
        }
        return total;
    }

    Scalar moving(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) const {
        Scalar total(0);
        for (std::size_t m = 0; m < from.size(); ++m) total += node[from[m]][to[m]];
        return total;
    }
};

// Nondecreasing K-tuples over [0, V) in lexicographic order.
inline std::vector<std::vector<std::size_t>> sorted_configurations(std::size_t V, std::size_t K) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(K, 0);
    for (;;) {
        out.push_back(cur);
        std::size_t m = K;
        while (m > 0 && cur[m - 1] == V - 1) --m;
        if (m == 0) break;
        ++cur[m - 1];
        for (std::size_t r = m; r < K; ++r) cur[r] = cur[m - 1];
    }
    return out;
}

// In-place min-plus convolution with the L1 metric over the full V^K tuple grid:
//   a(u) <- min_w sum_m |p(u_m) - p(w_m)| + a(w)
// The metric is separable, so one forward and one backward sweep per axis suffice.
template <class Scalar>
void l1_transform(std::vector<Scalar>& a, const std::vector<Scalar>& gap, std::size_t V, std::size_t K) {
    const std::size_t G = a.size();
    std::size_t stride = G;
    for (std::size_t m = 0; m < K; ++m) {
        stride /= V;
        for (std::size_t base = 0; base < G; ++base) {
            if ((base / stride) % V != 0) continue;
            for (std::size_t j = 1; j < V; ++j) {
                Scalar cand = a[base + (j - 1) * stride] + gap[j];
                if (cand < a[base + j * stride]) a[base + j * stride] = cand;
            }
            for (std::size_t j = V - 1; j-- > 0;) {
                Scalar cand = a[base + (j + 1) * stride] + gap[j + 1];
                if (cand < a[base + j * stride]) a[base + j * stride] = cand;
            }
        }
    }
}

template <class Scalar>
std::vector<std::vector<std::size_t>> dp_trajectory(const PathModel& path, const Instance& instance) {
    const std::size_t K = instance.facility_count();
    const std::size_t T = instance.stage_count();
    const std::size_t V = path.size();
    Distances<Scalar> dist(path, instance);
    std::vector<Scalar> gap(V, Scalar(0));  // gap[j] = p_j - p_{j-1}
    for (std::size_t j = 1; j < V; ++j) gap[j] = dist.node[j][j - 1];

    std::size_t G = 1;
    for (std::size_t m = 0; m < K; ++m) G *= V;
    auto grid_index = [&](const std::vector<std::size_t>& tuple) {
        std::size_t g = 0;
        for (std::size_t m = 0; m < K; ++m) g = g * V + tuple[m];
        return g;
    };

    // value[t][g]: optimal cost of stages t..T-1 when the facilities occupy tuple g
    // at stage t. It is symmetric under permuting the tuple, so moving cost between
    // multisets is the sorted matching, which the transform realizes.
    std::vector<std::vector<Scalar>> value(T, std::vector<Scalar>(G));
    std::vector<Scalar> carry;
    std::vector<std::size_t> tuple(K);
    for (std::size_t t = T; t-- > 0;) {
        for (std::size_t g = 0; g < G; ++g) {
            std::size_t rest = g;
            for (std::size_t m = K; m-- > 0;) {
                tuple[m] = rest % V;
                rest /= V;
            }
            value[t][g] = dist.connection(t, tuple);
            if (t + 1 < T) value[t][g] += carry[g];
        }
        if (t > 0) {
            carry = value[t];
            l1_transform(carry, gap, V, K);
        }
    }

    // Forward pass over sorted configurations in lexicographic order; strict
    // comparison keeps the first minimizer.
    auto configs = sorted_configurations(V, K);
    std::vector<std::size_t> previous = path.init_node;  // sorted because x0 is
    std::vector<std::vector<std::size_t>> trajectory;
    for (std::size_t t = 0; t < T; ++t) {
        std::size_t best = 0;
        Scalar best_cost{};
        for (std::size_t n = 0; n < configs.size(); ++n) {
            Scalar cand = dist.moving(previous, configs[n]) + value[t][grid_index(configs[n])];
            if (n == 0 || cand < best_cost) {
                best = n;
                best_cost = cand;
            }
        }
        trajectory.push_back(configs[best]);
        previous = configs[best];
    }
    return trajectory;
}

template <class Scalar>
std::vector<std::vector<std::size_t>> enumerate_trajectory(const PathModel& path, const Instance& instance) {
    const std::size_t K = instance.facility_count();
    const std::size_t T = instance.stage_count();
    const std::size_t V = path.size();
    Distances<Scalar> dist(path, instance);

    // Every (not necessarily sorted) K-tuple, lexicographic.
    std::vector<std::vector<std::size_t>> tuples;
    {
        std::vector<std::size_t> cur(K, 0);
        for (;;) {
            tuples.push_back(cur);
            std::size_t m = K;
            while (m > 0 && cur[m - 1] == V - 1) cur[--m] = 0;
            if (m == 0) break;
            ++cur[m - 1];
        }
    }
    const std::size_t N = tuples.size();
    std::vector<std::vector<Scalar>> connection(T, std::vector<Scalar>(N));
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t n = 0; n < N; ++n) connection[t][n] = dist.connection(t, tuples[n]);
    std::vector<Scalar> from_start(N);
    for (std::size_t n = 0; n < N; ++n) from_start[n] = dist.moving(path.init_node, tuples[n]);

    // Odometer over T tuple indices; partial sums kept per stage.
    std::vector<std::size_t> idx(T, 0);
    std::vector<Scalar> partial(T);
    auto stage_cost = [&](std::size_t t) {
        Scalar c = t == 0 ? from_start[idx[0]] : dist.moving(tuples[idx[t - 1]], tuples[idx[t]]);
        c += connection[t][idx[t]];
        return c;
    };
    for (std::size_t t = 0; t < T; ++t) partial[t] = (t ? partial[t - 1] : Scalar(0)) + stage_cost(t);
    std::vector<std::size_t> best_idx = idx;
    Scalar best = partial[T - 1];
    for (;;) {
        std::size_t t = T;
        while (t > 0 && idx[t - 1] == N - 1) idx[--t] = 0;
        if (t == 0) break;
        ++idx[t - 1];
        for (std::size_t s = t - 1; s < T; ++s) partial[s] = (s ? partial[s - 1] : Scalar(0)) + stage_cost(s);
        if (partial[T - 1] < best) {
            best = partial[T - 1];
            best_idx = idx;
        }
    }
    std::vector<std::vector<std::size_t>> trajectory;
    for (std::size_t t = 0; t < T; ++t) trajectory.push_back(tuples[best_idx[t]]);
    return trajectory;
}

template <class Solve>
Schedule schedule_from_nodes(const PathModel& path, const Instance& instance, Solve solve) {
    std::vector<std::vector<std::size_t>> nodes;
    try {
        nodes = solve.template operator()<CheckedRational>();
    } catch (const RationalOverflow&) {
        nodes = solve.template operator()<Rational>();
    }
    std::vector<Positions> positions;
    for (const auto& stage : nodes) {
        Positions p;
        for (std::size_t j : stage) p.push_back(path.nodes[j]);
        positions.push_back(std::move(p));
    }
    return evaluate_schedule(instance, std::move(positions));
}

}  // namespace detail

/// Minimum-cost schedule restricted to candidate positions, via DP over sorted
/// configurations with monotone matching as the moving cost. Ties resolve to the
/// lexicographically smallest node-index trajectory.
inline Schedule dp_optimal(const Instance& instance, std::uint64_t budget = default_oracle_budget) {
    PathModel path = build_path(instance);
    std::uint64_t states = detail::saturating_pow(path.size(), instance.facility_count());
    if (states > budget)
        throw BudgetExceeded("dp oracle: |nodes|^K = " + std::to_string(path.size()) + "^" +
                             std::to_string(instance.facility_count()) + " exceeds budget " + std::to_string(budget) +
                             "; shrink the instance or raise " + oracle_budget_env);
    return detail::schedule_from_nodes(path, instance, [&]<class Scalar>() {
        return detail::dp_trajectory<Scalar>(path, instance);
    });
}

/// Brute-force minimum over every facility tuple at every stage (facility identities kept).
inline Schedule enumerate_optimal(const Instance& instance, std::uint64_t budget = default_oracle_budget) {
    PathModel path = build_path(instance);
    std::uint64_t states =
        detail::saturating_pow(path.size(), instance.facility_count() * instance.stage_count());
    if (states > budget)
        throw BudgetExceeded("enumeration oracle: |nodes|^(K*T) = " + std::to_string(path.size()) + "^" +
                             std::to_string(instance.facility_count() * instance.stage_count()) + " exceeds budget " +
                             std::to_string(budget) + "; shrink the instance or raise " + oracle_budget_env);
    return detail::schedule_from_nodes(path, instance, [&]<class Scalar>() {
        return detail::enumerate_trajectory<Scalar>(path, instance);
    });
}

inline bool enumeration_within_budget(const Instance& instance, std::uint64_t budget = default_oracle_budget) {
    return detail::saturating_pow(build_path(instance).size(), instance.facility_count() * instance.stage_count()) <=
           budget;
}

}  // namespace kfr
