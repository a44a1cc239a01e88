#pragma once

// Candidate-position set (agent and initial facility coordinates) viewed as a path graph.

#include "kfr/instance.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace kfr {

/// Nodes are the distinct coordinates in increasing order. Indices are 0-based
/// internally; traces print them 1-based.
struct PathModel {
    Positions nodes;
    std::vector<std::vector<std::size_t>> loc;  // loc[t][i]: node of agent i at stage t
    std::vector<std::size_t> init_node;         // init_node[k]

    std::size_t size() const { return nodes.size(); }
    Rational distance(std::size_t j, std::size_t l) const { return abs_diff(nodes[j], nodes[l]); }

    /// Index of an exact coordinate; the coordinate must be a node.
    std::size_t index_of(const Rational& coordinate) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), coordinate);
        return static_cast<std::size_t>(it - nodes.begin());
    }
    bool contains(const Rational& coordinate) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), coordinate);
        return it != nodes.end() && *it == coordinate;
    }
};

inline PathModel build_path(const Instance& instance) {
    PathModel path;
    path.nodes = instance.initial_positions;
    for (const auto& stage : instance.stages) path.nodes.insert(path.nodes.end(), stage.begin(), stage.end());
    std::sort(path.nodes.begin(), path.nodes.end());
    path.nodes.erase(std::unique(path.nodes.begin(), path.nodes.end()), path.nodes.end());

    path.init_node.reserve(instance.facility_count());
    for (const auto& x : instance.initial_positions) path.init_node.push_back(path.index_of(x));
    path.loc.reserve(instance.stage_count());
    for (const auto& stage : instance.stages) {
        std::vector<std::size_t> row;
        row.reserve(stage.size());
        for (const auto& a : stage) row.push_back(path.index_of(a));
        path.loc.push_back(std::move(row));
    }
    return path;
}

/// "1:0 2:2.5 3:7" style listing used in traces.
inline std::string describe_nodes(const PathModel& path) {
    std::string out;
    for (std::size_t j = 0; j < path.nodes.size(); ++j) {
        if (j) out += ' ';
        out += std::to_string(j + 1) + ":" + to_display_string(path.nodes[j]);
    }
    return out;
}

}  // namespace kfr
