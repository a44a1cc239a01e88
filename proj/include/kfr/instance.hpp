#pragma once

// Problem instances, schedules and the reallocation cost (moving + connection).

#include "kfr/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kfr {

using Positions = std::vector<Rational>;

/// Thrown for any malformed or semantically invalid instance/schedule document.
/// `path()` is a JSON pointer to the offending element.
class InstanceError : public std::runtime_error {
public:
    InstanceError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Initial facility coordinates and the agent multisets of each stage.
/// Both are kept sorted ascending; agent counts may differ between stages.
struct Instance {
    Positions initial_positions;
    std::vector<Positions> stages;

    std::size_t facility_count() const { return initial_positions.size(); }
    std::size_t stage_count() const { return stages.size(); }

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Sorts and validates; throws InstanceError on K = 0, T = 0 or an empty stage.
inline Instance make_instance(Positions initial, std::vector<Positions> stages) {
    if (initial.empty()) throw InstanceError("/x0", "K=0: at least one facility is required");
    if (stages.empty()) throw InstanceError("/stages", "T=0: at least one stage is required");
    for (std::size_t t = 0; t < stages.size(); ++t) {
        if (stages[t].empty()) throw InstanceError("/stages/" + std::to_string(t), "empty stage");
        std::sort(stages[t].begin(), stages[t].end());
    }
    std::sort(initial.begin(), initial.end());
    return Instance{std::move(initial), std::move(stages)};
}

/// Facility positions per stage with the per-stage cost split.
struct Schedule {
    std::vector<Positions> positions;  // positions[t][k], t = 0 is stage 1
    std::vector<Rational> per_stage_moving;
    std::vector<Rational> per_stage_connection;

    Rational moving_cost() const {
        Rational s = 0;
        for (const auto& m : per_stage_moving) s += m;
        return s;
    }
    Rational connection_cost() const {
        Rational s = 0;
        for (const auto& c : per_stage_connection) s += c;
        return s;
    }
    Rational total() const { return moving_cost() + connection_cost(); }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

inline Rational moving_between(const Positions& from, const Positions& to) {
    Rational s = 0;
    for (std::size_t k = 0; k < from.size(); ++k) s += abs_diff(to[k], from[k]);
    return s;
}

inline Rational connection_at(const Positions& agents, const Positions& facilities) {
    Rational s = 0;
    for (const auto& a : agents) {
        Rational best = abs_diff(a, facilities.front());
        for (std::size_t k = 1; k < facilities.size(); ++k) {
            Rational d = abs_diff(a, facilities[k]);
            if (d < best) best = std::move(d);
        }
        s += best;
    }
    return s;
}

namespace detail {

inline void check_dimensions(const Instance& instance, const std::vector<Positions>& positions) {
    if (positions.size() != instance.stage_count())
        throw InstanceError("/positions", "schedule has " + std::to_string(positions.size()) +
                                              " stages, instance has " + std::to_string(instance.stage_count()));
    for (std::size_t t = 0; t < positions.size(); ++t)
        if (positions[t].size() != instance.facility_count())
            throw InstanceError("/positions/" + std::to_string(t),
                                "expected " + std::to_string(instance.facility_count()) + " facility positions, got " +
                                    std::to_string(positions[t].size()));
}

}  // namespace detail

/// Builds a Schedule from raw positions, filling in the exact per-stage costs.
inline Schedule evaluate_schedule(const Instance& instance, std::vector<Positions> positions) {
    detail::check_dimensions(instance, positions);
    Schedule s;
    s.per_stage_moving.reserve(positions.size());
    s.per_stage_connection.reserve(positions.size());
    const Positions* previous = &instance.initial_positions;
    for (std::size_t t = 0; t < positions.size(); ++t) {
        s.per_stage_moving.push_back(moving_between(*previous, positions[t]));
        s.per_stage_connection.push_back(connection_at(instance.stages[t], positions[t]));
        previous = &positions[t];
    }
    s.positions = std::move(positions);
    return s;
}

/// Cost of the schedule's positions, recomputed from scratch (stored per-stage values are ignored).
inline Rational total_cost(const Instance& instance, const Schedule& schedule) {
    return evaluate_schedule(instance, schedule.positions).total();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Rational coordinate_from_json(const nlohmann::json& value, const std::string& path) {
    try {
        if (value.is_number_integer()) {
            if (value.is_number_unsigned()) return Rational(std::to_string(value.get<std::uint64_t>()));
            return Rational(std::to_string(value.get<std::int64_t>()));
        }
        if (value.is_number_float()) return rational_from_double(value.get<double>());
        if (value.is_string()) return parse_rational(value.get<std::string>());
    } catch (const NumberFormatError& e) {
        throw InstanceError(path, std::string("non-numeric coordinate (") + e.what() + ")");
    }
    throw InstanceError(path, "non-numeric coordinate");
}

inline Positions coordinates_from_json(const nlohmann::json& array, const std::string& path) {
    if (!array.is_array()) throw InstanceError(path, "malformed document: expected an array of coordinates");
    Positions out;
    out.reserve(array.size());
    for (std::size_t i = 0; i < array.size(); ++i)
        out.push_back(coordinate_from_json(array[i], path + "/" + std::to_string(i)));
    return out;
}

}  // namespace detail

/// Integers become JSON numbers, everything else an exact string.
inline nlohmann::json coordinate_to_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return nlohmann::json(r.get_num().get_si());
    return nlohmann::json(to_display_string(r));
}

inline nlohmann::json coordinates_to_json(const Positions& ps) {
    auto out = nlohmann::json::array();
    for (const auto& p : ps) out.push_back(coordinate_to_json(p));
    return out;
}

inline Instance instance_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InstanceError("", "malformed document: expected an object with 'x0' and 'stages'");
    if (!doc.contains("x0")) throw InstanceError("/x0", "malformed document: missing field");
    if (!doc.contains("stages")) throw InstanceError("/stages", "malformed document: missing field");
    Positions x0 = detail::coordinates_from_json(doc.at("x0"), "/x0");
    const auto& stages_json = doc.at("stages");
    if (!stages_json.is_array()) throw InstanceError("/stages", "malformed document: expected an array of stages");
    std::vector<Positions> stages;
    stages.reserve(stages_json.size());
    for (std::size_t t = 0; t < stages_json.size(); ++t)
        stages.push_back(detail::coordinates_from_json(stages_json[t], "/stages/" + std::to_string(t)));
    return make_instance(std::move(x0), std::move(stages));
}

inline Instance parse_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InstanceError("", std::string("malformed document: ") + e.what());
    }
    return instance_from_json(doc);
}

inline nlohmann::json instance_to_json(const Instance& instance) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : instance.stages) stages.push_back(coordinates_to_json(s));
    return {{"x0", coordinates_to_json(instance.initial_positions)}, {"stages", std::move(stages)}};
}

inline nlohmann::json exact_value_json(const Rational& r) {
    return {{"exact", to_exact_string(r)}, {"float", to_double(r)}};
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
    nlohmann::json positions = nlohmann::json::array();
    for (const auto& p : s.positions) positions.push_back(coordinates_to_json(p));
    nlohmann::json moving = nlohmann::json::array();
    for (const auto& m : s.per_stage_moving) moving.push_back(to_exact_string(m));
    nlohmann::json connection = nlohmann::json::array();
    for (const auto& c : s.per_stage_connection) connection.push_back(to_exact_string(c));
    return {{"positions", std::move(positions)},
            {"moving", std::move(moving)},
            {"connection", std::move(connection)},
            {"total", exact_value_json(s.total())}};
}

/// Reads the "positions" of a schedule document and re-evaluates its costs against `instance`.
inline Schedule schedule_from_json(const Instance& instance, const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("positions"))
        throw InstanceError("/positions", "malformed document: missing field");
    const auto& ps = doc.at("positions");
    if (!ps.is_array()) throw InstanceError("/positions", "malformed document: expected an array");
    std::vector<Positions> positions;
    for (std::size_t t = 0; t < ps.size(); ++t)
        positions.push_back(detail::coordinates_from_json(ps[t], "/positions/" + std::to_string(t)));
    return evaluate_schedule(instance, std::move(positions));
}

}  // namespace kfr
