#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "causalav/distribution.hpp"
#include "causalav/equation.hpp"
#include "causalav/value.hpp"
#include "causalav/variable_id.hpp"

namespace causalav {

/// Node role inside the causal graph. The temporal kinds carry their own
/// evaluation semantics; `plain` nodes defer to their structural equation.
enum class VariableKind : std::uint8_t {
    plain,
    pts,              // previous-time-step: parent evaluated one step back
    tssp,             // multiply parent by the step size
    tssq,             // divide parent by the step size
    tctd,             // parent time minus current time
    time_conditional, // parent 0 before the threshold, parent 1 from it on
    buffer,           // write-once time-indexed cache of the parent
    union_set,        // union of two source sets (∅ acts as the empty set)
    socket,           // exogenous joining point, at most one bound parent
    hidden_exogenous, // ordinary exogenous variable behind the model wrapper
};

std::string_view to_string(VariableKind k);
bool is_exogenous(VariableKind k);

/// Declared output shape of a variable: runtime tag plus unit. `any`
/// disables static checking for that node (used by generic payloads).
struct ValueType {
    ValueTag tag = ValueTag::any;
    Unit unit{};
    bool operator==(const ValueType&) const = default;
};

namespace vt {
inline ValueType scalar(Unit u) { return {ValueTag::scalar, u}; }
inline ValueType vector2(Unit u) { return {ValueTag::vector2, u}; }
inline constexpr ValueType time{ValueTag::time, {}};
inline constexpr ValueType lane{ValueTag::lane, {}};
inline constexpr ValueType action{ValueTag::action, {}};
inline constexpr ValueType source_set{ValueTag::source_set, {}};
inline constexpr ValueType any{ValueTag::any, {}};
} // namespace vt

/// One node of an SCM: endogenous (plain or temporal), socket, or hidden
/// exogenous. Which fields are meaningful depends on `kind`.
struct Variable {
    VariableId id;
    std::string display_name; // defaults to id on insertion
    VariableKind kind = VariableKind::plain;
    std::vector<VariableId> parents;
    ValueType output;
    EquationRef equation;          // plain nodes
    double theta = std::nan("");   // time_conditional threshold, seconds on the grid
    Distribution distribution;     // socket and hidden_exogenous nodes

    bool operator==(const Variable& o) const {
        return id == o.id && display_name == o.display_name && kind == o.kind && parents == o.parents &&
               output == o.output && equation == o.equation &&
               (std::isnan(theta) ? std::isnan(o.theta) : theta == o.theta) &&
               distribution == o.distribution;
    }
};

/// Factories for the common node shapes.
Variable plain_variable(VariableId id, std::vector<VariableId> parents, EquationRef eq, ValueType out);
Variable pts_variable(VariableId id, VariableId parent, ValueType out);
Variable tssp_variable(VariableId id, VariableId parent, ValueType out);
Variable tssq_variable(VariableId id, VariableId parent, ValueType out);
Variable tctd_variable(VariableId id, VariableId parent);
Variable time_conditional_variable(VariableId id, VariableId before, VariableId from, double theta,
                                   ValueType out);
Variable buffer_variable(VariableId id, VariableId parent, ValueType out);
Variable union_variable(VariableId id, VariableId first, VariableId second);
Variable socket_variable(VariableId id, Distribution dist, ValueType out);
Variable exogenous_variable(VariableId id, Distribution dist, ValueType out);
Variable constant_variable(VariableId id, Value v, ValueType out);

} // namespace causalav
