#include "causalav/variable.hpp"

namespace causalav {

std::string_view to_string(VariableKind k) {
    switch (k) {
    case VariableKind::plain: return "plain";
    case VariableKind::pts: return "pts";
    case VariableKind::tssp: return "tssp";
    case VariableKind::tssq: return "tssq";
    case VariableKind::tctd: return "tctd";
    case VariableKind::time_conditional: return "time_conditional";
    case VariableKind::buffer: return "buffer";
    case VariableKind::union_set: return "union";
    case VariableKind::socket: return "socket";
    case VariableKind::hidden_exogenous: return "exogenous";
    }
    return "?";
}

bool is_exogenous(VariableKind k) {
    return k == VariableKind::socket || k == VariableKind::hidden_exogenous;
}

namespace {
Variable base(VariableId id, VariableKind kind, ValueType out) {
    Variable v;
    v.id = id;
    v.display_name = std::string(id.name());
    v.kind = kind;
    v.output = out;
    return v;
}
} // namespace

Variable plain_variable(VariableId id, std::vector<VariableId> parents, EquationRef eq, ValueType out) {
    Variable v = base(id, VariableKind::plain, out);
    v.parents = std::move(parents);
    v.equation = std::move(eq);
    return v;
}

Variable pts_variable(VariableId id, VariableId parent, ValueType out) {
    Variable v = base(id, VariableKind::pts, out);
    v.parents = {parent};
    return v;
}

Variable tssp_variable(VariableId id, VariableId parent, ValueType out) {
    Variable v = base(id, VariableKind::tssp, out);
    v.parents = {parent};
    return v;
}

Variable tssq_variable(VariableId id, VariableId parent, ValueType out) {
    Variable v = base(id, VariableKind::tssq, out);
    v.parents = {parent};
    return v;
}

Variable tctd_variable(VariableId id, VariableId parent) {
    Variable v = base(id, VariableKind::tctd, vt::scalar(units::second));
    v.parents = {parent};
    return v;
}

Variable time_conditional_variable(VariableId id, VariableId before, VariableId from, double theta,
                                   ValueType out) {
    Variable v = base(id, VariableKind::time_conditional, out);
    v.parents = {before, from};
    v.theta = theta;
    return v;
}

Variable buffer_variable(VariableId id, VariableId parent, ValueType out) {
    Variable v = base(id, VariableKind::buffer, out);
    v.parents = {parent};
    return v;
}

Variable union_variable(VariableId id, VariableId first, VariableId second) {
    Variable v = base(id, VariableKind::union_set, vt::source_set);
    v.parents = {first, second};
    return v;
}

Variable socket_variable(VariableId id, Distribution dist, ValueType out) {
    Variable v = base(id, VariableKind::socket, out);
    v.distribution = std::move(dist);
    return v;
}

Variable exogenous_variable(VariableId id, Distribution dist, ValueType out) {
    Variable v = base(id, VariableKind::hidden_exogenous, out);
    v.distribution = std::move(dist);
    return v;
}

Variable constant_variable(VariableId id, Value value, ValueType out) {
    return plain_variable(id, {}, constant_equation(std::move(value)), out);
}

} // namespace causalav
