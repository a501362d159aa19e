#include "causalav/scm.hpp"

#include <algorithm>
#include <cmath>

namespace causalav {

std::string ValidationReport::to_string() const {
    if (ok()) return "valid";
    std::string out;
    for (const auto& i : issues) {
        out += std::string(i.node.name());
        out += ": ";
        out += i.message;
        out += "\n";
    }
    return out;
}

Scm& Scm::add(Variable v) {
    if (index_.count(v.id))
        throw GraphError("duplicate variable id '" + std::string(v.id.name()) + "'");
    index_.emplace(v.id, nodes_.size());
    nodes_.push_back(std::move(v));
    invalidate();
    return *this;
}

Scm& Scm::seed_initial(VariableId buffer_var, Value v) {
    const Variable& n = at(buffer_var);
    if (n.kind != VariableKind::buffer)
        throw GraphError("initial values seed buffer variables; '" + std::string(buffer_var.name()) +
                         "' is " + std::string(to_string(n.kind)));
    seeds_.emplace_back(buffer_var, std::move(v));
    return *this;
}

const Variable& Scm::at(VariableId id) const {
    if (const Variable* v = find(id)) return *v;
    throw GraphError("unknown variable '" + std::string(id.name()) + "'");
}

const Variable* Scm::find(VariableId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

Variable& Scm::at_mut(VariableId id) {
    auto it = index_.find(id);
    if (it == index_.end()) throw GraphError("unknown variable '" + std::string(id.name()) + "'");
    invalidate();
    return nodes_[it->second];
}

std::size_t Scm::edge_count() const {
    std::size_t n = 0;
    for (const auto& v : nodes_) n += v.parents.size();
    return n;
}

std::vector<VariableId> Scm::ids_of(VariableKind kind) const {
    std::vector<VariableId> out;
    for (const auto& v : nodes_)
        if (v.kind == kind) out.push_back(v.id);
    return out;
}

std::vector<VariableId> Scm::unbound_sockets() const {
    std::vector<VariableId> out;
    for (const auto& v : nodes_)
        if (v.kind == VariableKind::socket && v.parents.empty()) out.push_back(v.id);
    return out;
}

namespace {

bool types_agree(const ValueType& a, const ValueType& b) {
    if (a.tag == ValueTag::any || b.tag == ValueTag::any) return true;
    return a == b;
}

} // namespace

ValidationReport Scm::validate() const {
    ValidationReport report;
    auto issue = [&](VariableId id, std::string msg) {
        report.issues.push_back({id, std::move(msg)});
    };

    auto compiled = std::make_shared<Compiled>();
    compiled->parents.resize(nodes_.size());

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Variable& n = nodes_[i];
        auto& slots = compiled->parents[i];
        bool dangling = false;
        for (const auto& p : n.parents) {
            auto it = index_.find(p);
            if (it == index_.end()) {
                issue(n.id, "dangling parent reference '" + std::string(p.name()) + "'");
                dangling = true;
                continue;
            }
            slots.push_back(static_cast<std::int32_t>(it->second));
        }
        if (dangling) continue;

        const auto np = n.parents.size();
        auto parent_out = [&](std::size_t k) { return nodes_[slots[k]].output; };

        switch (n.kind) {
        case VariableKind::plain:
            if (!n.equation) {
                issue(n.id, "plain variable without an equation");
            } else if (n.equation->arity() >= 0 &&
                       static_cast<std::size_t>(n.equation->arity()) != np) {
                issue(n.id, "parents (" + std::to_string(np) + ") do not match equation arity (" +
                                std::to_string(n.equation->arity()) + ")");
            }
            break;
        case VariableKind::pts:
        case VariableKind::buffer:
            if (np != 1) {
                issue(n.id, std::string(to_string(n.kind)) + " variable needs exactly one parent, has " +
                                std::to_string(np));
            } else if (!types_agree(n.output, parent_out(0))) {
                issue(n.id, "output type differs from parent's");
            }
            break;
        case VariableKind::tssp:
        case VariableKind::tssq:
            if (np != 1) {
                issue(n.id, std::string(to_string(n.kind)) + " variable needs exactly one parent");
            } else if (parent_out(0).tag != ValueTag::any && n.output.tag != ValueTag::any) {
                const ValueType p = parent_out(0);
                const Unit want = n.kind == VariableKind::tssp ? p.unit * units::second
                                                               : p.unit / units::second;
                if (p.tag != n.output.tag || !(n.output.unit == want))
                    issue(n.id, "unit must be parent's " +
                                    std::string(n.kind == VariableKind::tssp ? "× s" : "÷ s"));
            }
            break;
        case VariableKind::tctd:
            if (np != 1)
                issue(n.id, "tctd variable needs exactly one parent");
            else if (parent_out(0).tag != ValueTag::any && parent_out(0).tag != ValueTag::time)
                issue(n.id, "tctd parent must carry a time");
            break;
        case VariableKind::time_conditional:
            if (np != 2)
                issue(n.id, "time-conditional variable needs exactly two ordered parents, has " +
                                std::to_string(np));
            else if (!types_agree(parent_out(0), parent_out(1)))
                issue(n.id, "time-conditional parents must share one output type");
            if (std::isnan(n.theta)) issue(n.id, "time-conditional threshold unset");
            break;
        case VariableKind::union_set:
            if (np != 2) issue(n.id, "union variable needs exactly two parents");
            break;
        case VariableKind::socket:
            if (np > 1)
                issue(n.id, "socket with " + std::to_string(np) + " parents (maximum of one)");
            else if (np == 1 && !types_agree(n.output, parent_out(0)))
                issue(n.id, "bound provider's output type differs from socket's");
            break;
        case VariableKind::hidden_exogenous:
            if (np != 0) issue(n.id, "hidden exogenous variable cannot have parents");
            break;
        }

    }

    // Cycles must pass through a PTS variable: with PTS nodes removed, the
    // remaining graph has to be acyclic. Any strongly connected component
    // that still contains a cycle is reported whole.
    if (report.ok()) {
        const std::size_t n = nodes_.size();
        std::vector<int> color(n, 0); // 0 white, 1 on stack, 2 done
        std::vector<std::size_t> path;
        // Iterative DFS with an explicit stack of (node, next-parent-slot).
        for (std::size_t root = 0; root < n; ++root) {
            if (color[root] != 0 || nodes_[root].kind == VariableKind::pts) continue;
            std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
            color[root] = 1;
            path.push_back(root);
            while (!stack.empty()) {
                auto& [v, slot] = stack.back();
                const auto& ps = compiled->parents[v];
                if (slot < ps.size()) {
                    const auto w = static_cast<std::size_t>(ps[slot++]);
                    if (nodes_[w].kind == VariableKind::pts) continue;
                    if (color[w] == 1) {
                        auto it = std::find(path.begin(), path.end(), w);
                        std::string cyc;
                        for (; it != path.end(); ++it) {
                            if (!cyc.empty()) cyc += " -> ";
                            cyc += nodes_[*it].id.name();
                        }
                        issue(nodes_[w].id, "cycle without a PTS variable: " + cyc);
                        color[w] = 2; // avoid re-reporting the same loop
                    } else if (color[w] == 0) {
                        color[w] = 1;
                        path.push_back(w);
                        stack.emplace_back(w, 0);
                    }
                } else {
                    color[v] = 2;
                    path.pop_back();
                    stack.pop_back();
                }
            }
        }
    }

    if (report.ok()) compiled_ = std::move(compiled);
    return report;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Value sample_exogenous(EvaluationContext& ctx, const Variable& var) {
    if (!is_exogenous(var.kind))
        throw EvalError("'" + std::string(var.id.name()) + "' is not exogenous");
    if (const Value* hit = ctx.cached_exogenous(var.id, ctx.step())) return *hit;
    Value v = var.distribution.sample(ctx.draw_seed(var.id, ctx.step()));
    ctx.cache_exogenous(var.id, ctx.step(), v);
    return v;
}

namespace {

Value scale_by_seconds(const Value& v, double dt, bool multiply, VariableId at) {
    const double k = multiply ? dt : 1.0 / dt;
    if (v.tag() == ValueTag::scalar) {
        const auto& s = v.as_scalar();
        const Unit u = multiply ? s.unit * units::second : s.unit / units::second;
        return Value::scalar(s.value * k, u);
    }
    if (v.tag() == ValueTag::vector2) {
        const auto& s = v.as_vector2();
        const Unit u = multiply ? s.unit * units::second : s.unit / units::second;
        return Value::vector2(s.v * k, u);
    }
    throw EvalError("'" + std::string(at.name()) + "': time-step scaling needs a scalar or vector2, got " +
                    std::string(to_string(v.tag())));
}

} // namespace

struct Evaluator {
    const Scm& scm;
    EvaluationContext& ctx;
    const Scm::Compiled& g;

    std::int64_t theta_step(const Variable& n) const {
        const double raw = n.theta / ctx.step_size();
        const double snapped = std::round(raw);
        if (std::abs(raw - snapped) > 1e-6)
            throw EvalError("'" + std::string(n.id.name()) + "': threshold " + std::to_string(n.theta) +
                            " s is off the time grid");
        return static_cast<std::int64_t>(snapped);
    }

    void check_output(const Variable& n, const Value& v) const {
        if (n.output.tag == ValueTag::any) return;
        if (v.tag() != n.output.tag)
            throw EvalError("'" + std::string(n.id.name()) + "' produced " +
                            std::string(to_string(v.tag())) + ", declared " +
                            std::string(to_string(n.output.tag)));
        if (v.tag() == ValueTag::scalar && !(v.as_scalar().unit == n.output.unit))
            throw EvalError("'" + std::string(n.id.name()) + "' unit mismatch: produced " +
                            to_string(v.as_scalar().unit) + ", declared " + to_string(n.output.unit));
        if (v.tag() == ValueTag::vector2 && !(v.as_vector2().unit == n.output.unit))
            throw EvalError("'" + std::string(n.id.name()) + "' unit mismatch: produced " +
                            to_string(v.as_vector2().unit) + ", declared " + to_string(n.output.unit));
    }

    Value eval(std::size_t i) {
        const Variable& n = scm.nodes_[i];
        // Buffer hits (including t = 0 seeds) short-circuit everything else.
        if (n.kind == VariableKind::buffer)
            if (const Value* hit = ctx.buffers().find(n.id, ctx.step())) return *hit;

        if (ctx.step() < 0)
            throw EvalError("recursion below the initial time: '" + std::string(n.id.name()) +
                            "' requested at step " + std::to_string(ctx.step()) +
                            " with no seeded initial value");

        const auto& slots = g.parents[i];
        switch (n.kind) {
        case VariableKind::plain: {
            std::vector<Value> args;
            args.reserve(slots.size());
            for (const auto s : slots) args.push_back(eval(static_cast<std::size_t>(s)));
            const EquationScope scope{ctx.current_time(), ctx.step_size(), &ctx, &scm};
            Value out = n.equation->apply(args, scope);
            check_output(n, out);
            return out;
        }
        case VariableKind::pts: {
            EvaluationContext::TimeShift shift(ctx, -1);
            return eval(static_cast<std::size_t>(slots[0]));
        }
        case VariableKind::tssp:
            return scale_by_seconds(eval(static_cast<std::size_t>(slots[0])), ctx.step_size(), true, n.id);
        case VariableKind::tssq:
            return scale_by_seconds(eval(static_cast<std::size_t>(slots[0])), ctx.step_size(), false, n.id);
        case VariableKind::tctd: {
            const Value p = eval(static_cast<std::size_t>(slots[0]));
            return Value::scalar(p.as_time().seconds - ctx.current_time(), units::second);
        }
        case VariableKind::time_conditional:
            return ctx.step() < theta_step(n) ? eval(static_cast<std::size_t>(slots[0]))
                                              : eval(static_cast<std::size_t>(slots[1]));
        case VariableKind::buffer: {
            Value v = eval(static_cast<std::size_t>(slots[0]));
            ctx.buffers().commit(n.id, ctx.step(), v);
            return v;
        }
        case VariableKind::union_set: {
            const Value a = eval(static_cast<std::size_t>(slots[0]));
            const Value b = eval(static_cast<std::size_t>(slots[1]));
            auto as_set = [](const Value& v) {
                if (v.is_empty()) return SourceSet{};
                return v.as_source_set();
            };
            return Value(SourceSet::merged(as_set(a), as_set(b)));
        }
        case VariableKind::socket:
            if (slots.empty()) return sample_exogenous(ctx, n);
            return eval(static_cast<std::size_t>(slots[0]));
        case VariableKind::hidden_exogenous: return sample_exogenous(ctx, n);
        }
        throw EvalError("unreachable variable kind");
    }
};

Value Scm::evaluate(VariableId target, EvaluationContext& ctx) const {
    if (!compiled_) throw EvalError("SCM must pass validate() before evaluation");
    auto it = index_.find(target);
    if (it == index_.end()) throw GraphError("unknown variable '" + std::string(target.name()) + "'");
    Evaluator ev{*this, ctx, *compiled_};
    return ev.eval(it->second);
}

void Scm::apply_seeds(EvaluationContext& ctx) const {
    for (const auto& [id, v] : seeds_) ctx.buffers().commit(id, 0, v);
}

Scm Scm::intervene(VariableId target, Value forced) const {
    const Variable& n = at(target);
    if (is_exogenous(n.kind))
        throw GraphError("cannot intervene on exogenous variable '" + std::string(target.name()) +
                         "'; reconfigure sockets via the composition API");
    Scm out = *this;
    Variable& t = out.at_mut(target);
    t.kind = VariableKind::plain;
    t.parents.clear();
    t.equation = constant_equation(std::move(forced));
    t.theta = std::nan("");
    return out;
}

void Scm::bind_socket(VariableId socket, VariableId provider) {
    Variable& s = at_mut(socket);
    if (s.kind != VariableKind::socket)
        throw GraphError("'" + std::string(socket.name()) + "' is not a socket");
    if (!s.parents.empty())
        throw GraphError("socket '" + std::string(socket.name()) + "' is already bound");
    if (!contains(provider))
        throw GraphError("unknown provider '" + std::string(provider.name()) + "'");
    s.parents = {provider};
}

void Scm::unbind_socket(VariableId socket) {
    Variable& s = at_mut(socket);
    if (s.kind != VariableKind::socket)
        throw GraphError("'" + std::string(socket.name()) + "' is not a socket");
    if (s.parents.empty())
        throw GraphError("socket '" + std::string(socket.name()) + "' is not bound");
    s.parents.clear();
}

void Scm::rewire_parent(VariableId node, std::size_t slot, VariableId new_parent) {
    Variable& n = at_mut(node);
    if (slot >= n.parents.size())
        throw GraphError("'" + std::string(node.name()) + "' has no parent slot " + std::to_string(slot));
    n.parents[slot] = new_parent;
}

void Scm::set_theta(VariableId node, double theta_seconds) {
    Variable& n = at_mut(node);
    if (n.kind != VariableKind::time_conditional)
        throw GraphError("'" + std::string(node.name()) + "' is not time-conditional");
    n.theta = theta_seconds;
}

double Scm::theta_of(VariableId node) const {
    const Variable& n = at(node);
    if (n.kind != VariableKind::time_conditional)
        throw GraphError("'" + std::string(node.name()) + "' is not time-conditional");
    return n.theta;
}

} // namespace causalav
