#include "causalav/rollout.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "causalav/distribution.hpp"

namespace causalav {

namespace {

std::int64_t theta_step_of(const Variable& n, double dt) {
    const double raw = n.theta / dt;
    const double snapped = std::round(raw);
    if (std::abs(raw - snapped) > 1e-6)
        throw EvalError("'" + std::string(n.id.name()) + "': threshold off the time grid");
    return static_cast<std::int64_t>(snapped);
}

} // namespace

WindowRollout::WindowRollout(const Scm& scm, std::int64_t horizon_steps)
    : scm_(scm), horizon_(horizon_steps) {
    if (horizon_steps < 0) throw GraphError("roll-out horizon must be non-negative");
    if (!scm.validated()) throw GraphError("roll-out requires a validated SCM");
    for (std::size_t i = 0; i < scm.variables().size(); ++i) index_.emplace(scm.variables()[i].id, i);
}

std::size_t WindowRollout::replica_count() const {
    return static_cast<std::size_t>(horizon_ + 1) * scm_.node_count();
}

std::vector<RolloutEdge> WindowRollout::edges() const {
    std::vector<RolloutEdge> out;
    for (std::int64_t step = 0; step <= horizon_; ++step) {
        for (const auto& v : scm_.variables()) {
            const int lag = v.kind == VariableKind::pts ? 1 : 0;
            for (const auto& p : v.parents) {
                if (step - lag < 0) continue; // edge leaves the window
                out.push_back(RolloutEdge{p, v.id, step, lag});
            }
        }
    }
    return out;
}

std::optional<Value> WindowRollout::value_at(VariableId var, std::int64_t step, double step_size,
                                             std::uint64_t rng_seed) const {
    if (memo_.empty() || dt_ != step_size || seed_ != rng_seed) {
        dt_ = step_size;
        seed_ = rng_seed;
        memo_.assign(scm_.node_count(), {});
        for (auto& row : memo_) row.assign(static_cast<std::size_t>(horizon_) + 1, std::nullopt);
    }
    auto it = index_.find(var);
    if (it == index_.end()) throw GraphError("unknown variable '" + std::string(var.name()) + "'");
    if (step < 0 || step > horizon_) throw GraphError("step outside the roll-out window");
    return eval_cell(it->second, step);
}

std::optional<Value> WindowRollout::eval_cell(std::size_t var_index, std::int64_t step) const {
    const Variable& n = scm_.variables()[var_index];

    if (step >= 0 && step <= horizon_) {
        auto& cell = memo_[var_index][static_cast<std::size_t>(step)];
        if (cell.has_value()) return *cell;
    }

    auto compute = [&]() -> std::optional<Value> {
        // A seeded buffer replica is defined even where everything else
        // falls off the front of the window.
        if (n.kind == VariableKind::buffer && step == 0) {
            for (const auto& [id, seed_value] : scm_.initial_values())
                if (id == n.id) return seed_value;
        }
        if (step < 0) return std::nullopt;

        auto parent_index = [&](std::size_t slot) -> std::size_t {
            auto it = index_.find(n.parents[slot]);
            if (it == index_.end()) throw GraphError("dangling parent in roll-out");
            return it->second;
        };

        switch (n.kind) {
        case VariableKind::plain: {
            std::vector<Value> args;
            args.reserve(n.parents.size());
            for (std::size_t s = 0; s < n.parents.size(); ++s) {
                auto a = eval_cell(parent_index(s), step);
                if (!a) return std::nullopt;
                args.push_back(std::move(*a));
            }
            const EquationScope scope{static_cast<double>(step) * dt_, dt_, nullptr, &scm_};
            return n.equation->apply(args, scope);
        }
        case VariableKind::pts: return eval_cell(parent_index(0), step - 1);
        case VariableKind::tssp:
        case VariableKind::tssq: {
            auto p = eval_cell(parent_index(0), step);
            if (!p) return std::nullopt;
            const bool mul = n.kind == VariableKind::tssp;
            const double k = mul ? dt_ : 1.0 / dt_;
            if (p->tag() == ValueTag::scalar) {
                const auto& s = p->as_scalar();
                return Value::scalar(s.value * k,
                                     mul ? s.unit * units::second : s.unit / units::second);
            }
            const auto& s = p->as_vector2();
            return Value::vector2(s.v * k, mul ? s.unit * units::second : s.unit / units::second);
        }
        case VariableKind::tctd: {
            auto p = eval_cell(parent_index(0), step);
            if (!p) return std::nullopt;
            return Value::scalar(p->as_time().seconds - static_cast<double>(step) * dt_, units::second);
        }
        case VariableKind::time_conditional:
            return step < theta_step_of(n, dt_) ? eval_cell(parent_index(0), step)
                                                : eval_cell(parent_index(1), step);
        case VariableKind::buffer: return eval_cell(parent_index(0), step);
        case VariableKind::union_set: {
            auto a = eval_cell(parent_index(0), step);
            auto b = eval_cell(parent_index(1), step);
            if (!a || !b) return std::nullopt;
            auto as_set = [](const Value& v) {
                return v.is_empty() ? SourceSet{} : v.as_source_set();
            };
            return Value(SourceSet::merged(as_set(*a), as_set(*b)));
        }
        case VariableKind::socket:
            if (!n.parents.empty()) return eval_cell(parent_index(0), step);
            [[fallthrough]];
        case VariableKind::hidden_exogenous: {
            const auto stream = fnv1a64(fnv1a64(seed_, n.id.name()), static_cast<std::uint64_t>(step));
            return n.distribution.sample(stream);
        }
        }
        return std::nullopt;
    };

    std::optional<Value> result = compute();
    if (step >= 0 && step <= horizon_)
        memo_[var_index][static_cast<std::size_t>(step)] = result;
    return result;
}

EquivalenceReport check_rollout_equivalence(const Scm& scm, std::int64_t horizon_steps,
                                            double step_size, std::uint64_t rng_seed,
                                            double tolerance) {
    if (!scm.validated()) throw GraphError("equivalence check requires a validated SCM");
    WindowRollout oracle(scm, horizon_steps);

    EvaluationContext ctx(step_size, rng_seed);
    scm.apply_seeds(ctx);

    EquivalenceReport report;
    for (std::int64_t step = 0; step <= horizon_steps; ++step) {
        ctx.set_step(step);
        for (const auto& v : scm.variables()) {
            std::optional<Value> engine;
            std::string engine_err;
            try {
                engine = scm.evaluate(v.id, ctx);
            } catch (const EvalError& e) {
                engine_err = e.what();
            }
            const std::optional<Value> expected = oracle.value_at(v.id, step, step_size, rng_seed);

            double err = 0.0;
            if (engine.has_value() != expected.has_value()) {
                report.definedness_agrees = false;
                err = std::numeric_limits<double>::infinity();
            } else if (engine && expected) {
                err = Value::abs_difference(*engine, *expected);
            }
            report.max_abs_error = std::max(report.max_abs_error, err);
            if (err > tolerance) {
                report.entries.push_back(
                    {v.id, step, engine ? engine->to_string() : "undefined: " + engine_err,
                     expected ? expected->to_string() : "undefined", err});
            }
        }
    }
    return report;
}

std::string EquivalenceReport::to_json() const {
    nlohmann::json j;
    if (std::isinf(max_abs_error))
        j["max_abs_error"] = "inf";
    else
        j["max_abs_error"] = max_abs_error;
    j["definedness_agrees"] = definedness_agrees;
    j["per_variable"] = nlohmann::json::array();
    for (const auto& e : entries) {
        j["per_variable"].push_back({{"id", std::string(e.id.name())},
                                     {"step", e.step},
                                     {"engine_value", e.engine_value},
                                     {"oracle_value", e.oracle_value}});
    }
    return j.dump(2);
}

} // namespace causalav
