#include "causalav/context.hpp"

#include <algorithm>
#include <cmath>

#include "causalav/distribution.hpp"

namespace causalav {

const Value* BufferStore::find(VariableId var, std::int64_t step) const {
    auto it = map_.find(TimeKey{var, step});
    return it == map_.end() ? nullptr : &it->second;
}

void BufferStore::commit(VariableId var, std::int64_t step, Value v) {
    auto [it, inserted] = map_.emplace(TimeKey{var, step}, std::move(v));
    if (!inserted)
        throw EvalError("write-once violation: buffer entry (" + std::string(var.name()) + ", step " +
                        std::to_string(step) + ") already committed");
}

std::vector<std::pair<TimeKey, Value>> BufferStore::snapshot() const {
    std::vector<std::pair<TimeKey, Value>> out(map_.begin(), map_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const auto c = a.first.var.name().compare(b.first.var.name());
        if (c != 0) return c < 0;
        return a.first.step < b.first.step;
    });
    return out;
}

EvaluationContext::EvaluationContext(double step_size, std::uint64_t rng_seed, double start_time)
    : dt_(step_size), seed_(rng_seed) {
    if (!(step_size > 0.0)) throw EvalError("step size must be positive");
    step_ = to_step(start_time);
}

void EvaluationContext::set_time(double seconds) { step_ = to_step(seconds); }

std::int64_t EvaluationContext::to_step(double seconds) const {
    const double raw = seconds / dt_;
    const double snapped = std::round(raw);
    if (std::abs(raw - snapped) > 1e-6)
        throw EvalError("time " + std::to_string(seconds) + " s is off the " + std::to_string(dt_) +
                        " s grid");
    return static_cast<std::int64_t>(snapped);
}

const Value* EvaluationContext::cached_exogenous(VariableId var, std::int64_t step) const {
    auto it = exo_cache_.find(TimeKey{var, step});
    return it == exo_cache_.end() ? nullptr : &it->second;
}

void EvaluationContext::cache_exogenous(VariableId var, std::int64_t step, Value v) {
    exo_cache_.insert_or_assign(TimeKey{var, step}, std::move(v));
}

std::uint64_t EvaluationContext::draw_seed(VariableId var, std::int64_t step) const {
    return fnv1a64(fnv1a64(seed_, var.name()), static_cast<std::uint64_t>(step));
}

} // namespace causalav
