#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "causalav/errors.hpp"
#include "causalav/value.hpp"
#include "causalav/variable_id.hpp"

namespace causalav {

/// Key for time-indexed per-variable storage. Times live on the grid
/// {k · step_size}, so the key holds the integer step, never a float.
struct TimeKey {
    VariableId var;
    std::int64_t step = 0;
    bool operator==(const TimeKey&) const = default;
};

struct TimeKeyHash {
    std::size_t operator()(const TimeKey& k) const noexcept {
        std::uint64_t h = (static_cast<std::uint64_t>(k.var.sym()) << 32) ^
                          static_cast<std::uint64_t>(k.step + 0x7fffffff);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

/// Write-once dictionary behind buffer variables. A second commit to an
/// existing key is a logic error by construction and throws.
class BufferStore {
public:
    const Value* find(VariableId var, std::int64_t step) const;
    void commit(VariableId var, std::int64_t step, Value v);
    bool has(VariableId var, std::int64_t step) const { return find(var, step) != nullptr; }
    std::size_t size() const { return map_.size(); }

    /// Entries sorted by (variable name, step); deterministic across runs.
    std::vector<std::pair<TimeKey, Value>> snapshot() const;

private:
    std::unordered_map<TimeKey, Value, TimeKeyHash> map_;
};

/// Per-evaluation mutable state: the time meta-variables, the buffer store,
/// and the exogenous sample cache. One context is owned by one evaluation
/// thread; SCMs themselves stay immutable and shareable.
class EvaluationContext {
public:
    EvaluationContext(double step_size, std::uint64_t rng_seed = 0, double start_time = 0.0);

    double step_size() const { return dt_; }
    std::int64_t step() const { return step_; }
    double current_time() const { return static_cast<double>(step_) * dt_; }
    std::uint64_t rng_seed() const { return seed_; }

    /// Moves C_T to `seconds`, which must lie on the grid.
    void set_time(double seconds);
    void set_step(std::int64_t step) { step_ = step; }

    /// Snaps a grid-aligned time to its step index; rejects off-grid input.
    std::int64_t to_step(double seconds) const;

    BufferStore& buffers() { return buffers_; }
    const BufferStore& buffers() const { return buffers_; }

    const Value* cached_exogenous(VariableId var, std::int64_t step) const;
    void cache_exogenous(VariableId var, std::int64_t step, Value v);

    /// Seed stream for drawing `var` at `step`; derived from the context
    /// seed, the variable name and the step, hence stable across contexts.
    std::uint64_t draw_seed(VariableId var, std::int64_t step) const;

    /// RAII shift of the current time by whole steps; restores on scope
    /// exit even when evaluation throws.
    class TimeShift {
    public:
        TimeShift(EvaluationContext& ctx, std::int64_t delta_steps) : ctx_(ctx), saved_(ctx.step_) {
            ctx_.step_ += delta_steps;
        }
        ~TimeShift() { ctx_.step_ = saved_; }
        TimeShift(const TimeShift&) = delete;
        TimeShift& operator=(const TimeShift&) = delete;

    private:
        EvaluationContext& ctx_;
        std::int64_t saved_;
    };

private:
    double dt_;
    std::int64_t step_ = 0;
    std::uint64_t seed_ = 0;
    BufferStore buffers_;
    std::unordered_map<TimeKey, Value, TimeKeyHash> exo_cache_;
};

} // namespace causalav
