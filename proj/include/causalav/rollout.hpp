#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalav/scm.hpp"

namespace causalav {

/// One replica edge of the unrolled graph; `lag` is 0 for same-step edges
/// and 1 for the cross-step edges PTS variables induce.
struct RolloutEdge {
    VariableId from; // parent
    VariableId to;
    std::int64_t step = 0; // step of `to`
    int lag = 0;
};

/// Explicit window-graph roll-out: every variable replicated once per step,
/// self-referential temporal structure flattened into an acyclic graph.
/// This is the reference semantics the recursive engine is checked against.
class WindowRollout {
public:
    WindowRollout(const Scm& scm, std::int64_t horizon_steps);

    std::int64_t horizon() const { return horizon_; }
    std::size_t replica_count() const; // (horizon + 1) × |variables|
    std::vector<RolloutEdge> edges() const;

    /// Evaluates a replica. Exogenous replicas draw with the same seed
    /// derivation the engine uses, so equal context seeds give equal draws.
    /// Returns nullopt when the replica is undefined (recursion below the
    /// initial time without a seed).
    std::optional<Value> value_at(VariableId var, std::int64_t step, double step_size,
                                  std::uint64_t rng_seed) const;

private:
    const Scm& scm_;
    std::int64_t horizon_;
    std::unordered_map<VariableId, std::size_t> index_;
    mutable std::vector<std::vector<std::optional<std::optional<Value>>>> memo_;
    mutable double dt_ = 0.0;
    mutable std::uint64_t seed_ = 0;

    std::optional<Value> eval_cell(std::size_t var_index, std::int64_t step) const;
};

struct EquivalenceEntry {
    VariableId id;
    std::int64_t step = 0;
    std::string engine_value;
    std::string oracle_value;
    double abs_error = 0.0;
};

struct EquivalenceReport {
    double max_abs_error = 0.0;
    bool definedness_agrees = true; // both sides undefined at the same cells
    std::vector<EquivalenceEntry> entries; // cells exceeding the tolerance
    std::string to_json() const;
    bool passed(double tolerance) const {
        return definedness_agrees && max_abs_error <= tolerance;
    }
};

/// Evaluates every variable at every step 0..horizon through both the
/// recursive engine and the explicit roll-out, reporting the maximum
/// absolute discrepancy. Entries above `tolerance` are listed.
EquivalenceReport check_rollout_equivalence(const Scm& scm, std::int64_t horizon_steps,
                                            double step_size, std::uint64_t rng_seed,
                                            double tolerance = 1e-12);

} // namespace causalav
