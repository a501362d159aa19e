#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalav/context.hpp"
#include "causalav/variable.hpp"

namespace causalav {

struct ValidationIssue {
    VariableId node;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Provenance of one merge, kept so the merged model can be split back into
/// its constituents. Nested merges accumulate records; a record is
/// splittable while its id sets still cover the whole model.
struct MergeRecord {
    std::string key;
    std::string left_name, right_name;
    std::vector<VariableId> left_ids, right_ids;
    std::vector<std::pair<VariableId, VariableId>> bindings; // socket <- provider
};

/// A structural causal model: hidden exogenous variables, socket variables,
/// endogenous variables and their structural equations, plus the initial
/// buffer seeds that ground temporal recursion at t = 0.
///
/// Value semantics: copies are cheap-ish (nodes share equation objects) and
/// independent. A validated model is immutable during evaluation and may be
/// shared across threads; each evaluation thread owns its own context.
class Scm {
public:
    Scm() = default;
    explicit Scm(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    // -- construction -------------------------------------------------------

    /// Registers a variable. Duplicate ids throw; dangling parents are
    /// permitted here (same-batch additions) and reported by validate().
    Scm& add(Variable v);

    /// Registers an initial value for a buffer variable at t = 0. Applied
    /// to contexts via apply_seeds(); grounds every PTS-fed chain.
    Scm& seed_initial(VariableId buffer_var, Value v);

    // -- queries ------------------------------------------------------------

    bool contains(VariableId id) const { return index_.count(id) != 0; }
    const Variable& at(VariableId id) const;
    const Variable* find(VariableId id) const;
    const std::vector<Variable>& variables() const { return nodes_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const;

    std::vector<VariableId> ids_of(VariableKind kind) const;
    /// Sockets with no bound parent.
    std::vector<VariableId> unbound_sockets() const;
    const std::vector<std::pair<VariableId, Value>>& initial_values() const { return seeds_; }

    const std::vector<MergeRecord>& merge_records() const { return merges_; }

    // -- lifecycle ----------------------------------------------------------

    /// Structural checks: dangling parents, kind arities, socket constraints,
    /// the one-exogenous-parent rule, typed-edge agreement, and the
    /// cycles-only-through-PTS rule. On success the evaluation index is
    /// (re)built; evaluate() requires a passing validate() beforehand.
    ValidationReport validate() const;
    bool validated() const { return compiled_ != nullptr; }

    // -- operations ---------------------------------------------------------

    /// Structural-equation value of `target` at the context's current time.
    /// C_T is restored on return; buffer writes and exogenous draws persist
    /// in the context.
    Value evaluate(VariableId target, EvaluationContext& ctx) const;

    /// Copies the t = 0 seeds into a context's buffer store.
    void apply_seeds(EvaluationContext& ctx) const;

    /// do-operator: returns a copy in which `target` is the constant
    /// `forced` with all parent edges severed. Only endogenous variables may
    /// be intervened on; sockets are reconfigured via the composition API.
    Scm intervene(VariableId target, Value forced) const;

    // -- advanced mutators (composition and builders) -----------------------

    void bind_socket(VariableId socket, VariableId provider);
    void unbind_socket(VariableId socket);
    /// Replaces parent slot `slot` of `node`.
    void rewire_parent(VariableId node, std::size_t slot, VariableId new_parent);
    void set_theta(VariableId time_conditional_node, double theta_seconds);
    double theta_of(VariableId time_conditional_node) const;
    void add_merge_record(MergeRecord rec) { merges_.push_back(std::move(rec)); }

    bool operator==(const Scm& o) const {
        return name_ == o.name_ && nodes_ == o.nodes_ && seeds_ == o.seeds_;
    }

private:
    friend struct Evaluator;
    friend Value sample_exogenous(EvaluationContext& ctx, const Variable& var);

    Variable& at_mut(VariableId id);
    void invalidate() { compiled_ = nullptr; }

    struct Compiled {
        // Parent indices per node, positional: valid for any copy of the
        // node vector with identical layout.
        std::vector<std::vector<std::int32_t>> parents;
    };

    std::string name_;
    std::vector<Variable> nodes_; // insertion order, the deterministic order
    std::unordered_map<VariableId, std::size_t> index_;
    std::vector<std::pair<VariableId, Value>> seeds_;
    std::vector<MergeRecord> merges_;
    mutable std::shared_ptr<const Compiled> compiled_;
};

/// Cached draw from an exogenous variable's distribution: memoized per
/// (variable, time) in the context, seeded from (context seed, variable
/// name, step). The memoization doubles as the abduction step that keeps
/// counterfactual branches consistent on shared history.
Value sample_exogenous(EvaluationContext& ctx, const Variable& var);

} // namespace causalav
