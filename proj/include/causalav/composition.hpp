#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causalav/scm.hpp"

namespace causalav {

// ---------------------------------------------------------------------------
// Socket rebinding and reversible merge/split
// ---------------------------------------------------------------------------

/// Binds an unbound socket to a provider variable. The socket's distribution
/// is retained so a later disconnect restores sampling behavior.
Scm connect_socket(const Scm& scm, VariableId socket, VariableId provider);

/// Reverts a bound socket to sampling its distribution.
Scm disconnect_socket(const Scm& scm, VariableId socket);

/// Merges two SCMs with disjoint id sets, binding each (socket, provider)
/// pair across the boundary. Records provenance so split() can recover the
/// constituents; the returned model's last merge record carries `key`.
Scm merge(const Scm& a, const Scm& b, const std::vector<std::pair<VariableId, VariableId>>& bindings,
          std::string key = "");

/// Splits a merged SCM back into its two constituents using the provenance
/// key recorded by merge(). Only a record that still covers the whole model
/// is splittable (the outermost of nested merges first).
std::pair<Scm, Scm> split(const Scm& merged, const std::string& key);

/// Key of the most recent merge, if any.
std::optional<std::string> last_merge_key(const Scm& scm);

// ---------------------------------------------------------------------------
// Mutable input sets (the union-chain / gate construction)
// ---------------------------------------------------------------------------

/// One gated source of an input-set chain.
struct ChainLink {
    std::uint32_t source_id = 0;
    VariableId source;       // provider of the payload value
    VariableId wrapper;      // singleton-set node {(source_id, payload)}
    VariableId gate_alpha;   // admits from theta_alpha on
    VariableId gate_omega;   // admits through theta_omega
    VariableId union_var;
    double theta_alpha = 0.0; // seconds, on the grid, inclusive
    double theta_omega = 0.0; // seconds, on the grid, inclusive
};

/// Handle to the linked-list structure that feeds one set-valued consumer:
/// a terminator socket degenerate at ∅ plus one union variable per source,
/// each source gated by a pair of time-conditional variables. Mutations are
/// applied to the owning Scm in place; the handle tracks ids and gate times.
class InputSetChain {
public:
    /// Creates the terminator and the sink edge inside `scm`. The sink is a
    /// set-valued consumer created by the caller with a placeholder parent
    /// slot; `sink_slot` names which parent slot of `sink` the chain feeds.
    static InputSetChain create(Scm& scm, std::string prefix, VariableId sink, std::size_t sink_slot,
                                double step_size);

    /// Prepends a gated source active exactly at [t, t]; evaluations before
    /// t contribute ∅. Gates widen via refresh_source.
    void introduce_source(Scm& scm, VariableId source, std::uint32_t source_id, double t);

    /// Extends the source's admission window through t (θ_ω := t). Omitting
    /// the refresh at a step excludes the source for later times; removal is
    /// the absence of refresh.
    void refresh_source(Scm& scm, std::uint32_t source_id, double t);

    /// Sets a source's whole admission window at introduction time; used by
    /// scene assembly when entry and exit are known up front.
    void introduce_source_windowed(Scm& scm, VariableId source, std::uint32_t source_id,
                                   double t_alpha, double t_omega);

    const std::vector<ChainLink>& links() const { return links_; }
    const ChainLink* find_link(std::uint32_t source_id) const;
    VariableId sink() const { return sink_; }
    VariableId terminator() const { return terminator_; }
    /// Node currently feeding the sink (outermost union, or the terminator).
    VariableId head() const;
    double step_size() const { return dt_; }

private:
    std::string prefix_;
    VariableId sink_;
    std::size_t sink_slot_ = 0;
    VariableId terminator_;
    std::vector<ChainLink> links_;
    double dt_ = 0.0;
};

// ---------------------------------------------------------------------------
// Model timelines and retrospective causal stationarity
// ---------------------------------------------------------------------------

struct TimelineMutation {
    std::int64_t step = 0;
    std::string op; // "introduce" | "refresh"
    std::uint32_t source_id = 0;
    double t = 0.0;
};

/// Sequence of model snapshots {M_0, M_δ, …, M_t}, one per grid step, with
/// the chain mutation log and the sink values recorded when each snapshot
/// was current.
class ModelTimeline {
public:
    ModelTimeline(Scm initial, InputSetChain chain, double step_size, std::uint64_t seed);

    /// Appends a snapshot for the next step after applying `mutate` to a
    /// copy of the latest model. Records the sink value at the new step.
    void advance(const std::function<void(Scm&, InputSetChain&)>& mutate);

    std::size_t size() const { return snapshots_.size(); }
    const Scm& model_at(std::size_t i) const { return snapshots_[i]; }
    const InputSetChain& chain_at(std::size_t i) const { return chains_[i]; }
    const std::vector<TimelineMutation>& mutation_log() const { return log_; }
    void log_mutation(TimelineMutation m) { log_.push_back(std::move(m)); }
    const Value& recorded_sink(std::size_t step) const { return recorded_.at(step); }
    double step_size() const { return dt_; }
    std::uint64_t seed() const { return seed_; }
    VariableId sink() const { return chains_.front().sink(); }

    std::string mutation_log_json_lines() const;

private:
    friend struct RcsAccess;
    std::vector<Scm> snapshots_;
    std::vector<InputSetChain> chains_;
    std::vector<Value> recorded_; // sink value at step i under M_i
    std::vector<TimelineMutation> log_;
    double dt_;
    std::uint64_t seed_;
};

struct RcsMismatch {
    double snapshot_t = 0.0; // the model M_t used for evaluation
    double eval_t = 0.0;     // the past step evaluated
    VariableId sink;
    std::string expected;
    std::string got;
};

struct RcsReport {
    std::size_t comparisons = 0;
    std::vector<RcsMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
    std::string to_json() const;
};

/// Retrospective-causal-stationarity check: for each snapshot M_t and each
/// t' ≤ t, evaluates the chain sink under M_t at t' and compares against the
/// value recorded when M_{t'} was current.
RcsReport check_rcs(const ModelTimeline& timeline);

} // namespace causalav
