#include "causalav/composition.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace causalav {

Scm connect_socket(const Scm& scm, VariableId socket, VariableId provider) {
    Scm out = scm;
    out.bind_socket(socket, provider);
    return out;
}

Scm disconnect_socket(const Scm& scm, VariableId socket) {
    Scm out = scm;
    out.unbind_socket(socket);
    return out;
}

Scm merge(const Scm& a, const Scm& b, const std::vector<std::pair<VariableId, VariableId>>& bindings,
          std::string key) {
    for (const auto& v : b.variables())
        if (a.contains(v.id))
            throw GraphError("merge id collision on '" + std::string(v.id.name()) + "'");

    Scm out(a.name().empty() || b.name().empty() ? a.name() + b.name() : a.name() + "+" + b.name());
    for (const auto& v : a.variables()) out.add(v);
    for (const auto& v : b.variables()) out.add(v);
    for (const auto& [id, val] : a.initial_values()) out.seed_initial(id, val);
    for (const auto& [id, val] : b.initial_values()) out.seed_initial(id, val);
    for (const auto& r : a.merge_records()) out.add_merge_record(r);
    for (const auto& r : b.merge_records()) out.add_merge_record(r);

    MergeRecord rec;
    rec.key = key.empty() ? "m" + std::to_string(out.merge_records().size()) : std::move(key);
    rec.left_name = a.name();
    rec.right_name = b.name();
    for (const auto& v : a.variables()) rec.left_ids.push_back(v.id);
    for (const auto& v : b.variables()) rec.right_ids.push_back(v.id);

    for (const auto& [socket, provider] : bindings) {
        const bool socket_in_a = a.contains(socket);
        const bool provider_in_a = a.contains(provider);
        if (socket_in_a == provider_in_a)
            throw GraphError("merge binding must cross components: " + std::string(socket.name()) +
                             " <- " + std::string(provider.name()));
        out.bind_socket(socket, provider);
        rec.bindings.emplace_back(socket, provider);
    }
    out.add_merge_record(std::move(rec));
    return out;
}

std::optional<std::string> last_merge_key(const Scm& scm) {
    if (scm.merge_records().empty()) return std::nullopt;
    return scm.merge_records().back().key;
}

std::pair<Scm, Scm> split(const Scm& merged, const std::string& key) {
    const MergeRecord* rec = nullptr;
    for (const auto& r : merged.merge_records())
        if (r.key == key) rec = &r;
    if (!rec) throw GraphError("unknown merge provenance key '" + key + "'");

    std::unordered_set<VariableId> left_set(rec->left_ids.begin(), rec->left_ids.end());
    std::unordered_set<VariableId> right_set(rec->right_ids.begin(), rec->right_ids.end());
    for (const auto& v : merged.variables())
        if (!left_set.count(v.id) && !right_set.count(v.id))
            throw GraphError("merge record '" + key + "' no longer covers the model; split the " +
                             "outermost merge first");

    Scm left(rec->left_name), right(rec->right_name);
    for (const auto& v : merged.variables()) {
        const bool in_left = left_set.count(v.id) != 0;
        Variable copy = v;
        // Sever socket bindings that cross the partition; the socket keeps
        // its distribution and reverts to sampling it.
        if (copy.kind == VariableKind::socket && copy.parents.size() == 1) {
            const bool parent_left = left_set.count(copy.parents[0]) != 0;
            if (parent_left != in_left) copy.parents.clear();
        }
        (in_left ? left : right).add(std::move(copy));
    }
    for (const auto& [id, val] : merged.initial_values())
        (left_set.count(id) ? left : right).seed_initial(id, val);
    for (const auto& r : merged.merge_records()) {
        if (r.key == key) continue;
        const bool all_left = std::all_of(r.left_ids.begin(), r.left_ids.end(),
                                          [&](VariableId id) { return left_set.count(id) != 0; }) &&
                              std::all_of(r.right_ids.begin(), r.right_ids.end(),
                                          [&](VariableId id) { return left_set.count(id) != 0; });
        (all_left ? left : right).add_merge_record(r);
    }
    return {std::move(left), std::move(right)};
}

// ---------------------------------------------------------------------------
// Input-set chains
// ---------------------------------------------------------------------------

namespace {

void require_on_grid(double t, double dt, const char* what) {
    const double raw = t / dt;
    if (std::abs(raw - std::round(raw)) > 1e-6)
        throw GraphError(std::string(what) + " " + std::to_string(t) + " s is off the " +
                         std::to_string(dt) + " s time grid");
}

EquationRef make_singleton(std::uint32_t source_id) {
    return make_equation("singleton", 1, [source_id](std::span<const Value> args) {
        SourceSet set;
        set.insert(source_id, args[0]);
        return Value(std::move(set));
    });
}

} // namespace

InputSetChain InputSetChain::create(Scm& scm, std::string prefix, VariableId sink,
                                    std::size_t sink_slot, double step_size) {
    InputSetChain chain;
    chain.prefix_ = std::move(prefix);
    chain.sink_ = sink;
    chain.sink_slot_ = sink_slot;
    chain.dt_ = step_size;
    chain.terminator_ = VariableId(chain.prefix_ + "term");
    scm.add(socket_variable(chain.terminator_, Distribution::degenerate(Value::empty()),
                            vt::source_set));
    scm.rewire_parent(sink, sink_slot, chain.terminator_);
    return chain;
}

VariableId InputSetChain::head() const {
    return links_.empty() ? terminator_ : links_.back().union_var;
}

const ChainLink* InputSetChain::find_link(std::uint32_t source_id) const {
    for (const auto& l : links_)
        if (l.source_id == source_id) return &l;
    return nullptr;
}

void InputSetChain::introduce_source(Scm& scm, VariableId source, std::uint32_t source_id, double t) {
    introduce_source_windowed(scm, source, source_id, t, t);
}

void InputSetChain::introduce_source_windowed(Scm& scm, VariableId source, std::uint32_t source_id,
                                              double t_alpha, double t_omega) {
    require_on_grid(t_alpha, dt_, "introduction time");
    require_on_grid(t_omega, dt_, "window end");
    if (t_omega < t_alpha) throw GraphError("gate window ends before it starts");
    if (find_link(source_id))
        throw GraphError("duplicate source_id " + std::to_string(source_id) + " in chain");

    const std::string base = prefix_ + "src" + std::to_string(source_id);
    ChainLink link;
    link.source_id = source_id;
    link.source = source;
    link.wrapper = VariableId(base + "_wrap");
    link.gate_alpha = VariableId(base + "_alpha");
    link.gate_omega = VariableId(base + "_omega");
    link.union_var = VariableId(base + "_union");
    link.theta_alpha = t_alpha;
    link.theta_omega = t_omega;

    // Shared ∅-valued exogenous fallback, one per chain.
    const VariableId empty_id(prefix_ + "empty");
    if (!scm.contains(empty_id))
        scm.add(exogenous_variable(empty_id, Distribution::degenerate(Value::empty()),
                                   vt::source_set));

    scm.add(plain_variable(link.wrapper, {source}, make_singleton(source_id), vt::source_set));
    // Admission from θ_α on: before the threshold the gate contributes ∅.
    scm.add(time_conditional_variable(link.gate_alpha, empty_id, link.wrapper, t_alpha,
                                      vt::source_set));
    // Admission through θ_ω inclusive: the node threshold sits one step past.
    scm.add(time_conditional_variable(link.gate_omega, link.gate_alpha, empty_id, t_omega + dt_,
                                      vt::source_set));
    scm.add(union_variable(link.union_var, link.gate_omega, head()));
    scm.rewire_parent(sink_, sink_slot_, link.union_var);
    links_.push_back(link);
}

void InputSetChain::refresh_source(Scm& scm, std::uint32_t source_id, double t) {
    require_on_grid(t, dt_, "refresh time");
    auto it = std::find_if(links_.begin(), links_.end(),
                           [&](const ChainLink& l) { return l.source_id == source_id; });
    if (it == links_.end())
        throw GraphError("unknown source_id " + std::to_string(source_id) + " in chain");
    if (t < it->theta_omega)
        throw GraphError("refresh time " + std::to_string(t) + " precedes the existing window end " +
                         std::to_string(it->theta_omega));
    it->theta_omega = t;
    scm.set_theta(it->gate_omega, t + dt_);
}

// ---------------------------------------------------------------------------
// Timelines and the RCS check
// ---------------------------------------------------------------------------

ModelTimeline::ModelTimeline(Scm initial, InputSetChain chain, double step_size, std::uint64_t seed)
    : dt_(step_size), seed_(seed) {
    if (!initial.validated()) {
        const auto report = initial.validate();
        if (!report.ok()) throw GraphError("timeline snapshot invalid:\n" + report.to_string());
    }
    snapshots_.push_back(std::move(initial));
    chains_.push_back(std::move(chain));
    EvaluationContext ctx(dt_, seed_);
    snapshots_.back().apply_seeds(ctx);
    ctx.set_step(0);
    recorded_.push_back(snapshots_.back().evaluate(chains_.back().sink(), ctx));
}

void ModelTimeline::advance(const std::function<void(Scm&, InputSetChain&)>& mutate) {
    Scm next = snapshots_.back();
    InputSetChain chain = chains_.back();
    mutate(next, chain);
    const auto report = next.validate();
    if (!report.ok()) throw GraphError("timeline snapshot invalid:\n" + report.to_string());

    const auto step = static_cast<std::int64_t>(snapshots_.size());
    EvaluationContext ctx(dt_, seed_);
    next.apply_seeds(ctx);
    ctx.set_step(step);
    recorded_.push_back(next.evaluate(chain.sink(), ctx));

    snapshots_.push_back(std::move(next));
    chains_.push_back(std::move(chain));
}

std::string ModelTimeline::mutation_log_json_lines() const {
    std::string out;
    for (const auto& m : log_) {
        nlohmann::json j{{"step", m.step}, {"op", m.op}, {"source_id", m.source_id}, {"t", m.t}};
        out += j.dump();
        out += "\n";
    }
    return out;
}

namespace {

/// ∅ and the empty source set denote the same thing where a set is
/// expected; chains grow structurally, so the comparison normalizes them.
bool equal_in_set_context(const Value& a, const Value& b) {
    auto is_no_members = [](const Value& v) {
        return v.is_empty() || (v.tag() == ValueTag::source_set && v.as_source_set().empty());
    };
    if (is_no_members(a) && is_no_members(b)) return true;
    return a == b;
}

} // namespace

RcsReport check_rcs(const ModelTimeline& timeline) {
    RcsReport report;
    for (std::size_t s = 0; s < timeline.size(); ++s) {
        const Scm& model = timeline.model_at(s);
        const VariableId sink = timeline.chain_at(s).sink();
        EvaluationContext ctx(timeline.step_size(), timeline.seed());
        model.apply_seeds(ctx);
        for (std::size_t t = 0; t <= s; ++t) {
            ctx.set_step(static_cast<std::int64_t>(t));
            const Value got = model.evaluate(sink, ctx);
            const Value& expected = timeline.recorded_sink(t);
            ++report.comparisons;
            if (!equal_in_set_context(got, expected)) {
                report.mismatches.push_back(RcsMismatch{static_cast<double>(s) * timeline.step_size(),
                                                        static_cast<double>(t) * timeline.step_size(),
                                                        sink, expected.to_string(), got.to_string()});
            }
        }
    }
    return report;
}

std::string RcsReport::to_json() const {
    nlohmann::json j;
    j["comparisons"] = comparisons;
    j["ok"] = ok();
    j["mismatches"] = nlohmann::json::array();
    for (const auto& m : mismatches) {
        j["mismatches"].push_back({{"snapshot_t", m.snapshot_t},
                                   {"eval_t", m.eval_t},
                                   {"sink", std::string(m.sink.name())},
                                   {"expected", m.expected},
                                   {"got", m.got}});
    }
    return j.dump(2);
}

} // namespace causalav
