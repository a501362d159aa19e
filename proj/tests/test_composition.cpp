#include "doctest.h"

#include <random>

#include "causalav/composition.hpp"
#include "causalav/temporal.hpp"

#include "support/random_scm.hpp"

using namespace causalav;

namespace {

// The worked two-model example: <U^H={u,v}, U^S={}, V={w}> and
// <U^H'={}, U^S'={x}, V'={y,z}> with z <- y <- x.
Scm model_uvw() {
    Scm a("A");
    a.add(exogenous_variable("u"_var, Distribution::uniform(0, 1), vt::any));
    a.add(exogenous_variable("v"_var, Distribution::uniform(2, 3), vt::any));
    a.add(plain_variable("w"_var, {"u"_var, "v"_var},
                         make_equation("sum_raw", 2,
                                       [](std::span<const Value> s) {
                                           return Value::scalar(s[0].as_scalar().value +
                                                                s[1].as_scalar().value);
                                       }),
                         vt::any));
    return a;
}

Scm model_xyz() {
    Scm b("B");
    b.add(socket_variable("x"_var, Distribution::gaussian(0, 1), vt::any));
    b.add(plain_variable("y"_var, {"x"_var}, eq::scale(2.0), vt::any));
    b.add(plain_variable("z"_var, {"y"_var}, eq::scale(-1.0), vt::any));
    return b;
}

Value eval_at(const Scm& scm, VariableId id, EvaluationContext& ctx, double t) {
    ctx.set_time(t);
    return scm.evaluate(id, ctx);
}

} // namespace

TEST_CASE("the worked merge example: U^S'' = {x}, V'' = {w, y, z}") {
    const Scm merged = merge(model_uvw(), model_xyz(), {{"x"_var, "w"_var}}, "demo");
    CHECK(merged.ids_of(VariableKind::socket) == std::vector<VariableId>{"x"_var});
    CHECK(merged.ids_of(VariableKind::hidden_exogenous) ==
          std::vector<VariableId>{"u"_var, "v"_var});
    const auto endo = merged.ids_of(VariableKind::plain);
    CHECK(endo == std::vector<VariableId>{"w"_var, "y"_var, "z"_var});
    CHECK(merged.unbound_sockets().empty());
    REQUIRE(merged.validate().ok());

    // Bound socket forwards the provider's value.
    EvaluationContext ctx(1.0, 9);
    const Value w = eval_at(merged, "w"_var, ctx, 0.0);
    CHECK(eval_at(merged, "x"_var, ctx, 0.0) == w);
    CHECK(eval_at(merged, "z"_var, ctx, 0.0) == Value::scalar(-2.0 * w.as_scalar().value));
}

TEST_CASE("split of the worked example recovers both models exactly") {
    const Scm a = model_uvw(), b = model_xyz();
    const Scm merged = merge(a, b, {{"x"_var, "w"_var}}, "demo");
    const auto [left, right] = split(merged, "demo");
    CHECK(left == a);
    CHECK(right == b);
}

TEST_CASE("socket rebinding constraints and reversibility") {
    Scm b = model_xyz();
    b.add(constant_variable("w_local"_var, Value::scalar(5.0), vt::any));

    SUBCASE("bind, evaluate, rebind round trip") {
        Scm bound = connect_socket(b, "x"_var, "w_local"_var);
        REQUIRE(bound.validate().ok());
        EvaluationContext ctx(1.0, 4);
        CHECK(eval_at(bound, "x"_var, ctx, 1.0) == Value::scalar(5.0));

        CHECK_THROWS_AS(connect_socket(bound, "x"_var, "w_local"_var), GraphError);

        Scm unbound = disconnect_socket(bound, "x"_var);
        REQUIRE(unbound.validate().ok());
        // Distribution retained: equal seeds give the pre-bind draws.
        EvaluationContext c1(1.0, 7), c2(1.0, 7);
        REQUIRE(b.validate().ok());
        CHECK(eval_at(unbound, "x"_var, c1, 3.0) == eval_at(b, "x"_var, c2, 3.0));

        Scm rebound = connect_socket(unbound, "x"_var, "w_local"_var);
        REQUIRE(rebound.validate().ok());
        EvaluationContext c3(1.0, 7);
        CHECK(eval_at(rebound, "x"_var, c3, 1.0) == Value::scalar(5.0));
    }

    SUBCASE("disconnecting an unbound socket errors") {
        CHECK_THROWS_AS(disconnect_socket(b, "x"_var), GraphError);
    }
}

TEST_CASE("merge with empty bindings is a disjoint union; collisions rejected") {
    const Scm a = model_uvw(), b = model_xyz();
    const Scm merged = merge(a, b, {});
    CHECK(merged.node_count() == a.node_count() + b.node_count());
    CHECK(merged.unbound_sockets() == std::vector<VariableId>{"x"_var});
    CHECK_THROWS_AS(merge(a, a, {}), GraphError);
}

TEST_CASE("split with an unknown key errors") {
    const Scm merged = merge(model_uvw(), model_xyz(), {}, "demo");
    CHECK_THROWS_AS(split(merged, "nope"), GraphError);
}

TEST_CASE("intervening inside a merged model stays in its component after split") {
    const Scm a = model_uvw(), b = model_xyz();
    const Scm merged = merge(a, b, {{"x"_var, "w"_var}}, "demo");
    const Scm hacked = merged.intervene("y"_var, Value::scalar(42.0));
    const auto [left, right] = split(hacked, "demo");
    CHECK(left == a);
    CHECK_FALSE(right == b);
    REQUIRE(right.validate().ok());
    EvaluationContext ctx(1.0);
    CHECK(eval_at(right, "y"_var, ctx, 0.0) == Value::scalar(42.0));
    // The non-intervened sibling is untouched.
    CHECK(eval_at(right, "z"_var, ctx, 0.0) == Value::scalar(-42.0));
}

TEST_CASE("nested merges split outermost-first") {
    const Scm a = model_uvw(), b = model_xyz();
    Scm c("C");
    c.add(constant_variable("c1"_var, Value::scalar(1.0), vt::any));

    const Scm ab = merge(a, b, {{"x"_var, "w"_var}}, "inner");
    const Scm abc = merge(ab, c, {}, "outer");

    CHECK_THROWS_WITH_AS(split(abc, "inner"), doctest::Contains("outermost"), GraphError);

    const auto [ab2, c2] = split(abc, "outer");
    CHECK(c2 == c);
    const auto [a2, b2] = split(ab2, "inner");
    CHECK(a2 == a);
    CHECK(b2 == b);
}

TEST_CASE("property: merge/split round trip over random SCM pairs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        causalav::testing::RandomScmConfig ca, cb;
        ca.prefix = "a.";
        cb.prefix = "b.";
        const Scm a = causalav::testing::make_random_linear_scm(1000 + trial, ca);
        const Scm b = causalav::testing::make_random_linear_scm(2000 + trial, cb);

        // Random cross bindings between unbound sockets and opposite nodes.
        std::vector<std::pair<VariableId, VariableId>> bindings;
        auto bindable = [&](const Scm& host, const Scm& other) {
            for (const auto& s : host.unbound_sockets()) {
                const auto& nodes = other.variables();
                const auto& provider = nodes[rng() % nodes.size()];
                if (provider.kind == VariableKind::socket) continue;
                if (rng() % 2 == 0) bindings.emplace_back(s, provider.id);
            }
        };
        bindable(a, b);
        bindable(b, a);

        const Scm merged = merge(a, b, bindings, "rt");
        const auto [a2, b2] = split(merged, "rt");
        CAPTURE(trial);
        CHECK(a2 == a);
        CHECK(b2 == b);
    }
}

// ---------------------------------------------------------------------------
// Input-set chains
// ---------------------------------------------------------------------------

namespace {

/// Builds an SCM with a set-valued sink fed by a fresh chain, plus `n`
/// constant payload sources named p0..p{n-1} valued 10·(i+1).
struct ChainFixture {
    Scm scm{"chain"};
    InputSetChain chain;
    double dt;

    explicit ChainFixture(double step = 1.0) : dt(step) {
        scm.add(constant_variable("placeholder"_var, Value::empty(), vt::any));
        scm.add(plain_variable("sink"_var, {"placeholder"_var}, eq::identity(), vt::any));
        chain = InputSetChain::create(scm, "chain.", "sink"_var, 0, dt);
        for (int i = 0; i < 4; ++i)
            scm.add(constant_variable(VariableId("p" + std::to_string(i)),
                                      Value::scalar(10.0 * (i + 1)), vt::any));
    }

    SourceSet sink_at(double t, std::uint64_t seed = 0) {
        REQUIRE(scm.validate().ok());
        EvaluationContext ctx(dt, seed);
        ctx.set_time(t);
        const Value v = scm.evaluate("sink"_var, ctx);
        return v.is_empty() ? SourceSet{} : v.as_source_set();
    }
};

} // namespace

TEST_CASE("an empty chain evaluates to the empty value at all times") {
    ChainFixture fx;
    for (double t : {0.0, 1.0, 5.0, 30.0}) CHECK(fx.sink_at(t).empty());
}

TEST_CASE("introduction gates are inclusive and exclude the past") {
    ChainFixture fx;
    fx.chain.introduce_source(fx.scm, "p0"_var, 1, 2.0);
    CHECK_FALSE(fx.sink_at(1.0).contains(1)); // before introduction: absent
    CHECK(fx.sink_at(2.0).contains(1));       // at introduction: present
    CHECK_FALSE(fx.sink_at(3.0).contains(1)); // beyond the un-refreshed window
}

TEST_CASE("equal payloads under distinct source ids are both captured") {
    ChainFixture fx;
    fx.scm.add(constant_variable("dup"_var, Value::scalar(10.0), vt::any));
    fx.chain.introduce_source_windowed(fx.scm, "p0"_var, 1, 0.0, 10.0);
    fx.chain.introduce_source_windowed(fx.scm, "dup"_var, 2, 0.0, 10.0);
    const auto set = fx.sink_at(5.0);
    CHECK(set.size() == 2);
    CHECK(*set.find(1) == Value::scalar(10.0));
    CHECK(*set.find(2) == Value::scalar(10.0));
}

TEST_CASE("refresh keeps a source alive; ceasing refresh removes it") {
    ChainFixture fx;
    fx.chain.introduce_source(fx.scm, "p1"_var, 7, 2.0);
    for (double t : {3.0, 4.0, 5.0}) fx.chain.refresh_source(fx.scm, 7, t);
    CHECK(fx.sink_at(4.0).contains(7));
    CHECK(fx.sink_at(5.0).contains(7));
    CHECK_FALSE(fx.sink_at(6.0).contains(7)); // no refresh at 6: gone
    CHECK(fx.sink_at(2.0).contains(7));       // history intact

    CHECK_THROWS_WITH_AS(fx.chain.refresh_source(fx.scm, 7, 1.0), doctest::Contains("precedes"),
                         GraphError);
    CHECK_THROWS_AS(fx.chain.refresh_source(fx.scm, 99, 6.0), GraphError);
}

TEST_CASE("duplicate source ids are rejected") {
    ChainFixture fx;
    fx.chain.introduce_source(fx.scm, "p0"_var, 1, 0.0);
    CHECK_THROWS_AS(fx.chain.introduce_source(fx.scm, "p1"_var, 1, 0.0), GraphError);
}

TEST_CASE("union result is independent of link order") {
    ChainFixture ab, ba;
    ab.chain.introduce_source_windowed(ab.scm, "p0"_var, 1, 0.0, 9.0);
    ab.chain.introduce_source_windowed(ab.scm, "p1"_var, 2, 0.0, 9.0);
    ba.chain.introduce_source_windowed(ba.scm, "p1"_var, 2, 0.0, 9.0);
    ba.chain.introduce_source_windowed(ba.scm, "p0"_var, 1, 0.0, 9.0);
    for (double t : {0.0, 4.0, 9.0}) CHECK(ab.sink_at(t) == ba.sink_at(t));
}

TEST_CASE("gate soundness: membership iff theta_alpha <= t <= theta_omega") {
    ChainFixture fx;
    fx.chain.introduce_source_windowed(fx.scm, "p0"_var, 1, 2.0, 5.0);
    fx.chain.introduce_source_windowed(fx.scm, "p1"_var, 2, 0.0, 3.0);
    fx.chain.introduce_source_windowed(fx.scm, "p2"_var, 3, 7.0, 7.0);
    for (int t = 0; t <= 10; ++t) {
        const auto set = fx.sink_at(t);
        CHECK(set.contains(1) == (t >= 2 && t <= 5));
        CHECK(set.contains(2) == (t <= 3));
        CHECK(set.contains(3) == (t == 7));
    }
}

// ---------------------------------------------------------------------------
// Timelines and RCS
// ---------------------------------------------------------------------------

namespace {

ModelTimeline make_timeline(double dt = 1.0, std::uint64_t seed = 3) {
    Scm scm("timeline");
    scm.add(constant_variable("placeholder"_var, Value::empty(), vt::any));
    scm.add(plain_variable("sink"_var, {"placeholder"_var}, eq::identity(), vt::any));
    auto chain = InputSetChain::create(scm, "chain.", "sink"_var, 0, dt);
    // Payload sources: exogenous draws, exercising abduction determinism.
    for (int i = 0; i < 8; ++i)
        scm.add(exogenous_variable(VariableId("agent" + std::to_string(i)),
                                   Distribution::uniform(-5, 5), vt::any));
    REQUIRE(scm.validate().ok());
    return ModelTimeline(std::move(scm), std::move(chain), dt, seed);
}

} // namespace

TEST_CASE("a single-snapshot timeline is vacuously RCS") {
    auto tl = make_timeline();
    const auto report = check_rcs(tl);
    CHECK(report.ok());
    CHECK(report.comparisons == 1);
}

TEST_CASE("timelines built through introduce/refresh keep RCS over 50 random steps") {
    auto tl = make_timeline();
    std::mt19937_64 rng(77);
    std::vector<std::uint32_t> active;
    std::uint32_t next_id = 0;

    for (int step = 1; step <= 50; ++step) {
        const double t = static_cast<double>(step);
        tl.advance([&](Scm& scm, InputSetChain& chain) {
            // Drop: simply stop refreshing (removal is the absence of refresh).
            if (!active.empty() && rng() % 5 == 0) {
                active.erase(active.begin() + static_cast<long>(rng() % active.size()));
            }
            for (const auto id : active) {
                chain.refresh_source(scm, id, t);
                tl.log_mutation({step, "refresh", id, t});
            }
            if (active.size() < 6 && rng() % 3 == 0) {
                const auto id = next_id++;
                chain.introduce_source(scm, VariableId("agent" + std::to_string(id % 8)), id, t);
                tl.log_mutation({step, "introduce", id, t});
                active.push_back(id);
            }
        });
    }

    const auto report = check_rcs(tl);
    CHECK(report.comparisons == 51 * 52 / 2);
    CHECK(report.ok());
    if (!report.ok()) MESSAGE(report.to_json());
    CHECK(tl.mutation_log_json_lines().find("\"op\":\"") != std::string::npos);
}

TEST_CASE("a backdated introduction gate breaks RCS and is reported") {
    auto tl = make_timeline();
    for (int step = 1; step <= 5; ++step) {
        const double t = static_cast<double>(step);
        tl.advance([&](Scm& scm, InputSetChain& chain) {
            if (step == 3) chain.introduce_source(scm, "agent0"_var, 0, t);
            if (step > 3) chain.refresh_source(scm, 0, t);
        });
    }
    // Corrupt the latest snapshot: backdate theta_alpha to 0.
    tl.advance([&](Scm& scm, InputSetChain& chain) {
        chain.refresh_source(scm, 0, 6.0);
        scm.set_theta(chain.find_link(0)->gate_alpha, 0.0);
    });

    const auto report = check_rcs(tl);
    CHECK_FALSE(report.ok());
    // Mismatches sit at evaluation times before the true introduction.
    for (const auto& m : report.mismatches) {
        CHECK(m.eval_t < 3.0);
        CHECK(m.snapshot_t == 6.0);
    }
    CHECK(report.to_json().find("mismatches") != std::string::npos);
}
