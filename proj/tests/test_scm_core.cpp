#include "doctest.h"

#include "causalav/scm.hpp"
#include "causalav/temporal.hpp"

#include "support/random_scm.hpp"

using namespace causalav;
namespace kd = kinematics_demo;

namespace {

EvaluationContext fresh_context(const Scm& scm, double dt = 1.0, std::uint64_t seed = 0) {
    EvaluationContext ctx(dt, seed);
    scm.apply_seeds(ctx);
    return ctx;
}

Value eval_at(const Scm& scm, VariableId id, EvaluationContext& ctx, double t) {
    ctx.set_time(t);
    return scm.evaluate(id, ctx);
}

} // namespace

TEST_CASE("add_variable registers nodes and rejects duplicates") {
    Scm scm;
    scm.add(exogenous_variable("u"_var, Distribution::uniform(0, 1), vt::any));
    scm.add(exogenous_variable("v"_var, Distribution::uniform(0, 1), vt::any));
    scm.add(plain_variable("w"_var, {"u"_var, "v"_var},
                           make_equation("sum_raw", 2,
                                         [](std::span<const Value> a) {
                                             return Value::scalar(a[0].as_scalar().value +
                                                                  a[1].as_scalar().value);
                                         }),
                           vt::any));
    CHECK(scm.contains("w"_var));
    CHECK(scm.node_count() == 3);
    CHECK(scm.validate().ok());

    CHECK_THROWS_AS(scm.add(plain_variable("w"_var, {}, constant_equation(Value::scalar(0)), vt::any)),
                    GraphError);
}

TEST_CASE("zero-parent node with degenerate exogenous parent is accepted") {
    Scm scm;
    scm.add(exogenous_variable("noise"_var, Distribution::degenerate(Value::scalar(2.5)), vt::any));
    scm.add(plain_variable("pass"_var, {"noise"_var}, eq::identity(), vt::any));
    CHECK(scm.validate().ok());
    auto ctx = fresh_context(scm);
    CHECK(eval_at(scm, "pass"_var, ctx, 0.0) == Value::scalar(2.5));
}

TEST_CASE("dangling parent is reported by validate") {
    Scm scm;
    scm.add(plain_variable("orphan"_var, {"missing"_var}, eq::identity(), vt::any));
    const auto report = scm.validate();
    CHECK_FALSE(report.ok());
    CHECK(report.to_string().find("dangling") != std::string::npos);
}

TEST_CASE("validate accepts the kinematics SCM and rejects PTS-free cycles") {
    auto kin = make_kinematics_demo_scm();
    CHECK(kin.validate().ok());

    Scm bad;
    bad.add(plain_variable("a"_var, {"b"_var}, eq::identity(), vt::any));
    bad.add(plain_variable("b"_var, {"a"_var}, eq::identity(), vt::any));
    const auto report = bad.validate();
    CHECK_FALSE(report.ok());
    CHECK(report.to_string().find("cycle without a PTS variable") != std::string::npos);
}

TEST_CASE("validate rejects malformed special kinds") {
    Scm scm;
    scm.add(constant_variable("c"_var, Value::scalar(1), vt::any));
    scm.add(constant_variable("d"_var, Value::scalar(2), vt::any));

    Variable two_parent_socket = socket_variable("s"_var, Distribution::degenerate(Value::scalar(0)), vt::any);
    two_parent_socket.parents = {"c"_var, "d"_var};
    scm.add(two_parent_socket);

    Variable bad_buffer = buffer_variable("b"_var, "c"_var, vt::any);
    bad_buffer.parents = {"c"_var, "d"_var};
    scm.add(bad_buffer);

    Variable bad_tc = time_conditional_variable("tc"_var, "c"_var, "d"_var, 1.0, vt::any);
    bad_tc.parents = {"c"_var};
    scm.add(bad_tc);

    const auto report = scm.validate();
    CHECK_FALSE(report.ok());
    const auto text = report.to_string();
    CHECK(text.find("socket with 2 parents") != std::string::npos);
    CHECK(text.find("buffer variable needs exactly one parent") != std::string::npos);
    CHECK(text.find("two ordered parents") != std::string::npos);
}

TEST_CASE("kinematics evaluates v(3) = 3 m/s under unit acceleration") {
    // Expected values cross-checked against the window-graph oracle in
    // test_rollout.cpp; frozen here.
    auto scm = make_kinematics_demo_scm(1.0, 0.0);
    REQUIRE(scm.validate().ok());
    auto ctx = fresh_context(scm, 1.0);

    CHECK(eval_at(scm, kd::velocity_buffer, ctx, 0.0) == Value::scalar(0.0, units::mps));
    CHECK(eval_at(scm, kd::velocity, ctx, 3.0) == Value::scalar(3.0, units::mps));
    // C_T restored by the evaluation.
    CHECK(ctx.current_time() == 3.0);
}

TEST_CASE("evaluation below the initial time without a seed errors") {
    auto scm = make_kinematics_demo_scm();
    REQUIRE(scm.validate().ok());
    auto ctx = fresh_context(scm);
    ctx.set_time(0.0);
    CHECK_THROWS_WITH_AS(scm.evaluate(kd::prev_velocity, ctx),
                         doctest::Contains("below the initial time"), EvalError);
}

TEST_CASE("exogenous ancestors are memoized within a context") {
    Scm scm;
    scm.add(exogenous_variable("g"_var, Distribution::gaussian(0.0, 1.0), vt::any));
    scm.add(plain_variable("y"_var, {"g"_var}, eq::identity(), vt::any));
    REQUIRE(scm.validate().ok());

    EvaluationContext ctx(1.0, 42);
    const Value first = eval_at(scm, "y"_var, ctx, 5.0);
    const Value second = eval_at(scm, "y"_var, ctx, 5.0);
    CHECK(first == second);

    // Same seed, fresh context: same draw at the same time.
    EvaluationContext ctx2(1.0, 42);
    CHECK(eval_at(scm, "y"_var, ctx2, 5.0) == first);

    // Different seed: almost surely a different draw.
    EvaluationContext ctx3(1.0, 43);
    CHECK(eval_at(scm, "y"_var, ctx3, 5.0) != first);
}

TEST_CASE("degenerate empty distribution always returns the empty value") {
    Scm scm;
    scm.add(socket_variable("terminator"_var, Distribution::degenerate(Value::empty()), vt::any));
    REQUIRE(scm.validate().ok());
    EvaluationContext ctx(0.04, 7);
    for (double t : {0.0, 0.4, 2.0}) CHECK(eval_at(scm, "terminator"_var, ctx, t).is_empty());
}

TEST_CASE("intervening on acceleration freezes velocity at its seed") {
    auto scm = make_kinematics_demo_scm(1.0, 4.0);
    REQUIRE(scm.validate().ok());

    auto zeroed = scm.intervene(kd::accel, Value::scalar(0.0, units::mps2));
    REQUIRE(zeroed.validate().ok());
    auto ctx = fresh_context(zeroed);
    for (double t : {0.0, 1.0, 5.0, 9.0})
        CHECK(eval_at(zeroed, kd::velocity_buffer, ctx, t) == Value::scalar(4.0, units::mps));

    // Original untouched.
    auto ctx2 = fresh_context(scm);
    CHECK(eval_at(scm, kd::velocity, ctx2, 2.0) == Value::scalar(6.0, units::mps));
}

TEST_CASE("intervention leaves non-descendants bitwise unchanged") {
    Scm scm;
    scm.add(constant_variable("root"_var, Value::scalar(3.0), vt::any));
    scm.add(plain_variable("left"_var, {"root"_var}, eq::scale(2.0), vt::any));
    scm.add(plain_variable("right"_var, {"root"_var}, eq::scale(-1.0), vt::any));
    scm.add(plain_variable("down"_var, {"left"_var}, eq::scale(1.0), vt::any));
    REQUIRE(scm.validate().ok());

    auto forced = scm.intervene("left"_var, Value::scalar(100.0));
    REQUIRE(forced.validate().ok());
    EvaluationContext a(1.0, 0), b(1.0, 0);
    CHECK(scm.evaluate("right"_var, a) == forced.evaluate("right"_var, b));
    CHECK(scm.evaluate("root"_var, a) == forced.evaluate("root"_var, b));
    CHECK(forced.evaluate("down"_var, b) == Value::scalar(100.0));
}

TEST_CASE("intervening on an exogenous variable is rejected") {
    Scm scm;
    scm.add(exogenous_variable("u"_var, Distribution::uniform(0, 1), vt::any));
    REQUIRE(scm.validate().ok());
    CHECK_THROWS_AS(scm.intervene("u"_var, Value::scalar(1)), GraphError);
}

TEST_CASE("graph size is constant across evaluation; only buffers grow") {
    auto scm = make_kinematics_demo_scm();
    REQUIRE(scm.validate().ok());
    const auto nodes = scm.node_count();
    const auto edges = scm.edge_count();

    auto ctx = fresh_context(scm);
    for (std::int64_t horizon : {10, 100}) {
        for (std::int64_t s = 0; s <= horizon; ++s) {
            ctx.set_step(s);
            scm.evaluate(kd::velocity_buffer, ctx);
        }
        CHECK(scm.node_count() == nodes);
        CHECK(scm.edge_count() == edges);
        // one buffer variable -> at most horizon + 1 entries
        CHECK(ctx.buffers().size() == static_cast<std::size_t>(horizon) + 1);
    }
}

TEST_CASE("buffer store enforces write-once per key") {
    BufferStore store;
    store.commit("b"_var, 3, Value::scalar(1));
    CHECK_THROWS_WITH_AS(store.commit("b"_var, 3, Value::scalar(2)),
                         doctest::Contains("write-once"), EvalError);
    CHECK(*store.find("b"_var, 3) == Value::scalar(1));
}

TEST_CASE("property: context time restored and determinism across seeds") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto scm = causalav::testing::make_random_linear_scm(seed);
        EvaluationContext c1(0.5, seed), c2(0.5, seed);
        scm.apply_seeds(c1);
        scm.apply_seeds(c2);
        for (const auto& var : scm.variables()) {
            c1.set_step(7);
            c2.set_step(7);
            Value v1, v2;
            bool t1 = false, t2 = false;
            try {
                v1 = scm.evaluate(var.id, c1);
            } catch (const EvalError&) {
                t1 = true;
            }
            try {
                v2 = scm.evaluate(var.id, c2);
            } catch (const EvalError&) {
                t2 = true;
            }
            CHECK(c1.step() == 7);   // C_T restored even on error paths
            CHECK(t1 == t2);
            if (!t1) CHECK(v1 == v2); // equal seeds -> equal values
        }
    }
}
