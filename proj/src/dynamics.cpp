#include "causalav/dynamics.hpp"

#include <cmath>

namespace causalav {

namespace {

using body_ids::of;

Obb obb_from_args(std::span<const Value> a, std::size_t base) {
    Obb box;
    box.center = a[base].vec2_of(units::meter);
    box.rotation = a[base + 1].scalar_of(units::radian);
    box.half_extents = {a[base + 2].scalar_of(units::meter), a[base + 3].scalar_of(units::meter)};
    return box;
}

} // namespace

LinkSolve solve_link(const BodyState& a, const BodyState& b, double restitution) {
    LinkSolve out;
    const auto contact = obb_contact(a.box, b.box);
    if (!contact) return out;
    out.overlapping = true;
    out.normal = contact->normal;
    out.contact = contact->point;
    out.closing_speed = std::max(0.0, (a.velocity - b.velocity).dot(contact->normal));
    const double reduced_mass = 1.0 / (1.0 / a.mass + 1.0 / b.mass);
    out.impulse = (1.0 + restitution) * out.closing_speed * reduced_mass;
    out.delta_v_a = out.impulse / a.mass;
    return out;
}

// ---------------------------------------------------------------------------
// Point mass
// ---------------------------------------------------------------------------

Scm build_point_mass_scm(const PointMassSpec& spec, const std::string& prefix) {
    if (!(spec.mass > 0)) throw GraphError("point mass spec: mass must be positive");

    Scm scm(prefix.empty() ? "point_mass" : prefix + "point_mass");
    const auto mass = of(prefix, "mass");
    const auto env_force = of(prefix, "env_force"), other_force = of(prefix, "other_force");
    const auto env_force_buff = of(prefix, "env_force_buff"),
               other_force_buff = of(prefix, "other_force_buff");
    const auto lin_acc = of(prefix, "lin_acc"), lin_acc_buff = of(prefix, "lin_acc_buff"),
               prev_lin_acc = of(prefix, "prev_lin_acc");
    const auto lin_vel_delta = of(prefix, "lin_vel_delta"), lin_vel = of(prefix, "lin_vel"),
               lin_vel_buff = of(prefix, "lin_vel_buff"), prev_lin_vel = of(prefix, "prev_lin_vel");
    const auto pos_delta = of(prefix, "pos_delta"), pos = of(prefix, "pos"),
               pos_buff = of(prefix, "pos_buff"), prev_pos = of(prefix, "prev_pos");

    scm.add(constant_variable(mass, Value::scalar(spec.mass, units::kilogram),
                              vt::scalar(units::kilogram)));
    const auto zero_force = Distribution::degenerate(Value::vector2(0, 0, units::newton));
    scm.add(socket_variable(env_force, zero_force, vt::vector2(units::newton)));
    scm.add(socket_variable(other_force, zero_force, vt::vector2(units::newton)));
    scm.add(buffer_variable(env_force_buff, env_force, vt::vector2(units::newton)));
    scm.add(buffer_variable(other_force_buff, other_force, vt::vector2(units::newton)));

    scm.add(plain_variable(lin_acc, {env_force_buff, other_force_buff, mass}, eq::sum2_div(),
                           vt::vector2(units::mps2)));
    scm.add(buffer_variable(lin_acc_buff, lin_acc, vt::vector2(units::mps2)));
    scm.add(pts_variable(prev_lin_acc, lin_acc_buff, vt::vector2(units::mps2)));

    scm.add(tssp_variable(lin_vel_delta, prev_lin_acc, vt::vector2(units::mps)));
    scm.add(plain_variable(lin_vel, {prev_lin_vel, lin_vel_delta}, eq::sum(2),
                           vt::vector2(units::mps)));
    scm.add(pts_variable(prev_lin_vel, lin_vel_buff, vt::vector2(units::mps)));
    scm.add(buffer_variable(lin_vel_buff, lin_vel, vt::vector2(units::mps)));

    scm.add(tssp_variable(pos_delta, prev_lin_vel, vt::vector2(units::meter)));
    scm.add(plain_variable(pos, {prev_pos, pos_delta}, eq::sum(2), vt::vector2(units::meter)));
    scm.add(pts_variable(prev_pos, pos_buff, vt::vector2(units::meter)));
    scm.add(buffer_variable(pos_buff, pos, vt::vector2(units::meter)));

    scm.seed_initial(pos_buff, Value::vector2(spec.seed_pos, units::meter));
    scm.seed_initial(lin_vel_buff, Value::vector2(spec.seed_lin_vel, units::mps));
    scm.seed_initial(lin_acc_buff, Value::vector2(spec.seed_lin_acc, units::mps2));
    return scm;
}

// ---------------------------------------------------------------------------
// Rectangular rigid body
// ---------------------------------------------------------------------------

Scm build_rigid_body_scm(const RigidBodySpec& spec, const std::string& prefix) {
    if (!(spec.length > 0 && spec.width > 0 && spec.moment_of_inertia > 0))
        throw GraphError("rigid body spec: dimensions and inertia must be positive");

    Scm scm = build_point_mass_scm(spec.point_mass, prefix);
    scm.set_name(prefix.empty() ? "rigid_body" : prefix + "rigid_body");

    const auto inertia = of(prefix, "inertia");
    const auto half_len = of(prefix, "half_len"), half_wid = of(prefix, "half_wid");
    const auto env_torque = of(prefix, "env_torque"), other_torque = of(prefix, "other_torque");
    const auto env_torque_buff = of(prefix, "env_torque_buff"),
               other_torque_buff = of(prefix, "other_torque_buff");
    const auto ang_acc = of(prefix, "ang_acc"), ang_acc_buff = of(prefix, "ang_acc_buff"),
               prev_ang_acc = of(prefix, "prev_ang_acc");
    const auto ang_vel_delta = of(prefix, "ang_vel_delta"), ang_vel = of(prefix, "ang_vel"),
               ang_vel_buff = of(prefix, "ang_vel_buff"), prev_ang_vel = of(prefix, "prev_ang_vel");
    const auto rot_delta = of(prefix, "rot_delta"), rot = of(prefix, "rot"),
               rot_buff = of(prefix, "rot_buff"), prev_rot = of(prefix, "prev_rot");
    const auto dist_headway = of(prefix, "dist_headway"),
               dist_headway_buff = of(prefix, "dist_headway_buff");

    scm.add(constant_variable(inertia, Value::scalar(spec.moment_of_inertia, units::kg_m2),
                              vt::scalar(units::kg_m2)));
    scm.add(constant_variable(half_len, Value::scalar(spec.length / 2, units::meter),
                              vt::scalar(units::meter)));
    scm.add(constant_variable(half_wid, Value::scalar(spec.width / 2, units::meter),
                              vt::scalar(units::meter)));

    const auto zero_torque = Distribution::degenerate(Value::scalar(0, units::newton_meter));
    scm.add(socket_variable(env_torque, zero_torque, vt::scalar(units::newton_meter)));
    scm.add(socket_variable(other_torque, zero_torque, vt::scalar(units::newton_meter)));
    scm.add(buffer_variable(env_torque_buff, env_torque, vt::scalar(units::newton_meter)));
    scm.add(buffer_variable(other_torque_buff, other_torque, vt::scalar(units::newton_meter)));

    // (τ_env + τ_other) / I, tagged angular.
    auto torque_to_ang_acc = make_equation("torques_over_inertia", 3, [](std::span<const Value> a) {
        const double sum = a[0].scalar_of(units::newton_meter) + a[1].scalar_of(units::newton_meter);
        return Value::scalar(sum / a[2].scalar_of(units::kg_m2), units::rad_per_s2);
    });
    scm.add(plain_variable(ang_acc, {env_torque_buff, other_torque_buff, inertia},
                           std::move(torque_to_ang_acc), vt::scalar(units::rad_per_s2)));
    scm.add(buffer_variable(ang_acc_buff, ang_acc, vt::scalar(units::rad_per_s2)));
    scm.add(pts_variable(prev_ang_acc, ang_acc_buff, vt::scalar(units::rad_per_s2)));

    scm.add(tssp_variable(ang_vel_delta, prev_ang_acc, vt::scalar(units::rad_per_s)));
    scm.add(plain_variable(ang_vel, {prev_ang_vel, ang_vel_delta}, eq::sum(2),
                           vt::scalar(units::rad_per_s)));
    scm.add(pts_variable(prev_ang_vel, ang_vel_buff, vt::scalar(units::rad_per_s)));
    scm.add(buffer_variable(ang_vel_buff, ang_vel, vt::scalar(units::rad_per_s)));

    scm.add(tssp_variable(rot_delta, prev_ang_vel, vt::scalar(units::radian)));
    scm.add(plain_variable(rot, {prev_rot, rot_delta}, eq::sum(2), vt::scalar(units::radian)));
    scm.add(pts_variable(prev_rot, rot_buff, vt::scalar(units::radian)));
    scm.add(buffer_variable(rot_buff, rot, vt::scalar(units::radian)));

    scm.add(socket_variable(dist_headway,
                            Distribution::degenerate(Value::scalar(kInfiniteHeadway, units::meter)),
                            vt::scalar(units::meter)));
    scm.add(buffer_variable(dist_headway_buff, dist_headway, vt::scalar(units::meter)));

    scm.seed_initial(rot_buff, Value::scalar(spec.seed_rot, units::radian));
    scm.seed_initial(ang_vel_buff, Value::scalar(spec.seed_ang_vel, units::rad_per_s));
    scm.seed_initial(ang_acc_buff, Value::scalar(spec.seed_ang_acc, units::rad_per_s2));
    return scm;
}

// ---------------------------------------------------------------------------
// Entity
// ---------------------------------------------------------------------------

EntityModel build_entity_scm(const Scm& rigid_body, const std::string& prefix,
                             double drag_coefficient, double step_size, double rotational_drag) {
    for (const char* needed : {"env_force", "env_torque", "dist_headway", "lin_vel_buff",
                               "ang_vel_buff"})
        if (!rigid_body.contains(of(prefix, needed)))
            throw GraphError("entity needs a rigid body exposing '" + prefix + needed + "'");

    EntityModel entity{rigid_body, {}, {}, {}};
    Scm& scm = entity.scm;
    scm.set_name(prefix.empty() ? "entity" : prefix + "entity");

    const auto drag_force = of(prefix, "drag_force");
    const auto rot_drag = of(prefix, "rot_drag_torque");
    const auto env_force_total = of(prefix, "env_force_total");
    const auto env_torque_total = of(prefix, "env_torque_total");
    const auto headway_min = of(prefix, "headway_min");

    auto quadratic_drag = make_equation("quadratic_drag", 1, [drag_coefficient](std::span<const Value> a) {
        const Vec2 v = a[0].vec2_of(units::mps);
        return Value::vector2(v * (-drag_coefficient * v.norm()), units::newton);
    });
    scm.add(plain_variable(drag_force, {of(prefix, "lin_vel_buff")}, std::move(quadratic_drag),
                           vt::vector2(units::newton)));

    auto angular_drag = make_equation("angular_drag", 1, [rotational_drag](std::span<const Value> a) {
        return Value::scalar(-rotational_drag * a[0].scalar_of(units::rad_per_s), units::newton_meter);
    });
    scm.add(plain_variable(rot_drag, {of(prefix, "ang_vel_buff")}, std::move(angular_drag),
                           vt::scalar(units::newton_meter)));

    auto drag_plus_forces = make_equation("drag_plus_forces", 2, [](std::span<const Value> a) {
        Vec2 acc = a[0].vec2_of(units::newton);
        if (!a[1].is_empty())
            for (const auto& e : a[1].as_source_set().entries())
                acc = acc + e.payload.vec2_of(units::newton);
        return Value::vector2(acc, units::newton);
    });
    scm.add(plain_variable(env_force_total, {drag_force, drag_force /*placeholder*/},
                           std::move(drag_plus_forces), vt::vector2(units::newton)));
    entity.forces = InputSetChain::create(scm, prefix + "forces.", env_force_total, 1, step_size);

    auto drag_plus_torques = make_equation("drag_plus_torques", 2, [](std::span<const Value> a) {
        double acc = a[0].scalar_of(units::newton_meter);
        if (!a[1].is_empty())
            for (const auto& e : a[1].as_source_set().entries())
                acc += e.payload.scalar_of(units::newton_meter);
        return Value::scalar(acc, units::newton_meter);
    });
    scm.add(plain_variable(env_torque_total, {rot_drag, rot_drag /*placeholder*/},
                           std::move(drag_plus_torques), vt::scalar(units::newton_meter)));
    entity.torques = InputSetChain::create(scm, prefix + "torques.", env_torque_total, 1, step_size);

    auto min_headway = make_equation("min_headway", 1, [](std::span<const Value> a) {
        double best = kInfiniteHeadway;
        if (!a[0].is_empty())
            for (const auto& e : a[0].as_source_set().entries())
                best = std::min(best, e.payload.scalar_of(units::meter));
        return Value::scalar(best, units::meter);
    });
    scm.add(plain_variable(headway_min, {env_force_total /*placeholder*/}, std::move(min_headway),
                           vt::scalar(units::meter)));
    entity.headways = InputSetChain::create(scm, prefix + "headways.", headway_min, 0, step_size);

    scm.bind_socket(of(prefix, "env_force"), env_force_total);
    scm.bind_socket(of(prefix, "env_torque"), env_torque_total);
    scm.bind_socket(of(prefix, "dist_headway"), headway_min);
    return entity;
}

// ---------------------------------------------------------------------------
// Link
// ---------------------------------------------------------------------------

namespace {

struct LinkArgs {
    BodyState a, b;
};

// Argument order shared by the link equations:
// a_pos a_rot a_half_len a_half_wid b_pos b_rot b_half_len b_half_wid
// [a_lin_vel b_lin_vel a_mass b_mass]
LinkArgs link_args(std::span<const Value> v) {
    LinkArgs out;
    out.a.box = obb_from_args(v, 0);
    out.b.box = obb_from_args(v, 4);
    if (v.size() >= 12) {
        out.a.velocity = v[8].vec2_of(units::mps);
        out.b.velocity = v[9].vec2_of(units::mps);
        out.a.mass = v[10].scalar_of(units::kilogram);
        out.b.mass = v[11].scalar_of(units::kilogram);
    }
    return out;
}

} // namespace

Scm build_link_scm(const std::string& prefix, double restitution) {
    Scm scm(prefix.empty() ? "link" : prefix + "link");
    const auto sock = [&](const char* name, ValueType type, Value dflt) {
        const auto id = of(prefix, name);
        scm.add(socket_variable(id, Distribution::degenerate(std::move(dflt)), type));
        return id;
    };

    const auto a_pos = sock("a_pos", vt::vector2(units::meter), Value::vector2(0, 0, units::meter));
    const auto a_rot = sock("a_rot", vt::scalar(units::radian), Value::scalar(0, units::radian));
    const auto a_hl = sock("a_half_len", vt::scalar(units::meter), Value::scalar(1, units::meter));
    const auto a_hw = sock("a_half_wid", vt::scalar(units::meter), Value::scalar(1, units::meter));
    const auto b_pos = sock("b_pos", vt::vector2(units::meter), Value::vector2(0, 0, units::meter));
    const auto b_rot = sock("b_rot", vt::scalar(units::radian), Value::scalar(0, units::radian));
    const auto b_hl = sock("b_half_len", vt::scalar(units::meter), Value::scalar(1, units::meter));
    const auto b_hw = sock("b_half_wid", vt::scalar(units::meter), Value::scalar(1, units::meter));
    const auto a_vel = sock("a_lin_vel", vt::vector2(units::mps), Value::vector2(0, 0, units::mps));
    const auto b_vel = sock("b_lin_vel", vt::vector2(units::mps), Value::vector2(0, 0, units::mps));
    const auto a_mass = sock("a_mass", vt::scalar(units::kilogram), Value::scalar(1, units::kilogram));
    const auto b_mass = sock("b_mass", vt::scalar(units::kilogram), Value::scalar(1, units::kilogram));

    const std::vector<VariableId> geo{a_pos, a_rot, a_hl, a_hw, b_pos, b_rot, b_hl, b_hw};
    std::vector<VariableId> full = geo;
    full.insert(full.end(), {a_vel, b_vel, a_mass, b_mass});

    scm.add(plain_variable(of(prefix, "overlap"), geo,
                           make_equation("obb_overlap", 8,
                                         [](std::span<const Value> v) {
                                             const auto s = link_args(v);
                                             return Value::scalar(
                                                 obb_overlap(s.a.box, s.b.box) ? 1.0 : 0.0);
                                         }),
                           vt::scalar(units::none)));

    scm.add(plain_variable(of(prefix, "closing_speed"), full,
                           make_equation("closing_speed", 12,
                                         [restitution](std::span<const Value> v) {
                                             const auto s = link_args(v);
                                             const auto sol = solve_link(s.a, s.b, restitution);
                                             return Value::scalar(
                                                 sol.overlapping ? sol.closing_speed : 0.0,
                                                 units::mps);
                                         }),
                           vt::scalar(units::mps)));

    scm.add(plain_variable(of(prefix, "coll_delta_v_mag"), full,
                           make_equation("impulse_delta_v", 12,
                                         [restitution](std::span<const Value> v) {
                                             const auto s = link_args(v);
                                             return Value::scalar(
                                                 solve_link(s.a, s.b, restitution).delta_v_a,
                                                 units::mps);
                                         }),
                           vt::scalar(units::mps)));
    // Required acceleration over one step: Δv ÷ C_δt.
    scm.add(tssq_variable(of(prefix, "coll_lin_acc_mag"), of(prefix, "coll_delta_v_mag"),
                          vt::scalar(units::mps2)));

    scm.add(plain_variable(of(prefix, "coll_force_dir_a"), full,
                           make_equation("force_direction", 12,
                                         [restitution](std::span<const Value> v) {
                                             const auto s = link_args(v);
                                             const auto sol = solve_link(s.a, s.b, restitution);
                                             const Vec2 dir =
                                                 sol.impulse > 0 ? -sol.normal : Vec2{};
                                             return Value::vector2(dir, units::none);
                                         }),
                           vt::vector2(units::none)));

    auto mass_times_acc = make_equation("mass_acc_dir", 3, [](std::span<const Value> v) {
        const double mag = v[0].scalar_of(units::mps2) * v[2].scalar_of(units::kilogram);
        return Value::vector2(v[1].vec2_of(units::none) * mag, units::newton);
    });
    scm.add(plain_variable(of(prefix, "a_coll_force"),
                           {of(prefix, "coll_lin_acc_mag"), of(prefix, "coll_force_dir_a"), a_mass},
                           std::move(mass_times_acc), vt::vector2(units::newton)));
    scm.add(plain_variable(of(prefix, "b_coll_force"), {of(prefix, "a_coll_force")}, eq::scale(-1.0),
                           vt::vector2(units::newton)));

    // Torque impulses from the contact lever arm; TSSQ turns N·m·s into N·m.
    auto torque_imp = [restitution](bool for_a) {
        return make_equation(for_a ? "torque_impulse_a" : "torque_impulse_b", 12,
                             [restitution, for_a](std::span<const Value> v) {
                                 const auto s = link_args(v);
                                 const auto sol = solve_link(s.a, s.b, restitution);
                                 if (!(sol.impulse > 0))
                                     return Value::scalar(0.0, Unit{2, 1, -1, 0});
                                 const Vec2 j_vec =
                                     (for_a ? -sol.normal : sol.normal) * sol.impulse;
                                 const Vec2 lever =
                                     sol.contact - (for_a ? s.a.box.center : s.b.box.center);
                                 return Value::scalar(lever.cross(j_vec), Unit{2, 1, -1, 0});
                             });
    };
    scm.add(plain_variable(of(prefix, "a_torque_imp"), full, torque_imp(true),
                           vt::scalar(Unit{2, 1, -1, 0})));
    scm.add(tssq_variable(of(prefix, "a_coll_torque"), of(prefix, "a_torque_imp"),
                          vt::scalar(units::newton_meter)));
    scm.add(plain_variable(of(prefix, "b_torque_imp"), full, torque_imp(false),
                           vt::scalar(Unit{2, 1, -1, 0})));
    scm.add(tssq_variable(of(prefix, "b_coll_torque"), of(prefix, "b_torque_imp"),
                          vt::scalar(units::newton_meter)));

    auto headway_eq = [](bool from_a) {
        return make_equation(from_a ? "headway_a" : "headway_b", 8,
                             [from_a](std::span<const Value> v) {
                                 const auto s = link_args(v);
                                 const auto& follower = from_a ? s.a.box : s.b.box;
                                 const auto& leader = from_a ? s.b.box : s.a.box;
                                 return Value::scalar(
                                     distance_headway(follower, follower.rotation, leader),
                                     units::meter);
                             });
    };
    scm.add(plain_variable(of(prefix, "a_headway"), geo, headway_eq(true), vt::scalar(units::meter)));
    scm.add(plain_variable(of(prefix, "b_headway"), geo, headway_eq(false), vt::scalar(units::meter)));
    return scm;
}

} // namespace causalav
