#pragma once

#include <string>

#include "causalav/composition.hpp"
#include "causalav/geometry.hpp"
#include "causalav/scm.hpp"

namespace causalav {

/// 2D dynamic point mass: position/velocity/acceleration chains driven by
/// environment and "other" (self-propulsion) force inputs.
struct PointMassSpec {
    double mass = 1200.0; // kg
    Vec2 seed_pos{};      // m
    Vec2 seed_lin_vel{};  // m/s
    Vec2 seed_lin_acc{};  // m/s²
};

/// Rectangular rigid body: adds rotation chains, torques, footprint and the
/// distance-headway input.
struct RigidBodySpec {
    PointMassSpec point_mass;
    double length = 4.0;              // m
    double width = 1.8;               // m
    double moment_of_inertia = 1924.0; // kg·m²
    double seed_rot = 0.0;            // rad
    double seed_ang_vel = 0.0;        // rad/s
    double seed_ang_acc = 0.0;        // rad/s²

    static double box_inertia(double mass, double length, double width) {
        return mass * (length * length + width * width) / 12.0;
    }
};

/// Builds the point-mass SCM. All ids carry `prefix` (e.g. "a1."), keeping
/// instances disjoint for merging into scenes. Sockets env_force and
/// other_force default to zero force; the pos/lin_vel/lin_acc buffers are
/// seeded from the spec.
Scm build_point_mass_scm(const PointMassSpec& spec, const std::string& prefix = "");

/// Extends the point mass with rot/ang_vel/ang_acc chains, torque sockets,
/// the footprint constants, and the (buffered) distance-headway socket,
/// which defaults to the +inf sentinel while unbound.
Scm build_rigid_body_scm(const RigidBodySpec& spec, const std::string& prefix = "");

/// A rigid body situated in a shared environment: drag plus collected link
/// collision forces/torques feed env_force/env_torque, and the minimum over
/// link headways feeds dist_headway. Adds no buffer variables. The returned
/// chains accept link outputs via introduce_source/introduce_source_windowed.
struct EntityModel {
    Scm scm;
    InputSetChain forces;   // payloads: N vector2
    InputSetChain torques;  // payloads: N·m scalar
    InputSetChain headways; // payloads: m scalar (+inf allowed)
};

EntityModel build_entity_scm(const Scm& rigid_body, const std::string& prefix, double drag_coefficient,
                             double step_size, double rotational_drag = 50.0);

/// Pairwise interaction SCM between two rectangular rigid bodies: OBB
/// overlap, an inelastic impulse (restitution configurable) spread over one
/// step via TSSQ nodes, contact torques from the overlap centroid, and both
/// directed distance headways. The a_*/b_* sockets are bound to the two
/// bodies' state buffers at scene assembly.
Scm build_link_scm(const std::string& prefix, double restitution = 0.0);

/// Kinematic state consumed by the link solver.
struct BodyState {
    Obb box;
    Vec2 velocity{}; // m/s, world frame
    double mass = 1.0;
};

/// Impulse solution for one body pair. Forces act only while the boxes
/// overlap and approach each other; equal-and-opposite by construction.
struct LinkSolve {
    bool overlapping = false;
    double closing_speed = 0.0; // m/s along the contact normal, >= 0
    Vec2 normal{};              // from a into b
    Vec2 contact{};
    double delta_v_a = 0.0;     // |Δv| for body a (j / m_a)
    double impulse = 0.0;       // j, N·s
};

LinkSolve solve_link(const BodyState& a, const BodyState& b, double restitution);

namespace body_ids {
// Node-name helpers for a body/entity/car instance with id prefix `p`.
inline VariableId of(const std::string& p, const char* name) { return VariableId(p + name); }
} // namespace body_ids

} // namespace causalav
