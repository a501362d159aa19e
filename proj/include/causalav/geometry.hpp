#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "causalav/value.hpp"

namespace causalav {

inline constexpr double kInfiniteHeadway = std::numeric_limits<double>::infinity();

/// Oriented bounding box: rectangle footprint of a rigid body.
struct Obb {
    Vec2 center{};
    Vec2 half_extents{}; // x along the body's forward axis, y lateral
    double rotation = 0.0;

    std::array<Vec2, 4> corners() const;
    /// Body axes in world frame: [forward, lateral].
    std::array<Vec2, 2> axes() const;
};

/// Separating-axis overlap test; a shared boundary counts as overlap.
bool obb_overlap(const Obb& a, const Obb& b);

struct Contact {
    Vec2 normal{};      // unit, pointing from a into b
    double depth = 0.0; // penetration along the normal
    Vec2 point{};       // centroid of the overlap region
};

/// Contact data when the boxes overlap, nullopt otherwise.
std::optional<Contact> obb_contact(const Obb& a, const Obb& b);

/// Longitudinal gap from the follower's front face to the nearest point of
/// the leader's footprint inside the follower's lane corridor (follower
/// width plus margin on each side). +inf when the leader is not ahead
/// within the corridor.
double distance_headway(const Obb& follower, double heading, const Obb& leader,
                        double corridor_margin = 0.25);

// Convex polygon helpers (clipping is enough for rectangle intersections).
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 point, Vec2 inward_normal);
std::vector<Vec2> rectangle_intersection(const Obb& a, const Obb& b);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);

} // namespace causalav
