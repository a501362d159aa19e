#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalav/value.hpp"

namespace causalav {

/// One straight lane of a highway segment running along the x axis.
struct Lane {
    int id = 0;
    double center_y = 0.0; // m
    double width = 3.5;    // m
    int direction = 1;     // +1 along +x, -1 along -x
};

/// Straight multi-lane road geometry (the highD idiom): lanes are ordered,
/// non-overlapping horizontal bands.
class RoadGeometry {
public:
    RoadGeometry() = default;
    explicit RoadGeometry(std::vector<Lane> lanes);

    const std::vector<Lane>& lanes() const { return lanes_; }
    const Lane* find(int id) const;
    const Lane& at(int id) const; // throws GraphError on unknown id
    bool empty() const { return lanes_.empty(); }

    /// Closest point of the lane's central path to `p`.
    Vec2 project_to_centerline(int lane_id, Vec2 p) const;

    /// Lane whose band contains `p` (nearest centerline as a fallback).
    int lane_at(Vec2 p) const;

    /// The lane and its direct neighbors sharing the travel direction;
    /// candidate goal lanes for a planner near `p`.
    std::vector<int> adjacent_lanes(int lane_id) const;

    /// Heading of travel for the lane (0 or pi).
    double lane_heading(int lane_id) const;

    /// Throws IoError on empty roster, non-positive widths, or overlaps.
    void check() const;

private:
    std::vector<Lane> lanes_;
};

} // namespace causalav
