#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "causalav/errors.hpp"
#include "causalav/units.hpp"

namespace causalav {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr bool operator==(const Vec2&) const = default;
    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// 2D cross product (z component of the 3D cross).
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double k, const Vec2& v) { return v * k; }

/// Unit-tagged real.
struct Scalar {
    double value = 0.0;
    Unit unit{};
    constexpr bool operator==(const Scalar&) const = default;
};

/// Unit-tagged planar quantity.
struct Vector2 {
    Vec2 v{};
    Unit unit{};
    constexpr bool operator==(const Vector2&) const = default;
};

/// A point on the simulation timeline (timestamp, not a duration).
struct TimePoint {
    double seconds = 0.0;
    constexpr bool operator==(const TimePoint&) const = default;
};

struct LaneRef {
    int id = 0;
    constexpr bool operator==(const LaneRef&) const = default;
};

/// A planned goal: target speed and lane with the absolute times by which
/// each should be reached.
struct Action {
    double goal_speed = 0.0;      // m/s
    double speed_goal_time = 0.0; // s, absolute, on the grid
    int goal_lane = 0;
    double lane_goal_time = 0.0;  // s, absolute, on the grid
    constexpr bool operator==(const Action&) const = default;
};

/// The distinguished empty value.
struct Empty {
    constexpr bool operator==(const Empty&) const = default;
};

enum class ValueTag : std::uint8_t {
    empty,
    scalar,
    vector2,
    time,
    lane,
    action,
    source_set,
    any, // only valid as a declared type, never as a runtime tag
};

std::string_view to_string(ValueTag tag);

class Value;

struct SourceEntry; // { source_id, payload }

/// Set of (source_id, payload) pairs; ids unique, kept sorted by id so that
/// equal sets compare equal regardless of construction order.
class SourceSet {
public:
    SourceSet() = default;

    void insert(std::uint32_t source_id, Value payload); // throws GraphError on duplicate id
    bool contains(std::uint32_t source_id) const;
    const Value* find(std::uint32_t source_id) const;
    std::size_t size() const;
    bool empty() const;
    const std::vector<SourceEntry>& entries() const;

    /// Set union; duplicate ids across both operands are an error.
    static SourceSet merged(const SourceSet& a, const SourceSet& b);

    bool operator==(const SourceSet& o) const;

private:
    std::vector<SourceEntry> entries_;
};

class Value {
public:
    using Data = std::variant<Empty, Scalar, Vector2, TimePoint, LaneRef, Action, SourceSet>;

    Value() : data_(Empty{}) {}
    Value(Empty e) : data_(e) {}
    Value(Scalar s) : data_(s) {}
    Value(Vector2 v) : data_(std::move(v)) {}
    Value(TimePoint t) : data_(t) {}
    Value(LaneRef l) : data_(l) {}
    Value(Action a) : data_(a) {}
    Value(SourceSet s) : data_(std::move(s)) {}

    static Value scalar(double v, Unit u = units::none) { return Value(Scalar{v, u}); }
    static Value vector2(double x, double y, Unit u = units::none) { return Value(Vector2{{x, y}, u}); }
    static Value vector2(Vec2 v, Unit u = units::none) { return Value(Vector2{v, u}); }
    static Value time(double seconds) { return Value(TimePoint{seconds}); }
    static Value lane(int id) { return Value(LaneRef{id}); }
    static Value empty() { return Value(Empty{}); }

    ValueTag tag() const { return static_cast<ValueTag>(data_.index()); }
    bool is_empty() const { return tag() == ValueTag::empty; }

    /// Checked accessors; throw EvalError on tag mismatch.
    const Scalar& as_scalar() const;
    const Vector2& as_vector2() const;
    const TimePoint& as_time() const;
    const LaneRef& as_lane() const;
    const Action& as_action() const;
    const SourceSet& as_source_set() const;

    /// Scalar value after checking both tag and unit.
    double scalar_of(Unit expected) const;
    Vec2 vec2_of(Unit expected) const;

    const Data& data() const { return data_; }

    bool operator==(const Value& o) const { return data_ == o.data_; }

    /// Max absolute numeric discrepancy between two values of the same
    /// shape; +inf when shapes or discrete fields differ. Used by the
    /// roll-out equivalence checker.
    static double abs_difference(const Value& a, const Value& b);

    std::string to_string() const;

private:
    Data data_;
};

struct SourceEntry {
    std::uint32_t source_id = 0;
    Value payload;
    bool operator==(const SourceEntry&) const = default;
};

} // namespace causalav
