#include "causalav/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace causalav {

std::array<Vec2, 2> Obb::axes() const {
    const double c = std::cos(rotation), s = std::sin(rotation);
    return {Vec2{c, s}, Vec2{-s, c}};
}

std::array<Vec2, 4> Obb::corners() const {
    const auto [fwd, lat] = axes();
    const Vec2 fx = fwd * half_extents.x, ly = lat * half_extents.y;
    return {center + fx + ly, center + fx - ly, center - fx - ly, center - fx + ly};
}

namespace {

struct Projection {
    double lo, hi;
};

Projection project(const Obb& box, Vec2 axis) {
    const auto cs = box.corners();
    double lo = cs[0].dot(axis), hi = lo;
    for (int i = 1; i < 4; ++i) {
        const double d = cs[i].dot(axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

} // namespace

bool obb_overlap(const Obb& a, const Obb& b) {
    const auto axes_a = a.axes();
    const auto axes_b = b.axes();
    for (const Vec2& axis : {axes_a[0], axes_a[1], axes_b[0], axes_b[1]}) {
        const auto pa = project(a, axis), pb = project(b, axis);
        if (pa.hi < pb.lo || pb.hi < pa.lo) return false; // strict gap separates
    }
    return true;
}

std::optional<Contact> obb_contact(const Obb& a, const Obb& b) {
    const auto axes_a = a.axes();
    const auto axes_b = b.axes();
    double best_depth = std::numeric_limits<double>::infinity();
    Vec2 best_normal{};
    for (const Vec2& axis : {axes_a[0], axes_a[1], axes_b[0], axes_b[1]}) {
        const auto pa = project(a, axis), pb = project(b, axis);
        if (pa.hi < pb.lo || pb.hi < pa.lo) return std::nullopt;
        // Overlap along this axis and the direction that pushes b away from a.
        const double push_pos = pa.hi - pb.lo; // b sits in +axis direction
        const double push_neg = pb.hi - pa.lo;
        if (push_pos <= push_neg) {
            if (push_pos < best_depth) {
                best_depth = push_pos;
                best_normal = axis;
            }
        } else {
            if (push_neg < best_depth) {
                best_depth = push_neg;
                best_normal = -axis;
            }
        }
    }
    Contact c;
    c.normal = best_normal;
    c.depth = best_depth;
    const auto region = rectangle_intersection(a, b);
    c.point = region.empty() ? (a.center + b.center) / 2.0 : polygon_centroid(region);
    return c;
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 point, Vec2 inward_normal) {
    std::vector<Vec2> out;
    const auto n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 cur = poly[i], nxt = poly[(i + 1) % n];
        const double dc = (cur - point).dot(inward_normal);
        const double dn = (nxt - point).dot(inward_normal);
        if (dc >= 0) out.push_back(cur);
        if ((dc > 0 && dn < 0) || (dc < 0 && dn > 0)) {
            const double t = dc / (dc - dn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    return out;
}

std::vector<Vec2> rectangle_intersection(const Obb& a, const Obb& b) {
    std::vector<Vec2> poly(b.corners().begin(), b.corners().end());
    const auto [fwd, lat] = a.axes();
    const Vec2 fx = fwd * a.half_extents.x, ly = lat * a.half_extents.y;
    poly = clip_halfplane(poly, a.center + fx, -fwd);
    poly = clip_halfplane(poly, a.center - fx, fwd);
    poly = clip_halfplane(poly, a.center + ly, -lat);
    poly = clip_halfplane(poly, a.center - ly, lat);
    return poly;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
    if (poly.empty()) return {};
    if (poly.size() < 3) {
        Vec2 acc{};
        for (const auto& p : poly) acc = acc + p;
        return acc / static_cast<double>(poly.size());
    }
    double area2 = 0.0;
    Vec2 acc{};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
        const double w = p.cross(q);
        area2 += w;
        acc = acc + (p + q) * w;
    }
    if (std::abs(area2) < 1e-12) { // degenerate sliver: average the vertices
        Vec2 mean{};
        for (const auto& p : poly) mean = mean + p;
        return mean / static_cast<double>(poly.size());
    }
    return acc / (3.0 * area2);
}

double distance_headway(const Obb& follower, double heading, const Obb& leader,
                        double corridor_margin) {
    const double c = std::cos(-heading), s = std::sin(-heading);
    auto to_frame = [&](Vec2 p) {
        const Vec2 d = p - follower.center;
        return Vec2{c * d.x - s * d.y, s * d.x + c * d.y};
    };
    std::vector<Vec2> poly;
    for (const auto& corner : leader.corners()) poly.push_back(to_frame(corner));

    const double x_front = follower.half_extents.x;
    const double half_corridor = follower.half_extents.y + corridor_margin;
    poly = clip_halfplane(poly, Vec2{x_front, 0}, Vec2{1, 0});
    poly = clip_halfplane(poly, Vec2{0, half_corridor}, Vec2{0, -1});
    poly = clip_halfplane(poly, Vec2{0, -half_corridor}, Vec2{0, 1});
    if (poly.empty()) return kInfiniteHeadway;

    double min_x = poly[0].x;
    for (const auto& p : poly) min_x = std::min(min_x, p.x);
    return min_x - x_front;
}

} // namespace causalav
