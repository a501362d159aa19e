#include "causalav/road.hpp"

#include <algorithm>
#include <cmath>

#include "causalav/errors.hpp"

namespace causalav {

RoadGeometry::RoadGeometry(std::vector<Lane> lanes) : lanes_(std::move(lanes)) {
    std::sort(lanes_.begin(), lanes_.end(),
              [](const Lane& a, const Lane& b) { return a.center_y < b.center_y; });
}

const Lane* RoadGeometry::find(int id) const {
    for (const auto& l : lanes_)
        if (l.id == id) return &l;
    return nullptr;
}

const Lane& RoadGeometry::at(int id) const {
    if (const Lane* l = find(id)) return *l;
    throw GraphError("unknown lane id " + std::to_string(id));
}

Vec2 RoadGeometry::project_to_centerline(int lane_id, Vec2 p) const {
    return Vec2{p.x, at(lane_id).center_y};
}

int RoadGeometry::lane_at(Vec2 p) const {
    if (lanes_.empty()) throw GraphError("road has no lanes");
    const Lane* best = &lanes_.front();
    double best_d = std::abs(p.y - best->center_y);
    for (const auto& l : lanes_) {
        const double d = std::abs(p.y - l.center_y);
        if (d < best_d) {
            best = &l;
            best_d = d;
        }
    }
    return best->id;
}

std::vector<int> RoadGeometry::adjacent_lanes(int lane_id) const {
    std::vector<int> out;
    std::size_t idx = lanes_.size();
    for (std::size_t i = 0; i < lanes_.size(); ++i)
        if (lanes_[i].id == lane_id) idx = i;
    if (idx == lanes_.size()) throw GraphError("unknown lane id " + std::to_string(lane_id));
    const int dir = lanes_[idx].direction;
    if (idx > 0 && lanes_[idx - 1].direction == dir) out.push_back(lanes_[idx - 1].id);
    out.push_back(lane_id);
    if (idx + 1 < lanes_.size() && lanes_[idx + 1].direction == dir) out.push_back(lanes_[idx + 1].id);
    return out;
}

double RoadGeometry::lane_heading(int lane_id) const {
    return at(lane_id).direction >= 0 ? 0.0 : M_PI;
}

void RoadGeometry::check() const {
    if (lanes_.empty()) throw IoError("road needs at least one lane");
    for (const auto& l : lanes_)
        if (!(l.width > 0)) throw IoError("lane " + std::to_string(l.id) + " has non-positive width");
    for (std::size_t i = 0; i + 1 < lanes_.size(); ++i) {
        const double hi = lanes_[i].center_y + lanes_[i].width / 2;
        const double lo = lanes_[i + 1].center_y - lanes_[i + 1].width / 2;
        if (hi - lo > 1e-9)
            throw IoError("lanes " + std::to_string(lanes_[i].id) + " and " +
                          std::to_string(lanes_[i + 1].id) + " overlap");
    }
    for (std::size_t i = 0; i < lanes_.size(); ++i)
        for (std::size_t j = i + 1; j < lanes_.size(); ++j)
            if (lanes_[i].id == lanes_[j].id) throw IoError("duplicate lane id");
}

} // namespace causalav
