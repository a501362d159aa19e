#include "causalav/value.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace causalav {

std::string to_string(const Unit& u) {
    if (u == Unit{}) return "1";
    struct Part {
        const char* sym;
        int exp;
    };
    const Part parts[] = {{"m", u.m}, {"kg", u.kg}, {"s", u.s}, {"rad", u.rad}};
    // Recognize a few common composites for readability.
    if (u == units::newton) return "N";
    if (u == units::newton_meter) return "N·m";
    std::string num, den;
    for (const auto& p : parts) {
        if (p.exp == 0) continue;
        std::string& side = p.exp > 0 ? num : den;
        if (!side.empty()) side += "·";
        side += p.sym;
        const int e = std::abs(p.exp);
        if (e != 1) side += "^" + std::to_string(e);
    }
    if (num.empty()) num = "1";
    return den.empty() ? num : num + "/" + den;
}

std::string_view to_string(ValueTag tag) {
    switch (tag) {
    case ValueTag::empty: return "empty";
    case ValueTag::scalar: return "scalar";
    case ValueTag::vector2: return "vector2";
    case ValueTag::time: return "time";
    case ValueTag::lane: return "lane";
    case ValueTag::action: return "action";
    case ValueTag::source_set: return "source_set";
    case ValueTag::any: return "any";
    }
    return "?";
}

namespace {
[[noreturn]] void tag_error(ValueTag want, ValueTag got) {
    throw EvalError("value type mismatch: expected " + std::string(to_string(want)) + ", got " +
                    std::string(to_string(got)));
}
} // namespace

const Scalar& Value::as_scalar() const {
    if (auto* p = std::get_if<Scalar>(&data_)) return *p;
    tag_error(ValueTag::scalar, tag());
}
const Vector2& Value::as_vector2() const {
    if (auto* p = std::get_if<Vector2>(&data_)) return *p;
    tag_error(ValueTag::vector2, tag());
}
const TimePoint& Value::as_time() const {
    if (auto* p = std::get_if<TimePoint>(&data_)) return *p;
    tag_error(ValueTag::time, tag());
}
const LaneRef& Value::as_lane() const {
    if (auto* p = std::get_if<LaneRef>(&data_)) return *p;
    tag_error(ValueTag::lane, tag());
}
const Action& Value::as_action() const {
    if (auto* p = std::get_if<Action>(&data_)) return *p;
    tag_error(ValueTag::action, tag());
}
const SourceSet& Value::as_source_set() const {
    if (auto* p = std::get_if<SourceSet>(&data_)) return *p;
    tag_error(ValueTag::source_set, tag());
}

double Value::scalar_of(Unit expected) const {
    const Scalar& s = as_scalar();
    if (!(s.unit == expected))
        throw EvalError("unit mismatch: expected " + causalav::to_string(expected) + ", got " +
                        causalav::to_string(s.unit));
    return s.value;
}

Vec2 Value::vec2_of(Unit expected) const {
    const Vector2& s = as_vector2();
    if (!(s.unit == expected))
        throw EvalError("unit mismatch: expected " + causalav::to_string(expected) + ", got " +
                        causalav::to_string(s.unit));
    return s.v;
}

void SourceSet::insert(std::uint32_t source_id, Value payload) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), source_id,
                               [](const SourceEntry& e, std::uint32_t id) { return e.source_id < id; });
    if (it != entries_.end() && it->source_id == source_id)
        throw GraphError("duplicate source_id " + std::to_string(source_id) + " in source set");
    entries_.insert(it, SourceEntry{source_id, std::move(payload)});
}

bool SourceSet::contains(std::uint32_t source_id) const { return find(source_id) != nullptr; }

const Value* SourceSet::find(std::uint32_t source_id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), source_id,
                               [](const SourceEntry& e, std::uint32_t id) { return e.source_id < id; });
    if (it != entries_.end() && it->source_id == source_id) return &it->payload;
    return nullptr;
}

std::size_t SourceSet::size() const { return entries_.size(); }
bool SourceSet::empty() const { return entries_.empty(); }
const std::vector<SourceEntry>& SourceSet::entries() const { return entries_; }

SourceSet SourceSet::merged(const SourceSet& a, const SourceSet& b) {
    SourceSet out = a;
    for (const auto& e : b.entries_) out.insert(e.source_id, e.payload);
    return out;
}

bool SourceSet::operator==(const SourceSet& o) const { return entries_ == o.entries_; }

double Value::abs_difference(const Value& a, const Value& b) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (a.tag() != b.tag()) return kInf;
    switch (a.tag()) {
    case ValueTag::empty: return 0.0;
    case ValueTag::scalar: {
        const auto &x = a.as_scalar(), &y = b.as_scalar();
        if (!(x.unit == y.unit)) return kInf;
        if (std::isinf(x.value) && std::isinf(y.value) && x.value == y.value) return 0.0;
        return std::abs(x.value - y.value);
    }
    case ValueTag::vector2: {
        const auto &x = a.as_vector2(), &y = b.as_vector2();
        if (!(x.unit == y.unit)) return kInf;
        return std::max(std::abs(x.v.x - y.v.x), std::abs(x.v.y - y.v.y));
    }
    case ValueTag::time: return std::abs(a.as_time().seconds - b.as_time().seconds);
    case ValueTag::lane: return a.as_lane() == b.as_lane() ? 0.0 : kInf;
    case ValueTag::action: {
        const auto &x = a.as_action(), &y = b.as_action();
        if (x.goal_lane != y.goal_lane) return kInf;
        double d = std::abs(x.goal_speed - y.goal_speed);
        d = std::max(d, std::abs(x.speed_goal_time - y.speed_goal_time));
        d = std::max(d, std::abs(x.lane_goal_time - y.lane_goal_time));
        return d;
    }
    case ValueTag::source_set: {
        const auto &x = a.as_source_set(), &y = b.as_source_set();
        if (x.size() != y.size()) return kInf;
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto &ex = x.entries()[i], &ey = y.entries()[i];
            if (ex.source_id != ey.source_id) return kInf;
            d = std::max(d, abs_difference(ex.payload, ey.payload));
        }
        return d;
    }
    case ValueTag::any: break;
    }
    return kInf;
}

namespace {
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
} // namespace

std::string Value::to_string() const {
    switch (tag()) {
    case ValueTag::empty: return "∅";
    case ValueTag::scalar: {
        const auto& s = as_scalar();
        return fmt_double(s.value) + " " + causalav::to_string(s.unit);
    }
    case ValueTag::vector2: {
        const auto& s = as_vector2();
        return "(" + fmt_double(s.v.x) + ", " + fmt_double(s.v.y) + ") " + causalav::to_string(s.unit);
    }
    case ValueTag::time: return fmt_double(as_time().seconds) + " s";
    case ValueTag::lane: return "lane " + std::to_string(as_lane().id);
    case ValueTag::action: {
        const auto& a = as_action();
        return "action(speed " + fmt_double(a.goal_speed) + " by " + fmt_double(a.speed_goal_time) +
               ", lane " + std::to_string(a.goal_lane) + " by " + fmt_double(a.lane_goal_time) + ")";
    }
    case ValueTag::source_set: {
        std::string out = "{";
        for (const auto& e : as_source_set().entries()) {
            if (out.size() > 1) out += ", ";
            out += std::to_string(e.source_id) + ": " + e.payload.to_string();
        }
        return out + "}";
    }
    case ValueTag::any: break;
    }
    return "?";
}

} // namespace causalav
