#include "causalav/temporal.hpp"

#include <algorithm>

namespace causalav {

namespace {
bool write_key_less(const BufferWrite& a, const BufferWrite& b) {
    const auto c = a.buffer.name().compare(b.buffer.name());
    if (c != 0) return c < 0;
    return a.step < b.step;
}
bool write_key_equal(const BufferWrite& a, const BufferWrite& b) {
    return a.buffer == b.buffer && a.step == b.step;
}
} // namespace

std::vector<BufferWrite> union_writes(std::vector<BufferWrite> a, const std::vector<BufferWrite>& b) {
    for (const auto& w : b) {
        auto it = std::lower_bound(a.begin(), a.end(), w, write_key_less);
        if (it != a.end() && write_key_equal(*it, w)) continue;
        a.insert(it, w);
    }
    return a;
}

Buffered buffer_unit(Value v) { return Buffered{std::move(v), {}}; }

Buffered buffer_bind(const Buffered& m, const std::function<Buffered(const Value&)>& f) {
    Buffered next = f(m.value);
    next.writes = union_writes(m.writes, next.writes);
    return next;
}

Buffered buffer_update(VariableId buffer, std::int64_t step, Value v) {
    Buffered out{v, {BufferWrite{buffer, step, std::move(v)}}};
    return out;
}

Scm make_kinematics_demo_scm(double accel_mps2, double v0_mps) {
    namespace kd = kinematics_demo;
    Scm scm("kinematics");
    scm.add(constant_variable(kd::accel, Value::scalar(accel_mps2, units::mps2), vt::scalar(units::mps2)));
    scm.add(tssp_variable(kd::delta_v, kd::accel, vt::scalar(units::mps)));
    scm.add(plain_variable(kd::velocity, {kd::prev_velocity, kd::delta_v}, eq::sum(2),
                           vt::scalar(units::mps)));
    scm.add(pts_variable(kd::prev_velocity, kd::velocity_buffer, vt::scalar(units::mps)));
    scm.add(buffer_variable(kd::velocity_buffer, kd::velocity, vt::scalar(units::mps)));
    scm.seed_initial(kd::velocity_buffer, Value::scalar(v0_mps, units::mps));
    return scm;
}

} // namespace causalav
