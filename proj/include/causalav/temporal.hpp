#pragma once

#include <functional>
#include <vector>

#include "causalav/scm.hpp"

namespace causalav {

/// One pending time-indexed write of the buffer effect.
struct BufferWrite {
    VariableId buffer;
    std::int64_t step = 0;
    Value value;
    bool operator==(const BufferWrite&) const = default;
};

/// The buffer effect: a value together with the set of writes accumulated
/// while producing it. Writes are a set keyed by (buffer, step); union keeps
/// the first entry per key and the collection stays sorted, so equal sets
/// compare equal regardless of accumulation order.
struct Buffered {
    Value value;
    std::vector<BufferWrite> writes;

    bool operator==(const Buffered&) const = default;
};

/// Wraps a value with an empty pending-write set.
Buffered buffer_unit(Value v);

/// Sequences the effect: applies `f` to the wrapped value and unions the
/// pending-write sets of both stages.
Buffered buffer_bind(const Buffered& m, const std::function<Buffered(const Value&)>& f);

/// A single write tuple created and recorded at construction time.
Buffered buffer_update(VariableId buffer, std::int64_t step, Value v);

/// Normalized union of write sets (sorted, first write per key wins).
std::vector<BufferWrite> union_writes(std::vector<BufferWrite> a, const std::vector<BufferWrite>& b);

/// The didactic velocity-from-acceleration model: constant acceleration `a`,
/// delta_v = a · δt, v = prev_v + delta_v with prev_v reaching through the
/// velocity buffer one step back. v is seeded with `v0` at t = 0.
Scm make_kinematics_demo_scm(double accel_mps2 = 1.0, double v0_mps = 0.0);

namespace kinematics_demo {
inline const VariableId accel{"a"};
inline const VariableId delta_v{"delta_v"};
inline const VariableId velocity{"v"};
inline const VariableId prev_velocity{"prev_v"};
inline const VariableId velocity_buffer{"v_buff"};
} // namespace kinematics_demo

} // namespace causalav
