#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "causalav/value.hpp"

namespace causalav {

/// Deterministic 64-bit stream hash; stable across platforms and runs.
std::uint64_t fnv1a64(std::uint64_t seed, std::string_view bytes);
std::uint64_t fnv1a64(std::uint64_t seed, std::uint64_t word);

enum class DistributionKind : std::uint8_t { degenerate, uniform, gaussian, empirical };

/// Forward-sampling distribution over Values. Sampling is a pure function
/// of the stream seed, so equal seeds reproduce equal draws everywhere.
class Distribution {
public:
    /// Default: degenerate at the empty value.
    Distribution() = default;

    static Distribution degenerate(Value v);
    static Distribution uniform(double lo, double hi, Unit unit = units::none);
    static Distribution gaussian(double mean, double stddev, Unit unit = units::none);
    static Distribution empirical(std::vector<Value> table);

    Value sample(std::uint64_t stream_seed) const;

    DistributionKind kind() const { return kind_; }
    /// The value of a degenerate distribution.
    const Value& degenerate_value() const;

    bool operator==(const Distribution& o) const;

private:
    DistributionKind kind_ = DistributionKind::degenerate;
    Value value_;             // degenerate
    double a_ = 0.0, b_ = 0.0; // uniform lo/hi or gaussian mean/stddev
    Unit unit_{};
    std::vector<Value> table_; // empirical
};

} // namespace causalav
