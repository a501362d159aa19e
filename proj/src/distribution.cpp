#include "causalav/distribution.hpp"

#include <cmath>

namespace causalav {

std::uint64_t fnv1a64(std::uint64_t seed, std::string_view bytes) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::uint64_t seed, std::uint64_t word) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ull;
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

// splitmix64: small, stable generator for per-draw streams.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double u01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace

Distribution Distribution::degenerate(Value v) {
    Distribution d;
    d.kind_ = DistributionKind::degenerate;
    d.value_ = std::move(v);
    return d;
}

Distribution Distribution::uniform(double lo, double hi, Unit unit) {
    Distribution d;
    d.kind_ = DistributionKind::uniform;
    d.a_ = lo;
    d.b_ = hi;
    d.unit_ = unit;
    return d;
}

Distribution Distribution::gaussian(double mean, double stddev, Unit unit) {
    Distribution d;
    d.kind_ = DistributionKind::gaussian;
    d.a_ = mean;
    d.b_ = stddev;
    d.unit_ = unit;
    return d;
}

Distribution Distribution::empirical(std::vector<Value> table) {
    if (table.empty()) throw GraphError("empirical distribution needs a non-empty sample table");
    Distribution d;
    d.kind_ = DistributionKind::empirical;
    d.table_ = std::move(table);
    return d;
}

Value Distribution::sample(std::uint64_t stream_seed) const {
    std::uint64_t state = stream_seed;
    switch (kind_) {
    case DistributionKind::degenerate: return value_;
    case DistributionKind::uniform: return Value::scalar(a_ + u01(state) * (b_ - a_), unit_);
    case DistributionKind::gaussian: {
        // Box-Muller; hand-rolled so draws do not depend on the standard
        // library's normal_distribution implementation.
        double u1 = u01(state);
        const double u2 = u01(state);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return Value::scalar(a_ + b_ * r * std::cos(2.0 * M_PI * u2), unit_);
    }
    case DistributionKind::empirical: {
        const auto idx = static_cast<std::size_t>(u01(state) * static_cast<double>(table_.size()));
        return table_[idx < table_.size() ? idx : table_.size() - 1];
    }
    }
    return Value::empty();
}

const Value& Distribution::degenerate_value() const {
    if (kind_ != DistributionKind::degenerate)
        throw GraphError("distribution is not degenerate");
    return value_;
}

bool Distribution::operator==(const Distribution& o) const {
    return kind_ == o.kind_ && value_ == o.value_ && a_ == o.a_ && b_ == o.b_ && unit_ == o.unit_ &&
           table_ == o.table_;
}

} // namespace causalav
