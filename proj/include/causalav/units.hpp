#pragma once

#include <cstdint>
#include <string>

namespace causalav {

/// SI dimension exponents over the base dimensions this project needs.
/// Multiplying or dividing a value by the time step size shifts the `s`
/// exponent; edge construction compares units for exact equality.
struct Unit {
    std::int8_t m = 0;
    std::int8_t kg = 0;
    std::int8_t s = 0;
    std::int8_t rad = 0;

    constexpr bool operator==(const Unit&) const = default;

    constexpr Unit operator*(const Unit& o) const {
        return Unit{static_cast<std::int8_t>(m + o.m), static_cast<std::int8_t>(kg + o.kg),
                    static_cast<std::int8_t>(s + o.s), static_cast<std::int8_t>(rad + o.rad)};
    }
    constexpr Unit operator/(const Unit& o) const {
        return Unit{static_cast<std::int8_t>(m - o.m), static_cast<std::int8_t>(kg - o.kg),
                    static_cast<std::int8_t>(s - o.s), static_cast<std::int8_t>(rad - o.rad)};
    }
};

namespace units {
inline constexpr Unit none{};
inline constexpr Unit meter{1, 0, 0, 0};
inline constexpr Unit kilogram{0, 1, 0, 0};
inline constexpr Unit second{0, 0, 1, 0};
inline constexpr Unit radian{0, 0, 0, 1};
inline constexpr Unit mps{1, 0, -1, 0};
inline constexpr Unit mps2{1, 0, -2, 0};
inline constexpr Unit newton{1, 1, -2, 0};
inline constexpr Unit newton_meter{2, 1, -2, 0};
inline constexpr Unit rad_per_s{0, 0, -1, 1};
inline constexpr Unit rad_per_s2{0, 0, -2, 1};
inline constexpr Unit kg_m2{2, 1, 0, 0};
} // namespace units

/// Human-readable form, e.g. "m/s^2", "N·m", "1" for dimensionless.
std::string to_string(const Unit& u);

} // namespace causalav
