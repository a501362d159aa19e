#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace causalav {

/// Interned variable name. Equal names map to equal ids process-wide, so
/// ids stay stable across merge/split and SCM copies while comparisons and
/// map keys stay integer-cheap.
class VariableId {
public:
    VariableId() : sym_(0) {} // the empty name
    explicit VariableId(std::string_view name);

    std::string_view name() const;
    std::uint32_t sym() const { return sym_; }

    bool operator==(const VariableId&) const = default;
    auto operator<=>(const VariableId& o) const { return name().compare(o.name()) <=> 0; }

private:
    std::uint32_t sym_;
};

struct VariableIdHash {
    std::size_t operator()(const VariableId& id) const noexcept { return id.sym(); }
};

inline VariableId operator""_var(const char* s, std::size_t n) { return VariableId(std::string_view(s, n)); }

} // namespace causalav

template <> struct std::hash<causalav::VariableId> {
    std::size_t operator()(const causalav::VariableId& id) const noexcept { return id.sym(); }
};
