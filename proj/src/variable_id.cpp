#include "causalav/variable_id.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace causalav {

namespace {

struct InternTable {
    std::mutex mu;
    std::deque<std::string> names{""}; // sym 0 reserved for the empty name
    std::unordered_map<std::string_view, std::uint32_t> index{{std::string_view(""), 0u}};

    std::uint32_t intern(std::string_view name) {
        std::lock_guard lock(mu);
        if (auto it = index.find(name); it != index.end()) return it->second;
        names.emplace_back(name);
        const auto sym = static_cast<std::uint32_t>(names.size() - 1);
        index.emplace(std::string_view(names.back()), sym);
        return sym;
    }

    std::string_view lookup(std::uint32_t sym) {
        std::lock_guard lock(mu);
        return names[sym];
    }
};

InternTable& table() {
    static InternTable t;
    return t;
}

} // namespace

VariableId::VariableId(std::string_view name) : sym_(table().intern(name)) {}

std::string_view VariableId::name() const { return table().lookup(sym_); }

} // namespace causalav
