#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "modde/core.hpp"

namespace modde::detail {

template <typename Enum, std::size_t N>
Enum parse_tag(const std::array<std::string_view, N>& names, std::string_view text,
               std::string_view what)
{
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) {
            return static_cast<Enum>(i);
        }
    }
    std::string message = "unknown " + std::string(what) + " '" + std::string(text) + "'; valid: ";
    for (std::size_t i = 0; i < N; ++i) {
        message += (i == 0 ? "" : ", ");
        message += names[i];
    }
    throw ConfigError(message);
}

/// Filesystem-safe form of a tag ("rand/2/dir" -> "rand-2-dir").
inline std::string path_safe(std::string_view tag)
{
    std::string out(tag);
    for (auto& c : out) {
        if (c == '/') {
            c = '-';
        }
    }
    return out;
}

} // namespace modde::detail
