#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdoc {

using Bytes = std::vector<std::uint8_t>;

/// Lowercase hex, two characters per byte.
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Accepts upper or lower case; nullopt on odd length or a non-hex character.
std::optional<Bytes> from_hex(std::string_view text);

bool is_lower_hex(std::string_view text) noexcept;

inline std::span<const std::uint8_t> as_bytes(std::string_view s) noexcept
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

} // namespace sdoc
