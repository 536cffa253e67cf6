#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace indyforge::base58 {

/// Bitcoin alphabet. Leading zero bytes map to leading '1' characters.
std::string encode(std::span<const std::uint8_t> bytes);

/// std::nullopt on any character outside the alphabet (whitespace included).
std::optional<std::vector<std::uint8_t>> decode(std::string_view text);

}  // namespace indyforge::base58
