#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "indyforge/genesis.hpp"
#include "indyforge/roster.hpp"

namespace testsupport {

std::string fixture_path(std::string_view name);
std::string read_fixture(std::string_view name);
nlohmann::json read_fixture_json(std::string_view name);

/// 3 trustees, 4 stewards, strict.
indyforge::Roster fixture_roster();
indyforge::genesis::GenesisDoc fixture_domain();
indyforge::genesis::GenesisDoc fixture_pool();

/// Every seed used to build the fixture, as the 32-byte ASCII strings.
std::vector<std::string> fixture_seeds();

/// Raw, hex (both cases) and base58 renderings of `seed`.
std::vector<std::string> seed_encodings(const std::string& seed);

}  // namespace testsupport
