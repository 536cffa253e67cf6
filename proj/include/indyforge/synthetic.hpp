#pragma once

#include <cstddef>
#include <string_view>

#include "indyforge/keymat.hpp"
#include "indyforge/roster.hpp"

/// Deterministic participants for simulations and measurements. Index k
/// uses the seeds "…Trustee<k>", "…Steward<k>" and "…Node<k>" (left padded
/// with '0' to 32 bytes) and the address 10.0.0.<k+1> (carrying into the
/// upper octets past 254), so k = 1..4 reproduces the shipped fixture
/// roster exactly.
namespace indyforge::synthetic {

keymat::Seed padded_seed(std::string_view label);

ParticipantRecord trustee(std::size_t k);
StewardEntry steward(std::size_t k);

/// Trustees 1..trustees and stewards 1..validators, validated.
Roster roster(std::size_t trustees, std::size_t validators, bool strict);

}  // namespace indyforge::synthetic
