#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace indyforge {

enum class Role { Trustee, Steward };

std::string_view to_string(Role role);

/// An (ip, port) pair. `ip` holds the canonical text form of an IPv4 or
/// IPv6 address so equal addresses compare equal.
struct Endpoint {
  std::string ip;
  std::uint16_t port = 0;

  auto operator<=>(const Endpoint&) const = default;
};

std::string to_string(const Endpoint& endpoint);

/// Parses and canonicalises an address and a decimal port in 1..65535.
/// Throws Error(BadEndpoint).
Endpoint parse_endpoint(std::string_view ip, std::string_view port);

struct ParticipantRecord {
  std::string name;
  std::string did;
  std::string verkey;
  Role role = Role::Trustee;

  bool operator==(const ParticipantRecord&) const = default;
};

struct ValidatorInfo {
  std::string alias;
  Endpoint node;    // validator-to-validator channel
  Endpoint client;  // client-to-validator channel
  std::string verkey;
  std::string bls_key;
  std::string bls_pop;
  std::string steward_did;

  bool operator==(const ValidatorInfo&) const = default;
};

/// One row of the steward sheet: the organisation and the node it runs.
struct StewardEntry {
  ParticipantRecord steward;
  ValidatorInfo validator;

  bool operator==(const StewardEntry&) const = default;
};

struct Roster {
  std::vector<ParticipantRecord> trustees;
  std::vector<ParticipantRecord> stewards;
  std::vector<ValidatorInfo> validators;
  bool strict = true;

  bool operator==(const Roster&) const = default;
};

}  // namespace indyforge

namespace indyforge::roster {

inline constexpr std::string_view kTrusteeHeader = "name,did,verkey";
inline constexpr std::string_view kStewardHeader =
    "name,did,verkey,alias,node_ip,node_port,client_ip,client_port,node_verkey,bls_key,bls_pop";

inline constexpr std::size_t kMinProductionTrustees = 3;
inline constexpr std::size_t kGenesisStewards = 4;

// Diagnostics carry "file", "row" (1-based data row) and "line" (1-based
// physical line) in Error::context().

std::vector<ParticipantRecord> parse_trustee_csv(std::string_view content,
                                                 std::string_view file_name = "trustees.csv");

std::vector<StewardEntry> parse_steward_csv(std::string_view content,
                                            std::string_view file_name = "stewards.csv");

/// A single header-less steward row, as passed to `node add`.
StewardEntry parse_steward_row(std::string_view row);

/// Uniqueness rules always apply; `strict` adds the production counting
/// rules (at least 3 trustees, exactly 4 genesis stewards).
Roster validate_roster(std::vector<ParticipantRecord> trustees, std::vector<StewardEntry> steward_entries,
                       bool strict);

/// Zips stewards and validators back into sheet rows.
std::vector<StewardEntry> steward_entries(const Roster& roster);

}  // namespace indyforge::roster
