#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "indyforge/roster.hpp"

namespace indyforge::genesis {

enum class Kind { Domain, Pool };

std::string_view to_string(Kind kind);

inline constexpr std::string_view kDomainFileName = "domain_transactions_genesis";
inline constexpr std::string_view kPoolFileName = "pool_transactions_genesis";

inline constexpr std::string_view kRoleTrustee = "0";
inline constexpr std::string_view kRoleSteward = "2";
inline constexpr std::string_view kTypeNode = "0";
inline constexpr std::string_view kTypeNym = "1";
inline constexpr std::string_view kServiceValidator = "VALIDATOR";

/// Registers an identity with a role.
struct NymTxn {
  std::string dest;       // did
  std::string verkey;
  std::string role_code;  // "0" trustee, "2" steward
  std::optional<std::string> alias;

  bool operator==(const NymTxn&) const = default;
};

struct NodeData {
  std::string alias;
  Endpoint node;
  Endpoint client;
  std::string blskey;
  std::string blskey_pop;
  std::vector<std::string> services{std::string(kServiceValidator)};

  bool operator==(const NodeData&) const = default;
};

/// Registers a validator node on behalf of the steward `from`.
struct NodeTxn {
  std::string dest;  // node verkey
  NodeData data;
  std::string from;  // steward did

  bool operator==(const NodeTxn&) const = default;
};

using Txn = std::variant<NymTxn, NodeTxn>;

struct Entry {
  std::uint64_t seq_no = 0;
  std::string txn_id;  // lowercase hex SHA-256
  Txn txn;

  bool operator==(const Entry&) const = default;
};

struct GenesisDoc {
  Kind kind = Kind::Domain;
  std::vector<Entry> txns;

  bool operator==(const GenesisDoc&) const = default;
};

NymTxn nym_for(const ParticipantRecord& participant);
NodeTxn node_txn_for(const ValidatorInfo& validator);
ValidatorInfo validator_from(const NodeTxn& txn);
Role role_of(const NymTxn& txn);

/// The `txn` object of a ledger line: {"data":..,"metadata":..,"type":..}.
nlohmann::json txn_to_json(const Txn& txn);
/// Schema-checked inverse of txn_to_json. Throws Error(BadJson).
Txn txn_from_json(const nlohmann::json& j);

/// Compact, lexicographically keyed JSON.
std::string canonical(const nlohmann::json& j);

/// SHA-256 over (predecessor txnId text ++ canonical txn bytes), lowercase hex.
std::string chain_txn_id(std::string_view previous_txn_id, const Txn& txn);

/// Numbers txns 1..N and fills in the txnId chain.
GenesisDoc make_doc(Kind kind, std::vector<Txn> txns);

/// Trustee NYMs (role "0") then steward NYMs (role "2"), roster order.
GenesisDoc build_domain_genesis(const Roster& roster);
/// One NODE txn per validator, roster order.
GenesisDoc build_pool_genesis(const Roster& roster);

/// One canonical JSON object per LF-terminated line.
std::string serialize_genesis(const GenesisDoc& doc);

/// Throws Error with code BadJson {line}, SeqNoGap {expected, found},
/// ChainMismatch {seqNo} or KindMismatch {line}.
GenesisDoc parse_genesis(std::string_view content, Kind kind);

enum class ViolationCode {
  KindImpurity,
  BrokenChain,
  CouplingViolation,
  UnknownSteward,
  MultipleNodesPerSteward,
  DuplicateDid,
  DuplicateAlias,
  DuplicateEndpoint,
  InvalidProofOfPossession,
  TooFewTrustees,
  WrongStewardCount,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  Kind file;
  std::optional<std::uint64_t> seq_no;
  std::string detail;

  nlohmann::json to_json() const;
  bool operator==(const Violation&) const = default;
};

struct VerificationReport {
  std::vector<Violation> violations;

  /// True iff there are no violations.
  bool launch_ready() const noexcept { return violations.empty(); }
  bool has(ViolationCode code) const;
  nlohmann::json to_json() const;
};

/// Cross-checks a domain/pool pair. Violations are data; nothing throws.
VerificationReport verify_genesis_pair(const GenesisDoc& domain, const GenesisDoc& pool, bool strict);

}  // namespace indyforge::genesis
