#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "indyforge/errors.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/roster.hpp"

namespace indyforge::poolstate {

struct Participant {
  std::string verkey;
  Role role = Role::Trustee;
  std::optional<std::string> alias;

  bool operator==(const Participant&) const = default;
};

struct LedgerEntry {
  std::uint64_t seq_no = 0;
  std::optional<std::string> submitter;  // empty for genesis NYMs
  genesis::Txn txn;

  bool operator==(const LedgerEntry&) const = default;
};

/// Replicated governance state. Values are immutable in practice: every
/// transition returns a new state.
struct PoolState {
  std::string network_name;
  std::map<std::string, Participant> participants;  // by did
  std::map<std::string, ValidatorInfo> validators;  // by alias
  std::vector<LedgerEntry> ledger;

  std::size_t count(Role role) const;
  bool operator==(const PoolState&) const = default;
};

struct Submission {
  std::string submitter_did;
  genesis::Txn txn;

  bool operator==(const Submission&) const = default;
};

nlohmann::json to_json(const Submission& sub);
/// Throws Error(BadJson).
Submission submission_from_json(const nlohmann::json& j);

enum class AuthCode {
  UnknownSubmitter,
  NotTrustee,
  NotSteward,
  StewardAlreadyHasNode,
  DuplicateAlias,
  DuplicateEndpoint,
  DuplicateDid,
  ForeignNode,
};

inline constexpr std::size_t kAuthCodeCount = 8;

std::string_view to_string(AuthCode code);

struct AuthError {
  AuthCode code;
  std::string detail;

  nlohmann::json to_json() const;
  bool operator==(const AuthError&) const = default;
};

/// Either the successor state or the rule that rejected the transition.
using Transition = std::variant<PoolState, AuthError>;

inline bool accepted(const Transition& t) { return std::holds_alternative<PoolState>(t); }

/// Thrown by bootstrap_state when the genesis pair does not verify.
class GenesisInvalid : public Error {
 public:
  explicit GenesisInvalid(genesis::VerificationReport report);
  const genesis::VerificationReport& report() const noexcept { return report_; }

 private:
  genesis::VerificationReport report_;
};

/// Thrown by replay; `position` is the 0-based index of the rejected
/// submission.
class ReplayAborted : public Error {
 public:
  ReplayAborted(std::size_t position, AuthError error);
  std::size_t position() const noexcept { return position_; }
  const AuthError& auth_error() const noexcept { return error_; }

 private:
  std::size_t position_;
  AuthError error_;
};

PoolState bootstrap_state(const std::string& network_name, const genesis::GenesisDoc& domain,
                          const genesis::GenesisDoc& pool, bool strict = true);

/// Pure transition. NYM needs a trustee submitter and a fresh did. NODE needs
/// a steward submitter that names itself in `from`, owns no validator yet,
/// and reuses no alias or endpoint.
Transition apply_txn(const PoolState& state, const Submission& sub);

/// NYM(steward) by the trustee followed by NODE(validator) by the new
/// steward, all or nothing.
Transition add_node_workflow(const PoolState& state, const std::string& trustee_did,
                             const ParticipantRecord& steward, const ValidatorInfo& validator);

/// The two submissions add_node_workflow applies, in order.
std::vector<Submission> add_node_submissions(const std::string& trustee_did, const ParticipantRecord& steward,
                                             const ValidatorInfo& validator);

/// Folds apply_txn over `submissions` starting from the bootstrapped pair.
PoolState replay(const std::string& network_name, const genesis::GenesisDoc& domain,
                 const genesis::GenesisDoc& pool, const std::vector<Submission>& submissions,
                 bool strict = true);

/// Names of the PoolState invariants `state` breaks; empty when it is sound.
std::vector<std::string> invariant_violations(const PoolState& state);

}  // namespace indyforge::poolstate
