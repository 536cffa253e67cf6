#include "indyforge/poolstate.hpp"

#include <algorithm>
#include <set>

namespace indyforge::poolstate {

using nlohmann::json;

std::size_t PoolState::count(Role role) const {
  return static_cast<std::size_t>(
      std::count_if(participants.begin(), participants.end(), [&](const auto& p) { return p.second.role == role; }));
}

std::string_view to_string(AuthCode code) {
  switch (code) {
    case AuthCode::UnknownSubmitter: return "UnknownSubmitter";
    case AuthCode::NotTrustee: return "NotTrustee";
    case AuthCode::NotSteward: return "NotSteward";
    case AuthCode::StewardAlreadyHasNode: return "StewardAlreadyHasNode";
    case AuthCode::DuplicateAlias: return "DuplicateAlias";
    case AuthCode::DuplicateEndpoint: return "DuplicateEndpoint";
    case AuthCode::DuplicateDid: return "DuplicateDid";
    case AuthCode::ForeignNode: return "ForeignNode";
  }
  return "Unknown";
}

json AuthError::to_json() const { return {{"code", to_string(code)}, {"detail", detail}}; }

json to_json(const Submission& sub) {
  return {{"submitter", sub.submitter_did}, {"txn", genesis::txn_to_json(sub.txn)}};
}

Submission submission_from_json(const json& j) {
  if (!j.is_object() || !j.contains("submitter") || !j.at("submitter").is_string() || !j.contains("txn")) {
    throw Error(Errc::BadJson, "submission needs a string 'submitter' and a 'txn'");
  }
  return {j.at("submitter").get<std::string>(), genesis::txn_from_json(j.at("txn"))};
}

GenesisInvalid::GenesisInvalid(genesis::VerificationReport report)
    : Error(Errc::GenesisInvalid,
            "genesis pair failed verification with " + std::to_string(report.violations.size()) + " violation(s)",
            {{"violations", report.to_json()}}),
      report_(std::move(report)) {}

ReplayAborted::ReplayAborted(std::size_t position, AuthError error)
    : Error(Errc::ReplayAborted,
            "replay aborted at submission " + std::to_string(position) + ": " + std::string(to_string(error.code)),
            {{"position", position}, {"auth", error.to_json()}}),
      position_(position),
      error_(std::move(error)) {}

PoolState bootstrap_state(const std::string& network_name, const genesis::GenesisDoc& domain,
                          const genesis::GenesisDoc& pool, bool strict) {
  auto report = genesis::verify_genesis_pair(domain, pool, strict);
  if (!report.launch_ready()) throw GenesisInvalid(std::move(report));

  PoolState state;
  state.network_name = network_name;
  std::uint64_t seq_no = 0;
  for (const auto& entry : domain.txns) {
    const auto& nym = std::get<genesis::NymTxn>(entry.txn);
    state.participants[nym.dest] = {nym.verkey, genesis::role_of(nym), nym.alias};
    state.ledger.push_back({++seq_no, std::nullopt, entry.txn});
  }
  for (const auto& entry : pool.txns) {
    const auto& node = std::get<genesis::NodeTxn>(entry.txn);
    state.validators[node.data.alias] = genesis::validator_from(node);
    state.ledger.push_back({++seq_no, node.from, entry.txn});
  }
  return state;
}

namespace {

AuthError deny(AuthCode code, std::string detail) { return {code, std::move(detail)}; }

const Participant* find(const PoolState& state, const std::string& did) {
  const auto it = state.participants.find(did);
  return it == state.participants.end() ? nullptr : &it->second;
}

bool steward_has_node(const PoolState& state, const std::string& did) {
  return std::any_of(state.validators.begin(), state.validators.end(),
                     [&](const auto& v) { return v.second.steward_did == did; });
}

std::optional<std::string> endpoint_owner(const PoolState& state, const Endpoint& endpoint) {
  for (const auto& [alias, v] : state.validators) {
    if (v.node == endpoint || v.client == endpoint) return alias;
  }
  return std::nullopt;
}

Transition apply_nym(const PoolState& state, const Submission& sub, const genesis::NymTxn& nym) {
  const auto* submitter = find(state, sub.submitter_did);
  if (!submitter) return deny(AuthCode::UnknownSubmitter, "submitter " + sub.submitter_did + " is not on the ledger");
  if (submitter->role != Role::Trustee) {
    return deny(AuthCode::NotTrustee, "only trustees may register identities; " + sub.submitter_did + " is a " +
                                          std::string(to_string(submitter->role)));
  }
  if (find(state, nym.dest)) return deny(AuthCode::DuplicateDid, "did " + nym.dest + " is already registered");

  PoolState next = state;
  next.participants[nym.dest] = {nym.verkey, genesis::role_of(nym), nym.alias};
  next.ledger.push_back({next.ledger.size() + 1, sub.submitter_did, nym});
  return next;
}

Transition apply_node(const PoolState& state, const Submission& sub, const genesis::NodeTxn& node) {
  const auto* submitter = find(state, sub.submitter_did);
  if (!submitter) return deny(AuthCode::UnknownSubmitter, "submitter " + sub.submitter_did + " is not on the ledger");
  if (submitter->role != Role::Steward) {
    return deny(AuthCode::NotSteward, "only stewards may add validators; " + sub.submitter_did + " is a " +
                                          std::string(to_string(submitter->role)));
  }
  if (node.from != sub.submitter_did) {
    return deny(AuthCode::ForeignNode, "NODE txn names steward " + node.from + " but was submitted by " +
                                           sub.submitter_did);
  }
  if (steward_has_node(state, sub.submitter_did)) {
    return deny(AuthCode::StewardAlreadyHasNode, "steward " + sub.submitter_did + " already operates a validator");
  }
  if (state.validators.contains(node.data.alias)) {
    return deny(AuthCode::DuplicateAlias, "alias " + node.data.alias + " is already in use");
  }
  for (const auto* endpoint : {&node.data.node, &node.data.client}) {
    if (auto owner = endpoint_owner(state, *endpoint)) {
      return deny(AuthCode::DuplicateEndpoint, "endpoint " + to_string(*endpoint) + " is used by " + *owner);
    }
  }
  if (node.data.node == node.data.client) {
    return deny(AuthCode::DuplicateEndpoint, "node and client endpoints of " + node.data.alias + " coincide");
  }

  PoolState next = state;
  next.validators[node.data.alias] = genesis::validator_from(node);
  next.ledger.push_back({next.ledger.size() + 1, sub.submitter_did, node});
  return next;
}

}  // namespace

Transition apply_txn(const PoolState& state, const Submission& sub) {
  return std::visit(
      [&](const auto& txn) -> Transition {
        using T = std::decay_t<decltype(txn)>;
        if constexpr (std::is_same_v<T, genesis::NymTxn>) {
          return apply_nym(state, sub, txn);
        } else {
          return apply_node(state, sub, txn);
        }
      },
      sub.txn);
}

std::vector<Submission> add_node_submissions(const std::string& trustee_did, const ParticipantRecord& steward,
                                             const ValidatorInfo& validator) {
  auto nym = genesis::nym_for(steward);
  nym.role_code = genesis::kRoleSteward;
  auto node = genesis::node_txn_for(validator);
  node.from = steward.did;
  return {{trustee_did, std::move(nym)}, {steward.did, std::move(node)}};
}

Transition add_node_workflow(const PoolState& state, const std::string& trustee_did,
                             const ParticipantRecord& steward, const ValidatorInfo& validator) {
  const auto subs = add_node_submissions(trustee_did, steward, validator);
  auto after_nym = apply_txn(state, subs[0]);
  if (!accepted(after_nym)) return after_nym;
  // On a NODE rejection the intermediate state is dropped; `state` is untouched.
  return apply_txn(std::get<PoolState>(after_nym), subs[1]);
}

PoolState replay(const std::string& network_name, const genesis::GenesisDoc& domain,
                 const genesis::GenesisDoc& pool, const std::vector<Submission>& submissions, bool strict) {
  PoolState state = bootstrap_state(network_name, domain, pool, strict);
  for (std::size_t i = 0; i < submissions.size(); ++i) {
    auto next = apply_txn(state, submissions[i]);
    if (auto* error = std::get_if<AuthError>(&next)) throw ReplayAborted(i, std::move(*error));
    state = std::get<PoolState>(std::move(next));
  }
  return state;
}

std::vector<std::string> invariant_violations(const PoolState& state) {
  std::vector<std::string> out;
  std::set<std::string> owners;
  std::set<Endpoint> endpoints;
  for (const auto& [alias, v] : state.validators) {
    if (alias != v.alias) out.push_back("validator keyed by '" + alias + "' carries alias '" + v.alias + "'");
    const auto* owner = find(state, v.steward_did);
    if (!owner || owner->role != Role::Steward) {
      out.push_back("validator " + alias + " is owned by " + v.steward_did + ", not a steward");
    }
    if (!owners.insert(v.steward_did).second) out.push_back("steward " + v.steward_did + " owns two validators");
    for (const auto* e : {&v.node, &v.client}) {
      if (!endpoints.insert(*e).second) out.push_back("endpoint " + to_string(*e) + " is not unique");
    }
  }
  for (std::size_t i = 0; i < state.ledger.size(); ++i) {
    if (state.ledger[i].seq_no != i + 1) out.push_back("ledger seqNo gap at index " + std::to_string(i));
  }
  return out;
}

}  // namespace indyforge::poolstate
