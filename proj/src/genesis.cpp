#include "indyforge/genesis.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include <sodium.h>

#include "indyforge/errors.hpp"
#include "indyforge/keymat.hpp"

namespace indyforge::genesis {

using nlohmann::json;

std::string_view to_string(Kind kind) { return kind == Kind::Domain ? "domain" : "pool"; }

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::KindImpurity: return "KindImpurity";
    case ViolationCode::BrokenChain: return "BrokenChain";
    case ViolationCode::CouplingViolation: return "CouplingViolation";
    case ViolationCode::UnknownSteward: return "UnknownSteward";
    case ViolationCode::MultipleNodesPerSteward: return "MultipleNodesPerSteward";
    case ViolationCode::DuplicateDid: return "DuplicateDid";
    case ViolationCode::DuplicateAlias: return "DuplicateAlias";
    case ViolationCode::DuplicateEndpoint: return "DuplicateEndpoint";
    case ViolationCode::InvalidProofOfPossession: return "InvalidProofOfPossession";
    case ViolationCode::TooFewTrustees: return "TooFewTrustees";
    case ViolationCode::WrongStewardCount: return "WrongStewardCount";
  }
  return "Unknown";
}

NymTxn nym_for(const ParticipantRecord& participant) {
  return {participant.did, participant.verkey,
          std::string(participant.role == Role::Trustee ? kRoleTrustee : kRoleSteward), participant.name};
}

NodeTxn node_txn_for(const ValidatorInfo& v) {
  NodeTxn txn;
  txn.dest = v.verkey;
  txn.from = v.steward_did;
  txn.data.alias = v.alias;
  txn.data.node = v.node;
  txn.data.client = v.client;
  txn.data.blskey = v.bls_key;
  txn.data.blskey_pop = v.bls_pop;
  return txn;
}

ValidatorInfo validator_from(const NodeTxn& txn) {
  return {txn.data.alias, txn.data.node,  txn.data.client, txn.dest,
          txn.data.blskey, txn.data.blskey_pop, txn.from};
}

Role role_of(const NymTxn& txn) { return txn.role_code == kRoleTrustee ? Role::Trustee : Role::Steward; }

json txn_to_json(const Txn& txn) {
  return std::visit(
      [](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, NymTxn>) {
          json data = {{"dest", t.dest}, {"role", t.role_code}, {"verkey", t.verkey}};
          if (t.alias) data["alias"] = *t.alias;
          return {{"data", data}, {"metadata", json::object()}, {"type", kTypeNym}};
        } else {
          const json inner = {{"alias", t.data.alias},
                              {"blskey", t.data.blskey},
                              {"blskey_pop", t.data.blskey_pop},
                              {"client_ip", t.data.client.ip},
                              {"client_port", t.data.client.port},
                              {"node_ip", t.data.node.ip},
                              {"node_port", t.data.node.port},
                              {"services", t.data.services}};
          return {{"data", {{"data", inner}, {"dest", t.dest}}},
                  {"metadata", {{"from", t.from}}},
                  {"type", kTypeNode}};
        }
      },
      txn);
}

namespace {

[[noreturn]] void schema_error(const std::string& message) { throw Error(Errc::BadJson, message); }

void expect_keys(const json& j, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional, const char* where) {
  if (!j.is_object()) schema_error(std::string(where) + " must be an object");
  for (auto key : required) {
    if (!j.contains(key)) schema_error(std::string(where) + " lacks '" + std::string(key) + "'");
  }
  for (const auto& [key, _] : j.items()) {
    const auto known = [&](auto list) { return std::find(list.begin(), list.end(), key) != list.end(); };
    if (!known(required) && !known(optional)) schema_error(std::string(where) + " has unknown key '" + key + "'");
  }
}

const std::string& str(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) schema_error(std::string(key) + " must be a string");
  return v.get_ref<const std::string&>();
}

Endpoint endpoint_at(const json& data, const char* ip_key, const char* port_key) {
  const auto& ip = str(data, ip_key);
  const auto& port = data.at(port_key);
  if (!port.is_number_unsigned()) schema_error(std::string(port_key) + " must be a positive integer");
  Endpoint endpoint;
  try {
    endpoint = parse_endpoint(ip, std::to_string(port.get<std::uint64_t>()));
  } catch (const Error& e) {
    schema_error(e.what());
  }
  if (endpoint.ip != ip) schema_error(std::string(ip_key) + " is not in canonical form");
  return endpoint;
}

bool is_lower_hex_digest(const std::string& s) {
  return s.size() == 64 &&
         std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

}  // namespace

Txn txn_from_json(const json& j) {
  expect_keys(j, {"data", "metadata", "type"}, {}, "txn");
  const auto& type = str(j, "type");
  const auto& data = j.at("data");
  const auto& metadata = j.at("metadata");

  if (type == kTypeNym) {
    expect_keys(metadata, {}, {}, "txn.metadata");
    expect_keys(data, {"dest", "role", "verkey"}, {"alias"}, "txn.data");
    NymTxn nym{str(data, "dest"), str(data, "verkey"), str(data, "role"), std::nullopt};
    if (data.contains("alias")) nym.alias = str(data, "alias");
    if (nym.role_code != kRoleTrustee && nym.role_code != kRoleSteward) {
      schema_error("role must be \"0\" or \"2\"");
    }
    return nym;
  }
  if (type == kTypeNode) {
    expect_keys(metadata, {"from"}, {}, "txn.metadata");
    expect_keys(data, {"data", "dest"}, {}, "txn.data");
    const auto& inner = data.at("data");
    expect_keys(inner,
                {"alias", "blskey", "blskey_pop", "client_ip", "client_port", "node_ip", "node_port", "services"},
                {}, "txn.data.data");
    NodeTxn node;
    node.dest = str(data, "dest");
    node.from = str(metadata, "from");
    node.data.alias = str(inner, "alias");
    node.data.blskey = str(inner, "blskey");
    node.data.blskey_pop = str(inner, "blskey_pop");
    node.data.node = endpoint_at(inner, "node_ip", "node_port");
    node.data.client = endpoint_at(inner, "client_ip", "client_port");
    const auto& services = inner.at("services");
    if (!services.is_array() || services.empty()) schema_error("services must be a non-empty array");
    node.data.services.clear();
    for (const auto& s : services) {
      if (!s.is_string()) schema_error("services entries must be strings");
      node.data.services.push_back(s.get<std::string>());
    }
    return node;
  }
  schema_error("unknown txn type '" + type + "'");
}

std::string canonical(const json& j) { return j.dump(); }

std::string chain_txn_id(std::string_view previous_txn_id, const Txn& txn) {
  const std::string bytes = std::string(previous_txn_id) + canonical(txn_to_json(txn));
  std::array<unsigned char, crypto_hash_sha256_BYTES> digest{};
  crypto_hash_sha256(digest.data(), reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  std::array<char, 2 * crypto_hash_sha256_BYTES + 1> hex{};
  sodium_bin2hex(hex.data(), hex.size(), digest.data(), digest.size());
  return hex.data();
}

GenesisDoc make_doc(Kind kind, std::vector<Txn> txns) {
  GenesisDoc doc{kind, {}};
  doc.txns.reserve(txns.size());
  std::string previous;
  std::uint64_t seq_no = 0;
  for (auto& txn : txns) {
    auto id = chain_txn_id(previous, txn);
    previous = id;
    doc.txns.push_back({++seq_no, std::move(id), std::move(txn)});
  }
  return doc;
}

GenesisDoc build_domain_genesis(const Roster& roster) {
  std::vector<Txn> txns;
  for (const auto& t : roster.trustees) {
    auto nym = nym_for(t);
    nym.role_code = kRoleTrustee;
    txns.emplace_back(std::move(nym));
  }
  for (const auto& s : roster.stewards) {
    auto nym = nym_for(s);
    nym.role_code = kRoleSteward;
    txns.emplace_back(std::move(nym));
  }
  return make_doc(Kind::Domain, std::move(txns));
}

GenesisDoc build_pool_genesis(const Roster& roster) {
  std::vector<Txn> txns;
  for (const auto& v : roster.validators) txns.emplace_back(node_txn_for(v));
  return make_doc(Kind::Pool, std::move(txns));
}

namespace {

json line_json(const Entry& entry) {
  return {{"reqSignature", json::object()},
          {"txn", txn_to_json(entry.txn)},
          {"txnMetadata", {{"seqNo", entry.seq_no}, {"txnId", entry.txn_id}}},
          {"ver", "1"}};
}

}  // namespace

std::string serialize_genesis(const GenesisDoc& doc) {
  std::string out;
  for (const auto& entry : doc.txns) {
    out += canonical(line_json(entry));
    out.push_back('\n');
  }
  return out;
}

GenesisDoc parse_genesis(std::string_view content, Kind kind) {
  GenesisDoc doc{kind, {}};
  std::string previous;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    ++line_no;
    const auto eol = content.find('\n', pos);
    const auto bad = [&](const std::string& why) -> Error {
      return Error(Errc::BadJson, std::string(to_string(kind)) + " genesis line " + std::to_string(line_no) + ": " + why,
                   {{"line", line_no}});
    };
    if (eol == std::string_view::npos) throw bad("missing terminating newline");
    const auto text = content.substr(pos, eol - pos);
    pos = eol + 1;

    json j = json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded()) throw bad("malformed JSON");
    if (canonical(j) != text) throw bad("not in canonical form");

    Entry entry;
    try {
      expect_keys(j, {"reqSignature", "txn", "txnMetadata", "ver"}, {}, "line");
      expect_keys(j.at("reqSignature"), {}, {}, "reqSignature");
      if (str(j, "ver") != "1") schema_error("ver must be \"1\"");
      const auto& meta = j.at("txnMetadata");
      expect_keys(meta, {"seqNo", "txnId"}, {}, "txnMetadata");
      if (!meta.at("seqNo").is_number_unsigned()) schema_error("seqNo must be a positive integer");
      entry.seq_no = meta.at("seqNo").get<std::uint64_t>();
      entry.txn_id = str(meta, "txnId");
      if (!is_lower_hex_digest(entry.txn_id)) schema_error("txnId must be 64 lowercase hex digits");

      const auto& txn = j.at("txn");
      if (txn.is_object() && txn.contains("type") && txn.at("type").is_string()) {
        const auto& type = txn.at("type").get_ref<const std::string&>();
        const bool wrong_kind = (kind == Kind::Domain && type == kTypeNode) || (kind == Kind::Pool && type == kTypeNym);
        if (wrong_kind) {
          throw Error(Errc::KindMismatch,
                      std::string(type == kTypeNode ? "NODE" : "NYM") + " txn in a " +
                          std::string(to_string(kind)) + " genesis file at line " + std::to_string(line_no),
                      {{"line", line_no}, {"type", type}});
        }
      }
      entry.txn = txn_from_json(txn);
    } catch (const Error& e) {
      if (e.code() != Errc::BadJson) throw;
      throw bad(e.what());
    }

    const std::uint64_t expected = doc.txns.size() + 1;
    if (entry.seq_no != expected) {
      throw Error(Errc::SeqNoGap,
                  "expected seqNo " + std::to_string(expected) + ", found " + std::to_string(entry.seq_no),
                  {{"expected", expected}, {"found", entry.seq_no}, {"line", line_no}});
    }
    if (chain_txn_id(previous, entry.txn) != entry.txn_id) {
      throw Error(Errc::ChainMismatch, "txnId chain broken at seqNo " + std::to_string(entry.seq_no),
                  {{"seqNo", entry.seq_no}, {"line", line_no}});
    }
    previous = entry.txn_id;
    doc.txns.push_back(std::move(entry));
  }
  return doc;
}

json Violation::to_json() const {
  json j = {{"code", to_string(code)}, {"file", to_string(file)}, {"detail", detail}};
  if (seq_no) j["seqNo"] = *seq_no;
  return j;
}

bool VerificationReport::has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

json VerificationReport::to_json() const {
  json out = json::array();
  for (const auto& v : violations) out.push_back(v.to_json());
  return out;
}

VerificationReport verify_genesis_pair(const GenesisDoc& domain, const GenesisDoc& pool, bool strict) {
  VerificationReport report;
  const auto add = [&](ViolationCode code, Kind file, std::optional<std::uint64_t> seq, std::string detail) {
    report.violations.push_back({code, file, seq, std::move(detail)});
  };

  const auto check_frame = [&](const GenesisDoc& doc, Kind expected) {
    if (doc.kind != expected) {
      add(ViolationCode::KindImpurity, expected, std::nullopt,
          "document labelled " + std::string(to_string(doc.kind)) + " supplied as " + std::string(to_string(expected)));
    }
    std::string previous;
    for (std::size_t i = 0; i < doc.txns.size(); ++i) {
      const auto& e = doc.txns[i];
      const bool is_nym = std::holds_alternative<NymTxn>(e.txn);
      if (is_nym != (expected == Kind::Domain)) {
        add(ViolationCode::KindImpurity, expected, e.seq_no,
            std::string(is_nym ? "NYM" : "NODE") + " txn in " + std::string(to_string(expected)) + " genesis");
      }
      if (e.seq_no != i + 1 || chain_txn_id(previous, e.txn) != e.txn_id) {
        add(ViolationCode::BrokenChain, expected, e.seq_no, "seqNo/txnId chain broken");
      }
      previous = e.txn_id;
    }
  };
  check_frame(domain, Kind::Domain);
  check_frame(pool, Kind::Pool);

  std::map<std::string, std::string> role_by_did;
  std::size_t trustees = 0;
  std::size_t stewards = 0;
  for (const auto& e : domain.txns) {
    const auto* nym = std::get_if<NymTxn>(&e.txn);
    if (!nym) continue;
    if (!keymat::did_matches_verkey(nym->dest, nym->verkey)) {
      add(ViolationCode::CouplingViolation, Kind::Domain, e.seq_no, "did " + nym->dest + " does not match its verkey");
    }
    if (!role_by_did.emplace(nym->dest, nym->role_code).second) {
      add(ViolationCode::DuplicateDid, Kind::Domain, e.seq_no, "did " + nym->dest + " registered twice");
      continue;
    }
    (nym->role_code == kRoleTrustee ? trustees : stewards) += 1;
  }

  std::set<std::string> stewards_with_node;
  std::set<std::string> aliases;
  std::map<Endpoint, std::string> endpoints;
  std::vector<std::pair<std::uint64_t, keymat::BlsIdentity>> bls;
  for (const auto& e : pool.txns) {
    const auto* node = std::get_if<NodeTxn>(&e.txn);
    if (!node) continue;
    const auto role = role_by_did.find(node->from);
    if (role == role_by_did.end() || role->second != kRoleSteward) {
      add(ViolationCode::UnknownSteward, Kind::Pool, e.seq_no,
          "unknown steward: " + node->from + " has no steward NYM in the domain genesis");
    }
    if (!stewards_with_node.insert(node->from).second) {
      add(ViolationCode::MultipleNodesPerSteward, Kind::Pool, e.seq_no,
          "steward " + node->from + " already operates a validator");
    }
    if (!aliases.insert(node->data.alias).second) {
      add(ViolationCode::DuplicateAlias, Kind::Pool, e.seq_no, "alias " + node->data.alias + " is not unique");
    }
    for (const auto* endpoint : {&node->data.node, &node->data.client}) {
      const auto [it, inserted] = endpoints.emplace(*endpoint, node->data.alias);
      if (!inserted) {
        add(ViolationCode::DuplicateEndpoint, Kind::Pool, e.seq_no,
            "endpoint " + to_string(*endpoint) + " already used by " + it->second);
      }
    }
    bls.push_back({e.seq_no, {node->data.blskey, node->data.blskey_pop}});
  }

  std::vector<keymat::BlsIdentity> pairs;
  pairs.reserve(bls.size());
  for (const auto& [_, pair] : bls) pairs.push_back(pair);
  const auto statuses = keymat::verify_pops(pairs);
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    if (statuses[i] != keymat::PopStatus::Valid) {
      add(ViolationCode::InvalidProofOfPossession, Kind::Pool, bls[i].first,
          statuses[i] == keymat::PopStatus::Malformed ? "invalid proof of possession: undecodable BLS key"
                                                      : "invalid proof of possession");
    }
  }

  if (strict && trustees < roster::kMinProductionTrustees) {
    add(ViolationCode::TooFewTrustees, Kind::Domain, std::nullopt,
        "production networks need at least 3 trustees, found " + std::to_string(trustees));
  }
  if (strict && stewards != roster::kGenesisStewards) {
    add(ViolationCode::WrongStewardCount, Kind::Domain, std::nullopt,
        "genesis needs exactly 4 stewards, found " + std::to_string(stewards));
  }
  return report;
}

}  // namespace indyforge::genesis
