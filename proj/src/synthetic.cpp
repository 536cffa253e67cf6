#include "indyforge/synthetic.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace indyforge::synthetic {

keymat::Seed padded_seed(std::string_view label) {
  if (label.size() > keymat::kSeedSize) throw std::invalid_argument("seed label longer than 32 bytes");
  std::string text(keymat::kSeedSize - label.size(), '0');
  text += label;
  return keymat::Seed::from_bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

ParticipantRecord trustee(std::size_t k) {
  const auto name = "Trustee" + std::to_string(k);
  const auto id = keymat::derive_signing_identity(padded_seed(name));
  return {name, id.did, id.verkey, Role::Trustee};
}

StewardEntry steward(std::size_t k) {
  const auto name = "Steward" + std::to_string(k);
  const auto alias = "Node" + std::to_string(k);
  const auto id = keymat::derive_signing_identity(padded_seed(name));
  const auto node_seed = padded_seed(alias);
  const auto node_id = keymat::derive_signing_identity(node_seed);
  const auto bls = keymat::derive_bls_identity(node_seed);

  const auto host = k + 1;
  const auto ip = "10." + std::to_string((host >> 16) & 0xFF) + "." + std::to_string((host >> 8) & 0xFF) + "." +
                  std::to_string(host & 0xFF);

  StewardEntry entry;
  entry.steward = {name, id.did, id.verkey, Role::Steward};
  entry.validator = {alias, {ip, 9701}, {ip, 9702}, node_id.verkey, bls.bls_key, bls.bls_pop, id.did};
  return entry;
}

Roster roster(std::size_t trustees, std::size_t validators, bool strict) {
  std::vector<ParticipantRecord> t;
  for (std::size_t k = 1; k <= trustees; ++k) t.push_back(trustee(k));
  std::vector<StewardEntry> s;
  for (std::size_t k = 1; k <= validators; ++k) s.push_back(steward(k));
  return roster::validate_roster(std::move(t), std::move(s), strict);
}

}  // namespace indyforge::synthetic
