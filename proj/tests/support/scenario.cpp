#include "scenario.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "indyforge/base58.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/synthetic.hpp"

namespace testsupport {

using namespace indyforge;
using poolstate::AuthCode;
using poolstate::PoolState;

namespace {

constexpr std::size_t kBankStewards = 48;
constexpr std::size_t kBankTrustees = 12;
constexpr std::size_t kFirstFreeIndex = 5;  // fixture uses 1..4

}  // namespace

const IdentityBank& IdentityBank::get() {
  static const IdentityBank bank = [] {
    IdentityBank b;
    for (std::size_t k = 0; k < kBankStewards; ++k) b.stewards.push_back(synthetic::steward(kFirstFreeIndex + k));
    for (std::size_t k = 0; k < kBankTrustees; ++k) b.trustees.push_back(synthetic::trustee(kFirstFreeIndex - 1 + k));
    return b;
  }();
  return bank;
}

const StewardEntry* IdentityBank::steward_by_did(const std::string& did) const {
  for (const auto& s : stewards) {
    if (s.steward.did == did) return &s;
  }
  return nullptr;
}

std::vector<std::string> dids_with_role(const PoolState& state, Role role) {
  std::vector<std::string> out;
  for (const auto& [did, p] : state.participants) {
    if (p.role == role) out.push_back(did);
  }
  return out;
}

std::vector<std::string> nodeless_stewards(const PoolState& state) {
  std::vector<std::string> out;
  for (const auto& did : dids_with_role(state, Role::Steward)) {
    const bool owns = std::any_of(state.validators.begin(), state.validators.end(),
                                  [&](const auto& v) { return v.second.steward_did == did; });
    if (!owns) out.push_back(did);
  }
  return out;
}

Roster random_roster(std::mt19937_64& rng) {
  static std::map<std::size_t, StewardEntry> cache;
  const auto steward_at = [](std::size_t k) -> const StewardEntry& {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, synthetic::steward(k)).first;
    return it->second;
  };

  std::vector<ParticipantRecord> trustees;
  const auto nt = 1 + rng() % 5;
  for (std::size_t k = 1; k <= nt; ++k) trustees.push_back(synthetic::trustee(k + rng() % 3 * 10));
  std::vector<StewardEntry> stewards;
  const auto ns = rng() % 7;
  const auto base = 1 + rng() % 20;
  for (std::size_t i = 0; i < ns; ++i) {
    auto e = steward_at(base + i);
    e.validator.alias = "v" + std::to_string(rng() % 1000) + "-" + std::to_string(i);
    const bool v6 = rng() % 3 == 0;
    const auto host = std::to_string(1 + rng() % 250);
    const auto ip = v6 ? "fd00::" + host : "172.16." + std::to_string(i) + "." + host;
    e.validator.node = parse_endpoint(ip, std::to_string(9000 + 2 * i));
    e.validator.client =
        parse_endpoint(rng() % 2 ? ip : "172.17.0." + std::to_string(i + 1), std::to_string(9001 + 2 * i));
    stewards.push_back(e);
  }
  return roster::validate_roster(std::move(trustees), std::move(stewards), false);
}

ScenarioGen::ScenarioGen(std::uint64_t seed, double invalid_rate) : rng_(seed), invalid_rate_(invalid_rate) {}

namespace {

genesis::NymTxn nym(const ParticipantRecord& p, Role role) {
  auto t = genesis::nym_for(p);
  t.role_code = role == Role::Trustee ? genesis::kRoleTrustee : genesis::kRoleSteward;
  return t;
}

// Nodeless stewards that came from the bank, so a fresh validator exists.
std::vector<const StewardEntry*> bank_nodeless(const PoolState& state) {
  std::vector<const StewardEntry*> out;
  for (const auto& did : nodeless_stewards(state)) {
    if (const auto* e = IdentityBank::get().steward_by_did(did)) out.push_back(e);
  }
  return out;
}

}  // namespace

std::optional<Step> ScenarioGen::valid_step(const PoolState& state) {
  const auto& bank = IdentityBank::get();
  const auto trustees = dids_with_role(state, Role::Trustee);

  std::vector<const ParticipantRecord*> fresh_trustees;
  for (const auto& t : bank.trustees) {
    if (!state.participants.contains(t.did)) fresh_trustees.push_back(&t);
  }
  std::vector<const StewardEntry*> fresh_stewards;
  for (const auto& s : bank.stewards) {
    if (!state.participants.contains(s.steward.did)) fresh_stewards.push_back(&s);
  }
  const auto nodeless = bank_nodeless(state);

  std::vector<int> options;
  if (!trustees.empty() && !fresh_trustees.empty()) options.push_back(0);
  if (!trustees.empty() && !fresh_stewards.empty()) options.insert(options.end(), {1, 1});
  if (!nodeless.empty()) options.insert(options.end(), {2, 2});
  if (options.empty()) return std::nullopt;

  switch (pick(options)) {
    case 0:
      return Step{{pick(trustees), nym(*pick(fresh_trustees), Role::Trustee)}, std::nullopt};
    case 1:
      return Step{{pick(trustees), nym(pick(fresh_stewards)->steward, Role::Steward)}, std::nullopt};
    default: {
      const auto* e = pick(nodeless);
      return Step{{e->steward.did, genesis::node_txn_for(e->validator)}, std::nullopt};
    }
  }
}

std::optional<Step> ScenarioGen::invalid_step(const PoolState& state, AuthCode code) {
  const auto& bank = IdentityBank::get();
  const auto trustees = dids_with_role(state, Role::Trustee);
  const auto stewards = dids_with_role(state, Role::Steward);
  const auto nodeless = bank_nodeless(state);
  const auto& spare = pick(bank.stewards);

  switch (code) {
    case AuthCode::UnknownSubmitter: {
      std::array<std::uint8_t, 16> raw{};
      for (auto& b : raw) b = static_cast<std::uint8_t>(rng_());
      auto did = base58::encode(raw);
      if (state.participants.contains(did)) return std::nullopt;
      if (rng_() % 2) return Step{{did, nym(spare.steward, Role::Steward)}, code};
      auto node = genesis::node_txn_for(spare.validator);
      node.from = did;
      return Step{{did, node}, code};
    }
    case AuthCode::NotTrustee:
      if (stewards.empty()) return std::nullopt;
      return Step{{pick(stewards), nym(spare.steward, Role::Steward)}, code};
    case AuthCode::NotSteward: {
      if (trustees.empty()) return std::nullopt;
      const auto t = pick(trustees);
      auto node = genesis::node_txn_for(spare.validator);
      node.from = t;
      return Step{{t, node}, code};
    }
    case AuthCode::ForeignNode: {
      if (stewards.empty()) return std::nullopt;
      const auto s = pick(stewards);
      auto node = genesis::node_txn_for(spare.validator);
      node.from = spare.steward.did == s ? pick(bank.trustees).did : spare.steward.did;
      return Step{{s, node}, code};
    }
    case AuthCode::StewardAlreadyHasNode: {
      if (state.validators.empty()) return std::nullopt;
      auto it = state.validators.begin();
      std::advance(it, static_cast<long>(rng_() % state.validators.size()));
      auto v = spare.validator;
      v.steward_did = it->second.steward_did;
      return Step{{v.steward_did, genesis::node_txn_for(v)}, code};
    }
    case AuthCode::DuplicateAlias: {
      if (nodeless.empty() || state.validators.empty()) return std::nullopt;
      const auto* e = pick(nodeless);
      auto v = e->validator;
      auto it = state.validators.begin();
      std::advance(it, static_cast<long>(rng_() % state.validators.size()));
      v.alias = it->first;
      return Step{{e->steward.did, genesis::node_txn_for(v)}, code};
    }
    case AuthCode::DuplicateEndpoint: {
      if (nodeless.empty() || state.validators.empty()) return std::nullopt;
      const auto* e = pick(nodeless);
      auto v = e->validator;
      auto it = state.validators.begin();
      std::advance(it, static_cast<long>(rng_() % state.validators.size()));
      const auto taken = rng_() % 2 ? it->second.node : it->second.client;
      (rng_() % 2 ? v.node : v.client) = taken;
      if (v.node == v.client) v.client = e->validator.client == taken ? e->validator.node : e->validator.client;
      return Step{{e->steward.did, genesis::node_txn_for(v)}, code};
    }
    case AuthCode::DuplicateDid: {
      if (trustees.empty()) return std::nullopt;
      auto it = state.participants.begin();
      std::advance(it, static_cast<long>(rng_() % state.participants.size()));
      ParticipantRecord again{"Again", it->first, it->second.verkey, Role::Steward};
      return Step{{pick(trustees), nym(again, Role::Steward)}, code};
    }
  }
  return std::nullopt;
}

Step ScenarioGen::next(const PoolState& state) {
  const bool want_invalid = std::uniform_real_distribution<double>(0, 1)(rng_) < invalid_rate_;
  if (!want_invalid) {
    if (auto s = valid_step(state)) return *s;
  }
  for (;;) {
    const auto code = static_cast<AuthCode>(rng_() % poolstate::kAuthCodeCount);
    if (auto s = invalid_step(state, code)) return *s;
  }
}

}  // namespace testsupport
