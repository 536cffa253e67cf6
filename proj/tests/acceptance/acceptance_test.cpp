// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../support/fixtures.hpp"
#include "../support/run.hpp"
#include "../support/scenario.hpp"
#include "indyforge/base58.hpp"
#include "indyforge/deploykit.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/keymat.hpp"
#include "indyforge/netsim.hpp"
#include "indyforge/poolstate.hpp"
#include "indyforge/roster.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using testsupport::fixture_path;
using testsupport::read_fixture;

struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REQUIRE(cond, what)                                        \
  do {                                                             \
    if (!(cond)) throw Failed(std::string(what) + " [" #cond "]"); \
  } while (0)

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw Failed("expected an error");
}

// ---- 1 ----------------------------------------------------------------------
std::string genesis_determinism() {
  const auto t0 = Clock::now();
  const auto roster = testsupport::fixture_roster();
  REQUIRE(roster.trustees.size() == 3 && roster.stewards.size() == 4, "fixture counts");
  const auto d1 = genesis::serialize_genesis(genesis::build_domain_genesis(roster));
  const auto p1 = genesis::serialize_genesis(genesis::build_pool_genesis(roster));
  const auto d2 = genesis::serialize_genesis(genesis::build_domain_genesis(roster));
  const auto p2 = genesis::serialize_genesis(genesis::build_pool_genesis(roster));
  REQUIRE(d1 == d2 && p1 == p2, "two builds differ");
  REQUIRE(d1 == read_fixture("domain_transactions_genesis"), "domain golden");
  REQUIRE(p1 == read_fixture("pool_transactions_genesis"), "pool golden");
  const auto s = seconds_since(t0);
  REQUIRE(s < 1.0, "runtime");
  std::ostringstream out;
  out << "7 NYM + 4 NODE lines byte-identical to goldens, " << s << " s";
  return out.str();
}

// ---- 2 ----------------------------------------------------------------------
std::string governance_rules() {
  const auto trustees = [](std::size_t n) {
    std::vector<ParticipantRecord> v;
    for (std::size_t k = 1; k <= n; ++k) v.push_back(synthetic::trustee(k));
    return v;
  };
  const auto stewards = [](std::size_t n) {
    std::vector<StewardEntry> v;
    for (std::size_t k = 1; k <= n; ++k) v.push_back(synthetic::steward(k));
    return v;
  };
  REQUIRE(code_of([&] { roster::validate_roster(trustees(2), stewards(4), true); }) == Errc::TooFewTrustees, "2 trustees");
  REQUIRE(code_of([&] { roster::validate_roster(trustees(3), stewards(3), true); }) == Errc::WrongStewardCount, "3 stewards");
  REQUIRE(code_of([&] { roster::validate_roster(trustees(3), stewards(5), true); }) == Errc::WrongStewardCount, "5 stewards");
  auto twice = stewards(4);
  twice[1].steward = twice[0].steward;
  twice[1].validator.steward_did = twice[0].steward.did;
  REQUIRE(code_of([&] { roster::validate_roster(trustees(3), twice, true); }) == Errc::MultipleValidatorsPerSteward,
          "steward with two validators in the sheet");

  auto state = poolstate::bootstrap_state("sandbox", testsupport::fixture_domain(), testsupport::fixture_pool());
  auto second = synthetic::steward(5).validator;
  second.steward_did = testsupport::fixture_roster().stewards[0].did;
  const auto t = poolstate::apply_txn(state, {second.steward_did, genesis::node_txn_for(second)});
  REQUIRE(!poolstate::accepted(t) &&
              std::get<poolstate::AuthError>(t).code == poolstate::AuthCode::StewardAlreadyHasNode,
          "second NODE by a steward");

  const auto& fresh = testsupport::IdentityBank::get().stewards.front();
  state = std::get<poolstate::PoolState>(poolstate::apply_txn(
      state, poolstate::add_node_submissions(testsupport::fixture_roster().trustees[0].did, fresh.steward,
                                             fresh.validator)[0]));
  testsupport::ScenarioGen gen(2);
  std::set<poolstate::AuthCode> covered;
  for (std::size_t c = 0; c < poolstate::kAuthCodeCount; ++c) {
    const auto code = static_cast<poolstate::AuthCode>(c);
    const auto step = gen.invalid_step(state, code);
    REQUIRE(step.has_value(), "no counterexample for " + std::string(poolstate::to_string(code)));
    const auto r = poolstate::apply_txn(state, step->sub);
    REQUIRE(!poolstate::accepted(r) && std::get<poolstate::AuthError>(r).code == code,
            "counterexample for " + std::string(poolstate::to_string(code)));
    covered.insert(code);
  }
  REQUIRE(covered.size() == poolstate::kAuthCodeCount, "coverage");
  return "count rules enforced; " + std::to_string(covered.size()) + "/8 AuthCodes covered";
}

// ---- 3 ----------------------------------------------------------------------
std::string round_trip_and_tamper() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto r = testsupport::random_roster(rng);
    const auto d = genesis::build_domain_genesis(r);
    const auto p = genesis::build_pool_genesis(r);
    REQUIRE(genesis::parse_genesis(genesis::serialize_genesis(d), genesis::Kind::Domain) == d, "domain round trip");
    REQUIRE(genesis::parse_genesis(genesis::serialize_genesis(p), genesis::Kind::Pool) == p, "pool round trip");
  }

  const auto domain = read_fixture("domain_transactions_genesis");
  const auto pool = read_fixture("pool_transactions_genesis");
  int detected = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto d = domain;
    auto p = pool;
    auto& body = trial % 2 ? p : d;
    const auto pos = rng() % body.size();
    char c;
    do c = static_cast<char>(rng());
    while (c == body[pos]);
    body[pos] = c;
    try {
      const auto dd = genesis::parse_genesis(d, genesis::Kind::Domain);
      const auto pp = genesis::parse_genesis(p, genesis::Kind::Pool);
      detected += !genesis::verify_genesis_pair(dd, pp, true).launch_ready();
    } catch (const Error&) {
      ++detected;
    }
  }
  REQUIRE(detected == 500, std::to_string(500 - detected) + " mutations undetected");
  const auto s = seconds_since(t0);
  REQUIRE(s < 30.0, "runtime");
  std::ostringstream out;
  out << "100/100 round trips, 500/500 mutations detected, " << s << " s";
  return out.str();
}

// ---- 4 ----------------------------------------------------------------------
std::string crypto_vectors() {
  const auto vectors = testsupport::read_fixture_json("ed25519_vectors.json");
  REQUIRE(vectors.size() == 20, "20 vectors");
  bool steward1 = false;
  for (const auto& v : vectors) {
    const auto id = keymat::derive_signing_identity(keymat::Seed::parse(v.at("seed_hex").get<std::string>()));
    REQUIRE(id.did == v.at("did") && id.verkey == v.at("verkey"), "oracle mismatch");
    steward1 |= id.did == "Th7MpTaRZVRYnPiabds81Y";
  }
  REQUIRE(steward1, "Steward1 vector present");

  std::mt19937_64 rng(4);
  std::vector<keymat::Seed> seeds;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::uint8_t> raw(32);
    for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
    seeds.push_back(keymat::Seed::from_bytes(raw));
  }
  const auto keys = keymat::derive_node_keys(seeds);
  int accepted = 0, rejected = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& mine = keys[i].bls;
    accepted += keymat::verify_pop(mine.bls_key, mine.bls_pop);
    std::string pop;
    if (i % 2) {
      pop = keys[(i + 1) % keys.size()].bls.bls_pop;
    } else {
      auto raw = *base58::decode(mine.bls_pop);
      raw[rng() % raw.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      pop = base58::encode(raw);
    }
    rejected += !keymat::verify_pop(mine.bls_key, pop);
  }
  REQUIRE(accepted == 100 && rejected == 100, "PoP accept/reject counts");
  return "20/20 Ed25519 vectors; PoP 100 honest accepted, 100 mismatched/mutated rejected";
}

// ---- 5 + 6 ------------------------------------------------------------------
struct SimOutcome {
  bool converged = true;
  bool oracle_equal = true;
  bool locality = true;
  std::size_t rejections = 0;
  std::size_t join_membership_ok = 0;
  double seconds = 0;
};

const SimOutcome& simulation() {
  static const SimOutcome outcome = [] {
    SimOutcome o;
    const auto t0 = Clock::now();
    const auto domain = testsupport::fixture_domain();
    const auto pool = testsupport::fixture_pool();
    const std::vector<std::string> aliases{"Node1", "Node2", "Node3", "Node4"};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto sim = netsim::spawn_pool(domain, pool);
      testsupport::ScenarioGen gen(500 + seed, 0.3);
      for (int step = 0; step < 8; ++step) {
        const auto st = gen.next(sim.nodes()[0].local_state);
        std::vector<poolstate::PoolState> before;
        for (const auto& n : sim.nodes()) before.push_back(n.local_state);
        const auto r = sim.submit(aliases[gen.rng()() % 4], st.sub);
        if (!r.accepted) {
          ++o.rejections;
          bool unchanged = true;
          for (std::size_t i = 0; i < sim.nodes().size(); ++i) {
            unchanged &= sim.nodes()[i].local_state == before[i] &&
                         sim.nodes()[i].local_state.ledger.size() == before[i].ledger.size();
          }
          o.locality &= unchanged;
        }
        o.locality &= r.accepted == !st.expected.has_value();
        o.converged &= r.converged;
      }
      const auto expected = poolstate::replay("sandbox", domain, pool, sim.ordering_log());
      for (const auto& n : sim.nodes()) o.oracle_equal &= n.local_state == expected;
      o.converged &= sim.states_agree();
    }

    auto sim = netsim::spawn_pool(domain, pool);
    const auto e = synthetic::steward(5);
    const auto r = sim.join_new_node(e.steward, e.validator, testsupport::fixture_roster().trustees[0].did);
    for (const auto m : r.membership_size) o.join_membership_ok += m == 5;
    o.converged &= r.converged && r.membership_size.size() == 5;
    o.seconds = seconds_since(t0);
    return o;
  }();
  return outcome;
}

std::string convergence() {
  const auto& o = simulation();
  REQUIRE(o.converged, "a scenario did not converge");
  REQUIRE(o.oracle_equal, "a node state differs from replay of the ordering log");
  REQUIRE(o.join_membership_ok == 5, "join membership");
  REQUIRE(o.seconds < 60.0, "runtime");
  std::ostringstream out;
  out << "200 scenarios converged and equal replay; join -> membership 5 on 5 nodes, " << o.seconds << " s";
  return out.str();
}

std::string rejection_locality() {
  const auto& o = simulation();
  REQUIRE(o.rejections > 0, "no rejected submissions were generated");
  REQUIRE(o.locality, "a rejected submission changed a node");
  return std::to_string(o.rejections) + " rejected submissions, none changed any node or ledger length";
}

// ---- 7 ----------------------------------------------------------------------
std::string deploy_goldens() {
  deploykit::NetworkConfig cfg;
  cfg.network_name = "net3";
  const auto config = deploykit::render_node_config(cfg);
  std::istringstream lines(config);
  int exact = 0, mentions = 0;
  for (std::string line; std::getline(lines, line);) {
    exact += line == "NETWORK_NAME = 'net3'";
    mentions += line.find("NETWORK_NAME") != std::string::npos;
  }
  REQUIRE(exact == 1 && mentions == 1, "NETWORK_NAME line");

  const auto plan = deploykit::render_deploy_plan(testsupport::fixture_roster(), cfg);
  std::set<std::uint16_t> ports;
  for (const auto& [_, b] : plan.port_bindings) {
    REQUIRE(ports.insert(b.node).second && ports.insert(b.client).second, "host port collision");
  }
  REQUIRE(ports == (std::set<std::uint16_t>{9701, 9702, 9703, 9704, 9705, 9706, 9707, 9708}), "host ports 9701-9708");
  const auto& compose = plan.files.at("docker-compose.yml");
  for (int p = 9701; p <= 9708; ++p) {
    const auto binding = "\"" + std::to_string(p) + ":" + (p % 2 ? "9701" : "9702") + "\"";
    REQUIRE(compose.find(binding) != std::string::npos, "compose binding " + binding);
  }

  std::vector<std::string> streams{config};
  for (const auto& [_, content] : plan.files) streams.push_back(content);
  std::size_t checks = 0;
  for (const auto& seed : testsupport::fixture_seeds()) {
    for (const auto& enc : testsupport::seed_encodings(seed)) {
      for (const auto& s : streams) {
        REQUIRE(s.find(enc) == std::string::npos, "seed leaked into a rendered file");
        ++checks;
      }
    }
  }
  return "single NETWORK_NAME line, ports 9701-9708 injective, " + std::to_string(checks) + " seed checks clean";
}

// ---- 8 ----------------------------------------------------------------------
std::string cli_end_to_end() {
  const auto dir = testsupport::make_temp_dir();
  const auto q = [](const std::string& s) { return "'" + s + "'"; };
  auto r = testsupport::run_cli("genesis build --trustees " + q(fixture_path("trustees.csv")) + " --stewards " +
                                q(fixture_path("stewards.csv")) + " --out-dir " + q(dir));
  REQUIRE(r.exit_code == 0, "genesis build exit " + std::to_string(r.exit_code) + ": " + r.err);
  const auto domain = dir + "/domain_transactions_genesis";
  const auto pool = dir + "/pool_transactions_genesis";
  r = testsupport::run_cli("genesis verify --domain " + q(domain) + " --pool " + q(pool));
  REQUIRE(r.exit_code == 0, "verify clean exit " + std::to_string(r.exit_code) + ": " + r.err);

  // Corrupt one byte in the third NODE line (10.0.0.4 -> 10.0.0.9).
  auto body = testsupport::slurp(pool);
  const auto at = body.find("10.0.0.4");
  REQUIRE(at != std::string::npos, "pool line 3 address");
  body[at + 7] = '9';
  std::ofstream(pool, std::ios::binary | std::ios::trunc) << body;
  r = testsupport::run_cli("genesis verify --domain " + q(domain) + " --pool " + q(pool));
  REQUIRE(r.exit_code == 1, "verify corrupted exit " + std::to_string(r.exit_code));
  bool chain_mismatch = false;
  std::istringstream err(r.err);
  for (std::string line; std::getline(err, line);) {
    const auto j = nlohmann::json::parse(line);
    chain_mismatch |= j.at("code") == "ChainMismatch" && j.at("seqNo") == 3;
  }
  REQUIRE(chain_mismatch, "ChainMismatch finding on stderr: " + r.err);
  std::filesystem::remove_all(dir);
  return "build -> verify exit 0; corrupted pool -> exit 1 with ChainMismatch at seqNo 3";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"Genesis determinism", genesis_determinism},
      {"Governance rule suite", governance_rules},
      {"Round-trip and tamper detection", round_trip_and_tamper},
      {"Crypto vectors", crypto_vectors},
      {"Simulator convergence and oracle equivalence", convergence},
      {"Rejection locality", rejection_locality},
      {"Deploy rendering goldens", deploy_goldens},
      {"CLI end-to-end", cli_end_to_end},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, fn] = criteria[i];
    std::string detail;
    bool ok = false;
    try {
      detail = fn();
      ok = true;
    } catch (const std::exception& e) {
      detail = e.what();
    }
    failures += !ok;
    std::printf("%s  criterion %zu  %s: %s\n", ok ? "PASS" : "FAIL", i + 1, name.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
