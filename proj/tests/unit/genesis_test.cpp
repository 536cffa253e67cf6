#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "../support/scenario.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using namespace indyforge::genesis;
using testsupport::read_fixture;

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(Errc::Io, "none");
}

TEST(Genesis, FixtureGoldenFiles) {
  const auto r = testsupport::fixture_roster();
  EXPECT_EQ(serialize_genesis(build_domain_genesis(r)), read_fixture("domain_transactions_genesis"));
  EXPECT_EQ(serialize_genesis(build_pool_genesis(r)), read_fixture("pool_transactions_genesis"));
}

TEST(Genesis, BuildIsDeterministic) {
  const auto r = testsupport::fixture_roster();
  EXPECT_EQ(serialize_genesis(build_domain_genesis(r)), serialize_genesis(build_domain_genesis(r)));
  EXPECT_EQ(serialize_genesis(build_pool_genesis(r)), serialize_genesis(build_pool_genesis(r)));
}

TEST(Genesis, DomainShape) {
  const auto doc = testsupport::fixture_domain();
  ASSERT_EQ(doc.txns.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& nym = std::get<NymTxn>(doc.txns[i].txn);
    EXPECT_EQ(doc.txns[i].seq_no, i + 1);
    EXPECT_EQ(nym.role_code, i < 3 ? "0" : "2");
    EXPECT_TRUE(nym.alias.has_value());
  }
  const auto first = read_fixture("domain_transactions_genesis").substr(0, 200);
  EXPECT_EQ(first.rfind("{\"reqSignature\":{},\"txn\":{\"data\":{\"alias\":\"Trustee1\",\"dest\":", 0), 0u);
}

TEST(Genesis, PoolShape) {
  const auto doc = testsupport::fixture_pool();
  ASSERT_EQ(doc.txns.size(), 4u);
  const auto& node = std::get<NodeTxn>(doc.txns[0].txn);
  EXPECT_EQ(node.data.alias, "Node1");
  EXPECT_EQ(node.data.node, (Endpoint{"10.0.0.2", 9701}));
  EXPECT_EQ(node.data.client, (Endpoint{"10.0.0.2", 9702}));
  EXPECT_EQ(node.data.services, std::vector<std::string>{"VALIDATOR"});
  EXPECT_EQ(node.dest, "Gw6pDLhcBcoQesN72qfotTgFa7cbuqZpkX3Xo6pLhPhv");
  EXPECT_EQ(node.from, "Th7MpTaRZVRYnPiabds81Y");
  const auto line = read_fixture("pool_transactions_genesis");
  EXPECT_NE(line.find("\"client_port\":9702"), std::string::npos);
  EXPECT_NE(line.find("\"type\":\"0\""), std::string::npos);
}

TEST(Genesis, ChainLinksPredecessorText) {
  const auto doc = testsupport::fixture_domain();
  EXPECT_EQ(doc.txns[0].txn_id, chain_txn_id("", doc.txns[0].txn));
  EXPECT_EQ(doc.txns[1].txn_id, chain_txn_id(doc.txns[0].txn_id, doc.txns[1].txn));
}

TEST(Genesis, RoundTripRandomRosters) {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 100; ++i) {
    const auto r = testsupport::random_roster(rng);
    const auto domain = build_domain_genesis(r);
    const auto pool = build_pool_genesis(r);
    const auto d_text = serialize_genesis(domain);
    const auto p_text = serialize_genesis(pool);
    ASSERT_EQ(parse_genesis(d_text, Kind::Domain), domain);
    ASSERT_EQ(parse_genesis(p_text, Kind::Pool), pool);
    EXPECT_EQ(serialize_genesis(parse_genesis(p_text, Kind::Pool)), p_text);
    EXPECT_TRUE(verify_genesis_pair(domain, pool, false).launch_ready()) << verify_genesis_pair(domain, pool, false).to_json();
  }
}

TEST(Genesis, TamperedFixtureIsChainMismatchAtSeq3) {
  const auto e = error_of([] { parse_genesis(read_fixture("pool_transactions_genesis.tampered_seq3"), Kind::Pool); });
  EXPECT_EQ(e.code(), Errc::ChainMismatch);
  EXPECT_EQ(e.context().at("seqNo"), 3);
}

TEST(Genesis, ParseErrors) {
  const auto pool = read_fixture("pool_transactions_genesis");
  EXPECT_EQ(error_of([&] { parse_genesis(pool.substr(0, pool.size() - 1), Kind::Pool); }).code(), Errc::BadJson);
  EXPECT_EQ(error_of([&] { parse_genesis(pool, Kind::Domain); }).code(), Errc::KindMismatch);
  EXPECT_EQ(error_of([] { parse_genesis(read_fixture("domain_transactions_genesis"), Kind::Pool); }).code(),
            Errc::KindMismatch);

  // Dropping line 2 leaves a gap.
  const auto l1 = pool.find('\n') + 1;
  const auto l2 = pool.find('\n', l1) + 1;
  const auto gap = error_of([&] { parse_genesis(pool.substr(0, l1) + pool.substr(l2), Kind::Pool); });
  EXPECT_EQ(gap.code(), Errc::SeqNoGap);
  EXPECT_EQ(gap.context().at("expected"), 2);
  EXPECT_EQ(gap.context().at("found"), 3);

  // Whitespace is not canonical.
  auto spaced = pool;
  spaced.insert(1, " ");
  const auto ws = error_of([&] { parse_genesis(spaced, Kind::Pool); });
  EXPECT_EQ(ws.code(), Errc::BadJson);
  EXPECT_EQ(ws.context().at("line"), 1);

  auto extra = pool;
  extra.replace(extra.find("\"ver\":\"1\""), 9, "\"ver\":\"1\",\"zz\":1");
  EXPECT_EQ(error_of([&] { parse_genesis(extra, Kind::Pool); }).code(), Errc::BadJson);

  EXPECT_EQ(parse_genesis("", Kind::Pool).txns.size(), 0u);
}

// Every single-byte change is caught by parse or by verify.
TEST(Genesis, FiveHundredMutationsDetected) {
  const auto domain = read_fixture("domain_transactions_genesis");
  const auto pool = read_fixture("pool_transactions_genesis");
  std::mt19937_64 rng(500);
  int detected = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const bool in_pool = trial % 2 == 1;
    auto d = domain;
    auto p = pool;
    auto& target = in_pool ? p : d;
    const auto pos = rng() % target.size();
    char replacement;
    do replacement = static_cast<char>(rng() % 256);
    while (replacement == target[pos]);
    target[pos] = replacement;
    try {
      const auto dd = parse_genesis(d, Kind::Domain);
      const auto pp = parse_genesis(p, Kind::Pool);
      detected += !verify_genesis_pair(dd, pp, true).launch_ready();
    } catch (const Error&) {
      ++detected;
    }
  }
  EXPECT_EQ(detected, 500);
}

TEST(Genesis, FixturePairIsLaunchReady) {
  const auto report = verify_genesis_pair(testsupport::fixture_domain(), testsupport::fixture_pool(), true);
  EXPECT_TRUE(report.launch_ready()) << report.to_json();
}

GenesisDoc rebuilt_pool(std::vector<NodeTxn> nodes) {
  std::vector<Txn> txns(nodes.begin(), nodes.end());
  return make_doc(Kind::Pool, std::move(txns));
}

std::vector<NodeTxn> fixture_nodes() {
  std::vector<NodeTxn> out;
  for (const auto& e : testsupport::fixture_pool().txns) out.push_back(std::get<NodeTxn>(e.txn));
  return out;
}

std::vector<NymTxn> fixture_nyms() {
  std::vector<NymTxn> out;
  for (const auto& e : testsupport::fixture_domain().txns) out.push_back(std::get<NymTxn>(e.txn));
  return out;
}

GenesisDoc rebuilt_domain(std::vector<NymTxn> nyms) {
  std::vector<Txn> txns(nyms.begin(), nyms.end());
  return make_doc(Kind::Domain, std::move(txns));
}

TEST(Genesis, VerifyViolations) {
  const auto domain = testsupport::fixture_domain();
  const auto pool = testsupport::fixture_pool();

  auto nodes = fixture_nodes();
  nodes[1].from = nodes[0].from;
  auto r = verify_genesis_pair(domain, rebuilt_pool(nodes), true);
  EXPECT_TRUE(r.has(ViolationCode::MultipleNodesPerSteward));

  nodes = fixture_nodes();
  nodes[2].from = std::get<NymTxn>(domain.txns[0].txn).dest;  // a trustee
  r = verify_genesis_pair(domain, rebuilt_pool(nodes), true);
  ASSERT_TRUE(r.has(ViolationCode::UnknownSteward));
  EXPECT_EQ(r.violations.front().seq_no, 3u);
  EXPECT_EQ(r.violations.front().detail.rfind("unknown steward", 0), 0u);

  nodes = fixture_nodes();
  nodes[3].data.alias = "Node1";
  EXPECT_TRUE(verify_genesis_pair(domain, rebuilt_pool(nodes), true).has(ViolationCode::DuplicateAlias));

  nodes = fixture_nodes();
  nodes[3].data.client = nodes[0].data.node;
  EXPECT_TRUE(verify_genesis_pair(domain, rebuilt_pool(nodes), true).has(ViolationCode::DuplicateEndpoint));

  nodes = fixture_nodes();
  std::swap(nodes[0].data.blskey_pop, nodes[1].data.blskey_pop);
  r = verify_genesis_pair(domain, rebuilt_pool(nodes), true);
  EXPECT_EQ(r.violations.size(), 2u);
  EXPECT_TRUE(r.has(ViolationCode::InvalidProofOfPossession));
  EXPECT_EQ(r.violations[0].detail, "invalid proof of possession");

  auto nyms = fixture_nyms();
  nyms[5].dest = nyms[4].dest;
  r = verify_genesis_pair(rebuilt_domain(nyms), pool, true);
  EXPECT_TRUE(r.has(ViolationCode::DuplicateDid));
  EXPECT_TRUE(r.has(ViolationCode::CouplingViolation));

  nyms = fixture_nyms();
  nyms.erase(nyms.begin());
  EXPECT_TRUE(verify_genesis_pair(rebuilt_domain(nyms), pool, true).has(ViolationCode::TooFewTrustees));
  EXPECT_TRUE(verify_genesis_pair(rebuilt_domain(nyms), pool, false).launch_ready());

  nyms = fixture_nyms();
  nyms.pop_back();
  nodes = fixture_nodes();
  nodes.pop_back();
  r = verify_genesis_pair(rebuilt_domain(nyms), rebuilt_pool(nodes), true);
  EXPECT_TRUE(r.has(ViolationCode::WrongStewardCount));

  auto broken = pool;
  broken.txns[2].txn_id = broken.txns[1].txn_id;
  EXPECT_TRUE(verify_genesis_pair(domain, broken, true).has(ViolationCode::BrokenChain));

  auto mixed = domain;
  mixed.txns.push_back({8, chain_txn_id(mixed.txns.back().txn_id, pool.txns[0].txn), pool.txns[0].txn});
  EXPECT_TRUE(verify_genesis_pair(mixed, pool, true).has(ViolationCode::KindImpurity));
  EXPECT_TRUE(verify_genesis_pair(pool, domain, true).has(ViolationCode::KindImpurity));
}

TEST(Genesis, ViolationJsonShape) {
  const Violation v{ViolationCode::UnknownSteward, Kind::Pool, 3, "unknown steward: x"};
  EXPECT_EQ(v.to_json().dump(), R"({"code":"UnknownSteward","detail":"unknown steward: x","file":"pool","seqNo":3})");
}

}  // namespace
