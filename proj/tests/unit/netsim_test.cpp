#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "../support/scenario.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/netsim.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using namespace indyforge::netsim;
using poolstate::PoolState;

SimPool fixture_pool(SimOptions opts = {}) {
  return spawn_pool(testsupport::fixture_domain(), testsupport::fixture_pool(), opts);
}

std::string trustee_did() { return testsupport::fixture_roster().trustees.front().did; }

std::vector<PoolState> states(const SimPool& sim) {
  std::vector<PoolState> out;
  for (const auto& n : sim.nodes()) out.push_back(n.local_state);
  return out;
}

PoolState oracle(const SimPool& sim) {
  return poolstate::replay(sim.options().network_name, sim.domain(), sim.pool(), sim.ordering_log(),
                           sim.options().strict);
}

const std::vector<std::string>& aliases() {
  static const std::vector<std::string> a{"Node1", "Node2", "Node3", "Node4"};
  return a;
}

TEST(NetSim, SpawnFixture) {
  const auto sim = fixture_pool();
  ASSERT_EQ(sim.nodes().size(), 4u);
  const auto r = sim.report();
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.membership_size, (std::vector<std::size_t>{4, 4, 4, 4}));
  EXPECT_TRUE(sim.states_agree());
  EXPECT_EQ(sim.sequencer().alias, "Node1");
  EXPECT_EQ(sim.entry_node().alias, "Node4");
  EXPECT_EQ(fixture_pool().report(), r);
  EXPECT_EQ(sim.nodes()[2].node_endpoint, (Endpoint{"10.0.0.4", 9701}));
  EXPECT_EQ(sim.nodes()[2].client_endpoint, (Endpoint{"10.0.0.4", 9702}));
}

TEST(NetSim, SpawnRejectsInvalidGenesis) {
  auto pool = testsupport::fixture_pool();
  auto& node = std::get<genesis::NodeTxn>(pool.txns[1].txn);
  node.data.blskey_pop = std::get<genesis::NodeTxn>(pool.txns[0].txn).data.blskey_pop;
  pool = genesis::make_doc(genesis::Kind::Pool, {pool.txns[0].txn, pool.txns[1].txn, pool.txns[2].txn, pool.txns[3].txn});
  EXPECT_THROW(spawn_pool(testsupport::fixture_domain(), pool), poolstate::GenesisInvalid);
}

TEST(NetSim, SubmitNymThroughNode2) {
  auto sim = fixture_pool();
  const auto e = synthetic::steward(5);
  const auto sub = poolstate::add_node_submissions(trustee_did(), e.steward, e.validator)[0];
  const auto r = sim.submit("Node2", sub);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.converged);
  // Request, Forward, then Ordered to all four.
  EXPECT_EQ(r.rounds_to_converge, 3u);
  EXPECT_EQ(r.messages_delivered, 6u);
  for (const auto& n : sim.nodes()) EXPECT_TRUE(n.local_state.participants.contains(e.steward.did));
  EXPECT_EQ(oracle(sim), sim.nodes()[0].local_state);
}

TEST(NetSim, SecondNodeForStewardRejectedEverywhere) {
  auto sim = fixture_pool();
  const auto before = states(sim);
  auto v = synthetic::steward(5).validator;
  v.steward_did = testsupport::fixture_roster().stewards[1].did;
  for (const auto& target : aliases()) {
    const auto r = sim.submit(target, {v.steward_did, genesis::node_txn_for(v)});
    EXPECT_FALSE(r.accepted);
    ASSERT_TRUE(r.error.has_value());
    EXPECT_EQ(r.error->code, poolstate::AuthCode::StewardAlreadyHasNode);
    EXPECT_EQ(states(sim), before);
  }
  EXPECT_TRUE(sim.ordering_log().empty());
}

TEST(NetSim, UnknownNode) {
  auto sim = fixture_pool();
  try {
    sim.submit("Node9", {trustee_did(), genesis::NymTxn{}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownNode);
  }
}

TEST(NetSim, JoinOneNode) {
  auto sim = fixture_pool();
  const auto e = synthetic::steward(5);
  const auto r = sim.join_new_node(e.steward, e.validator, trustee_did());
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.membership_size, (std::vector<std::size_t>(5, 5)));
  EXPECT_EQ(r.aliases.back(), "Node5");
  EXPECT_EQ(r.catch_up_steps, 2u);
  EXPECT_EQ(sim.nodes().back().local_state, oracle(sim));
}

TEST(NetSim, JoinDuplicateAliasRejected) {
  auto sim = fixture_pool();
  auto e = synthetic::steward(5);
  e.validator.alias = "Node3";
  const auto r = sim.join_new_node(e.steward, e.validator, trustee_did());
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.error->code, poolstate::AuthCode::DuplicateAlias);
  EXPECT_EQ(r.membership_size, (std::vector<std::size_t>(4, 4)));
  EXPECT_TRUE(sim.ordering_log().empty());
}

TEST(NetSim, JoinLiveEndpointIsEndpointInUse) {
  auto sim = fixture_pool();
  auto e = synthetic::steward(5);
  e.validator.client = sim.nodes()[0].node_endpoint;
  try {
    sim.join_new_node(e.steward, e.validator, trustee_did());
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::EndpointInUse);
  }
}

TEST(NetSim, TwoSequentialJoins) {
  auto sim = fixture_pool();
  for (std::size_t k : {5u, 6u}) {
    const auto e = synthetic::steward(k);
    ASSERT_TRUE(sim.join_new_node(e.steward, e.validator, trustee_did()).accepted);
  }
  const auto r = sim.report();
  EXPECT_EQ(r.membership_size, (std::vector<std::size_t>(6, 6)));
  EXPECT_EQ(sim.ordering_log().size(), 4u);
  // Genesis applied (7 + 4) plus the four submissions.
  for (const auto& n : sim.nodes()) EXPECT_EQ(n.local_state.ledger.size(), 15u);
}

TEST(NetSim, NewcomerCatchesUpAfterTraffic) {
  auto sim = fixture_pool();
  testsupport::ScenarioGen gen(77, 0.0);
  for (int i = 0; i < 6; ++i) {
    const auto step = gen.next(sim.nodes()[0].local_state);
    ASSERT_TRUE(sim.submit(aliases()[i % 4], step.sub).accepted);
  }
  auto e = synthetic::steward(90);
  const auto r = sim.join_new_node(e.steward, e.validator, trustee_did());
  ASSERT_TRUE(r.accepted);
  EXPECT_EQ(r.catch_up_steps, sim.ordering_log().size());
  EXPECT_TRUE(sim.states_agree());
}

// 200 random scenarios: per-step rejection locality, then convergence
// and oracle equivalence at quiescence.
TEST(NetSim, ConvergenceProperty) {
  std::size_t rejected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto sim = fixture_pool();
    testsupport::ScenarioGen gen(1000 + seed, 0.3);
    for (int step = 0; step < 8; ++step) {
      const auto st = gen.next(sim.nodes()[0].local_state);
      const auto before = states(sim);
      const auto log_before = sim.ordering_log().size();
      const auto& target = aliases()[gen.rng()() % 4];
      const auto r = sim.submit(target, st.sub);
      ASSERT_EQ(r.accepted, !st.expected.has_value()) << "seed " << seed << " step " << step;
      if (!r.accepted) {
        ++rejected;
        ASSERT_EQ(r.error->code, *st.expected);
        ASSERT_EQ(states(sim), before);
        ASSERT_EQ(sim.ordering_log().size(), log_before);
      }
      ASSERT_TRUE(r.converged);
    }
    const auto expected = oracle(sim);
    for (const auto& n : sim.nodes()) ASSERT_EQ(n.local_state, expected);
  }
  EXPECT_GT(rejected, 200u);
}

TEST(NetSim, OpenMpScheduleMatchesSerial) {
  SimOptions par;
  par.schedule = Schedule::OpenMP;
  auto a = fixture_pool();
  auto b = fixture_pool(par);
  testsupport::ScenarioGen ga(42, 0.3), gb(42, 0.3);
  for (int i = 0; i < 30; ++i) {
    const auto sa = ga.next(a.nodes()[0].local_state);
    const auto sb = gb.next(b.nodes()[0].local_state);
    ASSERT_EQ(sa.sub, sb.sub);
    ASSERT_EQ(a.submit(aliases()[i % 4], sa.sub), b.submit(aliases()[i % 4], sb.sub));
  }
  EXPECT_EQ(states(a), states(b));
  EXPECT_EQ(a.ordering_log(), b.ordering_log());
}

TEST(NetSim, TcpTransportMatchesInProc) {
  SimOptions tcp;
  tcp.transport = TransportKind::Tcp;
  auto a = fixture_pool();
  auto b = fixture_pool(tcp);
  testsupport::ScenarioGen ga(9, 0.3), gb(9, 0.3);
  for (int i = 0; i < 8; ++i) {
    const auto sa = ga.next(a.nodes()[0].local_state);
    gb.next(b.nodes()[0].local_state);
    ASSERT_EQ(a.submit(aliases()[i % 4], sa.sub), b.submit(aliases()[i % 4], sa.sub));
  }
  const auto e = synthetic::steward(70);
  EXPECT_EQ(a.join_new_node(e.steward, e.validator, trustee_did()),
            b.join_new_node(e.steward, e.validator, trustee_did()));
  EXPECT_EQ(states(a), states(b));
}

TEST(NetSim, MeasureBootstrap) {
  const auto r40 = measure_bootstrap(4, 0);
  EXPECT_EQ(r40.rounds_to_converge, 0u);
  EXPECT_EQ(r40.membership_size, (std::vector<std::size_t>(4, 4)));
  const auto r41 = measure_bootstrap(4, 1);
  const auto r42 = measure_bootstrap(4, 2);
  EXPECT_LE(r41.rounds_to_converge, r42.rounds_to_converge);
  EXPECT_LE(r41.messages_delivered, r42.messages_delivered);
  EXPECT_LE(r41.catch_up_steps, r42.catch_up_steps);
  EXPECT_EQ(r42.membership_size, (std::vector<std::size_t>(6, 6)));
  EXPECT_EQ(measure_bootstrap(1, 1).membership_size, (std::vector<std::size_t>(2, 2)));
  EXPECT_THROW(measure_bootstrap(0, 0), std::invalid_argument);
}

// Frozen from the first run of the sequencer + broadcast policy.
TEST(NetSim, MeasureBootstrapGolden) {
  const auto r = measure_bootstrap(4, 1);
  EXPECT_EQ(r.to_json().dump(),
            R"({"accepted":true,"catch_up_steps":2,"converged":true,"membership_size":{"Node1":5,"Node2":5,"Node3":5,"Node4":5,"Node5":5},"messages_delivered":12,"rounds_to_converge":6})");
}

}  // namespace
