#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "../support/scenario.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/poolstate.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using namespace indyforge::poolstate;

PoolState fixture_state() {
  return bootstrap_state("sandbox", testsupport::fixture_domain(), testsupport::fixture_pool());
}

std::string first_trustee_did() { return testsupport::fixture_roster().trustees.front().did; }

TEST(PoolState, BootstrapFromFixture) {
  const auto s = fixture_state();
  EXPECT_EQ(s.count(Role::Trustee), 3u);
  EXPECT_EQ(s.count(Role::Steward), 4u);
  EXPECT_EQ(s.validators.size(), 4u);
  ASSERT_EQ(s.ledger.size(), 11u);
  EXPECT_FALSE(s.ledger[0].submitter.has_value());
  EXPECT_EQ(s.ledger[7].submitter, "Th7MpTaRZVRYnPiabds81Y");
  EXPECT_TRUE(invariant_violations(s).empty());
}

TEST(PoolState, BootstrapRejectsBadPair) {
  auto pool = testsupport::fixture_pool();
  std::swap(pool.txns[0], pool.txns[1]);
  try {
    bootstrap_state("sandbox", testsupport::fixture_domain(), pool);
    FAIL();
  } catch (const GenesisInvalid& e) {
    EXPECT_EQ(e.code(), Errc::GenesisInvalid);
    EXPECT_TRUE(e.report().has(genesis::ViolationCode::BrokenChain));
  }
}

TEST(PoolState, StrictFlagControlsCounting) {
  const auto r = synthetic::roster(1, 2, false);
  const auto d = genesis::build_domain_genesis(r);
  const auto p = genesis::build_pool_genesis(r);
  EXPECT_THROW(bootstrap_state("test", d, p, true), GenesisInvalid);
  EXPECT_EQ(bootstrap_state("test", d, p, false).validators.size(), 2u);
}

TEST(PoolState, OnboardStewardThenNode) {
  const auto s0 = fixture_state();
  const auto e = synthetic::steward(5);
  const auto subs = add_node_submissions(first_trustee_did(), e.steward, e.validator);
  const auto t1 = apply_txn(s0, subs[0]);
  ASSERT_TRUE(accepted(t1));
  const auto& s1 = std::get<PoolState>(t1);
  EXPECT_EQ(s1.count(Role::Steward), 5u);
  const auto t2 = apply_txn(s1, subs[1]);
  ASSERT_TRUE(accepted(t2));
  EXPECT_EQ(std::get<PoolState>(t2).validators.size(), 5u);
  EXPECT_EQ(std::get<PoolState>(t2).ledger.back().seq_no, 13u);
}

// One generated counterexample per code, each yielding exactly that code.
TEST(PoolState, EveryAuthCodeHasACounterexample) {
  auto s = fixture_state();
  // A steward without a node makes DuplicateAlias / DuplicateEndpoint reachable.
  const auto e = testsupport::IdentityBank::get().stewards.front();
  s = std::get<PoolState>(apply_txn(s, add_node_submissions(first_trustee_did(), e.steward, e.validator)[0]));

  testsupport::ScenarioGen gen(1);
  std::set<AuthCode> seen;
  for (std::size_t c = 0; c < kAuthCodeCount; ++c) {
    const auto code = static_cast<AuthCode>(c);
    for (int attempt = 0; attempt < 20; ++attempt) {
      const auto step = gen.invalid_step(s, code);
      ASSERT_TRUE(step.has_value()) << to_string(code);
      const auto t = apply_txn(s, step->sub);
      ASSERT_FALSE(accepted(t)) << to_string(code);
      EXPECT_EQ(std::get<AuthError>(t).code, code) << std::get<AuthError>(t).detail;
      seen.insert(std::get<AuthError>(t).code);
    }
  }
  EXPECT_EQ(seen.size(), kAuthCodeCount);
}

TEST(PoolState, ApplyIsPure) {
  const auto s = fixture_state();
  const auto copy = s;
  testsupport::ScenarioGen gen(5, 0.5);
  for (int i = 0; i < 100; ++i) {
    (void)apply_txn(s, gen.next(s).sub);
    ASSERT_EQ(s, copy);
  }
}

TEST(PoolState, WorkflowIsAtomic) {
  const auto s = fixture_state();
  const auto roster = testsupport::fixture_roster();
  const auto e = synthetic::steward(6);

  auto t = add_node_workflow(s, first_trustee_did(), e.steward, e.validator);
  ASSERT_TRUE(accepted(t));
  EXPECT_EQ(std::get<PoolState>(t).participants.size(), s.participants.size() + 1);
  EXPECT_EQ(std::get<PoolState>(t).validators.size(), 5u);

  t = add_node_workflow(s, roster.stewards[0].did, e.steward, e.validator);
  ASSERT_FALSE(accepted(t));
  EXPECT_EQ(std::get<AuthError>(t).code, AuthCode::NotTrustee);

  auto dup = e.validator;
  dup.alias = "Node2";
  t = add_node_workflow(s, first_trustee_did(), e.steward, dup);
  ASSERT_FALSE(accepted(t));
  EXPECT_EQ(std::get<AuthError>(t).code, AuthCode::DuplicateAlias);
  // Nothing of the NYM survives: replaying the two submissions aborts at 1.
  try {
    replay("sandbox", testsupport::fixture_domain(), testsupport::fixture_pool(),
           add_node_submissions(first_trustee_did(), e.steward, dup));
    FAIL();
  } catch (const ReplayAborted& r) {
    EXPECT_EQ(r.position(), 1u);
    EXPECT_EQ(r.auth_error().code, AuthCode::DuplicateAlias);
  }
}

TEST(PoolState, ReplayMatchesStepwiseFold) {
  const auto domain = testsupport::fixture_domain();
  const auto pool = testsupport::fixture_pool();
  EXPECT_EQ(replay("sandbox", domain, pool, {}), fixture_state());

  std::vector<Submission> subs;
  for (std::size_t k = 5; k < 9; ++k) {
    const auto e = synthetic::steward(k);
    for (auto& s : add_node_submissions(first_trustee_did(), e.steward, e.validator)) subs.push_back(s);
  }
  auto state = fixture_state();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    state = std::get<PoolState>(apply_txn(state, subs[i]));
    const std::vector<Submission> prefix(subs.begin(), subs.begin() + static_cast<long>(i) + 1);
    ASSERT_EQ(replay("sandbox", domain, pool, prefix), state);
  }
  EXPECT_EQ(state.validators.size(), 8u);

  subs.insert(subs.begin() + 3, subs[0]);  // re-registering a did
  try {
    replay("sandbox", domain, pool, subs);
    FAIL();
  } catch (const ReplayAborted& r) {
    EXPECT_EQ(r.position(), 3u);
    EXPECT_EQ(r.auth_error().code, AuthCode::DuplicateDid);
    EXPECT_EQ(r.code(), Errc::ReplayAborted);
  }
}

// Safety closure over 1000 generated sequences (~20 steps each).
TEST(PoolState, SafetyClosure) {
  std::size_t cases = 0, accepted_steps = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    testsupport::ScenarioGen gen(seed, 0.3);
    auto s = fixture_state();
    for (int step = 0; step < 20; ++step) {
      const auto st = gen.next(s);
      auto t = apply_txn(s, st.sub);
      if (st.expected) {
        ASSERT_FALSE(accepted(t)) << "seed " << seed << " step " << step;
        ASSERT_EQ(std::get<AuthError>(t).code, *st.expected);
      } else {
        ASSERT_TRUE(accepted(t)) << std::get<AuthError>(t).detail;
        s = std::get<PoolState>(std::move(t));
        ++accepted_steps;
      }
      ASSERT_TRUE(invariant_violations(s).empty()) << invariant_violations(s).front();
    }
    ++cases;
  }
  EXPECT_EQ(cases, 1000u);
  EXPECT_GT(accepted_steps, 5000u);
}

TEST(PoolState, SubmissionJsonRoundTrip) {
  const auto e = synthetic::steward(5);
  for (const auto& s : add_node_submissions(first_trustee_did(), e.steward, e.validator)) {
    EXPECT_EQ(submission_from_json(to_json(s)), s);
  }
  EXPECT_THROW(submission_from_json({{"submitter", 1}}), Error);
  EXPECT_THROW(submission_from_json({{"txn", {}}}), Error);
}

}  // namespace
