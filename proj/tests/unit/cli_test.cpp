#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "../support/fixtures.hpp"
#include "../support/run.hpp"
#include "indyforge/poolstate.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using testsupport::fixture_path;
using testsupport::run_cli;

std::string q(const std::string& s) { return "'" + s + "'"; }

TEST(Cli, KeygenWithSeedPrintsNoSecret) {
  const auto r = run_cli("keygen --seed 000000000000000000000000Steward1");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(j.at("did"), "Th7MpTaRZVRYnPiabds81Y");
  EXPECT_EQ(r.out.find("SECRET"), std::string::npos);
}

TEST(Cli, RandomKeygenEchoesSecretOnStdoutOnly) {
  const auto r = run_cli("keygen");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("SECRET seed_hex="), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, InitNodeReportFileHasNoSeed) {
  const auto dir = testsupport::make_temp_dir();
  const auto report = dir + "/report.json";
  const auto r = run_cli("init-node --alias Node7 --node-ip 10.0.0.8 --node-port 9701 --client-ip 10.0.0.8 "
                         "--client-port 9702 --report " + q(report));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto line = r.out.substr(r.out.find("seed_hex=") + 9, 64);
  const auto body = testsupport::slurp(report);
  EXPECT_EQ(nlohmann::json::parse(body).at("alias"), "Node7");
  EXPECT_EQ(body.find(line), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, InitNodeBadPortIsFinding) {
  const auto r = run_cli("init-node --alias N --node-ip 10.0.0.8 --node-port 70000 --client-ip 10.0.0.8 "
                         "--client-port 9702 --seed 000000000000000000000000Steward1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "BadEndpoint");
}

TEST(Cli, GenesisBuildStrictFailureNamesRule) {
  const auto dir = testsupport::make_temp_dir();
  const auto trustees = dir + "/t.csv";
  auto t = testsupport::read_fixture("trustees.csv");
  t = t.substr(0, t.rfind('\n', t.size() - 2) + 1);  // drop the last trustee
  std::ofstream(trustees) << t;
  auto r = run_cli("genesis build --trustees " + q(trustees) + " --stewards " + q(fixture_path("stewards.csv")) +
                   " --out-dir " + q(dir + "/g"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "TooFewTrustees");
  r = run_cli("genesis build --no-strict --trustees " + q(trustees) + " --stewards " +
              q(fixture_path("stewards.csv")) + " --out-dir " + q(dir + "/g"));
  EXPECT_EQ(r.exit_code, 0) << r.err;
  std::filesystem::remove_all(dir);
}

TEST(Cli, MissingFileIsIoFailure) {
  const auto r = run_cli("genesis verify --domain /nonexistent/d --pool /nonexistent/p");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "Io");
}

TEST(Cli, PoolSimulateScenario) {
  const auto dir = testsupport::make_temp_dir();
  const auto row = testsupport::read_fixture("steward5_row.csv");
  const auto trustee = testsupport::fixture_roster().trustees.front().did;
  const auto steward1 = testsupport::fixture_roster().stewards.front().did;
  nlohmann::json scenario = nlohmann::json::array();
  scenario.push_back({{"join", {{"steward_row", row}, {"sponsor_trustee", trustee}}}});
  const auto six = indyforge::synthetic::steward(6);
  auto bad = indyforge::poolstate::to_json(
      indyforge::poolstate::add_node_submissions(steward1, six.steward, six.validator)[0]);
  bad["target"] = "Node2";
  scenario.push_back(bad);
  std::ofstream(dir + "/s.json") << scenario.dump();
  const auto args = "pool simulate --domain " + q(fixture_path("domain_transactions_genesis")) + " --pool " +
                    q(fixture_path("pool_transactions_genesis")) + " --scenario " + q(dir + "/s.json");
  for (const auto* transport : {"inproc", "tcp"}) {
    const auto r = run_cli(args + " --transport " + transport);
    EXPECT_EQ(r.exit_code, 1) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "NotTrustee");
    EXPECT_NE(r.out.find("\"Node5\":5"), std::string::npos) << r.out;
  }
  std::filesystem::remove_all(dir);
}

TEST(Cli, NodeAdd) {
  const auto trustee = testsupport::fixture_roster().trustees.front().did;
  const auto steward = testsupport::fixture_roster().stewards.front().did;
  const auto base = "node add --domain " + q(fixture_path("domain_transactions_genesis")) + " --pool " +
                    q(fixture_path("pool_transactions_genesis")) + " --steward-csv-row " +
                    q(testsupport::read_fixture("steward5_row.csv"));
  auto r = run_cli(base + " --trustee-did " + trustee);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("submissions").size(), 2u);
  r = run_cli(base + " --trustee-did " + steward);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "NotTrustee");
}

TEST(Cli, DeployRenderHonoursDataRoot) {
  const auto dir = testsupport::make_temp_dir();
  const auto r = run_cli("deploy render --network net3 --trustees " + q(fixture_path("trustees.csv")) +
                             " --stewards " + q(fixture_path("stewards.csv")) + " --out-dir " + q(dir),
                         "INDYFORGE_DATA_ROOT=data");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir + "/data/net3/pool_transactions_genesis"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/nodes/node4/indy_config.py"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/docker-compose.yml"));
  const auto bad = run_cli("deploy render --network 'bad name' --trustees " + q(fixture_path("trustees.csv")) +
                           " --stewards " + q(fixture_path("stewards.csv")) + " --out-dir " + q(dir));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(nlohmann::json::parse(bad.err).at("code"), "BadNetworkName");
  std::filesystem::remove_all(dir);
}

TEST(Cli, FetchUnreachableIsIoFailure) {
  const auto r = run_cli("fetch --url http://127.0.0.1:1/pool --out /tmp/never --timeout 2");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("code"), "Network");
}

}  // namespace
