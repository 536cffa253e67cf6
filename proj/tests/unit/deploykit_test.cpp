#include <regex>
#include <set>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "../support/fixtures.hpp"
#include "indyforge/deploykit.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using namespace indyforge::deploykit;
using testsupport::read_fixture;

NetworkConfig net(const std::string& name) {
  NetworkConfig cfg;
  cfg.network_name = name;
  return cfg;
}

std::size_t count_lines_matching(const std::string& text, const std::regex& re) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += std::regex_match(line, re);
  return n;
}

TEST(DeployKit, NodeConfigNetworkLine) {
  for (const auto* name : {"net3", "sandbox", "Net_3"}) {
    const auto text = render_node_config(net(name));
    EXPECT_EQ(count_lines_matching(text, std::regex("NETWORK_NAME = '" + std::string(name) + "'")), 1u);
    EXPECT_EQ(count_lines_matching(text, std::regex(".*NETWORK_NAME.*")), 1u);
    EXPECT_EQ(text, render_node_config(net(name)));
  }
  EXPECT_NE(render_node_config(net("x")).find("enableStdOutLogging = True"), std::string::npos);
}

TEST(DeployKit, BadNetworkNames) {
  for (const auto* bad : {"bad name", "", "net-3", "a/b", "net3'", "rede\xC3\xA9"}) {
    try {
      render_node_config(net(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::BadNetworkName);
    }
  }
}

TEST(DeployKit, NetworkLayout) {
  const auto d = read_fixture("domain_transactions_genesis");
  const auto p = read_fixture("pool_transactions_genesis");
  const auto plan = render_network_layout(net("net3"), d, p);
  ASSERT_EQ(plan.files.size(), 2u);
  EXPECT_EQ(plan.files.at("var/lib/indy/net3/domain_transactions_genesis"), d);
  EXPECT_EQ(plan.files.at("var/lib/indy/net3/pool_transactions_genesis"), p);
  EXPECT_EQ(plan, render_network_layout(net("net3"), d, p));
  EXPECT_TRUE(render_network_layout(net("net3"), d, p, "/srv/indy/").files.contains("srv/indy/net3/pool_transactions_genesis"));
  try {
    render_network_layout(net("net3"), d, p.substr(0, p.size() / 2 + 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GenesisInvalid);
  }
}

TEST(DeployKit, HostPortRule) {
  EXPECT_EQ(host_ports(1), (PortBinding{9701, 9702}));
  EXPECT_EQ(host_ports(4), (PortBinding{9707, 9708}));
  std::set<std::uint16_t> seen;
  for (std::size_t k = 1; k <= 500; ++k) {
    const auto b = host_ports(k);
    EXPECT_TRUE(seen.insert(b.node).second);
    EXPECT_TRUE(seen.insert(b.client).second);
  }
}

TEST(DeployKit, ComposeForFixture) {
  const auto r = testsupport::fixture_roster();
  const auto text = render_compose(r, net("net3"));
  EXPECT_EQ(text, render_compose(r, net("net3")));
  EXPECT_EQ(count_lines_matching(text, std::regex("  [a-z0-9_-]+:")), 4u);
  for (int port = 9701; port <= 9708; ++port) {
    const auto container = port % 2 ? 9701 : 9702;
    EXPECT_EQ(count_lines_matching(text, std::regex("      - \"" + std::to_string(port) + ":" +
                                                    std::to_string(container) + "\"")),
              1u)
        << port;
  }
  EXPECT_NE(text.find("NODE_NAME: \"Node3\""), std::string::npos);
}

TEST(DeployKit, ComposeEdgeCases) {
  const auto one = roster::validate_roster({synthetic::trustee(1)}, {synthetic::steward(1)}, false);
  const auto text = render_compose(one, net("solo"));
  EXPECT_NE(text.find("- \"9701:9701\""), std::string::npos);
  EXPECT_NE(text.find("- \"9702:9702\""), std::string::npos);
  const auto empty = render_compose(roster::validate_roster({}, {}, false), net("solo"));
  EXPECT_NE(empty.find("services: {}"), std::string::npos);
  EXPECT_EQ(service_name("Node One!"), "node-one-");
  EXPECT_EQ(service_name("_x"), "node-_x");
}

TEST(DeployKit, DeployPlanContents) {
  const auto plan = render_deploy_plan(testsupport::fixture_roster(), net("net3"));
  EXPECT_EQ(plan.files.size(), 2u + 4u + 1u);
  for (int k = 1; k <= 4; ++k) EXPECT_TRUE(plan.files.contains("nodes/node" + std::to_string(k) + "/indy_config.py"));
  EXPECT_TRUE(plan.files.contains("docker-compose.yml"));
  EXPECT_EQ(plan.files.at("var/lib/indy/net3/pool_transactions_genesis"), read_fixture("pool_transactions_genesis"));
  EXPECT_EQ(plan.port_bindings.at("Node4"), (PortBinding{9707, 9708}));
}

TEST(DeployKit, NoSeedInAnyRenderedByte) {
  std::vector<std::string> streams;
  for (const auto& [_, content] : render_deploy_plan(testsupport::fixture_roster(), net("net3")).files) {
    streams.push_back(content);
  }
  for (const auto& seed : testsupport::fixture_seeds()) {
    const auto report = init_node_report("NodeX", "10.0.0.50", "9701", "10.0.0.50", "9702", keymat::Seed::parse(seed));
    streams.push_back(report.to_json().dump());
    for (const auto& enc : testsupport::seed_encodings(seed)) {
      for (const auto& s : streams) EXPECT_EQ(s.find(enc), std::string::npos) << enc;
    }
  }
}

TEST(DeployKit, InitNodeReport) {
  const auto seed = keymat::Seed::parse("000000000000000000000000000Node1");
  const auto r = init_node_report("Node1", "10.0.0.2", "9701", "10.0.0.2", "9702", seed);
  EXPECT_EQ(r.verkey, "Gw6pDLhcBcoQesN72qfotTgFa7cbuqZpkX3Xo6pLhPhv");
  EXPECT_EQ(r.verkey, keymat::derive_signing_identity(seed).verkey);
  EXPECT_EQ(r.bls_key, keymat::derive_bls_identity(seed).bls_key);
  EXPECT_EQ(r.to_json().at("node_port"), 9701);
  EXPECT_EQ(r.to_json().at("client_port"), 9702);
  EXPECT_EQ(r, init_node_report("Node1", "10.0.0.2", "9701", "10.0.0.2", "9702", seed));
  EXPECT_THROW(init_node_report("N", "10.0.0.2", "9701", "10.0.0.2", "9701", seed), Error);
  EXPECT_THROW(init_node_report("N", "10.0.0.2", "0", "10.0.0.2", "9702", seed), Error);
}

TEST(DeployKit, DataRootEnv) {
  unsetenv("INDYFORGE_DATA_ROOT");
  EXPECT_EQ(data_root_from_env(), "var/lib/indy");
  setenv("INDYFORGE_DATA_ROOT", "opt/ledger", 1);
  EXPECT_EQ(data_root_from_env(), "opt/ledger");
  unsetenv("INDYFORGE_DATA_ROOT");
}

class StubServer : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto pool = read_fixture("pool_transactions_genesis");
    server_.Get("/pool", [pool](const httplib::Request&, httplib::Response& res) {
      res.set_content(pool, "text/plain");
    });
    server_.Get("/truncated", [pool](const httplib::Request&, httplib::Response& res) {
      res.set_content(pool.substr(0, pool.size() / 2 + 3), "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(StubServer, FetchValidPool) {
  const auto body = fetch_genesis(url("/pool"), genesis::Kind::Pool);
  EXPECT_EQ(body, read_fixture("pool_transactions_genesis"));
  EXPECT_EQ(genesis::parse_genesis(body, genesis::Kind::Pool).txns.size(), 4u);
}

TEST_F(StubServer, NotFoundIsNetworkError) {
  try {
    fetch_genesis(url("/missing"), genesis::Kind::Pool);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Network);
    EXPECT_EQ(e.context().at("status"), 404);
  }
}

TEST_F(StubServer, TruncatedIsGenesisInvalid) {
  try {
    fetch_genesis(url("/truncated"), genesis::Kind::Pool);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GenesisInvalid);
  }
}

TEST(DeployKit, FetchRejectsOtherSchemesAndDeadHosts) {
  EXPECT_THROW(fetch_bytes("ftp://example.org/x"), Error);
  try {
    fetch_bytes("http://127.0.0.1:1/pool", 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Network);
  }
}

}  // namespace
