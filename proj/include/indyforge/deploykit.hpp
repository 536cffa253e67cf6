#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "indyforge/genesis.hpp"
#include "indyforge/keymat.hpp"
#include "indyforge/roster.hpp"

namespace indyforge::deploykit {

inline constexpr std::uint16_t kContainerNodePort = 9701;
inline constexpr std::uint16_t kContainerClientPort = 9702;
inline constexpr std::uint16_t kHostPortBase = 9700;
inline constexpr std::string_view kDefaultDataRoot = "var/lib/indy";
inline constexpr std::string_view kDataRootEnv = "INDYFORGE_DATA_ROOT";
inline constexpr std::string_view kDefaultImage = "indy-node:latest";

struct NetworkConfig {
  std::string network_name;  // [A-Za-z0-9_]+
  std::optional<std::string> genesis_domain_url;
  std::optional<std::string> genesis_pool_url;
  std::string image{kDefaultImage};
};

/// Throws Error(BadNetworkName).
void check_network_name(std::string_view name);

/// $INDYFORGE_DATA_ROOT when set and non-empty, kDefaultDataRoot otherwise.
std::string data_root_from_env();

struct PortBinding {
  std::uint16_t node = 0;
  std::uint16_t client = 0;

  bool operator==(const PortBinding&) const = default;
};

/// Rendered files keyed by path relative to the plan root.
struct DeployPlan {
  std::map<std::string, std::string> files;
  std::map<std::string, PortBinding> port_bindings;  // by validator alias

  void merge(DeployPlan other);
  bool operator==(const DeployPlan&) const = default;
};

/// The node's indy_config.py with a single NETWORK_NAME line.
std::string render_node_config(const NetworkConfig& cfg);

/// Places both genesis files under <data_root>/<network_name>/, after
/// checking they parse. Throws Error(GenesisInvalid) wrapping the parse
/// failure.
DeployPlan render_network_layout(const NetworkConfig& cfg, std::string_view domain_bytes,
                                 std::string_view pool_bytes, std::string_view data_root = kDefaultDataRoot);

/// Host ports of the k-th (1-based) validator: 9700 + 2k - 1 and 9700 + 2k.
PortBinding host_ports(std::size_t k);

/// Compose service name derived from an alias: lowercase, [a-z0-9_-] only.
std::string service_name(std::string_view alias);

/// docker-compose descriptor, one service per validator in roster order.
std::string render_compose(const Roster& roster, const NetworkConfig& cfg,
                           std::string_view data_root = kDefaultDataRoot);

/// Everything `deploy render` writes: genesis layout, one config per
/// validator under nodes/<service>/ and docker-compose.yml.
DeployPlan render_deploy_plan(const Roster& roster, const NetworkConfig& cfg,
                              std::string_view data_root = kDefaultDataRoot);

/// HTTP(S) GET. Throws Error(Network) on transport failure or any status
/// other than 200.
std::string fetch_bytes(const std::string& url, int timeout_seconds = 10);

/// fetch_bytes followed by parse_genesis of the given kind. Throws
/// Error(GenesisInvalid) when the body does not parse.
std::string fetch_genesis(const std::string& url, genesis::Kind kind, int timeout_seconds = 10);

/// Public result of the node key ceremony. The seed is not a member.
struct InitReport {
  std::string alias;
  Endpoint node;
  Endpoint client;
  std::string verkey;
  std::string did;
  std::string bls_key;
  std::string bls_pop;

  nlohmann::json to_json() const;
  bool operator==(const InitReport&) const = default;
};

/// Validates the endpoints (Error(BadEndpoint)) and derives the node keys.
InitReport init_node_report(std::string_view alias, std::string_view node_ip, std::string_view node_port,
                            std::string_view client_ip, std::string_view client_port, const keymat::Seed& seed);

}  // namespace indyforge::deploykit
