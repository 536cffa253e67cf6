#include "indyforge/deploykit.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>
#include <set>
#include <sstream>

#include <httplib.h>

#include "indyforge/errors.hpp"

namespace indyforge::deploykit {

void check_network_name(std::string_view name) {
  const bool ok = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
  if (!ok) {
    throw Error(Errc::BadNetworkName, "network name '" + std::string(name) + "' must match [A-Za-z0-9_]+",
                {{"network", std::string(name)}});
  }
}

std::string data_root_from_env() {
  const char* value = std::getenv(std::string(kDataRootEnv).c_str());
  return value && *value ? std::string(value) : std::string(kDefaultDataRoot);
}

void DeployPlan::merge(DeployPlan other) {
  files.merge(other.files);
  port_bindings.merge(other.port_bindings);
}

std::string render_node_config(const NetworkConfig& cfg) {
  check_network_name(cfg.network_name);
  std::ostringstream out;
  out << "# Rendered by indyforge. Regenerate instead of editing by hand.\n"
      << "\n"
      << "# Current network\n"
      << "NETWORK_NAME = '" << cfg.network_name << "'\n"
      << "\n"
      << "# Enable stdout logging\n"
      << "enableStdOutLogging = True\n"
      << "\n"
      << "# Directory to store ledger.\n"
      << "LEDGER_DIR = '/var/lib/indy'\n"
      << "\n"
      << "# Directory to store logs.\n"
      << "LOG_DIR = '/var/log/indy'\n"
      << "\n"
      << "# Directory to store keys.\n"
      << "KEYS_DIR = '/var/lib/indy'\n"
      << "\n"
      << "# Directory to store genesis transactions files.\n"
      << "GENESIS_DIR = '/var/lib/indy'\n"
      << "\n"
      << "# Directory to store backups.\n"
      << "BACKUP_DIR = '/var/lib/indy/backup'\n"
      << "\n"
      << "# Directory to store plugins.\n"
      << "PLUGINS_DIR = '/var/lib/indy/plugins'\n"
      << "\n"
      << "# Directory to store node info.\n"
      << "NODE_INFO_DIR = '/var/lib/indy'\n";
  return out.str();
}

namespace {

std::string normalized_root(std::string_view data_root) {
  std::string root(data_root);
  while (!root.empty() && root.front() == '/') root.erase(root.begin());
  while (!root.empty() && root.back() == '/') root.pop_back();
  return root;
}

std::string network_dir(const NetworkConfig& cfg, std::string_view data_root) {
  const auto root = normalized_root(data_root);
  return root.empty() ? cfg.network_name : root + "/" + cfg.network_name;
}

std::string quoted(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::vector<std::string> service_names(const Roster& roster) {
  std::vector<std::string> names;
  std::set<std::string> taken;
  for (const auto& v : roster.validators) {
    const auto base = service_name(v.alias);
    auto name = base;
    for (int suffix = 2; taken.contains(name); ++suffix) name = base + "-" + std::to_string(suffix);
    taken.insert(name);
    names.push_back(name);
  }
  return names;
}

}  // namespace

DeployPlan render_network_layout(const NetworkConfig& cfg, std::string_view domain_bytes,
                                 std::string_view pool_bytes, std::string_view data_root) {
  check_network_name(cfg.network_name);
  for (const auto& [bytes, kind] : {std::pair{domain_bytes, genesis::Kind::Domain}, std::pair{pool_bytes, genesis::Kind::Pool}}) {
    try {
      genesis::parse_genesis(bytes, kind);
    } catch (const Error& e) {
      throw Error(Errc::GenesisInvalid,
                  std::string(genesis::to_string(kind)) + " genesis does not parse: " + e.what(), e.to_json());
    }
  }
  const auto dir = network_dir(cfg, data_root);
  DeployPlan plan;
  plan.files[dir + "/" + std::string(genesis::kDomainFileName)] = std::string(domain_bytes);
  plan.files[dir + "/" + std::string(genesis::kPoolFileName)] = std::string(pool_bytes);
  return plan;
}

PortBinding host_ports(std::size_t k) {
  const auto node = kHostPortBase + 2 * k - 1;
  if (k == 0 || node + 1 > 65535) throw std::out_of_range("no host ports for validator " + std::to_string(k));
  return {static_cast<std::uint16_t>(node), static_cast<std::uint16_t>(node + 1)};
}

std::string service_name(std::string_view alias) {
  std::string out;
  for (const char c : alias) {
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-') {
      out.push_back(c);
    } else {
      out.push_back('-');
    }
  }
  if (out.empty() || !std::isalnum(static_cast<unsigned char>(out.front()))) out.insert(0, "node-");
  return out;
}

std::string render_compose(const Roster& roster, const NetworkConfig& cfg, std::string_view data_root) {
  check_network_name(cfg.network_name);
  const auto dir = network_dir(cfg, data_root);
  const auto names = service_names(roster);

  std::ostringstream out;
  out << "# Rendered by indyforge for network " << cfg.network_name << ".\n"
      << "name: " << quoted(service_name(cfg.network_name)) << "\n";
  if (roster.validators.empty()) {
    out << "services: {}\n";
    return out.str();
  }
  out << "services:\n";
  for (std::size_t i = 0; i < roster.validators.size(); ++i) {
    const auto& v = roster.validators[i];
    const auto ports = host_ports(i + 1);
    const auto& svc = names[i];
    out << "  " << svc << ":\n"
        << "    image: " << quoted(cfg.image) << "\n"
        << "    container_name: " << quoted(service_name(cfg.network_name) + "-" + svc) << "\n"
        << "    environment:\n"
        << "      NETWORK_NAME: " << quoted(cfg.network_name) << "\n"
        << "      NODE_NAME: " << quoted(v.alias) << "\n"
        << "      NODE_IP: \"0.0.0.0\"\n"
        << "      NODE_PORT: \"" << kContainerNodePort << "\"\n"
        << "      CLIENT_IP: \"0.0.0.0\"\n"
        << "      CLIENT_PORT: \"" << kContainerClientPort << "\"\n";
    if (cfg.genesis_domain_url) out << "      GENESIS_DOMAIN_URL: " << quoted(*cfg.genesis_domain_url) << "\n";
    if (cfg.genesis_pool_url) out << "      GENESIS_POOL_URL: " << quoted(*cfg.genesis_pool_url) << "\n";
    out << "    ports:\n"
        << "      - \"" << ports.node << ":" << kContainerNodePort << "\"\n"
        << "      - \"" << ports.client << ":" << kContainerClientPort << "\"\n"
        << "    volumes:\n"
        << "      - \"./" << dir << ":/var/lib/indy/" << cfg.network_name << "\"\n"
        << "      - \"./nodes/" << svc << "/indy_config.py:/etc/indy/indy_config.py:ro\"\n";
  }
  return out.str();
}

DeployPlan render_deploy_plan(const Roster& roster, const NetworkConfig& cfg, std::string_view data_root) {
  const auto domain = genesis::serialize_genesis(genesis::build_domain_genesis(roster));
  const auto pool = genesis::serialize_genesis(genesis::build_pool_genesis(roster));
  auto plan = render_network_layout(cfg, domain, pool, data_root);

  const auto config = render_node_config(cfg);
  const auto names = service_names(roster);
  for (std::size_t i = 0; i < roster.validators.size(); ++i) {
    plan.files["nodes/" + names[i] + "/indy_config.py"] = config;
    plan.port_bindings[roster.validators[i].alias] = host_ports(i + 1);
  }
  plan.files["docker-compose.yml"] = render_compose(roster, cfg, data_root);
  return plan;
}

std::string fetch_bytes(const std::string& url, int timeout_seconds) {
  static const std::regex kUrl(R"(^(https?://[^/?#]+)([^#]*)$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw Error(Errc::Network, "only http(s) URLs can be fetched: " + url, {{"url", url}});
  }
  const auto base = m[1].str();
  auto path = m[2].str();
  if (path.empty()) path = "/";

  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_follow_location(true);
  const auto res = client.Get(path);
  if (!res) {
    throw Error(Errc::Network, "request to " + url + " failed: " + httplib::to_string(res.error()), {{"url", url}});
  }
  if (res->status != 200) {
    throw Error(Errc::Network, "GET " + url + " returned HTTP " + std::to_string(res->status),
                {{"url", url}, {"status", res->status}});
  }
  return res->body;
}

std::string fetch_genesis(const std::string& url, genesis::Kind kind, int timeout_seconds) {
  auto body = fetch_bytes(url, timeout_seconds);
  try {
    genesis::parse_genesis(body, kind);
  } catch (const Error& e) {
    auto context = e.to_json();
    context["url"] = url;
    throw Error(Errc::GenesisInvalid, "fetched " + std::string(genesis::to_string(kind)) + " genesis is invalid: " + e.what(),
                context);
  }
  return body;
}

nlohmann::json InitReport::to_json() const {
  return {{"alias", alias},       {"node_ip", node.ip},   {"node_port", node.port}, {"client_ip", client.ip},
          {"client_port", client.port}, {"verkey", verkey}, {"did", did},       {"bls_key", bls_key},
          {"bls_pop", bls_pop}};
}

InitReport init_node_report(std::string_view alias, std::string_view node_ip, std::string_view node_port,
                            std::string_view client_ip, std::string_view client_port, const keymat::Seed& seed) {
  InitReport report;
  report.alias = alias;
  report.node = parse_endpoint(node_ip, node_port);
  report.client = parse_endpoint(client_ip, client_port);
  if (report.node == report.client) {
    throw Error(Errc::BadEndpoint, "node and client endpoints must differ", {{"endpoint", to_string(report.node)}});
  }
  const auto signing = keymat::derive_signing_identity(seed);
  const auto bls = keymat::derive_bls_identity(seed);
  report.verkey = signing.verkey;
  report.did = signing.did;
  report.bls_key = bls.bls_key;
  report.bls_pop = bls.bls_pop;
  return report;
}

}  // namespace indyforge::deploykit
