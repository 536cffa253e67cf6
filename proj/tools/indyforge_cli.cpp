// indyforge command line. Exit codes: 0 ok, 1 validation/authorization
// finding (one JSON object per line on stderr), 2 I/O or network failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "indyforge/deploykit.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/genesis.hpp"
#include "indyforge/keymat.hpp"
#include "indyforge/netsim.hpp"
#include "indyforge/poolstate.hpp"
#include "indyforge/roster.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace indyforge;

namespace {

constexpr int kOk = 0;
constexpr int kFinding = 1;
constexpr int kIoFailure = 2;

int exit_code_for(const Error& e) {
  return e.code() == Errc::Io || e.code() == Errc::Network ? kIoFailure : kFinding;
}

void emit_finding(const json& finding) { std::cerr << finding.dump() << "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path, {{"path", path}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw Error(Errc::Io, "cannot write " + path.string(), {{"path", path.string()}});
  }
}

// Secrets go to stdout only, on a line of their own.
void echo_secret(const keymat::Seed& seed) {
  std::cout << "SECRET seed_hex=" << seed.hex() << "  (store offline; never written to any file)\n";
}

Roster load_roster(const std::string& trustees, const std::string& stewards, bool strict) {
  auto t = roster::parse_trustee_csv(read_file(trustees), fs::path(trustees).filename().string());
  auto s = roster::parse_steward_csv(read_file(stewards), fs::path(stewards).filename().string());
  return roster::validate_roster(std::move(t), std::move(s), strict);
}

// Parse errors become findings; a missing file is still an I/O failure.
std::optional<genesis::GenesisDoc> load_genesis(const std::string& path, genesis::Kind kind,
                                                std::vector<json>& findings) {
  const auto content = read_file(path);
  try {
    return genesis::parse_genesis(content, kind);
  } catch (const Error& e) {
    auto f = e.to_json();
    f["file"] = path;
    findings.push_back(std::move(f));
    return std::nullopt;
  }
}

int report_findings(const std::vector<json>& findings) {
  for (const auto& f : findings) emit_finding(f);
  return findings.empty() ? kOk : kFinding;
}

// ---- keygen / init-node --------------------------------------------------

int cmd_keygen(const std::string& seed_text) {
  const bool generated = seed_text.empty();
  const auto seed = generated ? keymat::Seed::random() : keymat::Seed::parse(seed_text);
  const auto signing = keymat::derive_signing_identity(seed);
  const auto bls = keymat::derive_bls_identity(seed);
  std::cout << json{{"did", signing.did}, {"verkey", signing.verkey}, {"bls_key", bls.bls_key},
                    {"bls_pop", bls.bls_pop}}
                   .dump()
            << "\n";
  if (generated) echo_secret(seed);
  return kOk;
}

struct InitNodeArgs {
  std::string alias, node_ip, node_port, client_ip, client_port, seed, report_path;
};

int cmd_init_node(const InitNodeArgs& a) {
  const bool generated = a.seed.empty();
  const auto seed = generated ? keymat::Seed::random() : keymat::Seed::parse(a.seed);
  const auto report = deploykit::init_node_report(a.alias, a.node_ip, a.node_port, a.client_ip, a.client_port, seed);
  const auto body = report.to_json().dump();
  if (!a.report_path.empty()) write_file(a.report_path, body + "\n");
  std::cout << body << "\n";
  if (generated) echo_secret(seed);
  return kOk;
}

// ---- genesis ---------------------------------------------------------------

int cmd_genesis_build(const std::string& trustees, const std::string& stewards, const std::string& out_dir,
                      bool strict) {
  const auto r = load_roster(trustees, stewards, strict);
  const auto domain = genesis::serialize_genesis(genesis::build_domain_genesis(r));
  const auto pool = genesis::serialize_genesis(genesis::build_pool_genesis(r));
  const fs::path dir(out_dir);
  write_file(dir / genesis::kDomainFileName, domain);
  write_file(dir / genesis::kPoolFileName, pool);
  std::cout << json{{"domain", (dir / genesis::kDomainFileName).string()},
                    {"pool", (dir / genesis::kPoolFileName).string()},
                    {"trustees", r.trustees.size()},
                    {"stewards", r.stewards.size()},
                    {"validators", r.validators.size()}}
                   .dump()
            << "\n";
  return kOk;
}

int cmd_genesis_verify(const std::string& domain_path, const std::string& pool_path, bool strict) {
  std::vector<json> findings;
  const auto domain = load_genesis(domain_path, genesis::Kind::Domain, findings);
  const auto pool = load_genesis(pool_path, genesis::Kind::Pool, findings);
  if (domain && pool) {
    const auto report = genesis::verify_genesis_pair(*domain, *pool, strict);
    for (const auto& v : report.violations) findings.push_back(v.to_json());
  }
  if (findings.empty()) {
    std::cout << json{{"launch_ready", true}, {"domain_txns", domain->txns.size()}, {"pool_txns", pool->txns.size()}}
                     .dump()
              << "\n";
  }
  return report_findings(findings);
}

// ---- pool simulate / node add ------------------------------------------------

netsim::SimOptions sim_options(const std::string& transport, bool strict) {
  netsim::SimOptions opts;
  opts.strict = strict;
  opts.transport = transport == "tcp" ? netsim::TransportKind::Tcp : netsim::TransportKind::InProc;
  return opts;
}

std::optional<netsim::SimPool> spawn_from_files(const std::string& domain_path, const std::string& pool_path,
                                                const netsim::SimOptions& opts, std::vector<json>& findings) {
  const auto domain = load_genesis(domain_path, genesis::Kind::Domain, findings);
  const auto pool = load_genesis(pool_path, genesis::Kind::Pool, findings);
  if (!domain || !pool) return std::nullopt;
  try {
    return netsim::spawn_pool(*domain, *pool, opts);
  } catch (const poolstate::GenesisInvalid& e) {
    for (const auto& v : e.report().violations) findings.push_back(v.to_json());
    return std::nullopt;
  }
}

int cmd_pool_simulate(const std::string& domain_path, const std::string& pool_path, const std::string& scenario_path,
                      const std::string& transport, bool strict) {
  std::vector<json> findings;
  auto sim = spawn_from_files(domain_path, pool_path, sim_options(transport, strict), findings);
  if (!sim) return report_findings(findings);

  json scenario;
  try {
    scenario = json::parse(read_file(scenario_path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::BadJson, std::string("scenario is not JSON: ") + e.what(), {{"file", scenario_path}});
  }
  if (!scenario.is_array()) throw Error(Errc::BadJson, "scenario must be a JSON array", {{"file", scenario_path}});

  for (std::size_t step = 0; step < scenario.size(); ++step) {
    const auto& item = scenario[step];
    netsim::SimReport rep;
    if (item.contains("join")) {
      const auto& join = item.at("join");
      const auto entry = roster::parse_steward_row(join.at("steward_row").get<std::string>());
      rep = sim->join_new_node(entry.steward, entry.validator, join.at("sponsor_trustee").get<std::string>());
    } else {
      const auto sub = poolstate::submission_from_json(item);
      rep = sim->submit(item.at("target").get<std::string>(), sub);
    }
    auto line = rep.to_json();
    line["step"] = step;
    std::cout << line.dump() << "\n";
    if (rep.error) {
      auto f = rep.error->to_json();
      f["step"] = step;
      findings.push_back(std::move(f));
    }
  }
  auto summary = sim->report().to_json();
  summary["ordering_log"] = sim->ordering_log().size();
  summary["states_agree"] = sim->states_agree();
  std::cout << summary.dump() << "\n";
  return report_findings(findings);
}

int cmd_node_add(const std::string& domain_path, const std::string& pool_path, const std::string& row,
                 const std::string& trustee_did, bool strict) {
  std::vector<json> findings;
  auto sim = spawn_from_files(domain_path, pool_path, sim_options("inproc", strict), findings);
  if (!sim) return report_findings(findings);
  const auto entry = roster::parse_steward_row(row);
  const auto rep = sim->join_new_node(entry.steward, entry.validator, trustee_did);
  if (rep.error) {
    findings.push_back(rep.error->to_json());
    return report_findings(findings);
  }
  json subs = json::array();
  for (const auto& s : poolstate::add_node_submissions(trustee_did, entry.steward, entry.validator)) {
    subs.push_back(poolstate::to_json(s));
  }
  auto out = rep.to_json();
  out["submissions"] = std::move(subs);
  std::cout << out.dump() << "\n";
  return kOk;
}

// ---- deploy / fetch ------------------------------------------------------------

struct DeployArgs {
  std::string network, trustees, stewards, out_dir, image{deploykit::kDefaultImage};
  std::string domain_url, pool_url;
  bool no_strict = false;
};

int cmd_deploy_render(const DeployArgs& a) {
  deploykit::check_network_name(a.network);
  const auto r = load_roster(a.trustees, a.stewards, !a.no_strict);
  deploykit::NetworkConfig cfg;
  cfg.network_name = a.network;
  cfg.image = a.image;
  if (!a.domain_url.empty()) cfg.genesis_domain_url = a.domain_url;
  if (!a.pool_url.empty()) cfg.genesis_pool_url = a.pool_url;

  const auto data_root = deploykit::data_root_from_env();
  const auto plan = deploykit::render_deploy_plan(r, cfg, data_root);
  const fs::path root(a.out_dir);
  json files = json::array();
  for (const auto& [path, content] : plan.files) {
    write_file(root / path, content);
    files.push_back(path);
  }
  json ports = json::object();
  for (const auto& [alias, b] : plan.port_bindings) ports[alias] = {{"node", b.node}, {"client", b.client}};
  std::cout << json{{"network", a.network}, {"data_root", data_root}, {"files", files}, {"host_ports", ports}}.dump()
            << "\n";
  return kOk;
}

int cmd_fetch(const std::string& url, const std::string& out, const std::string& kind, int timeout) {
  std::string body;
  if (kind == "domain" || kind == "pool") {
    body = deploykit::fetch_genesis(url, kind == "pool" ? genesis::Kind::Pool : genesis::Kind::Domain, timeout);
  } else {
    body = deploykit::fetch_bytes(url, timeout);
    std::optional<Error> first;
    bool ok = false;
    for (const auto k : {genesis::Kind::Pool, genesis::Kind::Domain}) {
      try {
        genesis::parse_genesis(body, k);
        ok = true;
        break;
      } catch (const Error& e) {
        if (!first) first = e;
      }
    }
    if (!ok) {
      throw Error(Errc::GenesisInvalid, std::string("fetched file is not a genesis file: ") + first->what(),
                  first->to_json());
    }
  }
  write_file(out, body);
  std::cout << json{{"url", url}, {"out", out}, {"bytes", body.size()}}.dump() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indyforge: bootstrap toolkit for permissioned Indy-style networks"};
  app.require_subcommand(1);
  int rc = kOk;

  std::string seed;
  auto* keygen = app.add_subcommand("keygen", "Derive a DID, verkey and BLS key pair from a seed");
  keygen->add_option("--seed", seed, "64 hex digits, base58 or 32 ASCII chars; random when omitted");

  InitNodeArgs init;
  auto* init_node = app.add_subcommand("init-node", "Node key ceremony; prints the public report");
  init_node->add_option("--alias", init.alias)->required();
  init_node->add_option("--node-ip", init.node_ip)->required();
  init_node->add_option("--node-port", init.node_port)->required();
  init_node->add_option("--client-ip", init.client_ip)->required();
  init_node->add_option("--client-port", init.client_port)->required();
  init_node->add_option("--seed", init.seed);
  init_node->add_option("--report", init.report_path, "Also write the public report here");

  auto* gen = app.add_subcommand("genesis", "Build or verify genesis files");
  gen->require_subcommand(1);
  std::string trustees, stewards, out_dir, domain, pool;
  bool no_strict = false;
  auto* gen_build = gen->add_subcommand("build", "Write both genesis files from the CSV sheets");
  gen_build->add_option("--trustees", trustees)->required();
  gen_build->add_option("--stewards", stewards)->required();
  gen_build->add_option("--out-dir", out_dir)->required();
  gen_build->add_flag("--no-strict", no_strict, "Skip the trustee/steward counting rules");
  auto* gen_verify = gen->add_subcommand("verify", "Cross-check a domain/pool pair");
  gen_verify->add_option("--domain", domain)->required();
  gen_verify->add_option("--pool", pool)->required();
  gen_verify->add_flag("--no-strict", no_strict);

  std::string scenario, transport = "inproc";
  auto* pool_cmd = app.add_subcommand("pool", "Validator pool simulation");
  pool_cmd->require_subcommand(1);
  auto* simulate = pool_cmd->add_subcommand("simulate", "Replay a scenario over a simulated pool");
  simulate->add_option("--domain", domain)->required();
  simulate->add_option("--pool", pool)->required();
  simulate->add_option("--scenario", scenario)->required();
  simulate->add_option("--transport", transport)->check(CLI::IsMember({"inproc", "tcp"}));
  simulate->add_flag("--no-strict", no_strict);

  std::string row, trustee_did;
  auto* node = app.add_subcommand("node", "Node membership");
  node->require_subcommand(1);
  auto* node_add = node->add_subcommand("add", "Trustee-sponsored addition of a steward and its node");
  node_add->add_option("--domain", domain)->required();
  node_add->add_option("--pool", pool)->required();
  node_add->add_option("--steward-csv-row", row)->required();
  node_add->add_option("--trustee-did", trustee_did)->required();
  node_add->add_flag("--no-strict", no_strict);

  DeployArgs deploy;
  auto* deploy_cmd = app.add_subcommand("deploy", "Deployment artifacts");
  deploy_cmd->require_subcommand(1);
  auto* render = deploy_cmd->add_subcommand("render", "Render configs, genesis layout and compose file");
  render->add_option("--network", deploy.network)->required();
  render->add_option("--trustees", deploy.trustees)->required();
  render->add_option("--stewards", deploy.stewards)->required();
  render->add_option("--out-dir", deploy.out_dir)->required();
  render->add_option("--image", deploy.image);
  render->add_option("--genesis-domain-url", deploy.domain_url);
  render->add_option("--genesis-pool-url", deploy.pool_url);
  render->add_flag("--no-strict", deploy.no_strict);

  std::string url, out, kind = "auto";
  int timeout = 10;
  auto* fetch = app.add_subcommand("fetch", "Download a published genesis file and check it parses");
  fetch->add_option("--url", url)->required();
  fetch->add_option("--out", out)->required();
  fetch->add_option("--kind", kind)->check(CLI::IsMember({"auto", "domain", "pool"}));
  fetch->add_option("--timeout", timeout, "Seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIoFailure;
  }

  try {
    if (*keygen) rc = cmd_keygen(seed);
    else if (*init_node) rc = cmd_init_node(init);
    else if (*gen_build) rc = cmd_genesis_build(trustees, stewards, out_dir, !no_strict);
    else if (*gen_verify) rc = cmd_genesis_verify(domain, pool, !no_strict);
    else if (*simulate) rc = cmd_pool_simulate(domain, pool, scenario, transport, !no_strict);
    else if (*node_add) rc = cmd_node_add(domain, pool, row, trustee_did, !no_strict);
    else if (*render) rc = cmd_deploy_render(deploy);
    else if (*fetch) rc = cmd_fetch(url, out, kind, timeout);
  } catch (const poolstate::GenesisInvalid& e) {
    for (const auto& v : e.report().violations) emit_finding(v.to_json());
    rc = kFinding;
  } catch (const Error& e) {
    emit_finding(e.to_json());
    rc = exit_code_for(e);
  } catch (const json::exception& e) {
    emit_finding({{"code", "BadJson"}, {"message", e.what()}});
    rc = kFinding;
  }
  return rc;
}
