#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "indyforge/base58.hpp"

namespace testsupport {

std::string fixture_path(std::string_view name) { return std::string(FIXTURE_DIR) + "/" + std::string(name); }

std::string read_fixture(std::string_view name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + std::string(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json read_fixture_json(std::string_view name) { return nlohmann::json::parse(read_fixture(name)); }

indyforge::Roster fixture_roster() {
  using namespace indyforge;
  return roster::validate_roster(roster::parse_trustee_csv(read_fixture("trustees.csv")),
                                 roster::parse_steward_csv(read_fixture("stewards.csv")), true);
}

indyforge::genesis::GenesisDoc fixture_domain() {
  return indyforge::genesis::parse_genesis(read_fixture("domain_transactions_genesis"),
                                           indyforge::genesis::Kind::Domain);
}

indyforge::genesis::GenesisDoc fixture_pool() {
  return indyforge::genesis::parse_genesis(read_fixture("pool_transactions_genesis"), indyforge::genesis::Kind::Pool);
}

std::vector<std::string> fixture_seeds() {
  const auto j = read_fixture_json("fixture_seeds.json");
  std::vector<std::string> out;
  for (const auto* group : {"trustees", "stewards", "nodes"}) {
    for (const auto& s : j.at(group)) out.push_back(s.get<std::string>());
  }
  return out;
}

std::vector<std::string> seed_encodings(const std::string& seed) {
  static constexpr char kLower[] = "0123456789abcdef";
  static constexpr char kUpper[] = "0123456789ABCDEF";
  std::string lower, upper;
  for (const unsigned char c : seed) {
    lower += kLower[c >> 4];
    lower += kLower[c & 0xF];
    upper += kUpper[c >> 4];
    upper += kUpper[c & 0xF];
  }
  const auto* p = reinterpret_cast<const std::uint8_t*>(seed.data());
  return {seed, lower, upper, indyforge::base58::encode({p, seed.size()})};
}

}  // namespace testsupport
