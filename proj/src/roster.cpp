#include "indyforge/roster.hpp"

#include <arpa/inet.h>

#include <array>
#include <charconv>
#include <map>
#include <set>

#include "indyforge/csv.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/keymat.hpp"

namespace indyforge {

std::string_view to_string(Role role) { return role == Role::Trustee ? "Trustee" : "Steward"; }

std::string to_string(const Endpoint& endpoint) {
  if (endpoint.ip.find(':') != std::string::npos) {
    return "[" + endpoint.ip + "]:" + std::to_string(endpoint.port);
  }
  return endpoint.ip + ":" + std::to_string(endpoint.port);
}

Endpoint parse_endpoint(std::string_view ip, std::string_view port) {
  const std::string ip_text(ip);
  std::array<char, INET6_ADDRSTRLEN> canonical{};
  if (std::array<unsigned char, 4> v4{}; inet_pton(AF_INET, ip_text.c_str(), v4.data()) == 1) {
    inet_ntop(AF_INET, v4.data(), canonical.data(), canonical.size());
  } else if (std::array<unsigned char, 16> v6{}; inet_pton(AF_INET6, ip_text.c_str(), v6.data()) == 1) {
    inet_ntop(AF_INET6, v6.data(), canonical.data(), canonical.size());
  } else {
    throw Error(Errc::BadEndpoint, "unparsable IP address '" + ip_text + "'", {{"ip", ip_text}});
  }

  unsigned value = 0;
  const auto* end = port.data() + port.size();
  const auto [ptr, ec] = std::from_chars(port.data(), end, value);
  if (port.empty() || ec != std::errc{} || ptr != end || value < 1 || value > 65535) {
    throw Error(Errc::BadEndpoint, "port '" + std::string(port) + "' is not in 1..65535",
                {{"port", std::string(port)}});
  }
  return {canonical.data(), static_cast<std::uint16_t>(value)};
}

}  // namespace indyforge

namespace indyforge::roster {
namespace {

struct RowContext {
  std::string_view file;
  std::size_t row;
  std::size_t line;

  nlohmann::json json() const { return {{"file", file}, {"row", row}, {"line", line}}; }

  [[noreturn]] void fail(Errc code, const std::string& message, nlohmann::json extra = {}) const {
    auto context = json();
    if (extra.is_object()) context.update(extra);
    throw Error(code, std::string(file) + " row " + std::to_string(row) + ": " + message, context);
  }
};

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  return out;
}

void expect_header(const std::vector<csv::Record>& records, std::string_view expected, std::string_view file) {
  if (records.empty()) {
    throw Error(Errc::CsvShape, std::string(file) + ": missing header", {{"file", file}, {"expected", expected}});
  }
  if (join(records.front().fields) != expected) {
    throw Error(Errc::CsvShape, std::string(file) + ": header must be '" + std::string(expected) + "'",
                {{"file", file}, {"line", records.front().line}, {"expected", expected}});
  }
}

void check_width(const csv::Record& record, std::size_t width, const RowContext& ctx) {
  if (record.fields.size() != width) {
    ctx.fail(Errc::CsvShape,
             "expected " + std::to_string(width) + " columns, got " + std::to_string(record.fields.size()),
             {{"expected", width}, {"found", record.fields.size()}});
  }
}

void check_non_empty(const std::string& value, const char* column, const RowContext& ctx) {
  if (value.empty()) ctx.fail(Errc::CsvShape, std::string(column) + " is empty", {{"column", column}});
}

void check_base58(const std::string& value, std::size_t size, const char* column, const RowContext& ctx) {
  if (!keymat::is_base58_of_size(value, size)) {
    ctx.fail(Errc::BadEncoding,
             std::string(column) + " is not base58 of " + std::to_string(size) + " bytes",
             {{"column", column}});
  }
}

ParticipantRecord participant_from(const std::vector<std::string>& f, Role role, const RowContext& ctx) {
  ParticipantRecord record{f[0], f[1], f[2], role};
  check_non_empty(record.name, "name", ctx);
  check_base58(record.did, keymat::kDidSize, "did", ctx);
  check_base58(record.verkey, keymat::kVerkeySize, "verkey", ctx);
  if (!keymat::did_matches_verkey(record.did, record.verkey)) {
    ctx.fail(Errc::CouplingViolation, "did is not the first 16 bytes of verkey",
             {{"did", record.did}, {"verkey", record.verkey}});
  }
  return record;
}

Endpoint endpoint_from(const std::string& ip, const std::string& port, const char* which, const RowContext& ctx) {
  try {
    return parse_endpoint(ip, port);
  } catch (const Error& e) {
    ctx.fail(Errc::BadEndpoint, std::string(which) + ": " + e.what(), {{"column", which}});
  }
}

StewardEntry steward_from(const std::vector<std::string>& f, const RowContext& ctx) {
  StewardEntry entry;
  entry.steward = participant_from(f, Role::Steward, ctx);
  auto& v = entry.validator;
  v.alias = f[3];
  check_non_empty(v.alias, "alias", ctx);
  v.node = endpoint_from(f[4], f[5], "node", ctx);
  v.client = endpoint_from(f[6], f[7], "client", ctx);
  if (v.node == v.client) {
    ctx.fail(Errc::BadEndpoint, "node and client endpoints must differ", {{"endpoint", to_string(v.node)}});
  }
  v.verkey = f[8];
  check_base58(v.verkey, keymat::kVerkeySize, "node_verkey", ctx);
  v.bls_key = f[9];
  check_base58(v.bls_key, keymat::kBlsKeySize, "bls_key", ctx);
  v.bls_pop = f[10];
  check_base58(v.bls_pop, keymat::kBlsPopSize, "bls_pop", ctx);
  v.steward_did = entry.steward.did;
  return entry;
}

constexpr std::size_t kTrusteeColumns = 3;
constexpr std::size_t kStewardColumns = 11;

}  // namespace

std::vector<ParticipantRecord> parse_trustee_csv(std::string_view content, std::string_view file_name) {
  const auto records = csv::parse(content);
  expect_header(records, kTrusteeHeader, file_name);
  std::vector<ParticipantRecord> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const RowContext ctx{file_name, i, records[i].line};
    check_width(records[i], kTrusteeColumns, ctx);
    out.push_back(participant_from(records[i].fields, Role::Trustee, ctx));
  }
  return out;
}

std::vector<StewardEntry> parse_steward_csv(std::string_view content, std::string_view file_name) {
  const auto records = csv::parse(content);
  expect_header(records, kStewardHeader, file_name);
  std::vector<StewardEntry> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const RowContext ctx{file_name, i, records[i].line};
    check_width(records[i], kStewardColumns, ctx);
    out.push_back(steward_from(records[i].fields, ctx));
  }
  return out;
}

StewardEntry parse_steward_row(std::string_view row) {
  const auto records = csv::parse(row);
  const RowContext ctx{"steward row", 1, 1};
  if (records.size() != 1) {
    ctx.fail(Errc::CsvShape, "expected exactly one row, got " + std::to_string(records.size()));
  }
  check_width(records.front(), kStewardColumns, ctx);
  return steward_from(records.front().fields, ctx);
}

Roster validate_roster(std::vector<ParticipantRecord> trustees, std::vector<StewardEntry> steward_entries,
                       bool strict) {
  // Structural rules first: a steward listed twice is reported as such
  // rather than as a count or did problem.
  std::set<std::string> steward_dids;
  for (std::size_t i = 0; i < steward_entries.size(); ++i) {
    const auto& did = steward_entries[i].steward.did;
    if (!steward_dids.insert(did).second) {
      throw Error(Errc::MultipleValidatorsPerSteward, "steward " + did + " owns more than one validator",
                  {{"did", did}, {"row", i + 1}});
    }
  }

  std::set<std::string> all_dids;
  const auto check_participant = [&](const ParticipantRecord& p) {
    if (p.name.empty()) throw Error(Errc::CsvShape, "participant name is empty", {{"did", p.did}});
    if (!keymat::did_matches_verkey(p.did, p.verkey)) {
      throw Error(Errc::CouplingViolation, "did " + p.did + " does not match its verkey", {{"did", p.did}});
    }
    if (!all_dids.insert(p.did).second) {
      throw Error(Errc::DuplicateDid, "did " + p.did + " appears more than once", {{"did", p.did}});
    }
  };
  for (const auto& t : trustees) check_participant(t);
  for (const auto& s : steward_entries) check_participant(s.steward);

  std::set<std::string> aliases;
  std::map<Endpoint, std::string> endpoints;
  for (const auto& [steward, validator] : steward_entries) {
    if (validator.steward_did != steward.did) {
      throw Error(Errc::MultipleValidatorsPerSteward, "validator " + validator.alias + " is not owned by its row's steward",
                  {{"alias", validator.alias}});
    }
    if (validator.alias.empty()) throw Error(Errc::CsvShape, "validator alias is empty", {{"did", steward.did}});
    if (!aliases.insert(validator.alias).second) {
      throw Error(Errc::DuplicateAlias, "alias " + validator.alias + " is used by more than one validator",
                  {{"alias", validator.alias}});
    }
    for (const auto* endpoint : {&validator.node, &validator.client}) {
      const auto [it, inserted] = endpoints.emplace(*endpoint, validator.alias);
      if (!inserted) {
        throw Error(Errc::DuplicateEndpoint,
                    "endpoint " + to_string(*endpoint) + " of " + validator.alias + " already used by " + it->second,
                    {{"endpoint", to_string(*endpoint)}, {"alias", validator.alias}, {"other", it->second}});
      }
    }
  }

  if (strict && trustees.size() < kMinProductionTrustees) {
    throw Error(Errc::TooFewTrustees,
                "a production network needs at least 3 trustees, got " + std::to_string(trustees.size()),
                {{"expected_min", kMinProductionTrustees}, {"found", trustees.size()}});
  }
  if (strict && steward_entries.size() != kGenesisStewards) {
    throw Error(Errc::WrongStewardCount,
                "a new network needs exactly 4 genesis stewards, got " + std::to_string(steward_entries.size()),
                {{"expected", kGenesisStewards}, {"found", steward_entries.size()}});
  }

  Roster roster;
  roster.strict = strict;
  roster.trustees = std::move(trustees);
  for (auto& entry : steward_entries) {
    roster.stewards.push_back(std::move(entry.steward));
    roster.validators.push_back(std::move(entry.validator));
  }
  return roster;
}

std::vector<StewardEntry> steward_entries(const Roster& roster) {
  std::vector<StewardEntry> out;
  for (std::size_t i = 0; i < roster.stewards.size() && i < roster.validators.size(); ++i) {
    out.push_back({roster.stewards[i], roster.validators[i]});
  }
  return out;
}

}  // namespace indyforge::roster
