#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/roster.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;
using testsupport::read_fixture;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::Io;
}

std::vector<ParticipantRecord> trustees(std::size_t n) {
  std::vector<ParticipantRecord> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(synthetic::trustee(k));
  return out;
}

std::vector<StewardEntry> stewards(std::size_t n) {
  std::vector<StewardEntry> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(synthetic::steward(k));
  return out;
}

// Replaces one field of data row `row` (1-based) of the steward fixture.
std::string edit_steward_csv(std::size_t row, std::size_t column, const std::string& value) {
  auto csv = read_fixture("stewards.csv");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < row; ++i) pos = csv.find('\n', pos) + 1;
  for (std::size_t c = 0; c < column; ++c) pos = csv.find(',', pos) + 1;
  const auto end = csv.find_first_of(",\n", pos);
  return csv.replace(pos, end - pos, value);
}

TEST(Endpoint, CanonicalForms) {
  EXPECT_EQ(parse_endpoint("10.0.0.2", "9701"), (Endpoint{"10.0.0.2", 9701}));
  EXPECT_EQ(parse_endpoint("2001:DB8:0:0::1", "9702"), parse_endpoint("2001:db8::1", "9702"));
  EXPECT_EQ(to_string(parse_endpoint("::1", "9701")), "[::1]:9701");
  for (const auto& [ip, port] : std::vector<std::pair<std::string, std::string>>{
           {"10.0.0.2", "0"}, {"10.0.0.2", "65536"}, {"10.0.0.2", "97a"}, {"10.0.0.256", "9701"}, {"", "9701"},
           {"host.example", "9701"}, {"10.0.0.2", ""}, {"10.0.0.2", "-1"}}) {
    EXPECT_EQ(code_of([&] { parse_endpoint(ip, port); }), Errc::BadEndpoint) << ip << ":" << port;
  }
}

TEST(Roster, FixtureSheetsParse) {
  const auto t = roster::parse_trustee_csv(read_fixture("trustees.csv"));
  const auto s = roster::parse_steward_csv(read_fixture("stewards.csv"));
  ASSERT_EQ(t.size(), 3u);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].steward.did, "Th7MpTaRZVRYnPiabds81Y");
  EXPECT_EQ(s[0].validator.node, (Endpoint{"10.0.0.2", 9701}));
  EXPECT_EQ(s[0].validator.client, (Endpoint{"10.0.0.2", 9702}));
  EXPECT_EQ(s[0].validator.steward_did, s[0].steward.did);
  EXPECT_EQ(s[3].validator.alias, "Node4");
  for (const auto& p : t) EXPECT_EQ(p.role, Role::Trustee);
  for (const auto& e : s) EXPECT_EQ(e.steward.role, Role::Steward);
}

TEST(Roster, SyntheticReproducesFixture) {
  EXPECT_EQ(synthetic::roster(3, 4, true), testsupport::fixture_roster());
}

TEST(Roster, RowDiagnosticsNameTheRow) {
  try {
    roster::parse_steward_csv(edit_steward_csv(3, 5, "0"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadEndpoint);
    EXPECT_EQ(e.context().at("row"), 3);
    EXPECT_EQ(e.context().at("line"), 4);
    EXPECT_EQ(e.context().at("file"), "stewards.csv");
  }
}

TEST(Roster, RowErrors) {
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(2, 1, "not-base58")); }), Errc::BadEncoding);
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(2, 9, "abc")); }), Errc::BadEncoding);
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(2, 10, "abc")); }), Errc::BadEncoding);
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(2, 7, "9701")); }), Errc::BadEndpoint);
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(1, 6, "::zz")); }), Errc::BadEndpoint);
  EXPECT_EQ(code_of([] { roster::parse_steward_csv(edit_steward_csv(1, 3, "")); }), Errc::CsvShape);
  EXPECT_EQ(code_of([] { roster::parse_trustee_csv("name,did\nx,y\n"); }), Errc::CsvShape);
  EXPECT_EQ(code_of([] { roster::parse_trustee_csv(""); }), Errc::CsvShape);
  auto t = read_fixture("trustees.csv");
  t += "Extra,onlytwo\n";
  EXPECT_EQ(code_of([&] { roster::parse_trustee_csv(t); }), Errc::CsvShape);
  // A did from another row: well-formed base58 but not coupled to this verkey.
  const auto other_did = roster::parse_steward_csv(read_fixture("stewards.csv"))[1].steward.did;
  EXPECT_EQ(code_of([&] { roster::parse_steward_csv(edit_steward_csv(1, 1, other_did)); }),
            Errc::CouplingViolation);
}

TEST(Roster, QuotedAndPaddedCellsAccepted) {
  auto csv = read_fixture("trustees.csv");
  const auto first_nl = csv.find('\n');
  csv.insert(first_nl + 1, "  ");
  csv.replace(csv.find("Trustee2"), 8, "\"Trustee2\"");
  const auto t = roster::parse_trustee_csv(csv);
  EXPECT_EQ(t[0].name, "Trustee1");
  EXPECT_EQ(t[1].name, "Trustee2");
}

TEST(Roster, StrictCountingRules) {
  EXPECT_NO_THROW(roster::validate_roster(trustees(3), stewards(4), true));
  EXPECT_NO_THROW(roster::validate_roster(trustees(5), stewards(4), true));
  EXPECT_EQ(code_of([] { roster::validate_roster(trustees(2), stewards(4), true); }), Errc::TooFewTrustees);
  EXPECT_EQ(code_of([] { roster::validate_roster(trustees(3), stewards(3), true); }), Errc::WrongStewardCount);
  EXPECT_EQ(code_of([] { roster::validate_roster(trustees(3), stewards(5), true); }), Errc::WrongStewardCount);
  const auto relaxed = roster::validate_roster(trustees(1), stewards(4), false);
  EXPECT_FALSE(relaxed.strict);
  EXPECT_EQ(relaxed.trustees.size(), 1u);
  EXPECT_NO_THROW(roster::validate_roster({}, {}, false));
}

TEST(Roster, UniquenessRulesHoldEvenRelaxed) {
  for (const bool strict : {true, false}) {
    auto s = stewards(4);
    s[3].steward = s[0].steward;
    s[3].validator.steward_did = s[0].steward.did;
    EXPECT_EQ(code_of([&] { roster::validate_roster(trustees(3), s, strict); }),
              Errc::MultipleValidatorsPerSteward);

    s = stewards(4);
    s[2].validator.alias = s[1].validator.alias;
    EXPECT_EQ(code_of([&] { roster::validate_roster(trustees(3), s, strict); }), Errc::DuplicateAlias);

    s = stewards(4);
    s[2].validator.client = s[1].validator.node;
    EXPECT_EQ(code_of([&] { roster::validate_roster(trustees(3), s, strict); }), Errc::DuplicateEndpoint);

    auto t = trustees(3);
    t[2] = t[0];
    EXPECT_EQ(code_of([&] { roster::validate_roster(t, stewards(4), strict); }), Errc::DuplicateDid);

    t = trustees(3);
    t[1].did = stewards(1)[0].steward.did;
    t[1].verkey = stewards(1)[0].steward.verkey;
    EXPECT_EQ(code_of([&] { roster::validate_roster(t, stewards(4), strict); }), Errc::DuplicateDid);
  }
}

TEST(Roster, SameIpDifferentPortsAllowed) {
  auto s = stewards(4);
  for (auto& e : s) e.validator.node.ip = e.validator.client.ip = "192.168.1.10";
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].validator.node.port = static_cast<std::uint16_t>(9701 + 2 * i);
    s[i].validator.client.port = static_cast<std::uint16_t>(9702 + 2 * i);
  }
  EXPECT_NO_THROW(roster::validate_roster(trustees(3), s, true));
}

TEST(Roster, ValidationIsIdempotentAndOrderPreserving) {
  const auto r = testsupport::fixture_roster();
  EXPECT_EQ(roster::validate_roster(r.trustees, roster::steward_entries(r), r.strict), r);
  for (std::size_t i = 0; i < r.validators.size(); ++i) {
    EXPECT_EQ(r.validators[i].alias, "Node" + std::to_string(i + 1));
  }
}

TEST(Roster, SingleRowParse) {
  const auto e = roster::parse_steward_row(read_fixture("steward5_row.csv"));
  EXPECT_EQ(e.validator.alias, "Node5");
  EXPECT_EQ(e, synthetic::steward(5));
  EXPECT_EQ(code_of([] { roster::parse_steward_row("a,b\n"); }), Errc::CsvShape);
}

}  // namespace
