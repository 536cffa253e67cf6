#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "indyforge/base58.hpp"
#include "indyforge/errors.hpp"
#include "indyforge/keymat.hpp"

namespace {

using namespace indyforge;
using keymat::Seed;

Seed seed_from_hex(const std::string& hex) { return Seed::parse(hex); }

Seed seeded(std::mt19937_64& rng) {
  std::vector<std::uint8_t> raw(32);
  for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
  return Seed::from_bytes(raw);
}

std::string flip_bit(const std::string& b58, std::size_t bit) {
  auto raw = *base58::decode(b58);
  raw[(bit / 8) % raw.size()] ^= static_cast<std::uint8_t>(1u << (bit % 8));
  return base58::encode(raw);
}

TEST(Keymat, Ed25519MatchesOracleVectors) {
  const auto vectors = testsupport::read_fixture_json("ed25519_vectors.json");
  ASSERT_EQ(vectors.size(), 20u);
  for (const auto& v : vectors) {
    const auto id = keymat::derive_signing_identity(seed_from_hex(v.at("seed_hex")));
    EXPECT_EQ(id.verkey, v.at("verkey").get<std::string>());
    EXPECT_EQ(id.did, v.at("did").get<std::string>());
  }
}

TEST(Keymat, AsciiStewardSeed) {
  const auto id = keymat::derive_signing_identity(Seed::parse("000000000000000000000000Steward1"));
  EXPECT_EQ(id.did, "Th7MpTaRZVRYnPiabds81Y");
  EXPECT_EQ(id.verkey, "FYmoFw55GeQH7SRFa37dkx1d2dZ3zUF8ckg7wmL7ofN4");
}

TEST(Keymat, BlsMatchesOracleVectors) {
  const auto fixture = testsupport::read_fixture_json("bls_vectors.json");
  for (const auto& v : fixture.at("vectors")) {
    const auto bls = keymat::derive_bls_identity(seed_from_hex(v.at("seed_hex")));
    EXPECT_EQ(bls.bls_key, v.at("bls_key").get<std::string>());
    EXPECT_EQ(bls.bls_pop, v.at("bls_pop").get<std::string>());
    EXPECT_TRUE(keymat::verify_pop(bls.bls_key, bls.bls_pop));
  }
  const auto& cross = fixture.at("cross_check");
  const auto key = keymat::derive_bls_identity(seed_from_hex(cross.at("key_of"))).bls_key;
  const auto pop = keymat::derive_bls_identity(seed_from_hex(cross.at("pop_of"))).bls_pop;
  EXPECT_EQ(keymat::verify_pop(key, pop), cross.at("valid").get<bool>());
}

TEST(Keymat, SeedParsingForms) {
  const std::string ascii = "000000000000000000000000Steward1";
  const auto a = Seed::parse(ascii);
  EXPECT_EQ(Seed::parse(a.hex()), a);
  const auto* p = reinterpret_cast<const std::uint8_t*>(ascii.data());
  EXPECT_EQ(Seed::parse(base58::encode({p, ascii.size()})), a);
  EXPECT_EQ(a.hex(), "3030303030303030303030303030303030303030303030305374657761726431");
}

TEST(Keymat, SeedLengthErrors) {
  for (const auto* bad : {"", "short", "000000000000000000000000Steward12", "abc"}) {
    try {
      Seed::parse(bad);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::SeedLength);
    }
  }
  const std::vector<std::uint8_t> thirty_one(31);
  EXPECT_THROW(keymat::derive_signing_identity(thirty_one), Error);
  EXPECT_THROW(keymat::derive_bls_identity(std::vector<std::uint8_t>(33)), Error);
}

TEST(Keymat, DerivationIsDeterministic) {
  const auto s = Seed::parse(std::string(64, 'a'));
  EXPECT_EQ(keymat::derive_signing_identity(s), keymat::derive_signing_identity(s));
  EXPECT_EQ(keymat::derive_bls_identity(s), keymat::derive_bls_identity(s));
  EXPECT_NE(Seed::random(), Seed::random());
}

TEST(Keymat, DidIsPrefixOfVerkey) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto id = keymat::derive_signing_identity(seeded(rng));
    EXPECT_TRUE(keymat::did_matches_verkey(id.did, id.verkey));
    EXPECT_TRUE(keymat::is_base58_of_size(id.verkey, 32));
    EXPECT_TRUE(keymat::is_base58_of_size(id.did, 16));
  }
  const auto a = keymat::derive_signing_identity(Seed::parse(std::string(64, '1')));
  const auto b = keymat::derive_signing_identity(Seed::parse(std::string(64, '2')));
  EXPECT_FALSE(keymat::did_matches_verkey(a.did, b.verkey));
  EXPECT_FALSE(keymat::did_matches_verkey("not base58!", a.verkey));
}

// 1000 trials: honest pairs verify, swapped and bit-flipped ones do not,
// and none of them throws.
TEST(Keymat, PopPropertyThousandTrials) {
  std::mt19937_64 rng(2024);
  std::vector<Seed> seeds;
  for (int i = 0; i < 250; ++i) seeds.push_back(seeded(rng));
  const auto keys = keymat::derive_node_keys(seeds);

  int honest = 0, swapped = 0, flipped = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& mine = keys[i].bls;
    const auto& other = keys[(i + 1) % keys.size()].bls;
    ASSERT_NO_THROW(honest += keymat::verify_pop(mine.bls_key, mine.bls_pop));
    ASSERT_NO_THROW(swapped += keymat::verify_pop(mine.bls_key, other.bls_pop));
    ASSERT_NO_THROW(swapped += keymat::verify_pop(other.bls_key, mine.bls_pop));
    ASSERT_NO_THROW(flipped += keymat::verify_pop(mine.bls_key, flip_bit(mine.bls_pop, rng() % 768)));
  }
  EXPECT_EQ(honest, 250);
  EXPECT_EQ(swapped, 0);
  EXPECT_EQ(flipped, 0);
}

TEST(Keymat, PopEncodingErrors) {
  const auto bls = keymat::derive_bls_identity(Seed::parse(std::string(64, 'b')));
  const auto expect_encoding = [](auto fn) {
    try {
      fn();
      ADD_FAILURE() << "no throw";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::Encoding);
    }
  };
  expect_encoding([&] { keymat::verify_pop("0OIl", bls.bls_pop); });
  expect_encoding([&] { keymat::verify_pop(bls.bls_key, "0OIl"); });
  expect_encoding([&] { keymat::verify_pop(bls.bls_key.substr(3), bls.bls_pop); });
  // All-zero bytes are not a compressed G1 point.
  expect_encoding([&] { keymat::verify_pop(base58::encode(std::vector<std::uint8_t>(48)), bls.bls_pop); });
  EXPECT_FALSE(keymat::verify_pop(bls.bls_key, bls.bls_pop.substr(2)));
}

TEST(Keymat, BatchKernelsMatchSerial) {
  std::mt19937_64 rng(99);
  std::vector<Seed> seeds;
  for (int i = 0; i < 24; ++i) seeds.push_back(seeded(rng));
  const auto keys = keymat::derive_node_keys(seeds);
  ASSERT_EQ(keys, keymat::derive_node_keys_serial(seeds));

  std::vector<keymat::BlsIdentity> pairs;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto p = keys[i].bls;
    if (i % 3 == 1) p.bls_pop = keys[(i + 1) % keys.size()].bls.bls_pop;
    if (i % 5 == 2) p.bls_key = "0OIl";
    pairs.push_back(p);
  }
  const auto par = keymat::verify_pops(pairs);
  EXPECT_EQ(par, keymat::verify_pops_serial(pairs));
  EXPECT_EQ(par[0], keymat::PopStatus::Valid);
  EXPECT_EQ(par[1], keymat::PopStatus::Invalid);
  EXPECT_EQ(par[2], keymat::PopStatus::Malformed);
}

}  // namespace
