#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "indyforge/base58.hpp"

namespace {

using indyforge::base58::decode;
using indyforge::base58::encode;

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

TEST(Base58, KnownVectors) {
  EXPECT_EQ(encode(bytes_of("")), "");
  EXPECT_EQ(encode(bytes_of("Hello World!")), "2NEpo7TZRRrLZSi2U");
  EXPECT_EQ(encode(bytes_of("The quick brown fox jumps over the lazy dog")),
            "7DdiPPYtxLjCD3wA1po2rvZHTDYjkZYiEtazrfiwJcwnKCizhGFhBGHeRdx");
  const std::vector<std::uint8_t> leading{0x00, 0x00, 0x28, 0x7f, 0xb4, 0xcd};
  EXPECT_EQ(encode(leading), "11233QC4");
  EXPECT_EQ(encode(std::vector<std::uint8_t>{0x00}), "1");
}

TEST(Base58, DecodeInvertsEncode) {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> buf(rng() % 70);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng() % 4 == 0 ? 0 : rng());
    const auto text = encode(buf);
    const auto back = decode(text);
    ASSERT_TRUE(back.has_value()) << text;
    EXPECT_EQ(*back, buf);
  }
}

TEST(Base58, RejectsCharactersOutsideAlphabet) {
  for (const auto* bad : {"0", "O", "I", "l", "abc+", "abc ", " abc", "ab\ncd"}) {
    EXPECT_FALSE(decode(bad).has_value()) << bad;
  }
  EXPECT_EQ(decode("")->size(), 0u);
}

}  // namespace
