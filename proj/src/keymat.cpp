#include "indyforge/keymat.hpp"

#include <algorithm>
#include <optional>

#include <blst.h>
#include <sodium.h>

#include "indyforge/base58.hpp"
#include "indyforge/errors.hpp"

namespace indyforge::keymat {
namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

Error seed_length_error(std::size_t got) {
  return Error(Errc::SeedLength, "seed must be exactly 32 bytes, got " + std::to_string(got),
               {{"length", got}});
}

std::optional<std::vector<std::uint8_t>> decode_hex(std::string_view text) {
  if (text.size() % 2 != 0) return std::nullopt;
  std::vector<std::uint8_t> out(text.size() / 2);
  std::size_t written = 0;
  if (sodium_hex2bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, nullptr) != 0 ||
      written != out.size()) {
    return std::nullopt;
  }
  return out;
}

std::vector<std::uint8_t> decode_or_throw(std::string_view text, const char* what) {
  auto raw = base58::decode(text);
  if (!raw) throw Error(Errc::Encoding, std::string(what) + " is not valid base58", {{"field", what}});
  return *std::move(raw);
}

}  // namespace

Seed::~Seed() { sodium_memzero(bytes_.data(), bytes_.size()); }

Seed Seed::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSeedSize) throw seed_length_error(bytes.size());
  Seed seed;
  std::copy(bytes.begin(), bytes.end(), seed.bytes_.begin());
  return seed;
}

Seed Seed::parse(std::string_view text) {
  if (text.size() == 2 * kSeedSize) {
    if (auto raw = decode_hex(text)) return from_bytes(*raw);
  }
  if (auto raw = base58::decode(text); raw && raw->size() == kSeedSize) return from_bytes(*raw);
  if (text.size() == kSeedSize) {
    return from_bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  }
  throw Error(Errc::SeedLength, "seed must be 64 hex digits, base58 of 32 bytes, or 32 characters",
              {{"length", text.size()}});
}

Seed Seed::random() {
  ensure_sodium();
  Seed seed;
  randombytes_buf(seed.bytes_.data(), seed.bytes_.size());
  return seed;
}

std::string Seed::hex() const {
  std::string out(2 * kSeedSize + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes_.data(), bytes_.size());
  out.pop_back();
  return out;
}

SigningIdentity derive_signing_identity(const Seed& seed) {
  ensure_sodium();
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
  crypto_sign_seed_keypair(pk.data(), sk.data(), seed.bytes().data());
  sodium_memzero(sk.data(), sk.size());
  return {base58::encode(pk), base58::encode(std::span(pk).first<kDidSize>())};
}

SigningIdentity derive_signing_identity(std::span<const std::uint8_t> seed) {
  return derive_signing_identity(Seed::from_bytes(seed));
}

BlsIdentity derive_bls_identity(const Seed& seed) {
  blst_scalar sk;
  blst_keygen(&sk, seed.bytes().data(), seed.bytes().size(), nullptr, 0);

  blst_p1 pk;
  blst_sk_to_pk_in_g1(&pk, &sk);
  std::array<std::uint8_t, kBlsKeySize> pk_bytes{};
  blst_p1_compress(pk_bytes.data(), &pk);

  // Proof of possession: the key signs its own compressed encoding.
  blst_p2 hash;
  blst_hash_to_g2(&hash, pk_bytes.data(), pk_bytes.size(),
                  reinterpret_cast<const std::uint8_t*>(kPopDst.data()), kPopDst.size(), nullptr, 0);
  blst_p2 pop;
  blst_sign_pk_in_g1(&pop, &hash, &sk);
  std::array<std::uint8_t, kBlsPopSize> pop_bytes{};
  blst_p2_compress(pop_bytes.data(), &pop);

  sodium_memzero(&sk, sizeof(sk));
  return {base58::encode(pk_bytes), base58::encode(pop_bytes)};
}

BlsIdentity derive_bls_identity(std::span<const std::uint8_t> seed) {
  return derive_bls_identity(Seed::from_bytes(seed));
}

bool verify_pop(std::string_view bls_key, std::string_view bls_pop) {
  const auto key_raw = decode_or_throw(bls_key, "bls_key");
  const auto pop_raw = decode_or_throw(bls_pop, "bls_pop");

  blst_p1_affine pk;
  if (key_raw.size() != kBlsKeySize || blst_p1_uncompress(&pk, key_raw.data()) != BLST_SUCCESS ||
      blst_p1_affine_is_inf(&pk) || !blst_p1_affine_in_g1(&pk)) {
    throw Error(Errc::Encoding, "bls_key is not a valid G1 public key", {{"field", "bls_key"}});
  }

  blst_p2_affine pop;
  if (pop_raw.size() != kBlsPopSize || blst_p2_uncompress(&pop, pop_raw.data()) != BLST_SUCCESS ||
      !blst_p2_affine_in_g2(&pop)) {
    return false;
  }

  const auto rc = blst_core_verify_pk_in_g1(&pk, &pop, true, key_raw.data(), key_raw.size(),
                                            reinterpret_cast<const std::uint8_t*>(kPopDst.data()),
                                            kPopDst.size(), nullptr, 0);
  return rc == BLST_SUCCESS;
}

bool is_base58_of_size(std::string_view text, std::size_t size) {
  const auto raw = base58::decode(text);
  return raw && raw->size() == size;
}

bool did_matches_verkey(std::string_view did, std::string_view verkey) {
  const auto did_raw = base58::decode(did);
  const auto key_raw = base58::decode(verkey);
  if (!did_raw || !key_raw || did_raw->size() != kDidSize || key_raw->size() != kVerkeySize) return false;
  return std::equal(did_raw->begin(), did_raw->end(), key_raw->begin());
}

namespace {

PopStatus check_one(const BlsIdentity& pair) {
  try {
    return verify_pop(pair.bls_key, pair.bls_pop) ? PopStatus::Valid : PopStatus::Invalid;
  } catch (const Error&) {
    return PopStatus::Malformed;
  }
}

NodeKeys derive_one(const Seed& seed) { return {derive_signing_identity(seed), derive_bls_identity(seed)}; }

}  // namespace

std::vector<PopStatus> verify_pops_serial(std::span<const BlsIdentity> pairs) {
  std::vector<PopStatus> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = check_one(pairs[i]);
  return out;
}

std::vector<PopStatus> verify_pops(std::span<const BlsIdentity> pairs) {
  std::vector<PopStatus> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = check_one(pairs[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<NodeKeys> derive_node_keys_serial(std::span<const Seed> seeds) {
  std::vector<NodeKeys> out;
  out.reserve(seeds.size());
  for (const auto& seed : seeds) out.push_back(derive_one(seed));
  return out;
}

std::vector<NodeKeys> derive_node_keys(std::span<const Seed> seeds) {
  ensure_sodium();
  std::vector<NodeKeys> out(seeds.size());
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = derive_one(seeds[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace indyforge::keymat
