#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace indyforge::keymat {

inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kVerkeySize = 32;
inline constexpr std::size_t kDidSize = 16;
inline constexpr std::size_t kBlsKeySize = 48;  // compressed G1
inline constexpr std::size_t kBlsPopSize = 96;  // compressed G2

/// Domain separation tag of the proof-of-possession hash-to-curve.
inline constexpr std::string_view kPopDst = "BLS_POP_BLS12381G2_XMD:SHA-256_SSWU_RO_POP_";

/// 32 bytes of secret entropy. The bytes are wiped on destruction.
class Seed {
 public:
  /// Throws Error(SeedLength) unless exactly 32 bytes are given.
  static Seed from_bytes(std::span<const std::uint8_t> bytes);

  /// Accepts 64 hex digits, base58 text decoding to 32 bytes, or 32 raw
  /// ASCII characters (the form init_indy_node takes), tried in that order.
  static Seed parse(std::string_view text);

  static Seed random();

  Seed(const Seed&) = default;
  Seed& operator=(const Seed&) = default;
  ~Seed();

  std::span<const std::uint8_t, kSeedSize> bytes() const noexcept { return bytes_; }
  std::string hex() const;

  bool operator==(const Seed&) const = default;

 private:
  Seed() = default;
  std::array<std::uint8_t, kSeedSize> bytes_{};
};

struct SigningIdentity {
  std::string verkey;  // base58, 32 raw bytes
  std::string did;     // base58 of the first 16 raw verkey bytes

  bool operator==(const SigningIdentity&) const = default;
};

struct BlsIdentity {
  std::string bls_key;  // base58, compressed G1 point
  std::string bls_pop;  // base58, compressed G2 point

  bool operator==(const BlsIdentity&) const = default;
};

struct NodeKeys {
  SigningIdentity signing;
  BlsIdentity bls;

  bool operator==(const NodeKeys&) const = default;
};

SigningIdentity derive_signing_identity(const Seed& seed);
/// Throws Error(SeedLength) for anything but 32 bytes.
SigningIdentity derive_signing_identity(std::span<const std::uint8_t> seed);

BlsIdentity derive_bls_identity(const Seed& seed);
BlsIdentity derive_bls_identity(std::span<const std::uint8_t> seed);

/// True iff `bls_pop` proves possession of the secret key behind `bls_key`.
///
/// Throws Error(Encoding) when either text is not base58, or when the key
/// does not decode to a non-identity point of the G1 subgroup. A proof of
/// the right encoding that is not a valid G2 subgroup point is simply not a
/// valid proof and yields false.
bool verify_pop(std::string_view bls_key, std::string_view bls_pop);

/// did decodes to 16 bytes equal to the first 16 bytes of the 32-byte verkey.
bool did_matches_verkey(std::string_view did, std::string_view verkey);

/// Decodes base58 and checks the decoded length.
bool is_base58_of_size(std::string_view text, std::size_t size);

// Batch kernels. The OpenMP versions split the work across threads; the
// *_serial versions are the reference the tests compare against.

enum class PopStatus : std::uint8_t { Valid, Invalid, Malformed };

std::vector<PopStatus> verify_pops(std::span<const BlsIdentity> pairs);
std::vector<PopStatus> verify_pops_serial(std::span<const BlsIdentity> pairs);

std::vector<NodeKeys> derive_node_keys(std::span<const Seed> seeds);
std::vector<NodeKeys> derive_node_keys_serial(std::span<const Seed> seeds);

}  // namespace indyforge::keymat
