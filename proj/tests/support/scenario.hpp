#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "indyforge/poolstate.hpp"

namespace testsupport {

/// Identities that are not in the fixture: stewards (with their nodes) and
/// trustees from synthetic indices past the fixture range. Built once.
struct IdentityBank {
  std::vector<indyforge::StewardEntry> stewards;
  std::vector<indyforge::ParticipantRecord> trustees;

  static const IdentityBank& get();
  const indyforge::StewardEntry* steward_by_did(const std::string& did) const;
};

struct Step {
  indyforge::poolstate::Submission sub;
  std::optional<indyforge::poolstate::AuthCode> expected;  // nullopt: should be accepted
};

/// Seeded random submissions against a known oracle state. Valid steps
/// grow the pool (new trustees, new stewards, their nodes); invalid steps
/// are built to trip one named AuthCode.
class ScenarioGen {
 public:
  explicit ScenarioGen(std::uint64_t seed, double invalid_rate = 0.25);

  Step next(const indyforge::poolstate::PoolState& state);
  std::optional<Step> valid_step(const indyforge::poolstate::PoolState& state);
  /// nullopt when `state` offers no way to provoke `code`.
  std::optional<Step> invalid_step(const indyforge::poolstate::PoolState& state,
                                   indyforge::poolstate::AuthCode code);

  std::mt19937_64& rng() { return rng_; }

 private:
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng_)];
  }

  std::mt19937_64 rng_;
  double invalid_rate_;
};

/// Relaxed roster with random sizes, aliases and (sometimes IPv6) endpoints.
indyforge::Roster random_roster(std::mt19937_64& rng);

std::vector<std::string> dids_with_role(const indyforge::poolstate::PoolState& state, indyforge::Role role);
std::vector<std::string> nodeless_stewards(const indyforge::poolstate::PoolState& state);

}  // namespace testsupport
