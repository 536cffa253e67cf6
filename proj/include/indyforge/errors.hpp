#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace indyforge {

enum class Errc {
  // keymat
  SeedLength,
  Encoding,
  // roster
  CsvShape,
  BadEncoding,
  CouplingViolation,
  BadEndpoint,
  TooFewTrustees,
  WrongStewardCount,
  DuplicateAlias,
  DuplicateEndpoint,
  DuplicateDid,
  MultipleValidatorsPerSteward,
  // genesis
  BadJson,
  SeqNoGap,
  ChainMismatch,
  KindMismatch,
  GenesisInvalid,
  // poolstate / netsim
  ReplayAborted,
  UnknownNode,
  EndpointInUse,
  // deploykit
  BadNetworkName,
  Network,
  Io,
};

std::string_view to_string(Errc code);

/// Library-wide exception. `context` carries the structured fields of the
/// diagnostic (row numbers, file names, expected/found values) so the CLI can
/// emit it as one JSON object.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, nlohmann::json context = nlohmann::json::object());

  Errc code() const noexcept { return code_; }
  const nlohmann::json& context() const noexcept { return context_; }

  /// {"code": ..., "message": ..., <context fields>}
  nlohmann::json to_json() const;

 private:
  Errc code_;
  nlohmann::json context_;
};

}  // namespace indyforge
