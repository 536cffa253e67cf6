#include "indyforge/errors.hpp"

namespace indyforge {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::SeedLength: return "SeedLength";
    case Errc::Encoding: return "Encoding";
    case Errc::CsvShape: return "CsvShape";
    case Errc::BadEncoding: return "BadEncoding";
    case Errc::CouplingViolation: return "CouplingViolation";
    case Errc::BadEndpoint: return "BadEndpoint";
    case Errc::TooFewTrustees: return "TooFewTrustees";
    case Errc::WrongStewardCount: return "WrongStewardCount";
    case Errc::DuplicateAlias: return "DuplicateAlias";
    case Errc::DuplicateEndpoint: return "DuplicateEndpoint";
    case Errc::DuplicateDid: return "DuplicateDid";
    case Errc::MultipleValidatorsPerSteward: return "MultipleValidatorsPerSteward";
    case Errc::BadJson: return "BadJson";
    case Errc::SeqNoGap: return "SeqNoGap";
    case Errc::ChainMismatch: return "ChainMismatch";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::GenesisInvalid: return "GenesisInvalid";
    case Errc::ReplayAborted: return "ReplayAborted";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::EndpointInUse: return "EndpointInUse";
    case Errc::BadNetworkName: return "BadNetworkName";
    case Errc::Network: return "Network";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, nlohmann::json context)
    : std::runtime_error(message), code_(code), context_(std::move(context)) {}

nlohmann::json Error::to_json() const {
  nlohmann::json out = context_.is_object() ? context_ : nlohmann::json::object();
  out["code"] = std::string(to_string(code_));
  out["message"] = what();
  return out;
}

}  // namespace indyforge
