#include "ddsim/error.hpp"

namespace ddsim {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kFieldOverflow: return "FieldOverflow";
    case Errc::kTruncated: return "Truncated";
    case Errc::kInvalidSource: return "InvalidSource";
    case Errc::kInvalidKind: return "InvalidKind";
    case Errc::kMalformedPayload: return "MalformedPayload";
    case Errc::kDomainError: return "DomainError";
    case Errc::kUnseeded: return "Unseeded";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kNoSnapshot: return "NoSnapshot";
    case Errc::kEmptyBuffer: return "EmptyBuffer";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ddsim
