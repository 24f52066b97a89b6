#pragma once

#include <stdexcept>
#include <string>

namespace ddsim {

enum class Errc {
  kFieldOverflow,
  kTruncated,
  kInvalidSource,
  kInvalidKind,
  kMalformedPayload,
  kDomainError,
  kUnseeded,
  kInsufficientData,
  kNoSnapshot,
  kEmptyBuffer,
  kConfigError,
  kIoError,
};

const char* errc_name(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Config errors carry the dotted path of the offending field
// (e.g. "vm.3.capacity").
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(Errc::kConfigError, field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ddsim
