#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cner {

// Stable error taxonomy shared by the library, the service and the CLI.
// code_name() values appear on the wire and must not change.
enum class ErrorCode {
  kParseError,
  kValidationError,
  kOverlappingMentions,
  kMentionOutOfRange,
  kLengthMismatch,
  kEmptyCorpus,
  kIllFormedGold,
  kEmptyTrainingSet,
  kUnknownLabel,
  kUnknownExtractor,
  kExtractorNotReady,
  kRemoteUnavailable,
  kProtocolError,
  kMalformedRequest,
  kPayloadTooLarge,
  kUnsupportedFormat,
  kCorruptFile,
  kModelFormat,
  kIo,
};

std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const { return code_; }
  // 1-based line number for errors raised while reading line-oriented files.
  std::optional<std::size_t> line() const { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace cner
