#include "cner/common/error.h"

namespace cner {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kOverlappingMentions: return "OverlappingMentions";
    case ErrorCode::kMentionOutOfRange: return "MentionOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kIllFormedGold: return "IllFormedGold";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kUnknownExtractor: return "UnknownExtractor";
    case ErrorCode::kExtractorNotReady: return "ExtractorNotReady";
    case ErrorCode::kRemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kMalformedRequest: return "MalformedRequest";
    case ErrorCode::kPayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kModelFormat: return "ModelFormat";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

static std::string with_line(const std::string& message,
                             std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(with_line(message, line)), code_(code), line_(line) {}

}  // namespace cner
