#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "cner/common/error.h"
#include "cner/service/analysis.h"

namespace cner::service {

struct HttpReply {
  int status = 200;
  std::string body;
};

// HTTP status and wire code for a library error. ProtocolError is reported
// as RemoteUnavailable; codes outside the service taxonomy become 500.
int http_status(ErrorCode code);
std::string_view wire_code(ErrorCode code);

HttpReply error_reply(int status, std::string_view code, std::string_view message);
HttpReply error_reply(const Error& error);

// Parsed AnalyzeRequest body. Throws kMalformedRequest.
struct AnalyzeRequest {
  std::optional<std::string> text;
  AnalyzeOptions options;
};
AnalyzeRequest parse_analyze_request(std::string_view body);

// Endpoint handlers, independent of the HTTP library. Each request works on
// the pipeline snapshot current when it started.
class Service {
 public:
  explicit Service(std::shared_ptr<const Pipeline> pipeline);

  HttpReply health() const;
  HttpReply extractors() const;
  HttpReply models() const;
  HttpReply analyze_json(std::string_view body) const;
  // Multipart form: the uploaded file plus an optional JSON options part.
  HttpReply analyze_upload(const std::string& filename, std::string_view bytes,
                           std::string_view options_json) const;

  std::shared_ptr<const Pipeline> snapshot() const;
  void reload(std::shared_ptr<const Pipeline> pipeline);

 private:
  HttpReply run(std::string_view text, std::string source, const AnalyzeOptions& options,
                std::vector<std::string> warnings, const Pipeline& pipeline) const;

  mutable std::mutex mu_;
  std::shared_ptr<const Pipeline> pipeline_;
};

}  // namespace cner::service
