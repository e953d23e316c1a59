#include "cner/service/service.h"

#include "cner/service/ingest.h"

namespace cner::service {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedRequest, what);
}

HttpReply ok(const Json& body) { return {200, body.dump()}; }

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRequest:
    case ErrorCode::kCorruptFile: return 400;
    case ErrorCode::kUnknownExtractor: return 404;
    case ErrorCode::kExtractorNotReady: return 409;
    case ErrorCode::kPayloadTooLarge: return 413;
    case ErrorCode::kUnsupportedFormat: return 415;
    case ErrorCode::kRemoteUnavailable:
    case ErrorCode::kProtocolError: return 502;
    default: return 500;
  }
}

std::string_view wire_code(ErrorCode code) {
  if (code == ErrorCode::kProtocolError) return code_name(ErrorCode::kRemoteUnavailable);
  if (http_status(code) == 500) return "InternalError";
  return code_name(code);
}

HttpReply error_reply(int status, std::string_view code, std::string_view message) {
  return {status, error_json(code, message).dump()};
}

HttpReply error_reply(const Error& error) {
  std::string message = error.what();
  if (error.code() == ErrorCode::kProtocolError) message = "remote protocol error: " + message;
  return error_reply(http_status(error.code()), wire_code(error.code()), message);
}

AnalyzeRequest parse_analyze_request(std::string_view body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    malformed(std::string("request body is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("request body must be a JSON object");
  AnalyzeRequest req;
  if (j.contains("text")) {
    if (!j["text"].is_string()) malformed("'text' must be a string");
    req.text = j["text"].get<std::string>();
  }
  if (j.contains("extractor_id")) {
    if (!j["extractor_id"].is_string()) malformed("'extractor_id' must be a string");
    req.options.extractor_id = j["extractor_id"].get<std::string>();
  }
  if (j.contains("include_non_rel")) {
    if (!j["include_non_rel"].is_boolean()) malformed("'include_non_rel' must be a boolean");
    req.options.include_non_rel = j["include_non_rel"].get<bool>();
  }
  if (j.contains("max_token_distance") && !j["max_token_distance"].is_null()) {
    const auto& d = j["max_token_distance"];
    if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0)
      malformed("'max_token_distance' must be a positive integer");
    req.options.max_token_distance = d.get<std::size_t>();
  }
  return req;
}

Service::Service(std::shared_ptr<const Pipeline> pipeline) : pipeline_(std::move(pipeline)) {}

std::shared_ptr<const Pipeline> Service::snapshot() const {
  std::lock_guard lock(mu_);
  return pipeline_;
}

void Service::reload(std::shared_ptr<const Pipeline> pipeline) {
  std::lock_guard lock(mu_);
  pipeline_ = std::move(pipeline);
}

HttpReply Service::health() const {
  auto p = snapshot();
  return ok({{"status", "ok"},
             {"version", kVersion},
             {"extractors_ready", p->registry().ready_count()}});
}

HttpReply Service::extractors() const {
  Json list = Json::array();
  for (const auto& d : snapshot()->registry().list()) list.push_back(to_json(d));
  return ok(list);
}

HttpReply Service::models() const {
  Json list = Json::array();
  for (const auto& m : snapshot()->models()) list.push_back(m.to_json());
  return ok(list);
}

HttpReply Service::run(std::string_view text, std::string source, const AnalyzeOptions& options,
                       std::vector<std::string> warnings, const Pipeline& pipeline) const {
  AnalysisResult r = pipeline.analyze(text, std::move(source), options);
  warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  r.warnings = std::move(warnings);
  return ok(to_json(r));
}

HttpReply Service::analyze_json(std::string_view body) const {
  auto p = snapshot();
  try {
    AnalyzeRequest req = parse_analyze_request(body);
    if (!req.text) malformed("'text' is required (or upload a file as multipart/form-data)");
    if (req.text->size() > p->config().max_upload_bytes)
      throw Error(ErrorCode::kPayloadTooLarge,
                  "text of " + std::to_string(req.text->size()) + " bytes exceeds the limit of " +
                      std::to_string(p->config().max_upload_bytes));
    return run(*req.text, std::string(kManualSource), req.options, {}, *p);
  } catch (const Error& e) {
    return error_reply(e);
  }
}

HttpReply Service::analyze_upload(const std::string& filename, std::string_view bytes,
                                  std::string_view options_json) const {
  auto p = snapshot();
  try {
    AnalyzeRequest req;
    if (!options_json.empty()) req = parse_analyze_request(options_json);
    if (req.text) malformed("send either 'text' or a file, not both");
    IngestResult in = ingest_file(filename, bytes,
                                  {p->config().max_upload_bytes, p->config().doc_converter});
    return run(in.text, filename, req.options, std::move(in.warnings), *p);
  } catch (const Error& e) {
    return error_reply(e);
  }
}

}  // namespace cner::service
