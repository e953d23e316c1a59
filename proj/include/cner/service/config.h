#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cner::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string tagger_model;
  std::string relex_model;
  std::string gazetteer;
  std::string abbreviations;
  std::string remote_endpoint;
  int remote_timeout_ms = 2000;
  std::string doc_converter;
  std::size_t max_upload_bytes = 5242880;
  bool heuristic_caps = false;
  std::size_t max_token_distance = 50;
  // Additional remote extractors from `remote.<id> = <url>` lines.
  std::vector<std::pair<std::string, std::string>> extra_remotes;
};

// `key = value` lines, '#' comments. Throws kParseError / kValidationError
// with line numbers. Relative paths resolve against base_dir when given.
ServiceConfig parse_config(std::string_view content, const std::string& base_dir = {});
// Throws kIo naming the path when the file cannot be read.
ServiceConfig load_config(const std::string& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

// CNER_<KEY> variables (e.g. CNER_PORT) override file values.
void apply_env(ServiceConfig& config, const EnvLookup& env = process_env());

}  // namespace cner::service
