#include "cner/service/config.h"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"

namespace cner::service {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "host",          "port",          "tagger_model",      "relex_model",
      "gazetteer",     "abbreviations", "remote_endpoint",   "remote_timeout_ms",
      "doc_converter", "max_upload_bytes", "heuristic_caps", "max_token_distance"};
  return keys;
}

bool is_path_key(std::string_view key) {
  return key == "tagger_model" || key == "relex_model" || key == "gazetteer" ||
         key == "abbreviations";
}

long long as_int(std::string_view key, std::string_view value, long long lo, long long hi,
                 std::optional<std::size_t> line) {
  long long n = 0;
  if (!parse_int(value, n) || n < lo || n > hi)
    throw Error(ErrorCode::kValidationError,
                std::string(key) + ": expected an integer in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "], got '" + std::string(value) + "'",
                line);
  return n;
}

bool as_bool(std::string_view key, std::string_view value, std::optional<std::size_t> line) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::kValidationError,
              std::string(key) + ": expected a boolean, got '" + std::string(value) + "'", line);
}

void assign(ServiceConfig& c, std::string_view key, std::string value,
            std::optional<std::size_t> line) {
  if (key == "host") {
    if (value.empty()) throw Error(ErrorCode::kValidationError, "host must not be empty", line);
    c.host = std::move(value);
  } else if (key == "port") {
    c.port = static_cast<int>(as_int(key, value, 0, 65535, line));
  } else if (key == "tagger_model") {
    c.tagger_model = std::move(value);
  } else if (key == "relex_model") {
    c.relex_model = std::move(value);
  } else if (key == "gazetteer") {
    c.gazetteer = std::move(value);
  } else if (key == "abbreviations") {
    c.abbreviations = std::move(value);
  } else if (key == "remote_endpoint") {
    c.remote_endpoint = std::move(value);
  } else if (key == "remote_timeout_ms") {
    c.remote_timeout_ms = static_cast<int>(as_int(key, value, 1, 600000, line));
  } else if (key == "doc_converter") {
    c.doc_converter = std::move(value);
  } else if (key == "max_upload_bytes") {
    c.max_upload_bytes = static_cast<std::size_t>(as_int(key, value, 1, 1LL << 32, line));
  } else if (key == "heuristic_caps") {
    c.heuristic_caps = as_bool(key, value, line);
  } else if (key == "max_token_distance") {
    c.max_token_distance = static_cast<std::size_t>(as_int(key, value, 1, 1000000, line));
  }
}

}  // namespace

ServiceConfig parse_config(std::string_view content, const std::string& base_dir) {
  ServiceConfig c;
  std::size_t line_no = 0;
  for (std::string_view raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kParseError, "expected 'key = value'", line_no);
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.rfind("remote.", 0) == 0) {
      std::string id = key.substr(7);
      if (id.empty() || value.empty())
        throw Error(ErrorCode::kValidationError, "remote.<id> needs an id and a url", line_no);
      for (const auto& [existing, url] : c.extra_remotes)
        if (existing == id)
          throw Error(ErrorCode::kValidationError, "duplicate remote '" + id + "'", line_no);
      c.extra_remotes.emplace_back(id, value);
      continue;
    }
    bool known = false;
    for (const auto& k : known_keys()) known = known || k == key;
    if (!known) throw Error(ErrorCode::kValidationError, "unknown key '" + key + "'", line_no);
    if (is_path_key(key) && !value.empty() && !base_dir.empty() && fs::path(value).is_relative())
      value = (fs::path(base_dir) / value).lexically_normal().string();
    assign(c, key, std::move(value), line_no);
  }
  return c;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fs::path(path).parent_path().string());
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

void apply_env(ServiceConfig& config, const EnvLookup& env) {
  for (const auto& key : known_keys()) {
    std::string name = "CNER_";
    for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (auto value = env(name)) {
      try {
        assign(config, key, std::string(trim(*value)), std::nullopt);
      } catch (const Error& e) {
        throw Error(e.code(), name + ": " + e.what());
      }
    }
  }
}

}  // namespace cner::service
