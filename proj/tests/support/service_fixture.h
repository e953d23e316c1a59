#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cner/service/config.h"

namespace cner::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CNER_TEST_DATA) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fixture gazetteer (Juan PER, Cali GPE) and single-weight relex model.
inline service::ServiceConfig fixture_config() {
  return service::load_config(data_path("fixture.conf"));
}

// Replaces the timing object by zeros, leaving every other byte untouched.
inline std::string zero_timing(std::string body) {
  const std::string key = "\"timing\":{";
  auto at = body.find(key);
  if (at == std::string::npos) return body;
  auto close = body.find('}', at);
  body.replace(at, close - at + 1, "\"timing\":{\"segment_ms\":0,\"ner_ms\":0,\"relex_ms\":0}");
  return body;
}

inline std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace cner::testing
