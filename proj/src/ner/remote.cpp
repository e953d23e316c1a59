#include <algorithm>

#include "cner/common/error.h"
#include "cner/ner/extractor.h"
#include "httplib.h"
#include "json.hpp"

namespace cner::ner {

using nlohmann::json;

RemoteEndpoint RemoteEndpoint::parse(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme)
    throw Error(ErrorCode::kValidationError,
                "remote endpoint must be an http:// URL: " + std::string(url));
  std::string_view rest = url.substr(kScheme.size());
  std::size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (authority.empty())
    throw Error(ErrorCode::kValidationError, "remote endpoint has no host: " + std::string(url));
  RemoteEndpoint ep;
  ep.scheme_host_port = std::string(kScheme) + std::string(authority);
  ep.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  ep.url = std::string(url);
  return ep;
}

std::string remote_request_body(const text::Sentence& sentence) {
  json tokens = json::array();
  for (const auto& t : sentence.tokens) tokens.push_back(t.surface);
  nlohmann::ordered_json body;
  body["tokens"] = std::move(tokens);
  body["language"] = "es";
  return body.dump();
}

RemoteResult parse_remote_response(std::string_view body,
                                   const text::Sentence& sentence,
                                   const std::string& extractor_id) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw Error(ErrorCode::kProtocolError, "remote response is not a JSON object");
  auto it = doc.find("mentions");
  if (it == doc.end() || !it->is_array())
    throw Error(ErrorCode::kProtocolError, "remote response lacks a 'mentions' array");

  RemoteResult out;
  const std::size_t n = sentence.tokens.size();
  for (const auto& m : *it) {
    if (!m.is_object() || !m.contains("type") || !m["type"].is_string() ||
        !m.contains("first") || !m["first"].is_number_integer() ||
        !m.contains("last") || !m["last"].is_number_integer() ||
        (m.contains("confidence") && !m["confidence"].is_number()))
      throw Error(ErrorCode::kProtocolError, "malformed mention: " + m.dump());

    auto type = parse_entity_type(m["type"].get<std::string>());
    auto first = m["first"].get<long long>();
    auto last = m["last"].get<long long>();
    std::string reason;
    if (!type) {
      reason = "unknown entity type '" + m["type"].get<std::string>() + "'";
    } else if (first < 0 || last < first || static_cast<std::size_t>(last) >= n) {
      reason = "token range [" + std::to_string(first) + "," + std::to_string(last) +
               "] out of range";
    }
    if (reason.empty()) {
      double conf = m.contains("confidence") ? m["confidence"].get<double>() : 1.0;
      if (!(conf >= 0.0)) conf = 0.0;
      EntityMention mention =
          make_mention(sentence, static_cast<std::size_t>(first),
                       static_cast<std::size_t>(last), *type, extractor_id,
                       std::min(conf, 1.0));
      bool clash = std::any_of(out.mentions.begin(), out.mentions.end(),
                               [&](const auto& o) { return o.overlaps(mention); });
      if (!clash) {
        out.mentions.push_back(std::move(mention));
        continue;
      }
      reason = "mention overlaps an earlier one";
    }
    ++out.dropped;
    out.warnings.push_back(extractor_id + ": dropped mention (" + reason + ")");
  }
  std::sort(out.mentions.begin(), out.mentions.end(),
            [](const auto& a, const auto& b) { return a.first_token < b.first_token; });
  return out;
}

RemoteResult remote_extract(const RemoteEndpoint& endpoint,
                            const text::Sentence& sentence,
                            std::chrono::milliseconds timeout,
                            const std::string& extractor_id) {
  httplib::Client client(endpoint.scheme_host_port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto res = client.Post(endpoint.path, remote_request_body(sentence), "application/json");
  if (!res)
    throw Error(ErrorCode::kRemoteUnavailable,
                endpoint.url + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error(ErrorCode::kProtocolError,
                endpoint.url + " answered HTTP " + std::to_string(res->status));
  return parse_remote_response(res->body, sentence, extractor_id);
}

}  // namespace cner::ner
