#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "cner/ner/entity.h"
#include "cner/ner/gazetteer.h"
#include "cner/ner/tagger.h"

namespace cner::ner {

enum class ExtractorKind { kRule, kLearned, kRemote };
std::string_view to_string(ExtractorKind kind);

struct ExtractorDescriptor {
  std::string id;
  std::string display_name;
  ExtractorKind kind = ExtractorKind::kRule;
  bool ready = false;
  std::string detail;
};

struct Extraction {
  std::vector<EntityMention> mentions;
  std::vector<std::string> warnings;
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual ExtractorDescriptor descriptor() const = 0;
  // Throws kExtractorNotReady when descriptor().ready is false.
  virtual Extraction extract(const text::Sentence& sentence) const = 0;
};

class GazetteerExtractor : public Extractor {
 public:
  GazetteerExtractor(std::string id, std::shared_ptr<const Gazetteer> gazetteer,
                     GazetteerOptions options = {});
  ExtractorDescriptor descriptor() const override;
  Extraction extract(const text::Sentence& sentence) const override;

 private:
  std::string id_;
  std::shared_ptr<const Gazetteer> gazetteer_;
  GazetteerOptions options_;
};

class TaggerExtractor : public Extractor {
 public:
  // A null model yields a not-ready extractor.
  TaggerExtractor(std::string id, std::shared_ptr<const TaggerModel> model,
                  std::string detail = {});
  ExtractorDescriptor descriptor() const override;
  Extraction extract(const text::Sentence& sentence) const override;

 private:
  std::string id_;
  std::shared_ptr<const TaggerModel> model_;
  std::string detail_;
};

// http://host[:port]/path
struct RemoteEndpoint {
  std::string scheme_host_port;
  std::string path;
  std::string url;

  // Throws kValidationError for anything but an http URL.
  static RemoteEndpoint parse(std::string_view url);
};

struct RemoteResult {
  std::vector<EntityMention> mentions;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;
};

// One adapter-protocol round trip. Throws kRemoteUnavailable on connection
// failure or timeout and kProtocolError on a non-200 or malformed reply.
RemoteResult remote_extract(const RemoteEndpoint& endpoint,
                            const text::Sentence& sentence,
                            std::chrono::milliseconds timeout,
                            const std::string& extractor_id = "remote-adapter");

// Validates an adapter response body against the sentence.
RemoteResult parse_remote_response(std::string_view body,
                                   const text::Sentence& sentence,
                                   const std::string& extractor_id);
std::string remote_request_body(const text::Sentence& sentence);

class RemoteExtractor : public Extractor {
 public:
  // An empty url yields a not-ready extractor.
  RemoteExtractor(std::string id, std::string url, std::chrono::milliseconds timeout);
  ExtractorDescriptor descriptor() const override;
  Extraction extract(const text::Sentence& sentence) const override;

 private:
  std::string id_;
  std::optional<RemoteEndpoint> endpoint_;
  std::chrono::milliseconds timeout_;
};

// Concurrent lookups, serialized registration.
class ExtractorRegistry {
 public:
  // Throws kValidationError on a duplicate id.
  void add(std::shared_ptr<const Extractor> extractor);
  // Sorted by id.
  std::vector<ExtractorDescriptor> list() const;
  // Throws kUnknownExtractor.
  std::shared_ptr<const Extractor> resolve(std::string_view id) const;
  std::size_t ready_count() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const Extractor>, std::less<>> items_;
};

struct ExtractorSettings {
  std::shared_ptr<const Gazetteer> gazetteer;  // null -> empty gazetteer
  GazetteerOptions gazetteer_options;
  std::shared_ptr<const TaggerModel> tagger;
  std::string tagger_path;
  std::string remote_url;
  std::chrono::milliseconds remote_timeout{2000};
};

inline constexpr std::string_view kRuleExtractorId = "rule-gazetteer";
inline constexpr std::string_view kLearnedExtractorId = "learned-tagger";
inline constexpr std::string_view kRemoteExtractorId = "remote-adapter";

// Registers rule-gazetteer, learned-tagger and remote-adapter.
void register_default_extractors(ExtractorRegistry& registry,
                                 const ExtractorSettings& settings);

}  // namespace cner::ner
