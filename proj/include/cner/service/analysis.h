#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cner/ner/extractor.h"
#include "cner/relex/classifier.h"
#include "cner/service/config.h"
#include "cner/text/segmenter.h"
#include "json.hpp"

namespace cner::service {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kManualSource = "manual";

struct AnalyzeOptions {
  std::string extractor_id{ner::kRuleExtractorId};
  bool include_non_rel = false;
  std::optional<std::size_t> max_token_distance;
};

// A relation whose arguments are indices into AnalysisResult::mentions.
struct ResultRelation {
  std::size_t sentence_index = 0;
  std::size_t arg1 = 0;
  std::size_t arg2 = 0;
  relex::RelationLabel label = relex::RelationLabel::kNonRel;
  relex::LabelScores scores{};
};

struct Timing {
  std::int64_t segment_ms = 0;
  std::int64_t ner_ms = 0;
  std::int64_t relex_ms = 0;
};

struct AnalysisResult {
  text::Document document;
  std::vector<ner::EntityMention> mentions;
  std::vector<ResultRelation> relations;
  std::string extractor_id;
  Timing timing;
  std::vector<std::string> warnings;
};

// Wire form shared by the HTTP service and the CLI.
Json to_json(const AnalysisResult& result);
Json to_json(const ner::ExtractorDescriptor& descriptor);
Json error_json(std::string_view code, std::string_view message);

// Stable document identifier derived from the normalized text.
std::string document_id(std::string_view normalized_text);

struct ModelInfo {
  std::string kind;  // "tagger" | "relex"
  std::string path;
  int format_version = 1;
  std::string corpus_fingerprint;
  std::string created;
  Json to_json() const;
};

// Everything a request reads. Immutable once built, so a snapshot can be
// shared by concurrent requests while a reload builds its replacement.
class Pipeline {
 public:
  // Missing or unreadable models leave their extractor not ready and add a
  // startup warning. A configured gazetteer or abbreviation file that fails
  // to load throws.
  static std::shared_ptr<const Pipeline> from_config(const ServiceConfig& config);

  Pipeline(ServiceConfig config, text::Segmenter segmenter,
           std::shared_ptr<ner::ExtractorRegistry> registry,
           std::shared_ptr<const relex::RelexModel> relex, std::vector<ModelInfo> models);

  // Throws kUnknownExtractor, kExtractorNotReady, kRemoteUnavailable,
  // kProtocolError.
  AnalysisResult analyze(std::string_view raw_text, std::string source,
                         const AnalyzeOptions& options) const;

  const ServiceConfig& config() const { return config_; }
  const ner::ExtractorRegistry& registry() const { return *registry_; }
  const std::vector<ModelInfo>& models() const { return models_; }
  const std::vector<std::string>& startup_warnings() const { return startup_warnings_; }

 private:
  ServiceConfig config_;
  text::Segmenter segmenter_;
  std::shared_ptr<ner::ExtractorRegistry> registry_;
  std::shared_ptr<const relex::RelexModel> relex_;
  std::vector<ModelInfo> models_;
  std::vector<std::string> startup_warnings_;
};

}  // namespace cner::service
