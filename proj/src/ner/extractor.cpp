#include "cner/ner/extractor.h"

#include <mutex>

#include "cner/common/error.h"

namespace cner::ner {

std::string_view to_string(ExtractorKind kind) {
  switch (kind) {
    case ExtractorKind::kRule: return "rule";
    case ExtractorKind::kLearned: return "learned";
    case ExtractorKind::kRemote: return "remote";
  }
  return "rule";
}

GazetteerExtractor::GazetteerExtractor(std::string id,
                                       std::shared_ptr<const Gazetteer> gazetteer,
                                       GazetteerOptions options)
    : id_(std::move(id)),
      gazetteer_(gazetteer ? std::move(gazetteer) : std::make_shared<Gazetteer>()),
      options_(options) {}

ExtractorDescriptor GazetteerExtractor::descriptor() const {
  std::string detail = std::to_string(gazetteer_->size()) + " gazetteer entries";
  if (!gazetteer_->name().empty()) detail += " from " + gazetteer_->name();
  if (options_.heuristic_caps) detail += ", capitalization heuristic on";
  return {id_, "Gazetteer rules", ExtractorKind::kRule, true, detail};
}

Extraction GazetteerExtractor::extract(const text::Sentence& sentence) const {
  return {gazetteer_extract(sentence, *gazetteer_, options_, id_), {}};
}

TaggerExtractor::TaggerExtractor(std::string id,
                                 std::shared_ptr<const TaggerModel> model,
                                 std::string detail)
    : id_(std::move(id)), model_(std::move(model)), detail_(std::move(detail)) {}

ExtractorDescriptor TaggerExtractor::descriptor() const {
  std::string detail = detail_;
  if (!model_) detail = detail.empty() ? "no tagger model loaded" : detail + " (not loaded)";
  return {id_, "Perceptron tagger", ExtractorKind::kLearned, model_ != nullptr, detail};
}

Extraction TaggerExtractor::extract(const text::Sentence& sentence) const {
  if (!model_)
    throw Error(ErrorCode::kExtractorNotReady, "extractor '" + id_ + "' has no model");
  return {tag_sentence(*model_, sentence, id_), {}};
}

RemoteExtractor::RemoteExtractor(std::string id, std::string url,
                                 std::chrono::milliseconds timeout)
    : id_(std::move(id)), timeout_(timeout) {
  if (!url.empty()) endpoint_ = RemoteEndpoint::parse(url);
}

ExtractorDescriptor RemoteExtractor::descriptor() const {
  return {id_, "Remote adapter", ExtractorKind::kRemote, endpoint_.has_value(),
          endpoint_ ? endpoint_->url : "no endpoint configured"};
}

Extraction RemoteExtractor::extract(const text::Sentence& sentence) const {
  if (!endpoint_)
    throw Error(ErrorCode::kExtractorNotReady,
                "extractor '" + id_ + "' has no endpoint configured");
  RemoteResult r = remote_extract(*endpoint_, sentence, timeout_, id_);
  return {std::move(r.mentions), std::move(r.warnings)};
}

void ExtractorRegistry::add(std::shared_ptr<const Extractor> extractor) {
  std::string id = extractor->descriptor().id;
  std::unique_lock lock(mu_);
  if (!items_.emplace(id, std::move(extractor)).second)
    throw Error(ErrorCode::kValidationError, "duplicate extractor id '" + id + "'");
}

std::vector<ExtractorDescriptor> ExtractorRegistry::list() const {
  std::shared_lock lock(mu_);
  std::vector<ExtractorDescriptor> out;
  for (const auto& [id, ex] : items_) out.push_back(ex->descriptor());
  return out;
}

std::shared_ptr<const Extractor> ExtractorRegistry::resolve(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = items_.find(id);
  if (it == items_.end())
    throw Error(ErrorCode::kUnknownExtractor, "unknown extractor '" + std::string(id) + "'");
  return it->second;
}

std::size_t ExtractorRegistry::ready_count() const {
  std::size_t n = 0;
  for (const auto& d : list()) n += d.ready;
  return n;
}

void register_default_extractors(ExtractorRegistry& registry,
                                 const ExtractorSettings& settings) {
  registry.add(std::make_shared<GazetteerExtractor>(
      std::string(kRuleExtractorId), settings.gazetteer, settings.gazetteer_options));
  registry.add(std::make_shared<TaggerExtractor>(std::string(kLearnedExtractorId),
                                                 settings.tagger, settings.tagger_path));
  registry.add(std::make_shared<RemoteExtractor>(
      std::string(kRemoteExtractorId), settings.remote_url, settings.remote_timeout));
}

}  // namespace cner::ner
