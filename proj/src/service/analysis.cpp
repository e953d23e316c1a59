#include "cner/service/analysis.h"

#include <chrono>

#include "cner/common/error.h"
#include "cner/common/util.h"

namespace cner::service {

namespace {

Json span_json(const text::Span& s) { return Json{{"start", s.start}, {"end", s.end}}; }

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

Json to_json(const AnalysisResult& r) {
  Json sentences = Json::array();
  for (const auto& s : r.document.sentences) {
    Json tokens = Json::array();
    for (const auto& t : s.tokens)
      tokens.push_back({{"index", t.index}, {"surface", t.surface}, {"span", span_json(t.span)}});
    sentences.push_back({{"index", s.index}, {"span", span_json(s.span)}, {"tokens", tokens}});
  }
  Json document = {{"id", r.document.id},
                   {"text", r.document.text},
                   {"language", r.document.language},
                   {"source", r.document.source},
                   {"sentences", sentences}};

  Json mentions = Json::array();
  for (const auto& m : r.mentions)
    mentions.push_back({{"sentence_index", m.sentence_index},
                        {"token_range", {m.first_token, m.last_token}},
                        {"span", span_json(m.span)},
                        {"entity_type", ner::to_string(m.type)},
                        {"extractor_id", m.extractor_id},
                        {"confidence", m.confidence}});

  Json relations = Json::array();
  for (const auto& rel : r.relations)
    relations.push_back({{"sentence_index", rel.sentence_index},
                         {"arg1", rel.arg1},
                         {"arg2", rel.arg2},
                         {"label", relex::to_string(rel.label)},
                         {"scores", rel.scores}});

  return {{"document", document},
          {"mentions", mentions},
          {"relations", relations},
          {"extractor_id", r.extractor_id},
          {"timing",
           {{"segment_ms", r.timing.segment_ms},
            {"ner_ms", r.timing.ner_ms},
            {"relex_ms", r.timing.relex_ms}}},
          {"warnings", r.warnings}};
}

Json to_json(const ner::ExtractorDescriptor& d) {
  return {{"id", d.id},
          {"display_name", d.display_name},
          {"kind", ner::to_string(d.kind)},
          {"ready", d.ready},
          {"detail", d.detail}};
}

Json error_json(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::string document_id(std::string_view normalized_text) {
  Fingerprint fp;
  fp.update(normalized_text);
  return "doc-" + fp.hex();
}

Json ModelInfo::to_json() const {
  return {{"kind", kind},
          {"path", path},
          {"format_version", format_version},
          {"corpus_fingerprint", corpus_fingerprint},
          {"created", created}};
}

std::shared_ptr<const Pipeline> Pipeline::from_config(const ServiceConfig& config) {
  auto abbreviations = config.abbreviations.empty()
                           ? text::AbbreviationList::defaults()
                           : text::AbbreviationList::load(config.abbreviations);
  std::shared_ptr<const ner::Gazetteer> gazetteer;
  if (!config.gazetteer.empty())
    gazetteer = std::make_shared<ner::Gazetteer>(ner::Gazetteer::load(config.gazetteer));

  std::vector<std::string> warnings;
  std::vector<ModelInfo> models;

  std::shared_ptr<const ner::TaggerModel> tagger;
  if (!config.tagger_model.empty()) {
    try {
      tagger = std::make_shared<ner::TaggerModel>(ner::TaggerModel::load(config.tagger_model));
      const auto& m = tagger->metadata();
      models.push_back({"tagger", config.tagger_model, m.format_version, m.corpus_fingerprint,
                        m.created});
    } catch (const Error& e) {
      warnings.push_back("tagger model not loaded: " + std::string(e.what()));
    }
  }

  std::shared_ptr<const relex::RelexModel> relex;
  if (!config.relex_model.empty()) {
    try {
      relex = std::make_shared<relex::RelexModel>(relex::RelexModel::load(config.relex_model));
      const auto& m = relex->metadata();
      models.push_back({"relex", config.relex_model, m.format_version, m.corpus_fingerprint,
                        m.created});
    } catch (const Error& e) {
      warnings.push_back("relex model not loaded: " + std::string(e.what()));
    }
  }

  auto registry = std::make_shared<ner::ExtractorRegistry>();
  ner::ExtractorSettings settings;
  settings.gazetteer = gazetteer;
  settings.gazetteer_options.heuristic_caps = config.heuristic_caps;
  settings.tagger = tagger;
  settings.tagger_path = config.tagger_model;
  settings.remote_url = config.remote_endpoint;
  settings.remote_timeout = std::chrono::milliseconds(config.remote_timeout_ms);
  ner::register_default_extractors(*registry, settings);
  for (const auto& [id, url] : config.extra_remotes)
    registry->add(std::make_shared<ner::RemoteExtractor>(
        id, url, std::chrono::milliseconds(config.remote_timeout_ms)));

  auto p = std::make_shared<Pipeline>(config, text::Segmenter(std::move(abbreviations)),
                                      std::move(registry), std::move(relex), std::move(models));
  p->startup_warnings_ = std::move(warnings);
  return p;
}

Pipeline::Pipeline(ServiceConfig config, text::Segmenter segmenter,
                   std::shared_ptr<ner::ExtractorRegistry> registry,
                   std::shared_ptr<const relex::RelexModel> relex, std::vector<ModelInfo> models)
    : config_(std::move(config)),
      segmenter_(std::move(segmenter)),
      registry_(std::move(registry)),
      relex_(std::move(relex)),
      models_(std::move(models)) {}

AnalysisResult Pipeline::analyze(std::string_view raw_text, std::string source,
                                 const AnalyzeOptions& options) const {
  auto extractor = registry_->resolve(options.extractor_id);
  if (!extractor->descriptor().ready)
    throw Error(ErrorCode::kExtractorNotReady,
                "extractor '" + options.extractor_id + "' is not ready");

  AnalysisResult r;
  r.extractor_id = options.extractor_id;

  auto t0 = std::chrono::steady_clock::now();
  std::string normalized = text::normalize_text(raw_text);
  r.document = segmenter_.segment(normalized, document_id(normalized), std::move(source));
  r.timing.segment_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<ner::EntityMention>> per_sentence;
  for (const auto& sentence : r.document.sentences) {
    ner::Extraction ex = extractor->extract(sentence);
    for (auto& w : ex.warnings)
      r.warnings.push_back("sentence " + std::to_string(sentence.index) + ": " + w);
    per_sentence.push_back(std::move(ex.mentions));
  }
  r.timing.ner_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  std::size_t distance = options.max_token_distance.value_or(config_.max_token_distance);
  if (!relex_ && r.document.sentences.size() > 0)
    r.warnings.push_back("no relation model loaded; relations skipped");
  for (std::size_t s = 0; s < per_sentence.size(); ++s) {
    std::size_t base = r.mentions.size();
    if (relex_) {
      for (const auto& rel : relex::extract_relations(r.document.sentences[s], per_sentence[s],
                                                      *relex_, distance)) {
        if (rel.label == relex::RelationLabel::kNonRel && !options.include_non_rel) continue;
        r.relations.push_back({s, base + rel.pair.arg1_index, base + rel.pair.arg2_index,
                               rel.label, rel.scores});
      }
    }
    for (auto& m : per_sentence[s]) r.mentions.push_back(std::move(m));
  }
  r.timing.relex_ms = elapsed_ms(t0);
  return r;
}

}  // namespace cner::service
