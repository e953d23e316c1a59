#include "cner/cli/commands.h"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>

#include "CLI11.hpp"
#include "cner/cli/corpus.h"
#include "cner/common/util.h"
#include "cner/ner/bio.h"
#include "cner/service/http.h"
#include "cner/service/ingest.h"
#include "cner/text/unicode.h"

namespace cner::cli {

namespace {

using service::Json;

std::atomic<service::HttpServer*> g_server{nullptr};
std::atomic<int> g_port{0};

extern "C" void on_stop_signal(int) { stop_serving(); }

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownExtractor: return kExitUnknownExtractor;
    case ErrorCode::kExtractorNotReady:
    case ErrorCode::kRemoteUnavailable:
    case ErrorCode::kProtocolError: return kExitExtractorFailed;
    case ErrorCode::kEmptyTrainingSet: return kExitEmptyCorpus;
    case ErrorCode::kParseError:
    case ErrorCode::kValidationError:
    case ErrorCode::kIllFormedGold:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kModelFormat:
    case ErrorCode::kIo:
    case ErrorCode::kMalformedRequest:
    case ErrorCode::kPayloadTooLarge:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kCorruptFile: return kExitUsage;
    default: return kExitFailure;
  }
}

// Usage errors detected by the commands themselves.
struct UsageError : std::runtime_error {
  UsageError(const std::string& what, int code = kExitUsage)
      : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string table_row(std::string_view name, const PrfCounts& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8.*s %6.3f %6.3f %6.3f %6zu %6zu %6zu\n", int(name.size()),
                name.data(), c.precision(), c.recall(), c.f1(), c.tp, c.fp, c.fn);
  return buf;
}

std::string table_header() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8s %6s %6s %6s %6s %6s %6s\n", "label", "P", "R", "F1", "TP",
                "FP", "FN");
  return buf;
}

Json prf_json(const PrfCounts& c) {
  return {{"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()},
          {"tp", c.tp},                 {"fp", c.fp},           {"fn", c.fn}};
}

struct Context {
  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  std::istream& in;
  std::ostream& out;
  std::ostream& err;

  service::ServiceConfig config() const {
    service::ServiceConfig c;
    if (config_path) c = service::load_config(*config_path);
    service::apply_env(c);
    return c;
  }
};

text::Segmenter segmenter_for(const service::ServiceConfig& config) {
  if (config.abbreviations.empty()) return text::Segmenter();
  return text::Segmenter(text::AbbreviationList::load(config.abbreviations));
}

// --- serve -----------------------------------------------------------------

int cmd_serve(const Context& ctx) {
  service::ServiceConfig config = ctx.config();
  auto pipeline = service::Pipeline::from_config(config);
  for (const auto& w : pipeline->startup_warnings()) ctx.err << "warning: " << w << "\n";

  service::Service svc(pipeline);
  service::HttpServer server(svc, config.max_upload_bytes);
  int port = server.bind(config.host, config.port);
  if (port < 0) {
    ctx.err << "cner: cannot bind " << config.host << ":" << config.port << "\n";
    return kExitBind;
  }
  g_port = port;
  g_server = &server;
  auto old_int = std::signal(SIGINT, on_stop_signal);
  auto old_term = std::signal(SIGTERM, on_stop_signal);
  ctx.out << "listening on http://" << config.host << ":" << port << std::endl;
  server.listen();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  g_server = nullptr;
  g_port = 0;
  return kExitOk;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::optional<std::string> text;
  std::optional<std::string> file;
  std::string extractor{ner::kRuleExtractorId};
  std::string format = "json";
  bool include_non_rel = false;
  std::optional<std::size_t> max_token_distance;
};

int cmd_analyze(const Context& ctx, const AnalyzeArgs& args) {
  if (args.text && args.file) throw UsageError("give either a text argument or --file, not both");
  service::ServiceConfig config = ctx.config();
  auto pipeline = service::Pipeline::from_config(config);
  for (const auto& w : pipeline->startup_warnings()) ctx.err << "warning: " << w << "\n";

  std::string input;
  std::string source{service::kManualSource};
  std::vector<std::string> warnings;
  if (args.text) {
    input = *args.text;
  } else if (args.file) {
    std::ifstream f(*args.file, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot open " + *args.file);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    source = std::filesystem::path(*args.file).filename().string();
    auto ingested = service::ingest_file(
        source, bytes, {std::numeric_limits<std::size_t>::max(), config.doc_converter});
    input = std::move(ingested.text);
    warnings = std::move(ingested.warnings);
  } else {
    input.assign(std::istreambuf_iterator<char>(ctx.in), std::istreambuf_iterator<char>());
  }

  service::AnalyzeOptions options;
  options.extractor_id = args.extractor;
  options.include_non_rel = args.include_non_rel;
  options.max_token_distance = args.max_token_distance;
  service::AnalysisResult result = pipeline->analyze(input, source, options);
  warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  result.warnings = std::move(warnings);

  if (args.format == "tsv") {
    for (const auto& w : result.warnings) ctx.err << "warning: " << w << "\n";
    ctx.out << relations_tsv(result);
  } else {
    ctx.out << service::to_json(result).dump() << "\n";
  }
  return kExitOk;
}

// --- training --------------------------------------------------------------

struct TrainNerArgs {
  std::string corpus;
  std::string out;
  std::size_t epochs = 10;
};

int cmd_train_ner(const Context& ctx, const TrainNerArgs& args) {
  NerCorpus corpus = load_ner_corpus(args.corpus);
  if (corpus.empty()) throw UsageError("empty corpus: " + args.corpus, kExitEmptyCorpus);
  ner::TaggerModel model = ner::train_tagger(corpus, args.epochs, ctx.seed);
  model.save(args.out);
  std::size_t tokens = 0;
  for (const auto& s : corpus) tokens += s.gold.size();
  ctx.out << "training token accuracy: " << fixed3(token_accuracy(model, corpus)) << " ("
          << tokens << " tokens, " << corpus.size() << " sentences)\n";
  return kExitOk;
}

struct TrainReArgs {
  std::string corpus;
  std::string out;
  double lambda = 0.01;
  std::size_t epochs = 20;
  std::size_t max_token_distance = relex::kDefaultMaxTokenDistance;
};

int cmd_train_re(const Context& ctx, const TrainReArgs& args) {
  service::ServiceConfig config = ctx.config();
  RelCorpus corpus = load_re_corpus(args.corpus);
  RelInstances built = build_re_instances(corpus, segmenter_for(config), args.max_token_distance);
  if (built.instances.empty())
    throw UsageError("empty corpus: no mention pairs in " + args.corpus, kExitEmptyCorpus);
  if (built.unreachable) {
    ctx.err << "warning: " << built.unreachable
            << " listed relation(s) exceed the token distance cap and were not used\n";
  }
  relex::TrainOptions options;
  options.lambda = args.lambda;
  options.epochs = args.epochs;
  options.seed = ctx.seed;
  relex::RelexModel model = relex::train_relex(built.instances, options);
  model.save(args.out);

  std::size_t correct = 0;
  for (const auto& inst : built.instances)
    correct += relex::classify_pair(model, inst.features).label == inst.label;
  ctx.out << "training accuracy: " << fixed3(double(correct) / double(built.instances.size()))
          << " (" << built.instances.size() << " instances)\n";
  return kExitOk;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string task;
  std::string model;
  std::string corpus;
  bool json = false;
  std::size_t max_token_distance = relex::kDefaultMaxTokenDistance;
};

int evaluate_ner_task(const Context& ctx, const EvaluateArgs& args) {
  ner::TaggerModel model = ner::TaggerModel::load(args.model);
  NerCorpus corpus = load_ner_corpus(args.corpus);
  if (corpus.empty()) throw UsageError("empty corpus");
  ner::NerMetrics m = evaluate_ner(model, corpus);
  if (args.json) {
    Json types = Json::object();
    for (auto t : ner::kAllEntityTypes)
      types[std::string(ner::to_string(t))] = prf_json(m.per_type[std::size_t(t)]);
    ctx.out << Json{{"task", "ner"}, {"sentences", corpus.size()}, {"types", types},
                    {"micro", prf_json(m.micro)}}
                   .dump()
            << "\n";
    return kExitOk;
  }
  ctx.out << table_header();
  for (auto t : ner::kAllEntityTypes) ctx.out << table_row(ner::to_string(t), m.per_type[std::size_t(t)]);
  ctx.out << table_row("micro", m.micro);
  return kExitOk;
}

int evaluate_re_task(const Context& ctx, const EvaluateArgs& args) {
  relex::RelexModel model = relex::RelexModel::load(args.model);
  RelCorpus corpus = load_re_corpus(args.corpus);
  auto built = build_re_instances(corpus, segmenter_for(ctx.config()), args.max_token_distance);
  if (built.instances.empty()) throw UsageError("empty corpus");
  relex::RelexMetrics m = relex::evaluate_relex(model, built.instances);
  if (args.json) {
    Json labels = Json::object();
    for (auto l : relex::kAllLabels)
      labels[std::string(relex::to_string(l))] = prf_json(m.per_label[relex::index_of(l)]);
    Json confusion = Json::array();
    for (const auto& row : m.confusion) confusion.push_back(row);
    ctx.out << Json{{"task", "re"},
                    {"instances", m.total},
                    {"labels", labels},
                    {"micro", prf_json(m.micro)},
                    {"micro_undefined", m.micro_undefined},
                    {"macro_f1", m.macro_f1},
                    {"confusion", confusion}}
                   .dump()
            << "\n";
    return kExitOk;
  }
  ctx.out << table_header();
  for (auto l : relex::kAllLabels)
    ctx.out << table_row(relex::to_string(l), m.per_label[relex::index_of(l)]);
  ctx.out << table_row("micro", m.micro);
  ctx.out << "macro-F1 " << fixed3(m.macro_f1) << "\n";
  if (m.micro_undefined) ctx.out << "note: no substantive relation in gold or predictions\n";
  return kExitOk;
}

}  // namespace

int serving_port() { return g_port; }

void stop_serving() {
  if (auto* s = g_server.load()) s->stop();
}

std::string relations_tsv(const service::AnalysisResult& result) {
  std::string out;
  const auto& text = result.document.text;
  for (const auto& r : result.relations) {
    const auto& a = result.mentions[r.arg1];
    const auto& b = result.mentions[r.arg2];
    out += std::to_string(r.sentence_index) + "\t" +
           text::slice_chars(text, a.span.start, a.span.end) + "\t" +
           std::string(ner::to_string(a.type)) + "\t" +
           text::slice_chars(text, b.span.start, b.span.end) + "\t" +
           std::string(ner::to_string(b.type)) + "\t" + std::string(relex::to_string(r.label)) +
           "\t" + format_double(r.scores[relex::index_of(r.label)]) + "\n";
  }
  return out;
}

ner::NerMetrics evaluate_ner(const ner::TaggerModel& model,
                             const std::vector<ner::TaggedSentence>& corpus) {
  ner::NerMetrics m;
  for (const auto& s : corpus)
    m.add(ner::decode_bio(s.gold, s.sentence, "gold", 1.0), ner::tag_sentence(model, s.sentence));
  return m;
}

double token_accuracy(const ner::TaggerModel& model,
                      const std::vector<ner::TaggedSentence>& corpus) {
  std::size_t correct = 0, total = 0;
  for (const auto& s : corpus) {
    auto predicted = ner::predict_tags(model, s.sentence).tags;
    for (std::size_t i = 0; i < s.gold.size(); ++i) correct += predicted[i] == s.gold[i];
    total += s.gold.size();
  }
  return total ? double(correct) / double(total) : 0.0;
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Spanish named-entity and relation extraction"};
  app.name("cner");
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "Service configuration file");
  app.add_option("--seed", seed, "Seed for training shuffles");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Annotate text from an argument, a file or stdin");
  analyze->add_option("text", an.text, "Text to analyze");
  analyze->add_option("-f,--file", an.file, "Input file (.txt, .odt, .doc)");
  analyze->add_option("-e,--extractor", an.extractor, "Extractor id")->capture_default_str();
  analyze->add_option("--format", an.format, "Output format")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  analyze->add_flag("--include-non-rel", an.include_non_rel, "Keep NON-REL pairs");
  analyze->add_option("--max-token-distance", an.max_token_distance)
      ->check(CLI::PositiveNumber);

  TrainNerArgs tn;
  auto* train_ner = app.add_subcommand("train-ner", "Train the perceptron tagger");
  train_ner->add_option("corpus", tn.corpus, "token<TAB>tag corpus")->required();
  train_ner->add_option("-o,--out", tn.out, "Model output path")->required();
  train_ner->add_option("--epochs", tn.epochs)->check(CLI::PositiveNumber)->capture_default_str();

  TrainReArgs tr;
  auto* train_re = app.add_subcommand("train-re", "Train the relation classifier");
  train_re->add_option("corpus", tr.corpus, "JSON-lines relation corpus")->required();
  train_re->add_option("-o,--out", tr.out, "Model output path")->required();
  train_re->add_option("--lambda", tr.lambda)->check(CLI::PositiveNumber)->capture_default_str();
  train_re->add_option("--epochs", tr.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train_re->add_option("--max-token-distance", tr.max_token_distance)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model against a gold corpus");
  evaluate->add_option("--task", ev.task)->check(CLI::IsMember({"ner", "re"}))->required();
  evaluate->add_option("model", ev.model)->required();
  evaluate->add_option("corpus", ev.corpus)->required();
  evaluate->add_flag("--json", ev.json, "Machine-readable output");
  evaluate->add_option("--max-token-distance", ev.max_token_distance)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  Context ctx{config_path, seed, in, out, err};
  try {
    if (serve->parsed()) return cmd_serve(ctx);
    if (analyze->parsed()) return cmd_analyze(ctx, an);
    if (train_ner->parsed()) return cmd_train_ner(ctx, tn);
    if (train_re->parsed()) return cmd_train_re(ctx, tr);
    if (evaluate->parsed())
      return ev.task == "ner" ? evaluate_ner_task(ctx, ev) : evaluate_re_task(ctx, ev);
  } catch (const UsageError& e) {
    err << "cner: " << e.what() << "\n";
    return e.exit_code;
  } catch (const Error& e) {
    err << "cner: " << code_name(e.code()) << ": " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "cner: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cner::cli
