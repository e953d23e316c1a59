// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Every tolerance and runtime limit is fixed here, not taken from flags.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../support/corpus_gen.h"
#include "../support/ner_gen.h"
#include "../support/rel_corpus_gen.h"
#include "../support/relex_gen.h"
#include "../support/service_fixture.h"
#include "../support/stub_adapter.h"
#include "../support/text_gen.h"
#include "cner/cli/commands.h"
#include "cner/cli/corpus.h"
#include "cner/ner/bio.h"
#include "cner/ner/extractor.h"
#include "cner/relex/classifier.h"
#include "cner/service/http.h"
#include "cner/service/ingest.h"
#include "cner/text/segmenter.h"
#include "cner/text/unicode.h"
#include "httplib.h"

using namespace cner;
using namespace std::chrono_literals;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("unexpected exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass && secs < limit_s;
  if (!pass) ++failures;
  std::printf("AC%-2d %s  %s: %s; %.3f s (limit %g s)\n", id, pass ? "PASS" : "FAIL", name,
              o.detail.c_str(), secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome segmentation_fidelity() {
  std::mt19937_64 rng(1);
  text::Segmenter seg;
  std::size_t violations = 0, tokens = 0;
  const int kTexts = 1000;
  for (int i = 0; i < kTexts; ++i) {
    std::string raw = testing::random_spanish_text(rng, 60);
    text::Document doc = seg.segment(raw, "t", "gen");
    std::u32string chars = text::decode_utf8(doc.text);
    std::vector<int> cover(chars.size(), 0);
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        ++tokens;
        if (t.span.end > chars.size() || t.span.start >= t.span.end || !s.span.contains(t.span)) {
          ++violations;
          continue;
        }
        if (text::slice_chars(doc.text, t.span.start, t.span.end) != t.surface) ++violations;
        for (std::size_t k = t.span.start; k < t.span.end; ++k) ++cover[k];
      }
    }
    // Every non-whitespace character in exactly one token, no whitespace in any.
    for (std::size_t k = 0; k < chars.size(); ++k) {
      int expected = text::is_whitespace(chars[k]) ? 0 : 1;
      if (cover[k] != expected) ++violations;
    }
  }
  return {violations == 0,
          fmt("%d texts, %zu tokens, %zu violations (tolerance 0)", kTexts, tokens, violations)};
}

// --- 2 ---------------------------------------------------------------------

Outcome bio_roundtrip() {
  std::mt19937_64 rng(2);
  std::size_t violations = 0;
  const int kCases = 10000;
  for (int i = 0; i < kCases; ++i) {
    text::Sentence s = testing::random_sentence(rng, 30);
    auto mentions = testing::random_mentions(rng, s);
    auto decoded = ner::decode_bio(ner::encode_bio(s, mentions), s, "gen", 1.0);
    bool same = decoded.size() == mentions.size();
    for (std::size_t k = 0; same && k < decoded.size(); ++k)
      same = ner::same_mention(decoded[k], mentions[k]);
    violations += !same;
  }
  return {violations == 0, fmt("%d cases, %zu violations (tolerance 0)", kCases, violations)};
}

// --- 3 ---------------------------------------------------------------------

Outcome fuzz_totality() {
  std::mt19937_64 rng(3);
  const std::string ner_seed = "Juan\tB-PER\nvive\tO\n\n# c\nLa\tB-ORG\nUniversidad\tI-ORG\n";
  const std::string re_seed = cli::serialize_re_corpus({testing::random_rel_record(rng)}) +
                              cli::serialize_re_corpus(testing::cue_word_corpus(1));
  const std::string alphabet = "\t\n\r #{}[]\":,0123456789-BIOPERGPEabc\xc3\xa9\xff";
  text::Segmenter seg;
  std::size_t inputs = 0, rejected = 0, crashes = 0;
  std::string first_crash;

  auto guard = [&](const std::function<void()>& fn) {
    ++inputs;
    try {
      fn();
    } catch (const Error&) {
      ++rejected;
    } catch (const std::exception& e) {
      if (!crashes++) first_crash = e.what();
    }
  };
  auto mutate = [&](std::string s) {
    for (std::size_t k = 1 + rng() % 4; k > 0 && !s.empty(); --k) {
      std::size_t at = rng() % s.size();
      switch (rng() % 3) {
        case 0: s[at] = alphabet[rng() % alphabet.size()]; break;
        case 1: s.erase(at, 1 + rng() % 8); break;
        default: s.insert(at, 1, char(rng() % 256));
      }
    }
    return s;
  };
  auto noise = [&](std::size_t max) {
    std::string s;
    for (std::size_t n = rng() % max; n > 0; --n)
      s += rng() % 2 ? char(rng() % 256) : alphabet[rng() % alphabet.size()];
    return s;
  };

  const int kPerTarget = 100000;
  for (int i = 0; i < kPerTarget; ++i) {
    std::string ner_in = i % 2 ? mutate(ner_seed) : noise(96);
    guard([&] { cli::parse_ner_corpus(ner_in); });

    std::string re_in = i % 2 ? mutate(re_seed) : noise(96);
    guard([&] { cli::build_re_instances(cli::parse_re_corpus(re_in), seg); });

    text::Sentence s = testing::random_sentence(rng, 12);
    std::size_t n = rng() % 4 == 0 ? rng() % 14 : s.tokens.size();
    auto tags = testing::random_tags(rng, n);
    guard([&] {
      auto ms = ner::decode_bio(tags, s, "fuzz", 1.0);
      for (const auto& m : ms)
        if (!ner::mention_valid_for(m, s)) throw std::logic_error("decoded an invalid mention");
    });
  }
  std::string detail = fmt("%zu inputs over 3 targets, %zu rejected with a typed error, %zu crashes "
                           "(tolerance 0)",
                           inputs, rejected, crashes);
  if (crashes) detail += "; first: " + first_crash;
  return {crashes == 0, detail};
}

// --- 4 ---------------------------------------------------------------------

Outcome ner_fit() {
  auto corpus = testing::synthetic_ner_corpus(50, 42);
  auto a = ner::train_tagger(corpus, 10, 42);
  auto b = ner::train_tagger(corpus, 10, 42);
  double f1 = cli::evaluate_ner(a, corpus).micro.f1();
  bool identical = a.serialize() == b.serialize();
  return {f1 >= 0.95 && identical,
          fmt("50 sentences, seed 42, 10 epochs: entity F1 %.4f (need >= 0.95), "
              "repeat run byte-identical: %s",
              f1, identical ? "yes" : "no")};
}

// --- 5 ---------------------------------------------------------------------

Outcome relex_separability() {
  auto corpus = testing::separable_relex_corpus(20, 5);
  std::vector<double> trace;
  relex::TrainOptions opt;
  opt.lambda = 0.01;
  opt.epochs = 100;
  opt.seed = 42;
  opt.objective_trace = &trace;
  auto model = relex::train_relex(corpus, opt);
  std::size_t correct = 0;
  for (const auto& inst : corpus) correct += relex::classify_pair(model, inst.features).label == inst.label;
  double acc = double(correct) / double(corpus.size());
  bool decreasing = !trace.empty() && trace.back() <= trace.front();
  return {acc == 1.0 && decreasing,
          fmt("%zu instances (20 per class), lambda 0.01, 100 epochs: accuracy %.4f (need 1.0), "
              "objective first %.6f final %.6f (need final <= first)",
              corpus.size(), acc, trace.empty() ? NAN : trace.front(),
              trace.empty() ? NAN : trace.back())};
}

// --- 6 ---------------------------------------------------------------------

Outcome subgradient_check() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = 1e-5;
  double worst = 0;
  int points = 0;
  while (points < 10) {
    std::size_t dim = 2 + rng() % 8;
    std::vector<double> w(dim);
    for (double& v : w) v = normal(rng);
    double b = normal(rng);
    std::vector<std::size_t> x;
    for (std::size_t j = 0; j < dim; ++j)
      if (rng() % 2) x.push_back(j);
    int y = rng() % 2 ? 1 : -1;
    const double lambda = 0.1;
    double margin = b;
    for (std::size_t j : x) margin += w[j];
    // Stay clear of the hinge kink so that both probes see the same piece.
    if (std::abs(1 - y * margin) <= 10 * h) continue;
    ++points;

    std::vector<double> gw;
    double gb = 0;
    relex::hinge_subgradient(w, b, x, y, lambda, gw, gb);
    auto rel = [](double a, double n) {
      double scale = std::max(std::abs(a), std::abs(n));
      return scale == 0 ? 0.0 : std::abs(a - n) / scale;
    };
    for (std::size_t j = 0; j < dim; ++j) {
      auto wp = w, wm = w;
      wp[j] += h;
      wm[j] -= h;
      double num = (relex::hinge_objective(wp, b, x, y, lambda) -
                    relex::hinge_objective(wm, b, x, y, lambda)) / (2 * h);
      worst = std::max(worst, rel(gw[j], num));
    }
    double numb = (relex::hinge_objective(w, b + h, x, y, lambda) -
                   relex::hinge_objective(w, b - h, x, y, lambda)) / (2 * h);
    worst = std::max(worst, rel(gb, numb));
  }
  return {worst < 1e-4,
          fmt("%d non-kink points, step 1e-5, max relative error %.3g (need < 1e-4)", points, worst)};
}

// --- 7 ---------------------------------------------------------------------

Outcome metrics_oracle() {
  using L = relex::RelationLabel;
  // TP: PHYS->PHYS. FP: GPE-AFF gold predicted PHYS. FN: PHYS gold predicted NON-REL.
  std::vector<L> gold = {L::kPhys, L::kGpeAff, L::kPhys, L::kNonRel};
  std::vector<L> pred = {L::kPhys, L::kPhys, L::kNonRel, L::kNonRel};
  auto m = relex::score_predictions(gold, pred);
  const auto& phys = m.per_label[relex::index_of(L::kPhys)];
  bool exact = phys.tp == 1 && phys.fp == 1 && phys.fn == 1 && phys.precision() == 0.5 &&
               phys.recall() == 0.5 && phys.f1() == 0.5;

  // Confusion rows against a brute-force recount, on the fixture and on random labelings.
  std::size_t row_mismatches = 0;
  auto check_rows = [&](const std::vector<L>& g, const std::vector<L>& p) {
    auto r = relex::score_predictions(g, p);
    for (std::size_t k = 0; k < relex::kNumLabels; ++k) {
      std::size_t row = 0, recount = 0;
      for (std::size_t c = 0; c < relex::kNumLabels; ++c) row += r.confusion[k][c];
      for (L x : g) recount += relex::index_of(x) == k;
      row_mismatches += row != recount;
    }
  };
  check_rows(gold, pred);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rng() % 40;
    std::vector<L> g, p;
    for (std::size_t k = 0; k < n; ++k) {
      g.push_back(relex::kAllLabels[rng() % relex::kNumLabels]);
      p.push_back(relex::kAllLabels[rng() % relex::kNumLabels]);
    }
    check_rows(g, p);
  }
  return {exact && row_mismatches == 0,
          fmt("PHYS tp=%zu fp=%zu fn=%zu P=%.3f R=%.3f F1=%.3f (need exactly 0.500), "
              "confusion row mismatches %zu over 201 labelings (tolerance 0)",
              phys.tp, phys.fp, phys.fn, phys.precision(), phys.recall(), phys.f1(),
              row_mismatches)};
}

// --- shared HTTP fixture for 8 and 9 -----------------------------------------

struct LiveService {
  service::Service svc;
  service::HttpServer server;
  int port;
  explicit LiveService(const service::ServiceConfig& c)
      : svc(service::Pipeline::from_config(c)), server(svc, c.max_upload_bytes) {
    port = server.bind("127.0.0.1", 0);
    if (port <= 0) throw std::runtime_error("cannot bind an ephemeral port");
    server.start();
  }
  ~LiveService() { server.stop(); }
};

std::string golden() {
  return testing::trim_newline(testing::read_file(testing::data_path("golden_analyze.json")));
}

// --- 8 ---------------------------------------------------------------------

Outcome end_to_end_golden() {
  LiveService live(testing::fixture_config());
  httplib::Client client("127.0.0.1", live.port);
  auto res = client.Post("/analyze", R"({"text":"Juan vive en Cali."})", "application/json");
  bool http_ok = res && res->status == 200 && testing::zero_timing(res->body) == golden();

  std::string conf = testing::data_path("fixture.conf");
  const char* argv[] = {"cner", "--config", conf.c_str(), "analyze", "Juan vive en Cali."};
  std::istringstream in;
  std::ostringstream out, err;
  int code = cli::run_cli(5, argv, in, out, err);
  bool cli_ok = code == 0 && testing::zero_timing(testing::trim_newline(out.str())) == golden();
  return {http_ok && cli_ok,
          fmt("POST /analyze %s golden (status %d); CLI json %s golden (exit %d); timing excluded",
              http_ok ? "matches" : "differs from", res ? res->status : -1,
              cli_ok ? "matches" : "differs from", code)};
}

// --- 9 ---------------------------------------------------------------------

Outcome ingestion() {
  std::string odt = testing::read_file(testing::data_path("two_paragraphs.odt"));
  auto extracted = service::ingest_file("fixture.odt", odt, {});
  bool odt_ok = extracted.text == "Hola.\nAdiós.";

  service::ServiceConfig c = testing::fixture_config();
  LiveService live(c);
  httplib::Client client("127.0.0.1", live.port);
  httplib::MultipartFormDataItems doc = {{"file", "\xD0\xCF\x11\xE0", "informe.doc", ""}};
  auto r415 = client.Post("/analyze", doc);
  bool doc_ok = r415 && r415->status == 415 &&
                service::Json::parse(r415->body)["error"]["code"] == "UnsupportedFormat";

  httplib::MultipartFormDataItems big = {
      {"file", std::string(c.max_upload_bytes + 1, 'a'), "grande.txt", "text/plain"}};
  auto r413 = client.Post("/analyze", big);
  bool big_ok = r413 && r413->status == 413 &&
                service::Json::parse(r413->body)["error"]["code"] == "PayloadTooLarge";
  return {odt_ok && doc_ok && big_ok,
          fmt(".odt paragraphs %s; .doc without converter -> %d %s; upload of limit+1 bytes -> %d",
              odt_ok ? "exact" : "wrong", r415 ? r415->status : -1,
              doc_ok ? "UnsupportedFormat" : "(wrong code)", r413 ? r413->status : -1)};
}

// --- 10 --------------------------------------------------------------------

Outcome adapter_conformance() {
  text::Sentence s = text::Segmenter().segment("Juan vive en Cali.", "", "").sentences[0];
  testing::StubAdapter stub(
      R"({"mentions":[{"type":"PER","first":0,"last":0,"confidence":0.75},)"
      R"({"type":"GPE","first":3,"last":3},{"type":"ANIMAL","first":1,"last":1}]})");
  auto r = ner::remote_extract(ner::RemoteEndpoint::parse(stub.url()), s, 1000ms);
  bool request_ok = stub.last_request() == ner::remote_request_body(s);
  bool roundtrip = r.mentions.size() == 2 && r.mentions[0].type == ner::EntityType::kPER &&
                   r.mentions[0].span == text::Span{0, 4} && r.mentions[0].confidence == 0.75 &&
                   r.mentions[1].type == ner::EntityType::kGPE &&
                   r.mentions[1].span == text::Span{13, 17} && r.mentions[1].confidence == 1.0;
  bool dropped = r.dropped == 1 && r.warnings.size() == 1;

  testing::StubAdapter slow(R"({"mentions":[]})", 200, 800ms);
  service::ServiceConfig c = testing::fixture_config();
  c.remote_endpoint = slow.url();
  c.remote_timeout_ms = 150;
  service::Service svc(service::Pipeline::from_config(c));
  auto reply = svc.analyze_json(R"({"text":"Juan vive en Cali.","extractor_id":"remote-adapter"})");
  bool timeout_ok = reply.status == 502 &&
                    service::Json::parse(reply.body)["error"]["code"] == "RemoteUnavailable";
  return {request_ok && roundtrip && dropped && timeout_ok,
          fmt("request body %s; mentions round-trip %s; invalid type dropped=%zu warnings=%zu; "
              "150 ms timeout against 800 ms stub -> %d",
              request_ok ? "ok" : "wrong", roundtrip ? "ok" : "wrong", r.dropped,
              r.warnings.size(), reply.status)};
}

}  // namespace

int main() {
  criterion(1, "segmentation fidelity", 5, segmentation_fidelity);
  criterion(2, "BIO roundtrip", 5, bio_roundtrip);
  criterion(3, "parser and decoder totality", 60, fuzz_totality);
  criterion(4, "learned NER fit", 10, ner_fit);
  criterion(5, "relation classifier separability", 10, relex_separability);
  criterion(6, "hinge subgradient check", 1, subgradient_check);
  criterion(7, "metrics oracle", 1, metrics_oracle);
  criterion(8, "end-to-end golden", 1, end_to_end_golden);
  criterion(9, "ingestion", 1, ingestion);
  criterion(10, "adapter conformance", 2, adapter_conformance);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
