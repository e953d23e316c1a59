#pragma once

#include <iosfwd>
#include <string>

#include "cner/ner/evaluate.h"
#include "cner/ner/tagger.h"
#include "cner/service/analysis.h"

namespace cner::cli {

// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,        // anything not listed below
  kExitUsage = 2,          // bad arguments, config, corpus or model file
  kExitBind = 3,           // serve could not bind its address
  kExitUnknownExtractor = 4,
  kExitEmptyCorpus = 5,    // training corpus yields no examples
  kExitExtractorFailed = 6 // extractor not ready, or the remote failed
};

// Entry point behind the `cner` binary. Reads stdin only for `analyze`
// without a text or file argument.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

// Port of the running `serve` command, 0 when none is running.
int serving_port();
// Makes a running `serve` command return. Also wired to SIGINT and SIGTERM.
void stop_serving();

// One relation per line: sentence, arg1 surface and type, arg2 surface and
// type, label, score of that label.
std::string relations_tsv(const service::AnalysisResult& result);

ner::NerMetrics evaluate_ner(const ner::TaggerModel& model,
                             const std::vector<ner::TaggedSentence>& corpus);

// Fraction of tokens whose predicted tag equals gold.
double token_accuracy(const ner::TaggerModel& model,
                      const std::vector<ner::TaggedSentence>& corpus);

}  // namespace cner::cli
