#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cner {

// 64-bit FNV-1a. Used for corpus fingerprints and document ids, so the value
// must stay stable across platforms.
class Fingerprint {
 public:
  void update(std::string_view bytes);
  // Separates fields so that ("ab","c") and ("a","bc") hash differently.
  void field(std::string_view bytes);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 14695981039346656037ULL;
};

// Fisher-Yates over [0, n) driven directly by mt19937_64 output. The standard
// distributions are implementation-defined, which would break bit-exact
// training reproducibility across standard libraries.
void shuffle_indices(std::vector<std::size_t>& indices, std::mt19937_64& rng);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

// Timestamp as ISO-8601 UTC, e.g. "1970-01-01T00:00:00Z".
std::string format_utc(std::int64_t epoch_seconds);

// Creation timestamp for model metadata. Honors SOURCE_DATE_EPOCH so that
// repeated trainings produce byte-identical files; 0 when unset.
std::int64_t reproducible_epoch_seconds();

}  // namespace cner
