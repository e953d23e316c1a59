#include "cner/ner/gazetteer.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"
#include "cner/text/unicode.h"

namespace cner::ner {

namespace {

constexpr char kSep = '\x1f';

std::string join_key(const std::vector<std::string>& tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key += kSep;
    key += tokens[i];
  }
  return key;
}

std::string join_key(const std::vector<text::Token>& tokens, std::size_t first,
                     std::size_t len, bool fold_first) {
  std::string key;
  for (std::size_t i = first; i < first + len; ++i) {
    if (i > first) key += kSep;
    key += (fold_first && i == first) ? text::lowercase(tokens[i].surface)
                                      : tokens[i].surface;
  }
  return key;
}

// Sentence-initial words that do not start a name on their own.
const std::set<std::string>& function_words() {
  static const std::set<std::string> words = {
      "el", "la", "los", "las", "lo", "un", "una", "unos", "unas", "en",
      "de", "del", "al", "a", "y", "o", "e", "u", "por", "para", "con",
      "sin", "sobre", "entre", "desde", "hasta", "que", "se", "su", "sus",
      "este", "esta", "estos", "estas", "ese", "esa", "mi", "tu", "no",
      "si", "pero", "cuando", "como", "según", "ayer", "hoy"};
  return words;
}

bool capitalized(const std::string& surface) {
  std::u32string chars = text::decode_utf8(surface);
  return !chars.empty() && text::is_upper(chars[0]);
}

}  // namespace

Gazetteer::Gazetteer(std::string name, const std::vector<Entry>& entries)
    : name_(std::move(name)) {
  for (const auto& [tokens, type] : entries) {
    if (tokens.empty())
      throw Error(ErrorCode::kValidationError, "empty gazetteer entry");
    std::string key = join_key(tokens);
    if (!exact_.emplace(key, type).second)
      throw Error(ErrorCode::kValidationError,
                  "duplicate gazetteer entry: " + join_key(tokens));
    std::vector<std::string> folded = tokens;
    folded[0] = text::lowercase(folded[0]);
    folded_first_.emplace(join_key(folded), type);
    max_length_ = std::max(max_length_, tokens.size());
  }
}

Gazetteer Gazetteer::parse(std::string_view content, std::string name) {
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (std::string_view raw : split(content, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;
    std::size_t tab = raw.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::kParseError, "expected TYPE<TAB>tokens", line_no);
    auto type = parse_entity_type(trim(raw.substr(0, tab)));
    if (!type)
      throw Error(ErrorCode::kParseError,
                  "unknown entity type '" + std::string(raw.substr(0, tab)) + "'",
                  line_no);
    if (!text::is_valid_utf8(raw))
      throw Error(ErrorCode::kParseError, "invalid UTF-8", line_no);
    std::vector<std::string> tokens;
    std::istringstream ss{std::string(raw.substr(tab + 1))};
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty())
      throw Error(ErrorCode::kValidationError, "empty token sequence", line_no);
    if (!seen.insert(join_key(tokens)).second)
      throw Error(ErrorCode::kValidationError, "duplicate entry", line_no);
    entries.emplace_back(std::move(tokens), *type);
  }
  return Gazetteer(std::move(name), entries);
}

Gazetteer Gazetteer::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open gazetteer " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const EntityType* Gazetteer::find(const std::vector<text::Token>& tokens,
                                  std::size_t first, std::size_t len) const {
  if (len == 0 || first + len > tokens.size()) return nullptr;
  auto it = exact_.find(join_key(tokens, first, len, false));
  if (it != exact_.end()) return &it->second;
  if (first == 0) {
    auto ft = folded_first_.find(join_key(tokens, first, len, true));
    if (ft != folded_first_.end()) return &ft->second;
  }
  return nullptr;
}

std::vector<EntityMention> gazetteer_extract(const text::Sentence& sentence,
                                             const Gazetteer& gazetteer,
                                             const GazetteerOptions& options,
                                             const std::string& extractor_id) {
  const auto& tokens = sentence.tokens;
  const std::size_t n = tokens.size();
  std::vector<EntityMention> out;
  std::vector<bool> covered(n, false);

  std::size_t i = 0;
  while (i < n) {
    std::size_t longest = std::min(gazetteer.max_length(), n - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      if (const EntityType* type = gazetteer.find(tokens, i, len)) {
        out.push_back(make_mention(sentence, i, i + len - 1, *type, extractor_id, 1.0));
        for (std::size_t k = i; k < i + len; ++k) covered[k] = true;
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }

  if (options.heuristic_caps) {
    auto eligible = [&](std::size_t k) {
      if (covered[k] || !capitalized(tokens[k].surface)) return false;
      return !(k == 0 && function_words().count(text::lowercase(tokens[k].surface)));
    };
    for (std::size_t k = 0; k < n;) {
      if (!eligible(k)) {
        ++k;
        continue;
      }
      std::size_t first = k;
      while (k < n && eligible(k)) ++k;
      out.push_back(make_mention(sentence, first, k - 1, EntityType::kPER,
                                 extractor_id, 0.5));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.first_token < b.first_token;
    });
  }
  return out;
}

}  // namespace cner::ner
