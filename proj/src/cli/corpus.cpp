#include "cner/cli/corpus.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cner/common/error.h"
#include "cner/common/util.h"
#include "cner/ner/bio.h"
#include "cner/text/unicode.h"
#include "json.hpp"

namespace cner::cli {

namespace {

std::string read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

NerCorpus parse_ner_corpus(std::string_view content) {
  NerCorpus corpus;
  std::vector<std::string> tokens;
  ner::TagSequence tags;
  std::vector<std::size_t> lines;

  auto flush = [&] {
    if (tokens.empty()) return;
    long bad = ner::first_ill_formed(tags);
    if (bad >= 0) {
      throw Error(ErrorCode::kValidationError,
                  "tag " + tags[bad].str() + " does not continue a mention of its type",
                  lines[bad]);
    }
    corpus.push_back({text::sentence_from_tokens(tokens, corpus.size()), std::move(tags)});
    tokens.clear();
    tags.clear();
    lines.clear();
  };

  std::size_t line_no = 0;
  for (std::string_view raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#' && line.find('\t') == std::string_view::npos) continue;
    if (!text::is_valid_utf8(line)) throw Error(ErrorCode::kParseError, "invalid UTF-8", line_no);
    auto cols = split(line, '\t');
    if (cols.size() != 2) {
      throw Error(ErrorCode::kParseError,
                  "expected 2 tab-separated columns (token, tag), found " +
                      std::to_string(cols.size()),
                  line_no);
    }
    std::string_view token = cols[0];
    if (token.empty() || trim(token).size() != token.size())
      throw Error(ErrorCode::kParseError, "empty or space-padded token", line_no);
    for (char32_t c : text::decode_utf8(token)) {
      if (text::is_whitespace(c))
        throw Error(ErrorCode::kParseError, "token contains whitespace", line_no);
    }
    auto tag = ner::BioTag::parse(trim(cols[1]));
    if (!tag) throw Error(ErrorCode::kParseError, "unknown tag '" + std::string(cols[1]) + "'", line_no);
    tokens.emplace_back(token);
    tags.push_back(*tag);
    lines.push_back(line_no);
  }
  flush();
  return corpus;
}

NerCorpus load_ner_corpus(const std::string& path) { return parse_ner_corpus(read_corpus(path)); }

std::string serialize_ner_corpus(const NerCorpus& corpus) {
  std::string out;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (s) out += '\n';
    const auto& toks = corpus[s].sentence.tokens;
    for (std::size_t i = 0; i < toks.size(); ++i)
      out += toks[i].surface + "\t" + corpus[s].gold[i].str() + "\n";
  }
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what, std::size_t line) {
  throw Error(ErrorCode::kValidationError, what, line);
}

std::size_t index_field(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) invalid(std::string("missing '") + key + "'", line);
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) invalid(std::string("'") + key + "' must be a non-negative integer", line);
  return v.get<std::size_t>();
}

std::string string_field(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) invalid(std::string("missing '") + key + "'", line);
  const json& v = obj.at(key);
  if (!v.is_string()) invalid(std::string("'") + key + "' must be a string", line);
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, std::size_t line) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) invalid("unknown field '" + k + "'", line);
  }
}

RelRecord parse_record(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "record must be a JSON object", line_no);
  only_keys(j, {"text", "mentions", "relations"}, line_no);

  RelRecord rec;
  rec.line = line_no;
  rec.text = text::normalize_text(string_field(j, "text", line_no));
  std::size_t length = text::char_length(rec.text);

  if (!j.contains("mentions") || !j["mentions"].is_array()) invalid("'mentions' must be an array", line_no);
  for (const auto& m : j["mentions"]) {
    if (!m.is_object()) invalid("mention must be an object", line_no);
    only_keys(m, {"start", "end", "type"}, line_no);
    RelMention rm;
    rm.start = index_field(m, "start", line_no);
    rm.end = index_field(m, "end", line_no);
    std::string type = string_field(m, "type", line_no);
    auto t = ner::parse_entity_type(type);
    if (!t) invalid("unknown entity type '" + type + "'", line_no);
    rm.type = *t;
    if (rm.start >= rm.end || rm.end > length) {
      invalid("mention " + std::to_string(rec.mentions.size()) + " span [" +
                  std::to_string(rm.start) + "," + std::to_string(rm.end) +
                  ") is empty or outside the text of length " + std::to_string(length),
              line_no);
    }
    rec.mentions.push_back(rm);
  }
  for (std::size_t a = 0; a < rec.mentions.size(); ++a) {
    for (std::size_t b = a + 1; b < rec.mentions.size(); ++b) {
      const auto &x = rec.mentions[a], &y = rec.mentions[b];
      if (x.start < y.end && y.start < x.end)
        invalid("mentions " + std::to_string(a) + " and " + std::to_string(b) + " overlap", line_no);
    }
  }

  if (j.contains("relations")) {
    if (!j["relations"].is_array()) invalid("'relations' must be an array", line_no);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : j["relations"]) {
      if (!r.is_object()) invalid("relation must be an object", line_no);
      only_keys(r, {"arg1", "arg2", "label"}, line_no);
      RelLink link;
      link.arg1 = index_field(r, "arg1", line_no);
      link.arg2 = index_field(r, "arg2", line_no);
      std::string label = string_field(r, "label", line_no);
      auto l = relex::parse_relation_label(label);
      if (!l) invalid("unknown relation label '" + label + "'", line_no);
      link.label = *l;
      std::string which = "relation " + std::to_string(rec.relations.size());
      if (link.arg1 >= rec.mentions.size() || link.arg2 >= rec.mentions.size())
        invalid(which + " refers to a mention index out of range", line_no);
      if (rec.mentions[link.arg1].start >= rec.mentions[link.arg2].start)
        invalid(which + ": arg1 must precede arg2", line_no);
      if (!seen.insert({link.arg1, link.arg2}).second)
        invalid(which + " repeats an earlier pair", line_no);
      rec.relations.push_back(link);
    }
  }
  return rec;
}

}  // namespace

RelCorpus parse_re_corpus(std::string_view content) {
  RelCorpus corpus;
  std::size_t line_no = 0;
  for (std::string_view raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (trim(line).empty()) continue;
    if (!text::is_valid_utf8(line)) throw Error(ErrorCode::kParseError, "invalid UTF-8", line_no);
    corpus.push_back(parse_record(line, line_no));
  }
  return corpus;
}

RelCorpus load_re_corpus(const std::string& path) { return parse_re_corpus(read_corpus(path)); }

std::string serialize_re_corpus(const RelCorpus& corpus) {
  std::string out;
  for (const auto& rec : corpus) {
    nlohmann::ordered_json j;
    j["text"] = rec.text;
    j["mentions"] = nlohmann::ordered_json::array();
    for (const auto& m : rec.mentions)
      j["mentions"].push_back({{"start", m.start}, {"end", m.end}, {"type", ner::to_string(m.type)}});
    j["relations"] = nlohmann::ordered_json::array();
    for (const auto& r : rec.relations)
      j["relations"].push_back(
          {{"arg1", r.arg1}, {"arg2", r.arg2}, {"label", relex::to_string(r.label)}});
    out += j.dump() + "\n";
  }
  return out;
}

RelInstances build_re_instances(const RelCorpus& corpus, const text::Segmenter& segmenter,
                                std::size_t max_token_distance) {
  RelInstances out;
  for (const auto& rec : corpus) {
    text::Document doc = segmenter.segment(rec.text, {}, {});
    // Per sentence: the aligned mentions and their record indices.
    std::vector<std::vector<ner::EntityMention>> per_sentence(doc.sentences.size());
    std::vector<std::vector<std::size_t>> record_index(doc.sentences.size());
    std::vector<std::size_t> sentence_of(rec.mentions.size());

    for (std::size_t mi = 0; mi < rec.mentions.size(); ++mi) {
      const RelMention& m = rec.mentions[mi];
      auto fail = [&](std::size_t offset, const std::string& why) {
        invalid("record: mention " + std::to_string(mi) +
                    " offset " + std::to_string(offset) + " " + why,
                rec.line);
      };
      bool placed = false;
      for (const auto& s : doc.sentences) {
        if (m.start < s.span.start || m.start >= s.span.end) continue;
        if (m.end > s.span.end) fail(m.end, "extends past its sentence");
        std::optional<std::size_t> first, last;
        for (const auto& t : s.tokens) {
          if (t.span.start == m.start) first = t.index;
          if (t.span.end == m.end) last = t.index;
        }
        if (!first) fail(m.start, "is not a token start");
        if (!last) fail(m.end, "is not a token end");
        per_sentence[s.index].push_back(ner::make_mention(s, *first, *last, m.type, "gold", 1.0));
        record_index[s.index].push_back(mi);
        sentence_of[mi] = s.index;
        placed = true;
        break;
      }
      if (!placed) fail(m.start, "lies outside every sentence");
    }

    std::map<std::pair<std::size_t, std::size_t>, relex::RelationLabel> gold;
    for (std::size_t ri = 0; ri < rec.relations.size(); ++ri) {
      const RelLink& r = rec.relations[ri];
      if (sentence_of[r.arg1] != sentence_of[r.arg2]) {
        invalid("record: relation " +
                    std::to_string(ri) + " crosses a sentence boundary",
                rec.line);
      }
      gold[{r.arg1, r.arg2}] = r.label;
    }

    std::size_t matched = 0;
    for (const auto& s : doc.sentences) {
      const auto& mentions = per_sentence[s.index];
      for (const auto& pair : relex::generate_pairs(s, mentions, max_token_distance)) {
        std::pair key{record_index[s.index][pair.arg1_index], record_index[s.index][pair.arg2_index]};
        auto it = gold.find(key);
        relex::RelationLabel label = relex::RelationLabel::kNonRel;
        if (it != gold.end()) {
          label = it->second;
          ++matched;
        }
        out.instances.push_back({relex::extract_features(pair, s, mentions), label});
      }
    }
    out.unreachable += gold.size() - matched;
  }
  return out;
}

}  // namespace cner::cli
