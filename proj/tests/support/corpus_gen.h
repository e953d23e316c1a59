#pragma once

// Synthetic NER corpus built by filling sentence templates from small
// per-type name lists.

#include <random>
#include <string>
#include <vector>

#include "cner/ner/tagger.h"

namespace cner::testing {

struct NamedSlot {
  std::vector<std::string> tokens;
  ner::EntityType type;
};

inline std::vector<NamedSlot> names_of(ner::EntityType type) {
  using ner::EntityType;
  auto make = [&](std::vector<std::vector<std::string>> lists) {
    std::vector<NamedSlot> out;
    for (auto& l : lists) out.push_back({std::move(l), type});
    return out;
  };
  switch (type) {
    case EntityType::kPER:
      return make({{"Juan", "Pérez"}, {"María"}, {"Ana", "Gómez"}, {"Carlos"},
                   {"Luisa", "Fernanda", "Ruiz"}, {"José"}});
    case EntityType::kORG:
      return make({{"Universidad", "del", "Valle"}, {"Ecopetrol"},
                   {"Cruz", "Roja"}, {"Naciones", "Unidas"}});
    case EntityType::kGPE:
      return make({{"Cali"}, {"Colombia"}, {"Bogotá"}, {"Medellín"}, {"Perú"}});
    case EntityType::kLOC:
      return make({{"Cordillera", "Central"}, {"Amazonas"}, {"Pacífico"}});
    case EntityType::kFAC:
      return make({{"Estadio", "Pascual", "Guerrero"}, {"Aeropuerto", "Bonilla"}});
    case EntityType::kVEH:
      return make({{"Airbus", "A320"}, {"Renault", "4"}});
    case EntityType::kWEA:
      return make({{"AK-47"}, {"Beretta"}});
  }
  return {};
}

// Template pieces: plain words, or a slot of the given type.
struct Piece {
  std::string word;
  bool slot = false;
  ner::EntityType type = ner::EntityType::kPER;
};

inline std::vector<std::vector<Piece>> ner_templates() {
  using ner::EntityType;
  auto W = [](std::string w) { return Piece{std::move(w)}; };
  auto S = [](EntityType t) { return Piece{"", true, t}; };
  return {
      {S(EntityType::kPER), W("vive"), W("en"), S(EntityType::kGPE), W(".")},
      {S(EntityType::kPER), W("trabaja"), W("para"), S(EntityType::kORG), W(".")},
      {W("la"), S(EntityType::kORG), W("abrió"), W("una"), W("sede"), W("en"),
       S(EntityType::kGPE), W(".")},
      {S(EntityType::kPER), W("llegó"), W("al"), S(EntityType::kFAC), W("en"),
       W("un"), S(EntityType::kVEH), W(".")},
      {W("la"), W("policía"), W("halló"), W("un"), S(EntityType::kWEA), W("cerca"),
       W("del"), S(EntityType::kLOC), W(".")},
      {S(EntityType::kPER), W("viajó"), W("desde"), S(EntityType::kGPE), W("hasta"),
       W("el"), S(EntityType::kLOC), W(".")},
  };
}

inline std::vector<ner::TaggedSentence> synthetic_ner_corpus(std::size_t n,
                                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto templates = ner_templates();
  std::vector<ner::TaggedSentence> corpus;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& tpl = templates[rng() % templates.size()];
    std::vector<std::string> tokens;
    ner::TagSequence tags;
    for (const auto& piece : tpl) {
      if (!piece.slot) {
        tokens.push_back(piece.word);
        tags.push_back(ner::BioTag::outside());
        continue;
      }
      auto names = names_of(piece.type);
      const auto& name = names[rng() % names.size()];
      for (std::size_t i = 0; i < name.tokens.size(); ++i) {
        tokens.push_back(name.tokens[i]);
        tags.push_back(i == 0 ? ner::BioTag::begin(piece.type)
                              : ner::BioTag::inside(piece.type));
      }
    }
    corpus.push_back({text::sentence_from_tokens(tokens, k), std::move(tags)});
  }
  return corpus;
}

}  // namespace cner::testing
