#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cner/relex/classifier.h"

namespace cner::testing {

// Linearly separable 6-class corpus: each instance carries its class marker
// `cls=<label>` plus noise features shared across classes.
inline std::vector<relex::RelexInstance> separable_relex_corpus(std::size_t per_class,
                                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<relex::RelexInstance> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (auto label : relex::kAllLabels) {
      relex::SparseFeatures f = {"cls=" + std::string(relex::to_string(label)),
                                 "noise=" + std::to_string(rng() % 4),
                                 "db=" + std::to_string(rng() % 3)};
      std::sort(f.begin(), f.end());
      out.push_back({std::move(f), label});
    }
  }
  return out;
}

inline relex::SparseFeatures random_features(std::mt19937_64& rng, std::size_t pool,
                                             std::size_t max_active) {
  relex::SparseFeatures f;
  std::size_t n = rng() % (max_active + 1);
  for (std::size_t i = 0; i < n; ++i) f.push_back("f" + std::to_string(rng() % pool));
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Model over features f0..f{pool-1} with small integer weights, so exact
// score ties occur often.
inline relex::RelexModel random_relex_model(std::mt19937_64& rng, std::size_t pool) {
  std::vector<std::string> vocab;
  std::vector<relex::LabelScores> rows;
  for (std::size_t j = 0; j < pool; ++j) {
    vocab.push_back("f" + std::to_string(j));
    relex::LabelScores row{};
    for (double& w : row) w = static_cast<double>(static_cast<int>(rng() % 5) - 2);
    rows.push_back(row);
  }
  relex::LabelScores bias{};
  for (double& b : bias) b = static_cast<double>(static_cast<int>(rng() % 3) - 1);
  return relex::RelexModel(std::move(vocab), std::move(rows), bias, {});
}

}  // namespace cner::testing
