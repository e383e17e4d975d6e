#pragma once

// Toy-corpus pipeline shared by the acceptance suite and the calibration
// tool: split, three seeded baseline models per task, ensemble, score.

#include <fstream>
#include <string>

#include "baseline.hpp"
#include "corpus.hpp"
#include "ensemble.hpp"
#include "metrics.hpp"
#include "soe.hpp"
#include "splits.hpp"
#include "tagging.hpp"

namespace e2e {

struct Result {
  double ate_token_accuracy = 0.0;
  double soe_accuracy = 0.0;
  std::size_t test_reviews = 0;
  std::size_t test_aspects = 0;
};

inline std::vector<absa::Review> load_toy_corpus() {
  std::ifstream in(std::string(ABSA_DATA_DIR) + "/toy_corpus.jsonl", std::ios::binary);
  if (!in) throw absa::IoError("toy corpus not found under " ABSA_DATA_DIR);
  return absa::read_corpus(in);
}

inline Result run(const std::vector<absa::Review>& corpus, std::uint64_t seed, unsigned jobs = 1) {
  using namespace absa;
  const auto parts = split(corpus, {0.7, SplitStrategy::PolarityStratified, seed});

  std::vector<TaggedSequence> train_seqs, gold_seqs;
  for (const auto& r : parts.train) train_seqs.push_back(encode_bio(r, tokenize(r.text)));
  for (const auto& r : parts.test) gold_seqs.push_back(encode_bio(r, tokenize(r.text)));

  std::vector<AteModelPrediction> ate_models;
  for (std::uint64_t m = 0; m < 3; ++m) {
    const auto tagger = train_tagger(train_seqs, {5, seed * 31 + m});
    ate_models.push_back(predict_corpus(tagger, "tagger-" + std::to_string(m), parts.test, jobs));
  }
  const auto ensembled = median_ensemble(ate_models, jobs);
  std::vector<TaggedSequence> pred_seqs;
  for (std::size_t i = 0; i < ensembled.size(); ++i) {
    pred_seqs.push_back({gold_seqs[i].tokens, ensembled[i].tags});
  }

  const SoeInputConfig input{InputFormat::Prompt, ContextMode::AspectSentence, "[SEP]"};
  const auto train_ex = build_examples(parts.train, input);
  const auto test_ex = build_examples(parts.test, input);
  std::vector<SoeModelPrediction> soe_models;
  for (std::uint64_t m = 0; m < 3; ++m) {
    const auto model = train_soe(train_ex, {true, seed * 31 + m});
    soe_models.push_back(predict_soe(model, "bow-" + std::to_string(m), test_ex));
  }
  const auto decisions = majority_vote(soe_models);
  std::vector<Polarity> gold;
  std::vector<std::optional<Polarity>> pred;
  for (std::size_t i = 0; i < test_ex.size(); ++i) {
    gold.push_back(*test_ex[i].gold);
    pred.push_back(decisions[i].label);
  }

  Result out;
  out.ate_token_accuracy = score_ate(gold_seqs, pred_seqs).accuracy;
  out.soe_accuracy = score_soe(gold, pred).accuracy;
  out.test_reviews = parts.test.size();
  out.test_aspects = test_ex.size();
  return out;
}

}  // namespace e2e
