#pragma once

// Desk-scale stand-ins for the transformer models: an averaged-perceptron
// BIO tagger and a multinomial naive Bayes polarity classifier. Both emit the
// same interchange records as external models.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interchange.hpp"
#include "soe.hpp"
#include "tagging.hpp"

namespace absa {

class PerceptronTagger {
 public:
  using Weights = std::array<double, kNumTags>;

  PerceptronTagger() = default;
  explicit PerceptronTagger(std::map<std::string, Weights> weights)
      : weights_(std::move(weights)) {}

  // Softmax of the per-token scores under greedy left-to-right decoding,
  // where the previous-tag feature uses the previous argmax.
  std::vector<ProbVector> predict(const std::vector<Token>& tokens) const;
  std::vector<BioTag> tag(const std::vector<Token>& tokens) const;

  const std::map<std::string, Weights>& weights() const { return weights_; }

  // Features for position i given the previously predicted tag.
  static std::vector<std::string> features(const std::vector<Token>& tokens, std::size_t i,
                                           BioTag prev);

 private:
  Weights scores(const std::vector<std::string>& feats) const;

  std::map<std::string, Weights> weights_;
};

struct TaggerOptions {
  std::size_t epochs = 5;
  std::uint64_t seed = 0;
};

// Averaged perceptron; each epoch visits the sequences in a seeded order.
// Throws ArgumentError on epochs == 0 or an empty training set.
PerceptronTagger train_tagger(const std::vector<TaggedSequence>& train,
                              const TaggerOptions& options);

json tagger_to_json(const PerceptronTagger& model);
PerceptronTagger tagger_from_json(const json& value);

// Predicts every review of a corpus as one ATE interchange model.
AteModelPrediction predict_corpus(const PerceptronTagger& model, const std::string& model_id,
                                  const std::vector<Review>& corpus, unsigned jobs = 1);

class BowPolarityModel {
 public:
  using Counts = std::array<double, 3>;  // indexed by Polarity

  BowPolarityModel(Counts class_counts, std::map<std::string, Counts> word_counts);

  // Classes never seen in training are never predicted. Words outside the
  // training vocabulary are ignored, so unseen input falls back to the prior.
  Polarity predict(std::string_view input_text) const;
  // log P(class) + sum log P(word | class), -inf for unseen classes.
  Counts log_scores(std::string_view input_text) const;

  const Counts& class_counts() const { return class_counts_; }
  const std::map<std::string, Counts>& word_counts() const { return word_counts_; }
  std::array<double, 3> priors() const;

  // Lowercased word tokens of the input.
  static std::vector<std::string> features(std::string_view input_text);

 private:
  Counts class_counts_;
  std::map<std::string, Counts> word_counts_;
  Counts class_totals_{};  // word tokens per class
};

struct BowOptions {
  // Train on a bootstrap resample drawn with `seed`; used to build distinct
  // ensemble members from one training set.
  bool bootstrap = false;
  std::uint64_t seed = 0;
};

// Examples without gold labels are ignored; throws ArgumentError if none
// remain.
BowPolarityModel train_soe(const std::vector<SoeExample>& train, const BowOptions& options = {});

SoeModelPrediction predict_soe(const BowPolarityModel& model, const std::string& model_id,
                               const std::vector<SoeExample>& examples);

json bow_to_json(const BowPolarityModel& model);
BowPolarityModel bow_from_json(const json& value);

}  // namespace absa
