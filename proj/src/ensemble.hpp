#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interchange.hpp"
#include "tagging.hpp"

namespace absa {

// Median of `values`; the mean of the two middle values for even counts.
// Throws ArgumentError on an empty input.
double median(std::vector<double> values);

// Index of the largest entry; ties go to the earlier label (O > B > I).
BioTag argmax_tag(const ProbVector& p);

struct EnsembledReview {
  std::string review_key;
  std::vector<TokenRange> tokens;
  std::vector<ProbVector> medians;  // not renormalized
  std::vector<BioTag> tags;         // repaired argmax of the medians
};

// Per-token, per-label medians of one review's probability rows across
// models. All rows must have the same length.
std::vector<ProbVector> median_rows(std::span<const std::vector<ProbVector>* const> rows);

// Combines ATE predictions of >= 1 models that cover the same reviews with
// the same token ranges. Output follows the first model's review order.
// Throws ValidationError naming the review and models on any mismatch.
std::vector<EnsembledReview> median_ensemble(const std::vector<AteModelPrediction>& models,
                                             unsigned jobs = 1);

// Tie-break order: earlier wins.
using PolarityOrder = std::array<Polarity, 3>;
inline constexpr PolarityOrder kDefaultTieBreak = {Polarity::Positive, Polarity::Negative,
                                                   Polarity::Neutral};

// Modal label among non-abstaining votes; nullopt if everyone abstains.
std::optional<Polarity> plurality(std::span<const std::optional<Polarity>> votes,
                                  const PolarityOrder& order = kDefaultTieBreak);

struct SoeDecision {
  SoeKey key;
  std::optional<Polarity> label;  // nullopt = every voter abstained
  std::size_t voters = 0;         // models that predicted this key
};

// Majority vote per key over >= 1 models. Keys appear in order of first
// occurrence (model order, then record order). Models lacking a key do not
// vote on it. Throws ValidationError when a model predicts a key twice.
std::vector<SoeDecision> majority_vote(const std::vector<SoeModelPrediction>& models,
                                       const PolarityOrder& order = kDefaultTieBreak,
                                       const WarningSink& warn = {});

}  // namespace absa
