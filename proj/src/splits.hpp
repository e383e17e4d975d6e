#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace absa {

enum class SplitStrategy { Random, PolarityStratified, PolarityAndAspectStratified };

std::string_view strategy_name(SplitStrategy s);  // "random", "polarity", "polarity-aspect"
std::optional<SplitStrategy> strategy_from_name(std::string_view name);

struct SplitSpec {
  double train_fraction = 0.7;
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t seed = 0;
};

struct SideCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  double train_share() const {
    const auto n = train + test;
    return n ? static_cast<double>(train) / static_cast<double>(n) : 0.0;
  }
};

struct SplitReport {
  SplitSpec spec;
  // Reviews per dominant-polarity stratum ("negative", "neutral", "positive",
  // "unlabeled").
  std::map<std::string, SideCounts> strata;
  // Aspect-term occurrences of the 15 most frequent aspects.
  std::vector<std::pair<std::string, SideCounts>> top_aspects;
  // max |train_share - train_fraction| over top_aspects.
  double aspect_slack = 0.0;
  std::vector<std::string> warnings;
};

struct SplitResult {
  std::vector<Review> train;
  std::vector<Review> test;
  SplitReport report;
};

// Majority polarity over the review's labelled spans; ties resolve in the
// order Positive, Negative, Neutral. nullopt when no span is labelled.
std::optional<Polarity> dominant_polarity(const Review& review);

// Whole reviews go to one side. Within each side reviews keep their input
// order. Strata (or the corpus, for Random) are shuffled with `seed` and
// floor(train_fraction * n) of them go to train; a stratum of one review goes
// wholly to train with a warning.
SplitResult split(const std::vector<Review>& corpus, const SplitSpec& spec);

json split_report_to_json(const SplitReport& report);

}  // namespace absa
