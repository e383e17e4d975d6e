#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace absa {

enum class ContextMode { FullReview, AspectSentence };

struct SoeExample {
  std::int64_t review_id = 0;
  AspectSpan aspect;
  std::string input_text;
  std::optional<Polarity> gold;
};

// Scalar-value range [start, end) of the sentence containing `offset`.
// Sentences end after '.', '!' or '?' when followed by whitespace (or at the
// text end); surrounding whitespace is excluded.
std::pair<std::size_t, std::size_t> sentence_bounds(std::string_view text,
                                                    std::size_t offset);

// The review text or the aspect's sentence, depending on `mode`.
std::string context_text(const Review& review, const AspectSpan& span, ContextMode mode);

// "Review: {context} Aspect: {term} Polarity:"
SoeExample build_prompt(const Review& review, const AspectSpan& span, ContextMode mode);

// "{context} {separator} {term}"
SoeExample build_pair(const Review& review, const AspectSpan& span, ContextMode mode,
                      std::string_view separator = "[SEP]");

struct LabelWords {
  std::vector<std::string> negative{"negative", "negativo", "negativa"};
  std::vector<std::string> neutral{"neutral", "neutro", "neutra"};
  std::vector<std::string> positive{"positive", "positivo", "positiva"};
};

// First word of `generated` (case-insensitive) that is a label word.
// nullopt means the completion is unparseable and counts as an abstention.
std::optional<Polarity> parse_completion(std::string_view generated,
                                         const LabelWords& words = {});

enum class InputFormat { Prompt, Pair };

// How a (review, aspect) pair becomes model input text.
struct SoeInputConfig {
  InputFormat format = InputFormat::Prompt;
  ContextMode mode = ContextMode::FullReview;
  std::string separator = "[SEP]";

  SoeExample build(const Review& review, const AspectSpan& span) const;
};

json soe_input_config_to_json(const SoeInputConfig& config);
SoeInputConfig soe_input_config_from_json(const json& value);

// One example per span, in corpus order.
std::vector<SoeExample> build_examples(const std::vector<Review>& corpus,
                                       const SoeInputConfig& config);

// {review_id, aspect_term, start, end, input_text, gold}
json soe_example_to_json(const SoeExample& ex);

}  // namespace absa
