#include "soe.hpp"

#include <algorithm>

#include "tagging.hpp"
#include "utf8.hpp"

namespace absa {

namespace {

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::pair<std::size_t, std::size_t> sentence_bounds(std::string_view text,
                                                    std::size_t offset) {
  const auto cps = utf8::decode(text);
  const std::size_t n = cps.size();
  offset = std::min(offset, n);
  // A boundary sits after a terminator followed by whitespace.
  std::size_t begin = 0;
  for (std::size_t i = offset; i > 0; --i) {
    if (i < n && is_terminator(cps[i - 1]) && utf8::is_space(cps[i])) {
      begin = i;
      break;
    }
  }
  std::size_t end = n;
  for (std::size_t i = std::max(offset, begin); i < n; ++i) {
    if (is_terminator(cps[i]) && (i + 1 == n || utf8::is_space(cps[i + 1]))) {
      end = i + 1;
      break;
    }
  }
  while (begin < end && utf8::is_space(cps[begin])) ++begin;
  while (end > begin && utf8::is_space(cps[end - 1])) --end;
  return {begin, end};
}

std::string context_text(const Review& review, const AspectSpan& span, ContextMode mode) {
  if (mode == ContextMode::FullReview) return review.text;
  const auto [b, e] = sentence_bounds(review.text, span.start);
  return utf8::substr(review.text, b, e);
}

SoeExample build_prompt(const Review& review, const AspectSpan& span, ContextMode mode) {
  const auto checked = make_span(span.term, span.start, span.end, span.polarity);
  return {review.primary_id(), checked,
          "Review: " + context_text(review, span, mode) + " Aspect: " + span.term +
              " Polarity:",
          span.polarity};
}

SoeExample build_pair(const Review& review, const AspectSpan& span, ContextMode mode,
                      std::string_view separator) {
  const auto checked = make_span(span.term, span.start, span.end, span.polarity);
  return {review.primary_id(), checked,
          context_text(review, span, mode) + " " + std::string(separator) + " " + span.term,
          span.polarity};
}

std::optional<Polarity> parse_completion(std::string_view generated,
                                         const LabelWords& words) {
  auto in = [](const std::vector<std::string>& set, const std::string& w) {
    return std::any_of(set.begin(), set.end(),
                       [&](const std::string& s) { return utf8::to_lower(s) == w; });
  };
  for (const auto& tok : tokenize(generated)) {
    const auto w = utf8::to_lower(tok.text);
    if (in(words.positive, w)) return Polarity::Positive;
    if (in(words.negative, w)) return Polarity::Negative;
    if (in(words.neutral, w)) return Polarity::Neutral;
  }
  return std::nullopt;
}

SoeExample SoeInputConfig::build(const Review& review, const AspectSpan& span) const {
  return format == InputFormat::Prompt ? build_prompt(review, span, mode)
                                       : build_pair(review, span, mode, separator);
}

json soe_input_config_to_json(const SoeInputConfig& config) {
  return {{"format", config.format == InputFormat::Prompt ? "prompt" : "pair"},
          {"mode", config.mode == ContextMode::FullReview ? "full" : "sentence"},
          {"separator", config.separator}};
}

SoeInputConfig soe_input_config_from_json(const json& value) {
  SoeInputConfig c;
  const auto format = value.value("format", std::string("prompt"));
  const auto mode = value.value("mode", std::string("full"));
  if (format == "prompt") {
    c.format = InputFormat::Prompt;
  } else if (format == "pair") {
    c.format = InputFormat::Pair;
  } else {
    throw ArgumentError("unknown SOE input format '" + format + "'");
  }
  if (mode == "full") {
    c.mode = ContextMode::FullReview;
  } else if (mode == "sentence") {
    c.mode = ContextMode::AspectSentence;
  } else {
    throw ArgumentError("unknown SOE context mode '" + mode + "'");
  }
  c.separator = value.value("separator", std::string("[SEP]"));
  return c;
}

std::vector<SoeExample> build_examples(const std::vector<Review>& corpus,
                                       const SoeInputConfig& config) {
  std::vector<SoeExample> out;
  for (const auto& r : corpus) {
    for (const auto& s : r.spans) out.push_back(config.build(r, s));
  }
  return out;
}

json soe_example_to_json(const SoeExample& ex) {
  return {{"review_id", ex.review_id},
          {"aspect_term", ex.aspect.term},
          {"start", ex.aspect.start},
          {"end", ex.aspect.end},
          {"input_text", ex.input_text},
          {"gold", ex.gold ? json(polarity_name(*ex.gold)) : json()}};
}

}  // namespace absa
