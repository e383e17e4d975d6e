#pragma once

// Prediction files exchanged with external model runners.
//
// ATE, one line per (model, review):
//   {"model_id", "review_key", "tokens": [{"start","end"}...],
//    "probs": [[pO, pB, pI], ...]}
// SOE, one line per (model, review, aspect):
//   {"model_id", "review_id", "aspect_term", "start", "end", "label"}
//   with label "positive" | "negative" | "neutral" | "abstain" (or null).

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace absa {

using ProbVector = std::array<double, 3>;  // (O, B-ASPECT, I-ASPECT)
inline constexpr double kProbSumTolerance = 1e-4;

// 64-bit FNV-1a over the UTF-8 bytes of the review text, as 16 lowercase
// hex digits.
std::string review_key(std::string_view text);

struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct AteReviewPrediction {
  std::string review_key;
  std::vector<TokenRange> tokens;
  std::vector<ProbVector> probs;
};

struct AteModelPrediction {
  std::string model_id;
  std::vector<AteReviewPrediction> reviews;
};

struct SoeKey {
  std::int64_t review_id = 0;
  std::string aspect_term;
  std::size_t start = 0;
  std::size_t end = 0;
  auto operator<=>(const SoeKey&) const = default;
};

struct SoeVote {
  SoeKey key;
  std::optional<Polarity> label;  // nullopt = abstain
};

struct SoeModelPrediction {
  std::string model_id;
  std::vector<SoeVote> votes;
};

// Empty when the vector has entries in [0,1] summing to 1 within tolerance.
std::string check_prob_vector(const ProbVector& p);

json ate_record_to_json(const std::string& model_id, const AteReviewPrediction& r);
json soe_record_to_json(const std::string& model_id, const SoeVote& v);

// Parse one record; throws ValidationError on schema violations.
std::pair<std::string, AteReviewPrediction> ate_record_from_json(const json& value);
std::pair<std::string, SoeVote> soe_record_from_json(const json& value);

// Records grouped by model_id in order of first appearance.
std::vector<AteModelPrediction> read_ate_predictions(std::istream& in);
std::vector<SoeModelPrediction> read_soe_predictions(std::istream& in);

void write_ate_predictions(std::ostream& out, const AteModelPrediction& pred,
                           const json& header = nullptr);
void write_soe_predictions(std::ostream& out, const SoeModelPrediction& pred,
                           const json& header = nullptr);

enum class RecordKind { Corpus, Ate, Soe };

struct ValidationReport {
  std::size_t records = 0;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Schema check of a whole file. For ATE files, when `corpus` is given, also
// checks that each review_key exists and its token ranges equal the
// toolkit tokenization of that review.
ValidationReport validate_file(std::istream& in, RecordKind kind,
                               const std::vector<Review>* corpus = nullptr);
json validation_report_to_json(const ValidationReport& report);

}  // namespace absa
