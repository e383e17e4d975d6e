#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "jsonl.hpp"

namespace absa {

enum class Polarity { Negative = 0, Neutral = 1, Positive = 2 };
inline constexpr std::array<Polarity, 3> kPolarities = {
    Polarity::Negative, Polarity::Neutral, Polarity::Positive};

// "negative" / "neutral" / "positive"
std::string_view polarity_name(Polarity p);
std::optional<Polarity> polarity_from_name(std::string_view name);

// Bijection between the integer codes stored in row files and Polarity.
struct PolarityCodes {
  int negative = -1;
  int neutral = 0;
  int positive = 1;

  std::optional<Polarity> decode(int code) const;
  int encode(Polarity p) const;
  // Throws ArgumentError if two labels share a code.
  void check() const;
};

struct RawRow {
  std::int64_t id = 0;
  std::string review;
  std::optional<Polarity> polarity;
  std::string aspect;
  std::size_t start = 0;  // scalar-value offset, inclusive
  std::size_t end = 0;    // exclusive
};

struct AspectSpan {
  std::string term;
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::optional<Polarity> polarity;

  friend bool operator==(const AspectSpan&, const AspectSpan&) = default;
};

// Throws ArgumentError unless start < end and term is non-empty.
AspectSpan make_span(std::string term, std::size_t start, std::size_t end,
                     std::optional<Polarity> polarity = std::nullopt);

struct Review {
  std::string text;
  std::vector<std::int64_t> source_ids;
  std::vector<AspectSpan> spans;  // sorted by start, non-overlapping

  // Identifier used when a single integer is needed (SOE exports and
  // prediction files): the first source id, or `fallback` without ids.
  std::int64_t primary_id(std::int64_t fallback = 0) const {
    return source_ids.empty() ? fallback : source_ids.front();
  }
};

// Case-insensitive comparison after trimming surrounding whitespace.
bool term_matches(std::string_view text_slice, std::string_view term);

// Normalized aspect key used for counting and category lookup.
std::string aspect_key(std::string_view term);

// Checks 0 <= start < end <= length(text) and the text/term agreement.
// Returns an empty string when valid, otherwise the reason.
std::string check_span(std::string_view text, const AspectSpan& span);

// ---------------------------------------------------------------------------
// Row ingestion

enum class ErrorPolicy { Reject, Skip };

struct ColumnNames {
  std::string id = "id";
  std::string review = "review";
  std::string polarity = "polarity";
  std::string aspect = "aspect";
  std::string start = "start_position";
  std::string end = "end_position";
};

struct ParseOptions {
  char separator = '\t';
  ColumnNames columns;
  PolarityCodes codes;
  bool end_inclusive = false;
  ErrorPolicy on_invalid = ErrorPolicy::Reject;
};

struct RowIssue {
  std::size_t row = 0;
  std::int64_t id = 0;
  std::string message;
};

struct ParseResult {
  std::vector<RawRow> rows;
  std::vector<RowIssue> skipped;
};

// Reads a header-bearing delimited file. Fields may be double-quoted (with ""
// escapes and embedded newlines). The polarity column may be absent.
// Malformed rows raise ParseError. Rows violating span invariants raise one
// ValidationError listing every offending id (Reject) or land in `skipped`
// (Skip).
ParseResult parse_rows(std::istream& in, const ParseOptions& options,
                       const WarningSink& warn = {});

enum class OverlapPolicy { Reject, KeepLonger };

// One Review per distinct text, in order of first appearance. Exact duplicate
// spans (start, end, term) collapse into one; a duplicate carrying a
// different polarity keeps the first and warns.
std::vector<Review> group_reviews(const std::vector<RawRow>& rows,
                                  OverlapPolicy overlaps = OverlapPolicy::Reject,
                                  const WarningSink& warn = {});

// Inverse of group_reviews up to deduplication: one row per span. Row ids
// follow source_ids when their count matches the spans, otherwise the
// review's primary id.
std::vector<RawRow> expand_rows(const std::vector<Review>& reviews);

// ---------------------------------------------------------------------------
// Statistics

struct AspectCount {
  std::string term;
  std::size_t count = 0;
};

struct CorpusStats {
  std::array<std::size_t, 3> polarity_histogram{};  // indexed by Polarity
  std::size_t unlabeled = 0;
  std::size_t total_rows = 0;
  std::size_t review_count = 0;
  std::size_t unique_aspect_count = 0;
  std::size_t top_k = 0;
  double top_k_aspect_share = 0.0;
  std::vector<AspectCount> top_aspects;  // the top_k, most frequent first
  double aspects_per_review_mean = 0.0;
  double aspects_per_review_std = 0.0;  // population
  double words_per_review_mean = 0.0;
  double words_per_review_std = 0.0;

  std::size_t count(Polarity p) const {
    return polarity_histogram[static_cast<std::size_t>(p)];
  }
};

CorpusStats compute_stats(const std::vector<Review>& reviews, std::size_t top_k);
json stats_to_json(const CorpusStats& stats);

// ---------------------------------------------------------------------------
// Corpus JSON lines: {"text", "source_ids", "spans": [{"term","start","end",
// "polarity"}]}, polarity as "negative"/"neutral"/"positive" or null.

json review_to_json(const Review& review);
// Validates span invariants; throws ValidationError.
Review review_from_json(const json& value);

std::vector<Review> read_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<Review>& reviews,
                  const json& header = nullptr);

}  // namespace absa
