#include "corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "tagging.hpp"
#include "utf8.hpp"

namespace absa {

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
    case Polarity::Positive: return "positive";
  }
  return "neutral";
}

std::optional<Polarity> polarity_from_name(std::string_view name) {
  for (auto p : kPolarities) {
    if (polarity_name(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<Polarity> PolarityCodes::decode(int code) const {
  if (code == negative) return Polarity::Negative;
  if (code == neutral) return Polarity::Neutral;
  if (code == positive) return Polarity::Positive;
  return std::nullopt;
}

int PolarityCodes::encode(Polarity p) const {
  switch (p) {
    case Polarity::Negative: return negative;
    case Polarity::Neutral: return neutral;
    case Polarity::Positive: return positive;
  }
  return neutral;
}

void PolarityCodes::check() const {
  if (negative == neutral || negative == positive || neutral == positive) {
    throw ArgumentError("polarity codes must be distinct");
  }
}

AspectSpan make_span(std::string term, std::size_t start, std::size_t end,
                     std::optional<Polarity> polarity) {
  if (term.empty()) throw ArgumentError("aspect term must be non-empty");
  if (start >= end) {
    throw ArgumentError("span start " + std::to_string(start) +
                        " must be below end " + std::to_string(end));
  }
  return {std::move(term), start, end, polarity};
}

bool term_matches(std::string_view text_slice, std::string_view term) {
  return utf8::to_lower(utf8::trim(text_slice)) == utf8::to_lower(utf8::trim(term));
}

std::string aspect_key(std::string_view term) {
  return utf8::to_lower(utf8::trim(term));
}

std::string check_span(std::string_view text, const AspectSpan& span) {
  if (span.term.empty()) return "empty aspect term";
  if (span.start >= span.end) {
    return "start " + std::to_string(span.start) + " >= end " +
           std::to_string(span.end);
  }
  const std::size_t len = utf8::length(text);
  if (span.end > len) {
    return "end " + std::to_string(span.end) + " beyond text length " +
           std::to_string(len);
  }
  const auto slice = utf8::substr(text, span.start, span.end);
  if (!term_matches(slice, span.term)) {
    return "text[" + std::to_string(span.start) + ".." + std::to_string(span.end) +
           "] is '" + slice + "', expected '" + span.term + "'";
  }
  return {};
}

// ---------------------------------------------------------------------------

namespace {

// Splits one record, honouring double quotes. Returns false at end of input.
bool read_record(std::istream& in, char sep, std::vector<std::string>& fields,
                 std::size_t& physical_lines) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++physical_lines;
  std::string field;
  bool quoted = false;
  bool at_field_start = true;
  for (;;) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && at_field_start) {
        quoted = true;
        at_field_start = false;
      } else if (c == sep) {
        fields.push_back(std::move(field));
        field.clear();
        at_field_start = true;
      } else if (c == '\r' && i + 1 == line.size()) {
        // CRLF line ending
      } else {
        field.push_back(c);
        at_field_start = false;
      }
    }
    if (!quoted) break;
    // Embedded newline inside a quoted field.
    field.push_back('\n');
    if (!std::getline(in, line)) break;
    ++physical_lines;
  }
  fields.push_back(std::move(field));
  return true;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  const auto t = s.find_first_not_of(" \t");
  if (t == std::string_view::npos) return false;
  s.remove_prefix(t);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ParseResult parse_rows(std::istream& in, const ParseOptions& options,
                       const WarningSink& warn) {
  options.codes.check();
  std::vector<std::string> fields;
  std::size_t physical = 0;
  if (!read_record(in, options.separator, fields, physical)) {
    throw ParseError(0, "missing header row");
  }
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    fields[0].erase(0, 3);  // UTF-8 BOM
  }
  auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (utf8::trim(fields[i]) == name) return i;
    }
    if (required) throw ParseError(0, "header lacks column '" + name + "'");
    return std::nullopt;
  };
  const auto& names = options.columns;
  const std::size_t c_id = *column(names.id, true);
  const std::size_t c_review = *column(names.review, true);
  const auto c_polarity = column(names.polarity, false);
  const std::size_t c_aspect = *column(names.aspect, true);
  const std::size_t c_start = *column(names.start, true);
  const std::size_t c_end = *column(names.end, true);
  const std::size_t width = fields.size();

  ParseResult result;
  std::vector<RowIssue> invalid;
  std::size_t row = 0;
  while (read_record(in, options.separator, fields, physical)) {
    if (fields.size() == 1 && utf8::trim(fields[0]).empty()) continue;
    ++row;
    if (fields.size() < width) {
      throw ParseError(row, "expected " + std::to_string(width) + " columns, found " +
                                std::to_string(fields.size()));
    }
    RawRow r;
    if (!parse_int(fields[c_id], r.id)) {
      throw ParseError(row, "non-integer id '" + fields[c_id] + "'");
    }
    r.review = fields[c_review];
    r.aspect = fields[c_aspect];
    if (!parse_int(fields[c_start], r.start)) {
      throw ParseError(row, "non-integer start offset '" + fields[c_start] + "'");
    }
    if (!parse_int(fields[c_end], r.end)) {
      throw ParseError(row, "non-integer end offset '" + fields[c_end] + "'");
    }
    if (options.end_inclusive) ++r.end;
    if (c_polarity && !utf8::trim(fields[*c_polarity]).empty()) {
      int code = 0;
      if (!parse_int(fields[*c_polarity], code)) {
        throw ParseError(row, "non-integer polarity '" + fields[*c_polarity] + "'");
      }
      r.polarity = options.codes.decode(code);
      if (!r.polarity) {
        throw ParseError(row, "unknown polarity code " + std::to_string(code));
      }
    }
    const auto problem =
        check_span(r.review, AspectSpan{r.aspect, r.start, r.end, r.polarity});
    if (!problem.empty()) {
      invalid.push_back({row, r.id, problem});
      continue;
    }
    result.rows.push_back(std::move(r));
  }

  if (!invalid.empty()) {
    if (options.on_invalid == ErrorPolicy::Reject) {
      std::string msg = "span/text mismatch in " + std::to_string(invalid.size()) +
                        " row(s):";
      for (const auto& issue : invalid) {
        msg += "\n  row " + std::to_string(issue.row) + " id " +
               std::to_string(issue.id) + ": " + issue.message;
      }
      throw ValidationError(msg);
    }
    for (const auto& issue : invalid) {
      emit(warn, "skipping row " + std::to_string(issue.row) + " id " +
                     std::to_string(issue.id) + ": " + issue.message);
    }
    result.skipped = std::move(invalid);
  }
  return result;
}

std::vector<Review> group_reviews(const std::vector<RawRow>& rows,
                                  OverlapPolicy overlaps, const WarningSink& warn) {
  struct Pending {
    Review review;
    std::vector<std::int64_t> span_ids;  // originating row id per span
    std::map<std::tuple<std::size_t, std::size_t, std::string>, std::size_t> seen;
  };
  std::vector<Pending> groups;
  std::unordered_map<std::string, std::size_t> by_text;

  for (const auto& row : rows) {
    auto [it, inserted] = by_text.try_emplace(row.review, groups.size());
    if (inserted) groups.push_back({Review{row.review, {}, {}}, {}, {}});
    auto& g = groups[it->second];
    g.review.source_ids.push_back(row.id);
    const auto key = std::make_tuple(row.start, row.end, row.aspect);
    if (auto found = g.seen.find(key); found != g.seen.end()) {
      const auto& kept = g.review.spans[found->second];
      if (kept.polarity != row.polarity) {
        emit(warn, "row id " + std::to_string(row.id) + ": duplicate span '" +
                       row.aspect + "' with conflicting polarity; keeping row id " +
                       std::to_string(g.span_ids[found->second]));
      }
      continue;
    }
    g.seen.emplace(key, g.review.spans.size());
    g.review.spans.push_back({row.aspect, row.start, row.end, row.polarity});
    g.span_ids.push_back(row.id);
  }

  std::vector<Review> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    std::vector<std::size_t> order(g.review.spans.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto& spans = g.review.spans;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(spans[a].start, spans[a].end) < std::tie(spans[b].start, spans[b].end);
    });
    std::vector<AspectSpan> kept;
    std::vector<std::int64_t> kept_ids;
    for (std::size_t idx : order) {
      const auto& span = spans[idx];
      if (!kept.empty() && span.start < kept.back().end) {
        if (overlaps == OverlapPolicy::Reject) {
          throw ValidationError(
              "overlapping spans '" + kept.back().term + "' (row id " +
              std::to_string(kept_ids.back()) + ") and '" + span.term + "' (row id " +
              std::to_string(g.span_ids[idx]) + ")");
        }
        const auto len_new = span.end - span.start;
        const auto len_old = kept.back().end - kept.back().start;
        emit(warn, "overlapping spans '" + kept.back().term + "' and '" + span.term +
                       "'; keeping the longer");
        if (len_new > len_old) {
          kept.back() = span;
          kept_ids.back() = g.span_ids[idx];
        }
        continue;
      }
      kept.push_back(span);
      kept_ids.push_back(g.span_ids[idx]);
    }
    g.review.spans = std::move(kept);
    out.push_back(std::move(g.review));
  }
  return out;
}

std::vector<RawRow> expand_rows(const std::vector<Review>& reviews) {
  std::vector<RawRow> rows;
  for (const auto& r : reviews) {
    const bool aligned = r.source_ids.size() == r.spans.size();
    for (std::size_t i = 0; i < r.spans.size(); ++i) {
      const auto& s = r.spans[i];
      rows.push_back({aligned ? r.source_ids[i] : r.primary_id(), r.text, s.polarity,
                      s.term, s.start, s.end});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

}  // namespace

CorpusStats compute_stats(const std::vector<Review>& reviews, std::size_t top_k) {
  if (reviews.empty()) throw ArgumentError("cannot compute statistics of an empty corpus");
  CorpusStats stats;
  stats.review_count = reviews.size();
  std::map<std::string, std::size_t> aspect_counts;
  std::vector<double> aspects, words;
  for (const auto& r : reviews) {
    for (const auto& s : r.spans) {
      ++stats.total_rows;
      if (s.polarity) {
        ++stats.polarity_histogram[static_cast<std::size_t>(*s.polarity)];
      } else {
        ++stats.unlabeled;
      }
      ++aspect_counts[aspect_key(s.term)];
    }
    aspects.push_back(static_cast<double>(r.spans.size()));
    const auto tokens = tokenize(r.text);
    words.push_back(static_cast<double>(
        std::count_if(tokens.begin(), tokens.end(), is_word_token)));
  }
  stats.unique_aspect_count = aspect_counts.size();
  std::vector<AspectCount> ranked;
  for (const auto& [term, n] : aspect_counts) ranked.push_back({term, n});
  // Ties rank alphabetically (the map order) for reproducible output.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  stats.top_k = top_k;
  std::size_t top_total = 0;
  for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) {
    top_total += ranked[i].count;
    stats.top_aspects.push_back(ranked[i]);
  }
  stats.top_k_aspect_share =
      stats.total_rows ? static_cast<double>(top_total) / static_cast<double>(stats.total_rows)
                       : 0.0;
  std::tie(stats.aspects_per_review_mean, stats.aspects_per_review_std) = mean_std(aspects);
  std::tie(stats.words_per_review_mean, stats.words_per_review_std) = mean_std(words);
  return stats;
}

json stats_to_json(const CorpusStats& stats) {
  json hist = json::object();
  for (auto p : kPolarities) hist[std::string(polarity_name(p))] = stats.count(p);
  hist["unlabeled"] = stats.unlabeled;
  json top = json::array();
  for (const auto& a : stats.top_aspects) top.push_back({{"term", a.term}, {"count", a.count}});
  json shares = json::object();
  const std::size_t labeled = stats.total_rows - stats.unlabeled;
  for (auto p : kPolarities) {
    shares[std::string(polarity_name(p))] =
        labeled ? static_cast<double>(stats.count(p)) / static_cast<double>(labeled) : 0.0;
  }
  return {
      {"rows", stats.total_rows},
      {"reviews", stats.review_count},
      {"polarity_histogram", hist},
      {"polarity_shares", shares},
      {"unique_aspect_count", stats.unique_aspect_count},
      {"top_k", stats.top_k},
      {"top_k_aspect_share", stats.top_k_aspect_share},
      {"top_aspects", top},
      {"aspects_per_review", {{"mean", stats.aspects_per_review_mean},
                              {"std", stats.aspects_per_review_std}}},
      {"words_per_review", {{"mean", stats.words_per_review_mean},
                            {"std", stats.words_per_review_std}}},
  };
}

// ---------------------------------------------------------------------------

json review_to_json(const Review& review) {
  json spans = json::array();
  for (const auto& s : review.spans) {
    spans.push_back({{"term", s.term},
                     {"start", s.start},
                     {"end", s.end},
                     {"polarity", s.polarity ? json(polarity_name(*s.polarity)) : json()}});
  }
  return {{"text", review.text}, {"source_ids", review.source_ids}, {"spans", spans}};
}

Review review_from_json(const json& value) {
  if (!value.is_object()) throw ValidationError("review record must be an object");
  Review r;
  try {
    r.text = value.at("text").get<std::string>();
    if (value.contains("source_ids")) {
      r.source_ids = value.at("source_ids").get<std::vector<std::int64_t>>();
    }
    for (const auto& s : value.at("spans")) {
      AspectSpan span;
      span.term = s.at("term").get<std::string>();
      span.start = s.at("start").get<std::size_t>();
      span.end = s.at("end").get<std::size_t>();
      if (s.contains("polarity") && !s.at("polarity").is_null()) {
        const auto name = s.at("polarity").get<std::string>();
        span.polarity = polarity_from_name(name);
        if (!span.polarity) throw ValidationError("unknown polarity '" + name + "'");
      }
      r.spans.push_back(std::move(span));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed review record: ") + e.what());
  }
  for (std::size_t i = 0; i < r.spans.size(); ++i) {
    const auto problem = check_span(r.text, r.spans[i]);
    if (!problem.empty()) throw ValidationError("span " + std::to_string(i) + ": " + problem);
    if (i > 0 && r.spans[i].start < r.spans[i - 1].end) {
      throw ValidationError("spans must be sorted and non-overlapping");
    }
  }
  return r;
}

std::vector<Review> read_corpus(std::istream& in) {
  std::vector<Review> reviews;
  for_each_json_line(in, [&](std::size_t line, const json& value) {
    try {
      reviews.push_back(review_from_json(value));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return reviews;
}

void write_corpus(std::ostream& out, const std::vector<Review>& reviews,
                  const json& header) {
  write_header(out, header);
  for (const auto& r : reviews) out << to_line(review_to_json(r)) << '\n';
}

}  // namespace absa
