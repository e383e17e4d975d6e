#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "corpus.hpp"
#include "doctest.h"

using namespace absa;

namespace {

const char* kHeader = "id\treview\tpolarity\taspect\tstart_position\tend_position\n";
const std::string kTable1Review = "Hospedei-me em maio nesse hotel pela terceira vez ...";

ParseResult parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_rows(in, opts);
}

RawRow row(std::int64_t id, const std::string& text, const std::string& aspect,
           std::size_t start, std::size_t end, std::optional<Polarity> p = Polarity::Positive) {
  return {id, text, p, aspect, start, end};
}

}  // namespace

TEST_CASE("parse_rows accepts the worked dataset row") {
  const auto r = parse(std::string(kHeader) + "2414\t" + kTable1Review + "\t1\thotel\t26\t31\n");
  REQUIRE(r.rows.size() == 1);
  const auto& x = r.rows[0];
  CHECK(x.id == 2414);
  CHECK(x.polarity == Polarity::Positive);
  CHECK(x.start == 26);
  CHECK(x.end == 31);
  CHECK(check_span(x.review, {x.aspect, x.start, x.end, x.polarity}).empty());
}

TEST_CASE("parse_rows rejects empty spans and mismatched text") {
  CHECK_THROWS_AS(parse(std::string(kHeader) + "1\t" + kTable1Review + "\t1\thotel\t26\t26\n"),
                  ValidationError);
  try {
    parse(std::string(kHeader) + "7\t" + kTable1Review + "\t1\thotel\t25\t30\n");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("id 7") != std::string::npos);
  }
}

TEST_CASE("skip policy routes invalid rows aside") {
  ParseOptions opts;
  opts.on_invalid = ErrorPolicy::Skip;
  std::vector<std::string> warnings;
  std::istringstream in(std::string(kHeader) + "1\t" + kTable1Review + "\t1\thotel\t26\t31\n" +
                        "2\t" + kTable1Review + "\t1\thotel\t0\t99\n");
  const auto r = parse_rows(in, opts, [&](const std::string& w) { warnings.push_back(w); });
  CHECK(r.rows.size() == 1);
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].id == 2);
  CHECK(r.skipped[0].row == 2);
  CHECK(warnings.size() == 1);
}

TEST_CASE("malformed rows raise ParseError with the row number") {
  try {
    parse(std::string(kHeader) + "1\t" + kTable1Review + "\t1\thotel\t26\t31\n" + "2\tx\t1\tx\tabc\t1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
  }
  CHECK_THROWS_AS(parse(std::string(kHeader) + "1\tonly three\tcols\n"), ParseError);
  CHECK_THROWS_AS(parse("id\treview\n1\tx\n"), ParseError);  // missing columns
  CHECK_THROWS_AS(parse(std::string(kHeader) + "1\thotel\t5\thotel\t0\t5\n"), ParseError);
}

TEST_CASE("comma separated input with quotes, custom columns and end-inclusive offsets") {
  ParseOptions opts;
  opts.separator = ',';
  opts.columns.start = "from";
  opts.columns.end = "to";
  opts.end_inclusive = true;
  opts.codes = {0, 1, 2};
  const auto r = parse(
      "id,review,polarity,aspect,from,to\r\n"
      "5,\"Bom, \"\"ótimo\"\" hotel\nlinha dois\",2,Hotel,13,17\r\n",
      opts);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].review == "Bom, \"ótimo\" hotel\nlinha dois");
  CHECK(r.rows[0].end == 18);
  CHECK(r.rows[0].polarity == Polarity::Positive);
}

TEST_CASE("missing polarity column yields unlabeled rows") {
  const auto r = parse("id\treview\taspect\tstart_position\tend_position\n3\tbom hotel\thotel\t4\t9\n");
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].polarity.has_value());
}

TEST_CASE("term comparison tolerates case and surrounding whitespace only") {
  CHECK(term_matches("Hotel", "hotel"));
  CHECK(term_matches(" hotel", "HOTEL "));
  CHECK(term_matches("ÁGUA", "água"));
  CHECK_FALSE(term_matches("hoteis", "hotel"));
}

TEST_CASE("group_reviews joins rows sharing a text") {
  const std::string text = "Hospedei-me em maio nesse hotel com uma piscina";
  REQUIRE(text.substr(40, 7) == "piscina");
  const auto reviews = group_reviews({row(2, text, "piscina", 40, 47), row(1, text, "hotel", 26, 31)});
  REQUIRE(reviews.size() == 1);
  REQUIRE(reviews[0].spans.size() == 2);
  CHECK(reviews[0].spans[0].term == "hotel");
  CHECK(reviews[0].spans[1].term == "piscina");
  CHECK(reviews[0].source_ids == std::vector<std::int64_t>{2, 1});

  const auto single = group_reviews({row(9, text, "hotel", 26, 31)});
  REQUIRE(single.size() == 1);
  CHECK(single[0].spans.size() == 1);
}

TEST_CASE("group_reviews deduplicates exact spans and warns on polarity conflicts") {
  const std::string text = "bom hotel";
  std::vector<std::string> warnings;
  const auto reviews =
      group_reviews({row(1, text, "hotel", 4, 9), row(2, text, "hotel", 4, 9),
                     row(3, text, "hotel", 4, 9, Polarity::Negative)},
                    OverlapPolicy::Reject, [&](const std::string& w) { warnings.push_back(w); });
  REQUIRE(reviews.size() == 1);
  REQUIRE(reviews[0].spans.size() == 1);
  CHECK(reviews[0].spans[0].polarity == Polarity::Positive);
  CHECK(warnings.size() == 1);
}

TEST_CASE("overlapping spans are rejected or resolved to the longer one") {
  const std::string text = "o ar condicionado";
  const std::vector<RawRow> rows = {row(1, text, "ar", 2, 4), row(2, text, "ar condicionado", 2, 17)};
  try {
    group_reviews(rows);
    FAIL("expected overlap rejection");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row id 1") != std::string::npos);
    CHECK(msg.find("row id 2") != std::string::npos);
  }
  const auto kept = group_reviews(rows, OverlapPolicy::KeepLonger);
  REQUIRE(kept[0].spans.size() == 1);
  CHECK(kept[0].spans[0].term == "ar condicionado");
}

TEST_CASE("property: grouping then expanding preserves the deduplicated row multiset") {
  std::mt19937_64 gen(11);
  const std::vector<std::string> texts = {"aa bb cc dd", "hotel e piscina", "x y z w v"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RawRow> rows;
    using Key = std::tuple<std::string, std::string, std::size_t, std::size_t, int>;
    std::set<Key> expected;
    const int n = 1 + static_cast<int>(gen() % 8);
    for (int i = 0; i < n; ++i) {
      const auto& t = texts[gen() % texts.size()];
      // Single-character spans at even offsets never overlap each other.
      const std::size_t start = 2 * (gen() % 4);
      const auto term = t.substr(start, 1);
      const auto p = static_cast<Polarity>(gen() % 3);
      // Keep first polarity per (text, start) so dedup has no conflicts.
      const auto prior = std::find_if(rows.begin(), rows.end(),
                                      [&](const RawRow& r) { return r.review == t && r.start == start; });
      if (prior != rows.end()) {
        const auto first = prior->polarity;
        rows.push_back(row(i, t, term, start, start + 1, first));
        continue;
      }
      rows.push_back(row(i, t, term, start, start + 1, p));
      expected.insert({t, term, start, start + 1, static_cast<int>(p)});
    }
    std::set<Key> got;
    std::size_t count = 0;
    for (const auto& r : expand_rows(group_reviews(rows))) {
      got.insert({r.review, r.aspect, r.start, r.end, static_cast<int>(*r.polarity)});
      ++count;
    }
    CHECK(got == expected);
    CHECK(count == expected.size());
  }
}

TEST_CASE("compute_stats moments and histogram") {
  Review a{"um hotel", {1}, {{"hotel", 3, 8, Polarity::Positive}}};
  Review b{"a b c d", {2, 3, 4},
           {{"a", 0, 1, Polarity::Positive}, {"b", 2, 3, Polarity::Positive},
            {"c", 4, 5, Polarity::Positive}}};
  const auto s = compute_stats({a, b}, 2);
  CHECK(s.aspects_per_review_mean == doctest::Approx(2.0));
  CHECK(s.aspects_per_review_std == doctest::Approx(1.0));
  CHECK(s.count(Polarity::Positive) == 4);
  CHECK(s.count(Polarity::Negative) == 0);
  CHECK(s.count(Polarity::Neutral) == 0);
  CHECK(s.total_rows == 4);
  CHECK(s.unique_aspect_count == 4);
  CHECK(s.top_k_aspect_share == doctest::Approx(0.5));
  CHECK(s.words_per_review_mean == doctest::Approx(3.0));  // 2 and 4 words
  CHECK(s.words_per_review_std == doctest::Approx(1.0));
  CHECK_THROWS_AS(compute_stats({}, 15), ArgumentError);
}

TEST_CASE("compute_stats merges aspect casing and counts unlabeled spans") {
  Review a{"Hotel bom", {1}, {{"Hotel", 0, 5, std::nullopt}}};
  Review b{"hotel ruim", {2}, {{"hotel", 0, 5, Polarity::Negative}}};
  const auto s = compute_stats({a, b}, 15);
  CHECK(s.unique_aspect_count == 1);
  CHECK(s.unlabeled == 1);
  CHECK(s.total_rows == 2);
  CHECK(s.top_k_aspect_share == doctest::Approx(1.0));
}

TEST_CASE("corpus JSON round trip and validation") {
  std::vector<Review> reviews = {
      {"O café da manhã é ótimo.", {10, 11}, {{"café da manhã", 2, 15, Polarity::Positive}}},
      {"sem aspectos", {}, {}}};
  std::stringstream ss;
  write_corpus(ss, reviews, json{{"seed", 1}});
  const auto text = ss.str();
  CHECK(text.rfind("#{\"seed\":1}\n", 0) == 0);
  CHECK(text.find("\"polarity\":\"positive\"") != std::string::npos);
  const auto back = read_corpus(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].spans == reviews[0].spans);
  CHECK(back[0].source_ids == reviews[0].source_ids);

  std::istringstream bad(R"({"text":"bom hotel","source_ids":[1],"spans":[{"term":"hotel","start":3,"end":8,"polarity":null}]})");
  CHECK_THROWS_AS(read_corpus(bad), ValidationError);
}

TEST_CASE("make_span enforces start < end and a non-empty term") {
  CHECK_THROWS_AS(make_span("", 0, 1), ArgumentError);
  CHECK_THROWS_AS(make_span("x", 3, 3), ArgumentError);
  CHECK(make_span("x", 0, 1).end == 1);
}

TEST_CASE("polarity codes must be a bijection") {
  PolarityCodes codes{0, 0, 1};
  CHECK_THROWS_AS(codes.check(), ArgumentError);
  PolarityCodes def;
  for (auto p : kPolarities) CHECK(def.decode(def.encode(p)) == p);
  CHECK_FALSE(def.decode(7).has_value());
}

TEST_CASE("all-positive corpus histogram") {
  std::vector<Review> reviews;
  for (int i = 0; i < 4; ++i) {
    reviews.push_back({"bom hotel " + std::to_string(i), {i}, {{"hotel", 4, 9, Polarity::Positive}}});
  }
  const auto s = compute_stats(reviews, 15);
  CHECK(s.count(Polarity::Positive) == 4);
  CHECK(s.count(Polarity::Negative) == 0);
  CHECK(s.count(Polarity::Neutral) == 0);
}
