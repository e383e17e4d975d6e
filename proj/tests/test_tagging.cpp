#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "tagging.hpp"
#include "utf8.hpp"

using namespace absa;

namespace {

const std::string kTable2 =
    "A estrutura do hotel é muito boa. A piscina é excelente e os quartos também.";

Review table2_review() {
  return {kTable2, {}, {{"hotel", 15, 20, {}}, {"piscina", 36, 43, {}}, {"quartos", 61, 68, {}}}};
}

std::vector<BioTag> tags_of(std::initializer_list<const char*> names) {
  std::vector<BioTag> out;
  for (auto n : names) out.push_back(*tag_from_name(n));
  return out;
}

}  // namespace

TEST_CASE("tokenize splits words and punctuation with exact offsets") {
  const auto toks = tokenize("A estrutura do hotel é muito boa.");
  const std::vector<Token> expected = {{"A", 0, 1},      {"estrutura", 2, 11}, {"do", 12, 14},
                                       {"hotel", 15, 20}, {"é", 21, 22},        {"muito", 23, 28},
                                       {"boa", 29, 32},   {".", 32, 33}};
  CHECK(toks == expected);
  CHECK(tokenize("").empty());
  CHECK(tokenize("hotel") == std::vector<Token>{{"hotel", 0, 5}});
  CHECK(tokenize("Hospedei-me") ==
        std::vector<Token>{{"Hospedei", 0, 8}, {"-", 8, 9}, {"me", 9, 11}});
  CHECK(tokenize("...").size() == 3);
}

TEST_CASE("encode_bio on the two-sentence hotel review") {
  const auto seq = encode_bio(table2_review(), tokenize(kTable2));
  CHECK(seq.tags == tags_of({"O", "O", "O", "B-ASPECT", "O", "O", "O", "O", "O", "B-ASPECT", "O",
                             "O", "O", "O", "B-ASPECT", "O", "O"}));
  const auto spans = decode_bio(kTable2, seq);
  REQUIRE(spans.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(spans[i].term == table2_review().spans[i].term);
    CHECK(spans[i].start == table2_review().spans[i].start);
    CHECK(spans[i].end == table2_review().spans[i].end);
  }
}

TEST_CASE("encode_bio edge cases") {
  Review none{"sem aspectos aqui", {}, {}};
  const auto s0 = encode_bio(none, tokenize(none.text));
  CHECK(std::all_of(s0.tags.begin(), s0.tags.end(), [](BioTag t) { return t == BioTag::O; }));

  Review multi{"o ar condicionado quebrou", {}, {{"ar condicionado", 2, 17, {}}}};
  const auto toks = tokenize(multi.text);
  const auto s1 = encode_bio(multi, toks);
  CHECK(s1.tags == tags_of({"O", "B-ASPECT", "I-ASPECT", "O"}));
  CHECK(s1.tags == oracle::tag_by_intersection(multi, toks));
}

TEST_CASE("sub-token span boundaries warn and tag the covering token") {
  Review r{"hotelzinho bom", {}, {{"hotel", 0, 5, {}}}};
  std::vector<std::string> warnings;
  const auto seq = encode_bio(r, tokenize(r.text), AlignmentPolicy::WarnAndCover,
                              [&](const std::string& w) { warnings.push_back(w); });
  CHECK(seq.tags == tags_of({"B-ASPECT", "O"}));
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(encode_bio(r, tokenize(r.text), AlignmentPolicy::Strict), ValidationError);
}

TEST_CASE("decode_bio") {
  const std::string text = "a b c d";
  TaggedSequence seq{tokenize(text), tags_of({"O", "O", "O", "O"})};
  CHECK(decode_bio(text, seq).empty());
  seq.tags = tags_of({"B-ASPECT", "I-ASPECT", "I-ASPECT", "O"});
  const auto spans = decode_bio(text, seq);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].term == "a b c");
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 5);
  CHECK(oracle::runs(seq.tags) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}});
}

TEST_CASE("repair_bio") {
  CHECK(repair_bio(tags_of({"O", "I-ASPECT", "I-ASPECT"})) == tags_of({"O", "B-ASPECT", "I-ASPECT"}));
  CHECK(repair_bio(tags_of({"I-ASPECT"})) == tags_of({"B-ASPECT"}));
  CHECK(repair_bio(tags_of({"B-ASPECT", "O", "I-ASPECT", "O"})) ==
        tags_of({"B-ASPECT", "O", "B-ASPECT", "O"}));
  CHECK(repair_bio({}).empty());
}

TEST_CASE("property: codec round trip, single B per span, repair idempotence") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 500; ++i) {
    const auto review = oracle::random_review(gen);
    const auto tokens = tokenize(review.text);
    for (const auto& t : tokens) CHECK(utf8::substr(review.text, t.start, t.end) == t.text);
    const auto seq = encode_bio(review, tokens, AlignmentPolicy::Strict);
    CHECK(seq.tags == oracle::tag_by_intersection(review, tokens));
    CHECK(static_cast<std::size_t>(std::count(seq.tags.begin(), seq.tags.end(), BioTag::B)) ==
          review.spans.size());
    CHECK(decode_bio(review.text, seq) == review.spans);

    std::vector<BioTag> noise(tokens.size());
    for (auto& t : noise) t = static_cast<BioTag>(gen() % 3);
    const auto once = repair_bio(noise);
    CHECK(is_well_formed(once));
    CHECK(repair_bio(once) == once);
  }
}

TEST_CASE("CoNLL export and import") {
  const auto seq = encode_bio(table2_review(), tokenize(kTable2));
  std::stringstream ss;
  write_conll(ss, {seq, seq}, json{{"k", 1}});
  const auto text = ss.str();
  CHECK(text.find("hotel\tB-ASPECT\n") != std::string::npos);
  CHECK(text.find("\n\nA\tO\n") != std::string::npos);
  const auto back = read_conll(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].tags == seq.tags);
  CHECK(back[1].tokens.size() == seq.tokens.size());
  CHECK(back[1].tokens[3].text == "hotel");

  std::istringstream bad("hotel\tB-LOC\n");
  CHECK_THROWS_AS(read_conll(bad), ValidationError);
}
