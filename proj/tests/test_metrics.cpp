#include <random>

#include "doctest.h"
#include "metrics.hpp"
#include "oracles.hpp"
#include "tagging.hpp"

using namespace absa;

namespace {

const std::vector<std::string> kLabels = {"positive", "negative", "neutral"};

TaggedSequence seq(const std::string& text, std::vector<BioTag> tags) {
  return {tokenize(text), std::move(tags)};
}

}  // namespace

TEST_CASE("confusion matrix counts") {
  const std::vector<std::string> gold = {"positive", "positive", "negative", "neutral"};
  const std::vector<std::string> pred = {"positive", "negative", "negative", "positive"};
  const auto cm = confusion(gold, pred, kLabels);
  CHECK(cm.counts[0] == std::vector<std::size_t>{1, 1, 0});
  CHECK(cm.counts[1] == std::vector<std::size_t>{0, 1, 0});
  CHECK(cm.counts[2] == std::vector<std::size_t>{1, 0, 0});
  CHECK(cm.total() == 4);
  CHECK(cm.trace() == 2);
  CHECK_THROWS_AS(confusion(gold, std::vector<std::string>{"positive"}, kLabels), ValidationError);
  CHECK_THROWS_AS(confusion(std::vector<std::string>{"x"}, std::vector<std::string>{"x"}, kLabels),
                  ValidationError);
}

TEST_CASE("balanced accuracy is the macro recall over supported classes") {
  // positive recall 1.0, negative recall 0.5, neutral absent.
  const std::vector<std::string> gold = {"positive", "positive", "negative", "negative"};
  const std::vector<std::string> pred = {"positive", "positive", "negative", "positive"};
  const auto r = report(confusion(gold, pred, kLabels));
  CHECK(r.balanced_accuracy == doctest::Approx(0.75));
  CHECK(r.recall_macro == r.balanced_accuracy);
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.per_class[2].support == 0);
  CHECK(r.per_class[2].precision == 0.0);
}

TEST_CASE("class never predicted gets zero precision without division errors") {
  const std::vector<std::string> gold = {"positive", "negative", "neutral", "positive", "positive",
                                         "negative", "positive", "positive", "neutral"};
  const std::vector<std::string> pred = {"positive", "negative", "positive", "positive", "positive",
                                         "negative", "positive", "positive", "positive"};
  const auto r = report(confusion(gold, pred, kLabels));
  CHECK(r.accuracy == doctest::Approx(7.0 / 9.0));
  CHECK(r.per_class[2].precision == 0.0);
  CHECK(r.per_class[2].f1 == 0.0);
  const auto o = oracle::brute_score(gold, pred, kLabels);
  CHECK(r.f1_macro == doctest::Approx(o.f1_macro).epsilon(1e-12));
}

TEST_CASE("all-O prediction on the two-sentence hotel review") {
  const std::string text =
      "A estrutura do hotel é muito boa. A piscina é excelente e os quartos também.";
  const auto toks = tokenize(text);
  REQUIRE(toks.size() == 17);
  std::vector<BioTag> gold(17, BioTag::O);
  gold[3] = gold[9] = gold[14] = BioTag::B;
  const auto r = score_ate({seq(text, gold)}, {seq(text, std::vector<BioTag>(17, BioTag::O))});
  CHECK(r.accuracy == doctest::Approx(14.0 / 17.0));
  CHECK(r.per_class[1].recall == 0.0);
  REQUIRE(r.spans.has_value());
  CHECK(r.spans->false_negatives == 3);
  CHECK(r.spans->f1 == 0.0);
}

TEST_CASE("token accuracy with one mistake in a hundred") {
  std::vector<std::string> gold(100, "O"), pred(100, "O");
  gold[5] = "B-ASPECT";
  const auto r = report(confusion(gold, pred, {"O", "B-ASPECT", "I-ASPECT"}));
  CHECK(r.accuracy == doctest::Approx(0.99));
}

TEST_CASE("score_ate span block and validation") {
  const std::string text = "o ar condicionado e a cama";
  const auto gold = seq(text, {BioTag::O, BioTag::B, BioTag::I, BioTag::O, BioTag::O, BioTag::B});
  const auto pred = seq(text, {BioTag::O, BioTag::B, BioTag::O, BioTag::O, BioTag::O, BioTag::B});
  const auto r = score_ate({gold}, {pred});
  CHECK(r.spans->true_positives == 1);
  CHECK(r.spans->false_positives == 1);
  CHECK(r.spans->false_negatives == 1);
  CHECK(r.spans->sequence_exact_match == 0.0);
  CHECK(score_ate({gold}, {gold}).accuracy == 1.0);
  CHECK_THROWS_AS(score_ate({gold}, {}), ValidationError);
  CHECK_THROWS_AS(score_ate({gold}, {seq("x y z w v u", gold.tags)}), ValidationError);
}

TEST_CASE("score_soe counts abstentions as errors") {
  const std::vector<Polarity> gold = {Polarity::Positive, Polarity::Negative, Polarity::Neutral};
  const std::vector<std::optional<Polarity>> pred = {Polarity::Positive, std::nullopt, Polarity::Neutral};
  const auto r = score_soe(gold, pred);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
  const auto j = metrics_to_json(r);
  CHECK(j.dump().find("abstain") != std::string::npos);
  const auto clean = metrics_to_json(score_soe(gold, std::vector<std::optional<Polarity>>(
                                                         gold.begin(), gold.end())));
  CHECK(clean.dump().find("abstain") == std::string::npos);
}

TEST_CASE("metrics match a brute-force scorer on random label pairs") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + gen() % 60;
    std::vector<std::string> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = kLabels[gen() % 3];
      pred[i] = kLabels[gen() % 3];
    }
    const auto r = report(confusion(gold, pred, kLabels));
    const auto o = oracle::brute_score(gold, pred, kLabels);
    CHECK(std::abs(r.accuracy - o.accuracy) <= 1e-12);
    CHECK(std::abs(r.precision_macro - o.precision_macro) <= 1e-12);
    CHECK(std::abs(r.recall_macro - o.recall_macro) <= 1e-12);
    CHECK(std::abs(r.f1_macro - o.f1_macro) <= 1e-12);
    CHECK(r.balanced_accuracy == r.recall_macro);
    for (const auto& c : r.per_class) {
      CHECK(std::abs(c.f1 - o.per_class.at(c.label)[2]) <= 1e-12);
    }
  }
}

TEST_CASE("csv row layout") {
  CHECK(metrics_csv_header() == "run,acc,precision,recall,f1,bacc,f1(pos),f1(neu),f1(neg)");
  const std::vector<Polarity> gold = {Polarity::Positive, Polarity::Negative};
  const std::vector<std::optional<Polarity>> pred = {Polarity::Positive, Polarity::Negative};
  const auto row = metrics_csv_row("run1", score_soe(gold, pred));
  CHECK(row.rfind("run1,1", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
}

TEST_CASE("confusion and report worked examples") {
  const std::vector<std::string> same = {"positive", "negative", "neutral", "positive"};
  const auto diag = confusion(same, same, kLabels);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(diag.counts[i][j] == 0);
    }
  }
  const auto perfect = report(diag);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.f1_macro == 1.0);
  CHECK(perfect.balanced_accuracy == 1.0);

  const auto small = confusion(std::vector<std::string>{"positive", "positive", "negative"},
                               std::vector<std::string>{"positive", "negative", "negative"}, kLabels);
  CHECK(small.counts[0][0] == 1);
  CHECK(small.counts[0][1] == 1);
  CHECK(small.counts[1][1] == 1);
  CHECK(small.total() == 3);

  const auto empty = confusion(std::vector<std::string>{}, std::vector<std::string>{}, kLabels);
  CHECK(empty.total() == 0);
  CHECK_THROWS_AS(report(empty), ArgumentError);

  const std::vector<std::string> gold = {"positive", "positive", "negative", "neutral"};
  const std::vector<std::string> pred = {"positive", "negative", "negative", "neutral"};
  const auto r = report(confusion(gold, pred, kLabels));
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[2].f1 == doctest::Approx(1.0));
  CHECK(r.f1_macro == doctest::Approx(7.0 / 9.0));
  CHECK(r.f1_macro == doctest::Approx(oracle::brute_score(gold, pred, kLabels).f1_macro));
}

TEST_CASE("perfect prediction on the two-sentence hotel review") {
  const std::string text =
      "A estrutura do hotel é muito boa. A piscina é excelente e os quartos também.";
  std::vector<BioTag> gold(17, BioTag::O);
  gold[3] = gold[9] = gold[14] = BioTag::B;
  CHECK(score_ate({seq(text, gold)}, {seq(text, gold)}).accuracy == 1.0);
}
