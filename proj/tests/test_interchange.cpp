#include <sstream>

#include "doctest.h"
#include "interchange.hpp"
#include "tagging.hpp"

using namespace absa;

TEST_CASE("review_key uses 64-bit FNV-1a") {
  // Published FNV-1a test vectors.
  CHECK(review_key("") == "cbf29ce484222325");
  CHECK(review_key("a") == "af63dc4c8601ec8c");
  CHECK(review_key("foobar") == "85944171f73967e8");
}

TEST_CASE("probability vector checks") {
  CHECK(check_prob_vector({0.2, 0.3, 0.5}).empty());
  CHECK(check_prob_vector({0.2, 0.3, 0.50005}).empty());
  CHECK_FALSE(check_prob_vector({0.2, 0.3, 0.6}).empty());
  CHECK_FALSE(check_prob_vector({-0.1, 0.6, 0.5}).empty());
}

TEST_CASE("ATE records round trip") {
  AteReviewPrediction r{"abc", {{0, 1}, {2, 7}}, {{0.9, 0.05, 0.05}, {0.1, 0.8, 0.1}}};
  std::stringstream ss;
  write_ate_predictions(ss, {"m1", {r}});
  write_ate_predictions(ss, {"m2", {r}});
  const auto models = read_ate_predictions(ss);
  REQUIRE(models.size() == 2);
  CHECK(models[1].model_id == "m2");
  CHECK(models[0].reviews[0].tokens == r.tokens);
  CHECK(models[0].reviews[0].probs == r.probs);

  auto bad = ate_record_to_json("m", r);
  bad["probs"][0] = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(ate_record_from_json(bad), ValidationError);
  bad = ate_record_to_json("m", r);
  bad["probs"].erase(1);
  CHECK_THROWS_AS(ate_record_from_json(bad), ValidationError);
}

TEST_CASE("SOE records accept abstentions in two spellings") {
  const auto [id, v] = soe_record_from_json(
      json{{"model_id", "m"}, {"review_id", 3}, {"aspect_term", "hotel"}, {"start", 2}, {"end", 7},
           {"label", "abstain"}});
  CHECK(id == "m");
  CHECK_FALSE(v.label.has_value());
  const auto [id2, v2] = soe_record_from_json(
      json{{"model_id", "m"}, {"review_id", 3}, {"aspect_term", "hotel"}, {"start", 2}, {"end", 7},
           {"label", nullptr}});
  CHECK_FALSE(v2.label.has_value());
  CHECK_THROWS_AS(soe_record_from_json(json{{"model_id", "m"}, {"review_id", 3},
                                            {"aspect_term", "hotel"}, {"start", 2}, {"end", 7},
                                            {"label", "great"}}),
                  ValidationError);
}

TEST_CASE("validate_file reports schema and alignment problems") {
  const Review rv{"O hotel", {1}, {}};
  const std::vector<Review> corpus = {rv};
  AteReviewPrediction good{review_key(rv.text), {{0, 1}, {2, 7}}, {{1, 0, 0}, {0, 1, 0}}};
  std::stringstream ok;
  write_ate_predictions(ok, {"m", {good}}, json{{"seed", 1}});
  const auto r1 = validate_file(ok, RecordKind::Ate, &corpus);
  CHECK(r1.ok());
  CHECK(r1.records == 1);

  AteReviewPrediction shifted = good;
  shifted.tokens[1] = {2, 6};
  std::stringstream bad;
  write_ate_predictions(bad, {"m", {shifted, good}});
  const auto r2 = validate_file(bad, RecordKind::Ate, &corpus);
  CHECK_FALSE(r2.ok());
  CHECK(r2.errors.size() == 2);  // misaligned, then duplicate review for the model

  std::istringstream junk("{\"model_id\": 5}\nnot json\n");
  const auto r3 = validate_file(junk, RecordKind::Soe);
  CHECK(r3.errors.size() == 2);
  CHECK(validation_report_to_json(r3).at("ok") == false);
}
