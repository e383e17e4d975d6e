#include "interchange.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "tagging.hpp"

namespace absa {

std::string review_key(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string check_prob_vector(const ProbVector& p) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      return "probability " + std::to_string(x) + " outside [0,1]";
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    return "probabilities sum to " + std::to_string(sum);
  }
  return {};
}

json ate_record_to_json(const std::string& model_id, const AteReviewPrediction& r) {
  json tokens = json::array();
  for (const auto& t : r.tokens) tokens.push_back({{"start", t.start}, {"end", t.end}});
  json probs = json::array();
  for (const auto& p : r.probs) probs.push_back({p[0], p[1], p[2]});
  return {{"model_id", model_id},
          {"review_key", r.review_key},
          {"tokens", tokens},
          {"probs", probs}};
}

json soe_record_to_json(const std::string& model_id, const SoeVote& v) {
  return {{"model_id", model_id},
          {"review_id", v.key.review_id},
          {"aspect_term", v.key.aspect_term},
          {"start", v.key.start},
          {"end", v.key.end},
          {"label", v.label ? std::string(polarity_name(*v.label)) : "abstain"}};
}

std::pair<std::string, AteReviewPrediction> ate_record_from_json(const json& value) {
  AteReviewPrediction r;
  std::string model;
  try {
    model = value.at("model_id").get<std::string>();
    r.review_key = value.at("review_key").get<std::string>();
    for (const auto& t : value.at("tokens")) {
      r.tokens.push_back({t.at("start").get<std::size_t>(), t.at("end").get<std::size_t>()});
    }
    for (const auto& p : value.at("probs")) {
      if (!p.is_array() || p.size() != 3) {
        throw ValidationError("each probability vector must have 3 entries");
      }
      r.probs.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ATE record: ") + e.what());
  }
  if (r.tokens.size() != r.probs.size()) {
    throw ValidationError("review " + r.review_key + ": " + std::to_string(r.tokens.size()) +
                          " tokens but " + std::to_string(r.probs.size()) +
                          " probability vectors");
  }
  for (std::size_t i = 0; i < r.probs.size(); ++i) {
    const auto problem = check_prob_vector(r.probs[i]);
    if (!problem.empty()) {
      throw ValidationError("review " + r.review_key + " token " + std::to_string(i) +
                            ": " + problem);
    }
  }
  return {std::move(model), std::move(r)};
}

std::pair<std::string, SoeVote> soe_record_from_json(const json& value) {
  SoeVote v;
  std::string model;
  try {
    model = value.at("model_id").get<std::string>();
    v.key.review_id = value.at("review_id").get<std::int64_t>();
    v.key.aspect_term = value.at("aspect_term").get<std::string>();
    v.key.start = value.at("start").get<std::size_t>();
    v.key.end = value.at("end").get<std::size_t>();
    const auto& label = value.at("label");
    if (!label.is_null()) {
      const auto name = label.get<std::string>();
      if (name != "abstain") {
        v.label = polarity_from_name(name);
        if (!v.label) throw ValidationError("unknown label '" + name + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed SOE record: ") + e.what());
  }
  return {std::move(model), std::move(v)};
}

namespace {

template <typename Model, typename Parse, typename Append>
std::vector<Model> read_grouped(std::istream& in, Parse parse, Append append) {
  std::vector<Model> models;
  std::unordered_map<std::string, std::size_t> index;
  for_each_json_line(in, [&](std::size_t line, const json& value) {
    try {
      auto [id, record] = parse(value);
      auto [it, inserted] = index.try_emplace(id, models.size());
      if (inserted) {
        models.emplace_back();
        models.back().model_id = id;
      }
      append(models[it->second], std::move(record));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return models;
}

}  // namespace

std::vector<AteModelPrediction> read_ate_predictions(std::istream& in) {
  return read_grouped<AteModelPrediction>(
      in, ate_record_from_json,
      [](AteModelPrediction& m, AteReviewPrediction r) { m.reviews.push_back(std::move(r)); });
}

std::vector<SoeModelPrediction> read_soe_predictions(std::istream& in) {
  return read_grouped<SoeModelPrediction>(
      in, soe_record_from_json,
      [](SoeModelPrediction& m, SoeVote v) { m.votes.push_back(std::move(v)); });
}

void write_ate_predictions(std::ostream& out, const AteModelPrediction& pred,
                           const json& header) {
  write_header(out, header);
  for (const auto& r : pred.reviews) out << to_line(ate_record_to_json(pred.model_id, r)) << '\n';
}

void write_soe_predictions(std::ostream& out, const SoeModelPrediction& pred,
                           const json& header) {
  write_header(out, header);
  for (const auto& v : pred.votes) out << to_line(soe_record_to_json(pred.model_id, v)) << '\n';
}

ValidationReport validate_file(std::istream& in, RecordKind kind,
                               const std::vector<Review>* corpus) {
  ValidationReport report;
  std::unordered_map<std::string, const Review*> by_key;
  if (corpus) {
    for (const auto& r : *corpus) by_key.emplace(review_key(r.text), &r);
  }
  std::set<std::pair<std::string, std::string>> seen_ate;
  std::set<std::pair<std::string, SoeKey>> seen_soe;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++report.records;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const json value = json::parse(line);
      switch (kind) {
        case RecordKind::Corpus:
          review_from_json(value);
          break;
        case RecordKind::Ate: {
          auto [model, rec] = ate_record_from_json(value);
          if (!seen_ate.emplace(model, rec.review_key).second) {
            report.errors.push_back(where + "duplicate record for model '" + model +
                                    "' review " + rec.review_key);
          }
          if (corpus) {
            const auto it = by_key.find(rec.review_key);
            if (it == by_key.end()) {
              report.errors.push_back(where + "review_key " + rec.review_key +
                                      " not in corpus");
              break;
            }
            const auto tokens = tokenize(it->second->text);
            bool aligned = tokens.size() == rec.tokens.size();
            for (std::size_t i = 0; aligned && i < tokens.size(); ++i) {
              aligned = tokens[i].start == rec.tokens[i].start &&
                        tokens[i].end == rec.tokens[i].end;
            }
            if (!aligned) {
              report.errors.push_back(where + "token ranges of review " + rec.review_key +
                                      " differ from the toolkit tokenization (" +
                                      std::to_string(rec.tokens.size()) + " vs " +
                                      std::to_string(tokens.size()) + " tokens)");
            }
          }
          break;
        }
        case RecordKind::Soe: {
          auto [model, vote] = soe_record_from_json(value);
          if (!seen_soe.emplace(model, vote.key).second) {
            report.errors.push_back(where + "duplicate prediction for model '" + model +
                                    "' aspect '" + vote.key.aspect_term + "'");
          }
          break;
        }
      }
    } catch (const json::exception& e) {
      report.errors.push_back(where + e.what());
    } catch (const ValidationError& e) {
      report.errors.push_back(where + e.what());
    }
  }
  return report;
}

json validation_report_to_json(const ValidationReport& report) {
  return {{"records", report.records}, {"ok", report.ok()}, {"errors", report.errors}};
}

}  // namespace absa
