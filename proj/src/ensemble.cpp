#include "ensemble.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "parallel.hpp"

namespace absa {

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median of no values");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

BioTag argmax_tag(const ProbVector& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return static_cast<BioTag>(best);
}

std::vector<ProbVector> median_rows(std::span<const std::vector<ProbVector>* const> rows) {
  if (rows.empty()) throw ArgumentError("median_rows needs at least one model");
  const std::size_t n = rows.front()->size();
  std::vector<ProbVector> out(n);
  std::vector<double> column(rows.size());
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t label = 0; label < kNumTags; ++label) {
      for (std::size_t m = 0; m < rows.size(); ++m) column[m] = (*rows[m])[t][label];
      out[t][label] = median(column);
    }
  }
  return out;
}

std::vector<EnsembledReview> median_ensemble(const std::vector<AteModelPrediction>& models,
                                             unsigned jobs) {
  if (models.empty()) throw ArgumentError("median ensemble needs at least one model");
  const auto& first = models.front();

  // review_key -> position, per model.
  std::vector<std::unordered_map<std::string, std::size_t>> index(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t r = 0; r < models[m].reviews.size(); ++r) {
      const auto& key = models[m].reviews[r].review_key;
      if (!index[m].emplace(key, r).second) {
        throw ValidationError("model '" + models[m].model_id + "' predicts review " + key +
                              " twice");
      }
    }
    if (index[m].size() != index[0].size()) {
      throw ValidationError("models '" + first.model_id + "' and '" + models[m].model_id +
                            "' cover different review sets (" +
                            std::to_string(index[0].size()) + " vs " +
                            std::to_string(index[m].size()) + " reviews)");
    }
  }

  std::vector<EnsembledReview> out(first.reviews.size());
  parallel_for(first.reviews.size(), jobs, [&](std::size_t r) {
    const auto& base = first.reviews[r];
    std::vector<const std::vector<ProbVector>*> rows;
    rows.reserve(models.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto it = index[m].find(base.review_key);
      if (it == index[m].end()) {
        throw ValidationError("model '" + models[m].model_id + "' lacks review " +
                              base.review_key + " predicted by '" + first.model_id + "'");
      }
      const auto& other = models[m].reviews[it->second];
      if (other.probs.size() != base.probs.size() || other.tokens.size() != base.tokens.size()) {
        throw ValidationError("review " + base.review_key + ": model '" + first.model_id +
                              "' has " + std::to_string(base.probs.size()) +
                              " tokens but model '" + models[m].model_id + "' has " +
                              std::to_string(other.probs.size()));
      }
      if (other.tokens != base.tokens) {
        throw ValidationError("review " + base.review_key + ": token ranges of models '" +
                              first.model_id + "' and '" + models[m].model_id + "' differ");
      }
      rows.push_back(&other.probs);
    }
    auto& e = out[r];
    e.review_key = base.review_key;
    e.tokens = base.tokens;
    e.medians = median_rows(rows);
    e.tags.reserve(e.medians.size());
    for (const auto& p : e.medians) e.tags.push_back(argmax_tag(p));
    e.tags = repair_bio(std::move(e.tags));
  });
  return out;
}

std::optional<Polarity> plurality(std::span<const std::optional<Polarity>> votes,
                                  const PolarityOrder& order) {
  std::array<std::size_t, 3> counts{};
  for (const auto& v : votes) {
    if (v) ++counts[static_cast<std::size_t>(*v)];
  }
  std::optional<Polarity> best;
  for (auto p : order) {
    const auto c = counts[static_cast<std::size_t>(p)];
    if (c == 0) continue;
    if (!best || c > counts[static_cast<std::size_t>(*best)]) best = p;
  }
  return best;
}

std::vector<SoeDecision> majority_vote(const std::vector<SoeModelPrediction>& models,
                                       const PolarityOrder& order, const WarningSink& warn) {
  if (models.empty()) throw ArgumentError("majority vote needs at least one model");
  {
    std::set<Polarity> distinct(order.begin(), order.end());
    if (distinct.size() != 3) throw ArgumentError("tie-break order must list each polarity once");
  }
  std::vector<SoeKey> keys;
  std::map<SoeKey, std::vector<std::optional<Polarity>>> ballots;
  for (const auto& m : models) {
    std::set<SoeKey> own;
    for (const auto& v : m.votes) {
      if (!own.insert(v.key).second) {
        throw ValidationError("model '" + m.model_id + "' predicts aspect '" +
                              v.key.aspect_term + "' of review " +
                              std::to_string(v.key.review_id) + " twice");
      }
      auto [it, inserted] = ballots.try_emplace(v.key);
      if (inserted) keys.push_back(v.key);
      it->second.push_back(v.label);
    }
  }
  std::vector<SoeDecision> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    const auto& votes = ballots.at(k);
    SoeDecision d{k, plurality(votes, order), votes.size()};
    if (!d.label) {
      emit(warn, "all models abstained on aspect '" + k.aspect_term + "' of review " +
                     std::to_string(k.review_id));
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace absa
