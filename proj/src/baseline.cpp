#include "baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "parallel.hpp"
#include "rng.hpp"
#include "utf8.hpp"

namespace absa {

namespace {

constexpr const char* kTaggerFormat = "absa-perceptron-tagger";
constexpr const char* kBowFormat = "absa-bow-polarity";
constexpr int kModelVersion = 1;

std::string lower_form(const std::vector<Token>& tokens, std::ptrdiff_t i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<std::ptrdiff_t>(tokens.size())) return "</s>";
  return utf8::to_lower(tokens[static_cast<std::size_t>(i)].text);
}

std::size_t argmax(const PerceptronTagger::Weights& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[best]) best = i;
  }
  return best;
}

}  // namespace

std::vector<std::string> PerceptronTagger::features(const std::vector<Token>& tokens,
                                                    std::size_t i, BioTag prev) {
  const auto idx = static_cast<std::ptrdiff_t>(i);
  const auto word = lower_form(tokens, idx);
  std::vector<std::string> f{"bias",
                             "w=" + word,
                             "w-1=" + lower_form(tokens, idx - 1),
                             "w+1=" + lower_form(tokens, idx + 1),
                             "t-1=" + std::string(tag_name(prev))};
  const auto cps = utf8::decode(word);
  for (std::size_t n = 1; n <= 3 && n <= cps.size(); ++n) {
    f.push_back("suf" + std::to_string(n) + "=" +
                utf8::encode(std::u32string_view(cps).substr(cps.size() - n)));
  }
  return f;
}

PerceptronTagger::Weights PerceptronTagger::scores(const std::vector<std::string>& feats) const {
  Weights s{};
  for (const auto& f : feats) {
    const auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t l = 0; l < kNumTags; ++l) s[l] += it->second[l];
  }
  return s;
}

std::vector<ProbVector> PerceptronTagger::predict(const std::vector<Token>& tokens) const {
  std::vector<ProbVector> out;
  out.reserve(tokens.size());
  BioTag prev = BioTag::O;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto s = scores(features(tokens, i, prev));
    const double top = *std::max_element(s.begin(), s.end());
    ProbVector p;
    double z = 0.0;
    for (std::size_t l = 0; l < kNumTags; ++l) z += p[l] = std::exp(s[l] - top);
    for (auto& x : p) x /= z;
    out.push_back(p);
    prev = static_cast<BioTag>(argmax(s));
  }
  return out;
}

std::vector<BioTag> PerceptronTagger::tag(const std::vector<Token>& tokens) const {
  std::vector<BioTag> tags;
  BioTag prev = BioTag::O;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    prev = static_cast<BioTag>(argmax(scores(features(tokens, i, prev))));
    tags.push_back(prev);
  }
  return tags;
}

PerceptronTagger train_tagger(const std::vector<TaggedSequence>& train,
                              const TaggerOptions& options) {
  if (options.epochs == 0) throw ArgumentError("epochs must be at least 1");
  if (train.empty()) throw ArgumentError("cannot train a tagger on an empty set");

  struct Accum {
    PerceptronTagger::Weights w{}, total{};
    std::array<std::size_t, kNumTags> stamp{};
  };
  std::unordered_map<std::string, Accum> table;
  std::size_t step = 0;

  auto update = [&](const std::string& f, std::size_t label, double delta) {
    auto& a = table[f];
    a.total[label] += static_cast<double>(step - a.stamp[label]) * a.w[label];
    a.stamp[label] = step;
    a.w[label] += delta;
  };
  auto score = [&](const std::vector<std::string>& feats) {
    PerceptronTagger::Weights s{};
    for (const auto& f : feats) {
      const auto it = table.find(f);
      if (it == table.end()) continue;
      for (std::size_t l = 0; l < kNumTags; ++l) s[l] += it->second.w[l];
    }
    return s;
  };

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (auto idx : order) {
      const auto& seq = train[idx];
      BioTag prev = BioTag::O;
      for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        ++step;
        const auto feats = PerceptronTagger::features(seq.tokens, i, prev);
        const auto s = score(feats);
        const auto guess = argmax(s);
        const auto gold = static_cast<std::size_t>(seq.tags[i]);
        // A tie with the gold tag counts as a mistake, so tokens that the
        // zero-initialized model happens to get right still earn weights.
        std::size_t rival = gold == 0 ? 1 : 0;
        for (std::size_t l = 0; l < kNumTags; ++l) {
          if (l != gold && s[l] > s[rival]) rival = l;
        }
        if (s[rival] >= s[gold]) {
          for (const auto& f : feats) {
            update(f, gold, 1.0);
            update(f, rival, -1.0);
          }
        }
        prev = static_cast<BioTag>(guess);
      }
    }
  }

  std::map<std::string, PerceptronTagger::Weights> averaged;
  if (step == 0) return PerceptronTagger(std::move(averaged));
  for (auto& [f, a] : table) {
    PerceptronTagger::Weights avg{};
    bool nonzero = false;
    for (std::size_t l = 0; l < kNumTags; ++l) {
      const double total = a.total[l] + static_cast<double>(step - a.stamp[l]) * a.w[l];
      avg[l] = total / static_cast<double>(step);
      nonzero = nonzero || avg[l] != 0.0;
    }
    if (nonzero) averaged.emplace(f, avg);
  }
  return PerceptronTagger(std::move(averaged));
}

json tagger_to_json(const PerceptronTagger& model) {
  json weights = json::object();
  for (const auto& [f, w] : model.weights()) weights[f] = {w[0], w[1], w[2]};
  return {{"format", kTaggerFormat},
          {"version", kModelVersion},
          {"labels", {"O", "B-ASPECT", "I-ASPECT"}},
          {"weights", weights}};
}

PerceptronTagger tagger_from_json(const json& value) {
  try {
    if (value.at("format") != kTaggerFormat) throw ValidationError("not a perceptron tagger model");
    if (value.at("version") != kModelVersion) {
      throw ValidationError("unsupported tagger model version " + value.at("version").dump());
    }
    std::map<std::string, PerceptronTagger::Weights> weights;
    for (const auto& [f, w] : value.at("weights").items()) {
      if (!w.is_array() || w.size() != kNumTags) {
        throw ValidationError("feature '" + f + "' must have 3 weights");
      }
      weights[f] = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
    }
    return PerceptronTagger(std::move(weights));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed tagger model: ") + e.what());
  }
}

AteModelPrediction predict_corpus(const PerceptronTagger& model, const std::string& model_id,
                                  const std::vector<Review>& corpus, unsigned jobs) {
  AteModelPrediction out{model_id, std::vector<AteReviewPrediction>(corpus.size())};
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto tokens = tokenize(corpus[i].text);
    auto& r = out.reviews[i];
    r.review_key = review_key(corpus[i].text);
    for (const auto& t : tokens) r.tokens.push_back({t.start, t.end});
    r.probs = model.predict(tokens);
  });
  return out;
}

// ---------------------------------------------------------------------------

BowPolarityModel::BowPolarityModel(Counts class_counts, std::map<std::string, Counts> word_counts)
    : class_counts_(class_counts), word_counts_(std::move(word_counts)) {
  for (const auto& [w, c] : word_counts_) {
    for (std::size_t k = 0; k < 3; ++k) class_totals_[k] += c[k];
  }
  if (std::accumulate(class_counts_.begin(), class_counts_.end(), 0.0) <= 0.0) {
    throw ValidationError("polarity model has no training examples");
  }
}

std::vector<std::string> BowPolarityModel::features(std::string_view input_text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(input_text)) {
    if (is_word_token(t)) out.push_back(utf8::to_lower(t.text));
  }
  return out;
}

std::array<double, 3> BowPolarityModel::priors() const {
  const double n = std::accumulate(class_counts_.begin(), class_counts_.end(), 0.0);
  return {class_counts_[0] / n, class_counts_[1] / n, class_counts_[2] / n};
}

BowPolarityModel::Counts BowPolarityModel::log_scores(std::string_view input_text) const {
  const auto prior = priors();
  const double vocab = static_cast<double>(word_counts_.size());
  Counts s;
  for (std::size_t k = 0; k < 3; ++k) {
    s[k] = prior[k] > 0.0 ? std::log(prior[k]) : -std::numeric_limits<double>::infinity();
  }
  for (const auto& w : features(input_text)) {
    const auto it = word_counts_.find(w);
    if (it == word_counts_.end()) continue;
    for (std::size_t k = 0; k < 3; ++k) {
      if (prior[k] > 0.0) s[k] += std::log((it->second[k] + 1.0) / (class_totals_[k] + vocab));
    }
  }
  return s;
}

Polarity BowPolarityModel::predict(std::string_view input_text) const {
  const auto s = log_scores(input_text);
  std::optional<Polarity> best;
  for (auto p : {Polarity::Positive, Polarity::Negative, Polarity::Neutral}) {
    const auto k = static_cast<std::size_t>(p);
    if (class_counts_[k] <= 0.0) continue;
    if (!best || s[k] > s[static_cast<std::size_t>(*best)]) best = p;
  }
  return *best;
}

BowPolarityModel train_soe(const std::vector<SoeExample>& train, const BowOptions& options) {
  std::vector<const SoeExample*> labeled;
  for (const auto& ex : train) {
    if (ex.gold) labeled.push_back(&ex);
  }
  if (labeled.empty()) throw ArgumentError("cannot train a polarity model without labeled examples");
  if (options.bootstrap) {
    Rng rng(options.seed);
    std::vector<const SoeExample*> sample;
    sample.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      sample.push_back(labeled[rng.below(labeled.size())]);
    }
    labeled = std::move(sample);
  }
  BowPolarityModel::Counts classes{};
  std::map<std::string, BowPolarityModel::Counts> words;
  for (const auto* ex : labeled) {
    const auto k = static_cast<std::size_t>(*ex->gold);
    classes[k] += 1.0;
    for (const auto& w : BowPolarityModel::features(ex->input_text)) words[w][k] += 1.0;
  }
  return BowPolarityModel(classes, std::move(words));
}

SoeModelPrediction predict_soe(const BowPolarityModel& model, const std::string& model_id,
                               const std::vector<SoeExample>& examples) {
  SoeModelPrediction out{model_id, {}};
  for (const auto& ex : examples) {
    out.votes.push_back({{ex.review_id, ex.aspect.term, ex.aspect.start, ex.aspect.end},
                         model.predict(ex.input_text)});
  }
  return out;
}

json bow_to_json(const BowPolarityModel& model) {
  json words = json::object();
  for (const auto& [w, c] : model.word_counts()) words[w] = {c[0], c[1], c[2]};
  const auto& cc = model.class_counts();
  return {{"format", kBowFormat},
          {"version", kModelVersion},
          {"labels", {"negative", "neutral", "positive"}},
          {"class_counts", {cc[0], cc[1], cc[2]}},
          {"word_counts", words}};
}

BowPolarityModel bow_from_json(const json& value) {
  try {
    if (value.at("format") != kBowFormat) throw ValidationError("not a polarity model");
    if (value.at("version") != kModelVersion) {
      throw ValidationError("unsupported polarity model version " + value.at("version").dump());
    }
    const auto& cc = value.at("class_counts");
    BowPolarityModel::Counts classes{cc.at(0).get<double>(), cc.at(1).get<double>(),
                                     cc.at(2).get<double>()};
    std::map<std::string, BowPolarityModel::Counts> words;
    for (const auto& [w, c] : value.at("word_counts").items()) {
      words[w] = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
    }
    return BowPolarityModel(classes, std::move(words));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed polarity model: ") + e.what());
  }
}

}  // namespace absa
