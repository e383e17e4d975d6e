#include "splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rng.hpp"

namespace absa {

std::string_view strategy_name(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::Random: return "random";
    case SplitStrategy::PolarityStratified: return "polarity";
    case SplitStrategy::PolarityAndAspectStratified: return "polarity-aspect";
  }
  return "random";
}

std::optional<SplitStrategy> strategy_from_name(std::string_view name) {
  for (auto s : {SplitStrategy::Random, SplitStrategy::PolarityStratified,
                 SplitStrategy::PolarityAndAspectStratified}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<Polarity> dominant_polarity(const Review& review) {
  std::array<std::size_t, 3> counts{};
  bool any = false;
  for (const auto& s : review.spans) {
    if (!s.polarity) continue;
    ++counts[static_cast<std::size_t>(*s.polarity)];
    any = true;
  }
  if (!any) return std::nullopt;
  std::optional<Polarity> best;
  for (auto p : {Polarity::Positive, Polarity::Negative, Polarity::Neutral}) {
    if (!best || counts[static_cast<std::size_t>(p)] >
                     counts[static_cast<std::size_t>(*best)]) {
      best = p;
    }
  }
  return best;
}

namespace {

constexpr std::size_t kReportedAspects = 15;

std::string stratum_name(const Review& r) {
  const auto p = dominant_polarity(r);
  return p ? std::string(polarity_name(*p)) : "unlabeled";
}

std::size_t train_quota(double fraction, std::size_t n) {
  // The epsilon keeps e.g. 0.7 * 10 from flooring to 6.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

struct Strata {
  std::vector<std::string> names;               // fixed order
  std::vector<std::vector<std::size_t>> members;  // review indices, input order
};

Strata build_strata(const std::vector<Review>& corpus) {
  Strata s;
  s.names = {"positive", "negative", "neutral", "unlabeled"};
  s.members.resize(s.names.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto name = stratum_name(corpus[i]);
    const auto idx = std::find(s.names.begin(), s.names.end(), name) - s.names.begin();
    s.members[idx].push_back(i);
  }
  return s;
}

// Assigns a shuffled group: the first `quota` members go to train.
void assign_group(std::vector<std::size_t> members, double fraction, Rng& rng,
                  std::vector<char>& to_train, const std::string& label,
                  std::vector<std::string>& warnings) {
  if (members.empty()) return;
  if (members.size() < 2) {
    warnings.push_back("stratum '" + label + "' has fewer than 2 reviews; assigned to train");
    for (auto i : members) to_train[i] = 1;
    return;
  }
  rng.shuffle(members);
  const auto quota = train_quota(fraction, members.size());
  for (std::size_t k = 0; k < members.size(); ++k) to_train[members[k]] = k < quota;
}

// Greedy assignment: reviews in descending aspect count (seeded shuffle breaks
// ties) each pick the side that lowers sum_a |train_a - fraction * seen_a|,
// subject to the per-stratum train quota.
void assign_aspect_balanced(const std::vector<Review>& corpus, const Strata& strata,
                            double fraction, Rng& rng, std::vector<char>& to_train,
                            std::vector<std::string>& warnings) {
  std::vector<std::size_t> stratum_of(corpus.size());
  std::vector<std::size_t> train_left(strata.names.size()), test_left(strata.names.size());
  for (std::size_t s = 0; s < strata.names.size(); ++s) {
    const auto n = strata.members[s].size();
    for (auto i : strata.members[s]) stratum_of[i] = s;
    if (n == 1) {
      warnings.push_back("stratum '" + strata.names[s] +
                         "' has fewer than 2 reviews; assigned to train");
      train_left[s] = 1;
      test_left[s] = 0;
    } else {
      train_left[s] = train_quota(fraction, n);
      test_left[s] = n - train_left[s];
    }
  }

  std::vector<std::vector<std::string>> keys(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& sp : corpus[i].spans) keys[i].push_back(aspect_key(sp.term));
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].spans.size() > corpus[b].spans.size();
  });

  std::unordered_map<std::string, std::pair<double, double>> tally;  // train, seen
  auto cost_delta = [&](std::size_t i, bool train) {
    // Change in the L1 objective restricted to this review's aspects.
    std::unordered_map<std::string, double> add;
    for (const auto& k : keys[i]) add[k] += 1.0;
    double delta = 0.0;
    for (const auto& [k, n] : add) {
      const auto [tr, seen] = tally.count(k) ? tally.at(k) : std::pair{0.0, 0.0};
      const double before = std::abs(tr - fraction * seen);
      const double after = std::abs(tr + (train ? n : 0.0) - fraction * (seen + n));
      delta += after - before;
    }
    return delta;
  };

  for (auto i : order) {
    const auto s = stratum_of[i];
    bool train;
    if (train_left[s] == 0) {
      train = false;
    } else if (test_left[s] == 0) {
      train = true;
    } else {
      train = cost_delta(i, true) <= cost_delta(i, false);
    }
    (train ? train_left[s] : test_left[s])--;
    to_train[i] = train;
    for (const auto& k : keys[i]) {
      auto& t = tally[k];
      t.first += train ? 1.0 : 0.0;
      t.second += 1.0;
    }
  }
}

}  // namespace

SplitResult split(const std::vector<Review>& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ArgumentError("train_fraction must lie in (0, 1)");
  }
  {
    std::unordered_set<std::string_view> texts;
    for (const auto& r : corpus) {
      if (!texts.insert(r.text).second) {
        throw ValidationError("corpus is not grouped: review text repeats");
      }
    }
  }

  SplitResult result;
  result.report.spec = spec;
  auto& warnings = result.report.warnings;
  std::vector<char> to_train(corpus.size(), 0);
  Rng rng(spec.seed);
  const auto strata = build_strata(corpus);

  switch (spec.strategy) {
    case SplitStrategy::Random: {
      std::vector<std::size_t> all(corpus.size());
      std::iota(all.begin(), all.end(), 0);
      assign_group(std::move(all), spec.train_fraction, rng, to_train, "all", warnings);
      break;
    }
    case SplitStrategy::PolarityStratified:
      for (std::size_t s = 0; s < strata.names.size(); ++s) {
        assign_group(strata.members[s], spec.train_fraction, rng, to_train,
                     strata.names[s], warnings);
      }
      break;
    case SplitStrategy::PolarityAndAspectStratified:
      assign_aspect_balanced(corpus, strata, spec.train_fraction, rng, to_train, warnings);
      break;
  }

  std::map<std::string, SideCounts> aspects;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const bool train = to_train[i];
    (train ? result.train : result.test).push_back(corpus[i]);
    auto& st = result.report.strata[stratum_name(corpus[i])];
    (train ? st.train : st.test)++;
    for (const auto& sp : corpus[i].spans) {
      auto& a = aspects[aspect_key(sp.term)];
      (train ? a.train : a.test)++;
    }
  }

  std::vector<std::pair<std::string, SideCounts>> ranked(aspects.begin(), aspects.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second.train + a.second.test > b.second.train + b.second.test;
  });
  if (ranked.size() > kReportedAspects) ranked.resize(kReportedAspects);
  for (const auto& [term, c] : ranked) {
    result.report.aspect_slack =
        std::max(result.report.aspect_slack, std::abs(c.train_share() - spec.train_fraction));
  }
  result.report.top_aspects = std::move(ranked);
  return result;
}

json split_report_to_json(const SplitReport& report) {
  auto counts = [](const SideCounts& c) {
    return json{{"train", c.train}, {"test", c.test}, {"train_share", c.train_share()}};
  };
  json strata = json::object();
  for (const auto& [name, c] : report.strata) strata[name] = counts(c);
  json aspects = json::array();
  for (const auto& [term, c] : report.top_aspects) {
    json entry = counts(c);
    entry["term"] = term;
    aspects.push_back(entry);
  }
  return {{"strategy", strategy_name(report.spec.strategy)},
          {"seed", report.spec.seed},
          {"train_fraction", report.spec.train_fraction},
          {"polarity_shares", strata},
          {"aspect_shares", aspects},
          {"slack", report.aspect_slack},
          {"warnings", report.warnings}};
}

}  // namespace absa
