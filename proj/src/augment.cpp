#include "augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "rng.hpp"
#include "tagging.hpp"
#include "utf8.hpp"

namespace absa {

AspectCategoryMap::AspectCategoryMap(std::map<std::string, std::set<std::string>> categories) {
  for (auto& [id, terms] : categories) {
    std::set<std::string> normalized;
    for (const auto& t : terms) {
      const auto key = aspect_key(t);
      if (key.empty()) throw ValidationError("category '" + id + "' has an empty term");
      auto [it, inserted] = index_.emplace(key, id);
      if (!inserted && it->second != id) {
        throw ValidationError("term '" + key + "' belongs to categories '" + it->second +
                              "' and '" + id + "'");
      }
      normalized.insert(key);
    }
    categories_.emplace(id, std::move(normalized));
  }
}

const std::set<std::string>* AspectCategoryMap::category_of(std::string_view term) const {
  const auto it = index_.find(aspect_key(term));
  if (it == index_.end()) return nullptr;
  return &categories_.at(it->second);
}

json category_map_to_json(const AspectCategoryMap& map) {
  json out = json::object();
  for (const auto& [id, terms] : map.categories()) out[id] = terms;
  return out;
}

AspectCategoryMap category_map_from_json(const json& value) {
  if (!value.is_object()) throw ValidationError("category map must be a JSON object");
  std::map<std::string, std::set<std::string>> cats;
  for (const auto& [id, terms] : value.items()) {
    if (!terms.is_array()) throw ValidationError("category '" + id + "' must be an array");
    for (const auto& t : terms) {
      if (!t.is_string()) throw ValidationError("category '" + id + "' has a non-string term");
      cats[id].insert(t.get<std::string>());
    }
  }
  return AspectCategoryMap(std::move(cats));
}

std::set<std::string> CategoryOptions::default_stopwords() {
  return {"a",    "à",    "ao",   "aos",  "as",   "às",    "com",  "como", "da",
          "das",  "de",   "do",   "dos",  "e",    "é",     "ela",  "ele",  "em",
          "era",  "essa", "esse", "esta", "está", "este",  "eu",   "foi",  "mais",
          "mas",  "me",   "muito", "na",  "nas",  "não",   "nem",  "no",   "nos",
          "o",    "os",   "ou",   "para", "pela", "pelo",  "por",  "que",  "se",
          "seu",  "sua",  "são",  "tem",  "um",   "uma",   "the",  "and",  "of",
          "to",   "is",   "was",  "in",   "it",   "very",  "for",  "with", "but"};
}

std::map<std::string, std::vector<double>> aspect_context_vectors(
    const std::vector<Review>& corpus, const CategoryOptions& options) {
  std::map<std::string, std::map<std::string, double>> counts;
  for (const auto& r : corpus) {
    const auto tokens = tokenize(r.text);
    for (const auto& span : r.spans) {
      auto& ctx = counts[aspect_key(span.term)];
      std::size_t first = tokens.size(), last = 0;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (tokens[t].end > span.start && tokens[t].start < span.end) {
          first = std::min(first, t);
          last = t;
        }
      }
      if (first == tokens.size()) continue;
      const std::size_t lo = first >= options.window ? first - options.window : 0;
      const std::size_t hi = std::min(tokens.size(), last + 1 + options.window);
      for (std::size_t t = lo; t < hi; ++t) {
        if (t >= first && t <= last) continue;
        if (!is_word_token(tokens[t])) continue;
        auto w = utf8::to_lower(tokens[t].text);
        if (options.stopwords.count(w)) continue;
        ctx[w] += 1.0;
      }
    }
  }
  std::map<std::string, std::size_t> vocab;
  for (const auto& [term, ctx] : counts) {
    for (const auto& [w, n] : ctx) vocab.emplace(w, 0);
  }
  std::size_t idx = 0;
  for (auto& [w, i] : vocab) i = idx++;

  std::map<std::string, std::vector<double>> vectors;
  for (const auto& [term, ctx] : counts) {
    std::vector<double> v(vocab.size(), 0.0);
    double norm = 0.0;
    for (const auto& [w, n] : ctx) {
      v[vocab.at(w)] = n;
      norm += n * n;
    }
    if (norm > 0) {
      norm = std::sqrt(norm);
      for (auto& x : v) x /= norm;
    }
    vectors.emplace(term, std::move(v));
  }
  return vectors;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

struct Clustering {
  std::vector<std::size_t> assignment;
  double inertia = std::numeric_limits<double>::infinity();
};

Clustering kmeans_once(const std::vector<std::vector<double>>& points, std::size_t k,
                       std::size_t max_iterations, Rng& rng) {
  const std::size_t n = points.size();
  // k-means++ seeding.
  std::vector<std::vector<double>> centers;
  centers.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.below(n);
    } else {
      double target = rng.unit() * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        if (target < d2[pick]) break;
        target -= d2[pick];
      }
    }
    centers.push_back(points[pick]);
  }

  Clustering c;
  c.assignment.assign(n, 0);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = sq_dist(points[i], centers[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (c.assignment[i] != best) changed = true;
      c.assignment[i] = best;
    }
    // Empty clusters take the point farthest from its center.
    for (std::size_t j = 0; j < k; ++j) {
      if (std::count(c.assignment.begin(), c.assignment.end(), j)) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& own = c.assignment[i];
        if (std::count(c.assignment.begin(), c.assignment.end(), own) < 2) continue;
        const double d = sq_dist(points[i], centers[own]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      c.assignment[far] = j;
      changed = true;
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> mean(points[0].size(), 0.0);
      std::size_t m = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (c.assignment[i] != j) continue;
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += points[i][d];
        ++m;
      }
      for (auto& x : mean) x /= static_cast<double>(m);
      centers[j] = std::move(mean);
    }
    if (!changed) break;
  }
  c.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) c.inertia += sq_dist(points[i], centers[c.assignment[i]]);
  return c;
}

}  // namespace

AspectCategoryMap infer_categories(const std::vector<Review>& corpus,
                                   const CategoryOptions& options) {
  if (corpus.empty()) throw ArgumentError("cannot infer categories from an empty corpus");
  if (options.k < 1) throw ArgumentError("k must be at least 1");
  const auto vectors = aspect_context_vectors(corpus, options);
  if (options.k > vectors.size()) {
    throw ArgumentError("k = " + std::to_string(options.k) + " exceeds the " +
                        std::to_string(vectors.size()) + " unique aspects");
  }
  std::vector<std::string> terms;
  std::vector<std::vector<double>> points;
  for (const auto& [t, v] : vectors) {
    terms.push_back(t);
    points.push_back(v);
  }

  Rng rng(options.seed);
  Clustering best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    auto c = kmeans_once(points, options.k, options.max_iterations, rng);
    if (c.inertia < best.inertia - 1e-12) best = std::move(c);
  }

  // Terms are sorted, so the first term seen per cluster is its smallest.
  std::vector<std::size_t> rank(options.k, SIZE_MAX);
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto& r = rank[best.assignment[i]];
    if (r == SIZE_MAX) r = next_id++;
  }
  std::map<std::string, std::set<std::string>> cats;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    cats[std::to_string(rank[best.assignment[i]])].insert(terms[i]);
  }
  return AspectCategoryMap(std::move(cats));
}

std::vector<AugmentedExample> target_swap(const std::vector<Review>& corpus,
                                          const AspectCategoryMap& map,
                                          std::size_t per_example, std::uint64_t seed,
                                          const WarningSink& warn, unsigned jobs) {
  std::vector<std::vector<AugmentedExample>> per_review(corpus.size());
  std::vector<std::vector<std::string>> notes(corpus.size());
  if (per_example == 0) return {};

  parallel_for(corpus.size(), jobs, [&](std::size_t ri) {
    const auto& review = corpus[ri];
    Rng rng(derive_seed(seed, ri));
    const auto cps = utf8::decode(review.text);
    for (std::size_t si = 0; si < review.spans.size(); ++si) {
      const auto& span = review.spans[si];
      const auto* category = map.category_of(span.term);
      if (!category) {
        notes[ri].push_back("aspect '" + span.term + "' has no category; skipped");
        continue;
      }
      const auto original = aspect_key(span.term);
      std::vector<std::string> pool;
      for (const auto& t : *category) {
        if (t != original) pool.push_back(t);
      }
      if (pool.empty()) {
        notes[ri].push_back("aspect '" + span.term + "' is alone in its category; skipped");
        continue;
      }
      // Partial Fisher-Yates: uniform sample without replacement.
      const std::size_t take = std::min(per_example, pool.size());
      for (std::size_t j = 0; j < take; ++j) {
        std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
      }
      for (std::size_t j = 0; j < take; ++j) {
        const auto& repl = pool[j];
        const auto repl_cps = utf8::decode(repl);
        const std::size_t new_len = repl_cps.size();
        const std::size_t old_len = span.end - span.start;
        std::u32string text = cps.substr(0, span.start);
        text += repl_cps;
        text += cps.substr(span.end);

        AugmentedExample ex;
        ex.base_review_id = review.primary_id();
        ex.span_index = si;
        ex.replacement_term = repl;
        ex.new_text = utf8::encode(text);
        for (std::size_t k = 0; k < review.spans.size(); ++k) {
          auto s = review.spans[k];
          if (k == si) {
            s.term = repl;
            s.end = s.start + new_len;
          } else if (s.start >= span.end) {
            s.start = s.start + new_len - old_len;
            s.end = s.end + new_len - old_len;
          }
          ex.spans.push_back(s);
        }
        ex.swapped_span = ex.spans[si];
        per_review[ri].push_back(std::move(ex));
      }
    }
  });

  std::vector<AugmentedExample> out;
  for (std::size_t ri = 0; ri < corpus.size(); ++ri) {
    for (const auto& n : notes[ri]) emit(warn, n);
    for (auto& ex : per_review[ri]) out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace absa
