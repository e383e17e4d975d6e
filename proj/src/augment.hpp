#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace absa {

// Category id -> aspect terms (normalized with aspect_key). Every term
// belongs to exactly one category.
class AspectCategoryMap {
 public:
  AspectCategoryMap() = default;
  // Throws ValidationError if a term appears in two categories.
  explicit AspectCategoryMap(std::map<std::string, std::set<std::string>> categories);

  const std::map<std::string, std::set<std::string>>& categories() const {
    return categories_;
  }
  // Category of a term (looked up by aspect_key), or nullptr.
  const std::set<std::string>* category_of(std::string_view term) const;
  std::size_t term_count() const { return index_.size(); }

 private:
  std::map<std::string, std::set<std::string>> categories_;
  std::map<std::string, std::string> index_;
};

json category_map_to_json(const AspectCategoryMap& map);
AspectCategoryMap category_map_from_json(const json& value);

struct CategoryOptions {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::size_t window = 5;
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
  std::set<std::string> stopwords = default_stopwords();

  static std::set<std::string> default_stopwords();
};

// Context vector per aspect: counts of lowercased word tokens within
// `window` tokens on either side of each occurrence, stop-words removed,
// L2-normalized. Keyed by aspect_key; the vocabulary is sorted.
std::map<std::string, std::vector<double>> aspect_context_vectors(
    const std::vector<Review>& corpus, const CategoryOptions& options);

// Seeded k-means (k-means++ seeding, best of `restarts` by inertia) over the
// context vectors. Category ids are "0".."k-1", numbered by their
// alphabetically first term.
AspectCategoryMap infer_categories(const std::vector<Review>& corpus,
                                   const CategoryOptions& options);

struct AugmentedExample {
  std::int64_t base_review_id = 0;
  std::size_t span_index = 0;  // index of the swapped span in the review
  AspectSpan swapped_span;     // located in new_text
  std::string replacement_term;
  std::string new_text;
  std::vector<AspectSpan> spans;  // every span of the review, shifted

  Review to_review() const { return {new_text, {base_review_id}, spans}; }
};

// Up to `per_example` variants per (review, span), replacement terms drawn
// uniformly without replacement from the span's category minus the original
// term. Polarity labels carry over. Spans without a category, or whose
// category has no other member, produce nothing (with a warning).
std::vector<AugmentedExample> target_swap(const std::vector<Review>& corpus,
                                          const AspectCategoryMap& map,
                                          std::size_t per_example, std::uint64_t seed,
                                          const WarningSink& warn = {},
                                          unsigned jobs = 1);

}  // namespace absa
