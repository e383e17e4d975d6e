#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "augment.hpp"
#include "doctest.h"
#include "tagging.hpp"
#include "utf8.hpp"

using namespace absa;

namespace {

Review make(const std::string& text, const std::vector<std::string>& terms,
            std::int64_t id = 1) {
  Review r{text, {id}, {}};
  const auto cps = utf8::decode(text);
  for (const auto& term : terms) {
    const auto t = utf8::decode(term);
    for (std::size_t i = 0; i + t.size() <= cps.size(); ++i) {
      if (cps.compare(i, t.size(), t) == 0) {
        r.spans.push_back({term, i, i + t.size(), Polarity::Positive});
        break;
      }
    }
  }
  return r;
}

// Rooms appear with bed words, leisure spots with water words.
std::vector<Review> two_topic_corpus() {
  std::vector<Review> c;
  for (int i = 0; i < 3; ++i) {
    c.push_back(make("o quarto tem cama macia e travesseiro limpo", {"quarto"}));
    c.push_back(make("a suíte tem cama macia e travesseiro novo", {"suíte"}));
    c.push_back(make("a piscina tem água quente e toalha seca", {"piscina"}));
    c.push_back(make("a sauna tem água quente e toalha limpa", {"sauna"}));
  }
  return c;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Exhaustive search over every assignment of terms into k non-empty groups.
std::set<std::set<std::string>> best_partition(
    const std::map<std::string, std::vector<double>>& vecs, std::size_t k) {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> xs;
  for (const auto& [t, v] : vecs) {
    terms.push_back(t);
    xs.push_back(v);
  }
  const std::size_t n = terms.size();
  double best = std::numeric_limits<double>::infinity();
  std::set<std::set<std::string>> best_groups;
  std::vector<std::size_t> assign(n, 0);
  while (true) {
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < n; ++i) groups[assign[i]].push_back(i);
    bool all_used = true;
    for (const auto& g : groups) all_used &= !g.empty();
    if (all_used) {
      double inertia = 0;
      for (const auto& g : groups) {
        std::vector<double> c(xs[0].size(), 0.0);
        for (auto i : g)
          for (std::size_t d = 0; d < c.size(); ++d) c[d] += xs[i][d] / static_cast<double>(g.size());
        for (auto i : g) inertia += sq_dist(xs[i], c);
      }
      if (inertia < best - 1e-12) {
        best = inertia;
        best_groups.clear();
        for (const auto& g : groups) {
          std::set<std::string> s;
          for (auto i : g) s.insert(terms[i]);
          best_groups.insert(s);
        }
      }
    }
    std::size_t pos = 0;
    while (pos < n && ++assign[pos] == k) assign[pos++] = 0;
    if (pos == n) break;
  }
  return best_groups;
}

std::set<std::set<std::string>> groups_of(const AspectCategoryMap& map) {
  std::set<std::set<std::string>> out;
  for (const auto& [id, terms] : map.categories()) out.insert(terms);
  return out;
}

}  // namespace

TEST_CASE("context vectors are L2-normalized") {
  const auto vecs = aspect_context_vectors(two_topic_corpus(), {});
  REQUIRE(vecs.size() == 4);
  for (const auto& [term, v] : vecs) {
    double norm = 0;
    for (double x : v) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
  }
}

TEST_CASE("k-means recovers the exhaustive optimum on a two-topic corpus") {
  const auto corpus = two_topic_corpus();
  CategoryOptions opts;
  opts.k = 2;
  opts.seed = 3;
  const auto map = infer_categories(corpus, opts);
  const auto expected = best_partition(aspect_context_vectors(corpus, opts), 2);
  CHECK(groups_of(map) == expected);
  CHECK(expected == std::set<std::set<std::string>>{{"quarto", "suíte"}, {"piscina", "sauna"}});
  // Ids follow the alphabetically first member.
  CHECK(map.categories().at("0") == std::set<std::string>{"piscina", "sauna"});
}

TEST_CASE("k = 1 and identical vectors") {
  const auto corpus = two_topic_corpus();
  CategoryOptions opts;
  opts.k = 1;
  const auto one = infer_categories(corpus, opts);
  REQUIRE(one.categories().size() == 1);
  CHECK(one.categories().begin()->second.size() == 4);

  std::vector<Review> same = {make("bom quarto aqui", {"quarto"}), make("bom sauna aqui", {"sauna"}),
                              make("bom cama aqui", {"cama"})};
  opts.k = 2;
  const auto map = infer_categories(same, opts);
  CHECK(map.categories().size() == 2);
  CHECK(map.term_count() == 3);
}

TEST_CASE("infer_categories argument checks and determinism") {
  CategoryOptions opts;
  opts.k = 0;
  CHECK_THROWS_AS(infer_categories(two_topic_corpus(), opts), ArgumentError);
  opts.k = 5;
  CHECK_THROWS_AS(infer_categories(two_topic_corpus(), opts), ArgumentError);
  opts.k = 2;
  CHECK_THROWS_AS(infer_categories({}, opts), ArgumentError);
  const auto a = category_map_to_json(infer_categories(two_topic_corpus(), opts));
  const auto b = category_map_to_json(infer_categories(two_topic_corpus(), opts));
  CHECK(a == b);
}

TEST_CASE("category map rejects a term in two categories") {
  CHECK_THROWS_AS(AspectCategoryMap({{"a", {"hotel"}}, {"b", {"Hotel"}}}), ValidationError);
  const AspectCategoryMap map({{"lodging", {"hotel", "pousada"}}});
  REQUIRE(map.category_of(" HOTEL ") != nullptr);
  CHECK(map.category_of("piscina") == nullptr);
  CHECK(category_map_from_json(category_map_to_json(map)).categories() == map.categories());
}

TEST_CASE("target swap replaces the span and shifts later spans") {
  const Review r{"O hotel tem piscina boa", {42},
                 {{"hotel", 2, 7, Polarity::Positive}, {"piscina", 12, 19, Polarity::Negative}}};
  const AspectCategoryMap map({{"lodging", {"hotel", "pousada"}}});
  std::vector<std::string> warnings;
  const auto out = target_swap({r}, map, 1, 0, [&](const std::string& w) { warnings.push_back(w); });
  REQUIRE(out.size() == 1);
  const auto& v = out[0];
  CHECK(v.new_text == "O pousada tem piscina boa");
  CHECK(v.base_review_id == 42);
  CHECK(v.span_index == 0);
  CHECK(v.replacement_term == "pousada");
  CHECK(v.swapped_span == AspectSpan{"pousada", 2, 9, Polarity::Positive});
  REQUIRE(v.spans.size() == 2);
  CHECK(v.spans[1] == AspectSpan{"piscina", 14, 21, Polarity::Negative});
  CHECK(warnings.size() == 1);  // piscina has no category
}

TEST_CASE("target swap edge cases") {
  const Review r{"O hotel", {1}, {{"hotel", 2, 7, Polarity::Positive}}};
  const AspectCategoryMap pair({{"lodging", {"hotel", "pousada", "hostel"}}});
  CHECK(target_swap({r}, pair, 0, 0).empty());
  CHECK(target_swap({r}, pair, 10, 0).size() == 2);  // only two alternatives

  const AspectCategoryMap single(std::map<std::string, std::set<std::string>>{{"lodging", {"hotel"}}});
  std::vector<std::string> warnings;
  CHECK(target_swap({r}, single, 3, 0, [&](const std::string& w) { warnings.push_back(w); }).empty());
  CHECK(warnings.size() == 1);
}

TEST_CASE("target swap is deterministic, independent of jobs, and yields valid reviews") {
  std::vector<Review> corpus;
  const std::vector<std::string> terms = {"hotel", "pousada", "hostel", "café da manhã", "jantar"};
  std::mt19937_64 gen(2);
  for (int i = 0; i < 50; ++i) {
    const auto& a = terms[gen() % 3];
    const auto& b = terms[3 + gen() % 2];
    corpus.push_back(make("Gostei do " + a + " e do " + b + ".", {a, b}, i));
  }
  const AspectCategoryMap map({{"lodging", {"hotel", "pousada", "hostel"}},
                               {"meal", {"café da manhã", "jantar"}}});
  const auto one = target_swap(corpus, map, 2, 17, {}, 1);
  const auto four = target_swap(corpus, map, 2, 17, {}, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].new_text == four[i].new_text);
  for (const auto& v : one) {
    const auto rv = v.to_review();
    for (const auto& s : rv.spans) CHECK(check_span(rv.text, s).empty());
    CHECK(v.replacement_term != aspect_key(corpus[static_cast<std::size_t>(v.base_review_id)].spans[v.span_index].term));
    CHECK(map.category_of(v.replacement_term) == map.category_of(v.swapped_span.term));
    CHECK(encode_bio(rv, tokenize(rv.text), AlignmentPolicy::Strict).tags.size() > 0);
  }
}

TEST_CASE("target swap on the dataset row shifts the end by two") {
  const std::string text = "Hospedei-me em maio nesse hotel pela terceira vez com a piscina";
  const Review r{text, {2414},
                 {{"hotel", 26, 31, Polarity::Positive}, {"piscina", 56, 63, Polarity::Positive}}};
  REQUIRE(utf8::substr(text, 56, 63) == "piscina");
  const auto out = target_swap({r}, AspectCategoryMap({{"lodging", {"hotel", "pousada"}}}), 1, 5);
  REQUIRE(out.size() == 1);
  CHECK(out[0].new_text == "Hospedei-me em maio nesse pousada pela terceira vez com a piscina");
  CHECK(out[0].swapped_span.start == 26);
  CHECK(out[0].swapped_span.end == 33);
  // Re-locate each term in the new text.
  for (const auto& s : out[0].spans) CHECK(utf8::substr(out[0].new_text, s.start, s.end) == s.term);
  CHECK(out[0].spans[1].start == 58);
}
