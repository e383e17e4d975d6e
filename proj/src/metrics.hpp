#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "tagging.hpp"

namespace absa {

// Rows are gold labels, columns predictions.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t trace() const;
};

// Throws ValidationError on length mismatch or a label outside `labels`.
ConfusionMatrix confusion(std::span<const std::string> gold, std::span<const std::string> pred,
                          std::vector<std::string> labels);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

// Exact-match scoring of decoded spans. Supplementary to the token-level
// numbers, never averaged into them.
struct SpanMetrics {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Fraction of sequences whose predicted span set equals the gold set.
  double sequence_exact_match = 0.0;
};

struct MetricsReport {
  std::size_t total = 0;
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;  // == recall_macro
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  std::vector<ClassMetrics> per_class;  // in label order
  std::optional<SpanMetrics> spans;
};

// Per-class precision TP/(TP+FP) and recall TP/(TP+FN), 0 when the
// denominator is 0. Macro averages run over classes with gold support only.
// Throws ArgumentError on an empty matrix.
MetricsReport report(const ConfusionMatrix& cm);

// Token-level scoring over (O, B-ASPECT, I-ASPECT) plus a span block.
// Sequences must agree in count and token surface forms.
MetricsReport score_ate(const std::vector<TaggedSequence>& gold,
                        const std::vector<TaggedSequence>& pred);

// Abstentions count as wrong; they appear as an "abstain" column when present.
MetricsReport score_soe(std::span<const Polarity> gold,
                        std::span<const std::optional<Polarity>> pred);

json metrics_to_json(const MetricsReport& r);

// One CSV row for experiment tables:
// run,acc,precision,recall,f1,bacc,f1(pos),f1(neu),f1(neg)
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& run, const MetricsReport& r);

}  // namespace absa
