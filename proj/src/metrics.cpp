#include "metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

namespace absa {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

ConfusionMatrix confusion(std::span<const std::string> gold, std::span<const std::string> pred,
                          std::vector<std::string> labels) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " items, predictions " +
                          std::to_string(pred.size()));
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], i).second) {
      throw ArgumentError("duplicate label '" + labels[i] + "'");
    }
  }
  auto lookup = [&](const std::string& l) {
    const auto it = index.find(l);
    if (it == index.end()) throw ValidationError("unknown label '" + l + "'");
    return it->second;
  };
  ConfusionMatrix cm{std::move(labels), {}};
  cm.counts.assign(cm.labels.size(), std::vector<std::size_t>(cm.labels.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) ++cm.counts[lookup(gold[i])][lookup(pred[i])];
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

MetricsReport report(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.total = cm.total();
  if (r.total == 0) throw ArgumentError("cannot score an empty confusion matrix");
  r.accuracy = ratio(cm.trace(), r.total);
  const std::size_t k = cm.labels.size();
  std::size_t supported = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.counts[c][j];
      col += cm.counts[j][c];
    }
    const std::size_t tp = cm.counts[c][c];
    ClassMetrics m{cm.labels[c], ratio(tp, col), ratio(tp, row), 0.0, row};
    m.f1 = harmonic(m.precision, m.recall);
    if (row > 0) {
      ++supported;
      r.precision_macro += m.precision;
      r.recall_macro += m.recall;
      r.f1_macro += m.f1;
    }
    r.per_class.push_back(std::move(m));
  }
  r.precision_macro /= static_cast<double>(supported);
  r.recall_macro /= static_cast<double>(supported);
  r.f1_macro /= static_cast<double>(supported);
  r.balanced_accuracy = r.recall_macro;
  return r;
}

namespace {

std::set<std::pair<std::size_t, std::size_t>> span_set(const TaggedSequence& seq) {
  std::set<std::pair<std::size_t, std::size_t>> spans;
  for (const auto& s : decode_bio({}, TaggedSequence{seq.tokens, repair_bio(seq.tags)})) {
    spans.emplace(s.start, s.end);
  }
  return spans;
}

}  // namespace

MetricsReport score_ate(const std::vector<TaggedSequence>& gold,
                        const std::vector<TaggedSequence>& pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " sequences, predictions " + std::to_string(pred.size()));
  }
  std::vector<std::string> g, p;
  SpanMetrics sm;
  std::size_t exact = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& gs = gold[s];
    const auto& ps = pred[s];
    if (gs.tokens.size() != ps.tokens.size()) {
      throw ValidationError("sequence " + std::to_string(s) + ": gold has " +
                            std::to_string(gs.tokens.size()) + " tokens, prediction " +
                            std::to_string(ps.tokens.size()));
    }
    for (std::size_t t = 0; t < gs.tokens.size(); ++t) {
      if (gs.tokens[t].text != ps.tokens[t].text) {
        throw ValidationError("sequence " + std::to_string(s) + " token " + std::to_string(t) +
                              ": '" + gs.tokens[t].text + "' vs '" + ps.tokens[t].text + "'");
      }
      g.emplace_back(tag_name(gs.tags[t]));
      p.emplace_back(tag_name(ps.tags[t]));
    }
    const auto gspans = span_set(gs);
    const auto pspans = span_set(ps);
    std::size_t hit = 0;
    for (const auto& sp : pspans) hit += gspans.count(sp);
    sm.true_positives += hit;
    sm.false_positives += pspans.size() - hit;
    sm.false_negatives += gspans.size() - hit;
    if (gspans == pspans) ++exact;
  }
  auto r = report(confusion(g, p, {"O", "B-ASPECT", "I-ASPECT"}));
  sm.precision = ratio(sm.true_positives, sm.true_positives + sm.false_positives);
  sm.recall = ratio(sm.true_positives, sm.true_positives + sm.false_negatives);
  sm.f1 = harmonic(sm.precision, sm.recall);
  sm.sequence_exact_match = ratio(exact, gold.size());
  r.spans = sm;
  return r;
}

MetricsReport score_soe(std::span<const Polarity> gold,
                        std::span<const std::optional<Polarity>> pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " items, predictions " +
                          std::to_string(pred.size()));
  }
  std::vector<std::string> labels;
  for (auto p : kPolarities) labels.emplace_back(polarity_name(p));
  std::vector<std::string> g, p;
  bool abstained = false;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g.emplace_back(polarity_name(gold[i]));
    if (pred[i]) {
      p.emplace_back(polarity_name(*pred[i]));
    } else {
      p.emplace_back("abstain");
      abstained = true;
    }
  }
  if (abstained) labels.emplace_back("abstain");
  return report(confusion(g, p, std::move(labels)));
}

json metrics_to_json(const MetricsReport& r) {
  json per_class = json::object();
  for (const auto& c : r.per_class) {
    per_class[c.label] = {{"precision", c.precision},
                          {"recall", c.recall},
                          {"f1", c.f1},
                          {"support", c.support}};
  }
  json out = {{"total", r.total},
              {"accuracy", r.accuracy},
              {"balanced_accuracy", r.balanced_accuracy},
              {"precision_macro", r.precision_macro},
              {"recall_macro", r.recall_macro},
              {"f1_macro", r.f1_macro},
              {"per_class", per_class}};
  if (r.spans) {
    const auto& s = *r.spans;
    out["supplementary_span_exact_match"] = {{"true_positives", s.true_positives},
                                             {"false_positives", s.false_positives},
                                             {"false_negatives", s.false_negatives},
                                             {"precision", s.precision},
                                             {"recall", s.recall},
                                             {"f1", s.f1},
                                             {"sequence_exact_match", s.sequence_exact_match}};
  }
  return out;
}

std::string metrics_csv_header() { return "run,acc,precision,recall,f1,bacc,f1(pos),f1(neu),f1(neg)"; }

std::string metrics_csv_row(const std::string& run, const MetricsReport& r) {
  auto f1_of = [&](const char* label) -> std::string {
    for (const auto& c : r.per_class) {
      if (c.label == label) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", c.f1);
        return buf;
      }
    }
    return "";
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.4f", r.accuracy, r.precision_macro,
                r.recall_macro, r.f1_macro, r.balanced_accuracy);
  std::string name = run;
  if (name.find_first_of(",\"") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    name = quoted + "\"";
  }
  return name + "," + buf + "," + f1_of("positive") + "," + f1_of("neutral") + "," +
         f1_of("negative");
}

}  // namespace absa
