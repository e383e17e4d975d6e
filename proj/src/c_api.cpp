#include "absa/absa.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <sstream>
#include <unordered_map>

#include "augment.hpp"
#include "baseline.hpp"
#include "corpus.hpp"
#include "ensemble.hpp"
#include "interchange.hpp"
#include "jsonl.hpp"
#include "metrics.hpp"
#include "soe.hpp"
#include "splits.hpp"
#include "tagging.hpp"

using absa::json;

struct absa_context {
  std::string error;
  absa_log_fn log = nullptr;
  void* log_user = nullptr;
  unsigned jobs = 1;
  json header = nullptr;

  absa::WarningSink sink() {
    if (!log) return {};
    return [this](const std::string& msg) { log(log_user, msg.c_str()); };
  }
};

struct absa_corpus {
  std::vector<absa::Review> reviews;
};

struct absa_tagger {
  absa::PerceptronTagger model;
};

struct absa_polarity_model {
  absa::BowPolarityModel model;
  absa::SoeInputConfig input;
};

namespace {

template <typename Fn>
absa_status guarded(absa_context* ctx, Fn&& fn) {
  if (!ctx) return ABSA_ERR_ARGUMENT;
  ctx->error.clear();
  try {
    fn();
    return ABSA_OK;
  } catch (const absa::ValidationError& e) {
    ctx->error = e.what();
    return ABSA_ERR_VALIDATION;
  } catch (const absa::ArgumentError& e) {
    ctx->error = e.what();
    return ABSA_ERR_ARGUMENT;
  } catch (const absa::IoError& e) {
    ctx->error = e.what();
    return ABSA_ERR_IO;
  } catch (const json::exception& e) {
    ctx->error = std::string("invalid JSON argument: ") + e.what();
    return ABSA_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return ABSA_ERR_INTERNAL;
  } catch (...) {
    ctx->error = "unknown error";
    return ABSA_ERR_INTERNAL;
  }
}

template <typename T>
T* require(T* p, const char* name) {
  if (!p) throw absa::ArgumentError(std::string(name) + " must not be NULL");
  return p;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json_arg(const char* text, const char* name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw absa::ArgumentError(std::string(name) + " is not valid JSON: " + e.what());
  }
}

template <typename Fn>
void write_to(const char* path, Fn&& fn) {
  absa::OutputFile out(require(path, "path"));
  fn(out.stream());
  out.close();
}

absa::SoeInputConfig input_config(const char* format, const char* mode, const char* separator) {
  json cfg = {{"format", format ? format : "prompt"}, {"mode", mode ? mode : "full"}};
  if (separator) cfg["separator"] = separator;
  return absa::soe_input_config_from_json(cfg);
}

absa::PolarityOrder parse_tie_order(const char* text) {
  if (!text) return absa::kDefaultTieBreak;
  absa::PolarityOrder order{};
  std::stringstream ss(text);
  std::string item;
  std::size_t n = 0;
  while (std::getline(ss, item, ',')) {
    const auto p = absa::polarity_from_name(item);
    if (!p || n >= 3) throw absa::ArgumentError(std::string("invalid tie order '") + text + "'");
    order[n++] = *p;
  }
  if (n != 3) throw absa::ArgumentError(std::string("invalid tie order '") + text + "'");
  return order;
}

// Gold polarity per aspect from any of the three supported record shapes.
std::vector<std::pair<absa::SoeKey, absa::Polarity>> read_soe_gold(const std::string& path) {
  std::vector<std::pair<absa::SoeKey, absa::Polarity>> gold;
  absa::InputFile in(path);
  absa::for_each_json_line(in.stream(), [&](std::size_t line, const json& v) {
    try {
      if (v.contains("spans")) {
        const auto r = absa::review_from_json(v);
        for (const auto& s : r.spans) {
          if (s.polarity) {
            gold.push_back({{r.primary_id(), s.term, s.start, s.end},
                            *s.polarity});
          }
        }
      } else if (v.contains("label")) {
        auto [model, vote] = absa::soe_record_from_json(v);
        if (vote.label) gold.push_back({vote.key, *vote.label});
      } else if (v.contains("gold")) {
        if (!v.at("gold").is_null()) {
          const auto name = v.at("gold").get<std::string>();
          const auto p = absa::polarity_from_name(name);
          if (!p) throw absa::ValidationError("unknown gold label '" + name + "'");
          gold.push_back({{v.at("review_id").get<std::int64_t>(),
                           v.at("aspect_term").get<std::string>(),
                           v.at("start").get<std::size_t>(), v.at("end").get<std::size_t>()},
                          *p});
        }
      } else {
        throw absa::ValidationError("record has neither spans, label nor gold");
      }
    } catch (const json::exception& e) {
      throw absa::ValidationError("line " + std::to_string(line) + ": " + e.what());
    } catch (const absa::ValidationError& e) {
      throw absa::ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return gold;
}

}  // namespace

extern "C" {

const char* absa_version(void) { return "0.1.0"; }

const char* absa_status_name(absa_status status) {
  switch (status) {
    case ABSA_OK: return "ok";
    case ABSA_ERR_VALIDATION: return "validation error";
    case ABSA_ERR_ARGUMENT: return "invalid argument";
    case ABSA_ERR_IO: return "i/o error";
    case ABSA_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

absa_context* absa_context_new(void) { return new (std::nothrow) absa_context(); }
void absa_context_free(absa_context* ctx) { delete ctx; }
const char* absa_last_error(const absa_context* ctx) { return ctx ? ctx->error.c_str() : ""; }

void absa_set_log_callback(absa_context* ctx, absa_log_fn fn, void* user) {
  if (!ctx) return;
  ctx->log = fn;
  ctx->log_user = user;
}

void absa_set_jobs(absa_context* ctx, unsigned jobs) {
  if (ctx) ctx->jobs = jobs ? jobs : 1;
}

absa_status absa_set_header(absa_context* ctx, const char* text) {
  return guarded(ctx, [&] {
    if (!text) {
      ctx->header = nullptr;
      return;
    }
    auto h = parse_json_arg(text, "header");
    if (!h.is_object()) throw absa::ArgumentError("header must be a JSON object");
    ctx->header = std::move(h);
  });
}

void absa_string_free(char* s) { std::free(s); }

// --- corpus ----------------------------------------------------------------

absa_status absa_corpus_from_rows(absa_context* ctx, const char* path, const char* options_json,
                                  absa_corpus** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    absa::ParseOptions opts;
    auto overlaps = absa::OverlapPolicy::Reject;
    if (options_json) {
      const auto o = parse_json_arg(options_json, "options");
      if (o.contains("separator")) {
        const auto sep = o.at("separator").get<std::string>();
        if (sep.size() != 1) throw absa::ArgumentError("separator must be one character");
        opts.separator = sep[0];
      }
      if (o.contains("columns")) {
        const auto& c = o.at("columns");
        opts.columns.id = c.value("id", opts.columns.id);
        opts.columns.review = c.value("review", opts.columns.review);
        opts.columns.polarity = c.value("polarity", opts.columns.polarity);
        opts.columns.aspect = c.value("aspect", opts.columns.aspect);
        opts.columns.start = c.value("start", opts.columns.start);
        opts.columns.end = c.value("end", opts.columns.end);
      }
      if (o.contains("polarity_codes")) {
        const auto& c = o.at("polarity_codes");
        opts.codes.negative = c.value("negative", opts.codes.negative);
        opts.codes.neutral = c.value("neutral", opts.codes.neutral);
        opts.codes.positive = c.value("positive", opts.codes.positive);
      }
      opts.end_inclusive = o.value("end_inclusive", false);
      const auto on_invalid = o.value("on_invalid", std::string("reject"));
      if (on_invalid == "skip") {
        opts.on_invalid = absa::ErrorPolicy::Skip;
      } else if (on_invalid != "reject") {
        throw absa::ArgumentError("on_invalid must be 'reject' or 'skip'");
      }
      const auto ov = o.value("overlaps", std::string("reject"));
      if (ov == "keep-longer") {
        overlaps = absa::OverlapPolicy::KeepLonger;
      } else if (ov != "reject") {
        throw absa::ArgumentError("overlaps must be 'reject' or 'keep-longer'");
      }
    }
    absa::InputFile in(require(path, "path"));
    auto rows = absa::parse_rows(in.stream(), opts, ctx->sink());
    auto c = std::make_unique<absa_corpus>();
    c->reviews = absa::group_reviews(rows.rows, overlaps, ctx->sink());
    *out = c.release();
  });
}

absa_status absa_corpus_load(absa_context* ctx, const char* path, absa_corpus** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    absa::InputFile in(require(path, "path"));
    auto c = std::make_unique<absa_corpus>();
    try {
      c->reviews = absa::read_corpus(in.stream());
    } catch (const absa::ValidationError& e) {
      throw absa::ValidationError(in.path() + ": " + e.what());
    }
    *out = c.release();
  });
}

absa_status absa_corpus_save(absa_context* ctx, const absa_corpus* corpus, const char* path) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    write_to(path, [&](std::ostream& os) { absa::write_corpus(os, corpus->reviews, ctx->header); });
  });
}

size_t absa_corpus_size(const absa_corpus* corpus) { return corpus ? corpus->reviews.size() : 0; }

size_t absa_corpus_span_count(const absa_corpus* corpus) {
  if (!corpus) return 0;
  size_t n = 0;
  for (const auto& r : corpus->reviews) n += r.spans.size();
  return n;
}

void absa_corpus_free(absa_corpus* corpus) { delete corpus; }

absa_status absa_corpus_stats(absa_context* ctx, const absa_corpus* corpus, size_t top_k,
                              char** json_out) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(json_out, "json_out");
    *json_out = copy_string(absa::to_line(absa::stats_to_json(absa::compute_stats(corpus->reviews, top_k))));
  });
}

absa_status absa_corpus_write_conll(absa_context* ctx, const absa_corpus* corpus,
                                    int strict_alignment, const char* path) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    const auto policy = strict_alignment ? absa::AlignmentPolicy::Strict
                                         : absa::AlignmentPolicy::WarnAndCover;
    const auto sink = ctx->sink();
    std::vector<absa::TaggedSequence> seqs;
    for (const auto& r : corpus->reviews) {
      seqs.push_back(absa::encode_bio(r, absa::tokenize(r.text), policy,
                                      [&](const std::string& m) {
                                        absa::emit(sink, "review " +
                                                             std::to_string(r.primary_id()) +
                                                             ": " + m);
                                      }));
    }
    write_to(path, [&](std::ostream& os) { absa::write_conll(os, seqs, ctx->header); });
  });
}

// --- splits ----------------------------------------------------------------

absa_status absa_split(absa_context* ctx, const absa_corpus* corpus, const char* strategy,
                       double train_fraction, uint64_t seed, absa_corpus** train,
                       absa_corpus** test, char** report_json) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(train, "train");
    require(test, "test");
    absa::SplitSpec spec;
    spec.train_fraction = train_fraction;
    spec.seed = seed;
    const auto s = absa::strategy_from_name(strategy ? strategy : "random");
    if (!s) throw absa::ArgumentError(std::string("unknown split strategy '") + strategy + "'");
    spec.strategy = *s;
    auto result = absa::split(corpus->reviews, spec);
    for (const auto& w : result.report.warnings) absa::emit(ctx->sink(), w);
    auto tr = std::make_unique<absa_corpus>();
    auto te = std::make_unique<absa_corpus>();
    tr->reviews = std::move(result.train);
    te->reviews = std::move(result.test);
    if (report_json) *report_json = copy_string(absa::to_line(absa::split_report_to_json(result.report)));
    *train = tr.release();
    *test = te.release();
  });
}

// --- augmentation ------------------------------------------------------------

absa_status absa_infer_categories(absa_context* ctx, const absa_corpus* corpus, size_t k,
                                  uint64_t seed, size_t window, char** map_json) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(map_json, "map_json");
    absa::CategoryOptions opts;
    opts.k = k;
    opts.seed = seed;
    opts.window = window;
    const auto map = absa::infer_categories(corpus->reviews, opts);
    *map_json = copy_string(absa::to_line(absa::category_map_to_json(map)));
  });
}

absa_status absa_target_swap(absa_context* ctx, const absa_corpus* corpus, const char* map_json,
                             size_t per_example, uint64_t seed, absa_corpus** out) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(out, "out");
    const auto map = absa::category_map_from_json(parse_json_arg(require(map_json, "map_json"), "map"));
    const auto variants =
        absa::target_swap(corpus->reviews, map, per_example, seed, ctx->sink(), ctx->jobs);
    auto c = std::make_unique<absa_corpus>();
    for (const auto& v : variants) c->reviews.push_back(v.to_review());
    *out = c.release();
  });
}

// --- SOE ---------------------------------------------------------------------

absa_status absa_soe_export(absa_context* ctx, const absa_corpus* corpus, const char* format,
                            const char* mode, const char* separator, const char* path) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    const auto cfg = input_config(format, mode, separator);
    const auto examples = absa::build_examples(corpus->reviews, cfg);
    write_to(path, [&](std::ostream& os) {
      absa::write_header(os, ctx->header);
      for (const auto& ex : examples) os << absa::to_line(absa::soe_example_to_json(ex)) << '\n';
    });
  });
}

absa_status absa_parse_completion(absa_context* ctx, const char* text, const char** label_out) {
  return guarded(ctx, [&] {
    require(label_out, "label_out");
    const auto p = absa::parse_completion(require(text, "text"));
    static constexpr const char* kNames[] = {"negative", "neutral", "positive"};
    *label_out = p ? kNames[static_cast<int>(*p)] : "abstain";
  });
}

// --- ensembles ---------------------------------------------------------------

absa_status absa_ensemble_ate(absa_context* ctx, const char* const* pred_paths, size_t n_paths,
                              const absa_corpus* corpus, const char* conll_path,
                              const char* spans_path) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    if (n_paths == 0) throw absa::ArgumentError("at least one prediction file is required");
    require(pred_paths, "pred_paths");
    std::vector<absa::AteModelPrediction> models;
    for (size_t i = 0; i < n_paths; ++i) {
      absa::InputFile in(require(pred_paths[i], "prediction path"));
      try {
        for (auto& m : absa::read_ate_predictions(in.stream())) models.push_back(std::move(m));
      } catch (const absa::ValidationError& e) {
        throw absa::ValidationError(in.path() + ": " + e.what());
      }
    }
    const auto merged = absa::median_ensemble(models, ctx->jobs);

    std::unordered_map<std::string, const absa::Review*> by_key;
    for (const auto& r : corpus->reviews) by_key.emplace(absa::review_key(r.text), &r);
    std::vector<absa::TaggedSequence> seqs;
    std::vector<absa::Review> decoded;
    for (const auto& e : merged) {
      const auto it = by_key.find(e.review_key);
      if (it == by_key.end()) {
        throw absa::ValidationError("review " + e.review_key + " is not in the corpus");
      }
      const auto& review = *it->second;
      auto tokens = absa::tokenize(review.text);
      bool aligned = tokens.size() == e.tokens.size();
      for (std::size_t t = 0; aligned && t < tokens.size(); ++t) {
        aligned = tokens[t].start == e.tokens[t].start && tokens[t].end == e.tokens[t].end;
      }
      if (!aligned) {
        throw absa::ValidationError("review " + e.review_key +
                                    ": predicted token ranges differ from the corpus tokenization");
      }
      absa::TaggedSequence seq{std::move(tokens), e.tags};
      decoded.push_back({review.text, review.source_ids, absa::decode_bio(review.text, seq)});
      seqs.push_back(std::move(seq));
    }
    write_to(conll_path, [&](std::ostream& os) { absa::write_conll(os, seqs, ctx->header); });
    if (spans_path) {
      write_to(spans_path, [&](std::ostream& os) { absa::write_corpus(os, decoded, ctx->header); });
    }
  });
}

absa_status absa_ensemble_soe(absa_context* ctx, const char* const* pred_paths, size_t n_paths,
                              const char* tie_order, const char* out_path) {
  return guarded(ctx, [&] {
    if (n_paths == 0) throw absa::ArgumentError("at least one prediction file is required");
    require(pred_paths, "pred_paths");
    const auto order = parse_tie_order(tie_order);
    std::vector<absa::SoeModelPrediction> models;
    for (size_t i = 0; i < n_paths; ++i) {
      absa::InputFile in(require(pred_paths[i], "prediction path"));
      try {
        for (auto& m : absa::read_soe_predictions(in.stream())) models.push_back(std::move(m));
      } catch (const absa::ValidationError& e) {
        throw absa::ValidationError(in.path() + ": " + e.what());
      }
    }
    const auto decisions = absa::majority_vote(models, order, ctx->sink());
    absa::SoeModelPrediction out{"majority-vote", {}};
    for (const auto& d : decisions) out.votes.push_back({d.key, d.label});
    write_to(out_path, [&](std::ostream& os) { absa::write_soe_predictions(os, out, ctx->header); });
  });
}

// --- evaluation --------------------------------------------------------------

absa_status absa_eval_ate(absa_context* ctx, const char* gold_path, const char* pred_path,
                          char** report_json) {
  return guarded(ctx, [&] {
    require(report_json, "report_json");
    absa::InputFile g(require(gold_path, "gold_path"));
    const auto gold = absa::read_conll(g.stream());
    absa::InputFile p(require(pred_path, "pred_path"));
    const auto pred = absa::read_conll(p.stream());
    json report = {{"task", "ate"}};
    report.update(absa::metrics_to_json(absa::score_ate(gold, pred)));
    *report_json = copy_string(absa::to_line(report));
  });
}

absa_status absa_eval_soe(absa_context* ctx, const char* gold_path, const char* pred_path,
                          char** report_json) {
  return guarded(ctx, [&] {
    require(report_json, "report_json");
    const auto gold = read_soe_gold(require(gold_path, "gold_path"));
    absa::InputFile p(require(pred_path, "pred_path"));
    const auto models = absa::read_soe_predictions(p.stream());
    if (models.size() > 1) {
      throw absa::ValidationError(p.path() + " holds predictions of " +
                                  std::to_string(models.size()) +
                                  " models; ensemble them first");
    }
    std::map<absa::SoeKey, std::optional<absa::Polarity>> pred;
    if (!models.empty()) {
      for (const auto& v : models.front().votes) pred.emplace(v.key, v.label);
    }
    std::vector<absa::Polarity> g;
    std::vector<std::optional<absa::Polarity>> pr;
    std::size_t missing = 0;
    for (const auto& [key, label] : gold) {
      g.push_back(label);
      const auto it = pred.find(key);
      if (it == pred.end()) {
        ++missing;
        pr.push_back(std::nullopt);
      } else {
        pr.push_back(it->second);
      }
    }
    if (missing) {
      absa::emit(ctx->sink(), std::to_string(missing) +
                                  " gold aspect(s) have no prediction; counted as abstentions");
    }
    json report = {{"task", "soe"}, {"missing_predictions", missing}};
    report.update(absa::metrics_to_json(absa::score_soe(g, pr)));
    *report_json = copy_string(absa::to_line(report));
  });
}

absa_status absa_metrics_csv(absa_context* ctx, const char* run_name, const char* report_json,
                             char** csv_out) {
  return guarded(ctx, [&] {
    require(csv_out, "csv_out");
    const auto j = parse_json_arg(require(report_json, "report_json"), "report");
    absa::MetricsReport r;
    r.accuracy = j.at("accuracy").get<double>();
    r.precision_macro = j.at("precision_macro").get<double>();
    r.recall_macro = j.at("recall_macro").get<double>();
    r.f1_macro = j.at("f1_macro").get<double>();
    r.balanced_accuracy = j.at("balanced_accuracy").get<double>();
    for (const auto& [label, m] : j.at("per_class").items()) {
      r.per_class.push_back({label, m.at("precision").get<double>(), m.at("recall").get<double>(),
                             m.at("f1").get<double>(), m.at("support").get<std::size_t>()});
    }
    *csv_out = copy_string(absa::metrics_csv_header() + "\n" +
                           absa::metrics_csv_row(run_name ? run_name : "", r) + "\n");
  });
}

// --- validation --------------------------------------------------------------

absa_status absa_validate(absa_context* ctx, const char* kind, const char* path,
                          const absa_corpus* corpus, char** report_json, int* ok) {
  return guarded(ctx, [&] {
    const std::string k = require(kind, "kind");
    absa::RecordKind rk;
    if (k == "corpus") {
      rk = absa::RecordKind::Corpus;
    } else if (k == "ate") {
      rk = absa::RecordKind::Ate;
    } else if (k == "soe") {
      rk = absa::RecordKind::Soe;
    } else {
      throw absa::ArgumentError("unknown record kind '" + k + "'");
    }
    absa::InputFile in(require(path, "path"));
    const auto report = absa::validate_file(in.stream(), rk, corpus ? &corpus->reviews : nullptr);
    if (ok) *ok = report.ok() ? 1 : 0;
    if (report_json) *report_json = copy_string(absa::to_line(absa::validation_report_to_json(report)));
  });
}

// --- baselines ---------------------------------------------------------------

absa_status absa_tagger_train(absa_context* ctx, const absa_corpus* corpus, size_t epochs,
                              uint64_t seed, absa_tagger** out) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(out, "out");
    std::vector<absa::TaggedSequence> seqs;
    for (const auto& r : corpus->reviews) {
      seqs.push_back(absa::encode_bio(r, absa::tokenize(r.text),
                                      absa::AlignmentPolicy::WarnAndCover, ctx->sink()));
    }
    auto t = std::make_unique<absa_tagger>();
    t->model = absa::train_tagger(seqs, {epochs, seed});
    *out = t.release();
  });
}

absa_status absa_tagger_save(absa_context* ctx, const absa_tagger* model, const char* path) {
  return guarded(ctx, [&] {
    require(model, "model");
    write_to(path, [&](std::ostream& os) { os << absa::to_line(absa::tagger_to_json(model->model)) << '\n'; });
  });
}

absa_status absa_tagger_load(absa_context* ctx, const char* path, absa_tagger** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    absa::InputFile in(require(path, "path"));
    json j;
    try {
      j = json::parse(in.stream());
    } catch (const json::parse_error& e) {
      throw absa::ValidationError(in.path() + ": " + e.what());
    }
    auto t = std::make_unique<absa_tagger>();
    t->model = absa::tagger_from_json(j);
    *out = t.release();
  });
}

void absa_tagger_free(absa_tagger* model) { delete model; }

absa_status absa_tagger_predict(absa_context* ctx, const absa_tagger* model,
                                const absa_corpus* corpus, const char* model_id,
                                const char* path) {
  return guarded(ctx, [&] {
    require(model, "model");
    require(corpus, "corpus");
    const auto pred = absa::predict_corpus(model->model, model_id ? model_id : "perceptron",
                                           corpus->reviews, ctx->jobs);
    write_to(path, [&](std::ostream& os) { absa::write_ate_predictions(os, pred, ctx->header); });
  });
}

absa_status absa_polarity_train(absa_context* ctx, const absa_corpus* corpus, const char* format,
                                const char* mode, const char* separator, int bootstrap,
                                uint64_t seed, absa_polarity_model** out) {
  return guarded(ctx, [&] {
    require(corpus, "corpus");
    require(out, "out");
    const auto cfg = input_config(format, mode, separator);
    const auto examples = absa::build_examples(corpus->reviews, cfg);
    auto model = absa::train_soe(examples, {bootstrap != 0, seed});
    *out = new absa_polarity_model{std::move(model), cfg};
  });
}

absa_status absa_polarity_save(absa_context* ctx, const absa_polarity_model* model,
                               const char* path) {
  return guarded(ctx, [&] {
    require(model, "model");
    auto j = absa::bow_to_json(model->model);
    j["input"] = absa::soe_input_config_to_json(model->input);
    write_to(path, [&](std::ostream& os) { os << absa::to_line(j) << '\n'; });
  });
}

absa_status absa_polarity_load(absa_context* ctx, const char* path, absa_polarity_model** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    absa::InputFile in(require(path, "path"));
    json j;
    try {
      j = json::parse(in.stream());
    } catch (const json::parse_error& e) {
      throw absa::ValidationError(in.path() + ": " + e.what());
    }
    auto model = absa::bow_from_json(j);
    const auto cfg = absa::soe_input_config_from_json(j.value("input", json::object()));
    *out = new absa_polarity_model{std::move(model), cfg};
  });
}

void absa_polarity_free(absa_polarity_model* model) { delete model; }

absa_status absa_polarity_predict(absa_context* ctx, const absa_polarity_model* model,
                                  const absa_corpus* corpus, const char* model_id,
                                  const char* path) {
  return guarded(ctx, [&] {
    require(model, "model");
    require(corpus, "corpus");
    const auto examples = absa::build_examples(corpus->reviews, model->input);
    const auto pred = absa::predict_soe(model->model, model_id ? model_id : "bow", examples);
    write_to(path, [&](std::ostream& os) { absa::write_soe_predictions(os, pred, ctx->header); });
  });
}

}  // extern "C"
