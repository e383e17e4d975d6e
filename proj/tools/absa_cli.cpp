// absa: command-line front end over the C interface.

#include <absa/absa.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised when a library call fails; carries the status for the exit code.
struct Failure {
  absa_status status;
  std::string message;
};

struct Context {
  absa_context* ctx = absa_context_new();
  ~Context() { absa_context_free(ctx); }
};

void check(absa_context* ctx, absa_status status) {
  if (status != ABSA_OK) throw Failure{status, absa_last_error(ctx)};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  absa_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};
using Corpus = Handle<absa_corpus, absa_corpus_free>;
using Tagger = Handle<absa_tagger, absa_tagger_free>;
using PolarityModel = Handle<absa_polarity_model, absa_polarity_free>;

std::string env_name(const std::string& option) {
  std::string name = "ABSA_";
  for (char c : option) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

// JSON config files. Objects nest into subcommands:
//   {"seed": 3, "split": {"fraction": 0.8}, "augment": {"target-swap": {...}}}
// Path keys whose environment variable is set are dropped, so the
// precedence is flag > environment > config file > default.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const std::set<std::string>* path_options) : paths_(path_options) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json root;
    try {
      root = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(root, {}, items);
    return items;
  }

 private:
  void collect(const json& obj, const std::vector<std::string>& parents,
               std::vector<CLI::ConfigItem>& items) const {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      if (paths_->count(key) && std::getenv(env_name(key).c_str())) continue;
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  const std::set<std::string>* paths_;
};

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool quiet = false;
  bool no_header = false;
};

void log_to_stderr(void* user, const char* message) {
  if (!static_cast<Globals*>(user)->quiet) std::cerr << "absa: warning: " << message << '\n';
}

// Run configuration recorded in output headers: every option of the invoked
// command chain with its effective value. The worker count is left out since
// it never changes output.
// Option values arrive as strings; numbers are recorded as numbers.
json typed(const std::string& value) {
  const auto parsed = json::parse(value, nullptr, false);
  return parsed.is_number() ? parsed : json(value);
}

json run_config(const CLI::App& app, const Globals& globals) {
  json cfg = {{"tool", "absa"}, {"version", absa_version()}, {"seed", globals.seed}};
  std::vector<std::string> command;
  json options = json::object();
  const CLI::App* level = &app;
  while (true) {
    const auto subs = level->get_subcommands();
    if (subs.empty()) break;
    level = subs.front();
    command.push_back(level->get_name());
    for (const CLI::Option* opt : level->get_options()) {
      const auto name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      if (opt->get_expected_min() == 0) {
        options[name] = opt->count() > 0 && opt->as<bool>();
      } else if (opt->get_expected_max() > 1) {
        json values = json::array();
        for (const auto& v : opt->results()) values.push_back(typed(v));
        options[name] = values;
      } else if (opt->count() > 0) {
        options[name] = typed(opt->results().front());
      } else {
        options[name] = typed(opt->get_default_str());
      }
    }
  }
  cfg["command"] = command;
  cfg["options"] = options;
  return cfg;
}

// Writes a header line (unless disabled) and the given lines.
void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& lines) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw Failure{ABSA_ERR_IO, "cannot open '" + path + "' for writing"};
    out = &file;
  }
  if (!header.empty()) *out << '#' << header << '\n';
  for (const auto& l : lines) *out << l << '\n';
  out->flush();
  if (!*out) throw Failure{ABSA_ERR_IO, "write to '" + path + "' failed"};
}

// Concatenates the non-comment lines of a JSON file.
std::string read_json_text(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Failure{ABSA_ERR_IO, "cannot open '" + path + "'"};
  std::string text, line;
  while (std::getline(file, line)) {
    if (!line.empty() && line[0] == '#') continue;
    text += line;
    text += '\n';
  }
  return text;
}

std::string separator_value(const std::string& s) {
  if (s == "tab" || s == "\\t") return "\t";
  if (s == "comma") return ",";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aspect-based sentiment analysis toolkit"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(absa_version()));

  std::set<std::string> path_options;
  app.config_formatter(std::make_shared<JsonConfig>(&path_options));
  app.set_config("--config", "", "JSON config file; flags override its values");

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--jobs", g.jobs, "Worker threads (output does not depend on it)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("-q,--quiet", g.quiet, "Suppress warnings");
  app.add_flag("--no-header", g.no_header, "Omit the '#' run configuration line from outputs");

  // Path options: overridable through ABSA_<NAME> environment variables.
  auto path = [&](CLI::App* sub, const std::string& name, std::string& target,
                  const std::string& help, bool required) {
    path_options.insert(name);
    auto* opt = sub->add_option("--" + name, target, help)->envname(env_name(name));
    if (required) opt->required();
    return opt;
  };

  // convert
  auto* convert = app.add_subcommand("convert", "Delimited rows to corpus JSON lines");
  std::string conv_in, conv_out = "-", conv_sep = "tab", conv_codes = "-1,0,1";
  std::string conv_on_invalid = "reject", conv_overlaps = "reject";
  std::string col_id = "id", col_review = "review", col_polarity = "polarity",
              col_aspect = "aspect", col_start = "start_position", col_end = "end_position";
  bool conv_end_inclusive = false;
  path(convert, "in", conv_in, "Row file", true);
  path(convert, "out", conv_out, "Corpus output", false);
  convert->add_option("--sep", conv_sep, "Field separator: tab, comma or one character");
  convert->add_option("--codes", conv_codes, "Integer codes for negative,neutral,positive");
  convert->add_flag("--end-inclusive", conv_end_inclusive, "End offsets point at the last character");
  convert->add_option("--on-invalid", conv_on_invalid, "reject or skip rows with bad spans")
      ->check(CLI::IsMember({"reject", "skip"}));
  convert->add_option("--overlaps", conv_overlaps, "reject or keep-longer")
      ->check(CLI::IsMember({"reject", "keep-longer"}));
  convert->add_option("--id-column", col_id);
  convert->add_option("--review-column", col_review);
  convert->add_option("--polarity-column", col_polarity);
  convert->add_option("--aspect-column", col_aspect);
  convert->add_option("--start-column", col_start);
  convert->add_option("--end-column", col_end);

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  std::string stats_in, stats_out = "-";
  std::size_t stats_top_k = 15;
  path(stats, "in", stats_in, "Corpus", true);
  path(stats, "out", stats_out, "Report output", false);
  stats->add_option("--top-k", stats_top_k, "Aspects counted in the top-k share");

  // tag
  auto* tag = app.add_subcommand("tag", "Corpus to CoNLL BIO tags");
  std::string tag_in, tag_out = "-";
  bool tag_strict = false;
  path(tag, "in", tag_in, "Corpus", true);
  path(tag, "out", tag_out, "CoNLL output", false);
  tag->add_flag("--strict", tag_strict, "Fail on spans that cut through a token");

  // split
  auto* split = app.add_subcommand("split", "Train/test split of whole reviews");
  std::string split_in, split_train, split_test, split_report = "-", split_strategy = "polarity";
  double split_fraction = 0.7;
  path(split, "in", split_in, "Corpus", true);
  path(split, "train-out", split_train, "Train corpus output", true);
  path(split, "test-out", split_test, "Test corpus output", true);
  path(split, "report-out", split_report, "Stratification report output", false);
  split->add_option("--fraction", split_fraction, "Train fraction in (0, 1)");
  split->add_option("--strategy", split_strategy, "random, polarity or polarity-aspect")
      ->check(CLI::IsMember({"random", "polarity", "polarity-aspect"}));

  // augment
  auto* augment = app.add_subcommand("augment", "Aspect categories and target swapping");
  augment->require_subcommand(1);
  auto* infer = augment->add_subcommand("infer-categories", "Cluster aspects into categories");
  std::string infer_in, infer_out = "-";
  std::size_t infer_k = 10, infer_window = 5;
  path(infer, "in", infer_in, "Corpus", true);
  path(infer, "out", infer_out, "Category map output", false);
  infer->add_option("--k", infer_k, "Number of categories");
  infer->add_option("--window", infer_window, "Context window in tokens");
  auto* swap = augment->add_subcommand("target-swap", "Swap aspect terms within categories");
  std::string swap_in, swap_map, swap_out = "-";
  std::size_t swap_per_example = 1;
  path(swap, "in", swap_in, "Corpus", true);
  path(swap, "categories", swap_map, "Category map (JSON)", true);
  path(swap, "out", swap_out, "Augmented corpus output", false);
  swap->add_option("--per-example", swap_per_example, "Variants per aspect");

  // prompt
  auto* prompt = app.add_subcommand("prompt", "Sentiment orientation inputs per aspect");
  std::string prompt_in, prompt_out = "-", prompt_format = "prompt", prompt_context = "full",
                         prompt_sep = "[SEP]";
  path(prompt, "in", prompt_in, "Corpus", true);
  path(prompt, "out", prompt_out, "Examples output", false);
  prompt->add_option("--format", prompt_format, "prompt or pair")
      ->check(CLI::IsMember({"prompt", "pair"}));
  prompt->add_option("--context", prompt_context, "full review or the aspect's sentence")
      ->check(CLI::IsMember({"full", "sentence"}));
  prompt->add_option("--separator", prompt_sep, "Separator for pair inputs");

  // ensemble
  auto* ensemble = app.add_subcommand("ensemble", "Combine model predictions");
  ensemble->require_subcommand(1);
  auto* ens_ate = ensemble->add_subcommand("ate", "Median of token label probabilities");
  std::vector<std::string> ate_preds;
  std::string ate_corpus, ate_out = "-", ate_spans;
  ens_ate->add_option("--pred", ate_preds, "ATE prediction files")->required()->expected(1, -1);
  path(ens_ate, "corpus", ate_corpus, "Corpus supplying the token text", true);
  path(ens_ate, "out", ate_out, "CoNLL output", false);
  path(ens_ate, "spans-out", ate_spans, "Decoded spans as corpus JSON", false);
  auto* ens_soe = ensemble->add_subcommand("soe", "Majority vote over polarity labels");
  std::vector<std::string> soe_preds;
  std::string soe_out = "-", soe_ties = "positive,negative,neutral";
  ens_soe->add_option("--pred", soe_preds, "SOE prediction files")->required()->expected(1, -1);
  path(ens_soe, "out", soe_out, "Voted predictions output", false);
  ens_soe->add_option("--tie-order", soe_ties, "Tie-break order, earlier wins");

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->require_subcommand(1);
  std::string eval_gold, eval_pred, eval_out = "-", eval_csv, eval_run = "run";
  auto add_eval = [&](const std::string& name, const std::string& help) {
    auto* sub = eval->add_subcommand(name, help);
    path(sub, "gold", eval_gold, "Gold file", true);
    path(sub, "pred", eval_pred, "Prediction file", true);
    path(sub, "out", eval_out, "Report output", false);
    path(sub, "csv", eval_csv, "Also write a one-row CSV", false);
    sub->add_option("--run", eval_run, "Run name for the CSV row");
    return sub;
  };
  auto* eval_ate = add_eval("ate", "Token-level BIO scoring of CoNLL files");
  auto* eval_soe = add_eval("soe", "Polarity scoring; missing predictions count as abstentions");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Reference models");
  baseline->require_subcommand(1);
  std::string base_task = "ate", base_in, base_model, base_out = "-", base_model_id = "baseline";
  std::string base_format = "prompt", base_context = "full", base_sep = "[SEP]";
  std::size_t base_epochs = 5;
  bool base_bootstrap = false;
  auto* train = baseline->add_subcommand("train", "Train a baseline");
  train->add_option("--task", base_task, "ate or soe")->check(CLI::IsMember({"ate", "soe"}));
  path(train, "in", base_in, "Training corpus", true);
  path(train, "model", base_model, "Model output", true);
  train->add_option("--epochs", base_epochs, "Perceptron epochs (ate)");
  train->add_option("--format", base_format, "Input format (soe)")
      ->check(CLI::IsMember({"prompt", "pair"}));
  train->add_option("--context", base_context, "Input context (soe)")
      ->check(CLI::IsMember({"full", "sentence"}));
  train->add_option("--separator", base_sep, "Separator for pair inputs (soe)");
  train->add_flag("--bootstrap", base_bootstrap, "Train on a seeded bootstrap resample (soe)");
  auto* predict = baseline->add_subcommand("predict", "Write interchange predictions");
  predict->add_option("--task", base_task, "ate or soe")->check(CLI::IsMember({"ate", "soe"}));
  path(predict, "model", base_model, "Trained model", true);
  path(predict, "in", base_in, "Corpus to predict", true);
  path(predict, "out", base_out, "Prediction output", false);
  predict->add_option("--model-id", base_model_id, "model_id written in each record");

  // validate
  auto* validate = app.add_subcommand("validate", "Schema check of corpus or prediction files");
  std::string val_kind = "corpus", val_in, val_corpus, val_out = "-";
  validate->add_option("--kind", val_kind, "corpus, ate or soe")
      ->check(CLI::IsMember({"corpus", "ate", "soe"}));
  path(validate, "in", val_in, "File to check", true);
  path(validate, "corpus", val_corpus, "Corpus for the ATE alignment check", false);
  path(validate, "out", val_out, "Report output", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  Context c;
  absa_context* ctx = c.ctx;
  absa_set_log_callback(ctx, log_to_stderr, &g);
  absa_set_jobs(ctx, g.jobs);
  const std::string header = g.no_header ? "" : run_config(app, g).dump();
  check(ctx, absa_set_header(ctx, g.no_header ? nullptr : header.c_str()));

  auto load = [&](const std::string& p, Corpus& out) { check(ctx, absa_corpus_load(ctx, p.c_str(), &out.ptr)); };

  try {
    if (*convert) {
      int codes[3];
      char comma1 = 0, comma2 = 0;
      std::istringstream cs(conv_codes);
      if (!(cs >> codes[0] >> comma1 >> codes[1] >> comma2 >> codes[2]) || comma1 != ',' ||
          comma2 != ',') {
        throw Failure{ABSA_ERR_ARGUMENT, "--codes expects three integers such as -1,0,1"};
      }
      const json opts = {
          {"separator", separator_value(conv_sep)},
          {"columns",
           {{"id", col_id}, {"review", col_review}, {"polarity", col_polarity},
            {"aspect", col_aspect}, {"start", col_start}, {"end", col_end}}},
          {"polarity_codes", {{"negative", codes[0]}, {"neutral", codes[1]}, {"positive", codes[2]}}},
          {"end_inclusive", conv_end_inclusive},
          {"on_invalid", conv_on_invalid},
          {"overlaps", conv_overlaps}};
      Corpus corpus;
      check(ctx, absa_corpus_from_rows(ctx, conv_in.c_str(), opts.dump().c_str(), &corpus.ptr));
      check(ctx, absa_corpus_save(ctx, corpus.ptr, conv_out.c_str()));
      if (!g.quiet) {
        std::cerr << "absa: " << absa_corpus_size(corpus.ptr) << " reviews, "
                  << absa_corpus_span_count(corpus.ptr) << " aspects\n";
      }
    } else if (*stats) {
      Corpus corpus;
      load(stats_in, corpus);
      char* out = nullptr;
      check(ctx, absa_corpus_stats(ctx, corpus.ptr, stats_top_k, &out));
      write_lines(stats_out, header, {take(out)});
    } else if (*tag) {
      Corpus corpus;
      load(tag_in, corpus);
      check(ctx, absa_corpus_write_conll(ctx, corpus.ptr, tag_strict ? 1 : 0, tag_out.c_str()));
    } else if (*split) {
      Corpus corpus, tr, te;
      load(split_in, corpus);
      char* report = nullptr;
      check(ctx, absa_split(ctx, corpus.ptr, split_strategy.c_str(), split_fraction, g.seed,
                            &tr.ptr, &te.ptr, &report));
      const auto report_text = take(report);
      check(ctx, absa_corpus_save(ctx, tr.ptr, split_train.c_str()));
      check(ctx, absa_corpus_save(ctx, te.ptr, split_test.c_str()));
      write_lines(split_report, header, {report_text});
    } else if (*infer) {
      Corpus corpus;
      load(infer_in, corpus);
      char* map = nullptr;
      check(ctx, absa_infer_categories(ctx, corpus.ptr, infer_k, g.seed, infer_window, &map));
      write_lines(infer_out, header, {take(map)});
    } else if (*swap) {
      Corpus corpus, out;
      load(swap_in, corpus);
      const auto map = read_json_text(swap_map);
      check(ctx, absa_target_swap(ctx, corpus.ptr, map.c_str(), swap_per_example, g.seed, &out.ptr));
      check(ctx, absa_corpus_save(ctx, out.ptr, swap_out.c_str()));
    } else if (*prompt) {
      Corpus corpus;
      load(prompt_in, corpus);
      check(ctx, absa_soe_export(ctx, corpus.ptr, prompt_format.c_str(), prompt_context.c_str(),
                                 prompt_sep.c_str(), prompt_out.c_str()));
    } else if (*ens_ate) {
      Corpus corpus;
      load(ate_corpus, corpus);
      std::vector<const char*> paths;
      for (const auto& p : ate_preds) paths.push_back(p.c_str());
      check(ctx, absa_ensemble_ate(ctx, paths.data(), paths.size(), corpus.ptr, ate_out.c_str(),
                                   ate_spans.empty() ? nullptr : ate_spans.c_str()));
    } else if (*ens_soe) {
      std::vector<const char*> paths;
      for (const auto& p : soe_preds) paths.push_back(p.c_str());
      check(ctx, absa_ensemble_soe(ctx, paths.data(), paths.size(), soe_ties.c_str(),
                                   soe_out.c_str()));
    } else if (*eval_ate || *eval_soe) {
      char* report = nullptr;
      if (*eval_ate) {
        check(ctx, absa_eval_ate(ctx, eval_gold.c_str(), eval_pred.c_str(), &report));
      } else {
        check(ctx, absa_eval_soe(ctx, eval_gold.c_str(), eval_pred.c_str(), &report));
      }
      const auto report_text = take(report);
      write_lines(eval_out, header, {report_text});
      if (!eval_csv.empty()) {
        char* csv = nullptr;
        check(ctx, absa_metrics_csv(ctx, eval_run.c_str(), report_text.c_str(), &csv));
        auto csv_text = take(csv);
        while (!csv_text.empty() && csv_text.back() == '\n') csv_text.pop_back();
        write_lines(eval_csv, header, {csv_text});
      }
    } else if (*train) {
      Corpus corpus;
      load(base_in, corpus);
      if (base_task == "ate") {
        Tagger model;
        check(ctx, absa_tagger_train(ctx, corpus.ptr, base_epochs, g.seed, &model.ptr));
        check(ctx, absa_tagger_save(ctx, model.ptr, base_model.c_str()));
      } else {
        PolarityModel model;
        check(ctx, absa_polarity_train(ctx, corpus.ptr, base_format.c_str(), base_context.c_str(),
                                       base_sep.c_str(), base_bootstrap ? 1 : 0, g.seed,
                                       &model.ptr));
        check(ctx, absa_polarity_save(ctx, model.ptr, base_model.c_str()));
      }
    } else if (*predict) {
      Corpus corpus;
      load(base_in, corpus);
      if (base_task == "ate") {
        Tagger model;
        check(ctx, absa_tagger_load(ctx, base_model.c_str(), &model.ptr));
        check(ctx, absa_tagger_predict(ctx, model.ptr, corpus.ptr, base_model_id.c_str(),
                                       base_out.c_str()));
      } else {
        PolarityModel model;
        check(ctx, absa_polarity_load(ctx, base_model.c_str(), &model.ptr));
        check(ctx, absa_polarity_predict(ctx, model.ptr, corpus.ptr, base_model_id.c_str(),
                                         base_out.c_str()));
      }
    } else if (*validate) {
      Corpus corpus;
      if (!val_corpus.empty()) load(val_corpus, corpus);
      char* report = nullptr;
      int ok = 0;
      check(ctx, absa_validate(ctx, val_kind.c_str(), val_in.c_str(), corpus.ptr, &report, &ok));
      write_lines(val_out, header, {take(report)});
      if (!ok) {
        std::cerr << "absa: validation failed for '" << val_in << "'\n";
        return kExitFailure;
      }
    }
  } catch (const Failure& f) {
    std::cerr << "absa: error: " << f.message << '\n';
    return f.status == ABSA_ERR_ARGUMENT ? kExitUsage : kExitFailure;
  }
  return 0;
}
