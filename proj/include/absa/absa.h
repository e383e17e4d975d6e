/*
 * absakit C interface.
 *
 * Every function taking an absa_context reports failures through its return
 * status; absa_last_error() then holds a message. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * *_free function. Strings returned through char** are released with
 * absa_string_free().
 *
 * Paths may be "-" for standard input / output.
 */
#ifndef ABSA_ABSA_H_
#define ABSA_ABSA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ABSA_BUILDING_LIBRARY)
#define ABSA_API __attribute__((visibility("default")))
#else
#define ABSA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum absa_status {
  ABSA_OK = 0,
  ABSA_ERR_VALIDATION = 1, /* input data violates an invariant */
  ABSA_ERR_ARGUMENT = 2,   /* bad parameter value */
  ABSA_ERR_IO = 3,         /* file could not be read or written */
  ABSA_ERR_INTERNAL = 4
} absa_status;

typedef struct absa_context absa_context;
typedef struct absa_corpus absa_corpus;
typedef struct absa_tagger absa_tagger;
typedef struct absa_polarity_model absa_polarity_model;

typedef void (*absa_log_fn)(void* user, const char* message);

ABSA_API const char* absa_version(void);
ABSA_API const char* absa_status_name(absa_status status);

/* Context ---------------------------------------------------------------- */

ABSA_API absa_context* absa_context_new(void);
ABSA_API void absa_context_free(absa_context* ctx);
/* Message of the last failed call on this context ("" if none). */
ABSA_API const char* absa_last_error(const absa_context* ctx);
/* Receives warnings (skipped rows, alignment fixes, abstentions). */
ABSA_API void absa_set_log_callback(absa_context* ctx, absa_log_fn fn, void* user);
/* Worker threads for per-review work. Never changes output content. */
ABSA_API void absa_set_jobs(absa_context* ctx, unsigned jobs);
/* JSON object written as a leading "#..." line in every output file.
 * NULL disables the header. */
ABSA_API absa_status absa_set_header(absa_context* ctx, const char* json);
ABSA_API void absa_string_free(char* s);

/* Corpus ----------------------------------------------------------------- */

/* Reads a delimited row file and groups rows into reviews. options_json may
 * be NULL or an object with any of:
 *   "separator": "\t" | ",",  "columns": {"id","review","polarity","aspect",
 *   "start","end"},  "polarity_codes": {"negative","neutral","positive"},
 *   "end_inclusive": bool,  "on_invalid": "reject" | "skip",
 *   "overlaps": "reject" | "keep-longer" */
ABSA_API absa_status absa_corpus_from_rows(absa_context* ctx, const char* path,
                                           const char* options_json, absa_corpus** out);
/* Reads corpus JSON lines. */
ABSA_API absa_status absa_corpus_load(absa_context* ctx, const char* path, absa_corpus** out);
ABSA_API absa_status absa_corpus_save(absa_context* ctx, const absa_corpus* corpus,
                                      const char* path);
ABSA_API size_t absa_corpus_size(const absa_corpus* corpus);
ABSA_API size_t absa_corpus_span_count(const absa_corpus* corpus);
ABSA_API void absa_corpus_free(absa_corpus* corpus);

ABSA_API absa_status absa_corpus_stats(absa_context* ctx, const absa_corpus* corpus,
                                       size_t top_k, char** json_out);
/* BIO export, one "token\ttag" line per token. */
ABSA_API absa_status absa_corpus_write_conll(absa_context* ctx, const absa_corpus* corpus,
                                             int strict_alignment, const char* path);

/* Splits ----------------------------------------------------------------- */

/* strategy: "random" | "polarity" | "polarity-aspect". */
ABSA_API absa_status absa_split(absa_context* ctx, const absa_corpus* corpus,
                                const char* strategy, double train_fraction, uint64_t seed,
                                absa_corpus** train, absa_corpus** test, char** report_json);

/* Augmentation ----------------------------------------------------------- */

ABSA_API absa_status absa_infer_categories(absa_context* ctx, const absa_corpus* corpus,
                                           size_t k, uint64_t seed, size_t window,
                                           char** map_json);
/* map_json: {"category id": ["term", ...], ...}. The output corpus holds one
 * review per generated variant. */
ABSA_API absa_status absa_target_swap(absa_context* ctx, const absa_corpus* corpus,
                                      const char* map_json, size_t per_example, uint64_t seed,
                                      absa_corpus** out);

/* Sentiment orientation inputs ------------------------------------------- */

/* format: "prompt" | "pair"; mode: "full" | "sentence"; separator may be
 * NULL for "[SEP]". Writes one example per aspect as JSON lines. */
ABSA_API absa_status absa_soe_export(absa_context* ctx, const absa_corpus* corpus,
                                     const char* format, const char* mode,
                                     const char* separator, const char* path);
/* *label_out receives a static string: "positive", "negative", "neutral"
 * or "abstain". */
ABSA_API absa_status absa_parse_completion(absa_context* ctx, const char* text,
                                           const char** label_out);

/* Ensembles -------------------------------------------------------------- */

/* Median of label probabilities over ATE prediction files (one model per
 * file or several models per file). Writes the tagged corpus as CoNLL and,
 * if spans_path is non-NULL, the decoded spans as corpus JSON. The corpus
 * supplies the token text. */
ABSA_API absa_status absa_ensemble_ate(absa_context* ctx, const char* const* pred_paths,
                                       size_t n_paths, const absa_corpus* corpus,
                                       const char* conll_path, const char* spans_path);
/* Majority vote over SOE prediction files. tie_order: comma-separated
 * polarity names, earlier wins; NULL for "positive,negative,neutral". */
ABSA_API absa_status absa_ensemble_soe(absa_context* ctx, const char* const* pred_paths,
                                       size_t n_paths, const char* tie_order,
                                       const char* out_path);

/* Evaluation ------------------------------------------------------------- */

/* Gold and predictions as CoNLL BIO files. */
ABSA_API absa_status absa_eval_ate(absa_context* ctx, const char* gold_path,
                                   const char* pred_path, char** report_json);
/* Gold: corpus JSON, SOE example export (with "gold") or SOE predictions.
 * Predictions: SOE prediction lines. Missing predictions count as
 * abstentions. */
ABSA_API absa_status absa_eval_soe(absa_context* ctx, const char* gold_path,
                                   const char* pred_path, char** report_json);
/* CSV row for a report produced by absa_eval_*. */
ABSA_API absa_status absa_metrics_csv(absa_context* ctx, const char* run_name,
                                      const char* report_json, char** csv_out);

/* Validation ------------------------------------------------------------- */

/* kind: "corpus" | "ate" | "soe". corpus may be NULL; for "ate" it enables
 * the token alignment check. *ok is 1 when no errors were found. */
ABSA_API absa_status absa_validate(absa_context* ctx, const char* kind, const char* path,
                                   const absa_corpus* corpus, char** report_json, int* ok);

/* Baseline models -------------------------------------------------------- */

ABSA_API absa_status absa_tagger_train(absa_context* ctx, const absa_corpus* corpus,
                                       size_t epochs, uint64_t seed, absa_tagger** out);
ABSA_API absa_status absa_tagger_save(absa_context* ctx, const absa_tagger* model,
                                      const char* path);
ABSA_API absa_status absa_tagger_load(absa_context* ctx, const char* path, absa_tagger** out);
ABSA_API void absa_tagger_free(absa_tagger* model);
/* Writes ATE prediction lines for every review. */
ABSA_API absa_status absa_tagger_predict(absa_context* ctx, const absa_tagger* model,
                                         const absa_corpus* corpus, const char* model_id,
                                         const char* path);

/* Input text is built as in absa_soe_export and stored with the model. */
ABSA_API absa_status absa_polarity_train(absa_context* ctx, const absa_corpus* corpus,
                                         const char* format, const char* mode,
                                         const char* separator, int bootstrap, uint64_t seed,
                                         absa_polarity_model** out);
ABSA_API absa_status absa_polarity_save(absa_context* ctx, const absa_polarity_model* model,
                                        const char* path);
ABSA_API absa_status absa_polarity_load(absa_context* ctx, const char* path,
                                        absa_polarity_model** out);
ABSA_API void absa_polarity_free(absa_polarity_model* model);
/* Writes SOE prediction lines for every aspect of the corpus. */
ABSA_API absa_status absa_polarity_predict(absa_context* ctx, const absa_polarity_model* model,
                                           const absa_corpus* corpus, const char* model_id,
                                           const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ABSA_ABSA_H_ */
