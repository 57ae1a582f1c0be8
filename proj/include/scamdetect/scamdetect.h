/*
 * scamdetect: static detection of malicious smart contracts
 * Copyright 2026 The scamdetect Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#ifndef SCAMDETECT_SCAMDETECT_H
#define SCAMDETECT_SCAMDETECT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SCAMDETECT_BUILDING)
#define SD_API __declspec(dllexport)
#else
#define SD_API __declspec(dllimport)
#endif
#else
#define SD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status
{
    SD_OK = 0,
    SD_INVALID_ARGUMENT = 1,
    SD_ODD_LENGTH = 2,
    SD_NON_HEX_CHARACTER = 3,
    SD_EMPTY_STREAM = 4,
    SD_DIMENSION_MISMATCH = 5,
    SD_EMPTY_DATASET = 6,
    SD_SINGLE_CLASS_DATASET = 7,
    SD_UNRESOLVABLE_JUMPS = 8,
    SD_FIXPOINT_DIVERGENCE = 9,
    SD_UNSUPPORTED_OP = 10,
    SD_STACK_UNDERFLOW = 11,
    SD_MALFORMED_LINE = 12,
    SD_DUPLICATE_ADDRESS = 13,
    SD_IO_FAILURE = 14,
    SD_AUTH_ERROR = 15,
    SD_EMPTY_CODE = 16,
    SD_NETWORK_ERROR = 17,
    SD_MALFORMED_RESPONSE = 18,
    SD_EMPTY_CORPUS = 19,
    SD_EMPTY_SET = 20,
    SD_PRECONDITION_VIOLATED = 21,
    SD_EQUIVALENCE_FAILURE = 22,
    SD_INTERNAL_ERROR = 100
} sd_status;

typedef enum sd_cfg_format
{
    SD_CFG_DOT = 0,
    SD_CFG_JSON = 1
} sd_cfg_format;

/* Opaque handles. Each must be released with its matching _free function. */
typedef struct sd_corpus sd_corpus;
typedef struct sd_graphs sd_graphs;
typedef struct sd_model sd_model;

/* Message for the last failed call on this thread; empty after success. */
SD_API const char* sd_last_error(void);
SD_API const char* sd_status_name(sd_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
SD_API void sd_string_free(char* s);

/* Bytecode front end. */
SD_API sd_status sd_disasm_hex(const char* hex, char** out_listing);
SD_API sd_status sd_cfg_hex(const char* hex, sd_cfg_format format, char** out_text);
SD_API sd_status sd_obfuscate_hex(const char* hex, const char* passes, uint64_t seed,
    double intensity, char** out_hex);
/* out_json: {"verdict": ..., "vectors": ..., "unsupported_op": ...} */
SD_API sd_status sd_check_equivalence(const char* hex_a, const char* hex_b, size_t vectors,
    uint64_t seed, char** out_json);

/* Corpus of labelled contract records (JSONL). */
SD_API sd_status sd_corpus_load(const char* path, sd_corpus** out);
SD_API sd_status sd_corpus_save(const sd_corpus* corpus, const char* path);
SD_API sd_status sd_corpus_synth(size_t n_benign, size_t n_phishing, uint64_t seed,
    sd_corpus** out);
/* out_report_json may be NULL. */
SD_API sd_status sd_corpus_dedup(const sd_corpus* corpus, sd_corpus** out,
    char** out_report_json);
SD_API sd_status sd_corpus_split(sd_corpus* corpus, double train, double val, double test,
    uint64_t seed);
/* Copies the records whose split is `split` ("train", "val" or "test"). */
SD_API sd_status sd_corpus_select_split(const sd_corpus* corpus, const char* split,
    sd_corpus** out);
/* Nonzero when at least one record carries a split assignment. */
SD_API int sd_corpus_has_splits(const sd_corpus* corpus);
SD_API size_t sd_corpus_size(const sd_corpus* corpus);
SD_API void sd_corpus_free(sd_corpus* corpus);

/* Fetch deployed code for one address from an Etherscan-compatible endpoint. */
SD_API sd_status sd_fetch_code(const char* address, const char* endpoint, const char* api_key,
    char** out_hex);
/* Fetch a newline-separated address list. Failures are listed in out_errors_json
 * (may be NULL) and do not stop the run. label: "benign" or "phishing". */
SD_API sd_status sd_fetch_corpus(const char* addresses, const char* endpoint,
    const char* api_key, const char* label, double rate_limit, sd_corpus** out,
    char** out_errors_json);

/* Graph samples. out_errors_json (may be NULL) lists per-record failures. */
SD_API sd_status sd_featurize(const sd_corpus* corpus, sd_graphs** out, char** out_errors_json);
SD_API sd_status sd_graphs_load(const char* path, sd_graphs** out);
SD_API sd_status sd_graphs_save(const sd_graphs* graphs, const char* path);
SD_API sd_status sd_graphs_select_split(const sd_graphs* graphs, const char* split,
    sd_graphs** out);
SD_API int sd_graphs_has_splits(const sd_graphs* graphs);
SD_API size_t sd_graphs_size(const sd_graphs* graphs);
SD_API void sd_graphs_free(sd_graphs* graphs);

/* kind: "histogram", "gcn", "sage", "gin", "gat" or "tag". */
SD_API sd_status sd_train(const char* kind, const sd_graphs* graphs, size_t epochs,
    uint64_t seed, sd_model** out);
SD_API sd_status sd_model_load(const char* path, sd_model** out);
SD_API sd_status sd_model_save(const sd_model* model, const char* path);
SD_API sd_status sd_model_predict(const sd_model* model, const sd_graphs* graphs, size_t index,
    double* out_probability);
SD_API void sd_model_free(sd_model* model);

/* JSON metrics with sorted keys. */
SD_API sd_status sd_evaluate(const sd_model* model, const sd_graphs* graphs, char** out_json);
/* configs_json: [{"name", "passes", "seed", "intensity"}]. */
SD_API sd_status sd_robustness(const sd_model* model, const sd_model* baseline,
    const sd_corpus* test_records, const char* configs_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SCAMDETECT_SCAMDETECT_H */
