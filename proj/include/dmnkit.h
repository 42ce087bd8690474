#ifndef DMNKIT_H
#define DMNKIT_H

/* C interface to the dmnkit shared library.
 *
 * Conventions:
 *  - Every function returning dmnkit_status sets the thread-local message
 *    readable via dmnkit_last_error() on failure and clears it on success.
 *  - Strings returned through char** out-parameters are heap copies owned by
 *    the caller; release them with dmnkit_string_free. They are UTF-8 and
 *    NUL-terminated; JSON payloads are documented per function.
 *  - NULL is never a valid handle or required argument unless a parameter
 *    name says _or_null.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dmnkit_status {
    DMNKIT_OK = 0,
    DMNKIT_E_USAGE = 1,    /* caller misuse: bad arguments, null handles */
    DMNKIT_E_DATA = 2,     /* input violates the schema or model semantics */
    DMNKIT_E_IO = 3,       /* filesystem or network failure */
    DMNKIT_E_INTERNAL = 4  /* unexpected library failure */
} dmnkit_status;

/* Message for the most recent failing call on this thread. Empty string when
 * the last call succeeded. Valid until the next dmnkit call on this thread. */
const char* dmnkit_last_error(void);

void dmnkit_string_free(char* s);

/* An immutable decision graph. */
typedef struct dmnkit_graph dmnkit_graph;

/* Compact JSON document -> graph. Parsing alone; run validate separately. */
dmnkit_status dmnkit_graph_parse(const char* compact_json, dmnkit_graph** out);
dmnkit_status dmnkit_graph_from_file(const char* path, dmnkit_graph** out);
void dmnkit_graph_free(dmnkit_graph* g);

/* Canonical compact JSON (byte-deterministic). */
dmnkit_status dmnkit_graph_serialize(const dmnkit_graph* g, char** out_json);

/* {"ok": bool, "violations": [{"kind": "...", "detail": "..."}]} */
dmnkit_status dmnkit_graph_validate(const dmnkit_graph* g, char** out_json);

/* assignment_json maps input node ids to JSON scalars. strict != 0 fails on
 * missing assignments (the error message names the input id); otherwise
 * absent inputs read as null. Out:
 * {"output": <canonical literal>, "node_values": {id: literal},
 *  "violations": [{"node": id, "kind": "hit_policy"}]} */
dmnkit_status dmnkit_graph_execute(const dmnkit_graph* g, const char* assignment_json,
                                   int strict, char** out_json);

/* Identity-node elimination. Returns the simplified graph and a report:
 * {"removed": [...], "nodes_before": n, "nodes_after": n, "edges_before": n,
 *  "edges_after": n, "identity_fraction_decisions": x,
 *  "identity_fraction_all_nodes": x} */
dmnkit_status dmnkit_graph_simplify(const dmnkit_graph* g, dmnkit_graph** out_graph,
                                    char** out_report_json);

/* Descriptive metrics: {"nodes": n, "edges": n, ...} */
dmnkit_status dmnkit_graph_stats(const dmnkit_graph* g, char** out_json);

/* Normalized kernels in [0, 1]. Graphlet sampling beyond the exhaustive node
 * limit is seeded; pass 0 to keep the default seed. */
dmnkit_status dmnkit_sp_similarity(const dmnkit_graph* a, const dmnkit_graph* b,
                                   double* out_value);
dmnkit_status dmnkit_graphlet_similarity(const dmnkit_graph* a, const dmnkit_graph* b,
                                         unsigned long long seed, double* out_value);

/* Exhaustive test suite for the graph's inputs:
 * {"eligible": bool, "reason": "...", "case_count": n,
 *  "cases": [{input id: literal, ...}, ...]} (cases only when eligible) */
dmnkit_status dmnkit_graph_cases(const dmnkit_graph* g, char** out_json);

/* Outcome equivalence of candidate against gold over gold's exhaustive
 * cases. keywords_path_or_null overrides the built-in outcome keyword lists.
 * {"model_id": ..., "case_count": n, "agree_count": n, "rate": x,
 *  "candidate_valid": bool, "unmatched_candidate_inputs": [...],
 *  "input_mapping": {gold id: candidate id}} */
dmnkit_status dmnkit_graph_equivalence(const dmnkit_graph* gold,
                                       const dmnkit_graph* candidate,
                                       const char* keywords_path_or_null,
                                       char** out_json);

/* Pipelines over a corpus directory layout (models/, articles/, srl/).
 * Each writes its artifacts under an output directory and returns a JSON
 * summary. srl_dir_or_null may be NULL or empty when annotations are absent. */

/* Load and cross-link a corpus; write canonical model JSON into out_dir
 * (skipped when out_dir_or_null is NULL). Summary: {"models": n,
 * "articles": n, "errors": [...], "warnings": [...], "model_ids": [...]} */
dmnkit_status dmnkit_pipe_ingest(const char* model_dir, const char* article_dir,
                                 const char* srl_dir_or_null,
                                 const char* out_dir_or_null, char** out_json);

/* Corpus descriptive statistics, grouped by model type. Summary:
 * {"groups": {"Outcome": {"count": n, "metrics": [{"name": ..., "mean": x,
 *  "stddev": x}]}, ...}, "models": [{"id": ..., "metrics": {...}}]} */
dmnkit_status dmnkit_pipe_stats(const char* model_dir, const char* article_dir,
                                const char* srl_dir_or_null, char** out_json);

/* Run the generation experiment. options_json keys:
 *   model_dir, article_dir (required); srl_dir, prompts_dir, out_dir
 *   (required); conditions: ["Text", ...] (default all four); runs (default
 *   5); seed (default 1); concurrency (default 4); provider: "stub" or a
 *   provider-config path (default "stub").
 * Appends to <out_dir>/records.jsonl, resumable. Summary: {"total": n,
 * "completed": n, "skipped": n, "validity": {tag: n}} */
dmnkit_status dmnkit_pipe_generate(const char* options_json, char** out_json);

/* Evaluate run records against the gold corpus; writes evaluations.json
 * into out_dir. Summary: {"records": n, "parsed": n, "evaluated": n} */
dmnkit_status dmnkit_pipe_analyze(const char* records_path, const char* model_dir,
                                  const char* article_dir, const char* srl_dir_or_null,
                                  const char* out_dir, char** out_json);

/* Emit the CSV report set from records plus evaluations (evaluations_path may
 * be NULL to recompute). Summary: {"files": [...], "gaps": [...]} */
dmnkit_status dmnkit_pipe_report(const char* records_path,
                                 const char* evaluations_path_or_null,
                                 const char* model_dir, const char* article_dir,
                                 const char* srl_dir_or_null, const char* out_dir,
                                 char** out_json);

#ifdef __cplusplus
}
#endif

#endif
