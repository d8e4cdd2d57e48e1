#ifndef WCLIQUE_H
#define WCLIQUE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes returned by every fallible function.
 */
typedef enum WcStatus {
  WC_STATUS_OK = 0,
  WC_STATUS_NULL_POINTER = 1,
  WC_STATUS_INVALID_UTF8 = 2,
  WC_STATUS_PARSE = 3,
  WC_STATUS_INVALID_CONFIG = 4,
  WC_STATUS_IO = 5,
  WC_STATUS_TOO_LARGE = 6,
  WC_STATUS_INVALID_ARGUMENT = 7,
  WC_STATUS_PANIC = 8,
} WcStatus;

/*
 Solver configuration.
 */
typedef struct WcConfig WcConfig;

/*
 Vertex-weighted undirected graph.
 */
typedef struct WcGraph WcGraph;

/*
 Outcome of one solver run.
 */
typedef struct WcResult WcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *wc_last_error_message(void);

/*
 Parses DIMACS text. With `explicit_weights` false every vertex i gets
 weight (i mod 200) + 1; otherwise `v` lines are honored.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_graph_from_dimacs(const char *text, bool explicit_weights, struct WcGraph **out);

/*
 Reads a DIMACS file.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_graph_from_file(const char *path, bool explicit_weights, struct WcGraph **out);

/*
 Builds a graph from `num_edges` 0-based vertex pairs stored flat in
 `edges`. `weights` may be NULL for the modular default weights.

 # Safety
 `edges` must point to `2 * num_edges` values (or be NULL when
 `num_edges` is 0); `weights`, if non-NULL, to `n` values.
 */
enum WcStatus wc_graph_from_edges(size_t n,
                                  const uint32_t *edges,
                                  size_t num_edges,
                                  const int64_t *weights,
                                  struct WcGraph **out);

/*
 # Safety
 `graph` must be NULL or a handle from a `wc_graph_*` constructor that
 has not been freed.
 */
void wc_graph_free(struct WcGraph *graph);

/*
 Number of vertices, 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t wc_graph_num_vertices(const struct WcGraph *graph);

/*
 Number of edges, 0 for NULL.

 # Safety
 `graph` must be NULL or a live handle.
 */
size_t wc_graph_num_edges(const struct WcGraph *graph);

/*
 Weight of vertex `v`, or 0 when out of range.

 # Safety
 `graph` must be NULL or a live handle.
 */
int64_t wc_graph_weight(const struct WcGraph *graph, uint32_t v);

/*
 Named parameter preset: default, bhoslib, dimacs_mann, dimacs_other,
 kes or ref.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_config_preset(const char *name, struct WcConfig **out);

/*
 Parses and validates a JSON configuration.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WcStatus wc_config_from_json(const char *json, struct WcConfig **out);

/*
 Sets one parameter from its textual value, e.g. ("tabu_tenure", "9").
 The configuration is validated when it is used by [`wc_solve`].

 # Safety
 `config` must be a live handle; `name` and `value` NUL-terminated.
 */
enum WcStatus wc_config_set(struct WcConfig *config, const char *name, const char *value);

/*
 JSON form of the configuration; release with [`wc_string_free`].
 Returns NULL for a NULL handle.

 # Safety
 `config` must be NULL or a live handle.
 */
char *wc_config_to_json(const struct WcConfig *config);

/*
 # Safety
 `config` must be NULL or a live handle.
 */
void wc_config_free(struct WcConfig *config);

/*
 # Safety
 `s` must be NULL or a string returned by this library.
 */
void wc_string_free(char *s);

/*
 Runs the local search. `max_steps` > 0 bounds the run by steps (and is
 reproducible); otherwise `cutoff_seconds` of thread CPU time applies.
 `target` > 0 stops the run as soon as that weight is reached.
 `config` may be NULL for the default configuration.

 # Safety
 `graph` must be a live handle, `config` NULL or live, `out` valid.
 */
enum WcStatus wc_solve(const struct WcGraph *graph,
                       const struct WcConfig *config,
                       uint64_t seed,
                       double cutoff_seconds,
                       uint64_t max_steps,
                       int64_t target,
                       struct WcResult **out);

/*
 Exact optimum for graphs of at most 64 vertices. The optimal clique is
 written to `clique` (capacity `cap`, may be NULL when `cap` is 0) and its
 size to `clique_len`.

 # Safety
 `graph` must be a live handle, `weight` and `clique_len` valid pointers,
 `clique` valid for `cap` writes.
 */
enum WcStatus wc_oracle(const struct WcGraph *graph,
                        int64_t *weight,
                        uint32_t *clique,
                        size_t cap,
                        size_t *clique_len);

/*
 # Safety
 `result` must be NULL or a live handle.
 */
int64_t wc_result_best_weight(const struct WcResult *result);

/*
 Time until the best clique was first found: thread CPU seconds, or
 moves when the run used `max_steps`.

 # Safety
 `result` must be NULL or a live handle.
 */
double wc_result_time_to_best(const struct WcResult *result);

/*
 Run length in the same unit as [`wc_result_time_to_best`].

 # Safety
 `result` must be NULL or a live handle.
 */
double wc_result_elapsed(const struct WcResult *result);

/*
 # Safety
 `result` must be NULL or a live handle.
 */
uint64_t wc_result_steps(const struct WcResult *result);

/*
 # Safety
 `result` must be NULL or a live handle.
 */
uint64_t wc_result_restarts(const struct WcResult *result);

/*
 # Safety
 `result` must be NULL or a live handle.
 */
size_t wc_result_clique_size(const struct WcResult *result);

/*
 Copies up to `cap` vertices of the best clique (sorted) into `buf` and
 returns the number copied.

 # Safety
 `result` must be NULL or a live handle; `buf` valid for `cap` writes.
 */
size_t wc_result_clique(const struct WcResult *result, uint32_t *buf, size_t cap);

/*
 # Safety
 `result` must be NULL or a live handle.
 */
void wc_result_free(struct WcResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCLIQUE_H */
