#ifndef NEXCOVER_H
#define NEXCOVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_ARGUMENT = 2,
  NC_STATUS_OUT_OF_RANGE = 3,
  NC_STATUS_INVALID_GRAPH = 4,
  NC_STATUS_GENERATION_FAILED = 5,
  NC_STATUS_SOLVER_FAILURE = 6,
  NC_STATUS_BUFFER_TOO_SMALL = 7,
  NC_STATUS_IO = 8,
  NC_STATUS_PANIC = 9,
  NC_STATUS_PARSE = 10,
} NcStatus;

typedef enum NcFamily {
  NC_FAMILY_TREE = 0,
  NC_FAMILY_ERDOS_RENYI = 1,
  NC_FAMILY_BARABASI_ALBERT = 2,
  NC_FAMILY_INTERNET_AS = 3,
} NcFamily;

typedef enum NcCostProfile {
  /**
   * `1 / (deg^2 ln(1 + betweenness + eps))`
   */
  NC_COST_PROFILE_CENTRALITY = 0,
  /**
   * `1 / deg^2`
   */
  NC_COST_PROFILE_DEGREE = 1,
} NcCostProfile;

/**
 * Opaque undirected graph.
 */
typedef struct NcGraph NcGraph;

/**
 * Opaque result of a selection.
 */
typedef struct NcSelection NcSelection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *nc_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *nc_version(void);

/**
 * Creates a graph with `n >= 1` isolated nodes.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum NcStatus nc_graph_new(size_t n, struct NcGraph **out);

/**
 * Adds the undirected edge `{u, v}`. Self-loops and duplicates are errors.
 *
 * # Safety
 * `g` must be a live handle from this library.
 */
enum NcStatus nc_graph_add_edge(struct NcGraph *g, size_t u, size_t v);

/**
 * Draws a connected random graph with the default parameters of `family`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum NcStatus nc_graph_generate(enum NcFamily family,
                                size_t n,
                                uint64_t seed,
                                struct NcGraph **out);

/**
 * Parses the text edge-list format (`n <count>` then `u v` lines).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` as for [`nc_graph_new`].
 */
enum NcStatus nc_graph_from_edge_list(const char *text, struct NcGraph **out);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t nc_graph_node_count(const struct NcGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t nc_graph_edge_count(const struct NcGraph *g);

/**
 * Releases a graph. Null is a no-op.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void nc_graph_free(struct NcGraph *g);

/**
 * Writes unnormalised betweenness centrality into `out[0..n]`.
 *
 * # Safety
 * `g` must be a live handle and `out` must hold `len` doubles.
 */
enum NcStatus nc_betweenness(const struct NcGraph *g, double *out, size_t len);

/**
 * Solves the LP relaxation for `profile` costs, thresholds at `delta` and
 * repairs to a full cover.
 *
 * # Safety
 * `g` must be a live handle; `out` as for [`nc_graph_new`].
 */
enum NcStatus nc_select(const struct NcGraph *g,
                        enum NcCostProfile profile,
                        double delta,
                        struct NcSelection **out);

/**
 * [`nc_select`] with centrality costs.
 *
 * # Safety
 * As for [`nc_select`].
 */
enum NcStatus nc_select_static(const struct NcGraph *g, double delta, struct NcSelection **out);

/**
 * Number of selected nodes, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t nc_selection_len(const struct NcSelection *s);

/**
 * Copies the sorted selected ids into `out[0..len(s)]`.
 *
 * # Safety
 * `s` must be a live handle and `out` must hold `len` entries.
 */
enum NcStatus nc_selection_nodes(const struct NcSelection *s, size_t *out, size_t len);

/**
 * Copies the fractional LP solution into `out[0..n]`.
 *
 * # Safety
 * `s` must be a live handle and `out` must hold `len` doubles.
 */
enum NcStatus nc_selection_fractional(const struct NcSelection *s, double *out, size_t len);

/**
 * Total cost of the selected set; NaN for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
double nc_selection_total_cost(const struct NcSelection *s);

/**
 * Optimal LP objective; NaN for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
double nc_selection_objective(const struct NcSelection *s);

/**
 * Whether the selection covers every node; false for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
bool nc_selection_feasible(const struct NcSelection *s);

/**
 * Releases a selection. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void nc_selection_free(struct NcSelection *s);

/**
 * Checks whether `nodes[0..len]` dominates `g`, writing the answer to `out`.
 *
 * # Safety
 * `g` must be a live handle, `nodes` must hold `len` ids (or be null with
 * `len == 0`) and `out` must be writable.
 */
enum NcStatus nc_verify_cover(const struct NcGraph *g, const size_t *nodes, size_t len, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEXCOVER_H */
