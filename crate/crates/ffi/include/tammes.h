#ifndef TAMMES_H
#define TAMMES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TammesStatus {
  TAMMES_STATUS_OK = 0,
  TAMMES_STATUS_NULL_POINTER = 1,
  TAMMES_STATUS_INVALID_ARGUMENT = 2,
  TAMMES_STATUS_PARSE_ERROR = 3,
  TAMMES_STATUS_NUMERICAL_FAILURE = 4,
  TAMMES_STATUS_BUFFER_TOO_SMALL = 5,
  TAMMES_STATUS_PANIC = 6,
} TammesStatus;

/**
 * A planar graph with its rotation system.
 */
typedef struct TammesGraph TammesGraph;

/**
 * Graphs decoded from a planar_code buffer.
 */
typedef struct TammesGraphSet TammesGraphSet;

/**
 * Outcome of a filter-and-prune run.
 */
typedef struct TammesReport TammesReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *tammes_status_message(enum TammesStatus status);

/**
 * Message of the last failed call on this thread.
 */
enum TammesStatus tammes_last_error(char *buf, size_t cap, size_t *needed);

/**
 * The optimal 13-point distance and the matching triangle angle, in radians.
 */
enum TammesStatus tammes_delta13(double *delta13, double *a13);

/**
 * Writes the 13 optimal points as `x y z` triples; `len` must be at least 39.
 */
enum TammesStatus tammes_p13_coords(double *out, size_t len);

/**
 * Corner angle of the equilateral triangle with side `d`.
 */
enum TammesStatus tammes_alpha(double d, double *out);

/**
 * Opposite angle of the equilateral rhombus with side `d` and angle `u`.
 */
enum TammesStatus tammes_rho(double u, double d, double *out);

/**
 * Decodes a planar_code buffer. An empty buffer gives an empty set.
 */
enum TammesStatus tammes_graphs_parse(const uint8_t *bytes,
                                      size_t len,
                                      struct TammesGraphSet **out);

enum TammesStatus tammes_graphs_len(const struct TammesGraphSet *set, size_t *out);

/**
 * A copy of graph `index`, owned by the caller.
 */
enum TammesStatus tammes_graphs_get(const struct TammesGraphSet *set,
                                    size_t index,
                                    struct TammesGraph **out);

void tammes_graphs_free(struct TammesGraphSet *set);

/**
 * Contact graph of `n` points given as `x y z` triples (`3 n` doubles),
 * joining pairs within `tol` of the minimal distance.
 */
enum TammesStatus tammes_contact_graph(const double *coords,
                                       size_t n,
                                       double tol,
                                       struct TammesGraph **out);

enum TammesStatus tammes_graph_counts(const struct TammesGraph *g, size_t *vertices, size_t *edges);

enum TammesStatus tammes_graph_isomorphic(const struct TammesGraph *a,
                                          const struct TammesGraph *b,
                                          bool *out);

void tammes_graph_free(struct TammesGraph *g);

/**
 * Filters and prunes a planar_code buffer. `depth == 0` keeps the default
 * depth; a window with `d_lo >= d_hi` (for instance both zero) keeps the
 * 13-point window, otherwise the filter and relaxations use `[d_lo, d_hi]`.
 */
enum TammesStatus tammes_prune(const uint8_t *bytes,
                               size_t len,
                               size_t depth,
                               double d_lo,
                               double d_hi,
                               struct TammesReport **out);

/**
 * Counts of parsed graphs and survivors.
 */
enum TammesStatus tammes_report_counts(const struct TammesReport *r,
                                       size_t *parsed,
                                       size_t *survived);

/**
 * Whether graph `index` (0-based input order) survived pruning.
 */
enum TammesStatus tammes_report_survived(const struct TammesReport *r, size_t index, bool *out);

/**
 * The JSON-lines report as a NUL-terminated string. With a null or short
 * buffer, `needed` receives the required size and `BUFFER_TOO_SMALL` is returned.
 */
enum TammesStatus tammes_report_json(const struct TammesReport *r,
                                     char *buf,
                                     size_t cap,
                                     size_t *needed);

void tammes_report_free(struct TammesReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAMMES_H */
