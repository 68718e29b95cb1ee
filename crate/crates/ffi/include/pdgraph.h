#ifndef PDGRAPH_H
#define PDGRAPH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_ARGUMENT = 2,
  PD_STATUS_SEED_GRAPH = 3,
  PD_STATUS_NUMERICAL = 4,
  /**
   * The quantity is undefined for this input (e.g. transitivity without 2-stars).
   */
  PD_STATUS_UNDEFINED = 5,
  /**
   * The output buffer is too small; the required length was written.
   */
  PD_STATUS_BUFFER_TOO_SMALL = 6,
  PD_STATUS_OVERFLOW = 7,
  PD_STATUS_PANIC = 8,
} PdStatus;

/**
 * Opaque graph handle.
 */
typedef struct PdGraph PdGraph;

/**
 * Opaque random stream handle.
 */
typedef struct PdRng PdRng;

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL,
 * or 0 when there is no error.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null.
 */
size_t pd_last_error(char *buf, size_t len);

/**
 * Builds a seed graph from a built-in name such as `"k3"`, `"cycle(4)"`,
 * `"path(2)"`, `"star(5)"` or from an edge-list file path.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PdStatus pd_graph_new_seed(const char *name, bool allow_disconnected, struct PdGraph **out);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`u0, v0, u1, v1, ...`).
 *
 * # Safety
 * `edges` must hold `2 * edge_count` values (or be null when `edge_count` is 0).
 */
enum PdStatus pd_graph_from_edges(size_t n,
                                  const uint32_t *edges,
                                  size_t edge_count,
                                  bool allow_disconnected,
                                  struct PdGraph **out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_graph_clone(const struct PdGraph *g, struct PdGraph **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed; null is ignored.
 */
void pd_graph_free(struct PdGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live graph handle or null.
 */
size_t pd_graph_vertex_count(const struct PdGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live graph handle or null.
 */
size_t pd_graph_edge_count(const struct PdGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_graph_degree(const struct PdGraph *g, size_t v, size_t *out);

/**
 * Stream `replicate` of the run seeded with `master_seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PdStatus pd_rng_new(uint64_t master_seed, uint64_t replicate, struct PdRng **out);

/**
 * # Safety
 * `rng` must come from this library and not have been freed; null is ignored.
 */
void pd_rng_free(struct PdRng *rng);

/**
 * One duplication step; writes the id of the new vertex to `out_vertex`
 * (which may be null).
 *
 * # Safety
 * `g` and `rng` must be live handles.
 */
enum PdStatus pd_duplicate_step(struct PdGraph *g, double p, struct PdRng *rng, size_t *out_vertex);

/**
 * Grows `g` until it has `n_target` vertices.
 *
 * # Safety
 * `g` and `rng` must be live handles.
 */
enum PdStatus pd_grow_to(struct PdGraph *g, double p, size_t n_target, struct PdRng *rng);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_count_cliques(const struct PdGraph *g, size_t k, uint64_t *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_count_stars(const struct PdGraph *g, size_t k, uint64_t *out);

/**
 * Degree generating function `Σ_k F_k/n q^k`.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_degree_pgf(const struct PdGraph *g, double q, double *out);

/**
 * `6 C_3 / S_2`; returns `PD_STATUS_UNDEFINED` when the graph has no 2-stars.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_transitivity(const struct PdGraph *g, double *out);

/**
 * `E[C_k(n)]` for growth from `seed`.
 *
 * # Safety
 * `seed` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_expected_cliques(const struct PdGraph *seed,
                                  double p,
                                  size_t k,
                                  size_t n,
                                  double *out);

/**
 * `E[S_k(n)]` for growth from `seed`.
 *
 * # Safety
 * `seed` must be a live graph handle; `out` must be writable.
 */
enum PdStatus pd_expected_stars(const struct PdGraph *seed,
                                double p,
                                size_t k,
                                size_t n,
                                double *out);

/**
 * Law of the degree at size `n` of a vertex with degree `a` at size `n0`.
 * `pmf[i]` receives `P(D = a + i)` for `i < n − n0 + 1`; the number of
 * entries is written to `written`. If `len` is too small nothing is copied,
 * the required length goes to `written` and `PD_STATUS_BUFFER_TOO_SMALL`
 * is returned.
 *
 * # Safety
 * `pmf` must be valid for `len` doubles; `written` must be writable.
 */
enum PdStatus pd_degree_law(size_t n0,
                            size_t a,
                            double p,
                            size_t n,
                            double *pmf,
                            size_t len,
                            size_t *written);

/**
 * The root of `p e^p = 1`.
 */
double pd_p_star(void);

/**
 * `E[X_∞^k]` of the dual process; requires `p > p*`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PdStatus pd_x_moment(double p, size_t k, double *out);

/**
 * Logistic flow of the dual process for time `s` from `x`.
 */
double pd_flow(double x, double p, double s);

#endif  /* PDGRAPH_H */
