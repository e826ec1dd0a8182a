#ifndef AFMLAB_H
#define AFMLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AfmStatus {
  AFM_STATUS_OK = 0,
  AFM_STATUS_NULL_POINTER = 1,
  AFM_STATUS_INVALID_EDGE = 2,
  AFM_STATUS_DUPLICATE_EDGE = 3,
  AFM_STATUS_VERTEX_OUT_OF_RANGE = 4,
  AFM_STATUS_TOO_LARGE = 5,
  AFM_STATUS_INVALID_PARAMETER = 6,
  AFM_STATUS_LENGTH_MISMATCH = 7,
  AFM_STATUS_RESOURCE_EXHAUSTED = 8,
  AFM_STATUS_NUMERICAL_FAILURE = 9,
  AFM_STATUS_DIVERGENCE_SUSPECTED = 10,
  AFM_STATUS_INTERNAL_INCONSISTENCY = 11,
  AFM_STATUS_NOT_ANTIFERROMAGNETIC = 12,
  AFM_STATUS_ASYMMETRY = 13,
  AFM_STATUS_NEGATIVE_WEIGHT = 14,
  AFM_STATUS_PARSE = 15,
  AFM_STATUS_IO = 16,
  AFM_STATUS_BUFFER_TOO_SMALL = 17,
  AFM_STATUS_PANIC = 18,
} AfmStatus;

// Named graph families accepted by [`afm_graph_named`].
typedef enum AfmNamedKind {
  // `K_size`
  AFM_NAMED_KIND_CLIQUE = 0,
  // Path with `size` edges.
  AFM_NAMED_KIND_PATH = 1,
  // `C_size`, `size >= 3`
  AFM_NAMED_KIND_CYCLE = 2,
  // `size` isolated vertices.
  AFM_NAMED_KIND_EMPTY = 3,
} AfmNamedKind;

// Opaque simple graph.
typedef struct AfmGraph AfmGraph;

// Opaque symmetric nonnegative weight matrix.
typedef struct AfmModel AfmModel;

// Summary of a clique-bound check.
typedef struct AfmReport {
  double lhs_log;
  double rhs_log;
  double slack;
  bool pass;
} AfmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *afm_version(void);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *afm_last_error(void);

// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
//
// # Safety
// `edges` must point to `2 * m` readable values; `out` must be writable.
enum AfmStatus afm_graph_from_edges(size_t n, const size_t *edges, size_t m, struct AfmGraph **out);

// # Safety
// `out` must be writable.
enum AfmStatus afm_graph_named(enum AfmNamedKind kind, size_t size, struct AfmGraph **out);

// # Safety
// `g` must come from a graph constructor and not be used afterwards. Null is ignored.
void afm_graph_free(struct AfmGraph *g);

// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum AfmStatus afm_graph_vertex_count(const struct AfmGraph *g, size_t *out);

// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum AfmStatus afm_graph_max_degree(const struct AfmGraph *g, size_t *out);

// `Z_G(lambda)` with one activity per vertex.
//
// # Safety
// `acts` must hold `len` values; `out` must be writable.
enum AfmStatus afm_z(const struct AfmGraph *g, const double *acts, size_t len, double *out);

// `log Z_G(lambda)`, summed over components.
//
// # Safety
// As for [`afm_z`].
enum AfmStatus afm_z_log(const struct AfmGraph *g, const double *acts, size_t len, double *out);

// Two-colour partition function `Z^(2)_G(lambda, mu)`.
//
// # Safety
// `lam` and `mu` must each hold `len` values; `out` must be writable.
enum AfmStatus afm_z2(const struct AfmGraph *g,
                      const double *lam,
                      const double *mu,
                      size_t len,
                      double *out);

// `Z^(q)_G` with activities as `q` rows of `n` values, row-major.
//
// # Safety
// `acts` must hold `q * n` values; `out` must be writable.
enum AfmStatus afm_zq(const struct AfmGraph *g,
                      const double *acts,
                      size_t q,
                      size_t n,
                      double *out);

// `sum_v log(1 + (d_v+1) lambda_v) / (d_v+1)`.
//
// # Safety
// As for [`afm_z`].
enum AfmStatus afm_clique_bound_log(const struct AfmGraph *g,
                                    const double *acts,
                                    size_t len,
                                    double *out);

// Compares `log Z_G` against the clique bound.
//
// # Safety
// As for [`afm_z`], with `out` a writable report.
enum AfmStatus afm_check_thm_main(const struct AfmGraph *g,
                                  const double *acts,
                                  size_t len,
                                  struct AfmReport *out);

// Builds a `q x q` model from row-major weights; asymmetry up to `1e-12` is averaged out.
//
// # Safety
// `weights` must hold `q * q` values; `out` must be writable.
enum AfmStatus afm_model_new(size_t q, const double *weights, struct AfmModel **out);

// # Safety
// `m` must come from [`afm_model_new`] and not be used afterwards. Null is ignored.
void afm_model_free(struct AfmModel *m);

// Eigenvalues in descending order. Writes `q` values into `out` when
// `cap >= q`; `written` always receives `q`.
//
// # Safety
// `out` must have room for `cap` values; `written` must be writable.
enum AfmStatus afm_model_eigenvalues(const struct AfmModel *m,
                                     double *out,
                                     size_t cap,
                                     size_t *written);

// Exactly one positive eigenvalue.
//
// # Safety
// `m` must be a live model handle; `out` must be writable.
enum AfmStatus afm_model_is_antiferromagnetic(const struct AfmModel *m, bool *out);

// Weighted homomorphism count `hom(G, H)`.
//
// # Safety
// `g` and `m` must be live handles; `out` must be writable.
enum AfmStatus afm_hom_count(const struct AfmGraph *g, const struct AfmModel *m, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFMLAB_H */
