#ifndef SGROVER_H
#define SGROVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define SG_MODE_UP 0

#define SG_MODE_DOWN 1

#define SG_BASIS_FULL 0

#define SG_BASIS_REDUCED 1

/**
 * Result of every fallible call. Codes 2-5 match the command-line exit statuses.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_INPUT = 2,
  SG_STATUS_DIMENSION_RANGE = 3,
  SG_STATUS_PRECONDITION = 4,
  SG_STATUS_NUMERIC = 5,
  SG_STATUS_BUFFER_TOO_SMALL = 6,
  SG_STATUS_PANIC = 7,
} SgStatus;

/**
 * Finite simplicial complex.
 */
typedef struct SgComplex SgComplex;

/**
 * Dense complex matrix, row-major on export.
 */
typedef struct SgMatrix SgMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next failing call.
 */
const char *sg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Builds a complex from `nfacets` facets stored back to back in `vertices`; facet i has
 * `sizes[i]` vertex ids. Vertex ids double as labels.
 *
 * # Safety
 * `vertices` must hold `sum(sizes)` entries, `sizes` must hold `nfacets`, `out` must be writable.
 */
enum SgStatus sg_complex_from_facets(const size_t *vertices,
                                     const size_t *sizes,
                                     size_t nfacets,
                                     struct SgComplex **out);

/**
 * Parses the facet-file text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SgStatus sg_complex_parse(const char *text, struct SgComplex **out);

/**
 * Named generator; parameters that a family does not use are ignored, 0 means unset.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum SgStatus sg_complex_generate(const char *name,
                                  size_t n,
                                  size_t k,
                                  size_t m,
                                  uint64_t seed,
                                  struct SgComplex **out);

/**
 * # Safety
 * `c` must come from an `sg_complex_*` constructor and not be used afterwards; NULL is ignored.
 */
void sg_complex_free(struct SgComplex *c);

/**
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum SgStatus sg_complex_dim(const struct SgComplex *c, size_t *out);

/**
 * Number of q-simplices (0 above the dimension).
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum SgStatus sg_complex_count(const struct SgComplex *c, size_t q, size_t *out);

/**
 * Discriminant `D_q^{mode}` in the full or reduced basis.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum SgStatus sg_discriminant(const struct SgComplex *c,
                              size_t q,
                              uint32_t mode,
                              uint32_t basis,
                              struct SgMatrix **out);

/**
 * Grover walk unitary `U_q^{mode}` on the edge space.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum SgStatus sg_walk_unitary(const struct SgComplex *c,
                              size_t q,
                              uint32_t mode,
                              struct SgMatrix **out);

/**
 * Bloch symbol of the cylinder: `dq = 2` gives the 6x6 matrix, `dq = 1` the 3x3 block for
 * `mu = omega^mu_index`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SgStatus sg_bloch_symbol(uint32_t dq, double theta, uint32_t mu_index, struct SgMatrix **out);

/**
 * # Safety
 * `m` must come from an `sg_*` constructor and not be used afterwards; NULL is ignored.
 */
void sg_matrix_free(struct SgMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `rows` and `cols` writable.
 */
enum SgStatus sg_matrix_shape(const struct SgMatrix *m, size_t *rows, size_t *cols);

/**
 * Entry (i, j).
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` writable.
 */
enum SgStatus sg_matrix_get(const struct SgMatrix *m, size_t i, size_t j, double *re, double *im);

/**
 * Copies all entries row-major into `re` and `im`, each of capacity `len`.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
enum SgStatus sg_matrix_copy(const struct SgMatrix *m, double *re, double *im, size_t len);

/**
 * Ascending eigenvalues of a Hermitian matrix into `out` (capacity `len` >= rows).
 *
 * # Safety
 * `m` must be a live handle and `out` hold `len` doubles.
 */
enum SgStatus sg_hermitian_eigenvalues(const struct SgMatrix *m, double *out, size_t len);

/**
 * Whether -1 (coherent) and +1 (anticoherent) are eigenvalues of the top down-discriminant.
 *
 * # Safety
 * `c` must be a live handle; `coherent` and `anticoherent` writable.
 */
enum SgStatus sg_orientability(const struct SgComplex *c, bool *coherent, bool *anticoherent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGROVER_H */
