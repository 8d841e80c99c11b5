/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PPXFER_H
#define PPXFER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  PPX_STATUS_OK = 0,
  PPX_STATUS_NULL_POINTER = 1,
  PPX_STATUS_INVALID_CONFIG = 2,
  PPX_STATUS_OUT_OF_RANGE = 3,
  PPX_STATUS_NUMERICAL = 4,
  PPX_STATUS_NO_TRANSFER_PREDICTED = 5,
  PPX_STATUS_BUFFER_TOO_SMALL = 6,
  PPX_STATUS_PANIC = 7,
} PpxStatus;

typedef enum {
  PPX_STATISTICS_FERMION = 0,
  PPX_STATISTICS_BOSON = 1,
} PpxStatistics;

typedef enum {
  PPX_FEASIBILITY_PP = 0,
  PPX_FEASIBILITY_QUASI_PP = 1,
  PPX_FEASIBILITY_NONE = 2,
  PPX_FEASIBILITY_ALL_LENGTHS = 3,
  PPX_FEASIBILITY_UNCLASSIFIED = 4,
  PPX_FEASIBILITY_INVALID_INPUT = -1,
} PpxFeasibility;

/**
 * Opaque chain handle.
 */
typedef struct PpxChain PpxChain;

/**
 * Best transfer found in a time window.
 */
typedef struct {
  double t_fermion;
  double p_fermion;
  double t_boson;
  double p_boson;
} PpxPeak;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a chain with `n_s`-site sender and receiver blocks, an `n_w`-site
 * wire, block-wire coupling `j0` and uniform field `h`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
PpxStatus ppx_chain_new(size_t n_s,
                        size_t n_w,
                        double j0,
                        double h,
                        PpxStatistics stats,
                        PpxChain **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `chain` must come from `ppx_chain_new` and not be used afterwards.
 */
void ppx_chain_free(PpxChain *chain);

/**
 * Number of sites, or 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
size_t ppx_chain_len(const PpxChain *chain);

/**
 * Probability that the sender block's excitations all sit in the receiver
 * block at time `t`.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
PpxStatus ppx_transfer_probability(const PpxChain *chain,
                                   double t,
                                   PpxStatistics stats,
                                   double *out);

/**
 * Occupation of `site` (1-based) at time `t`.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
PpxStatus ppx_occupation(const PpxChain *chain, double t, size_t site, double *out);

/**
 * Total magnetization of the receiver block at time `t`.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
PpxStatus ppx_magnetization(const PpxChain *chain, double t, double *out);

/**
 * Copies the ascending single-particle spectrum into `buf`, which must hold
 * at least `ppx_chain_len` values.
 *
 * # Safety
 * `chain` must be a live handle and `buf` valid for `len` writes.
 */
PpxStatus ppx_eigenvalues(const PpxChain *chain, double *buf, size_t len);

/**
 * Predicted transfer time from the slowest level splitting.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
PpxStatus ppx_predict_transfer_time(const PpxChain *chain, double *out);

/**
 * Locates the best transfer over `[0, t_max]`. A non-positive `t_max`
 * selects the default window.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
PpxStatus ppx_find_peak(const PpxChain *chain, double t_max, PpxPeak *out);

/**
 * Number of resonant sender modes for wire lengths `n_w ≡ p (mod n_s+1)`,
 * or -1 for invalid input.
 */
ptrdiff_t ppx_resonance_count(size_t n_s, size_t p);

/**
 * Transfer feasibility class of an `(n_s, n_w)` chain.
 */
PpxFeasibility ppx_pp_feasible(size_t n_s, size_t n_w);

/**
 * Message for the last failure on this thread; valid until the next call
 * into the library from the same thread. Empty if none.
 */
const char *ppx_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ppx_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPXFER_H */
