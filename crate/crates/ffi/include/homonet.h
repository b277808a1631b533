#ifndef HOMONET_H
#define HOMONET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HnStatus {
  HN_STATUS_OK = 0,
  HN_STATUS_NULL_POINTER = 1,
  HN_STATUS_INVALID_INPUT = 2,
  HN_STATUS_ESTIMATION = 3,
  HN_STATUS_CALIBRATION = 4,
  HN_STATUS_PANIC = 5,
} HnStatus;

typedef enum HnLinkFamily {
  HN_LINK_FAMILY_GAUSSIAN = 0,
  HN_LINK_FAMILY_HARD = 1,
  HN_LINK_FAMILY_LINEAR_MAX = 2,
} HnLinkFamily;

typedef enum HnRule {
  /**
   * Neighbors up to order `param`.
   */
  HN_RULE_ORDER_M = 0,
  /**
   * Units sharing at least `param` friends.
   */
  HN_RULE_COMMON_FRIENDS = 1,
} HnRule;

/**
 * Opaque network handle.
 */
typedef struct HnNetwork HnNetwork;

/**
 * ATE point estimate and standard error.
 */
typedef struct HnEstimate {
  double point;
  double se;
  /**
   * 0 when the standard error is undefined.
   */
  int32_t has_se;
  size_t n_effective;
  size_t dropped_units;
} HnEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *hn_last_error(void);

/**
 * Builds a network on `n` nodes from `m` edges stored as `2 * m` node ids.
 *
 * # Safety
 * `edges` must point to `2 * m` values (or may be null when `m == 0`); `out` must be writable.
 */
enum HnStatus hn_network_from_edges(size_t n,
                                    const size_t *edges,
                                    size_t m,
                                    struct HnNetwork **out);

/**
 * Draws a homophilic network: `i` and `j` link when a uniform shock is at most
 * `g(scale * ||x_i - x_j||)` over the link columns.
 *
 * # Safety
 * `x` must hold `n * d` row-major values, `link_cols` `n_link` values; `out` must be writable.
 */
enum HnStatus hn_network_sample(const double *x,
                                size_t n,
                                size_t d,
                                const size_t *link_cols,
                                size_t n_link,
                                enum HnLinkFamily link_family,
                                double scale,
                                uint64_t seed,
                                struct HnNetwork **out);

/**
 * Releases a network. Null is ignored.
 *
 * # Safety
 * `net` must come from this library and not be used afterwards.
 */
void hn_network_free(struct HnNetwork *net);

/**
 * Node and edge counts.
 *
 * # Safety
 * `net` must be a live handle; `nodes` and `edges` must be writable.
 */
enum HnStatus hn_network_counts(const struct HnNetwork *net, size_t *nodes, size_t *edges);

/**
 * Global clustering coefficient (transitivity); 0 when the network has no connected triple.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum HnStatus hn_clustering_coefficient(const struct HnNetwork *net, double *out);

/**
 * ATE from comparison groups of the given rule, without kernel weights.
 *
 * # Safety
 * `net` must be a live handle with `n` nodes; `t` and `y` must hold `n` values; `out` must be writable.
 */
enum HnStatus hn_ate_estimate(const struct HnNetwork *net,
                              const uint8_t *t,
                              const double *y,
                              size_t n,
                              enum HnRule rule,
                              size_t param,
                              struct HnEstimate *out);

/**
 * Link scale whose Monte-Carlo mean degree is within 2% of `target_degree`.
 *
 * # Safety
 * As [`hn_network_sample`]; `scale_out` must be writable.
 */
enum HnStatus hn_calibrate_scale(const double *x,
                                 size_t n,
                                 size_t d,
                                 const size_t *link_cols,
                                 size_t n_link,
                                 enum HnLinkFamily link_family,
                                 double target_degree,
                                 uint64_t seed,
                                 double *scale_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMONET_H */
