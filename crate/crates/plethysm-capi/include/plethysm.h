/* C ABI for the plethysm verification library. */

#ifndef PLETHYSM_H
#define PLETHYSM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every C entry point.
typedef enum PlethysmStatus {
  PLETHYSM_STATUS_OK = 0,
  // A required pointer argument was null.
  PLETHYSM_STATUS_NULL_ARGUMENT = 1,
  // Arguments were structurally invalid (bad mode, m > n, …).
  PLETHYSM_STATUS_INVALID_ARGUMENT = 2,
  // A string argument did not parse.
  PLETHYSM_STATUS_PARSE_ERROR = 3,
  // A configured resource cap was hit.
  PLETHYSM_STATUS_RESOURCE_LIMIT = 4,
  // The library panicked; this is a bug worth reporting.
  PLETHYSM_STATUS_INTERNAL = 5,
} PlethysmStatus;

// How a rank value returned by [`plethysm_rank_k`] was established.
typedef enum PlethysmCertification {
  PLETHYSM_CERTIFICATION_CERTIFIED_FULL = 0,
  PLETHYSM_CERTIFICATION_CERTIFIED_EXACT = 1,
  PLETHYSM_CERTIFICATION_MOD_P_EVIDENCE = 2,
} PlethysmCertification;

// Opaque configuration handle: enumeration cap, exact-engine cap and the
// prime list for the modular rank engine.
typedef struct PlethysmOptions PlethysmOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *plethysm_version(void);

// Frees a string returned by any of the `*_json` functions. Null is a
// no-op.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void plethysm_string_free(char *s);

// Creates an options handle with the default caps and primes.
struct PlethysmOptions *plethysm_options_new(void);

// # Safety
// `options` must come from [`plethysm_options_new`] and not be freed twice.
void plethysm_options_free(struct PlethysmOptions *options);

// Caps the number of tableaux a single enumeration may produce.
//
// # Safety
// `options` must be a live handle from [`plethysm_options_new`].
enum PlethysmStatus plethysm_options_set_max_enum(struct PlethysmOptions *options,
                                                  uint64_t max_enum);

// Caps the side length accepted by the exact (fraction-free) rank engine.
//
// # Safety
// `options` must be a live handle from [`plethysm_options_new`].
enum PlethysmStatus plethysm_options_set_max_exact(struct PlethysmOptions *options,
                                                   size_t max_exact);

// Replaces the prime list for the modular rank engine. Each prime must be
// an actual prime below 2^31; the list must be non-empty.
//
// # Safety
// `options` must be a live handle and `primes` must point to `len`
// readable values.
enum PlethysmStatus plethysm_options_set_primes(struct PlethysmOptions *options,
                                                const uint64_t *primes,
                                                size_t len);

// Exact |H_λ| and |V_λ| plus the dominance comparison, as JSON.
//
// # Safety
// `shape` must be a valid NUL-terminated string and `out_json` a valid
// out-pointer.
enum PlethysmStatus plethysm_count_json(const char *shape, char **out_json);

// Checks one shape; `mode` is 1 (row independence under dominance) or 2
// (full rank). The verdict comes back as JSON.
//
// # Safety
// `shape` must be a valid NUL-terminated string, `out_json` a valid
// out-pointer, and `options` null or a live handle.
enum PlethysmStatus plethysm_check_json(const char *shape,
                                        int mode,
                                        const struct PlethysmOptions *options,
                                        char **out_json);

// One verdict per partition of `n`, as JSON lines (same bytes as the CLI
// scan).
//
// # Safety
// `out_jsonl` must be a valid out-pointer; `options` null or a live handle.
enum PlethysmStatus plethysm_scan_json(size_t n,
                                       int mode,
                                       const struct PlethysmOptions *options,
                                       char **out_jsonl);

// Builds `M^{m,n}`, certifies its rank against the row count and compares
// it with the rectangle matrix; JSON report.
//
// # Safety
// `out_json` must be a valid out-pointer; `options` null or a live handle.
enum PlethysmStatus plethysm_blacklist_json(size_t m,
                                            size_t n,
                                            const struct PlethysmOptions *options,
                                            char **out_json);

// Runs the identity suite for the two-row rectangle of width `n`; JSON
// report with one record per checked identity.
//
// # Safety
// `out_json` must be a valid out-pointer; `options` null or a live handle.
enum PlethysmStatus plethysm_verify_proof_json(size_t n,
                                               const struct PlethysmOptions *options,
                                               char **out_json);

// Certified rank of `K_λ` for the given shape. On success writes the rank
// and how it was certified.
//
// # Safety
// `shape` must be a valid NUL-terminated string; `out_rank` and
// `out_certification` must be valid out-pointers; `options` null or a
// live handle.
enum PlethysmStatus plethysm_rank_k(const char *shape,
                                    const struct PlethysmOptions *options,
                                    uint64_t *out_rank,
                                    enum PlethysmCertification *out_certification);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLETHYSM_H */
