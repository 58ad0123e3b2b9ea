#ifndef GVKIT_H
#define GVKIT_H

#include <stdbool.h>
#include <stdint.h>

typedef enum GvkitStatus {
  GVKIT_STATUS_OK = 0,
  GVKIT_STATUS_NULL_POINTER = 1,
  GVKIT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input JSON is malformed or fails validation.
   */
  GVKIT_STATUS_SCHEMA = 3,
  /**
   * The computation ran but a checked identity failed.
   */
  GVKIT_STATUS_THEOREM_CHECK = 4,
  GVKIT_STATUS_INTERNAL = 5,
  GVKIT_STATUS_UTF8 = 6,
} GvkitStatus;

/**
 * Opaque GV table `n_h(k)` for the K3 surface.
 */
typedef struct GvkitGvTable GvkitGvTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next gvkit call on the same thread.
 */
const char *gvkit_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not freed yet.
 */
void gvkit_string_free(char *s);

/**
 * Computes `n_h(k)` for `1 <= k <= kmax`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum GvkitStatus gvkit_k3_gv_table(uint32_t kmax, struct GvkitGvTable **out);

/**
 * Largest degree stored in the table, or 0 for null.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
uint32_t gvkit_gv_table_kmax(const struct GvkitGvTable *table);

/**
 * Reads `n_h(k)`; `h > k` gives 0. A degree outside `1..=kmax` or a value
 * that does not fit in 64 bits gives `InvalidArgument`.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum GvkitStatus gvkit_gv_table_get(const struct GvkitGvTable *table,
                                    uint32_t h,
                                    uint32_t k,
                                    int64_t *out);

/**
 * The table as a GV JSON document.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum GvkitStatus gvkit_gv_table_to_json(const struct GvkitGvTable *table, char **out);

/**
 * Releases a table. Null is ignored.
 *
 * # Safety
 * `table` must be null or a handle from [`gvkit_k3_gv_table`] not freed yet.
 */
void gvkit_gv_table_free(struct GvkitGvTable *table);

/**
 * Compares the decomposition table with the KKV table through `kmax`.
 * `TheoremCheck` reports the first disagreement.
 */
enum GvkitStatus gvkit_verify_kkv(uint32_t kmax);

/**
 * GV table JSON in, GW table JSON out, for `g <= gmax`, `d <= dmax`.
 *
 * # Safety
 * `gv_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GvkitStatus gvkit_gv_to_gw_json(const char *gv_json, uint32_t gmax, uint32_t dmax, char **out);

/**
 * GW table JSON in, GV table JSON out. Non-integral GV invariants give
 * `TheoremCheck`.
 *
 * # Safety
 * `gw_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GvkitStatus gvkit_gw_to_gv_json(const char *gw_json, uint32_t hmax, uint32_t dmax, char **out);

/**
 * Chern data JSON in, parity report JSON out. The report is written even
 * when `c1` fails to be even, in which case the status is `TheoremCheck`.
 *
 * # Safety
 * `chern_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GvkitStatus gvkit_parity_json(const char *chern_json, char **out);

/**
 * Cover JSON in, obstruction report JSON out. Sign data that is not a
 * cocycle gives `TheoremCheck`, with the report still written.
 *
 * # Safety
 * `cover_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GvkitStatus gvkit_cech_json(const char *cover_json, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GVKIT_H */
