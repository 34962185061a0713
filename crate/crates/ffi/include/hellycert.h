/* C ABI for the hellycert branch-and-cut certificate checker. */

#ifndef HELLYCERT_H
#define HELLYCERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible entry points.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  HC_STATUS_PARSE_ERROR = 3,
  HC_STATUS_INVALID_ARGUMENT = 4,
} HcStatus;

/**
 * Opaque handle to a parsed certificate document.
 */
typedef struct HcTree HcTree;

/**
 * Outcome of replaying a certificate.
 */
typedef struct HcVerdict {
  /**
   * Nonzero when the certificate is accepted.
   */
  bool accepted;
  /**
   * Tree size (node count).
   */
  uint64_t size;
  /**
   * Leaf count.
   */
  uint64_t leaves;
  /**
   * Elementary rational operations spent checking.
   */
  uint64_t work;
} HcVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Detail message for the most recent failure or rejection on this thread.
 * Valid until the next library call on the same thread.
 */
const char *hc_last_message(void);

/**
 * Library version as a static string.
 */
const char *hc_version(void);

/**
 * Parses a certificate document (UTF-8 JSON) into a handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer. On
 * `HC_STATUS_OK` the caller owns the handle and must release it with
 * [`hc_tree_free`].
 */
enum HcStatus hc_tree_parse(const char *json, struct HcTree **out);

/**
 * Replays the certificate against its goal and fills `out`.
 *
 * Returns `HC_STATUS_OK` whether the certificate is accepted or rejected;
 * inspect `out->accepted`. The rejection reason is available through
 * [`hc_last_message`].
 *
 * # Safety
 * `tree` must be a live handle from [`hc_tree_parse`]; `out` must be valid.
 */
enum HcStatus hc_tree_check(const struct HcTree *tree, struct HcVerdict *out);

/**
 * Tree size (node count) of a parsed document.
 *
 * # Safety
 * `tree` must be a live handle from [`hc_tree_parse`].
 */
uint64_t hc_tree_size(const struct HcTree *tree);

/**
 * Releases a handle returned by [`hc_tree_parse`]. NULL is ignored.
 *
 * # Safety
 * `tree` must be NULL or a handle not yet freed.
 */
void hc_tree_free(struct HcTree *tree);

/**
 * The Helly lower bound `t/(h−1)` as a newly allocated decimal string
 * ("p/q" or "p"); NULL when `h < 2`. Free with [`hc_string_free`].
 */
char *hc_helly_bound(uint64_t t, uint64_t h);

/**
 * Frees a string allocated by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void hc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HELLYCERT_H */
