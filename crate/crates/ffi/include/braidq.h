#ifndef BRAIDQ_H
#define BRAIDQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes, plus FFI-specific ones.
 */
typedef enum BqStatus {
  BqStatus_Ok = 0,
  BqStatus_Violation = 1,
  BqStatus_InputError = 2,
  BqStatus_NullPointer = 3,
  BqStatus_InvalidUtf8 = 4,
} BqStatus;

/**
 * Opaque handle to a validated non-degenerate solution.
 */
typedef struct BqSolution BqSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Borrowed; valid
 * until the next failing call from the same thread.
 */
const char *bq_last_error(void);

/**
 * Parse a solution document (JSON) into a handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer.
 */
enum BqStatus bq_solution_parse(const char *json, struct BqSolution **out);

/**
 * # Safety
 * `handle` must come from this library and not be freed twice.
 */
void bq_solution_free(struct BqSolution *handle);

/**
 * # Safety
 * `ptr` must come from a bq_* call that returned an owned string.
 */
void bq_string_free(char *ptr);

/**
 * # Safety
 * `handle` must be a live solution handle.
 */
uintptr_t bq_solution_arrow_count(const struct BqSolution *handle);

/**
 * # Safety
 * `handle` must be a live solution handle.
 */
bool bq_solution_is_involutive(const struct BqSolution *handle);

/**
 * σ(x, y) by arrow index; fails on a non-composable pair.
 *
 * # Safety
 * `handle` must be live; `out_left`/`out_right` valid pointers.
 */
enum BqStatus bq_solution_apply(const struct BqSolution *handle,
                                uintptr_t x,
                                uintptr_t y,
                                uintptr_t *out_left,
                                uintptr_t *out_right);

/**
 * Serialize the solution back to its canonical JSON document.
 *
 * # Safety
 * `handle` must be live; `out` receives an owned string for
 * bq_string_free.
 */
enum BqStatus bq_solution_to_json(const struct BqSolution *handle, char **out);

/**
 * Derived rack bundle as a JSON document.
 *
 * # Safety
 * Same contract as bq_solution_to_json.
 */
enum BqStatus bq_solution_derive_rack(const struct BqSolution *handle, char **out);

/**
 * Universal braided groupoid acting on the solution, as a JSON document.
 *
 * # Safety
 * Same contract as bq_solution_to_json.
 */
enum BqStatus bq_solution_structure_groupoid(const struct BqSolution *handle, char **out);

/**
 * Braiding matrix with the constant cocycle q = 1, as a JSON document.
 *
 * # Safety
 * Same contract as bq_solution_to_json.
 */
enum BqStatus bq_solution_linearize(const struct BqSolution *handle, char **out);

/**
 * Enumerate all non-degenerate solutions on a quiver document; the
 * result is a JSON array of solution documents.
 *
 * # Safety
 * `quiver_json` must be NUL-terminated; `out` receives an owned string.
 */
enum BqStatus bq_enumerate(const char *quiver_json, uint64_t node_budget, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRAIDQ_H */
