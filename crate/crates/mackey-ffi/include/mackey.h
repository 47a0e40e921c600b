#ifndef MACKEY_FFI_H
#define MACKEY_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum MkyStatus {
  /**
   * Success.
   */
  MkyStatus_Ok = 0,
  /**
   * The operation ran but the mathematical check failed.
   */
  MkyStatus_MathFail = 1,
  /**
   * Malformed or invalid input.
   */
  MkyStatus_InvalidInput = 2,
  /**
   * A required pointer was null.
   */
  MkyStatus_NullPointer = 3,
  /**
   * An internal panic was caught; the library state is unchanged.
   */
  MkyStatus_Internal = 4,
} MkyStatus;

/**
 * Opaque handle: a Mackey functor in Lindner form.
 */
typedef struct MkyFunctor MkyFunctor;

/**
 * Opaque handle: a finite group with its derived subgroup data.
 */
typedef struct MkyGroup MkyGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *mky_version(void);

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer is valid until the next failing call on the same thread; do
 * not free.
 */
const char *mky_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `mky_*` function and not freed yet.
 */
void mky_string_free(char *s);

/**
 * Parses a group from JSON `{"order": n, "table": [[...]]}` and computes
 * its subgroup-class data. `bound` caps the group order (pass 0 for the
 * default of 24).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be valid.
 */
enum MkyStatus mky_group_from_json(const char *json, uintptr_t bound, struct MkyGroup **out);

/**
 * # Safety
 * `group` must come from `mky_group_from_json` and not be freed twice.
 */
void mky_group_free(struct MkyGroup *group);

/**
 * Number of elements of the group; 0 on null input.
 *
 * # Safety
 * `group` must be a live handle.
 */
uintptr_t mky_group_order(const struct MkyGroup *group);

/**
 * Number of conjugacy classes of subgroups; 0 on null input.
 *
 * # Safety
 * `group` must be a live handle.
 */
uintptr_t mky_group_class_count(const struct MkyGroup *group);

/**
 * The Burnside ring multiplication table at the top level, as JSON
 * `[[["p/q", ...], ...], ...]` indexed by subgroup classes.
 *
 * # Safety
 * `group` must be a live handle; `out` must be valid.
 */
enum MkyStatus mky_burnside_table_json(const struct MkyGroup *group, char **out);

/**
 * Builds the Burnside functor of a group.
 *
 * # Safety
 * `group` must be a live handle; `out` must be valid.
 */
enum MkyStatus mky_burnside_functor(const struct MkyGroup *group, struct MkyFunctor **out);

/**
 * Parses a Mackey functor from JSON (the CLI file format, group
 * embedded). The functor is fully validated.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be valid.
 */
enum MkyStatus mky_functor_from_json(const char *json, uintptr_t bound, struct MkyFunctor **out);

/**
 * # Safety
 * `functor` must come from this library and not be freed twice.
 */
void mky_functor_free(struct MkyFunctor *functor);

/**
 * Serializes a functor to the JSON file format.
 *
 * # Safety
 * `functor` must be a live handle; `out` must be valid.
 */
enum MkyStatus mky_functor_to_json(const struct MkyFunctor *functor, char **out);

/**
 * Dimension of the level at a subgroup class, or -1 when out of range.
 *
 * # Safety
 * `functor` must be a live handle.
 */
int64_t mky_functor_level_dim(const struct MkyFunctor *functor, uintptr_t class_);

/**
 * Runs the full functoriality validation.
 *
 * # Safety
 * `functor` must be a live handle.
 */
enum MkyStatus mky_check_mackey(const struct MkyFunctor *functor);

/**
 * Checks transfer∘restriction = index·id over all subgroup pairs.
 *
 * # Safety
 * `functor` must be a live handle.
 */
enum MkyStatus mky_check_cohomological(const struct MkyFunctor *functor);

/**
 * Day convolution of two functors over the same group.
 *
 * # Safety
 * `lhs` and `rhs` must be live handles; `out` must be valid.
 */
enum MkyStatus mky_tensor(const struct MkyFunctor *lhs,
                          const struct MkyFunctor *rhs,
                          struct MkyFunctor **out);

/**
 * Star dual of a functor.
 *
 * # Safety
 * `functor` must be a live handle; `out` must be valid.
 */
enum MkyStatus mky_star_dual(const struct MkyFunctor *functor, struct MkyFunctor **out);

/**
 * Dimension of the Green algebra W_J of the Burnside Green functor, with
 * validation of associativity and the unit; -1 on failure.
 *
 * # Safety
 * `group` must be a live handle.
 */
int64_t mky_burnside_green_algebra_dim(const struct MkyGroup *group);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MACKEY_FFI_H */
