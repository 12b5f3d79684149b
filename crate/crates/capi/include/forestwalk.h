#ifndef FORESTWALK_H
#define FORESTWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
enum FwStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  Ok = 0,
  /**
   * A null pointer or otherwise invalid argument.
   */
  InvalidArgument = 1,
  /**
   * Text failed to parse (element syntax, scale file, preset name).
   */
  ParseError = 2,
  /**
   * A ball or search exceeded its resource budget.
   */
  Capacity = 3,
  /**
   * A structural invariant failed (non-ladder scale, failed check).
   */
  Invariant = 4,
  /**
   * Any other internal error; see `fw_last_error`.
   */
  Internal = 5,
};
#ifndef __cplusplus
typedef int32_t FwStatus;
#endif // __cplusplus

/**
 * Opaque step-distribution handle.
 */
typedef struct FwDistribution FwDistribution;

/**
 * Opaque group-model handle.
 */
typedef struct FwModel FwModel;

/**
 * Opaque scale (ladder) handle.
 */
typedef struct FwScale FwScale;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; never free it.
 */
const char *fw_last_error(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `text` must have been returned by this library and not released before.
 */
void fw_string_release(char *text);

/**
 * Creates a free-group model of the given rank (2..=26).
 */
FwStatus fw_model_free_group(uintptr_t rank, struct FwModel **out);

/**
 * Creates a lamplighter model over `Z_modulus`.
 */
FwStatus fw_model_lamplighter(uint32_t modulus, struct FwModel **out);

/**
 * # Safety
 * `model` must be a live handle from this library, released once.
 */
void fw_model_release(struct FwModel *model);

/**
 * Multiplies two elements given in the model's text syntax; the canonical
 * product is returned as text.
 *
 * # Safety
 * `model` must be live; `left`, `right` must be NUL-terminated strings.
 */
FwStatus fw_element_multiply(const struct FwModel *model,
                             const char *left,
                             const char *right,
                             char **out);

/**
 * Builds one of the named preset scales (`f2-small`, `lamplighter-small`,
 * `f2-markov`, `f2-walk`, `lamplighter-walk`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` non-null.
 */
FwStatus fw_scale_preset(const char *name, struct FwScale **out);

/**
 * Parses a scale from its text serialization.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` non-null.
 */
FwStatus fw_scale_from_text(const char *text, struct FwScale **out);

/**
 * Serializes a scale to its round-tripping text form.
 *
 * # Safety
 * `scale` must be live; `out` non-null.
 */
FwStatus fw_scale_to_text(const struct FwScale *scale, char **out);

/**
 * Number of spiking levels.
 *
 * # Safety
 * `scale` must be live.
 */
uintptr_t fw_scale_levels(const struct FwScale *scale);

/**
 * # Safety
 * `scale` must be a live handle from this library, released once.
 */
void fw_scale_release(struct FwScale *scale);

/**
 * Exhaustively checks the ladder axioms on a ball of the given radius.
 * `axioms_hold` receives 1 or 0.
 *
 * # Safety
 * `scale` must be live; `axioms_hold` non-null.
 */
FwStatus fw_scale_check_ladder(const struct FwScale *scale,
                               uint64_t ball_radius,
                               uintptr_t ball_budget,
                               int32_t *axioms_hold);

/**
 * Renders the despiking forest on a ball as DOT text.
 *
 * # Safety
 * `scale` must be live; `out` non-null.
 */
FwStatus fw_forest_dot(const struct FwScale *scale,
                       uint64_t ball_radius,
                       uintptr_t ball_budget,
                       char **out);

/**
 * Builds the walk step distribution over a scale: weights realize the
 * power-law `p_j ∝ (j+1)^{-s}` with the preset α-sequence.
 *
 * # Safety
 * `scale` must be live; `out` non-null.
 */
FwStatus fw_distribution_power(const struct FwScale *scale, double s, struct FwDistribution **out);

/**
 * # Safety
 * `dist` must be a live handle from this library, released once.
 */
void fw_distribution_release(struct FwDistribution *dist);

/**
 * Simulates one path and verifies its record/spike structure; a JSON
 * summary (epoch counts, burn-in, exceptions) is returned as text.
 *
 * # Safety
 * `dist` must be live; `out` non-null.
 */
FwStatus fw_walk_verify_json(const struct FwDistribution *dist,
                             uintptr_t length,
                             uint64_t seed,
                             uint64_t stream,
                             char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FORESTWALK_H */
