#ifndef SEMIISAC_H
#define SEMIISAC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * User selector for per-user metrics.
 */
#define SEMIISAC_USER_C 0

#define SEMIISAC_USER_R 1

/**
 * Selector for scenario-level metrics (reir, reir-asym, capacity, slope).
 */
#define SEMIISAC_USER_NONE -1

/**
 * Status codes returned by every fallible function.
 */
enum SemiIsacStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  SEMI_ISAC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SEMI_ISAC_STATUS_NULL_POINTER = 1,
  /**
   * An argument was malformed: bad UTF-8, unknown name, wrong user code
   * or an unsupported metric/scenario combination.
   */
  SEMI_ISAC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The configuration text or a configuration value was rejected.
   */
  SEMI_ISAC_STATUS_CONFIG = 3,
  /**
   * A numerical routine failed to converge or left its domain.
   */
  SEMI_ISAC_STATUS_NUMERICAL = 4,
  /**
   * An internal panic was caught.
   */
  SEMI_ISAC_STATUS_PANIC = 5,
};
#ifndef __cplusplus
typedef int32_t SemiIsacStatus;
#endif // __cplusplus

/**
 * Opaque system configuration.
 */
typedef struct SemiIsacConfig SemiIsacConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread, or null if none occurred. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *semiisac_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *semiisac_version(void);

/**
 * Creates a configuration from a built-in preset such as "paper-sec6".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must point to writable
 * storage for a handle. Release the handle with `semiisac_config_free`.
 */
int32_t semiisac_config_from_preset(const char *name, struct SemiIsacConfig **out);

/**
 * Creates a configuration from TOML text; unset fields come from the
 * preset it names (default "paper-sec6").
 *
 * # Safety
 * As for `semiisac_config_from_preset`.
 */
int32_t semiisac_config_from_toml(const char *toml, struct SemiIsacConfig **out);

/**
 * Sets one numeric field by its dotted configuration path, e.g.
 * "powers.P_BS_dBm". The handle is unchanged on failure.
 *
 * # Safety
 * `cfg` must be a live handle and `path` a NUL-terminated string.
 */
int32_t semiisac_config_set(struct SemiIsacConfig *cfg, const char *path, double value);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `cfg` must be null or a handle not yet freed.
 */
void semiisac_config_free(struct SemiIsacConfig *cfg);

/**
 * Evaluates a metric analytically. `user` is 0 (communication user),
 * 1 (radar target) or -1 for scenario-level metrics.
 *
 * # Safety
 * `cfg` must be a live handle, `scenario` and `metric` NUL-terminated
 * strings and `value` writable.
 */
int32_t semiisac_eval(const struct SemiIsacConfig *cfg,
                      const char *scenario,
                      const char *metric,
                      int32_t user,
                      double *value);

/**
 * Monte Carlo estimate of op, rate or reir with its confidence-interval
 * half-width (99 % level).
 *
 * # Safety
 * As for `semiisac_eval`; `ci` must be writable.
 */
int32_t semiisac_mc_eval(const struct SemiIsacConfig *cfg,
                         const char *scenario,
                         const char *metric,
                         int32_t user,
                         uint64_t samples,
                         uint64_t seed,
                         double *value,
                         double *ci);

/**
 * Runs the self-check suite with profile "quick", "default" or "full" and
 * writes the number of failed checks to `failures`.
 *
 * # Safety
 * `cfg` must be a live handle, `profile` a NUL-terminated string and
 * `failures` writable.
 */
int32_t semiisac_validate(const struct SemiIsacConfig *cfg,
                          const char *profile,
                          uint32_t *failures);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SEMIISAC_H */
