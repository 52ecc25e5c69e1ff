#ifndef RIS_SSK_H
#define RIS_SSK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum RisStatus {
  RIS_STATUS_OK = 0,
  RIS_STATUS_NULL_POINTER = 1,
  RIS_STATUS_DOMAIN = 2,
  RIS_STATUS_OVERFLOW = 3,
  RIS_STATUS_DIMENSION_MISMATCH = 4,
  RIS_STATUS_EMPTY_INPUT = 5,
  RIS_STATUS_INVALID_CONFIG = 6,
  RIS_STATUS_PARSE = 7,
  RIS_STATUS_IO = 8,
  RIS_STATUS_PANIC = 9,
} RisStatus;

/**
 * Simulated model for [`ris_estimate_ped`].
 */
typedef enum RisMcMode {
  RIS_MC_MODE_EXACT = 0,
  RIS_MC_MODE_SURROGATE = 1,
} RisMcMode;

/**
 * Opaque system configuration.
 */
typedef struct RisConfig RisConfig;

typedef struct RisMcEstimate {
  double p_hat;
  double std_error;
  double ci_low;
  double ci_high;
  uint64_t errors;
  uint64_t trials;
} RisMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a configuration. `rpm_order == 0` selects SSK; otherwise SSK-RPM
 * with that constellation size. `gamma_av` is the linear average SNR.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum RisStatus ris_config_new(size_t n_elements,
                              size_t n_branches,
                              double gamma_av,
                              double k,
                              uint32_t rpm_order,
                              double m,
                              double omega,
                              double p,
                              struct RisConfig **out);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `cfg` must come from [`ris_config_new`] and not be used afterwards.
 */
void ris_config_free(struct RisConfig *cfg);

/**
 * Closed-form error probability (symbol-averaged for RPM).
 *
 * # Safety
 * `cfg` must be a live handle or null; `out` valid for one `double`.
 */
enum RisStatus ris_ped(const struct RisConfig *cfg, double *out);

/**
 * High-SNR error floor.
 *
 * # Safety
 * As for [`ris_ped`].
 */
enum RisStatus ris_ped_high_snr(const struct RisConfig *cfg, double *out);

/**
 * Low-SNR approximation.
 *
 * # Safety
 * As for [`ris_ped`].
 */
enum RisStatus ris_ped_low_snr(const struct RisConfig *cfg, double *out);

/**
 * RPM error probability conditioned on the phase `psi`.
 *
 * # Safety
 * As for [`ris_ped`].
 */
enum RisStatus ris_ped_rpm_conditional(const struct RisConfig *cfg, double psi, double *out);

/**
 * `L / (L + 1)` with `L = n_branches - 1`.
 *
 * # Safety
 * `out` must be valid for one `double`.
 */
enum RisStatus ris_ped_zero_snr(size_t n_branches, double *out);

/**
 * `(N_R / 2) * ped`; `vacuous` is set to 1 when the bound exceeds 1/2.
 *
 * # Safety
 * `out` must be valid for one `double`; `vacuous` may be null.
 */
enum RisStatus ris_ber_union_bound(double ped, size_t n_branches, double *out, uint8_t *vacuous);

/**
 * Monte-Carlo estimate. `mode` is a [`RisMcMode`] value. Results depend
 * only on the seed and trial count; `workers == 0` uses every core.
 *
 * # Safety
 * `cfg` must be a live handle or null; `out` valid for one estimate.
 */
enum RisStatus ris_estimate_ped(const struct RisConfig *cfg,
                                uint64_t trials,
                                uint64_t seed,
                                uint32_t mode,
                                size_t workers,
                                struct RisMcEstimate *out);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length without the
 * terminator. Returns 0 when no error has been recorded.
 *
 * # Safety
 * `buf` must be valid for `len` bytes, or null with `len == 0`.
 */
size_t ris_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ris_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIS_SSK_H */
