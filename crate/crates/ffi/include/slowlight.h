#ifndef SLOWLIGHT_H
#define SLOWLIGHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Full Faddeeva evaluation in every term of a series.
 */
#define SL_MODE_EXACT 0

/**
 * Two-term large-argument expansion.
 */
#define SL_MODE_ASYMPTOTIC 1

/**
 * Faddeeva only: asymptotic at and beyond a radius, exact inside.
 */
#define SL_MODE_AUTO 2

/**
 * Condensate pinhole factor 2 / (pi R^2).
 */
#define SL_FC_PAPER 0

/**
 * Condensate pinhole factor from the Gaussian integral.
 */
#define SL_FC_EXACT 1

/**
 * Result of every call.
 */
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_INVALID_CONFIG = 3,
  SL_STATUS_POLE = 4,
  SL_STATUS_DOMAIN = 5,
  SL_STATUS_DIVERGENCE = 6,
  SL_STATUS_SERIES_CAP = 7,
  SL_STATUS_SINGULAR = 8,
  SL_STATUS_UNPHYSICAL_DISPERSION = 9,
  SL_STATUS_IO = 10,
  SL_STATUS_PANIC = 11,
} SlStatus;

/**
 * Opaque experimental configuration.
 */
typedef struct SlConfig SlConfig;

/**
 * A susceptibility and its derivative with respect to the probe angular frequency.
 */
typedef struct SlResponse {
  double chi_re;
  double chi_im;
  double dchi_domega_re;
  double dchi_domega_im;
} SlResponse;

/**
 * Pinhole for trap delays. `thermal != 0` ignores `radius_m`;
 * `path_half_length_m <= 0` integrates the whole axis.
 */
typedef struct SlPinhole {
  double radius_m;
  int32_t thermal;
  double path_half_length_m;
} SlPinhole;

typedef struct SlDelay {
  double pinhole_radius_m;
  double mean_delay_s;
  double cloud_size_m;
  double group_velocity_m_s;
  /**
   * 1 below Tc, 0 at or above.
   */
  int32_t below_tc;
} SlDelay;

/**
 * Zero-temperature estimates, SI units.
 */
typedef struct SlTfReport {
  double a0_r;
  double a0_z;
  double n_ideal;
  double vg_ideal;
  double mu;
  double r_tf_r;
  double r_tf_z;
  double n_tf;
  double vg_tf;
} SlTfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the library; static, never free it.
 */
const char *sl_version(void);

/**
 * Message of the last failure on this thread, empty after a success.
 * Valid until the next call on the same thread; never free it.
 */
const char *sl_last_error_message(void);

/**
 * Parses a configuration document into a new handle.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is valid for writes.
 */
enum SlStatus sl_config_load(const char *text, struct SlConfig **out);

/**
 * Handle with the built-in sodium trap (`trap != 0`) or box configuration.
 */
struct SlConfig *sl_config_sodium(int32_t trap);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `cfg` is null or came from this library and was not freed before.
 */
void sl_config_free(struct SlConfig *cfg);

/**
 * Sets the coupling Rabi frequency in rad/s.
 *
 * # Safety
 * `cfg` is null or a live handle.
 */
enum SlStatus sl_config_set_omega_coupling(struct SlConfig *cfg, double omega_rad_s);

/**
 * g_nu(f) for 0 <= f <= 1.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum SlStatus sl_polylog(double nu, double f, double *out);

/**
 * Faddeeva function w(re + i im). `mode` is one of SL_MODE_*; `radius`
 * is used by SL_MODE_AUTO only.
 *
 * # Safety
 * `out_re` and `out_im` are valid for writes.
 */
enum SlStatus sl_faddeeva_w(double re,
                            double im,
                            uint32_t mode,
                            double radius,
                            double *out_re,
                            double *out_im);

/**
 * Critical temperature of the configured geometry, K.
 *
 * # Safety
 * `cfg` is a live handle or null; `out` is valid for writes.
 */
enum SlStatus sl_critical_temperature(const struct SlConfig *cfg, double *out);

/**
 * Fugacity at temperature T (K); 1 at and below Tc.
 *
 * # Safety
 * `cfg` is a live handle or null; `out` is valid for writes.
 */
enum SlStatus sl_fugacity(const struct SlConfig *cfg, double temperature, double *out);

/**
 * Box susceptibility at temperature T (K).
 *
 * # Safety
 * `cfg` is a live handle or null; `out` is valid for writes.
 */
enum SlStatus sl_chi_box(const struct SlConfig *cfg,
                         double temperature,
                         uint32_t mode,
                         struct SlResponse *out);

/**
 * Local trap susceptibility at (r, z) in m.
 *
 * # Safety
 * `cfg` is a live handle or null; `out` is valid for writes.
 */
enum SlStatus sl_chi_trap_local(const struct SlConfig *cfg,
                                double temperature,
                                double r,
                                double z,
                                uint32_t mode,
                                struct SlResponse *out);

/**
 * Pinhole-averaged delay in the trap.
 *
 * # Safety
 * `cfg` is a live handle or null; `pin` is valid for reads; `out` for writes.
 */
enum SlStatus sl_mean_delay(const struct SlConfig *cfg,
                            double temperature,
                            const struct SlPinhole *pin,
                            uint32_t fc,
                            uint32_t mode,
                            struct SlDelay *out);

/**
 * Group velocity in m/s: from the dispersion for a box, as cloud size
 * over pinhole-averaged delay for a trap (`pin` may be null for a box).
 *
 * # Safety
 * `cfg` is a live handle or null; `pin` is null or valid for reads; `out` for writes.
 */
enum SlStatus sl_group_velocity(const struct SlConfig *cfg,
                                double temperature,
                                const struct SlPinhole *pin,
                                uint32_t fc,
                                uint32_t mode,
                                double *out);

/**
 * Zero-temperature ideal-gas and Thomas-Fermi estimates for a trap.
 *
 * # Safety
 * `cfg` is a live handle or null; `out` is valid for writes.
 */
enum SlStatus sl_tf_report(const struct SlConfig *cfg, struct SlTfReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLOWLIGHT_H */
