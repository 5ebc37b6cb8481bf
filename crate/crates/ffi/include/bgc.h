#ifndef BGC_H
#define BGC_H

/* Generated from the bgc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum BgcStatus {
  /**
   * Success.
   */
  BgcStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  BgcStatus_NullPointer = 1,
  /**
   * A parameter was outside its admissible domain.
   */
  BgcStatus_InvalidParameter = 2,
  /**
   * Parameters describe a map that is not a physical channel.
   */
  BgcStatus_NonPhysical = 3,
  /**
   * A numerical routine failed (truncation budget, rank, eigensolver).
   */
  BgcStatus_Numerical = 4,
} BgcStatus;

/**
 * Opaque handle to a single-mode channel.
 */
typedef struct BgcChannel BgcChannel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a thermal attenuator of transmissivity `eta` coupled to an
 * environment with mean photon number `n_env`.
 *
 * # Safety
 * `out` must point to writable memory for one handle pointer.
 */
enum BgcStatus bgc_channel_thermal(double eta, double n_env, struct BgcChannel **out);

/**
 * Create an additive classical-noise channel adding `n` photons on average.
 *
 * # Safety
 * `out` must point to writable memory for one handle pointer.
 */
enum BgcStatus bgc_channel_additive_noise(double n, struct BgcChannel **out);

/**
 * Create an amplifier of gain `kappa` coupled to an environment with mean
 * photon number `n_env`.
 *
 * # Safety
 * `out` must point to writable memory for one handle pointer.
 */
enum BgcStatus bgc_channel_amplifier(double kappa, double n_env, struct BgcChannel **out);

/**
 * Create the phase-conjugating counterpart of the amplifier, whose output
 * is the idler mode.
 *
 * # Safety
 * `out` must point to writable memory for one handle pointer.
 */
enum BgcStatus bgc_channel_contra_amplifier(double kappa, double n_env, struct BgcChannel **out);

/**
 * Release a channel handle. Passing null is a no-op.
 *
 * # Safety
 * `channel` must be null or a handle produced by a `bgc_channel_*`
 * constructor that has not been freed yet.
 */
void bgc_channel_free(struct BgcChannel *channel);

/**
 * Classical capacity in bits per use under a mean photon-number constraint
 * `energy` at the input, assuming the minimum output entropy is attained on
 * the vacuum.
 *
 * # Safety
 * `channel` must be a live handle; `out` must point to writable memory for
 * one `double`.
 */
enum BgcStatus bgc_channel_capacity(const struct BgcChannel *channel, double energy, double *out);

/**
 * Minimum output entropy in bits, attained on the vacuum input.
 *
 * # Safety
 * `channel` must be a live handle; `out` must point to writable memory for
 * one `double`.
 */
enum BgcStatus bgc_channel_min_output_entropy(const struct BgcChannel *channel, double *out);

/**
 * Canonical form `(tau, y, conjugating)` of the channel: transmissivity or
 * gain `tau`, additive noise `y`, and whether the map conjugates phase.
 *
 * # Safety
 * `channel` must be a live handle; `tau`, `y`, and `conjugating` must each
 * point to writable memory for one value.
 */
enum BgcStatus bgc_channel_canonical(const struct BgcChannel *channel,
                                     double *tau,
                                     double *y,
                                     bool *conjugating);

/**
 * Factor the channel into a quantum-limited loss of transmissivity `eta0`
 * followed by a quantum-limited amplification of gain `kappa0`; for
 * conjugating channels the second stage conjugates phase.
 *
 * # Safety
 * `channel` must be a live handle; `eta0`, `kappa0`, and `conjugating` must
 * each point to writable memory for one value.
 */
enum BgcStatus bgc_channel_decompose(const struct BgcChannel *channel,
                                     double *eta0,
                                     double *kappa0,
                                     bool *conjugating);

/**
 * Whether the channel destroys all input entanglement.
 *
 * # Safety
 * `channel` must be a live handle; `out` must point to writable memory for
 * one `bool`.
 */
enum BgcStatus bgc_channel_is_entanglement_breaking(const struct BgcChannel *channel, bool *out);

/**
 * Entanglement of formation, in ebits, of the two-mode squeezed thermal
 * state with gain parameter `kappa` and environment population `n_env`.
 *
 * # Safety
 * `out` must point to writable memory for one `double`.
 */
enum BgcStatus bgc_entanglement_of_formation(double kappa, double n_env, double *out);

/**
 * Entropy of a thermal state with mean photon number `x`, in bits:
 * `(x+1) log2(x+1) - x log2(x)`.
 */
double bgc_g(double x);

/**
 * Static, null-terminated name of a status code.
 */
const char *bgc_status_name(enum BgcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BGC_H */
