#ifndef LOGPAIR_H
#define LOGPAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Scaling function, passed as `uint32_t`; `alpha` is read only for `Power`.
 */
typedef enum LpScaling {
  LP_SCALING_TRIVIAL = 0,
  LP_SCALING_POWER = 1,
  LP_SCALING_LINEAR = 2,
  LP_SCALING_INVERSE_AVERAGE_GAP = 3,
} LpScaling;

/**
 * Status codes.
 */
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  LP_STATUS_INVALID_ARGUMENT = 2,
  LP_STATUS_CAPACITY = 3,
  LP_STATUS_EMPTY_MEASURE = 4,
  LP_STATUS_CONFIG = 5,
  LP_STATUS_PANIC = 6,
} LpStatus;

/**
 * Weight multiplicities, passed as `uint32_t`.
 */
typedef enum LpWeights {
  LP_WEIGHTS_TRIVIAL = 0,
  LP_WEIGHTS_EULER = 1,
} LpWeights;

/**
 * Pair correlation measure together with its scaling and horizon.
 */
typedef struct LpMeasure LpMeasure;

/**
 * Sieve of φ, μ and least prime factors.
 */
typedef struct LpSieve LpSieve;

/**
 * Truncated constant with its absolute tail bound and prime cutoff.
 */
typedef struct LpConstant {
  double value;
  double tail_bound;
  uint64_t cutoff;
} LpConstant;

/**
 * Unsigned 128-bit integer as two 64-bit halves.
 */
typedef struct LpU128 {
  uint64_t lo;
  uint64_t hi;
} LpU128;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *lp_status_message(int32_t status);

/**
 * Message of the last failure on this thread; valid until the next failing call.
 */
const char *lp_last_error_message(void);

/**
 * # Safety
 * `out` must be valid for writes. Release the handle with `lp_sieve_free`.
 */
enum LpStatus lp_sieve_new(uint64_t limit, struct LpSieve **out);

/**
 * # Safety
 * `sieve` must come from `lp_sieve_new` and not be used afterwards. Null is ignored.
 */
void lp_sieve_free(struct LpSieve *sieve);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_sieve_limit(const struct LpSieve *sieve, uint64_t *out);

/**
 * φ(n) for 1 <= n <= limit.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_sieve_phi(const struct LpSieve *sieve, uint64_t n, uint64_t *out);

/**
 * μ(n) for 1 <= n <= limit.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_sieve_mu(const struct LpSieve *sieve, uint64_t n, int8_t *out);

/**
 * c_{a,b}.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LpStatus lp_c_ab(uint64_t a, uint64_t b, uint64_t prime_cutoff, struct LpConstant *out);

/**
 * Truncated Euler product c_{a,b,k}.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_c_abk_product(const struct LpSieve *sieve,
                               uint64_t a,
                               uint64_t b,
                               uint64_t k,
                               uint64_t prime_cutoff,
                               struct LpConstant *out);

/**
 * Double Möbius series for c_{a,b,k} truncated at `depth`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_c_abk_series(const struct LpSieve *sieve,
                              uint64_t a,
                              uint64_t b,
                              uint64_t k,
                              uint64_t depth,
                              double *out);

/**
 * Horizontal asymptote of the Euler-weighted linear density.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_asymptote_constant(const struct LpSieve *sieve,
                                    uint64_t prime_cutoff,
                                    struct LpConstant *out);

/**
 * Σ_{n<=x, n≡a (b)} φ(n)φ(n+k).
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_mirsky_sum(const struct LpSieve *sieve,
                            double x,
                            uint64_t a,
                            uint64_t b,
                            uint64_t k,
                            struct LpU128 *out);

/**
 * Σ_{n<=x, n≡a (b)} φ(n).
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_mertens_sum(const struct LpSieve *sieve,
                             double x,
                             uint64_t a,
                             uint64_t b,
                             struct LpU128 *out);

/**
 * #{1 <= n <= y : n ≡ α₀ (α), n ≡ β₀ (β)}.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LpStatus lp_count_bi_congruence(double y,
                                     int64_t alpha0,
                                     uint64_t alpha,
                                     int64_t beta0,
                                     uint64_t beta,
                                     uint64_t *out);

/**
 * Builds the pair correlation measure of {ln n : n ≡ a (b), n <= N}.
 * `sieve` may be null for trivial weights.
 *
 * # Safety
 * Pointers must be valid. Release the handle with `lp_measure_free`.
 */
enum LpStatus lp_measure_new(uint64_t a,
                             uint64_t b,
                             uint32_t weights,
                             uint32_t scaling,
                             double alpha,
                             uint64_t n,
                             const struct LpSieve *sieve,
                             struct LpMeasure **out);

/**
 * # Safety
 * `measure` must come from `lp_measure_new` and not be used afterwards. Null is ignored.
 */
void lp_measure_free(struct LpMeasure *measure);

/**
 * Exact total mass.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_total_mass(const struct LpMeasure *measure, struct LpU128 *out);

/**
 * Exact mass on the closed interval [lo, hi].
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_mass_in(const struct LpMeasure *measure,
                                 double lo,
                                 double hi,
                                 struct LpU128 *out);

/**
 * The normaliser ψ′(N) attached to the measure's scaling.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_normalizer(const struct LpMeasure *measure, double *out);

/**
 * Empirical CDF at `s`, normalised to a probability measure.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_cdf(const struct LpMeasure *measure, double s, double *out);

/**
 * Pairing with the hat of height 1 at `center` and half-width `half_width`,
 * divided by the measure's normaliser.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_pair_hat(const struct LpMeasure *measure,
                                  double center,
                                  double half_width,
                                  double *out);

/**
 * Normalised histogram densities on [lo, hi) into `densities[0..bins]`.
 *
 * # Safety
 * `measure` must be valid and `densities` valid for `bins` writes.
 */
enum LpStatus lp_measure_histogram(const struct LpMeasure *measure,
                                   double lo,
                                   double hi,
                                   size_t bins,
                                   double *densities);

/**
 * Whether the measure is exactly invariant under u ↦ −u.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_measure_is_symmetric(const struct LpMeasure *measure, bool *out);

/**
 * ½e^{−|s|}.
 */
double lp_g_unscaled_trivial(double s);

/**
 * e^{−2|s|}.
 */
double lp_g_unscaled_euler(double s);

/**
 * θ_∞(t) for modulus b and slope λ.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LpStatus lp_g_linear_trivial(double t, uint64_t b, double lambda, double *out);

/**
 * g_linear_euler at each of `s[0..len]`, with constants at `prime_cutoff`.
 *
 * # Safety
 * `sieve` must be valid; `s` valid for `len` reads and `out` for `len` writes.
 */
enum LpStatus lp_g_linear_euler(const struct LpSieve *sieve,
                                uint64_t a,
                                uint64_t b,
                                uint64_t prime_cutoff,
                                const double *s,
                                size_t len,
                                double *out);

/**
 * Atom-exact comparison of the ortholength pair correlation with the doubled
 * log measure; `equal` receives the verdict.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LpStatus lp_ortholength_identity_check(const struct LpSieve *sieve,
                                            uint64_t b,
                                            uint64_t n,
                                            uint32_t scaling,
                                            double alpha,
                                            bool *equal);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGPAIR_H */
