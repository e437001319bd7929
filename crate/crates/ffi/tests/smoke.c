#include <stdio.h>
#include "logpair.h"

int main(void) {
    LpSieve *sieve = NULL;
    if (lp_sieve_new(1000, &sieve) != LP_STATUS_OK) return 1;
    uint64_t phi = 0;
    if (lp_sieve_phi(sieve, 36, &phi) != LP_STATUS_OK) return 2;
    printf("phi(36)=%llu\n", (unsigned long long)phi);

    LpConstant c;
    if (lp_c_abk_product(sieve, 1, 1, 1, 1000, &c) != LP_STATUS_OK) return 3;
    printf("c111=%.17g tail=%.3g cutoff=%llu\n", c.value, c.tail_bound, (unsigned long long)c.cutoff);

    LpMeasure *m = NULL;
    if (lp_measure_new(1, 1, LP_WEIGHTS_TRIVIAL, LP_SCALING_LINEAR, 0.0, 200, NULL, &m) != LP_STATUS_OK) return 4;
    LpU128 mass;
    if (lp_measure_total_mass(m, &mass) != LP_STATUS_OK) return 5;
    printf("mass=%llu\n", (unsigned long long)mass.lo);
    lp_measure_free(m);

    enum LpStatus st = lp_c_ab(0, 1, 100, &c);
    printf("status=%d message=%s detail=%s\n", (int)st, lp_status_message(st), lp_last_error_message());
    lp_sieve_free(sieve);
    return 0;
}
