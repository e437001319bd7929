//! Arithmetic layer: sieve, congruence sums and their Euler-product constants.

mod congruence;
mod constants;
mod multiplicative;
mod series;
mod sieve;
mod sums;

pub use congruence::{chi_d, chi_star_d, count_bi_congruence, psi_d};
pub use constants::{
    abk_local_factor, c_ab, c_abk_lower_bound, c_abk_product, c_abk_product_with_primes,
    lambda_abk, mirsky_asymptotic, mirsky_main_term, ArithmeticConstant, ConstantKind,
    DEFAULT_PRIME_CUTOFF,
};
pub use multiplicative::{
    asymptote_constant, c1_constant, dirichlet_convolution, mult_f, mult_f_mobius, sum_n3_f,
    totient_square_constant,
};
pub use series::{c_abk_series, c_abk_series_direct};
pub use sieve::{prime_factors, Sieve, MAX_SIEVE_LIMIT};
pub use sums::{
    mertens_congruence_sum, mertens_congruence_sums_at, mirsky_sum, mirsky_sums_at, MIRSKY_MAX_X,
};

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
