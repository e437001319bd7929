//! C ABI over `logpair`: opaque sieve and measure handles, status codes, and
//! plain-value results written through out-pointers.
//!
//! Every function returns an [`LpStatus`]. On failure the out-pointers are
//! left untouched and [`lp_last_error_message`] describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use logpair::arith::{self, Sieve};
use logpair::family::{ScalingKind, ScalingSpec, WeightMode, WeightedLogFamily};
use logpair::limits::{self, ConstantCache, LimitDensity};
use logpair::measures::{self, AtomicMeasure, TestFunction};
use logpair::{modular, Error};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    EmptyMeasure = 4,
    Config = 5,
    Panic = 6,
}

/// Weight multiplicities, passed as `uint32_t`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpWeights {
    Trivial = 0,
    Euler = 1,
}

/// Scaling function, passed as `uint32_t`; `alpha` is read only for `Power`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpScaling {
    Trivial = 0,
    Power = 1,
    Linear = 2,
    InverseAverageGap = 3,
}

/// Unsigned 128-bit integer as two 64-bit halves.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LpU128 {
    pub lo: u64,
    pub hi: u64,
}

impl From<u128> for LpU128 {
    fn from(v: u128) -> Self {
        LpU128 {
            lo: v as u64,
            hi: (v >> 64) as u64,
        }
    }
}

impl LpU128 {
    pub fn get(self) -> u128 {
        (u128::from(self.hi) << 64) | u128::from(self.lo)
    }
}

/// Truncated constant with its absolute tail bound and prime cutoff.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LpConstant {
    pub value: f64,
    pub tail_bound: f64,
    pub cutoff: u64,
}

/// Sieve of φ, μ and least prime factors.
pub struct LpSieve {
    inner: Sieve,
}

/// Pair correlation measure together with its scaling and horizon.
pub struct LpMeasure {
    inner: AtomicMeasure,
    spec: ScalingSpec,
    n: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LpStatus {
    match e {
        Error::InvalidArgument(_) => LpStatus::InvalidArgument,
        Error::Capacity { .. } => LpStatus::Capacity,
        Error::EmptyMeasure => LpStatus::EmptyMeasure,
        Error::Config(_) => LpStatus::Config,
    }
}

enum Fail {
    Null,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> LpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            LpStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            LpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(v);
    Ok(())
}

fn weights_of(w: u32) -> Result<WeightMode, Fail> {
    match w {
        x if x == LpWeights::Trivial as u32 => Ok(WeightMode::Trivial),
        x if x == LpWeights::Euler as u32 => Ok(WeightMode::Euler),
        _ => Err(Error::InvalidArgument(format!("unknown weights code {w}")).into()),
    }
}

fn scaling_of(s: u32, alpha: f64) -> Result<ScalingKind, Fail> {
    match s {
        x if x == LpScaling::Trivial as u32 => Ok(ScalingKind::Trivial),
        x if x == LpScaling::Power as u32 => Ok(ScalingKind::Power(alpha)),
        x if x == LpScaling::Linear as u32 => Ok(ScalingKind::Linear),
        x if x == LpScaling::InverseAverageGap as u32 => Ok(ScalingKind::InverseAverageGap),
        _ => Err(Error::InvalidArgument(format!("unknown scaling code {s}")).into()),
    }
}

fn constant(c: arith::ArithmeticConstant) -> LpConstant {
    LpConstant {
        value: c.value,
        tail_bound: c.tail_bound,
        cutoff: c.prime_cutoff,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn lp_status_message(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"capacity exceeded\0",
        4 => b"measure has zero total mass\0",
        5 => b"configuration error\0",
        6 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writes. Release the handle with `lp_sieve_free`.
#[no_mangle]
pub unsafe extern "C" fn lp_sieve_new(limit: u64, out: *mut *mut LpSieve) -> LpStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let s = Box::new(LpSieve {
            inner: Sieve::new(limit)?,
        });
        write(out, Box::into_raw(s))
    })
}

/// # Safety
/// `sieve` must come from `lp_sieve_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_sieve_free(sieve: *mut LpSieve) {
    if !sieve.is_null() {
        drop(Box::from_raw(sieve));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_sieve_limit(sieve: *const LpSieve, out: *mut u64) -> LpStatus {
    guard(|| write(out, deref(sieve)?.inner.limit()))
}

/// φ(n) for 1 <= n <= limit.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_sieve_phi(sieve: *const LpSieve, n: u64, out: *mut u64) -> LpStatus {
    guard(|| {
        let s = &deref(sieve)?.inner;
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()).into());
        }
        s.check_covers(n)?;
        write(out, s.phi(n))
    })
}

/// μ(n) for 1 <= n <= limit.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_sieve_mu(sieve: *const LpSieve, n: u64, out: *mut i8) -> LpStatus {
    guard(|| {
        let s = &deref(sieve)?.inner;
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()).into());
        }
        s.check_covers(n)?;
        write(out, s.mu(n))
    })
}

/// c_{a,b}.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lp_c_ab(a: u64, b: u64, prime_cutoff: u64, out: *mut LpConstant) -> LpStatus {
    guard(|| write(out, constant(arith::c_ab(a, b, prime_cutoff)?)))
}

/// Truncated Euler product c_{a,b,k}.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_c_abk_product(
    sieve: *const LpSieve,
    a: u64,
    b: u64,
    k: u64,
    prime_cutoff: u64,
    out: *mut LpConstant,
) -> LpStatus {
    guard(|| {
        let c = arith::c_abk_product(&deref(sieve)?.inner, a, b, k, prime_cutoff)?;
        write(out, constant(c))
    })
}

/// Double Möbius series for c_{a,b,k} truncated at `depth`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_c_abk_series(
    sieve: *const LpSieve,
    a: u64,
    b: u64,
    k: u64,
    depth: u64,
    out: *mut f64,
) -> LpStatus {
    guard(|| write(out, arith::c_abk_series(&deref(sieve)?.inner, a, b, k, depth)?))
}

/// Horizontal asymptote of the Euler-weighted linear density.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_asymptote_constant(
    sieve: *const LpSieve,
    prime_cutoff: u64,
    out: *mut LpConstant,
) -> LpStatus {
    guard(|| write(out, constant(arith::asymptote_constant(&deref(sieve)?.inner, prime_cutoff)?)))
}

/// Σ_{n<=x, n≡a (b)} φ(n)φ(n+k).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_mirsky_sum(
    sieve: *const LpSieve,
    x: f64,
    a: u64,
    b: u64,
    k: u64,
    out: *mut LpU128,
) -> LpStatus {
    guard(|| write(out, arith::mirsky_sum(&deref(sieve)?.inner, x, a, b, k)?.into()))
}

/// Σ_{n<=x, n≡a (b)} φ(n).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_mertens_sum(
    sieve: *const LpSieve,
    x: f64,
    a: u64,
    b: u64,
    out: *mut LpU128,
) -> LpStatus {
    guard(|| write(out, arith::mertens_congruence_sum(&deref(sieve)?.inner, x, a, b)?.into()))
}

/// #{1 <= n <= y : n ≡ α₀ (α), n ≡ β₀ (β)}.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lp_count_bi_congruence(
    y: f64,
    alpha0: i64,
    alpha: u64,
    beta0: i64,
    beta: u64,
    out: *mut u64,
) -> LpStatus {
    guard(|| write(out, arith::count_bi_congruence(y, alpha0, alpha, beta0, beta)?))
}

/// Builds the pair correlation measure of {ln n : n ≡ a (b), n <= N}.
/// `sieve` may be null for trivial weights.
///
/// # Safety
/// Pointers must be valid. Release the handle with `lp_measure_free`.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_new(
    a: u64,
    b: u64,
    weights: u32,
    scaling: u32,
    alpha: f64,
    n: u64,
    sieve: *const LpSieve,
    out: *mut *mut LpMeasure,
) -> LpStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let w = weights_of(weights)?;
        let sieve = sieve.as_ref().map(|s| &s.inner);
        let family = WeightedLogFamily::new(a, b, w)?;
        let spec = ScalingSpec::for_weights(w, scaling_of(scaling, alpha)?)?;
        let inner = measures::build_pair_correlation(&family, n, &spec, sieve)?;
        write(out, Box::into_raw(Box::new(LpMeasure { inner, spec, n })))
    })
}

/// # Safety
/// `measure` must come from `lp_measure_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_free(measure: *mut LpMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

/// Exact total mass.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_total_mass(measure: *const LpMeasure, out: *mut LpU128) -> LpStatus {
    guard(|| write(out, deref(measure)?.inner.total_mass().into()))
}

/// Exact mass on the closed interval [lo, hi].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_mass_in(
    measure: *const LpMeasure,
    lo: f64,
    hi: f64,
    out: *mut LpU128,
) -> LpStatus {
    guard(|| write(out, deref(measure)?.inner.mass_in(lo, hi).into()))
}

/// The normaliser ψ′(N) attached to the measure's scaling.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_normalizer(measure: *const LpMeasure, out: *mut f64) -> LpStatus {
    guard(|| {
        let m = deref(measure)?;
        write(out, m.spec.normalizer_value(m.n, m.inner.total_mass() as f64)?)
    })
}

/// Empirical CDF at `s`, normalised to a probability measure.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_cdf(measure: *const LpMeasure, s: f64, out: *mut f64) -> LpStatus {
    guard(|| write(out, deref(measure)?.inner.cdf(s)?))
}

/// Pairing with the hat of height 1 at `center` and half-width `half_width`,
/// divided by the measure's normaliser.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_pair_hat(
    measure: *const LpMeasure,
    center: f64,
    half_width: f64,
    out: *mut f64,
) -> LpStatus {
    guard(|| {
        let m = deref(measure)?;
        let hat = TestFunction::hat(center, half_width)?;
        let norm = m.spec.normalizer_value(m.n, m.inner.total_mass() as f64)?;
        write(out, m.inner.pair(&hat, norm)?)
    })
}

/// Normalised histogram densities on [lo, hi) into `densities[0..bins]`.
///
/// # Safety
/// `measure` must be valid and `densities` valid for `bins` writes.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_histogram(
    measure: *const LpMeasure,
    lo: f64,
    hi: f64,
    bins: usize,
    densities: *mut f64,
) -> LpStatus {
    guard(|| {
        let m = deref(measure)?;
        if densities.is_null() {
            return Err(Fail::Null);
        }
        let norm = m.spec.normalizer_value(m.n, m.inner.total_mass() as f64)?;
        let h = m.inner.bin(lo, hi, bins, norm)?;
        let out = std::slice::from_raw_parts_mut(densities, bins);
        for (o, d) in out.iter_mut().zip(h.densities()) {
            *o = d;
        }
        Ok(())
    })
}

/// Whether the measure is exactly invariant under u ↦ −u.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_measure_is_symmetric(measure: *const LpMeasure, out: *mut bool) -> LpStatus {
    guard(|| write(out, deref(measure)?.inner.check_sg_symmetry()))
}

/// ½e^{−|s|}.
#[no_mangle]
pub extern "C" fn lp_g_unscaled_trivial(s: f64) -> f64 {
    limits::g_unscaled_trivial(s)
}

/// e^{−2|s|}.
#[no_mangle]
pub extern "C" fn lp_g_unscaled_euler(s: f64) -> f64 {
    limits::g_unscaled_euler(s)
}

/// θ_∞(t) for modulus b and slope λ.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lp_g_linear_trivial(t: f64, b: u64, lambda: f64, out: *mut f64) -> LpStatus {
    guard(|| write(out, LimitDensity::linear_trivial(b, lambda)?.eval(t)))
}

/// g_linear_euler at each of `s[0..len]`, with constants at `prime_cutoff`.
///
/// # Safety
/// `sieve` must be valid; `s` valid for `len` reads and `out` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lp_g_linear_euler(
    sieve: *const LpSieve,
    a: u64,
    b: u64,
    prime_cutoff: u64,
    s: *const f64,
    len: usize,
    out: *mut f64,
) -> LpStatus {
    guard(|| {
        let sv = &deref(sieve)?.inner;
        if len > 0 && (s.is_null() || out.is_null()) {
            return Err(Fail::Null);
        }
        if len == 0 {
            return Ok(());
        }
        let xs = std::slice::from_raw_parts(s, len);
        let s_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !s_max.is_finite() {
            return Err(Error::InvalidArgument("s must be finite".into()).into());
        }
        let cache = ConstantCache::new(sv, prime_cutoff)?;
        let density = LimitDensity::linear_euler(a, b, s_max, &cache)?;
        let ys = std::slice::from_raw_parts_mut(out, len);
        for (y, &x) in ys.iter_mut().zip(xs) {
            *y = density.eval(x);
        }
        Ok(())
    })
}

/// Atom-exact comparison of the ortholength pair correlation with the doubled
/// log measure; `equal` receives the verdict.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lp_ortholength_identity_check(
    sieve: *const LpSieve,
    b: u64,
    n: u64,
    scaling: u32,
    alpha: f64,
    equal: *mut bool,
) -> LpStatus {
    guard(|| {
        let spec = ScalingSpec::with_default_normalizer(scaling_of(scaling, alpha)?)?;
        let r = modular::ortholength_identity_check(&deref(sieve)?.inner, b, n, &spec)?;
        write(equal, r.equal)
    })
}
