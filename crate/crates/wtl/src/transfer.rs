//! The bound-transfer chain: from a poly-logarithmic bound on the number of
//! arbitrary linear measurements to an explicit bound on the number of
//! function evaluations, with every constant spelled out.
//!
//! The chain runs: profile `(A, B)` -> Gelfand-width decay -> linear-width
//! decay (the `1 + sqrt(n)` factor) -> sampling-width decay (the summed-tail
//! inequality with its universal constant `b`) -> evaluation count. The
//! universal constants `b` and `D` are not known numerically; they are
//! explicit configuration with idealized defaults, never hidden guesses.
//!
//! Auxiliary tail/gamma/power-exp bounds used inside the chain are exposed
//! with independent oracles so every inequality can be verified numerically.

use crate::error::{Error, Result};
use crate::io::{fmt_count, fmt_sci, json_escape};
use crate::Real;

/// Inequality verifications accept `lhs <= rhs * (1 + REL_TOL)`.
pub const REL_TOL: f64 = 1e-9;

/// The pair `(A, B)` of a poly-logarithmic complexity bound
/// `n(eps) <= A (1 + ln eps^{-1})^B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityProfile<F> {
    a: F,
    b: F,
}

impl<F: Real> ComplexityProfile<F> {
    pub fn new(a: F, b: F) -> Result<Self> {
        if !(a >= F::one() && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "profile needs A >= 1, got {a}"
            )));
        }
        if !(b > F::zero() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "profile needs B > 0, got {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> F {
        self.a
    }

    pub fn b(&self) -> F {
        self.b
    }
}

/// Universal constants that the theory asserts exist but does not pin down
/// numerically. Defaults are the idealized values `b = 1`, `r = 1`, `D = 1`
/// and must be labeled as such in all output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants<F> {
    /// Index-inflation constant of the sampling-width tail inequality.
    pub dku_b: u64,
    /// Tail exponent of the same inequality, in (0, 2).
    pub dku_r: F,
    /// Absolute constant of the weak-tractability transfer.
    pub weak_d: F,
}

impl<F: Real> BoundConstants<F> {
    pub fn new(dku_b: u64, dku_r: F, weak_d: F) -> Result<Self> {
        if dku_b < 1 {
            return Err(Error::InvalidParameter("b must be >= 1".into()));
        }
        if !(dku_r > F::zero() && dku_r < F::of(2.0)) {
            return Err(Error::InvalidParameter(format!(
                "r must lie in (0, 2), got {dku_r}"
            )));
        }
        if !(weak_d > F::zero() && weak_d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "D must be > 0, got {weak_d}"
            )));
        }
        Ok(Self {
            dku_b,
            dku_r,
            weak_d,
        })
    }

    pub fn idealized() -> Self {
        Self {
            dku_b: 1,
            dku_r: F::one(),
            weak_d: F::one(),
        }
    }

    pub fn is_idealized(&self) -> bool {
        self.dku_b == 1 && self.dku_r == F::one() && self.weak_d == F::one()
    }
}

impl<F: Real> Default for BoundConstants<F> {
    fn default() -> Self {
        Self::idealized()
    }
}

fn check_eps_open<F: Real>(eps: F) -> Result<F> {
    if !(eps > F::zero() && eps < F::one()) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(-eps.ln())
}

fn check_eps_half_open<F: Real>(eps: F) -> Result<F> {
    if !(eps > F::zero() && eps <= F::one()) {
        return Err(Error::Domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(-eps.ln())
}

fn ceil_count<F: Real>(x: F) -> Option<u64> {
    if !x.is_finite() {
        return None;
    }
    x.ceil().to_u64()
}

/// Gelfand-width decay implied by the profile:
/// `c_n <= e * exp(-(n/A)^(1/B))`, valid for `n >= A`.
pub fn gelfand_bound_from_profile<F: Real>(p: &ComplexityProfile<F>, n: F) -> Result<F> {
    if !(n >= p.a()) {
        return Err(Error::Domain(format!(
            "bound is only claimed for n >= A = {}, got n = {n}",
            p.a()
        )));
    }
    Ok(F::one().exp() * (-(n / p.a()).powf(p.b().recip())).exp())
}

/// Complexity bound recovered from the Gelfand decay, real-valued:
/// `A (1 + ln eps^{-1})^B + 1` for `eps` in (0, 1].
pub fn complexity_bound_from_gelfand_real<F: Real>(
    p: &ComplexityProfile<F>,
    eps: F,
) -> Result<F> {
    let ln_inv = check_eps_half_open(eps)?;
    Ok(p.a() * (F::one() + ln_inv).powf(p.b()) + F::one())
}

/// Measurement count recovered from the Gelfand decay
/// (ceiling of the real-valued bound).
pub fn complexity_bound_from_gelfand<F: Real>(p: &ComplexityProfile<F>, eps: F) -> Result<u64> {
    let real = complexity_bound_from_gelfand_real(p, eps)?;
    ceil_count(real).ok_or_else(|| Error::Range(format!("bound {real} exceeds u64")))
}

/// Linear-width bound from a Gelfand width: `a_n <= (1 + sqrt(n)) c_n`.
pub fn pietsch_bound<F: Real>(c_value: F, n: u64) -> Result<F> {
    if !(c_value >= F::zero()) {
        return Err(Error::InvalidParameter(format!(
            "width must be >= 0, got {c_value}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok((F::one() + F::of_u64(n).sqrt()) * c_value)
}

/// Source of the linear-width tail `a_k`, `k >= 1`.
pub enum TailSource<'a, F> {
    /// Stored values `a_1, a_2, ...`; tail sums run to the end of storage.
    Sequence(&'a [F]),
    /// Evaluable `k -> a_k`; tail sums truncate by the term/partial-sum rule
    /// with a hard term budget.
    Function(&'a (dyn Fn(u64) -> F + Sync)),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkuBound<F> {
    /// Index the bound applies to: `b * n`.
    pub index: u64,
    /// `((1/n) sum_{k>=n} a_k^r)^(1/r)`, an upper bound on the sampling
    /// width at `index`.
    pub value: F,
}

const TAIL_TERM_BUDGET: u64 = 100_000_000;

/// Sampling-width bound from summed linear widths:
/// `e_{bn} <= ((1/n) sum_{k>=n} a_k^r)^(1/r)` for `n >= 2`.
pub fn dku_bound<F: Real>(
    a_tail: TailSource<'_, F>,
    n: u64,
    consts: &BoundConstants<F>,
) -> Result<DkuBound<F>> {
    if n < 2 {
        return Err(Error::Domain(format!("dku bound needs n >= 2, got {n}")));
    }
    let r = consts.dku_r;
    let threshold = F::of(1e-17);
    let mut sum = F::zero();
    match a_tail {
        TailSource::Sequence(values) => {
            if (values.len() as u64) < n {
                return Err(Error::InsufficientLength(format!(
                    "tail from k = {n} requested, {} linear widths stored",
                    values.len()
                )));
            }
            for (i, &a) in values.iter().enumerate().skip(n as usize - 1) {
                if !(a >= F::zero()) {
                    return Err(Error::InvalidParameter(format!(
                        "a_{} = {a} is negative",
                        i + 1
                    )));
                }
                sum += a.powf(r);
            }
        }
        TailSource::Function(f) => {
            let mut k = n;
            loop {
                let a = f(k);
                if !(a >= F::zero()) {
                    return Err(Error::InvalidParameter(format!("a_{k} = {a} is negative")));
                }
                let term = a.powf(r);
                sum += term;
                if term == F::zero() || term < threshold * sum {
                    break;
                }
                if k - n >= TAIL_TERM_BUDGET {
                    return Err(Error::Divergent(format!(
                        "tail sum of a_k^r from k = {n} did not converge within {TAIL_TERM_BUDGET} terms"
                    )));
                }
                k += 1;
            }
        }
    }
    let value = (sum / F::of_u64(n)).powf(r.recip());
    Ok(DkuBound {
        index: consts.dku_b * n,
        value,
    })
}

/// The explicit transfer constant `C = 3 b A (ln(36 A) (1 + B^3))^B`.
///
/// Stated for the tail exponent `r = 1`; other values are rejected.
pub fn theorem_main1_constant<F: Real>(
    p: &ComplexityProfile<F>,
    consts: &BoundConstants<F>,
) -> Result<F> {
    if consts.dku_r != F::one() {
        return Err(Error::Unsupported(format!(
            "the explicit constant is stated for r = 1, got r = {}",
            consts.dku_r
        )));
    }
    let a = p.a();
    let b = p.b();
    let three_b = F::of(3.0) * F::of_u64(consts.dku_b);
    Ok(three_b * a * ((F::of(36.0) * a).ln() * (F::one() + b.powi(3))).powf(b))
}

/// Un-ceiled evaluation-count bound at `ln eps^{-1} = ln_inv >= 0`.
///
/// This is the single evaluation path shared by every reduction; callers
/// that need bit-identical reductions construct their profile and call this.
pub fn n_std_real_at_ln<F: Real>(
    p: &ComplexityProfile<F>,
    consts: &BoundConstants<F>,
    ln_inv: F,
) -> Result<F> {
    if !(ln_inv >= F::zero()) {
        return Err(Error::Domain(format!(
            "ln eps^{{-1}} must be >= 0, got {ln_inv}"
        )));
    }
    let c = theorem_main1_constant(p, consts)?;
    Ok(c * (F::one() + ln_inv).powf(p.b()))
}

/// Un-ceiled evaluation-count bound for `eps` in (0, 1].
pub fn n_std_bound_real<F: Real>(
    p: &ComplexityProfile<F>,
    consts: &BoundConstants<F>,
    eps: F,
) -> Result<F> {
    let ln_inv = check_eps_half_open(eps)?;
    n_std_real_at_ln(p, consts, ln_inv)
}

/// Evaluation-count bound `ceil(C (1 + ln eps^{-1})^B)` for `eps` in (0, 1).
pub fn n_std_bound<F: Real>(
    p: &ComplexityProfile<F>,
    consts: &BoundConstants<F>,
    eps: F,
) -> Result<u64> {
    let ln_inv = check_eps_open(eps)?;
    let real = n_std_real_at_ln(p, consts, ln_inv)?;
    ceil_count(real).ok_or_else(|| Error::Range(format!("bound {real} exceeds u64")))
}

#[derive(Debug, Clone)]
pub struct CorollaryMainBound<F> {
    /// Exact reduction value: the evaluation-count bound for
    /// `A = c d^q + 1`, `B = p`.
    pub n_std: Option<u64>,
    pub n_std_real: F,
    pub profile: ComplexityProfile<F>,
    /// Smallest constant that makes the factored display form dominate the
    /// exact bound on the reference grid `d in 1..=32`, `eps = e^{-k}`,
    /// `k in 0..=20`.
    pub display_constant: F,
    /// `display_constant * d^q (1 + ln d)^p (1 + ln eps^{-1})^p`.
    pub display_value: F,
}

/// The reduction profile of the polynomial-family transfer:
/// `A = c d^q + 1`, `B = p`.
pub fn corollary_reduction_profile<F: Real>(
    c: F,
    p_exp: F,
    q: F,
    d: u64,
) -> Result<ComplexityProfile<F>> {
    if !(c > F::zero()) || !(p_exp > F::zero()) || !(q >= F::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need c > 0, p > 0, q >= 0; got c={c}, p={p_exp}, q={q}"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let df = F::of_u64(d);
    ComplexityProfile::new(c * df.powf(q) + F::one(), p_exp)
}

/// Evaluation-count bound under a polynomial-in-d profile family
/// `n_all <= c d^q (1 + ln eps^{-1})^p`.
pub fn corollary_main_bound<F: Real>(
    c: F,
    p_exp: F,
    q: F,
    consts: &BoundConstants<F>,
    d: u64,
    eps: F,
) -> Result<CorollaryMainBound<F>> {
    let ln_inv = check_eps_open(eps)?;
    let df = F::of_u64(d);
    let profile = corollary_reduction_profile(c, p_exp, q, d)?;
    let n_std_real = n_std_real_at_ln(&profile, consts, ln_inv)?;

    let mut display_constant = F::zero();
    for dd in 1..=32u64 {
        let ddf = F::of_u64(dd);
        let prof = corollary_reduction_profile(c, p_exp, q, dd)?;
        for k in 0..=20u32 {
            let l = F::of(k as f64);
            let exact = n_std_real_at_ln(&prof, consts, l)?;
            let denom = ddf.powf(q)
                * (F::one() + ddf.ln()).powf(p_exp)
                * (F::one() + l).powf(p_exp);
            display_constant = display_constant.max(exact / denom);
        }
    }
    let display_value = display_constant
        * df.powf(q)
        * (F::one() + df.ln()).powf(p_exp)
        * (F::one() + ln_inv).powf(p_exp);

    Ok(CorollaryMainBound {
        n_std: ceil_count(n_std_real),
        n_std_real,
        profile,
        display_constant,
        display_value,
    })
}

/// Validity threshold of the quasi-polynomial transfer:
/// `d > (e + 1/c)^(1/t) / e`.
pub fn qpt_validity_threshold<F: Real>(c: F, t: F) -> Result<F> {
    if !(c > F::zero()) || !(t > F::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need c > 0 and t > 0; got c={c}, t={t}"
        )));
    }
    let e = F::one().exp();
    Ok((e + c.recip()).powf(t.recip()) / e)
}

#[derive(Debug, Clone)]
pub struct QptBound<F> {
    /// Exact proof-path value: the evaluation bound for `A = c e^t d^t`,
    /// `B = t (1 + ln d)`.
    pub n_std: Option<u64>,
    pub n_std_real: F,
    pub profile: ComplexityProfile<F>,
    /// `c exp(t ln+ d (ln+ ln+ eps^{-1} + 4 ln(t ln+ d) + C))` for the
    /// caller-supplied `C`, when given.
    pub display_value: Option<F>,
    pub threshold: F,
}

/// The reduction profile of the quasi-polynomial transfer:
/// `A = c e^t d^t`, `B = t (1 + ln d)`; valid only above the dimension
/// threshold.
pub fn qpt_reduction_profile<F: Real>(c: F, t: F, d: u64) -> Result<ComplexityProfile<F>> {
    let threshold = qpt_validity_threshold(c, t)?;
    if d < 1 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let df = F::of_u64(d);
    if !(df > threshold) {
        return Err(Error::Domain(format!(
            "quasi-polynomial transfer requires d > (e + 1/c)^(1/t) e^(-1) = {threshold}, got d = {d}"
        )));
    }
    ComplexityProfile::new(c * t.exp() * df.powf(t), t * (F::one() + df.ln()))
}

/// Evaluation-count bound under a quasi-polynomial profile family
/// `n_all <= c exp(t ln+ d ln+ ln+ eps^{-1})` with `ln+ x = 1 + ln x`.
pub fn qpt_transfer_bound<F: Real>(
    c: F,
    t: F,
    consts: &BoundConstants<F>,
    d: u64,
    eps: F,
    display_c: Option<F>,
) -> Result<QptBound<F>> {
    let ln_inv = check_eps_open(eps)?;
    qpt_transfer_bound_ln(c, t, consts, d, ln_inv, display_c)
}

/// [`qpt_transfer_bound`] with `ln eps^{-1}` supplied directly, for
/// accuracies so high that `eps` itself underflows.
pub fn qpt_transfer_bound_ln<F: Real>(
    c: F,
    t: F,
    consts: &BoundConstants<F>,
    d: u64,
    ln_inv: F,
    display_c: Option<F>,
) -> Result<QptBound<F>> {
    let threshold = qpt_validity_threshold(c, t)?;
    let df = F::of_u64(d);
    let profile = qpt_reduction_profile(c, t, d)?;
    let n_std_real = n_std_real_at_ln(&profile, consts, ln_inv)?;

    let display_value = display_c.map(|cd| {
        let lnp_d = F::one() + df.ln();
        let lnp_lnp = F::one() + (F::one() + ln_inv).ln();
        c * (t * lnp_d * (lnp_lnp + F::of(4.0) * (t * lnp_d).ln() + cd)).exp()
    });

    Ok(QptBound {
        n_std: ceil_count(n_std_real),
        n_std_real,
        profile,
        display_value,
        threshold,
    })
}

/// Smallest display constant `C` making the quasi-polynomial display form
/// dominate the exact proof path on the supplied `(d, ln eps^{-1})` grid.
pub fn calibrate_qpt_display_constant<F: Real>(
    c: F,
    t: F,
    consts: &BoundConstants<F>,
    grid: &[(u64, F)],
) -> Result<F> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty calibration grid".into()));
    }
    let mut needed = F::zero();
    for &(d, ln_inv) in grid {
        let df = F::of_u64(d);
        let profile = qpt_reduction_profile(c, t, d)?;
        let exact = n_std_real_at_ln(&profile, consts, ln_inv)?;
        let lnp_d = F::one() + df.ln();
        let lnp_lnp = F::one() + (F::one() + ln_inv).ln();
        let req = (exact / c).ln() / (t * lnp_d) - lnp_lnp - F::of(4.0) * (t * lnp_d).ln();
        needed = needed.max(req);
    }
    Ok(needed)
}

#[derive(Debug, Clone, Copy)]
pub struct WeakTransferBound<F> {
    pub n_std: Option<u64>,
    pub n_std_real: F,
    /// The transfer's premise kicks in only for
    /// `n >= max(exp(h v0), exp(2 h d^alpha))`.
    pub premise_threshold: F,
}

/// Evaluation-count bound in the weak-tractability regime:
/// `D exp(4h ((1 + ln eps^{-1})^beta + d^alpha))`, for `h <= 1/16`.
pub fn weak_transfer_bound<F: Real>(
    h: F,
    v0: u64,
    alpha: F,
    beta: F,
    consts: &BoundConstants<F>,
    d: u64,
    eps: F,
) -> Result<WeakTransferBound<F>> {
    let h_max = F::one() / F::of(16.0);
    if !(h > F::zero() && h <= h_max) {
        return Err(Error::Domain(format!(
            "weak transfer requires 0 < h <= 1/16, got h = {h}"
        )));
    }
    if !(alpha > F::zero() && alpha <= F::one()) || !(beta > F::zero() && beta <= F::one()) {
        return Err(Error::InvalidParameter(format!(
            "need alpha, beta in (0, 1]; got alpha={alpha}, beta={beta}"
        )));
    }
    if v0 < 1 || d < 1 {
        return Err(Error::InvalidParameter("v0 and d must be >= 1".into()));
    }
    let ln_inv = check_eps_open(eps)?;
    let df = F::of_u64(d);
    let four_h = F::of(4.0) * h;
    let n_std_real =
        consts.weak_d * (four_h * ((F::one() + ln_inv).powf(beta) + df.powf(alpha))).exp();
    let premise_threshold =
        (h * F::of_u64(v0)).exp().max((F::of(2.0) * h * df.powf(alpha)).exp());
    Ok(WeakTransferBound {
        n_std: ceil_count(n_std_real),
        n_std_real,
        premise_threshold,
    })
}

/// Direct evaluation of the tail `sum_{k>=n+1} k^(1/2) exp(-(k/A)^(1/B))`,
/// the brute-force oracle for the closed-form tail bound.
///
/// Terms are accumulated until one falls below `1e-17` times the running
/// partial sum, with a hard budget converting pathological parameters into
/// loud errors.
pub fn tail_sum_direct<F: Real>(a: F, b: F, n: u64) -> Result<F> {
    if !(a > F::zero() && a.is_finite()) || !(b > F::zero() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need A > 0 and B > 0; got A={a}, B={b}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let threshold = F::of(1e-17);
    let inv_b = b.recip();
    let mut sum = F::zero();
    let mut k = n + 1;
    loop {
        let kf = F::of_u64(k);
        let term = kf.sqrt() * (-(kf / a).powf(inv_b)).exp();
        sum += term;
        if term == F::zero() || term < threshold * sum {
            return Ok(sum);
        }
        if k - n >= TAIL_TERM_BUDGET {
            return Err(Error::Divergent(format!(
                "tail sum for A={a}, B={b}, n={n} did not converge within {TAIL_TERM_BUDGET} terms"
            )));
        }
        k += 1;
    }
}

/// Validity thresholds of the two chained tail lemmas:
/// `(A max(3B/2, 1)^B, A (B/2)^B)` — integral-to-closed-form and
/// sum-to-integral respectively.
pub fn tail_sum_thresholds<F: Real>(a: F, b: F) -> (F, F) {
    let half_3b = (F::of(1.5) * b).max(F::one());
    (a * half_3b.powf(b), a * (b / F::of(2.0)).powf(b))
}

/// Closed-form tail bound
/// `A^(1/B) B max(3B/2, 1) n^(3/2 - 1/B) exp(-(n/A)^(1/B))`,
/// valid for `n >= A max(3B/2, 1)^B` (and `n >= A (B/2)^B`), and guaranteed
/// to dominate `tail_sum_direct` there.
pub fn tail_sum_bound<F: Real>(a: F, b: F, n: u64) -> Result<F> {
    if !(a > F::zero() && a.is_finite()) || !(b > F::zero() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need A > 0 and B > 0; got A={a}, B={b}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let nf = F::of_u64(n);
    let (t_integral, t_sum) = tail_sum_thresholds(a, b);
    if nf < t_sum {
        return Err(Error::Domain(format!(
            "sum-to-integral step requires n >= A (B/2)^B = {t_sum}, got n = {n}"
        )));
    }
    if nf < t_integral {
        return Err(Error::Domain(format!(
            "integral-to-closed-form step requires n >= A max(3B/2, 1)^B = {t_integral}, got n = {n}"
        )));
    }
    let inv_b = b.recip();
    let max_factor = (F::of(1.5) * b).max(F::one());
    Ok(a.powf(inv_b)
        * b
        * max_factor
        * nf.powf(F::of(1.5) - inv_b)
        * (-(nf / a).powf(inv_b)).exp())
}

/// Closed-form bound on the upper incomplete gamma function:
/// `Gamma(a, x) <= max(a, 1) x^(a-1) e^(-x)` for `x > max(a, 1)`.
pub fn incomplete_gamma_upper<F: Real>(a: F, x: F) -> Result<F> {
    if !(a > F::zero() && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("need a > 0, got {a}")));
    }
    let floor = a.max(F::one());
    if !(x > floor) {
        return Err(Error::Domain(format!(
            "gamma bound requires x > max(a, 1) = {floor}, got x = {x}"
        )));
    }
    Ok(floor * x.powf(a - F::one()) * (-x).exp())
}

/// Both sides of the power-times-exponential absorption inequality
/// `n^u exp(-(n/A)^(1/B)) <= A^u delta^(-uB) exp((uB delta - 1)(n/A)^(1/B))`.
///
/// Returns `(lhs, rhs)`; the inequality holds throughout the open positive
/// orthant.
pub fn power_exp_bound<F: Real>(u: F, delta: F, a: F, b: F, n: F) -> Result<(F, F)> {
    for (name, v) in [("u", u), ("delta", delta), ("A", a), ("B", b), ("n", n)] {
        if !(v > F::zero() && v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need {name} > 0, got {v}"
            )));
        }
    }
    let x = (n / a).powf(b.recip());
    let lhs = n.powf(u) * (-x).exp();
    let coef = u * b * delta - F::one();
    let scale = a.powf(u) * delta.powf(-(u * b));
    let rhs = if coef == F::zero() {
        scale
    } else {
        scale * (coef * x).exp()
    };
    Ok((lhs, rhs))
}

/// One row of a transfer bound table.
#[derive(Debug, Clone, Copy)]
pub struct BoundRow<F> {
    pub ln_eps_inv: F,
    pub epsilon: F,
    pub n_std_real: F,
    pub n_std: Option<u64>,
    pub n_all_real: F,
    pub n_all: Option<u64>,
}

/// Everything the transfer produces for one profile: the proof-level
/// quantities `n_0`, `B_0`, `R`, the explicit constant `C`, and the bound
/// table over an accuracy grid.
#[derive(Debug, Clone)]
pub struct TransferReport<F> {
    pub profile: ComplexityProfile<F>,
    pub constants: BoundConstants<F>,
    /// Proof threshold `n_0 = A max(3B/2, 1)^B + 1`.
    pub n0: F,
    /// `B_0 = max(B/2, 1)`.
    pub b0: F,
    /// `R = ln 36 + (ln A)/2 + (B_0 + 1) ln B_0`.
    pub big_r: F,
    /// The explicit constant `C = 3 b A (ln(36 A)(1 + B^3))^B`.
    pub big_c: F,
    pub bound_table: Vec<BoundRow<F>>,
}

impl<F: Real> TransferReport<F> {
    /// Build the report over a grid of `ln eps^{-1}` values (each >= 0).
    pub fn new(
        profile: ComplexityProfile<F>,
        constants: BoundConstants<F>,
        ln_eps_grid: &[F],
    ) -> Result<Self> {
        let a = profile.a();
        let b = profile.b();
        let big_c = theorem_main1_constant(&profile, &constants)?;
        let b0 = (b / F::of(2.0)).max(F::one());
        let n0 = a * (F::of(1.5) * b).max(F::one()).powf(b) + F::one();
        let big_r = F::of(36.0).ln() + a.ln() / F::of(2.0) + (b0 + F::one()) * b0.ln();
        let mut bound_table = Vec::with_capacity(ln_eps_grid.len());
        for &l in ln_eps_grid {
            let n_std_real = n_std_real_at_ln(&profile, &constants, l)?;
            let n_all_real = a * (F::one() + l).powf(b) + F::one();
            bound_table.push(BoundRow {
                ln_eps_inv: l,
                epsilon: (-l).exp(),
                n_std_real,
                n_std: ceil_count(n_std_real),
                n_all_real,
                n_all: ceil_count(n_all_real),
            });
        }
        Ok(Self {
            profile,
            constants,
            n0,
            b0,
            big_r,
            big_c,
            bound_table,
        })
    }

    /// Un-ceiled bound evaluator at `ln eps^{-1}`.
    pub fn n_std_real_at(&self, ln_eps_inv: F) -> Result<F> {
        n_std_real_at_ln(&self.profile, &self.constants, ln_eps_inv)
    }

    /// JSON-shaped structured text document.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!(
            "  \"profile\": {{\"A\": {}, \"B\": {}}},\n",
            fmt_sci(self.profile.a()),
            fmt_sci(self.profile.b())
        ));
        out.push_str(&format!(
            "  \"constants\": {{\"b\": {}, \"r\": {}, \"D\": {}, \"idealized\": {}}},\n",
            self.constants.dku_b,
            fmt_sci(self.constants.dku_r),
            fmt_sci(self.constants.weak_d),
            self.constants.is_idealized()
        ));
        out.push_str(&format!("  \"n0\": {},\n", fmt_sci(self.n0)));
        out.push_str(&format!("  \"B0\": {},\n", fmt_sci(self.b0)));
        out.push_str(&format!("  \"R\": {},\n", fmt_sci(self.big_r)));
        out.push_str(&format!("  \"C\": {},\n", fmt_sci(self.big_c)));
        out.push_str("  \"bound_table\": [\n");
        for (i, row) in self.bound_table.iter().enumerate() {
            let sep = if i + 1 == self.bound_table.len() { "" } else { "," };
            out.push_str(&format!(
                "    {{\"epsilon\": {}, \"n_std_bound\": {}, \"n_all_bound\": {}}}{}\n",
                fmt_sci(row.epsilon),
                json_escape(&fmt_count(row.n_std, row.n_std_real)),
                json_escape(&fmt_count(row.n_all, row.n_all_real)),
                sep
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// CSV mirror of the bound table.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("epsilon,n_std_bound,n_all_bound\n");
        for row in &self.bound_table {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt_sci(row.epsilon),
                fmt_count(row.n_std, row.n_std_real),
                fmt_count(row.n_all, row.n_all_real)
            ));
        }
        out
    }
}
