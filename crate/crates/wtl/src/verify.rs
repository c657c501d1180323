//! Randomized verification suites: every closed-form bound in the transfer
//! chain is checked against its independent oracle, and the chain's
//! structural identities are re-derived on fixed grids.
//!
//! The suites power the command-line `verify` subcommand. A fault-injection
//! hook lowers each bound by 10% so the harness can prove it actually
//! detects violations.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model_spaces::{
    n_all, univariate_eigenvalues, widths_from_eigenvalues, EigenFamily, WidthKind,
};
use crate::oracles::upper_gamma;
use crate::transfer::{
    complexity_bound_from_gelfand, corollary_reduction_profile, gelfand_bound_from_profile,
    incomplete_gamma_upper, n_std_bound, n_std_real_at_ln, power_exp_bound, qpt_reduction_profile,
    tail_sum_bound, tail_sum_direct, tail_sum_thresholds, BoundConstants, ComplexityProfile,
    REL_TOL,
};
use crate::Real;

/// Fault-injection hook for harness self-tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Multiply every verified bound by 0.9 before comparing.
    LowerBounds,
}

impl Fault {
    fn factor<F: Real>(self) -> F {
        match self {
            Fault::None => F::one(),
            Fault::LowerBounds => F::of(0.9),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Random (A, B) tuples for the tail-bound suite (5 smallest valid n
    /// each).
    pub samples_tail: usize,
    /// Random (a, x) tuples for the incomplete-gamma suite.
    pub samples_gamma: usize,
    /// Random positive tuples for the power-exponential suite.
    pub samples_power: usize,
    pub seed: u64,
    pub fault: Fault,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples_tail: 200,
            samples_gamma: 200,
            samples_power: 1000,
            seed: 0,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    /// Counterexample descriptions; empty means the suite passed.
    pub violations: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn suite_rng(seed: u64, suite_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite_index);
    rng
}

/// Run every verification suite; all must pass for a clean exit.
pub fn run_all<F: Real>(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        tail_bound_suite::<F>(cfg)?,
        incomplete_gamma_suite::<F>(cfg)?,
        power_exp_suite::<F>(cfg)?,
        reduction_identity_suite::<F>(cfg)?,
        dominance_suite::<F>(cfg)?,
        hilbert_chain_suite::<F>(cfg)?,
    ])
}

/// Tail of `k^(1/2) exp(-(k/A)^(1/B))`: direct summation against the
/// closed-form bound, at the 5 smallest valid n per random tuple.
pub fn tail_bound_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let mut rng = suite_rng(cfg.seed, 0);
    let fault = cfg.fault.factor::<F>();
    let tol = F::one() + F::of(REL_TOL);
    let mut checked = 0;
    let mut violations = Vec::new();
    for _ in 0..cfg.samples_tail {
        let a = F::of(rng.gen_range(0.5..4.0));
        let b = F::of(rng.gen_range(0.25..3.0));
        let (t_integral, t_sum) = tail_sum_thresholds(a, b);
        let n0 = t_integral.max(t_sum).ceil().as_f64() as u64;
        let n0 = n0.max(1);
        for n in n0..n0 + 5 {
            let direct = tail_sum_direct(a, b, n)?;
            let bound = tail_sum_bound(a, b, n)? * fault;
            checked += 1;
            if !(direct <= bound * tol) {
                violations.push(format!(
                    "(A={a}, B={b}, n={n}): direct {direct} > bound {bound}"
                ));
            }
        }
    }
    Ok(SuiteResult {
        name: "tail-sum-bound",
        checked,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Incomplete-gamma bound against the closed-form/quadrature oracle.
pub fn incomplete_gamma_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let mut rng = suite_rng(cfg.seed, 1);
    let fault = cfg.fault.factor::<F>();
    let tol = F::one() + F::of(REL_TOL);
    let mut violations = Vec::new();
    for _ in 0..cfg.samples_gamma {
        let a = F::of(rng.gen_range(0.05..6.0));
        let x = a.max(F::one()) * F::of(1.0 + 1e-6) + F::of(rng.gen_range(0.0..10.0));
        let oracle = upper_gamma(a, x)?;
        let bound = incomplete_gamma_upper(a, x)? * fault;
        if !(oracle <= bound * tol) {
            violations.push(format!("(a={a}, x={x}): Gamma {oracle} > bound {bound}"));
        }
    }
    Ok(SuiteResult {
        name: "incomplete-gamma-bound",
        checked: cfg.samples_gamma,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Power-times-exponential absorption inequality on random positive tuples.
pub fn power_exp_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let mut rng = suite_rng(cfg.seed, 2);
    let fault = cfg.fault.factor::<F>();
    let tol = F::one() + F::of(REL_TOL);
    let mut violations = Vec::new();
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> F {
        F::of((rng.gen_range(lo.ln()..hi.ln())).exp())
    };
    for _ in 0..cfg.samples_power {
        let u = log_uniform(&mut rng, 0.05, 4.0);
        let delta = log_uniform(&mut rng, 0.05, 4.0);
        let a = log_uniform(&mut rng, 0.1, 100.0);
        let b = log_uniform(&mut rng, 0.05, 4.0);
        let n = log_uniform(&mut rng, 0.1, 1e4);
        let (lhs, rhs) = power_exp_bound(u, delta, a, b, n)?;
        if !(lhs <= rhs * fault * tol) {
            violations.push(format!(
                "(u={u}, delta={delta}, A={a}, B={b}, n={n}): lhs {lhs} > rhs {rhs}"
            ));
        }
    }
    Ok(SuiteResult {
        name: "power-exp-bound",
        checked: cfg.samples_power,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Reduction identities of the corollaries: the operation's evaluation path
/// must agree bit-for-bit with the direct evaluation through the documented
/// profile construction.
pub fn reduction_identity_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let consts = BoundConstants::<F>::idealized();
    let fault = cfg.fault.factor::<F>();
    let mut checked = 0;
    let mut violations = Vec::new();
    let bits = |x: F| x.as_f64().to_bits();

    let (c, p_exp, q) = (F::of(1.5), F::of(2.0), F::of(1.0));
    for d in 1..=32u64 {
        for k in 0..=20u32 {
            let l = F::of(k as f64);
            let via_op =
                n_std_real_at_ln(&corollary_reduction_profile(c, p_exp, q, d)?, &consts, l)?;
            // mirror of the documented reduction: A = c d^q + 1, B = p
            let df = F::of_u64(d);
            let profile = ComplexityProfile::new(c * df.powf(q) + F::one(), p_exp)?;
            let direct = n_std_real_at_ln(&profile, &consts, l)? * fault;
            checked += 1;
            if bits(via_op) != bits(direct) {
                violations.push(format!(
                    "polynomial reduction mismatch at d={d}, k={k}: {via_op} vs {direct}"
                ));
            }
        }
    }

    let (cq, t) = (F::one(), F::one());
    for d in 2..=33u64 {
        for k in 0..=20u32 {
            let l = F::of(k as f64);
            let via_op = n_std_real_at_ln(&qpt_reduction_profile(cq, t, d)?, &consts, l)?;
            let df = F::of_u64(d);
            let profile =
                ComplexityProfile::new(cq * t.exp() * df.powf(t), t * (F::one() + df.ln()))?;
            let direct = n_std_real_at_ln(&profile, &consts, l)? * fault;
            checked += 1;
            if bits(via_op) != bits(direct) {
                violations.push(format!(
                    "quasi-polynomial reduction mismatch at d={d}, k={k}: {via_op} vs {direct}"
                ));
            }
        }
    }

    Ok(SuiteResult {
        name: "reduction-identities",
        checked,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Standard information is never reported cheaper than the linear-information
/// bound.
pub fn dominance_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let fault = cfg.fault.factor::<F>();
    let mut checked = 0;
    let mut violations = Vec::new();
    for &b_const in &[1u64, 2] {
        let consts = BoundConstants::new(b_const, F::one(), F::one())?;
        for &a in &[1.0, 1.5, 2.0, 4.0, 10.0] {
            for &b in &[0.25, 0.5, 1.0, 2.0, 3.0] {
                let p = ComplexityProfile::new(F::of(a), F::of(b))?;
                for k in 1..=20u32 {
                    let eps = F::of(-(k as f64)).exp();
                    let n_std =
                        (F::of_u64(n_std_bound(&p, &consts, eps)?) * fault).ceil().as_f64() as u64;
                    let n_all = complexity_bound_from_gelfand(&p, eps)?;
                    checked += 1;
                    if n_std + 1 < n_all {
                        violations.push(format!(
                            "(A={a}, B={b}, b={b_const}, k={k}): n_std {n_std} < n_all {n_all} - 1"
                        ));
                    }
                }
            }
        }
    }
    Ok(SuiteResult {
        name: "dominance",
        checked,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Chain soundness on geometric Hilbert spaces: a profile that dominates the
/// exact complexity yields a Gelfand decay that dominates the exact widths.
pub fn hilbert_chain_suite<F: Real>(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let fault = cfg.fault.factor::<F>();
    let tol = F::one() + F::of(REL_TOL);
    let mut checked = 0;
    let mut violations = Vec::new();
    for &omega in &[0.25f64, 0.5, 0.8] {
        let eigs = univariate_eigenvalues(&EigenFamily::Geometric { omega: F::of(omega) }, 240)?;
        let widths = widths_from_eigenvalues(&eigs, WidthKind::Gelfand)?;
        // c_n = omega^{n/2} <= eps iff n >= 2 ln eps^{-1} / ln(1/omega), so
        // A = 1 + 2/ln(1/omega), B = 1 dominates the exact complexity
        let lam = F::of(1.0 / omega).ln();
        let profile = ComplexityProfile::new(F::one() + F::of(2.0) / lam, F::one())?;
        for k in 1..=12u32 {
            let eps = F::of(-(k as f64)).exp();
            let exact = n_all(&widths, eps)?;
            let bound = complexity_bound_from_gelfand(&profile, eps)?;
            checked += 1;
            if (exact as u64) > bound {
                violations.push(format!(
                    "(omega={omega}, k={k}): profile misses exact n_all {exact} > {bound}"
                ));
            }
        }
        let n_start = profile.a().ceil().as_f64() as usize;
        for n in n_start..widths.len() {
            let c_n = widths.value(n)?;
            let decay = gelfand_bound_from_profile(&profile, F::of_usize(n))? * fault;
            checked += 1;
            if !(c_n <= decay * tol) {
                violations.push(format!(
                    "(omega={omega}, n={n}): exact width {c_n} above implied decay {decay}"
                ));
            }
        }
    }
    Ok(SuiteResult {
        name: "hilbert-chain",
        checked,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
