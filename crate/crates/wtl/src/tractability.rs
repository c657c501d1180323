//! The exponential-tractability taxonomy: classification of declared bound
//! families, profile fitting from complexity data, and numerical limit
//! diagnostics for the weak notions.
//!
//! Classification of finite data is best-effort by design: the defining
//! conditions are asymptotic, so the classifier reports the strongest form
//! consistent with the data and the weak notions are reported as grid
//! diagnostics with an explicit trend heuristic, never as proofs.

use std::fmt;

use crate::error::{Error, Result};
use crate::io::{fmt_sci, json_escape};
use crate::transfer::{theorem_main1_constant, BoundConstants, ComplexityProfile};
use crate::Real;

/// The five exponential-tractability notions, strongest first, plus the
/// inconclusive bucket for data that fits no declared form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TractabilityClass {
    ExpSpt,
    ExpPt,
    ExpQpt,
    ExpUwt,
    ExpWt,
    Unclassified,
}

impl TractabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TractabilityClass::ExpSpt => "EXP-SPT",
            TractabilityClass::ExpPt => "EXP-PT",
            TractabilityClass::ExpQpt => "EXP-QPT",
            TractabilityClass::ExpUwt => "EXP-UWT",
            TractabilityClass::ExpWt => "EXP-WT",
            TractabilityClass::Unclassified => "UNCLASSIFIED",
        }
    }
}

impl fmt::Display for TractabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All strictly weaker classes in implication-chain order.
pub fn implied_classes(cls: TractabilityClass) -> Result<Vec<TractabilityClass>> {
    use TractabilityClass::*;
    let chain = [ExpSpt, ExpPt, ExpQpt, ExpUwt, ExpWt];
    match chain.iter().position(|&c| c == cls) {
        Some(pos) => Ok(chain[pos + 1..].to_vec()),
        None => Err(Error::Domain(
            "implied classes are undefined for UNCLASSIFIED".into(),
        )),
    }
}

/// One row of a tabulated profile family: the fitted `(A_d, B_d)` for one
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TabRow<F> {
    pub d: u64,
    pub a: F,
    pub b: F,
}

/// A declared functional form for the complexity over `(d, eps)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFamily<F> {
    /// `n <= c (1 + ln eps^{-1})^p`, uniformly in d.
    Constant { c: F, p: F },
    /// `n <= c d^q (1 + ln eps^{-1})^p`.
    Polynomial { c: F, q: F, p: F },
    /// `n <= c exp(t ln+ d ln+ ln+ eps^{-1})`.
    QuasiPoly { c: F, t: F },
    /// Fitted per-dimension profiles.
    Tabulated(Vec<TabRow<F>>),
}

impl<F: Real> ProfileFamily<F> {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProfileFamily::Constant { c, p } => {
                if !(*c > F::zero()) || !(*p > F::zero()) {
                    return Err(Error::Validation(format!(
                        "constant family needs C, p > 0; got C={c}, p={p}"
                    )));
                }
            }
            ProfileFamily::Polynomial { c, q, p } => {
                if !(*c > F::zero()) || !(*p > F::zero()) || !(*q >= F::zero()) {
                    return Err(Error::Validation(format!(
                        "polynomial family needs C, p > 0 and q >= 0; got C={c}, q={q}, p={p}"
                    )));
                }
            }
            ProfileFamily::QuasiPoly { c, t } => {
                if !(*c > F::zero()) || !(*t > F::zero()) {
                    return Err(Error::Validation(format!(
                        "quasi-polynomial family needs C, t > 0; got C={c}, t={t}"
                    )));
                }
            }
            ProfileFamily::Tabulated(rows) => {
                if rows.is_empty() {
                    return Err(Error::Validation("empty tabulated family".into()));
                }
                for row in rows {
                    if row.d < 1 || !(row.a > F::zero()) || !(row.b > F::zero()) {
                        return Err(Error::Validation(format!(
                            "tabulated row needs d >= 1, A_d > 0, B_d > 0; got d={}, A={}, B={}",
                            row.d, row.a, row.b
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self {
            ProfileFamily::Constant { c, p } => format!("constant(C={c}, p={p})"),
            ProfileFamily::Polynomial { c, q, p } => {
                format!("polynomial(c={c}, q={q}, p={p})")
            }
            ProfileFamily::QuasiPoly { c, t } => format!("quasi-poly(c={c}, t={t})"),
            ProfileFamily::Tabulated(rows) => format!("tabulated({} dimensions)", rows.len()),
        }
    }

    /// The declared bound `n(d, eps)` with `ln eps^{-1} = ln_inv`. Tabulated
    /// families evaluate only at their stored dimensions.
    pub fn bound(&self, d: u64, ln_inv: F) -> Result<F> {
        self.validate()?;
        if d < 1 {
            return Err(Error::Validation("d must be >= 1".into()));
        }
        let one = F::one();
        let df = F::of_u64(d);
        match self {
            ProfileFamily::Constant { c, p } => Ok(*c * (one + ln_inv).powf(*p)),
            ProfileFamily::Polynomial { c, q, p } => {
                Ok(*c * df.powf(*q) * (one + ln_inv).powf(*p))
            }
            ProfileFamily::QuasiPoly { c, t } => {
                let lnp_d = one + df.ln();
                let lnp_lnp = one + (one + ln_inv).ln();
                Ok(*c * (*t * lnp_d * lnp_lnp).exp())
            }
            ProfileFamily::Tabulated(rows) => rows
                .iter()
                .find(|r| r.d == d)
                .map(|r| r.a * (one + ln_inv).powf(r.b))
                .ok_or_else(|| {
                    Error::Validation(format!("tabulated family has no row for d = {d}"))
                }),
        }
    }
}

/// Relative residual threshold for best-effort classification of tabulated
/// data.
const FIT_RESIDUAL_TOL: f64 = 0.05;

/// Strongest class whose defining bound the declared form satisfies.
///
/// Declared forms classify identically; tabulated data is classified by
/// fitting each form in strength order and returns `Unclassified` when none
/// fits within tolerance.
pub fn classify<F: Real>(family: &ProfileFamily<F>) -> Result<TractabilityClass> {
    family.validate()?;
    Ok(match family {
        ProfileFamily::Constant { .. } => TractabilityClass::ExpSpt,
        // q = 0 degenerates to the constant form; take the stronger reading
        ProfileFamily::Polynomial { q, .. } => {
            if *q == F::zero() {
                TractabilityClass::ExpSpt
            } else {
                TractabilityClass::ExpPt
            }
        }
        ProfileFamily::QuasiPoly { .. } => TractabilityClass::ExpQpt,
        ProfileFamily::Tabulated(rows) => classify_tabulated(rows).0,
    })
}

/// Best-effort classification of per-dimension profiles, with notes on the
/// accepted or rejected fits.
pub fn classify_tabulated<F: Real>(rows: &[TabRow<F>]) -> (TractabilityClass, Vec<String>) {
    let mut notes = Vec::new();
    let tol = F::of(FIT_RESIDUAL_TOL);

    let max_rel = |fit: &dyn Fn(&TabRow<F>) -> (F, F)| -> F {
        let mut worst = F::zero();
        for row in rows {
            let (ea, eb) = fit(row);
            let ra = ((ea - row.a) / row.a).abs();
            let rb = ((eb - row.b) / row.b).abs();
            worst = worst.max(ra).max(rb);
        }
        worst
    };

    // constant: A_d and B_d flat
    let a_med = median(rows.iter().map(|r| r.a));
    let b_med = median(rows.iter().map(|r| r.b));
    let res = max_rel(&|_r| (a_med, b_med));
    if res <= tol {
        notes.push(format!(
            "constant fit accepted (max rel residual {})",
            fmt_sci(res)
        ));
        return (TractabilityClass::ExpSpt, notes);
    }
    notes.push(format!(
        "constant fit rejected (max rel residual {})",
        fmt_sci(res)
    ));

    // polynomial: ln A_d linear in ln d, B_d flat
    if rows.len() >= 2 {
        let xs: Vec<F> = rows.iter().map(|r| F::of_u64(r.d).ln()).collect();
        let ys: Vec<F> = rows.iter().map(|r| r.a.ln()).collect();
        if let Ok((slope, intercept)) = linear_fit(&xs, &ys) {
            let c = intercept.exp();
            let res = max_rel(&|r| (c * F::of_u64(r.d).powf(slope), b_med));
            if res <= tol && slope >= -tol {
                notes.push(format!(
                    "polynomial fit accepted: q = {}, p = {} (max rel residual {})",
                    fmt_sci(slope),
                    fmt_sci(b_med),
                    fmt_sci(res)
                ));
                return (TractabilityClass::ExpPt, notes);
            }
            notes.push(format!(
                "polynomial fit rejected (max rel residual {})",
                fmt_sci(res)
            ));
        }
    }

    // quasi-polynomial: B_d = t ln+ d, A_d = c e^t d^t
    if rows.len() >= 2 {
        let mut num = F::zero();
        let mut den = F::zero();
        for r in rows {
            let lnp = F::one() + F::of_u64(r.d).ln();
            num += r.b * lnp;
            den += lnp * lnp;
        }
        let t = num / den;
        if t > F::zero() {
            let ln_c = median(rows.iter().map(|r| r.a.ln() - t - t * F::of_u64(r.d).ln()));
            let c = ln_c.exp();
            let res = max_rel(&|r| {
                (
                    c * t.exp() * F::of_u64(r.d).powf(t),
                    t * (F::one() + F::of_u64(r.d).ln()),
                )
            });
            if res <= tol {
                notes.push(format!(
                    "quasi-polynomial fit accepted: t = {} (max rel residual {})",
                    fmt_sci(t),
                    fmt_sci(res)
                ));
                return (TractabilityClass::ExpQpt, notes);
            }
            notes.push(format!(
                "quasi-polynomial fit rejected (max rel residual {})",
                fmt_sci(res)
            ));
        }
    }

    notes.push("no declared form fits within 5% relative residual".into());
    (TractabilityClass::Unclassified, notes)
}

fn median<F: Real>(values: impl Iterator<Item = F>) -> F {
    let mut v: Vec<F> = values.collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / F::of(2.0)
    }
}

/// Least squares `y = intercept + slope * x`.
fn linear_fit<F: Real>(xs: &[F], ys: &[F]) -> Result<(F, F)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Fit("need at least two points".into()));
    }
    let n = F::of_usize(xs.len());
    let mean_x = xs.iter().copied().sum::<F>() / n;
    let mean_y = ys.iter().copied().sum::<F>() / n;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx <= F::of(1e-24) * n {
        return Err(Error::Fit(
            "degenerate design: regressor has no spread".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok((slope, mean_y - slope * mean_x))
}

/// A fitted complexity profile with residual diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ProfileFit<F> {
    pub profile: ComplexityProfile<F>,
    /// Max over points of `|A (1 + ln eps^{-1})^B - n| / n`.
    pub max_rel_residual: F,
    /// Set when the fitted A fell below 1 and was clamped up.
    pub clamped: bool,
}

/// Fit `(A, B)` from `(eps, n)` complexity observations by regressing
/// `ln n` on `ln(1 + ln eps^{-1})`.
pub fn fit_profile<F: Real>(points: &[(F, F)]) -> Result<ProfileFit<F>> {
    let ln_points: Vec<(F, F)> = points
        .iter()
        .map(|&(eps, n)| {
            if !(eps > F::zero() && eps < F::one()) {
                return Err(Error::Fit(format!("eps must lie in (0, 1), got {eps}")));
            }
            Ok((-eps.ln(), n))
        })
        .collect::<Result<_>>()?;
    fit_profile_ln(&ln_points)
}

/// Same fit with `ln eps^{-1}` supplied directly (exact for `e^{-k}` grids).
pub fn fit_profile_ln<F: Real>(points: &[(F, F)]) -> Result<ProfileFit<F>> {
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    for &(l, n) in points {
        if !(l >= F::zero() && l.is_finite()) {
            return Err(Error::Fit(format!("ln eps^{{-1}} must be >= 0, got {l}")));
        }
        if !(n >= F::one() && n.is_finite()) {
            return Err(Error::Fit(format!("n must be >= 1, got {n}")));
        }
    }
    let xs: Vec<F> = points.iter().map(|&(l, _)| (F::one() + l).ln()).collect();
    let ys: Vec<F> = points.iter().map(|&(_, n)| n.ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    if !(slope > F::zero()) {
        return Err(Error::Fit(format!(
            "fitted exponent B = {slope} is not positive"
        )));
    }
    let a_raw = intercept.exp();
    let clamped = a_raw < F::one();
    let a = if clamped { F::one() } else { a_raw };
    let profile = ComplexityProfile::new(a, slope)?;
    let mut max_rel_residual = F::zero();
    for &(l, n) in points {
        let predicted = a_raw * (F::one() + l).powf(slope);
        max_rel_residual = max_rel_residual.max(((predicted - n) / n).abs());
    }
    Ok(ProfileFit {
        profile,
        max_rel_residual,
        clamped,
    })
}

/// Invert the explicit transfer-constant map
/// `X -> 3 b X (ln(36 X)(1 + p^3))^p` to recover the underlying profile
/// scale from a fitted table constant. Values below the image of `X = 1`
/// clamp to 1.
pub fn invert_transfer_constant<F: Real>(
    observed: F,
    p: F,
    consts: &BoundConstants<F>,
) -> Result<F> {
    if !(observed > F::zero() && observed.is_finite()) {
        return Err(Error::Fit(format!(
            "observed constant must be positive and finite, got {observed}"
        )));
    }
    let forward = |x: F| -> Result<F> {
        theorem_main1_constant(&ComplexityProfile::new(x, p)?, consts)
    };
    if observed <= forward(F::one())? {
        return Ok(F::one());
    }
    let mut lo = F::one();
    let mut hi = F::of(2.0);
    while forward(hi)? < observed {
        hi = hi * F::of(4.0);
        if hi > F::of(1e60) {
            return Err(Error::Range("observed constant out of invertible range".into()));
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if forward(mid)? > observed {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Trend verdict of the weak-tractability limit diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendVerdict {
    /// Last three ratios each at most half the first and monotonically
    /// nonincreasing over the final third of the grid.
    DecreasingToZero,
    Inconclusive,
}

impl TrendVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TrendVerdict::DecreasingToZero => "decreasing-to-zero trend",
            TrendVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct UwtDiagnostic<F> {
    /// `ln n / (d^alpha + (1 + ln eps^{-1})^beta)` along the grid.
    pub ratios: Vec<F>,
    pub verdict: TrendVerdict,
}

impl<F: Real> UwtDiagnostic<F> {
    pub fn to_json(&self, label: &str) -> String {
        let ratios = self
            .ratios
            .iter()
            .map(|r| fmt_sci(*r))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{{\"label\": \"{}\", \"ratios\": [{}], \"verdict\": \"{}\"}}",
            json_escape(label),
            ratios,
            self.verdict.as_str()
        )
    }
}

/// Evaluate the uniform-weak-tractability limit expression along a grid.
///
/// `bound(d, ln eps^{-1})` must return the complexity bound itself; the grid
/// needs at least 8 points with `d + eps^{-1}` strictly increasing. The
/// verdict is an explicit trend heuristic, not a proof: limits are not
/// decidable from finite evaluation.
pub fn uwt_diagnostic<F: Real>(
    bound: &dyn Fn(u64, F) -> F,
    alpha: F,
    beta: F,
    grid: &[(u64, F)],
) -> Result<UwtDiagnostic<F>> {
    if !(alpha > F::zero()) || !(beta > F::zero()) {
        return Err(Error::Validation(format!(
            "need alpha, beta > 0; got alpha={alpha}, beta={beta}"
        )));
    }
    if grid.len() < 8 {
        return Err(Error::Validation(format!(
            "grid needs at least 8 points, got {}",
            grid.len()
        )));
    }
    // strict divergence of d + eps^{-1}, compared in log scale so huge
    // ln eps^{-1} values cannot overflow
    let log_scale = |d: u64, l: F| -> F {
        let ld = F::of_u64(d).ln();
        let hi = ld.max(l);
        let lo = ld.min(l);
        hi + (F::one() + (lo - hi).exp()).ln()
    };
    for w in grid.windows(2) {
        let (d0, l0) = w[0];
        let (d1, l1) = w[1];
        if d0 < 1 || d1 < 1 || !(l0 >= F::zero()) || !(l1 >= F::zero()) {
            return Err(Error::Validation(
                "grid entries need d >= 1 and ln eps^{-1} >= 0".into(),
            ));
        }
        if !(log_scale(d1, l1) > log_scale(d0, l0)) {
            return Err(Error::Validation(
                "grid must have strictly increasing d + eps^{-1}".into(),
            ));
        }
    }

    let mut ratios = Vec::with_capacity(grid.len());
    for &(d, l) in grid {
        let n = bound(d, l);
        if !(n >= F::one() && n.is_finite()) {
            return Err(Error::Validation(format!(
                "bound must be finite and >= 1 on the grid; got {n} at d={d}"
            )));
        }
        let denom = F::of_u64(d).powf(alpha) + (F::one() + l).powf(beta);
        ratios.push(n.ln() / denom);
    }

    let first = ratios[0];
    let half = F::of(0.5);
    let last3_ok = ratios[ratios.len() - 3..]
        .iter()
        .all(|&r| r <= first * half);
    let third_len = ratios.len().div_ceil(3).max(3);
    let tail = &ratios[ratios.len() - third_len..];
    let tol = F::one() + F::of(1e-12);
    let noninc = tail.windows(2).all(|w| w[1] <= w[0] * tol);
    let verdict = if last3_ok && noninc {
        TrendVerdict::DecreasingToZero
    } else {
        TrendVerdict::Inconclusive
    };
    Ok(UwtDiagnostic { ratios, verdict })
}

/// Classification report for one family, serializable as JSON-shaped text.
#[derive(Debug, Clone)]
pub struct ClassificationReport<F> {
    pub family: String,
    pub class: TractabilityClass,
    pub implied: Vec<TractabilityClass>,
    pub notes: Vec<String>,
    pub diagnostics: Vec<(String, UwtDiagnostic<F>)>,
}

impl<F: Real> ClassificationReport<F> {
    pub fn build(family: &ProfileFamily<F>) -> Result<Self> {
        let class = classify(family)?;
        let implied = implied_classes(class).unwrap_or_default();
        let notes = match family {
            ProfileFamily::Tabulated(rows) => classify_tabulated(rows).1,
            _ => Vec::new(),
        };
        Ok(Self {
            family: family.describe(),
            class,
            implied,
            notes,
            diagnostics: Vec::new(),
        })
    }

    pub fn to_json(&self) -> String {
        let implied = self
            .implied
            .iter()
            .map(|c| format!("\"{c}\""))
            .collect::<Vec<_>>()
            .join(", ");
        let notes = self
            .notes
            .iter()
            .map(|n| format!("\"{}\"", json_escape(n)))
            .collect::<Vec<_>>()
            .join(", ");
        let diags = if self.diagnostics.is_empty() {
            "[]".to_string()
        } else {
            let rows = self
                .diagnostics
                .iter()
                .map(|(label, d)| format!("    {}", d.to_json(label)))
                .collect::<Vec<_>>()
                .join(",\n");
            format!("[\n{rows}\n  ]")
        };
        format!(
            "{{\n  \"family\": \"{}\",\n  \"class\": \"{}\",\n  \"implied\": [{}],\n  \"notes\": [{}],\n  \"diagnostics\": {}\n}}\n",
            json_escape(&self.family),
            self.class,
            implied,
            notes,
            diags
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_families_classify() {
        let spt = ProfileFamily::Constant { c: 5.0, p: 2.0 };
        assert_eq!(classify(&spt).unwrap(), TractabilityClass::ExpSpt);

        let pt = ProfileFamily::Polynomial {
            c: 3.0,
            q: 2.0,
            p: 2.0,
        };
        assert_eq!(classify(&pt).unwrap(), TractabilityClass::ExpPt);

        let qpt = ProfileFamily::QuasiPoly { c: 1.0, t: 1.0 };
        assert_eq!(classify(&qpt).unwrap(), TractabilityClass::ExpQpt);

        // stronger reading for q = 0
        let degenerate = ProfileFamily::Polynomial {
            c: 3.0,
            q: 0.0,
            p: 2.0,
        };
        assert_eq!(classify(&degenerate).unwrap(), TractabilityClass::ExpSpt);
    }

    #[test]
    fn implication_chain() {
        use TractabilityClass::*;
        assert_eq!(
            implied_classes(ExpSpt).unwrap(),
            vec![ExpPt, ExpQpt, ExpUwt, ExpWt]
        );
        assert_eq!(implied_classes(ExpQpt).unwrap(), vec![ExpUwt, ExpWt]);
        assert_eq!(implied_classes(ExpWt).unwrap(), vec![]);
        assert!(implied_classes(Unclassified).is_err());
    }

    #[test]
    fn tabulated_classification() {
        let flat: Vec<TabRow<f64>> = (1..=12).map(|d| TabRow { d, a: 5.0, b: 2.0 }).collect();
        assert_eq!(
            classify(&ProfileFamily::Tabulated(flat)).unwrap(),
            TractabilityClass::ExpSpt
        );

        let poly: Vec<TabRow<f64>> = (1..=12)
            .map(|d| TabRow {
                d,
                a: 3.0 * (d as f64).powi(2),
                b: 2.0,
            })
            .collect();
        assert_eq!(
            classify(&ProfileFamily::Tabulated(poly)).unwrap(),
            TractabilityClass::ExpPt
        );

        let quasi: Vec<TabRow<f64>> = (1..=12)
            .map(|d| {
                let t = 1.3f64;
                TabRow {
                    d,
                    a: 0.7 * t.exp() * (d as f64).powf(t),
                    b: t * (1.0 + (d as f64).ln()),
                }
            })
            .collect();
        assert_eq!(
            classify(&ProfileFamily::Tabulated(quasi)).unwrap(),
            TractabilityClass::ExpQpt
        );

        let chaotic: Vec<TabRow<f64>> = (1..=12)
            .map(|d| TabRow {
                d,
                a: ((d * d) as f64).exp(),
                b: 1.0 + (d % 3) as f64,
            })
            .collect();
        assert_eq!(
            classify(&ProfileFamily::Tabulated(chaotic)).unwrap(),
            TractabilityClass::Unclassified
        );
    }

    #[test]
    fn fit_profile_examples() {
        // synthetic data with ceiling noise
        let points: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let l = k as f64;
                ((-l).exp(), (2.0 * (1.0 + l).powi(3)).ceil())
            })
            .collect();
        let fit = fit_profile(&points).unwrap();
        assert!(fit.profile.b() > 2.9 && fit.profile.b() < 3.1);
        assert!(fit.profile.a() > 1.8 && fit.profile.a() < 2.2);

        // noiseless power data: near-exact recovery
        let exact: Vec<(f64, f64)> = (1..=6)
            .map(|k| {
                let l = k as f64;
                ((-l).exp(), 2.5 * (1.0 + l).powf(1.7))
            })
            .collect();
        let fit = fit_profile(&exact).unwrap();
        assert!((fit.profile.a() - 2.5).abs() < 1e-9);
        assert!((fit.profile.b() - 1.7).abs() < 1e-9);
        assert!(fit.max_rel_residual < 1e-9);
        assert!(!fit.clamped);

        // replicated points: degenerate design
        let dup = vec![(0.5, 4.0); 5];
        assert!(matches!(fit_profile(&dup), Err(Error::Fit(_))));
    }

    #[test]
    fn fit_clamps_small_a() {
        let points: Vec<(f64, f64)> = (1..=5)
            .map(|k| {
                let l = k as f64;
                ((-l).exp(), (0.2 * (1.0 + l).powi(2)).max(1.0))
            })
            .collect();
        let fit = fit_profile(&points).unwrap();
        assert!(fit.clamped);
        assert_eq!(fit.profile.a(), 1.0);
    }

    #[test]
    fn uwt_diagnostic_examples() {
        // bounded numerator: ratios vanish
        let constant = |_d: u64, _l: f64| 10.0;
        let grid: Vec<(u64, f64)> = (1..=10).map(|j| (1 << j, (1u64 << j) as f64)).collect();
        let diag = uwt_diagnostic(&constant, 0.5, 0.5, &grid).unwrap();
        assert_eq!(diag.verdict, TrendVerdict::DecreasingToZero);

        // exp(d) with alpha = 1/2: ratios diverge like sqrt(d)
        let exp_d = |d: u64, _l: f64| (d as f64).exp();
        let grid_small: Vec<(u64, f64)> = (1..=10).map(|j| (4 * j, j as f64)).collect();
        let diag = uwt_diagnostic(&exp_d, 0.5, 0.5, &grid_small).unwrap();
        assert_eq!(diag.verdict, TrendVerdict::Inconclusive);
        assert!(diag.ratios.last().unwrap() > diag.ratios.first().unwrap());
    }

    #[test]
    fn uwt_diagnostic_validation() {
        let constant = |_d: u64, _l: f64| 10.0;
        let short: Vec<(u64, f64)> = (1..=5).map(|j| (j, j as f64)).collect();
        assert!(uwt_diagnostic(&constant, 0.5, 0.5, &short).is_err());
        let flat: Vec<(u64, f64)> = (1..=10).map(|_| (2, 1.0)).collect();
        assert!(matches!(
            uwt_diagnostic(&constant, 0.5, 0.5, &flat),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn transfer_constant_inversion_roundtrips() {
        let consts = BoundConstants::<f64>::idealized();
        for &p in &[0.5, 1.0, 2.0] {
            for &x in &[1.0, 2.5, 40.0, 1e6] {
                let c = theorem_main1_constant(
                    &ComplexityProfile::new(x, p).unwrap(),
                    &consts,
                )
                .unwrap();
                let back = invert_transfer_constant(c, p, &consts).unwrap();
                assert!((back / x - 1.0).abs() < 1e-10, "p={p}, x={x}: got {back}");
            }
        }
        // below the image of X = 1: clamps
        assert_eq!(invert_transfer_constant(1.0, 1.0, &consts).unwrap(), 1.0);
    }

    #[test]
    fn report_serializes() {
        let fam = ProfileFamily::Polynomial {
            c: 3.0,
            q: 2.0,
            p: 2.0,
        };
        let report = ClassificationReport::build(&fam).unwrap();
        let json = report.to_json();
        assert!(json.contains("EXP-PT"));
        assert!(json.contains("EXP-WT"));
    }
}
