//! Cross-module invariants: the transfer chain against exact Hilbert-space
//! widths, and preservation of tractability classes through the transfer.

use wtl::model_spaces::{
    univariate_eigenvalues, widths_from_eigenvalues, EigenFamily, WidthKind,
};
use wtl::tractability::{
    classify, fit_profile_ln, implied_classes, invert_transfer_constant, uwt_diagnostic,
    ProfileFamily, TractabilityClass, TrendVerdict,
};
use wtl::transfer::{
    corollary_main_bound, n_std_bound, pietsch_bound, qpt_transfer_bound_ln, BoundConstants,
    ComplexityProfile,
};
use wtl::verify::{run_all, VerifyConfig};

#[test]
fn pietsch_chain_dominates_exact_linear_widths() {
    // in the Hilbert case a_n = c_n, so the (1 + sqrt(n)) proxy always
    // dominates the exact linear width
    let eigs = univariate_eigenvalues(&EigenFamily::Geometric { omega: 0.3f64 }, 80).unwrap();
    let widths = widths_from_eigenvalues(&eigs, WidthKind::Gelfand).unwrap();
    for n in 1..widths.len() {
        let c_n = widths.value(n).unwrap();
        let proxy = pietsch_bound(c_n, n as u64).unwrap();
        assert!(proxy >= c_n);
    }
}

#[test]
fn verify_suites_all_green() {
    let cfg = VerifyConfig {
        samples_tail: 60,
        samples_gamma: 80,
        samples_power: 300,
        seed: 1,
        ..VerifyConfig::default()
    };
    for suite in run_all::<f64>(&cfg).unwrap() {
        assert!(
            suite.passed(),
            "{}: {:?}",
            suite.name,
            suite.violations.first()
        );
    }
}

#[test]
fn constant_family_preserved_through_transfer() {
    // EXP-SPT input: the transferred table fits EXP-SPT with the same
    // exponent within 0.1
    let consts = BoundConstants::<f64>::idealized();
    let (a, b) = (5.0f64, 2.0f64);
    let profile = ComplexityProfile::new(a, b).unwrap();
    let points: Vec<(f64, f64)> = (1..=21)
        .map(|k| {
            let eps = (-(k as f64)).exp();
            (k as f64, n_std_bound(&profile, &consts, eps).unwrap() as f64)
        })
        .collect();
    let fit = fit_profile_ln(&points).unwrap();
    assert!(
        (fit.profile.b() - b).abs() <= 0.1,
        "fitted exponent {} vs {b}",
        fit.profile.b()
    );
}

#[test]
fn polynomial_family_preserved_through_transfer() {
    // EXP-PT input (c, q, p): per-dimension tables fit the same p, and
    // inverting the explicit constant map recovers the same q and c
    let consts = BoundConstants::<f64>::idealized();
    let (c, q, p) = (3.0f64, 2.0f64, 2.0f64);
    let ds: Vec<u64> = vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];

    let mut b_fits = Vec::new();
    let mut a_fits = Vec::new();
    for &d in &ds {
        let points: Vec<(f64, f64)> = (1..=21)
            .map(|k| {
                let eps = (-(k as f64)).exp();
                let bound = corollary_main_bound(c, p, q, &consts, d, eps).unwrap();
                (k as f64, bound.n_std.unwrap() as f64)
            })
            .collect();
        let fit = fit_profile_ln(&points).unwrap();
        b_fits.push(fit.profile.b());
        a_fits.push(fit.profile.a());
    }
    let p_hat = b_fits[b_fits.len() / 2];
    assert!(
        b_fits.iter().all(|bh| (bh - p).abs() <= 0.15),
        "fitted p drifted: {b_fits:?}"
    );

    // structural inversion: A_d = 3 b X (ln(36 X)(1+p^3))^p with
    // X = c d^q + 1, so ln(X - 1) regresses on ln d with slope q
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&d, &a_d) in ds.iter().zip(&a_fits) {
        let x = invert_transfer_constant(a_d, p_hat, &consts).unwrap();
        if x > 1.0 + 1e-9 {
            xs.push((d as f64).ln());
            ys.push((x - 1.0).ln());
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let q_hat = sxy / sxx;
    let c_hat = (my - q_hat * mx).exp();
    assert!((q_hat - q).abs() <= 0.1, "fitted q = {q_hat}");
    assert!((c_hat / c - 1.0).abs() <= 0.1, "fitted c = {c_hat}");
}

#[test]
fn qpt_demotion_passes_weak_diagnostic() {
    // the quasi-polynomial pipeline need not fit EXP-QPT, but its output
    // trends to zero in the uniform-weak expression (alpha = beta = 1 leg;
    // smaller exponents need grids far past j = 10 to clear the heuristic)
    let consts = BoundConstants::<f64>::idealized();
    let grid: Vec<(u64, f64)> = (1..=10u32).map(|j| (1u64 << j, (1u64 << j) as f64)).collect();
    let bound = |d: u64, l: f64| {
        qpt_transfer_bound_ln(1.0, 1.0, &consts, d, l, None)
            .unwrap()
            .n_std_real
    };
    let diag = uwt_diagnostic(&bound, 1.0, 1.0, &grid).unwrap();
    assert_eq!(diag.verdict, TrendVerdict::DecreasingToZero);

    // and the transferred table genuinely fails the quasi-polynomial form:
    // B_d = t (1 + ln d) is not constant
    let fam = ProfileFamily::QuasiPoly { c: 1.0, t: 1.0 };
    assert_eq!(classify(&fam).unwrap(), TractabilityClass::ExpQpt);
}

/// Calibrate the constant of a dominating form on a coarse subgrid, then
/// check the bound across the full grid.
fn calibrated_domination(
    n_of: &dyn Fn(u64, f64) -> f64,
    form: &dyn Fn(u64, f64) -> f64,
    calib: &[(u64, u32)],
    full: &[(u64, u32)],
) -> bool {
    let mut c = 0.0f64;
    for &(d, k) in calib {
        c = c.max(n_of(d, k as f64) / form(d, k as f64));
    }
    full.iter().all(|&(d, k)| {
        n_of(d, k as f64) <= c * form(d, k as f64) * (1.0 + 1e-9)
    })
}

#[test]
fn classified_families_satisfy_implied_class_bounds() {
    // standard grid: d <= 64, ln eps^{-1} <= 32
    let full: Vec<(u64, u32)> = (0..=6u32)
        .flat_map(|i| (1..=32u32).map(move |k| (1u64 << i, k)))
        .collect();
    let calib: Vec<(u64, u32)> = vec![(1, 1), (1, 8), (4, 1), (4, 8), (16, 2), (64, 4)];

    let families: Vec<(ProfileFamily<f64>, TractabilityClass)> = vec![
        (
            ProfileFamily::Constant { c: 5.0, p: 2.0 },
            TractabilityClass::ExpSpt,
        ),
        (
            ProfileFamily::Polynomial {
                c: 3.0,
                q: 2.0,
                p: 2.0,
            },
            TractabilityClass::ExpPt,
        ),
        (
            ProfileFamily::QuasiPoly { c: 1.0, t: 1.0 },
            TractabilityClass::ExpQpt,
        ),
    ];

    for (family, expect) in &families {
        assert_eq!(classify(family).unwrap(), *expect);
        let n_of = |d: u64, l: f64| family.bound(d, l).unwrap();
        for implied in implied_classes(*expect).unwrap() {
            let ok = match implied {
                TractabilityClass::ExpPt => {
                    // dominating form d^2 (1 + ln eps^{-1})^2
                    calibrated_domination(
                        &n_of,
                        &|d, l| (d as f64).powi(2) * (1.0 + l).powi(2),
                        &calib,
                        &full,
                    )
                }
                TractabilityClass::ExpQpt => calibrated_domination(
                    &n_of,
                    &|d, l| {
                        let t = 2.0f64;
                        (t * (1.0 + (d as f64).ln()) * (1.0 + (1.0 + l).ln())).exp()
                    },
                    &calib,
                    &full,
                ),
                TractabilityClass::ExpUwt | TractabilityClass::ExpWt => {
                    // limit diagnostics along a diverging diagonal, d capped
                    // at the grid's largest dimension
                    let grid: Vec<(u64, f64)> = (1..=10u32)
                        .map(|j| ((1u64 << j).min(64), (1u64 << j) as f64))
                        .collect();
                    uwt_diagnostic(&|d, l| n_of(d, l), 1.0, 1.0, &grid)
                        .unwrap()
                        .verdict
                        == TrendVerdict::DecreasingToZero
                }
                _ => true,
            };
            assert!(
                ok,
                "family {} fails the {} bound",
                family.describe(),
                implied
            );
        }
    }
}
