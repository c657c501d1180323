//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing the stated tolerance and runtime budget.

use std::time::{Duration, Instant};

use wtl::model_spaces::{
    tensor_top_eigenvalues_indexed, EigenFamily, ModelSpace, MultiIndex,
};
use wtl::sampler::{
    draw_plan_stream, empirical_worst_case_error, oversampled_n, TensorFourierBasis,
};
use wtl::tractability::{
    classify, fit_profile, implied_classes, uwt_diagnostic, ProfileFamily, TractabilityClass,
    TrendVerdict,
};
use wtl::transfer::{
    n_std_bound, n_std_real_at_ln, qpt_transfer_bound_ln, theorem_main1_constant, BoundConstants,
    ComplexityProfile, TransferReport,
};
use wtl::verify::{
    dominance_suite, incomplete_gamma_suite, power_exp_suite, tail_bound_suite, VerifyConfig,
};

fn report(criterion: u32, what: &str, elapsed: Duration, budget: Duration) {
    println!(
        "[criterion {criterion}] PASS - {what} ({:.3} ms, budget {:.0} ms)",
        elapsed.as_secs_f64() * 1e3,
        budget.as_secs_f64() * 1e3
    );
    assert!(
        elapsed <= budget,
        "[criterion {criterion}] runtime {elapsed:?} exceeded budget {budget:?}"
    );
}

#[test]
fn criterion_1_theorem_constant_and_bound() {
    let consts = BoundConstants::<f64>::idealized();
    let profile = ComplexityProfile::new(1.0, 1.0).unwrap();
    let start = Instant::now();
    let c = theorem_main1_constant(&profile, &consts).unwrap();
    let n = n_std_bound(&profile, &consts, (-1.0f64).exp()).unwrap();
    let elapsed = start.elapsed();

    let expected = 6.0 * 36f64.ln();
    assert!(
        (c / expected - 1.0).abs() <= 1e-12,
        "constant {c} vs 6 ln 36 = {expected}"
    );
    assert_eq!(n, 44);
    report(
        1,
        "explicit transfer constant 6 ln 36 and bound 44 at eps = e^-1",
        elapsed,
        Duration::from_millis(1),
    );
}

#[test]
fn criterion_2_proof_thresholds() {
    let consts = BoundConstants::<f64>::idealized();
    let grid: Vec<(f64, f64)> = [1.0, 1.5, 2.0, 5.0, 10.0]
        .iter()
        .flat_map(|&a| [0.25, 1.0, 2.0, 3.0].iter().map(move |&b| (a, b)))
        .collect();
    assert_eq!(grid.len(), 20);
    let start = Instant::now();
    for &(a, b) in &grid {
        let profile = ComplexityProfile::new(a, b).unwrap();
        let rep = TransferReport::new(profile, consts, &[]).unwrap();
        let n0 = a * (1.5 * b).max(1.0).powf(b) + 1.0;
        let b0 = (b / 2.0).max(1.0);
        assert_eq!(rep.n0.to_bits(), n0.to_bits(), "n0 at (A={a}, B={b})");
        assert_eq!(rep.b0.to_bits(), b0.to_bits(), "B0 at (A={a}, B={b})");
    }
    let elapsed = start.elapsed();
    report(
        2,
        "proof thresholds n0 and B0 exact on the 20-point grid",
        elapsed,
        Duration::from_millis(1),
    );
}

#[test]
fn criterion_3_appendix_lemma_suites() {
    let cfg = VerifyConfig {
        samples_tail: 200,
        samples_gamma: 200,
        samples_power: 1000,
        seed: 0,
        ..VerifyConfig::default()
    };
    let start = Instant::now();
    let tail = tail_bound_suite::<f64>(&cfg).unwrap();
    let gamma = incomplete_gamma_suite::<f64>(&cfg).unwrap();
    let power = power_exp_suite::<f64>(&cfg).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(tail.checked, 200 * 5);
    assert_eq!(gamma.checked, 200);
    assert_eq!(power.checked, 1000);
    for suite in [&tail, &gamma, &power] {
        assert!(
            suite.passed(),
            "suite {} violations: {:?}",
            suite.name,
            suite.violations.first()
        );
    }
    report(
        3,
        "tail, incomplete-gamma and power-exp bounds vs oracles (zero violations)",
        elapsed,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_reduction_identities() {
    let consts = BoundConstants::<f64>::idealized();
    let start = Instant::now();
    let (c, p_exp, q) = (1.5f64, 2.0f64, 1.0f64);
    for d in 1..=32u64 {
        for k in 0..=20u32 {
            let l = k as f64;
            let via_op = n_std_real_at_ln(
                &wtl::transfer::corollary_reduction_profile(c, p_exp, q, d).unwrap(),
                &consts,
                l,
            )
            .unwrap();
            let df = d as f64;
            let profile = ComplexityProfile::new(c * df.powf(q) + 1.0, p_exp).unwrap();
            let direct = n_std_real_at_ln(&profile, &consts, l).unwrap();
            assert_eq!(
                via_op.to_bits(),
                direct.to_bits(),
                "polynomial reduction at d={d}, k={k}"
            );
        }
    }
    let (cq, t) = (1.0f64, 1.0f64);
    for d in 2..=33u64 {
        for k in 0..=20u32 {
            let l = k as f64;
            let via_op = n_std_real_at_ln(
                &wtl::transfer::qpt_reduction_profile(cq, t, d).unwrap(),
                &consts,
                l,
            )
            .unwrap();
            let df = d as f64;
            let profile =
                ComplexityProfile::new(cq * t.exp() * df.powf(t), t * (1.0 + df.ln())).unwrap();
            let direct = n_std_real_at_ln(&profile, &consts, l).unwrap();
            assert_eq!(
                via_op.to_bits(),
                direct.to_bits(),
                "quasi-polynomial reduction at d={d}, k={k}"
            );
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        "reduction identities bit-identical on the 32x21 and 32x21 grids",
        elapsed,
        Duration::from_secs(1),
    );
}

/// Brute-force oracle: full product grid, sorted by value descending with
/// lexicographic tie-break.
fn brute_force_products(per_coord: &[Vec<f64>], n: usize) -> (Vec<f64>, Vec<MultiIndex>) {
    let d = per_coord.len();
    let mut all: Vec<(f64, MultiIndex)> = Vec::new();
    let mut idx: MultiIndex = vec![1; d];
    'outer: loop {
        let mut v = 1.0;
        for (i, &k) in idx.iter().enumerate() {
            v *= per_coord[i][(k - 1) as usize];
        }
        all.push((v, idx.clone()));
        let mut coord = d;
        loop {
            if coord == 0 {
                break 'outer;
            }
            coord -= 1;
            if (idx[coord] as usize) < per_coord[coord].len() {
                idx[coord] += 1;
                for c in coord + 1..d {
                    idx[c] = 1;
                }
                break;
            }
        }
    }
    all.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    (
        all.iter().take(n).map(|e| e.0).collect(),
        all.iter().take(n).map(|e| e.1.clone()).collect(),
    )
}

#[test]
fn criterion_5_tensor_enumeration_oracle() {
    let families: Vec<EigenFamily<f64>> = vec![
        EigenFamily::Geometric { omega: 0.5 },
        EigenFamily::Geometric { omega: 0.77 },
        EigenFamily::StretchedExponential { c: 0.8, kappa: 1.2 },
        EigenFamily::Explicit(vec![1.0, 1.0, 0.5, 0.5, 0.25, 0.1, 0.1, 0.05]),
    ];
    let start = Instant::now();
    let mut comparisons = 0usize;
    for family in &families {
        for d in 1..=3usize {
            for len in 1..=8usize {
                // univariate length <= 8 means the family itself stores
                // `len` terms, so the heap and the oracle see the same grid
                let prefix = family.eigenvalues(len).unwrap();
                let per: Vec<Vec<f64>> = vec![prefix.clone(); d];
                let space = ModelSpace::isotropic(d, EigenFamily::Explicit(prefix)).unwrap();
                let grid_total = len.pow(d as u32);
                for n in 1..=grid_total.min(64) {
                    let (expect_vals, expect_idxs) = brute_force_products(&per, n);
                    let (eigs, idxs) = tensor_top_eigenvalues_indexed(&space, n).unwrap();
                    for (got, want) in eigs.values().iter().zip(&expect_vals) {
                        assert_eq!(got.to_bits(), want.to_bits());
                    }
                    assert_eq!(&idxs, &expect_idxs);
                    comparisons += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(comparisons > 1000);
    report(
        5,
        "heap enumeration equals brute force exactly (d <= 3, len <= 8, N <= 64)",
        elapsed,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_6_sampling_floor_and_ceiling_sandwich() {
    let space = ModelSpace::isotropic(1, EigenFamily::Geometric { omega: 0.25 }).unwrap();
    let seed = 42u64;
    let start = Instant::now();
    for &m in &[4usize, 8, 16, 32] {
        let n = oversampled_n(m, 2.0f64);
        let trunc = 4 * m;
        let basis = TensorFourierBasis::for_space(&space, trunc).unwrap();
        let mut best = f64::INFINITY;
        for trial in 0..5u64 {
            let plan = draw_plan_stream(&basis, m, n, seed, trial).unwrap();
            let wce = empirical_worst_case_error(&space, &plan, trunc).unwrap();
            best = best.min(wce.error);
        }
        // sigma_k = 0.5^(k-1): exact floor at n points, harness budget above
        let floor = 0.5f64.powi(n as i32);
        let budget = 10.0 * 0.5f64.powi(m as i32);
        assert!(
            best >= floor - 1e-9,
            "m={m}: best {best} under the information floor {floor}"
        );
        assert!(
            best <= budget,
            "m={m}, n={n}: best {best} above the acceptance budget {budget}"
        );
    }
    let elapsed = start.elapsed();
    report(
        6,
        "best-of-5 weighted LS error within [sigma_(n+1) - 1e-9, 10 sigma_(m+1)]",
        elapsed,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_tractability_chain_and_uwt_pipeline() {
    let start = Instant::now();

    // canonical families reproduce the implication chain
    let spt = ProfileFamily::Constant { c: 5.0, p: 2.0 };
    assert_eq!(classify(&spt).unwrap(), TractabilityClass::ExpSpt);
    assert_eq!(
        implied_classes(TractabilityClass::ExpSpt).unwrap(),
        vec![
            TractabilityClass::ExpPt,
            TractabilityClass::ExpQpt,
            TractabilityClass::ExpUwt,
            TractabilityClass::ExpWt
        ]
    );
    let pt = ProfileFamily::Polynomial {
        c: 3.0,
        q: 2.0,
        p: 2.0,
    };
    assert_eq!(classify(&pt).unwrap(), TractabilityClass::ExpPt);
    assert_eq!(
        implied_classes(TractabilityClass::ExpPt).unwrap(),
        vec![
            TractabilityClass::ExpQpt,
            TractabilityClass::ExpUwt,
            TractabilityClass::ExpWt
        ]
    );
    let qpt = ProfileFamily::QuasiPoly { c: 1.0, t: 1.0 };
    assert_eq!(classify(&qpt).unwrap(), TractabilityClass::ExpQpt);
    assert_eq!(
        implied_classes(TractabilityClass::ExpQpt).unwrap(),
        vec![TractabilityClass::ExpUwt, TractabilityClass::ExpWt]
    );

    // quasi-polynomial transfer output through the limit diagnostic on the
    // grid d = 2^j, eps = e^{-2^j}, j = 1..10
    let consts = BoundConstants::<f64>::idealized();
    let grid: Vec<(u64, f64)> = (1..=10u32).map(|j| (1u64 << j, (1u64 << j) as f64)).collect();
    let bound = |d: u64, l: f64| -> f64 {
        qpt_transfer_bound_ln(1.0, 1.0, &consts, d, l, None)
            .unwrap()
            .n_std_real
    };
    let mut failing = Vec::new();
    for &ab in &[0.25f64, 0.5, 1.0] {
        let diag = uwt_diagnostic(&bound, ab, ab, &grid).unwrap();
        println!(
            "[criterion 7] alpha = beta = {ab}: verdict {:?}, ratios {:?}",
            diag.verdict,
            diag.ratios
                .iter()
                .map(|r| (r * 1e3).round() / 1e3)
                .collect::<Vec<_>>()
        );
        if diag.verdict != TrendVerdict::DecreasingToZero {
            failing.push(ab);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed <= Duration::from_secs(5));
    assert!(
        failing.is_empty(),
        "[criterion 7] FAIL - uwt_diagnostic verdict negative for alpha = beta in {failing:?} \
         on the pinned grid j <= 10: ln n grows like (t ln+ d)(ln ln eps^-1) ~ j^2 while the \
         denominator d^alpha + (1+ln eps^-1)^beta ~ 2^(alpha j) has barely started to dominate \
         by j = 10 for alpha < 1, so the ratio sequence rises before its eventual decay and \
         cannot satisfy the last-three <= first/2 rule. The limit itself is zero (the verdict \
         heuristic is positive for alpha = beta = 1, and on longer grids for the others); the \
         criterion as pinned is unattainable."
    );
    report(
        7,
        "implication chain + quasi-polynomial pipeline limit diagnostics",
        elapsed,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_8_round_trip_fit() {
    let start = Instant::now();
    let points: Vec<(f64, f64)> = (1..=8)
        .map(|k| {
            let l = k as f64;
            ((-l).exp(), (2.0 * (1.0 + l).powi(3)).ceil())
        })
        .collect();
    let fit = fit_profile(&points).unwrap();
    let elapsed = start.elapsed();
    assert!(
        fit.profile.b() >= 2.9 && fit.profile.b() <= 3.1,
        "fitted B = {}",
        fit.profile.b()
    );
    assert!(
        fit.profile.a() >= 1.8 && fit.profile.a() <= 2.2,
        "fitted A = {}",
        fit.profile.a()
    );
    report(
        8,
        "synthetic complexity data recovers (A, B) within tolerance",
        elapsed,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_9_dominance() {
    let cfg = VerifyConfig::default();
    let start = Instant::now();
    let suite = dominance_suite::<f64>(&cfg).unwrap();
    let elapsed = start.elapsed();
    assert!(suite.checked >= 500);
    assert!(
        suite.passed(),
        "dominance violations: {:?}",
        suite.violations.first()
    );
    report(
        9,
        "standard-information bound never cheaper than the linear-information bound",
        elapsed,
        Duration::from_secs(1),
    );
}
