//! Property tests for the structural invariants.

use proptest::prelude::*;
use wtl::model_spaces::{
    n_all, tensor_top_eigenvalues, univariate_eigenvalues, widths_from_eigenvalues, EigenFamily,
    ModelSpace, WidthKind,
};
use wtl::transfer::{dku_bound, power_exp_bound, BoundConstants, TailSource, REL_TOL};

proptest! {
    #[test]
    fn widths_nonincreasing_and_scaling_covariant(
        omega in 0.05f64..0.95,
        scale in 0.01f64..100.0,
        k in 1u32..14,
    ) {
        // slow spectra (omega near 1) need long stored sequences
        let eigs = univariate_eigenvalues(&EigenFamily::Geometric { omega }, 900).unwrap();
        let widths = widths_from_eigenvalues(&eigs, WidthKind::Gelfand).unwrap();
        for w in widths.values().windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        let eps = (-(k as f64)).exp();
        let scaled = widths_from_eigenvalues(
            &eigs.scaled(scale).unwrap(),
            WidthKind::Gelfand,
        ).unwrap();
        prop_assert_eq!(
            n_all(&widths, eps).unwrap(),
            n_all(&scaled, scale.sqrt() * eps).unwrap()
        );
    }

    #[test]
    fn n_all_monotone_in_accuracy(
        omega in 0.05f64..0.95,
        k1 in 1u32..12,
        dk in 0u32..6,
    ) {
        let eigs = univariate_eigenvalues(&EigenFamily::Geometric { omega }, 900).unwrap();
        let widths = widths_from_eigenvalues(&eigs, WidthKind::Gelfand).unwrap();
        let loose = (-(k1 as f64)).exp();
        let tight = (-((k1 + dk) as f64)).exp();
        prop_assert!(n_all(&widths, tight).unwrap() >= n_all(&widths, loose).unwrap());
    }

    #[test]
    fn tensor_spectrum_nonincreasing(
        omega1 in 0.1f64..0.9,
        omega2 in 0.1f64..0.9,
        n in 1usize..48,
    ) {
        let space = ModelSpace::anisotropic(vec![
            EigenFamily::Geometric { omega: omega1 },
            EigenFamily::Geometric { omega: omega2 },
        ]).unwrap();
        let eigs = tensor_top_eigenvalues(&space, n).unwrap();
        for w in eigs.values().windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn power_exp_inequality_holds(
        u in 0.02f64..6.0,
        delta in 0.02f64..6.0,
        a in 0.05f64..200.0,
        b in 0.02f64..6.0,
        n in 0.05f64..1e5,
    ) {
        let (lhs, rhs) = power_exp_bound(u, delta, a, b, n).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + REL_TOL), "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn dku_value_monotone_for_geometric_tails(
        ratio in 0.1f64..0.9,
        n1 in 2u64..30,
        dn in 1u64..10,
    ) {
        let f = move |k: u64| ratio.powi(k as i32);
        let consts = BoundConstants::idealized();
        let lo = dku_bound(TailSource::Function(&f), n1 + dn, &consts).unwrap().value;
        let hi = dku_bound(TailSource::Function(&f), n1, &consts).unwrap().value;
        prop_assert!(lo <= hi * (1.0 + REL_TOL));
    }
}
