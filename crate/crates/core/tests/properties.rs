use std::sync::Arc;

use proptest::prelude::*;
use riemann_lab::analysis::{format_number, spacing_histogram, staircase};
use riemann_lab::potential::{perturbation_potential, Fluctuation, PotentialModel, SMode};
use riemann_lab::quantizer::{phase_integral, wkb_spectrum, QuantizationRule};
use riemann_lab::schrodinger::{Provenance, Spectrum};
use riemann_lab::zeros::ZeroSet;

fn model(k: usize) -> PotentialModel {
    match k {
        0 => PotentialModel::Linear,
        1 => PotentialModel::Quadratic,
        2 => PotentialModel::LogCorrected { b: 2.0 },
        3 => PotentialModel::PowerNearHarmonic { epsilon: 0.3 },
        _ => PotentialModel::RiemannPrincipal,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_grows_with_energy(k in 0usize..5, e in 3.0f64..500.0, de in 0.01f64..50.0) {
        let m = model(k);
        let a = phase_integral(&m, e).unwrap().phi;
        let b = phase_integral(&m, e + de).unwrap().phi;
        prop_assert!(b > a);
    }

    #[test]
    fn wkb_levels_ascend_and_invert(k in 0usize..5, first in 0usize..200, len in 2usize..20) {
        let m = model(k);
        let levels: Vec<usize> = (first..first + len).collect();
        let s = wkb_spectrum(&m, &levels, QuantizationRule::STANDARD).unwrap();
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[1] > w[0]));
        let c = staircase(&s).unwrap();
        for (i, &(e, n)) in c.samples.iter().enumerate() {
            prop_assert_eq!(n, (levels[i] + 1) as f64);
            prop_assert_eq!(c.count_at(e), n);
        }
    }

    #[test]
    fn staircase_is_monotone(mut v in proptest::collection::vec(0.0f64..1e4, 1..60), probes in proptest::collection::vec(-10.0f64..1.1e4, 2..30)) {
        v.sort_by(f64::total_cmp);
        v.dedup();
        let s = Spectrum::from_values(v, Provenance::External("random".into())).unwrap();
        let c = staircase(&s).unwrap();
        let mut p = probes;
        p.sort_by(f64::total_cmp);
        let counts: Vec<f64> = p.iter().map(|&e| c.count_at(e)).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn formatted_numbers_keep_twelve_digits(v in prop_oneof![-1e12f64..1e12, -1e-3f64..1e-3]) {
        let back: f64 = format_number(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs());
    }

    #[test]
    fn histogram_conserves_gaps(mut v in proptest::collection::vec(0.0f64..100.0, 3..80), bins in 1usize..30) {
        v.sort_by(f64::total_cmp);
        v.dedup();
        prop_assume!(v.len() >= 2);
        let h = spacing_histogram(&v, bins, |x| x).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<usize>(), v.len() - 1);
        let width = h.edges[1] - h.edges[0];
        let mass: f64 = h.density.iter().sum::<f64>() * width;
        prop_assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fluctuation_is_additive(a in 14.0f64..100.0, gap in 0.5f64..50.0, x in 2.0f64..80.0) {
        let b = a + gap;
        let both = ZeroSet::critical_line(&[a, b]).unwrap();
        let va = perturbation_potential(x, &ZeroSet::critical_line(&[a]).unwrap(), SMode::TermSum).unwrap();
        let vb = perturbation_potential(x, &ZeroSet::critical_line(&[b]).unwrap(), SMode::TermSum).unwrap();
        let vab = perturbation_potential(x, &both, SMode::TermSum).unwrap();
        prop_assert!((vab - va - vb).abs() <= 1e-12 * (va.abs() + vb.abs()).max(1e-300));
        let f = Fluctuation::new(Arc::new(both), SMode::TermSum).unwrap();
        prop_assert!((f.potential(x) - vab).abs() <= 1e-12 * vab.abs().max(1e-300));
    }
}
