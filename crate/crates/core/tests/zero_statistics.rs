use std::path::PathBuf;

use riemann_lab::analysis::{compare_counts, spacing_histogram, unfold_zeros};
use riemann_lab::potential::PotentialModel;
use riemann_lab::quantizer::{wkb_spectrum, QuantizationRule};
use riemann_lab::zeros::load_zeros;

fn table() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt")
}

#[test]
fn zeros_repel() {
    let zs = load_zeros(table(), 2000).unwrap();
    let h = spacing_histogram(&zs.alphas(), 16, unfold_zeros).unwrap();
    // first bin covers [0, 0.25); uncorrelated levels would put ~22% there
    let uniform = 1.0 - (-0.25f64).exp();
    let first = h.counts[0] as f64 / h.spacings as f64;
    assert!(first < 0.5 * uniform, "first-bin fraction {first}");
}

/// The principal potential's WKB staircase follows the zero staircase only to
/// leading order: after the best shift the mean gap stays between 5% and 25%
/// of the count on [100, 1000] under either rule.
#[test]
fn principal_counts_against_zeros() {
    let zs = load_zeros(table(), 2000).unwrap();
    let model = PotentialModel::RiemannPrincipal;
    for (rule, top) in [
        (QuantizationRule::PAPER, 493usize),
        (QuantizationRule::STANDARD, 985),
    ] {
        let levels: Vec<usize> = (0..top).collect();
        let s = wkb_spectrum(&model, &levels, rule).unwrap();
        let r = compare_counts(&s, &zs, (100.0, 1000.0)).unwrap();
        let relative = r.relative_mean_residual();
        println!(
            "{}: shift {:.2}, relative mean residual {relative:.4}",
            rule.name(),
            r.shift
        );
        assert!(relative > 0.05 && relative < 0.25);
    }
}
