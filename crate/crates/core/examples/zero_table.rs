//! Loading a zero table, counting zeros, spacing statistics and an
//! off-line stretch configuration.
use std::path::PathBuf;

use riemann_lab::analysis::{spacing_histogram, unfold_zeros};
use riemann_lab::zeros::{
    average_zero_count, empirical_zero_count, load_zeros, synthesize_stretch, StretchSpec,
};

fn main() -> riemann_lab::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt");
    let zs = load_zeros(&path, 2000)?;
    println!(
        "{} zeros, lowest {:.6}",
        zs.len(),
        zs.first_alpha().unwrap_or(0.0)
    );
    for t in [100.0, 500.0, 1000.0, 2500.0] {
        println!(
            "T = {t:>6}: smooth count {:>8.2}, actual {}",
            average_zero_count(t),
            empirical_zero_count(&zs, t)
        );
    }
    let h = spacing_histogram(&zs.alphas(), 16, unfold_zeros)?;
    println!("unfolded spacings:");
    for (i, d) in h.density.iter().enumerate() {
        println!("  [{:.2}, {:.2}) {d:.3}", h.edges[i], h.edges[i + 1]);
    }
    let stretch = synthesize_stretch(&StretchSpec {
        blocks: vec![(10, 0.5), (10, 0.6), (10, 0.5)],
        base: zs.clone(),
    })?;
    for (a, first, last) in stretch.blocks() {
        println!("block a = {a}: zeros {first}..={last}");
    }
    Ok(())
}
