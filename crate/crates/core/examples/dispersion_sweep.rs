//! Dispersion laws across potentials from ln x to e^x.
use riemann_lab::analysis::{run_sweep, sweep_variants};
use riemann_lab::quantizer::QuantizationRule;

fn main() {
    let variants = sweep_variants();
    let levels: Vec<usize> = (100..=2000).step_by(10).collect();
    for (v, row) in variants.iter().zip(run_sweep(
        &variants,
        &levels,
        QuantizationRule::STANDARD,
        100.0,
    )) {
        match row {
            Ok(r) => println!(
                "{:<20} {:<10} {:?} rms {:.2e}, N(100) = {:.4e}",
                v.name,
                v.law.name(),
                r.fit.law.parameters(),
                r.fit.rms_residual,
                r.count_at_reference
            ),
            Err(e) => println!("{:<20} failed: {e}", v.name),
        }
    }
}
