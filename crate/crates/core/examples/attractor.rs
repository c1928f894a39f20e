//! Feeding corrected levels back in as zero heights.
use std::path::PathBuf;

use riemann_lab::perturbation::attractor_iteration;
use riemann_lab::potential::{PotentialModel, SMode};
use riemann_lab::quantizer::QuantizationRule;
use riemann_lab::zeros::load_zeros;

fn main() -> riemann_lab::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt");
    let zs = load_zeros(&path, 20)?;
    let model = PotentialModel::RiemannPrincipal;
    for steps in 1..=6 {
        match attractor_iteration(
            &model,
            &zs,
            SMode::TermSum,
            QuantizationRule::STANDARD,
            20,
            steps,
            1.5,
        ) {
            Ok(history) => {
                let s = history.last().expect("one entry per step");
                println!(
                    "step {steps}: max move {:.4} ({:.2e} relative), first heights {:.4?}",
                    s.max_abs_move,
                    s.max_rel_move,
                    &s.alphas[..3]
                );
            }
            Err(e) => {
                println!("stopped: {e}");
                break;
            }
        }
    }
    Ok(())
}
