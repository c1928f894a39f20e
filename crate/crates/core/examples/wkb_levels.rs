//! Semiclassical levels under both quantization rules, turning points and
//! the level density.
use riemann_lab::potential::PotentialModel;
use riemann_lab::quantizer::{density_of_states, phase_integral, wkb_spectrum, QuantizationRule};

fn main() -> riemann_lab::Result<()> {
    let model = PotentialModel::RiemannPrincipal;
    let levels: Vec<usize> = (0..10).collect();
    let paper = wkb_spectrum(&model, &levels, QuantizationRule::PAPER)?;
    let standard = wkb_spectrum(&model, &levels, QuantizationRule::STANDARD)?;
    println!(
        "{:>3} {:>12} {:>12} {:>10}",
        "N", "E paper", "E standard", "x_T"
    );
    for n in levels {
        let e = standard.level(n).unwrap_or(f64::NAN);
        println!(
            "{n:>3} {:>12.6} {e:>12.6} {:>10.5}",
            paper.level(n).unwrap_or(f64::NAN),
            phase_integral(&model, e)?.x_t
        );
    }
    for e in [1e2, 1e3, 1e4, 1e5] {
        let w = density_of_states(&model, e, QuantizationRule::STANDARD)?;
        println!(
            "E = {e:>8}: dN/dE = {w:.4}, ratio to ln E {:.4}",
            w / e.ln()
        );
    }
    Ok(())
}
