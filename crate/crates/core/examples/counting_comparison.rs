//! Eigenvalue staircase of the principal potential against the zero
//! staircase, and a report table in both output formats.
use std::path::PathBuf;

use riemann_lab::analysis::{compare_counts, fit_dispersion, staircase, DispersionLaw};
use riemann_lab::potential::PotentialModel;
use riemann_lab::quantizer::{wkb_spectrum, QuantizationRule};
use riemann_lab::zeros::load_zeros;

fn main() -> riemann_lab::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt");
    let zs = load_zeros(&path, 2000)?;
    let model = PotentialModel::RiemannPrincipal;
    for rule in [QuantizationRule::PAPER, QuantizationRule::STANDARD] {
        let levels: Vec<usize> = (0..1000).collect();
        let s = wkb_spectrum(&model, &levels, rule)?;
        let report = compare_counts(&s, &zs, (100.0, 1000.0))?;
        let fit = fit_dispersion(
            &staircase(&s)?,
            DispersionLaw::LinearLogLaw,
            Some((100.0, 1000.0)),
        )?;
        println!(
            "{} rule: shift {:.2}, mean |residual| {:.2} ({:.1}% of N), linear-log fit rms {:.3}",
            rule.name(),
            report.shift,
            report.mean_abs_residual,
            100.0 * report.relative_mean_residual(),
            fit.rms_residual
        );
        if rule == QuantizationRule::PAPER {
            print!("{}", report.to_table().to_csv());
            report
                .to_table()
                .write_json(std::io::stdout())
                .expect("stdout");
        }
    }
    Ok(())
}
