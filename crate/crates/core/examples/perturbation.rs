//! First-order level shifts from the zeros: numeric matrix elements against
//! the closed forms, the data behind the oscillation figure.
use std::path::PathBuf;
use std::sync::Arc;

use riemann_lab::analysis::sign_concordance;
use riemann_lab::perturbation::{
    first_order_closed, perturbed_spectrum, ClosedForm, ClosedFormParams, PerturbationConfig,
};
use riemann_lab::potential::{Fluctuation, PotentialModel, SMode};
use riemann_lab::zeros::load_zeros;

fn main() -> riemann_lab::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt");
    let zs = Arc::new(load_zeros(&path, 2000)?);
    let fluct = Fluctuation::new(Arc::clone(&zs), SMode::TermSum)?;
    let levels: Vec<usize> = (50..=200).step_by(10).collect();
    let rows = perturbed_spectrum(
        &PotentialModel::RiemannPrincipal,
        &fluct,
        &levels,
        &PerturbationConfig::default(),
    )?;
    let params = ClosedFormParams::from_zeros(&zs)?;
    println!(
        "{:>4} {:>10} {:>10} {:>10} {:>12}",
        "N", "E_N0", "E_N1", "linear", "cosine form"
    );
    for r in &rows {
        let cosine = first_order_closed(r.x_t, params, ClosedForm::RHClosedForm, None)?;
        println!(
            "{:>4} {:>10.4} {:>10.5} {:>10.5} {:>12.5}",
            r.n, r.e0, r.e1_numeric, r.e1_closed, cosine
        );
    }
    let num: Vec<f64> = rows.iter().map(|r| r.e1_numeric).collect();
    let closed: Vec<f64> = rows.iter().map(|r| r.e1_closed).collect();
    println!(
        "sign agreement {:.0}%",
        100.0 * sign_concordance(&num, &closed)
    );
    Ok(())
}
