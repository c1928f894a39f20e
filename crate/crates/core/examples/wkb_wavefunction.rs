//! A normalized WKB state next to the grid eigenfunction of the same level.
use riemann_lab::potential::PotentialModel;
use riemann_lab::quantizer::{wkb_eigenvalue, QuantizationRule, WkbState};
use riemann_lab::schrodinger::{eigenfunction, GridSpec, Method};

fn main() -> riemann_lab::Result<()> {
    let model = PotentialModel::RiemannPrincipal;
    let n = 6;
    let e = wkb_eigenvalue(&model, n, QuantizationRule::STANDARD)?;
    let wkb = WkbState::new(&model, e)?;
    println!(
        "E = {e:.6}, x_T = {:.5}, A^2 ln x_T = {:.4}, closed-form A^2 ln x_T = {:.4}, nodes {}",
        wkb.x_t,
        wkb.norm_a.powi(2) * wkb.x_t.ln(),
        wkb.norm.a_squared_closed_form * wkb.x_t.ln(),
        wkb.node_count
    );
    let grid = eigenfunction(
        &model,
        &GridSpec::for_levels(&model, n, Method::FiniteDifference)?,
        n,
    )?;
    let sign = if grid.psi[1] > 0.0 { 1.0 } else { -1.0 };
    println!("{:>8} {:>10} {:>10}", "x", "WKB", "grid");
    for k in 1..12 {
        let x = wkb.x_t * k as f64 / 12.0;
        let i = (x / grid.step()).round() as usize;
        let w = wkb
            .psi(&model, x)
            .map_or("patch".to_string(), |v| format!("{v:.5}"));
        println!("{x:>8.4} {w:>10} {:>10.5}", sign * grid.psi[i]);
    }
    Ok(())
}
