//! Grid eigenvalues by finite differences and Numerov shooting, checked
//! against WKB, and one eigenfunction.
use riemann_lab::potential::PotentialModel;
use riemann_lab::quantizer::{wkb_eigenvalue, QuantizationRule};
use riemann_lab::schrodinger::{eigenfunction, solve_spectrum, GridSpec, Method};

fn main() -> riemann_lab::Result<()> {
    let model = PotentialModel::RiemannPrincipal;
    let fd = GridSpec::for_levels(&model, 7, Method::FiniteDifference)?;
    let nu = GridSpec::for_levels(&model, 7, Method::NumerovShooting)?;
    let a = solve_spectrum(&model, &fd, 8)?;
    let b = solve_spectrum(&model, &nu, 8)?;
    println!(
        "{:>3} {:>14} {:>14} {:>14}",
        "N", "FD", "Numerov", "WKB standard"
    );
    for n in 0..8 {
        println!(
            "{n:>3} {:>14.8} {:>14.8} {:>14.8}",
            a.eigenvalues()[n],
            b.eigenvalues()[n],
            wkb_eigenvalue(&model, n, QuantizationRule::STANDARD)?
        );
    }
    let psi = eigenfunction(&model, &fd, 3)?;
    println!(
        "state 3: E = {:.8}, {} nodes, <x> = {:.5}",
        psi.energy,
        psi.node_count,
        psi.expectation(|x| x)
    );
    Ok(())
}
