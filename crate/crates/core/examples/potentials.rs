//! The potential family: the principal part, the zero-driven fluctuation and
//! the explicit formula for J(x) it comes from.
use std::path::PathBuf;
use std::sync::Arc;

use riemann_lab::potential::{
    j_explicit, j_prime_power_oracle, Fluctuation, Potential, PotentialModel, SMode,
};
use riemann_lab::zeros::load_zeros;

fn main() -> riemann_lab::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/zeros_2000.txt");
    let zs = Arc::new(load_zeros(&path, 200)?);
    let principal = PotentialModel::RiemannPrincipal;
    let full = PotentialModel::riemann_full(Arc::clone(&zs), SMode::TermSum)?;
    let block = Fluctuation::new(Arc::clone(&zs), SMode::BlockIntegral)?;
    println!(
        "{:>6} {:>14} {:>14} {:>12} {:>12}",
        "x", "V_R0", "V_full", "S", "S_block"
    );
    for x in [2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let s = Fluctuation::new(Arc::clone(&zs), SMode::TermSum)?.s(x);
        println!(
            "{x:>6} {:>14.6} {:>14.6} {s:>12.6} {:>12.6}",
            principal.eval(x)?,
            full.eval(x)?,
            block.s(x)
        );
    }
    println!("\n{:>6} {:>12} {:>12}", "x", "J explicit", "J exact");
    for x in [10.5, 20.5, 30.5, 40.5] {
        println!(
            "{x:>6} {:>12.5} {:>12.5}",
            j_explicit(x, &zs)?,
            j_prime_power_oracle(x)?
        );
    }
    let quadratic = PotentialModel::Quadratic;
    println!("\n{} at 3: {}", quadratic.label(), quadratic.value(3.0));
    Ok(())
}
