//! Logarithmic, exponential and sine integrals and the beta function.
use std::f64::consts::PI;

use num_complex::Complex64;
use riemann_lab::specfun::{
    beta_function, exp_integral, exp_integral_real, li, log_integral, sine_integral,
    PrincipalValueConfig,
};

fn main() -> riemann_lab::Result<()> {
    for x in [2.0, 10.0, 100.0, 1e6] {
        println!("li({x}) = {:.10}", li(x)?);
    }
    let pv = log_integral(1.5, PrincipalValueConfig::default())?;
    println!("principal value li(1.5) = {pv:.10}");
    println!("Ei(1) = {:.10}", exp_integral_real(1.0)?);
    let rho = Complex64::new(0.5, 14.134_725_141_734_693);
    println!(
        "E1 at ln(100)·rho = {:.10}",
        exp_integral(rho * 100f64.ln())?
    );
    println!("Si(pi) = {:.10}", sine_integral(PI)?);
    println!(
        "B(5/2, 1/2) = {:.12} (3pi/8 = {:.12})",
        beta_function(2.5, 0.5)?,
        3.0 * PI / 8.0
    );
    Ok(())
}
