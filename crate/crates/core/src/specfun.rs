//! Special functions: logarithmic, exponential and sine integrals, Beta.
//!
//! * `log_integral(x, cfg)` – Riemann's li(x) = PV ∫₀ˣ dt/ln t by adaptive
//!   quadrature with a symmetric exclusion around t = 1 and Richardson
//!   extrapolation in the exclusion half-width.
//! * `li(x)` – the same function through the identity li(x) = Ei(ln x); this
//!   is the fast route used by the potentials.
//! * `exp_integral(z)` – Ei(z) on the principal branch (cut along the
//!   negative real axis).
//! * `sine_integral(x)`, `sine_integral_shifted(x)` – Si(x) and si(x) = Si(x) − π/2.
//! * `beta_function(a, b)` – B(a, b) = Γ(a)Γ(b)/Γ(a+b).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::quad::{integrate, Quadrature};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Settings for the principal-value quadrature behind [`log_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalValueConfig {
    /// Half-width of the largest exclusion interval `[1 - ε, 1 + ε]`.
    pub epsilon_split: f64,
    pub quad_rel_tol: f64,
}

impl Default for PrincipalValueConfig {
    fn default() -> Self {
        Self {
            epsilon_split: 0.1,
            quad_rel_tol: 1e-10,
        }
    }
}

impl PrincipalValueConfig {
    pub fn new(epsilon_split: f64, quad_rel_tol: f64) -> Result<Self> {
        if !(epsilon_split > 0.0 && epsilon_split < 0.5) {
            return Err(domain(
                "PrincipalValueConfig",
                format!("epsilon_split must lie in (0, 0.5), got {epsilon_split}"),
            ));
        }
        if !(quad_rel_tol > 0.0 && quad_rel_tol <= 1e-3) {
            return Err(domain(
                "PrincipalValueConfig",
                format!("quad_rel_tol must lie in (0, 1e-3], got {quad_rel_tol}"),
            ));
        }
        Ok(Self {
            epsilon_split,
            quad_rel_tol,
        })
    }
}

/// Number of halvings of the exclusion half-width used in the extrapolation.
const PV_LEVELS: usize = 5;

fn inv_ln(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        1.0 / t.ln()
    }
}

/// li(x) as a principal-value integral from 0.
///
/// For x > 1 the integral is evaluated outside `[1 − ε, 1 + ε]` for
/// ε = ε₀, ε₀/2, …; the omitted piece expands in odd powers of ε, which the
/// Richardson table removes.
pub fn log_integral(x: f64, cfg: PrincipalValueConfig) -> Result<f64> {
    if !(x > 0.0) || x == 1.0 || !x.is_finite() {
        return Err(domain(
            "log_integral",
            format!("x must be positive, finite and ≠ 1, got {x}"),
        ));
    }
    let opts = Quadrature::with_rel_tol(cfg.quad_rel_tol);
    if x < 1.0 {
        return Ok(integrate(inv_ln, 0.0, x, opts)?.value);
    }
    let eps0 = cfg.epsilon_split.min(0.5 * (x - 1.0));
    let mut table = [[0.0; PV_LEVELS]; PV_LEVELS];
    for (level, row) in table.iter_mut().enumerate() {
        let eps = eps0 / f64::from(1u32 << level);
        let left = integrate(inv_ln, 0.0, 1.0 - eps, opts)?.value;
        let right = integrate(inv_ln, 1.0 + eps, x, opts)?.value;
        row[0] = left + right;
    }
    for k in 1..PV_LEVELS {
        // error terms ε¹, ε³, ε⁵, … are removed one column at a time
        let factor = 2f64.powi(2 * k as i32 - 1);
        for level in k..PV_LEVELS {
            table[level][k] =
                (factor * table[level][k - 1] - table[level - 1][k - 1]) / (factor - 1.0);
        }
    }
    Ok(table[PV_LEVELS - 1][PV_LEVELS - 1])
}

/// li(x) = Ei(ln x).
pub fn li(x: f64) -> Result<f64> {
    if !(x > 0.0) || x == 1.0 {
        return Err(domain("li", format!("x must be positive and ≠ 1, got {x}")));
    }
    exp_integral_real(x.ln())
}

/// Real exponential integral Ei(x), x ≠ 0.
pub fn exp_integral_real(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(domain("exp_integral", "Ei is singular at 0"));
    }
    if x > 0.0 {
        if x < 40.0 {
            Ok(ei_series_real(x))
        } else {
            Ok(ei_asymptotic_real(x))
        }
    } else {
        Ok(-e1_real(-x))
    }
}

fn ei_series_real(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..500 {
        let nf = n as f64;
        term *= x / nf;
        let add = term / nf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + x.ln() + sum
}

fn ei_asymptotic_real(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let next = term * k as f64 / x;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    x.exp() / x * sum
}

fn e1_real(y: f64) -> f64 {
    if y <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..200 {
            let nf = n as f64;
            term *= -y / nf;
            let add = -term / nf;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - y.ln() + sum
    } else {
        e1_continued_fraction(Complex64::new(y, 0.0)).re
    }
}

/// E₁(w) by modified Lentz evaluation of its continued fraction. Valid off the
/// negative real axis; convergence is fast for |w| ≳ 1.
fn e1_continued_fraction(w: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-30, 0.0);
    let mut b = w + 1.0;
    let mut c = Complex64::new(1.0, 0.0) / tiny;
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * an + b);
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-w).exp()
}

fn ei_series_complex(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..1000 {
        let nf = n as f64;
        term = term * z / nf;
        let add = term / nf;
        sum += add;
        if add.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum + EULER_GAMMA + z.ln()
}

/// Complex exponential integral on the principal branch,
/// Ei(z) = γ + ln z + Σ zⁿ/(n·n!), satisfying Ei(z̄) = conj Ei(z).
///
/// Li(x^ρ) for a complex zero ρ is evaluated as `exp_integral(ρ · ln x)`.
pub fn exp_integral(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(domain("exp_integral", "Ei is singular at 0"));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(exp_integral_real(z.re)?, 0.0));
    }
    let r = z.norm();
    if r <= 5.0 || (r - z.re <= 8.0 && r <= 40.0) {
        return Ok(ei_series_complex(z));
    }
    // Ei(z) = −E₁(−z) + iπ·sgn(Im z)
    let e1 = e1_continued_fraction(-z);
    Ok(-e1 + Complex64::new(0.0, PI.copysign(z.im)))
}

/// Si(x) = ∫₀ˣ sin t / t dt for x ≥ 0.
pub fn sine_integral(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain("sine_integral", format!("x must be ≥ 0, got {x}")));
    }
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let add = term / (2.0 * kf + 1.0);
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        Ok(sum)
    } else {
        // E₁(ix) = −Ci(x) + i(Si(x) − π/2)
        Ok(e1_continued_fraction(Complex64::new(0.0, x)).im + FRAC_PI_2)
    }
}

/// si(x) = Si(x) − π/2.
pub fn sine_integral_shifted(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(
            "sine_integral_shifted",
            format!("x must be ≥ 0, got {x}"),
        ));
    }
    if x <= 4.0 {
        Ok(sine_integral(x)? - FRAC_PI_2)
    } else {
        Ok(e1_continued_fraction(Complex64::new(0.0, x)).im)
    }
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b) for a, b > 0.
pub fn beta_function(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(
            "beta_function",
            format!("arguments must be positive, got ({a}, {b})"),
        ));
    }
    use statrs::function::gamma::ln_gamma;
    Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
}
