//! Potentials: the power/log/exponential family used for the dispersion
//! sweep, the principal Riemann potential (x/ln x)·li(x), its zero-driven
//! fluctuation, and the truncated explicit formula for J(x).
//!
//! Every potential has a hard wall at x = 0. The Riemann potentials and the
//! log-divided family members vanish on (0, 2) and jump at x = 2.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, Quadrature};
use crate::specfun::{exp_integral, exp_integral_real, li, sine_integral_shifted};
use crate::zeros::ZeroSet;

/// Left edge of the region where the Riemann potentials are nonzero.
pub const RIEMANN_EDGE: f64 = 2.0;

/// Anything the quantizer and the grid solver can work with.
pub trait Potential: Sync {
    /// V(x). Must return `+∞` for `x ≤ 0`.
    fn value(&self, x: f64) -> f64;

    /// Positions of jump discontinuities in (0, ∞), ascending.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }

    /// Infimum of V on (0, ∞).
    fn floor(&self) -> f64 {
        0.0
    }

    fn label(&self) -> String;
}

/// How the zero sum S(x) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SMode {
    /// Leading term of every conjugate pair, summed upward in height.
    TermSum,
    /// Per-block integral form with si/cos boundary terms.
    BlockIntegral,
    /// Closed form for a critical-line set, driven by the lowest zero only.
    RiemannClosedForm,
}

impl SMode {
    pub fn name(self) -> &'static str {
        match self {
            SMode::TermSum => "term-sum",
            SMode::BlockIntegral => "block-integral",
            SMode::RiemannClosedForm => "riemann-closed-form",
        }
    }
}

impl fmt::Display for SMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A zero set paired with an evaluation mode for S(x); validated on
/// construction so evaluation cannot fail.
#[derive(Debug, Clone, PartialEq)]
pub struct Fluctuation {
    zeros: Arc<ZeroSet>,
    mode: SMode,
}

impl Fluctuation {
    pub fn new(zeros: Arc<ZeroSet>, mode: SMode) -> Result<Self> {
        if mode == SMode::RiemannClosedForm && !zeros.all_critical() {
            return Err(Error::ModeMismatch { mode: mode.name() });
        }
        Ok(Self { zeros, mode })
    }

    pub fn zeros(&self) -> &ZeroSet {
        &self.zeros
    }

    pub fn mode(&self) -> SMode {
        self.mode
    }

    /// S(x) for x ≥ 2.
    pub fn s(&self, x: f64) -> f64 {
        match self.mode {
            SMode::TermSum => s_term_sum(&self.zeros, x),
            SMode::BlockIntegral => s_block_integral(&self.zeros, x),
            SMode::RiemannClosedForm => s_closed_form(&self.zeros, x),
        }
    }

    /// V_RP(x) = (x/ln x)·S(x); zero on (0, 2).
    pub fn potential(&self, x: f64) -> f64 {
        if x < RIEMANN_EDGE {
            0.0
        } else {
            x / x.ln() * self.s(x)
        }
    }

    /// Same fluctuation scaled by a constant, for linearity checks.
    pub fn scaled(&self, factor: f64) -> ScaledFluctuation<'_> {
        ScaledFluctuation {
            inner: self,
            factor,
        }
    }
}

/// View of a fluctuation multiplied by a constant.
#[derive(Debug, Clone, Copy)]
pub struct ScaledFluctuation<'a> {
    inner: &'a Fluctuation,
    factor: f64,
}

impl ScaledFluctuation<'_> {
    pub fn potential(&self, x: f64) -> f64 {
        self.factor * self.inner.potential(x)
    }
}

fn s_term_sum(zeros: &ZeroSet, x: f64) -> f64 {
    let l = x.ln();
    let mut sum = 0.0;
    let mut last_a = f64::NAN;
    let mut x_pow = 0.0;
    for z in zeros.zeros() {
        let (a, alpha) = (z.a(), z.alpha());
        if a != last_a {
            x_pow = x.powf(a);
            last_a = a;
        }
        let (sin, cos) = (alpha * l).sin_cos();
        sum += x_pow * (2.0 * a * cos + 2.0 * alpha * sin) / (a * a + alpha * alpha);
    }
    -sum / l
}

fn s_block_integral(zeros: &ZeroSet, x: f64) -> f64 {
    let l = x.ln();
    let heights = zeros.zeros();
    let mut sum = 0.0;
    for (a, first, last) in zeros.blocks() {
        let lo = heights[first].alpha();
        let hi = heights[last].alpha();
        let si_hi = sine_integral_shifted(hi * l).unwrap_or(0.0);
        let si_lo = sine_integral_shifted(lo * l).unwrap_or(0.0);
        let cos_terms = -(hi * l).cos() / hi + (lo * l).cos() / lo;
        let inner = (si_hi - si_lo) * (1.0 + a * l) + a / lo * cos_terms;
        sum += x.powf(a) * inner * lo.ln();
    }
    -2.0 / l * sum
}

fn s_closed_form(zeros: &ZeroSet, x: f64) -> f64 {
    let Some(alpha1) = zeros.first_alpha() else {
        return 0.0;
    };
    let l = x.ln();
    let si = sine_integral_shifted(alpha1 * l).unwrap_or(0.0);
    let bracket = si + 0.5 * l * si - (alpha1 * l).cos() / (2.0 * alpha1);
    2.0 * x.sqrt() / l * bracket * alpha1.ln()
}

/// The potentials of the laboratory.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    /// ln x
    Log,
    /// x
    Linear,
    /// x²
    Quadratic,
    /// eˣ
    Exponential,
    /// x^(2−ε), 0 < ε ≤ 1/2
    PowerNearHarmonic { epsilon: f64 },
    /// x²/(ln x)^b for x ≥ 2, zero on (0, 2); b ∈ {1, 2}
    LogCorrected { b: f64 },
    /// (x/ln x)·li(x) for x ≥ 2, zero on (0, 2)
    RiemannPrincipal,
    /// principal part plus (x/ln x)·S(x)
    RiemannFull(Fluctuation),
    /// (2/ln x)·∫₂ˣ J(y) dy with the truncated explicit formula for J
    RiemannIntegralForm(Arc<ZeroSet>),
}

impl PotentialModel {
    pub fn power_near_harmonic(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(domain(
                "PotentialModel",
                format!("epsilon must lie in (0, 0.5], got {epsilon}"),
            ));
        }
        Ok(Self::PowerNearHarmonic { epsilon })
    }

    pub fn log_corrected(b: f64) -> Result<Self> {
        if b != 1.0 && b != 2.0 {
            return Err(domain(
                "PotentialModel",
                format!("b must be 1 or 2, got {b}"),
            ));
        }
        Ok(Self::LogCorrected { b })
    }

    pub fn riemann_full(zeros: Arc<ZeroSet>, mode: SMode) -> Result<Self> {
        Ok(Self::RiemannFull(Fluctuation::new(zeros, mode)?))
    }

    /// V(x) for x > 0.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(
                "eval",
                format!("x must be positive and finite, got {x}"),
            ));
        }
        Ok(self.value(x))
    }

    /// V on the closed half-line, taking the right limit at x = 0.
    pub fn eval_closed(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(match self {
                Self::Log => f64::NEG_INFINITY,
                Self::Exponential => 1.0,
                _ => 0.0,
            });
        }
        self.eval(x)
    }

    fn vanishes_below_edge(&self) -> bool {
        matches!(
            self,
            Self::LogCorrected { .. }
                | Self::RiemannPrincipal
                | Self::RiemannFull(_)
                | Self::RiemannIntegralForm(_)
        )
    }
}

/// V_R0(x) = (x/ln x)·li(x) for x ≥ 2.
pub(crate) fn principal(x: f64) -> f64 {
    x / x.ln() * li(x).unwrap_or(f64::NAN)
}

impl Potential for PotentialModel {
    fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::INFINITY;
        }
        if self.vanishes_below_edge() && x < RIEMANN_EDGE {
            return 0.0;
        }
        match self {
            Self::Log => x.ln(),
            Self::Linear => x,
            Self::Quadratic => x * x,
            Self::Exponential => x.exp(),
            Self::PowerNearHarmonic { epsilon } => x.powf(2.0 - epsilon),
            Self::LogCorrected { b } => x * x / x.ln().powf(*b),
            Self::RiemannPrincipal => principal(x),
            Self::RiemannFull(fl) => principal(x) + fl.potential(x),
            Self::RiemannIntegralForm(zeros) => 2.0 / x.ln() * j_integral_closed(x, zeros),
        }
    }

    fn breakpoints(&self) -> &[f64] {
        if self.vanishes_below_edge() {
            &[RIEMANN_EDGE]
        } else {
            &[]
        }
    }

    fn floor(&self) -> f64 {
        match self {
            Self::Log => f64::NEG_INFINITY,
            Self::Exponential => 1.0,
            _ => 0.0,
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Log => "log".into(),
            Self::Linear => "linear".into(),
            Self::Quadratic => "quadratic".into(),
            Self::Exponential => "exponential".into(),
            Self::PowerNearHarmonic { epsilon } => {
                format!("power-near-harmonic(epsilon={epsilon})")
            }
            Self::LogCorrected { b } => format!("log-corrected(b={b})"),
            Self::RiemannPrincipal => "riemann-principal".into(),
            Self::RiemannFull(fl) => {
                format!("riemann-full(zeros={}, s={})", fl.zeros().len(), fl.mode())
            }
            Self::RiemannIntegralForm(z) => format!("riemann-integral-form(zeros={})", z.len()),
        }
    }
}

fn check_edge(function: &'static str, x: f64) -> Result<()> {
    if !(x >= RIEMANN_EDGE) || !x.is_finite() {
        return Err(domain(function, format!("x must be ≥ 2, got {x}")));
    }
    Ok(())
}

/// S(x) in the requested mode. An empty zero set gives 0.
pub fn fluctuation_s(x: f64, zeros: &ZeroSet, mode: SMode) -> Result<f64> {
    check_edge("fluctuation_s", x)?;
    if mode == SMode::RiemannClosedForm && !zeros.all_critical() {
        return Err(Error::ModeMismatch { mode: mode.name() });
    }
    Ok(match mode {
        SMode::TermSum => s_term_sum(zeros, x),
        SMode::BlockIntegral => s_block_integral(zeros, x),
        SMode::RiemannClosedForm => s_closed_form(zeros, x),
    })
}

/// V_RP(x) = (x/ln x)·S(x).
pub fn perturbation_potential(x: f64, zeros: &ZeroSet, mode: SMode) -> Result<f64> {
    Ok(x / x.ln() * fluctuation_s(x, zeros, mode)?)
}

/// 2·Re Li(x^ρ) summed over the set, with Li(x^ρ) = Ei(ρ ln x).
fn zero_pair_sum(x: f64, zeros: &ZeroSet) -> f64 {
    let l = x.ln();
    zeros
        .zeros()
        .iter()
        .map(|z| {
            let w = Complex64::new(z.a(), z.alpha()) * l;
            2.0 * exp_integral(w).map(|e| e.re).unwrap_or(0.0)
        })
        .sum()
}

/// J(x) ≈ li(x) − Σ [Li(x^ρ) + Li(x^ρ̄)], truncated at the size of the set
/// and without the two small non-oscillating terms.
pub fn j_explicit(x: f64, zeros: &ZeroSet) -> Result<f64> {
    check_edge("j_explicit", x)?;
    Ok(li(x)? - zero_pair_sum(x, zeros))
}

/// ∫₂ˣ J(y) dy from the antiderivatives
/// ∫ li(y) dy = y·li(y) − li(y²) and ∫ Ei(ρ ln y) dy = y·Ei(ρ ln y) − Ei((ρ+1) ln y).
pub(crate) fn j_integral_closed(x: f64, zeros: &ZeroSet) -> f64 {
    let antiderivative = |y: f64| -> f64 {
        let l = y.ln();
        let mut value =
            y * li(y).unwrap_or(f64::NAN) - exp_integral_real(2.0 * l).unwrap_or(f64::NAN);
        for z in zeros.zeros() {
            let rho = Complex64::new(z.a(), z.alpha());
            let e1 = exp_integral(rho * l).unwrap_or_default();
            let e2 = exp_integral((rho + 1.0) * l).unwrap_or_default();
            value -= 2.0 * (y * e1 - e2).re;
        }
        value
    };
    antiderivative(x) - antiderivative(RIEMANN_EDGE)
}

/// G(x) = (2/ln x)·∫₂ˣ J(y) dy by adaptive quadrature of [`j_explicit`].
pub fn integral_form_potential(x: f64, zeros: &ZeroSet) -> Result<f64> {
    check_edge("integral_form_potential", x)?;
    let opts = Quadrature {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        max_intervals: 20_000,
    };
    let integral = integrate(
        |y| li(y).unwrap_or(f64::NAN) - zero_pair_sum(y, zeros),
        RIEMANN_EDGE,
        x,
        opts,
    )?;
    Ok(2.0 / x.ln() * integral.value)
}

/// Exact prime-power counting function J(x) = Σ_k π(x^{1/k})/k, using a
/// sieve. Values at prime powers are the right-continuous ones.
pub fn j_prime_power_oracle(x: f64) -> Result<f64> {
    check_edge("j_prime_power_oracle", x)?;
    Ok(PrimeTable::up_to(x.floor() as usize).j(x))
}

/// Prime counts up to a bound, for repeated J evaluations.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    /// counts[n] = π(n)
    counts: Vec<u32>,
}

impl PrimeTable {
    pub fn up_to(n: usize) -> Self {
        let n = n.max(2);
        let mut composite = vec![false; n + 1];
        let mut counts = vec![0u32; n + 1];
        let mut running = 0;
        for i in 2..=n {
            if !composite[i] {
                running += 1;
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
            counts[i] = running;
        }
        Self { counts }
    }

    pub fn pi(&self, x: f64) -> u32 {
        if x < 2.0 {
            return 0;
        }
        let n = (x.floor() as usize).min(self.counts.len() - 1);
        self.counts[n]
    }

    /// J(x) for x within the table range.
    pub fn j(&self, x: f64) -> f64 {
        let mut total = 0.0;
        let mut k = 1u32;
        loop {
            let root = integer_root(x, k);
            if root < 2 {
                break;
            }
            total += f64::from(self.pi(root as f64)) / f64::from(k);
            k += 1;
        }
        total
    }
}

/// ⌊x^{1/k}⌋ with exact correction of floating-point rounding.
fn integer_root(x: f64, k: u32) -> u64 {
    let mut r = x.powf(1.0 / f64::from(k)).floor() as u64;
    while r > 0 && (r as f64).powi(k as i32) > x {
        r -= 1;
    }
    while ((r + 1) as f64).powi(k as i32) <= x {
        r += 1;
    }
    r
}

/// Asymptotic expansion x²(1/ln²x + 1/ln³x) of the principal potential.
pub fn principal_two_term(x: f64) -> f64 {
    let l = x.ln();
    x * x * (1.0 / (l * l) + 1.0 / (l * l * l))
}

/// (2/ln x)·∫₂ˣ li(y) dy in closed form; handy for comparing with the
/// principal potential.
pub fn integral_form_principal(x: f64) -> f64 {
    2.0 / x.ln() * j_integral_closed(x, &ZeroSet::empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_zero() -> ZeroSet {
        ZeroSet::critical_line(&[14.134725]).unwrap()
    }

    #[test]
    fn family_values() {
        assert_eq!(PotentialModel::Quadratic.eval(3.0).unwrap(), 9.0);
        assert_eq!(PotentialModel::Linear.eval(4.0).unwrap(), 4.0);
        assert_eq!(
            PotentialModel::Exponential.eval(1.0).unwrap(),
            std::f64::consts::E
        );
        assert!((PotentialModel::Log.eval(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        let p = PotentialModel::power_near_harmonic(0.1).unwrap();
        assert!((p.eval(4.0).unwrap() - 4f64.powf(1.9)).abs() < 1e-12);
        assert!(PotentialModel::power_near_harmonic(0.6).is_err());
        assert!(PotentialModel::log_corrected(3.0).is_err());
        let lc = PotentialModel::log_corrected(2.0).unwrap();
        assert_eq!(lc.eval(1.0).unwrap(), 0.0);
        assert!(PotentialModel::Quadratic.eval(0.0).is_err());
        assert_eq!(PotentialModel::Quadratic.value(-1.0), f64::INFINITY);
    }

    #[test]
    fn principal_values() {
        let m = PotentialModel::RiemannPrincipal;
        assert_eq!(m.eval(1.5).unwrap(), 0.0);
        let v2 = m.eval(2.0).unwrap();
        assert!((v2 - 2.0 / 2f64.ln() * 1.045_163_780_117_492).abs() < 1e-12);
        assert!((v2 - 3.0157).abs() < 1e-4);
        assert_eq!(m.breakpoints(), &[2.0]);
    }

    #[test]
    fn single_pair_term_sum() {
        let s = fluctuation_s(10.0, &first_zero(), SMode::TermSum).unwrap();
        assert!((s + 0.178).abs() < 5e-4, "{s}");
        let v = perturbation_potential(10.0, &first_zero(), SMode::TermSum).unwrap();
        assert!((v + 0.773).abs() < 3e-3, "{v}");
    }

    #[test]
    fn empty_set_gives_zero_fluctuation() {
        for mode in [
            SMode::TermSum,
            SMode::BlockIntegral,
            SMode::RiemannClosedForm,
        ] {
            assert_eq!(fluctuation_s(5.0, &ZeroSet::empty(), mode).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_form_rejects_off_line_zeros() {
        let zs = ZeroSet::new(
            vec![crate::zeros::Zero::new(0.7, 14.0).unwrap()],
            crate::zeros::ZeroSource::Synthetic,
        )
        .unwrap();
        assert!(matches!(
            fluctuation_s(5.0, &zs, SMode::RiemannClosedForm),
            Err(Error::ModeMismatch { .. })
        ));
        assert!(Fluctuation::new(Arc::new(zs), SMode::RiemannClosedForm).is_err());
    }

    #[test]
    fn prime_power_oracle_values() {
        assert!(
            (j_prime_power_oracle(20.0).unwrap() - (8.0 + 1.0 + 1.0 / 3.0 + 0.25)).abs() < 1e-12
        );
        assert_eq!(j_prime_power_oracle(2.0).unwrap(), 1.0);
        // 8 = 2³ is counted at the jump
        let below = j_prime_power_oracle(7.999).unwrap();
        let at = j_prime_power_oracle(8.0).unwrap();
        assert!((at - below - 1.0 / 3.0).abs() < 1e-12);
        assert!(j_prime_power_oracle(1.5).is_err());
    }

    #[test]
    fn integer_roots_are_exact() {
        assert_eq!(integer_root(8.0, 3), 2);
        assert_eq!(integer_root(7.999_999, 3), 1);
        assert_eq!(integer_root(1e6, 2), 1000);
        assert_eq!(integer_root(243.0, 5), 3);
    }

    #[test]
    fn explicit_formula_without_zeros_is_li() {
        let j = j_explicit(10.0, &ZeroSet::empty()).unwrap();
        assert!((j - li(10.0).unwrap()).abs() < 1e-14);
        assert!(j_explicit(1.0, &ZeroSet::empty()).is_err());
    }

    #[test]
    fn integral_form_routes_agree() {
        let zs = ZeroSet::critical_line(&[14.134725, 21.02204, 25.010858]).unwrap();
        for &x in &[2.5, 10.0, 40.0] {
            let quad = integral_form_potential(x, &zs).unwrap();
            let closed = 2.0 / x.ln() * j_integral_closed(x, &zs);
            assert!(
                (quad - closed).abs() < 1e-7 * closed.abs().max(1.0),
                "x = {x}: {quad} vs {closed}"
            );
        }
        assert_eq!(integral_form_potential(2.0, &zs).unwrap(), 0.0);
    }
}
