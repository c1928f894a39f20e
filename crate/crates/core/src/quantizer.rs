//! Semiclassical (WKB) machinery on the half-line with a hard wall at x = 0.
//!
//! The phase integral Φ(E) = ∫₀^{x_T} √(E − V(x)) dx is evaluated piecewise
//! between the jump points of V, and the last piece uses x = x_T − t² so the
//! square-root behaviour at the turning point becomes a smooth integrand.
//! Eigenvalues solve Φ(E_N) = μπ(N + ν).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::potential::Potential;
use crate::quad::{integrate, integrate_sqrt_left, integrate_sqrt_right, Quadrature};
use crate::roots::{bisect_predicate, brent};
use crate::schrodinger::{Provenance, Spectrum};

/// Eigenvalue condition Φ(E_N) = mu·π·(N + nu).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationRule {
    pub mu: f64,
    pub nu: f64,
}

impl QuantizationRule {
    /// Φ = 2π(N + 1/4), the half-oscillator constant.
    pub const PAPER: Self = Self { mu: 2.0, nu: 0.25 };
    /// Φ = π(N + 3/4), hard wall plus one soft turning point.
    pub const STANDARD: Self = Self { mu: 1.0, nu: 0.75 };

    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu > 0.0) || !nu.is_finite() {
            return Err(domain(
                "QuantizationRule",
                format!("need mu > 0 and finite nu, got ({mu}, {nu})"),
            ));
        }
        Ok(Self { mu, nu })
    }

    pub fn target(&self, n: usize) -> f64 {
        self.mu * PI * (n as f64 + self.nu)
    }

    /// Continuous level index N(E) = Φ/(μπ) − ν.
    pub fn level_index(&self, phase: f64) -> f64 {
        phase / (self.mu * PI) - self.nu
    }

    pub fn name(&self) -> String {
        if *self == Self::PAPER {
            "paper".into()
        } else if *self == Self::STANDARD {
            "standard".into()
        } else {
            format!("custom(mu={}, nu={})", self.mu, self.nu)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub energy: f64,
    pub x_t: f64,
    pub phi: f64,
    pub quad_error_estimate: f64,
}

const PHASE_QUAD: Quadrature = Quadrature {
    rel_tol: 1e-12,
    abs_tol: 1e-300,
    max_intervals: 4000,
};

/// Largest x with V(x) = E, located by doubling and bisection.
pub fn turning_point<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<f64> {
    if !(energy > model.floor()) || !energy.is_finite() {
        return Err(Error::NoBracket(format!(
            "E = {energy} is not above the potential floor {}",
            model.floor()
        )));
    }
    let above = |x: f64| model.value(x) > energy;
    let mut hi = 1.0;
    let lo;
    if above(hi) {
        let mut x = hi;
        loop {
            x *= 0.5;
            if x < 1e-300 {
                return Err(Error::NoBracket(format!(
                    "no allowed region below E = {energy}"
                )));
            }
            if !above(x) {
                break;
            }
            hi = x;
        }
        lo = x;
    } else {
        let mut x = hi;
        loop {
            x *= 2.0;
            if x > 1e200 {
                return Err(Error::NoBracket(format!("V never exceeds E = {energy}")));
            }
            if above(x) {
                break;
            }
        }
        lo = 0.5 * x;
        hi = x;
    }
    Ok(bisect_predicate(above, lo, hi, 1e-15))
}

fn momentum<P: Potential + ?Sized>(model: &P, energy: f64) -> impl Fn(f64) -> f64 + '_ {
    move |x| (energy - model.value(x)).max(0.0).sqrt()
}

/// Φ(E) with its quadrature error estimate.
pub fn phase_integral<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<PhaseResult> {
    let x_t = turning_point(model, energy)?;
    let p = momentum(model, energy);
    let mut phi = 0.0;
    let mut err = 0.0;
    let mut left = 0.0;
    for &b in model.breakpoints().iter().filter(|&&b| b < x_t) {
        let r = integrate(&p, left, b, PHASE_QUAD)?;
        phi += r.value;
        err += r.error;
        left = b;
    }
    let r = integrate_sqrt_right(&p, left, x_t, PHASE_QUAD)?;
    phi += r.value;
    err += r.error;
    Ok(PhaseResult {
        energy,
        x_t,
        phi,
        quad_error_estimate: err,
    })
}

/// Φ(E), or 0 where there is no classically allowed region.
fn phase_or_zero<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<f64> {
    if energy <= model.floor() {
        return Ok(0.0);
    }
    Ok(phase_integral(model, energy)?.phi)
}

/// Energy E_N with Φ(E_N) = μπ(N + ν).
pub fn wkb_eigenvalue<P: Potential + ?Sized>(
    model: &P,
    n: usize,
    rule: QuantizationRule,
) -> Result<f64> {
    wkb_eigenvalue_from(model, n, rule, None)
}

/// As [`wkb_eigenvalue`], growing the bracket from a known lower energy.
pub fn wkb_eigenvalue_from<P: Potential + ?Sized>(
    model: &P,
    n: usize,
    rule: QuantizationRule,
    below: Option<f64>,
) -> Result<f64> {
    let target = rule.target(n);
    let residual = |e: f64| phase_or_zero(model, e).map(|phi| phi - target);

    let floor = model.floor();
    let mut lo = match below {
        Some(e) if e > floor => e,
        _ if floor.is_finite() => floor,
        _ => -1.0,
    };
    while residual(lo)? > 0.0 {
        // only reachable for unbounded-below potentials or a bad hint
        let step = lo.abs().max(1.0);
        lo -= step;
        if lo < -1e6 {
            return Err(Error::NoBracket(format!("no lower bracket for level {n}")));
        }
    }
    let mut step = lo.abs().max(1.0);
    let mut hi = lo + step;
    while residual(hi)? <= 0.0 {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if hi > 1e300 {
            return Err(Error::NoBracket(format!("no upper bracket for level {n}")));
        }
    }
    let mut failure = None;
    let root = brent(
        |e| match residual(e) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14,
    )?;
    match failure {
        Some(err) => Err(err),
        None => Ok(root),
    }
}

/// WKB eigenvalues for the listed quantum numbers, in the given order.
pub fn wkb_spectrum<P: Potential + ?Sized>(
    model: &P,
    levels: &[usize],
    rule: QuantizationRule,
) -> Result<Spectrum> {
    let eigenvalues = levels
        .par_iter()
        .map(|&n| wkb_eigenvalue(model, n, rule))
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(
        levels.to_vec(),
        eigenvalues,
        Provenance::Wkb {
            rule,
            model: model.label(),
        },
    )
}

/// dN/dE = Φ'(E)/(μπ) by a central difference of the phase integral.
pub fn density_of_states<P: Potential + ?Sized>(
    model: &P,
    energy: f64,
    rule: QuantizationRule,
) -> Result<f64> {
    let h = 1e-4 * energy.abs().max(1.0);
    let up = phase_integral(model, energy + h)?.phi;
    let down = phase_integral(model, energy - h)?.phi;
    Ok((up - down) / (2.0 * h) / (rule.mu * PI))
}

/// Fraction of x_T on either side of the turning point where the WKB forms
/// are not evaluated.
pub const AIRY_PATCH: f64 = 0.05;

/// Normalization of the WKB state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbNorm {
    /// A from ∫|ψ|² = 1 over both WKB regions, the Airy patch left out.
    pub a_numeric: f64,
    /// ∫₀^{(1−p)x_T} sin²φ / √(E−V) dx
    pub inside: f64,
    /// ∫_{(1+p)x_T}^∞ exp(−2κ) / √(V−E) dx
    pub tail: f64,
    /// A² = {√2 ln x_T + (2x_T/ln³x_T)^(−2/3)}^(−1)
    pub a_squared_closed_form: f64,
}

/// A normalized WKB state at energy E.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WkbState {
    pub energy: f64,
    pub x_t: f64,
    pub phi_total: f64,
    pub norm_a: f64,
    pub node_count: usize,
    pub norm: WkbNorm,
}

/// Uniform grid in s ∈ [0, 1] mapped by x = b(1 − (1 − s)²) onto [0, b],
/// b at or below x_T. Holds φ(x(s)) cumulatively.
struct AllowedGrid {
    s_step: f64,
    x: Vec<f64>,
    dxds: Vec<f64>,
    gap: Vec<f64>,
    phi: Vec<f64>,
}

const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
];

impl AllowedGrid {
    fn build<P: Potential + ?Sized>(model: &P, energy: f64, upper: f64, cells: usize) -> Self {
        let h = 1.0 / cells as f64;
        let map = |s: f64| upper * (1.0 - (1.0 - s) * (1.0 - s));
        let jac = |s: f64| 2.0 * upper * (1.0 - s);
        let integrand = |s: f64| (energy - model.value(map(s))).max(0.0).sqrt() * jac(s);
        let mut x = Vec::with_capacity(cells + 1);
        let mut dxds = Vec::with_capacity(cells + 1);
        let mut gap = Vec::with_capacity(cells + 1);
        let mut phi = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        for k in 0..=cells {
            let s = k as f64 * h;
            if k > 0 {
                let mid = s - 0.5 * h;
                acc += GL4
                    .iter()
                    .map(|(t, w)| w * integrand(mid + 0.5 * h * t))
                    .sum::<f64>()
                    * 0.5
                    * h;
            }
            let xs = map(s);
            x.push(xs);
            dxds.push(jac(s));
            gap.push((energy - model.value(xs)).max(0.0));
            phi.push(acc);
        }
        Self {
            s_step: h,
            x,
            dxds,
            gap,
            phi,
        }
    }

    /// Simpson sum of f(k) over the grid (cells must be even).
    fn simpson(&self, f: impl Fn(usize) -> f64) -> f64 {
        let n = self.x.len() - 1;
        let mut sum = f(0) + f(n);
        for k in 1..n {
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k);
        }
        sum * self.s_step / 3.0
    }

    /// sin²φ/√(E−V)·dx/ds.
    fn density(&self, k: usize) -> f64 {
        if self.gap[k] <= 0.0 {
            return 0.0;
        }
        self.phi[k].sin().powi(2) / self.gap[k].sqrt() * self.dxds[k]
    }
}

fn grid_cells(phi_total: f64) -> usize {
    let cells = 400 + (20.0 * phi_total / PI) as usize;
    cells + cells % 2
}

fn gl4_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            GL4.iter()
                .map(|(t, w)| w * f(mid + 0.5 * h * t))
                .sum::<f64>()
        })
        .sum::<f64>()
        * 0.5
        * h
}

/// ∫_{x_T(1+p)}^∞ exp(−2κ(x))/√(V−E) dx with κ(x) = ∫_{x_T}^x √(V−E) and p
/// the Airy patch, on a grid in u = √(x − x_T) that accumulates κ.
fn tail_integral<P: Potential + ?Sized>(model: &P, energy: f64, x_t: f64) -> Result<f64> {
    let gap = |u: f64| (model.value(x_t + u * u) - energy).max(0.0);
    // κ integrand in u: 2u·√(V − E)
    let dk = |u: f64| 2.0 * u * gap(u).sqrt();
    let u0 = (AIRY_PATCH * x_t).sqrt();
    let kappa0 = gl4_panels(dk, 0.0, u0, 64);
    let cells = 2000;
    let mut width = (0.1 * x_t.max(1.0)).sqrt();
    let mut guard = 0;
    loop {
        let h = width / cells as f64;
        let mut kappa = kappa0;
        let mut weights = Vec::with_capacity(cells + 1);
        for k in 0..=cells {
            let u = u0 + k as f64 * h;
            if k > 0 {
                let mid = u - 0.5 * h;
                kappa += GL4
                    .iter()
                    .map(|(t, w)| w * dk(mid + 0.5 * h * t))
                    .sum::<f64>()
                    * 0.5
                    * h;
            }
            let g = gap(u);
            let jac = if g > 0.0 { 2.0 * u / g.sqrt() } else { 0.0 };
            weights.push((-2.0 * kappa).exp() * jac);
        }
        if kappa >= 25.0 {
            let mut sum = weights[0] + weights[cells];
            for (k, w) in weights.iter().enumerate().take(cells).skip(1) {
                sum += if k % 2 == 1 { 4.0 } else { 2.0 } * w;
            }
            return Ok(sum * h / 3.0);
        }
        width *= 1.5;
        guard += 1;
        if guard > 80 {
            return Err(Error::NoBracket("WKB tail does not decay".into()));
        }
    }
}

/// Numeric and closed-form normalization of the WKB state at E.
pub fn wkb_norm<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<WkbNorm> {
    let phase = phase_integral(model, energy)?;
    let x_t = phase.x_t;
    let grid = AllowedGrid::build(
        model,
        energy,
        (1.0 - AIRY_PATCH) * x_t,
        grid_cells(phase.phi),
    );
    let inside = grid.simpson(|k| grid.density(k));
    let tail = tail_integral(model, energy, x_t)?;
    let a_numeric = (inside + tail).sqrt().recip();
    let l = x_t.ln();
    let a_squared_closed_form =
        (2f64.sqrt() * l + (2.0 * x_t / l.powi(3)).powf(-2.0 / 3.0)).recip();
    Ok(WkbNorm {
        a_numeric,
        inside,
        tail,
        a_squared_closed_form,
    })
}

impl WkbState {
    pub fn new<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<Self> {
        let phase = phase_integral(model, energy)?;
        let norm = wkb_norm(model, energy)?;
        // zeros of sin φ on (0, x_T): φ = π, 2π, … < Φ
        let node_count = ((phase.phi / PI).ceil() as usize).saturating_sub(1);
        Ok(Self {
            energy,
            x_t: phase.x_t,
            phi_total: phase.phi,
            norm_a: norm.a_numeric,
            node_count,
            norm,
        })
    }

    /// ψ(x) from the oscillating form inside and the decaying form outside.
    /// Fails inside the Airy patch around x_T.
    pub fn psi<P: Potential + ?Sized>(&self, model: &P, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(domain(
                "wkb_wavefunction",
                format!("x must be ≥ 0, got {x}"),
            ));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let half_width = AIRY_PATCH * self.x_t;
        if (x - self.x_t).abs() < half_width {
            return Err(domain(
                "wkb_wavefunction",
                format!(
                    "x = {x} lies within the turning-point patch around {}",
                    self.x_t
                ),
            ));
        }
        let e = self.energy;
        if x < self.x_t {
            let phi = phase_up_to(model, e, x)?;
            let gap = e - model.value(x);
            Ok(self.norm_a * phi.sin() / gap.sqrt().sqrt())
        } else {
            let gap = model.value(x) - e;
            let kappa = integrate_sqrt_left(
                |y| (model.value(y) - e).max(0.0).sqrt(),
                self.x_t,
                x,
                Quadrature::with_rel_tol(1e-10),
            )?
            .value;
            Ok(self.norm_a * (-kappa).exp() / gap.sqrt().sqrt())
        }
    }
}

/// φ(x) = ∫₀ˣ √(E − V) dy for x inside the allowed region.
fn phase_up_to<P: Potential + ?Sized>(model: &P, energy: f64, x: f64) -> Result<f64> {
    let p = momentum(model, energy);
    let mut total = 0.0;
    let mut left = 0.0;
    for &b in model.breakpoints().iter().filter(|&&b| b < x) {
        total += integrate(&p, left, b, PHASE_QUAD)?.value;
        left = b;
    }
    Ok(total + integrate(&p, left, x, PHASE_QUAD)?.value)
}

/// Normalized WKB ψ(x) at energy E.
pub fn wkb_wavefunction<P: Potential + ?Sized>(model: &P, energy: f64, x: f64) -> Result<f64> {
    WkbState::new(model, energy)?.psi(model, x)
}

/// ∫|ψ_WKB|² f(x) dx over the allowed region short of the Airy patch, on
/// the grid used for the normalization.
pub fn wkb_expectation<P, F>(model: &P, energy: f64, f: F) -> Result<f64>
where
    P: Potential + ?Sized,
    F: Fn(f64) -> f64,
{
    let phase = phase_integral(model, energy)?;
    let x_t = phase.x_t;
    let grid = AllowedGrid::build(
        model,
        energy,
        (1.0 - AIRY_PATCH) * x_t,
        grid_cells(phase.phi),
    );
    let norm = wkb_norm(model, energy)?;
    let weighted = grid.simpson(|k| grid.density(k) * f(grid.x[k]));
    Ok(norm.a_numeric.powi(2) * weighted)
}

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Composite 8-point Gauss–Legendre on `panels` equal pieces of [a, b].
fn composite_gl8(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            GL8.iter()
                .map(|(t, w)| w * f(mid + 0.5 * h * t))
                .sum::<f64>()
        })
        .sum::<f64>()
        * 0.5
        * h
}

/// Classical (phase-averaged) expectation: sin² replaced by 1/2, so
/// ⟨f⟩ = ∫₀^{x_T} f/√(E−V) dx / ∫₀^{x_T} dx/√(E−V).
///
/// `log_bandwidth` is the highest angular frequency of f in ln x (0 for a
/// smooth f); panels are sized to put one per half-period. The last quarter
/// below x_T uses x = x_T − t².
pub fn wkb_classical_expectation<P, F>(
    model: &P,
    energy: f64,
    f: F,
    log_bandwidth: f64,
) -> Result<f64>
where
    P: Potential + ?Sized,
    F: Fn(f64) -> f64,
{
    let x_t = turning_point(model, energy)?;
    let weight = |x: f64| {
        let gap = energy - model.value(x);
        if gap <= 0.0 {
            0.0
        } else {
            gap.sqrt().recip()
        }
    };
    let panels_for = |lo: f64, hi: f64| {
        let lo = lo.max(1e-3 * hi);
        64 + (log_bandwidth * (hi / lo).ln() / PI).ceil() as usize
    };
    let split = 0.75 * x_t;
    let mut edges = vec![0.0];
    edges.extend(model.breakpoints().iter().copied().filter(|&b| b < split));
    edges.push(split);
    let (mut num, mut den) = (0.0, 0.0);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let n = panels_for(lo, hi);
        // ln-uniform panels away from the origin, plain ones touching it
        if lo > 0.0 {
            let (ul, uh) = (lo.ln(), hi.ln());
            num += composite_gl8(
                |u| {
                    let x = u.exp();
                    f(x) * weight(x) * x
                },
                ul,
                uh,
                n,
            );
            den += composite_gl8(
                |u| {
                    let x = u.exp();
                    weight(x) * x
                },
                ul,
                uh,
                n,
            );
        } else {
            num += composite_gl8(|x| f(x) * weight(x), lo, hi, n);
            den += composite_gl8(weight, lo, hi, n);
        }
    }
    // x = x_T − t²: dx/√(E−V) becomes 2t/√(E−V), finite at t = 0
    let span = (x_t - split).sqrt();
    let n = panels_for(split, x_t) * 2;
    let near = |t: f64| {
        let x = x_t - t * t;
        let gap = energy - model.value(x);
        if t == 0.0 || gap <= 0.0 {
            0.0
        } else {
            2.0 * t / gap.sqrt()
        }
    };
    num += composite_gl8(|t| near(t) * f(x_t - t * t), 0.0, span, n);
    den += composite_gl8(near, 0.0, span, n);
    if !(den > 0.0) {
        return Err(Error::Degenerate(format!(
            "no classical time below E = {energy}"
        )));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialModel;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn turning_points() {
        assert!(rel(turning_point(&PotentialModel::Quadratic, 9.0).unwrap(), 3.0) < 1e-14);
        assert!(rel(turning_point(&PotentialModel::Linear, 4.0).unwrap(), 4.0) < 1e-14);
        let m = PotentialModel::RiemannPrincipal;
        let x = turning_point(&m, 100.0).unwrap();
        assert!((m.value(x) - 100.0).abs() / 100.0 < 1e-10);
        assert!(turning_point(&PotentialModel::Exponential, 0.5).is_err());
    }

    #[test]
    fn phase_integrals() {
        let q = phase_integral(&PotentialModel::Quadratic, 16.0).unwrap();
        assert!(rel(q.phi, 4.0 * PI) < 1e-12);
        assert!(q.quad_error_estimate <= 1e-9 * q.phi);
        let l = phase_integral(&PotentialModel::Linear, 4.0).unwrap();
        assert!(rel(l.phi, 16.0 / 3.0) < 1e-12);
        let tiny = phase_integral(&PotentialModel::Quadratic, 1e-10).unwrap();
        assert!(tiny.phi < 1e-9);
    }

    #[test]
    fn log_phase_is_gamma_function() {
        // ∫₀^{e^E} √(E − ln x) dx = e^E·Γ(3/2)
        let e = 3.0;
        let r = phase_integral(&PotentialModel::Log, e).unwrap();
        assert!(rel(r.phi, e.exp() * PI.sqrt() / 2.0) < 1e-9, "{}", r.phi);
    }

    #[test]
    fn harmonic_levels() {
        for n in 0..5 {
            let e =
                wkb_eigenvalue(&PotentialModel::Quadratic, n, QuantizationRule::STANDARD).unwrap();
            assert!(rel(e, 4.0 * n as f64 + 3.0) < 1e-12, "N = {n}: {e}");
            let p = wkb_eigenvalue(&PotentialModel::Quadratic, n, QuantizationRule::PAPER).unwrap();
            assert!(rel(p, 8.0 * n as f64 + 2.0) < 1e-12, "N = {n}: {p}");
        }
    }

    #[test]
    fn eigenvalues_increase() {
        let models = [
            PotentialModel::Log,
            PotentialModel::Exponential,
            PotentialModel::RiemannPrincipal,
            PotentialModel::log_corrected(1.0).unwrap(),
        ];
        for m in &models {
            let levels: Vec<usize> = (0..=50).collect();
            let s = wkb_spectrum(m, &levels, QuantizationRule::STANDARD).unwrap();
            assert!(
                s.eigenvalues().windows(2).all(|w| w[1] > w[0]),
                "{}",
                m.label()
            );
        }
    }

    #[test]
    fn harmonic_density_is_quarter() {
        for &e in &[5.0, 50.0, 500.0] {
            let d = density_of_states(&PotentialModel::Quadratic, e, QuantizationRule::STANDARD)
                .unwrap();
            assert!((d - 0.25).abs() < 1e-7, "{d}");
        }
    }

    #[test]
    fn wavefunction_nodes_and_decay() {
        let m = PotentialModel::Quadratic;
        for &n in &[3usize, 10, 25] {
            let e = wkb_eigenvalue(&m, n, QuantizationRule::STANDARD).unwrap();
            let state = WkbState::new(&m, e).unwrap();
            assert_eq!(state.node_count, n);
            let mut sign_changes = 0;
            let mut prev = 0.0f64;
            let samples = 4000;
            let limit = (1.0 - AIRY_PATCH) * state.x_t;
            for k in 1..samples {
                let x = limit * k as f64 / samples as f64;
                let v = state.psi(&m, x).unwrap();
                if prev != 0.0 && v.signum() != prev.signum() {
                    sign_changes += 1;
                }
                prev = v;
            }
            assert_eq!(sign_changes, n, "N = {n}");
        }
    }

    #[test]
    fn wavefunction_edges() {
        let m = PotentialModel::Quadratic;
        let state = WkbState::new(&m, 11.0).unwrap();
        assert_eq!(state.psi(&m, 0.0).unwrap(), 0.0);
        assert!(state.psi(&m, state.x_t).is_err());
        let peak = (1..400)
            .map(|k| {
                state
                    .psi(&m, 0.9 * state.x_t * k as f64 / 400.0)
                    .unwrap()
                    .abs()
            })
            .fold(0.0, f64::max);
        let deep = state.psi(&m, 2.0 * state.x_t).unwrap().abs();
        assert!(deep < 1e-3 * peak);
        assert!(state.norm_a > 0.0);
    }

    /// Composite Simpson of ψ² evaluated point by point, independent of the
    /// normalization grid.
    fn psi_squared_mass<P: Potential + ?Sized>(
        state: &WkbState,
        m: &P,
        a: f64,
        b: f64,
        n: usize,
    ) -> f64 {
        let h = (b - a) / n as f64;
        let f = |x: f64| state.psi(m, x).unwrap().powi(2);
        let mut sum = f(a) + f(b);
        for k in 1..n {
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
        }
        sum * h / 3.0
    }

    #[test]
    fn quadratic_state_is_normalized() {
        let m = PotentialModel::Quadratic;
        let state = WkbState::new(&m, 11.0).unwrap();
        let x_t = state.x_t;
        let inside = psi_squared_mass(&state, &m, 0.0, (1.0 - AIRY_PATCH) * x_t, 4000);
        let outside = psi_squared_mass(&state, &m, (1.0 + AIRY_PATCH) * x_t, 4.0 * x_t, 4000);
        assert!(
            (inside + outside - 1.0).abs() < 1e-3,
            "{}",
            inside + outside
        );
    }

    #[test]
    fn principal_amplitude_scales_with_log() {
        let m = PotentialModel::RiemannPrincipal;
        for e in [1e3, 1e4, 1e5] {
            let norm = wkb_norm(&m, e).unwrap();
            let x_t = turning_point(&m, e).unwrap();
            let scaled = norm.a_numeric.powi(2) * x_t.ln();
            assert!((0.3..=3.0).contains(&scaled), "E = {e}: {scaled}");
        }
    }
}
