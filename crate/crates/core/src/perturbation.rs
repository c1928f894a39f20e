//! First-order shifts of the principal-potential levels under the zero-driven
//! fluctuation V_RP, numerically and in closed form, plus the exploratory
//! fixed-point map for the zero heights.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::potential::{Fluctuation, Potential, SMode, RIEMANN_EDGE};
use crate::quantizer::{
    phase_integral, turning_point, wkb_classical_expectation, wkb_eigenvalue, wkb_norm,
    QuantizationRule,
};
use crate::schrodinger::{GridSpec, Method, StateGrid};
use crate::specfun::beta_function;
use crate::zeros::{Zero, ZeroSet, ZeroSource};

/// Prefactor of the leading-cosine closed form, twice B(5/2, 1/2).
pub const RH_CLOSED_PREFACTOR: f64 = 3.0 * PI / 4.0;

/// Which unperturbed state the matrix element is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateSource {
    /// WKB state at the quantized energy.
    Wkb,
    /// Grid eigenfunction nearest in energy.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// C·V_RP(x_T) with C = B(δ + 1, 1/2).
    LinearApplication,
    /// Leading cosine of the critical-line closed form.
    RHClosedForm,
    /// Integrated-potential variant with the F(x_T) − F(2) bracket.
    IntegralForm,
}

impl ClosedForm {
    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::LinearApplication => "linear-application",
            ClosedForm::RHClosedForm => "rh-closed-form",
            ClosedForm::IntegralForm => "integral-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    pub delta: f64,
    pub alpha_1: f64,
}

impl ClosedFormParams {
    pub fn new(delta: f64, alpha_1: f64) -> Result<Self> {
        if !(delta > 0.0) || !(alpha_1 > 0.0) {
            return Err(domain(
                "ClosedFormParams",
                format!("need delta > 0 and alpha_1 > 0, got ({delta}, {alpha_1})"),
            ));
        }
        Ok(Self { delta, alpha_1 })
    }

    /// δ = 3/2 and α₁ from the lowest zero of the set.
    pub fn from_zeros(zeros: &ZeroSet) -> Result<Self> {
        let alpha_1 = zeros
            .first_alpha()
            .ok_or_else(|| Error::Config("closed forms need at least one zero".into()))?;
        Self::new(1.5, alpha_1)
    }

    /// C = B(δ + 1, 1/2).
    pub fn coefficient(&self) -> Result<f64> {
        beta_function(self.delta + 1.0, 0.5)
    }
}

/// ⟨ψ|V_RP|ψ⟩ and the size of the part beyond x_T.
///
/// For WKB states `value` covers [0, x_T] and `tail_bound` bounds what was
/// left out. For grid states `value` is the full expectation and
/// `tail_bound` is |∫_{x_T}^∞ ψ² V_RP|, the part a [0, x_T] cut would drop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixElement {
    pub value: f64,
    pub tail_bound: f64,
    /// Energy of the state used.
    pub energy: f64,
    pub x_t: f64,
}

/// Grid level closest in energy to E: the standard-rule index at E.
fn nearest_grid_level<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<usize> {
    let phi = phase_integral(model, energy)?.phi;
    Ok(QuantizationRule::STANDARD.level_index(phi).round().max(0.0) as usize)
}

fn grid_matrix_element<F: Fn(f64) -> f64>(
    state: &crate::schrodinger::Eigenfunction,
    x_t: f64,
    v: F,
) -> MatrixElement {
    let value = state.expectation(&v);
    let inside = state.expectation_up_to(x_t, &v);
    MatrixElement {
        value,
        tail_bound: (value - inside).abs(),
        energy: state.energy,
        x_t,
    }
}

/// Bound on the WKB tail contribution: tail probability times the largest
/// |V_RP| sampled on [x_T, 2x_T].
fn wkb_tail_bound<P: Potential + ?Sized, F: Fn(f64) -> f64>(
    model: &P,
    energy: f64,
    x_t: f64,
    v: F,
) -> Result<f64> {
    let norm = wkb_norm(model, energy)?;
    let sup = (0..=64)
        .map(|k| v(x_t * (1.0 + k as f64 / 64.0)).abs())
        .fold(0.0, f64::max);
    Ok(norm.a_numeric.powi(2) * norm.tail * sup)
}

/// E_N1 = ⟨ψ_N0|V_RP|ψ_N0⟩ for level N of `model0` quantized under `rule`.
/// WKB states use the phase-averaged density on [0, x_T]; grid states are
/// integrated over the whole grid. An empty zero set gives exactly 0.
pub fn first_order_numeric<P: Potential + ?Sized>(
    model0: &P,
    fluct: &Fluctuation,
    n: usize,
    source: StateSource,
    rule: QuantizationRule,
) -> Result<MatrixElement> {
    let e0 = wkb_eigenvalue(model0, n, rule)?;
    if fluct.zeros().is_empty() {
        return Ok(MatrixElement {
            value: 0.0,
            tail_bound: 0.0,
            energy: e0,
            x_t: turning_point(model0, e0)?,
        });
    }
    let v = |x: f64| fluct.potential(x);
    match source {
        StateSource::Wkb => {
            let x_t = turning_point(model0, e0)?;
            let bandwidth = fluct.zeros().alphas().last().copied().unwrap_or(0.0);
            let value = wkb_classical_expectation(model0, e0, v, bandwidth)?;
            let tail_bound = wkb_tail_bound(model0, e0, x_t, v)?;
            Ok(MatrixElement {
                value,
                tail_bound,
                energy: e0,
                x_t,
            })
        }
        StateSource::Exact => {
            let k = nearest_grid_level(model0, e0)?;
            let spec = GridSpec::for_levels(model0, k, Method::FiniteDifference)?;
            let state = StateGrid::new(model0, &spec, k)?.state(k)?;
            let x_t = turning_point(model0, state.energy)?;
            Ok(grid_matrix_element(&state, x_t, v))
        }
    }
}

/// Closed-form E_N1 at turning point x_T. `fluct` supplies S for the linear
/// application; without it the critical-line closed form at α₁ is used.
pub fn first_order_closed(
    x_t: f64,
    params: ClosedFormParams,
    form: ClosedForm,
    fluct: Option<&Fluctuation>,
) -> Result<f64> {
    if !(x_t >= RIEMANN_EDGE) {
        return Err(domain(
            "first_order_closed",
            format!("x_T must be ≥ 2, got {x_t}"),
        ));
    }
    let a1 = params.alpha_1;
    let l = x_t.ln();
    let weight = a1.ln() / a1;
    match form {
        ClosedForm::LinearApplication => {
            let c = params.coefficient()?;
            let s = match fluct {
                Some(f) => f.s(x_t),
                None => {
                    let zs = Arc::new(ZeroSet::critical_line(&[a1])?);
                    Fluctuation::new(zs, SMode::RiemannClosedForm)?.s(x_t)
                }
            };
            Ok(c * x_t / l * s)
        }
        ClosedForm::RHClosedForm => {
            Ok(-RH_CLOSED_PREFACTOR * x_t.powf(1.5) / (l * l) * (a1 * l).cos() * weight)
        }
        ClosedForm::IntegralForm => {
            let f = |x: f64| {
                let lx = x.ln();
                -x.powf(1.5) / lx * (1.5 * (a1 * lx).cos() + a1 * (a1 * lx).sin())
            };
            let pre = 2f64.powf(0.75) * 3.0 * PI / (4.0 * (2.25 + a1 * a1) * l);
            Ok(-pre * (f(x_t) - f(RIEMANN_EDGE)) * weight)
        }
    }
}

/// Size of the dropped O(1/log) term of the leading-cosine form.
pub fn rh_closed_form_correction(x_t: f64, params: ClosedFormParams) -> Result<f64> {
    let lead = first_order_closed(x_t, params, ClosedForm::RHClosedForm, None)?;
    Ok(lead.abs() / x_t.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedLevel {
    pub n: usize,
    pub e0: f64,
    pub e1_numeric: f64,
    pub e1_closed: f64,
    pub x_t: f64,
    pub tail_bound: f64,
}

/// Settings for [`perturbed_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub rule: QuantizationRule,
    pub source: StateSource,
    pub closed_form: ClosedForm,
    /// Overrides δ and α₁; defaults to [`ClosedFormParams::from_zeros`].
    pub params: Option<ClosedFormParams>,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            rule: QuantizationRule::STANDARD,
            source: StateSource::Exact,
            closed_form: ClosedForm::LinearApplication,
            params: None,
        }
    }
}

/// Per-level E_N0 (WKB), numeric E_N1 and closed-form E_N1. With the exact
/// source all states come from one grid and V_RP is tabulated once.
pub fn perturbed_spectrum<P: Potential + ?Sized>(
    model0: &P,
    fluct: &Fluctuation,
    levels: &[usize],
    cfg: &PerturbationConfig,
) -> Result<Vec<PerturbedLevel>> {
    if levels.is_empty() {
        return Err(Error::Config("empty level range".into()));
    }
    let e0: Vec<f64> = levels
        .par_iter()
        .map(|&n| wkb_eigenvalue(model0, n, cfg.rule))
        .collect::<Result<_>>()?;
    let x_t: Vec<f64> = e0
        .iter()
        .map(|&e| turning_point(model0, e))
        .collect::<Result<_>>()?;
    let params = match cfg.params {
        Some(p) => Some(p),
        None if fluct.zeros().is_empty() => None,
        None => Some(ClosedFormParams::from_zeros(fluct.zeros())?),
    };
    let closed: Vec<f64> = x_t
        .iter()
        .map(|&x| match params {
            None => Ok(0.0),
            Some(p) => first_order_closed(x, p, cfg.closed_form, Some(fluct)),
        })
        .collect::<Result<_>>()?;

    let numeric: Vec<MatrixElement> = if fluct.zeros().is_empty() {
        e0.iter()
            .zip(&x_t)
            .map(|(&e, &x)| MatrixElement {
                value: 0.0,
                tail_bound: 0.0,
                energy: e,
                x_t: x,
            })
            .collect()
    } else {
        match cfg.source {
            StateSource::Wkb => levels
                .par_iter()
                .map(|&n| first_order_numeric(model0, fluct, n, StateSource::Wkb, cfg.rule))
                .collect::<Result<_>>()?,
            StateSource::Exact => {
                let grid_levels: Vec<usize> = e0
                    .iter()
                    .map(|&e| nearest_grid_level(model0, e))
                    .collect::<Result<_>>()?;
                let top = grid_levels.iter().copied().max().unwrap_or(0);
                let spec = GridSpec::for_levels(model0, top, Method::FiniteDifference)?;
                let shared = StateGrid::new(model0, &spec, top)?;
                let nodes = shared.nodes();
                let table: Vec<f64> = nodes.par_iter().map(|&x| fluct.potential(x)).collect();
                let h = shared.step();
                let lookup = |x: f64| table[((x / h).round() as usize).min(table.len() - 1)];
                grid_levels
                    .par_iter()
                    .map(|&k| {
                        let state = shared.state(k)?;
                        let x_t = turning_point(model0, state.energy)?;
                        Ok(grid_matrix_element(&state, x_t, lookup))
                    })
                    .collect::<Result<_>>()?
            }
        }
    };

    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, &n)| PerturbedLevel {
            n,
            e0: e0[i],
            e1_numeric: numeric[i].value,
            e1_closed: closed[i],
            x_t: x_t[i],
            tail_bound: numeric[i].tail_bound,
        })
        .collect())
}

/// One step of the height map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorStep {
    pub alphas: Vec<f64>,
    pub max_abs_move: f64,
    pub max_rel_move: f64,
}

/// Iterates α_N ← E_N0 + C·(x_T/ln x_T)·S(x_T), where S is driven by the
/// current heights of the input zeros (real parts kept). Level N pairs with
/// the N-th input zero; levels beyond the input set start at E_N0 and do not
/// drive S. Aborts if any height grows tenfold or stops being positive.
pub fn attractor_iteration<P: Potential + ?Sized>(
    model0: &P,
    zeros: &ZeroSet,
    mode: SMode,
    rule: QuantizationRule,
    levels: usize,
    steps: usize,
    delta: f64,
) -> Result<Vec<AttractorStep>> {
    if steps == 0 || levels == 0 {
        return Err(Error::Config("need at least one step and one level".into()));
    }
    let c = beta_function(delta + 1.0, 0.5)?;
    let ns: Vec<usize> = (0..levels).collect();
    let e0: Vec<f64> = ns
        .par_iter()
        .map(|&n| wkb_eigenvalue(model0, n, rule))
        .collect::<Result<_>>()?;
    let x_t: Vec<f64> = e0
        .iter()
        .map(|&e| turning_point(model0, e))
        .collect::<Result<_>>()?;
    let drivers = zeros.len().min(levels);
    let real_parts: Vec<f64> = zeros.zeros()[..drivers].iter().map(Zero::a).collect();

    let mut alphas: Vec<f64> = (0..levels)
        .map(|n| {
            if n < drivers {
                zeros.zeros()[n].alpha()
            } else {
                e0[n]
            }
        })
        .collect();
    let mut out = Vec::with_capacity(steps);
    for step in 1..=steps {
        let fluct = if drivers == 0 {
            None
        } else {
            let mut pairs: Vec<(f64, f64)> = real_parts
                .iter()
                .copied()
                .zip(alphas[..drivers].iter().copied())
                .collect();
            pairs.sort_by(|p, q| p.1.total_cmp(&q.1));
            pairs.dedup_by(|p, q| p.1 == q.1);
            let zs = pairs
                .into_iter()
                .map(|(a, h)| Zero::new(a, h))
                .collect::<Result<Vec<_>>>()?;
            Some(Fluctuation::new(
                Arc::new(ZeroSet::new(zs, ZeroSource::Synthetic)?),
                mode,
            )?)
        };
        let next: Vec<f64> = (0..levels)
            .map(|n| {
                let s = fluct.as_ref().map_or(0.0, |f| f.s(x_t[n]));
                e0[n] + c * x_t[n] / x_t[n].ln() * s
            })
            .collect();
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        for (n, (&old, &new)) in alphas.iter().zip(&next).enumerate() {
            if !(new > 0.0) || new > 10.0 * old || !new.is_finite() {
                return Err(Error::Diverged {
                    step,
                    level: n,
                    from: old,
                    to: new,
                });
            }
            max_abs = max_abs.max((new - old).abs());
            max_rel = max_rel.max((new - old).abs() / old.abs());
        }
        alphas = next;
        out.push(AttractorStep {
            alphas: alphas.clone(),
            max_abs_move: max_abs,
            max_rel_move: max_rel,
        });
    }
    Ok(out)
}
