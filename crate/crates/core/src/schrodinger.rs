//! Grid eigenvalue solver for −ψ'' + V(x)ψ = Eψ on (0, x_max) with
//! ψ(0) = ψ(x_max) = 0.
//!
//! The finite-difference operator is symmetric tridiagonal; eigenvalues come
//! from Sturm-sequence bisection and eigenvectors from inverse iteration.
//! Every reported eigenvalue is Richardson-extrapolated from the steps h,
//! h/2 and h/4 and rejected if the two extrapolants disagree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quad::{integrate_sqrt_left, Quadrature};
use crate::quantizer::{turning_point, wkb_eigenvalue, QuantizationRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FiniteDifference,
    NumerovShooting,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::FiniteDifference => "finite-difference",
            Method::NumerovShooting => "numerov",
        }
    }
}

/// Where a list of eigenvalues came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Wkb {
        rule: QuantizationRule,
        model: String,
    },
    Grid {
        method: Method,
        x_max: f64,
        step: f64,
        rel_tol: f64,
        model: String,
    },
    External(String),
}

/// Eigenvalues tagged with their quantum numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    levels: Vec<usize>,
    eigenvalues: Vec<f64>,
    provenance: Provenance,
    wavefunctions: Option<Vec<Eigenfunction>>,
}

impl Spectrum {
    pub fn new(levels: Vec<usize>, eigenvalues: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if levels.len() != eigenvalues.len() {
            return Err(Error::Degenerate(format!(
                "{} levels but {} eigenvalues",
                levels.len(),
                eigenvalues.len()
            )));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Degenerate(
                "level indices must be strictly increasing".into(),
            ));
        }
        if let Some(w) = eigenvalues.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Degenerate(format!(
                "eigenvalues must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            levels,
            eigenvalues,
            provenance,
            wavefunctions: None,
        })
    }

    /// Consecutive levels 0, 1, … for a plain list of values.
    pub fn from_values(eigenvalues: Vec<f64>, provenance: Provenance) -> Result<Self> {
        Self::new((0..eigenvalues.len()).collect(), eigenvalues, provenance)
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn wavefunctions(&self) -> Option<&[Eigenfunction]> {
        self.wavefunctions.as_deref()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalue of quantum number `n`, if present.
    pub fn level(&self, n: usize) -> Option<f64> {
        self.levels
            .binary_search(&n)
            .ok()
            .map(|i| self.eigenvalues[i])
    }
}

/// Domain and resolution of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_max: f64,
    /// Intervals on [0, x_max] for the coarsest of the three grids.
    pub n_points: usize,
    pub method: Method,
    /// Advertised relative accuracy of each eigenvalue.
    pub rel_tol: f64,
    /// Grow x_max past the turning point of the highest level.
    pub auto_extend: bool,
}

/// Minimum forbidden-region action ∫√(V − E) between x_T and x_max.
pub const TAIL_ACTION: f64 = 25.0;

impl GridSpec {
    pub fn new(x_max: f64, n_points: usize, method: Method) -> Result<Self> {
        if !(x_max > 0.0) || !x_max.is_finite() {
            return Err(Error::Config(format!(
                "x_max must be positive, got {x_max}"
            )));
        }
        if n_points < 1000 {
            return Err(Error::Config(format!(
                "need at least 1000 grid points, got {n_points}"
            )));
        }
        Ok(Self {
            x_max,
            n_points,
            method,
            rel_tol: 1e-6,
            auto_extend: true,
        })
    }

    /// Grid sized for levels up to `top`: domain from the WKB turning point
    /// and the tail action, step so that √E·h ≤ 0.05.
    pub fn for_levels<P: Potential + ?Sized>(
        model: &P,
        top: usize,
        method: Method,
    ) -> Result<Self> {
        let e = wkb_eigenvalue(model, top, QuantizationRule::STANDARD)?;
        let x_max = required_extent(model, e * 1.05)?;
        let step = 0.05 / e.abs().max(1.0).sqrt();
        let n = ((x_max / step).ceil() as usize).max(1000);
        Self::new(x_max, n, method)
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Keep x_max as given (e.g. for a box).
    pub fn fixed_domain(mut self) -> Self {
        self.auto_extend = false;
        self
    }

    fn step(&self) -> f64 {
        self.x_max / self.n_points as f64
    }
}

/// Domain needed to hold a state of energy E: at least 1.25·x_T and enough
/// forbidden region for the tail action to reach [`TAIL_ACTION`].
pub fn required_extent<P: Potential + ?Sized>(model: &P, energy: f64) -> Result<f64> {
    let x_t = turning_point(model, energy)?;
    let action = |w: f64| {
        integrate_sqrt_left(
            |x| (model.value(x) - energy).max(0.0).sqrt(),
            x_t,
            x_t + w,
            Quadrature::with_rel_tol(1e-6),
        )
        .map(|r| r.value)
    };
    let mut width = 0.25 * x_t;
    let mut guard = 0;
    while action(width)? < TAIL_ACTION {
        width *= 1.5;
        guard += 1;
        if guard > 100 {
            return Err(Error::GridTooCoarse(format!(
                "no decaying tail above E = {energy}"
            )));
        }
    }
    Ok(x_t + width)
}

/// A discretized operator: interior nodes x_i = i·h, i = 1..n−1.
struct Grid {
    h: f64,
    n: usize,
    diag: Vec<f64>,
    v: Vec<f64>,
}

impl Grid {
    /// Builds the grid, placing the first jump of V on a node where V takes
    /// the mean of its one-sided limits.
    fn build<P: Potential + ?Sized>(model: &P, x_max: f64, n: usize) -> Self {
        let mut h = x_max / n as f64;
        let mut jump = None;
        if let Some(&b) = model.breakpoints().iter().find(|&&b| b > 0.0 && b < x_max) {
            let k = (b / h).round().max(1.0) as usize;
            h = b / k as f64;
            jump = Some(k);
        }
        let n = (x_max / h).ceil() as usize;
        let v: Vec<f64> = (1..n)
            .map(|i| {
                let x = i as f64 * h;
                if Some(i) == jump {
                    0.5 * (model.value(x * (1.0 - 1e-13)) + model.value(x))
                } else {
                    model.value(x)
                }
            })
            .collect();
        let diag = v.iter().map(|&vi| vi + 2.0 / (h * h)).collect();
        Self { h, n, diag, v }
    }

    fn off2(&self) -> f64 {
        self.h.powi(-4)
    }

    /// Number of eigenvalues of the tridiagonal operator below λ.
    fn count_below(&self, lambda: f64) -> usize {
        let off2 = self.off2();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = d - lambda - if i == 0 { 0.0 } else { off2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + lambda.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lower_bound(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The k-th (0-based) eigenvalue by bisection on the Sturm count.
    fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k + 1 > self.diag.len() {
            return Err(Error::GridTooCoarse(format!(
                "level {k} exceeds the {} grid nodes",
                self.diag.len()
            )));
        }
        let mut lo = self.lower_bound() - 1.0;
        let mut step = 1.0f64.max(lo.abs());
        let mut hi = lo + step;
        while self.count_below(hi) < k + 1 {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for eigenvalue λ by inverse iteration, interior nodes only.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let m = self.diag.len();
        let off = -1.0 / (self.h * self.h);
        let mut x = vec![1.0; m];
        let mut c = vec![0.0; m];
        let mut y = vec![0.0; m];
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        for _ in 0..3 {
            // Thomas algorithm on (T − shift)·y = x
            let mut denom = self.diag[0] - shift;
            if denom == 0.0 {
                denom = f64::EPSILON;
            }
            c[0] = off / denom;
            y[0] = x[0] / denom;
            for i in 1..m {
                let mut den = self.diag[i] - shift - off * c[i - 1];
                if den == 0.0 {
                    den = f64::EPSILON;
                }
                c[i] = off / den;
                y[i] = (x[i] - off * y[i - 1]) / den;
            }
            for i in (0..m - 1).rev() {
                y[i] -= c[i] * y[i + 1];
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / norm;
            }
        }
        x
    }

    /// Sign changes of the Numerov solution started from ψ(0) = 0.
    fn numerov_nodes(&self, energy: f64) -> usize {
        let h2 = self.h * self.h / 12.0;
        let w = |i: usize| {
            // V at node i (i = 0 and i = n use the nearest interior value)
            let vi = self.v[i.clamp(1, self.n - 1) - 1];
            1.0 + h2 * (energy - vi)
        };
        let mut prev = 0.0f64;
        let mut cur = 1e-10f64;
        let mut nodes = 0;
        let mut w_prev = 1.0;
        let mut w_cur = w(1);
        for i in 1..self.n {
            let w_next = w(i + 1);
            let next = ((12.0 - 10.0 * w_cur) * cur - w_prev * prev) / w_next;
            if (next < 0.0) != (cur < 0.0) && next != 0.0 {
                nodes += 1;
            }
            prev = cur;
            cur = next;
            if cur.abs() > 1e200 {
                prev *= 1e-200;
                cur *= 1e-200;
            }
            w_prev = w_cur;
            w_cur = w_next;
        }
        nodes
    }

    /// Refines a finite-difference eigenvalue with Numerov node counting.
    fn numerov_eigenvalue(&self, k: usize, guess: f64) -> Result<f64> {
        let mut width = 1e-3 * guess.abs().max(1.0);
        let (mut lo, mut hi) = (guess - width, guess + width);
        let mut guard = 0;
        while self.numerov_nodes(lo) > k || self.numerov_nodes(hi) <= k {
            width *= 2.0;
            lo = guess - width;
            hi = guess + width;
            guard += 1;
            if guard > 60 {
                return Err(Error::NoBracket(format!("Numerov bracket for level {k}")));
            }
        }
        while hi - lo > 1e-12 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.numerov_nodes(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn level(&self, k: usize, method: Method) -> Result<f64> {
        let fd = self.eigenvalue(k)?;
        match method {
            Method::FiniteDifference => Ok(fd),
            Method::NumerovShooting => self.numerov_eigenvalue(k, fd),
        }
    }
}

/// x_max after auto-extension for the highest requested level.
fn resolve_domain<P: Potential + ?Sized>(model: &P, grid: &GridSpec, top: usize) -> GridSpec {
    let mut spec = *grid;
    if !grid.auto_extend {
        return spec;
    }
    let step = grid.step();
    let Ok(e) = wkb_eigenvalue(model, top, QuantizationRule::STANDARD) else {
        return spec;
    };
    if let Ok(needed) = required_extent(model, e) {
        if needed > spec.x_max {
            spec.x_max = needed;
            spec.n_points = (needed / step).ceil() as usize;
        }
    }
    spec
}

fn extrapolate(method: Method, coarse: f64, fine: f64) -> f64 {
    match method {
        Method::FiniteDifference => (4.0 * fine - coarse) / 3.0,
        Method::NumerovShooting => (16.0 * fine - coarse) / 15.0,
    }
}

/// Validated eigenvalues for the listed levels on a three-level grid
/// hierarchy, plus the finest-but-one grid for eigenvectors.
fn solve_on<P: Potential + ?Sized>(
    model: &P,
    spec: &GridSpec,
    levels: &[usize],
) -> Result<(Vec<f64>, Grid)> {
    let grids: Vec<Grid> = (0..3)
        .map(|j| Grid::build(model, spec.x_max, spec.n_points << j))
        .collect();
    let mut out = Vec::with_capacity(levels.len());
    for &k in levels {
        let e: Vec<f64> = grids
            .iter()
            .map(|g| g.level(k, spec.method))
            .collect::<Result<_>>()?;
        let r1 = extrapolate(spec.method, e[0], e[1]);
        let r2 = extrapolate(spec.method, e[1], e[2]);
        let scale = r2.abs().max(1e-300);
        if (r2 - r1).abs() > 10.0 * spec.rel_tol * scale {
            return Err(Error::GridTooCoarse(format!(
                "level {k}: extrapolants {r1} and {r2} differ by more than 10 × {}",
                spec.rel_tol
            )));
        }
        out.push(r2);
    }
    let base = grids.into_iter().next().expect("three grids");
    Ok((out, base))
}

/// Lowest `count` eigenvalues.
pub fn solve_spectrum<P: Potential + ?Sized>(
    model: &P,
    grid: &GridSpec,
    count: usize,
) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::Config("count must be at least 1".into()));
    }
    let levels: Vec<usize> = (0..count).collect();
    solve_levels(model, grid, &levels)
}

/// Eigenvalues for an ascending list of quantum numbers.
pub fn solve_levels<P: Potential + ?Sized>(
    model: &P,
    grid: &GridSpec,
    levels: &[usize],
) -> Result<Spectrum> {
    let Some(&top) = levels.iter().max() else {
        return Err(Error::Config("no levels requested".into()));
    };
    let spec = resolve_domain(model, grid, top);
    let (values, base) = solve_on(model, &spec, levels)?;
    Spectrum::new(
        levels.to_vec(),
        values,
        Provenance::Grid {
            method: spec.method,
            x_max: base.h * base.n as f64,
            step: base.h,
            rel_tol: spec.rel_tol,
            model: model.label(),
        },
    )
}

/// Single eigenvalue E_N.
pub fn solve_level<P: Potential + ?Sized>(model: &P, grid: &GridSpec, n: usize) -> Result<f64> {
    Ok(solve_levels(model, grid, &[n])?.eigenvalues()[0])
}

/// Like [`solve_levels`] with sampled eigenfunctions attached.
pub fn solve_with_states<P: Potential + ?Sized>(
    model: &P,
    grid: &GridSpec,
    levels: &[usize],
) -> Result<Spectrum> {
    let Some(&top) = levels.iter().max() else {
        return Err(Error::Config("no levels requested".into()));
    };
    let spec = resolve_domain(model, grid, top);
    let (values, base) = solve_on(model, &spec, levels)?;
    let states = levels
        .iter()
        .zip(&values)
        .map(|(&k, &e)| sample_state(&base, k, base.eigenvalue(k)?, e))
        .collect::<Result<Vec<_>>>()?;
    let mut s = Spectrum::new(
        levels.to_vec(),
        values,
        Provenance::Grid {
            method: spec.method,
            x_max: base.h * base.n as f64,
            step: base.h,
            rel_tol: spec.rel_tol,
            model: model.label(),
        },
    )?;
    s.wavefunctions = Some(states);
    Ok(s)
}

/// A normalized eigenfunction sampled on the grid, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenfunction {
    pub level: usize,
    pub energy: f64,
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub node_count: usize,
}

impl Eigenfunction {
    pub fn step(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    /// Trapezoid ∫ψ²·f over the sampled range.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        trapezoid(&self.x, |i| self.psi[i] * self.psi[i] * f(self.x[i]))
    }

    /// Trapezoid ∫ψ²·f over [0, upper].
    pub fn expectation_up_to(&self, upper: f64, f: impl Fn(f64) -> f64) -> f64 {
        let end = self.x.partition_point(|&x| x <= upper);
        if end < 2 {
            return 0.0;
        }
        trapezoid(&self.x[..end], |i| self.psi[i] * self.psi[i] * f(self.x[i]))
    }

    /// Trapezoid ⟨self, other⟩ on a shared grid.
    pub fn overlap(&self, other: &Eigenfunction) -> Result<f64> {
        if self.x.len() != other.x.len() {
            return Err(Error::Config(
                "eigenfunctions sampled on different grids".into(),
            ));
        }
        Ok(trapezoid(&self.x, |i| self.psi[i] * other.psi[i]))
    }
}

fn trapezoid(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let h = x[1] - x[0];
    let inner: f64 = (1..n - 1).map(&f).sum();
    h * (inner + 0.5 * (f(0) + f(n - 1)))
}

fn count_nodes(psi: &[f64]) -> usize {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * peak;
    let mut sign = 0.0f64;
    let mut nodes = 0;
    for &v in psi {
        if v.abs() <= floor {
            continue;
        }
        if sign != 0.0 && v.signum() != sign {
            nodes += 1;
        }
        sign = v.signum();
    }
    nodes
}

/// `lambda` is the eigenvalue on this grid, `energy` the value to report.
fn sample_state(grid: &Grid, level: usize, lambda: f64, energy: f64) -> Result<Eigenfunction> {
    let interior = grid.eigenvector(lambda);
    let mut psi = Vec::with_capacity(grid.n + 1);
    psi.push(0.0);
    psi.extend_from_slice(&interior);
    psi.push(0.0);
    let norm = (grid.h * interior.iter().map(|v| v * v).sum::<f64>()).sqrt();
    // first lobe positive
    let first = interior
        .iter()
        .find(|v| v.abs() > 1e-8)
        .copied()
        .unwrap_or(1.0);
    let sign = first.signum() / norm;
    psi.iter_mut().for_each(|v| *v *= sign);
    let x = (0..=grid.n).map(|i| i as f64 * grid.h).collect();
    let node_count = count_nodes(&psi);
    Ok(Eigenfunction {
        level,
        energy,
        x,
        psi,
        node_count,
    })
}

/// One grid shared by many states, e.g. for matrix elements of a fixed
/// perturbation. Eigenvalues here are not extrapolated.
pub struct StateGrid {
    grid: Grid,
}

impl StateGrid {
    /// Grid able to hold levels up to `top` (auto-extended per `spec`).
    pub fn new<P: Potential + ?Sized>(model: &P, spec: &GridSpec, top: usize) -> Result<Self> {
        let spec = resolve_domain(model, spec, top);
        let grid = Grid::build(model, spec.x_max, spec.n_points);
        if top + 1 > grid.diag.len() {
            return Err(Error::MissingState {
                requested: top,
                available: grid.diag.len(),
            });
        }
        Ok(Self { grid })
    }

    /// Node positions 0, h, …, x_max.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.grid.n).map(|i| i as f64 * self.grid.h).collect()
    }

    pub fn step(&self) -> f64 {
        self.grid.h
    }

    pub fn x_max(&self) -> f64 {
        self.grid.h * self.grid.n as f64
    }

    pub fn state(&self, level: usize) -> Result<Eigenfunction> {
        if level + 1 > self.grid.diag.len() {
            return Err(Error::MissingState {
                requested: level,
                available: self.grid.diag.len(),
            });
        }
        let e = self.grid.eigenvalue(level)?;
        sample_state(&self.grid, level, e, e)
    }
}

/// Normalized eigenfunction of level N on the (auto-extended) base grid.
pub fn eigenfunction<P: Potential + ?Sized>(
    model: &P,
    grid: &GridSpec,
    n: usize,
) -> Result<Eigenfunction> {
    StateGrid::new(model, grid, n)?.state(n)
}
