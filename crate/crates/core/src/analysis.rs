//! Staircases, dispersion-law fits, spectrum/zero comparisons, spacing
//! statistics, and the tabular reports written by the command line.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::potential::{Potential, PotentialModel};
use crate::quantizer::{phase_integral, wkb_spectrum, QuantizationRule};
use crate::schrodinger::{Provenance, Spectrum};
use crate::zeros::{average_zero_count, empirical_zero_count, ZeroSet};

/// Samples of N(E), E ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingCurve {
    pub samples: Vec<(f64, f64)>,
    pub model: String,
    pub rule: String,
}

impl CountingCurve {
    /// Step-function value: N of the last sample at or below E.
    pub fn count_at(&self, e: f64) -> f64 {
        let idx = self.samples.partition_point(|s| s.0 <= e);
        if idx == 0 {
            0.0
        } else {
            self.samples[idx - 1].1
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn counts(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    /// Samples with E in [lo, hi].
    pub fn window(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .copied()
            .filter(|s| s.0 >= lo && s.0 <= hi)
            .collect()
    }
}

fn provenance_tags(p: &Provenance) -> (String, String) {
    match p {
        Provenance::Wkb { rule, model } => (model.clone(), rule.name()),
        Provenance::Grid { method, model, .. } => (model.clone(), method.name().to_string()),
        Provenance::External(name) => (name.clone(), "none".into()),
    }
}

/// N(E_k) = level_k + 1 at each eigenvalue (inclusive convention). For a
/// spectrum holding every level this is the exact staircase.
pub fn staircase(spectrum: &Spectrum) -> Result<CountingCurve> {
    if spectrum.is_empty() {
        return Err(Error::Degenerate("staircase of an empty spectrum".into()));
    }
    let samples = spectrum
        .levels()
        .iter()
        .zip(spectrum.eigenvalues())
        .map(|(&n, &e)| (e, (n + 1) as f64))
        .collect();
    let (model, rule) = provenance_tags(spectrum.provenance());
    Ok(CountingCurve {
        samples,
        model,
        rule,
    })
}

/// Dispersion laws N(E) of the potential sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DispersionLaw {
    /// N = k·E^p
    PowerLaw,
    /// N = (E/2π)(ln(E/2π) − 1) + c
    LinearLogLaw,
    /// N = k·e^(rE)
    ExpLaw,
    /// N = s·ln E + c
    LogLaw,
}

impl DispersionLaw {
    pub fn name(self) -> &'static str {
        match self {
            DispersionLaw::PowerLaw => "power",
            DispersionLaw::LinearLogLaw => "linear-log",
            DispersionLaw::ExpLaw => "exp",
            DispersionLaw::LogLaw => "log",
        }
    }
}

/// A fitted law with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FittedLaw {
    PowerLaw { exponent: f64, prefactor: f64 },
    LinearLogLaw { offset: f64 },
    ExpLaw { rate: f64, prefactor: f64 },
    LogLaw { slope: f64, intercept: f64 },
}

impl FittedLaw {
    pub fn predict(&self, e: f64) -> f64 {
        match *self {
            FittedLaw::PowerLaw {
                exponent,
                prefactor,
            } => prefactor * e.powf(exponent),
            FittedLaw::LinearLogLaw { offset } => average_zero_count(e) + offset,
            FittedLaw::ExpLaw { rate, prefactor } => prefactor * (rate * e).exp(),
            FittedLaw::LogLaw { slope, intercept } => slope * e.ln() + intercept,
        }
    }

    /// Parameter names and values, in a fixed order.
    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FittedLaw::PowerLaw {
                exponent,
                prefactor,
            } => vec![("exponent", exponent), ("prefactor", prefactor)],
            FittedLaw::LinearLogLaw { offset } => vec![("offset", offset)],
            FittedLaw::ExpLaw { rate, prefactor } => vec![("rate", rate), ("prefactor", prefactor)],
            FittedLaw::LogLaw { slope, intercept } => {
                vec![("slope", slope), ("intercept", intercept)]
            }
        }
    }

    pub fn law(&self) -> DispersionLaw {
        match self {
            FittedLaw::PowerLaw { .. } => DispersionLaw::PowerLaw,
            FittedLaw::LinearLogLaw { .. } => DispersionLaw::LinearLogLaw,
            FittedLaw::ExpLaw { .. } => DispersionLaw::ExpLaw,
            FittedLaw::LogLaw { .. } => DispersionLaw::LogLaw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionFit {
    pub law: FittedLaw,
    /// Root mean square of (N_fit − N)/N over the window.
    pub rms_residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Minimum number of samples for any fit.
pub const MIN_FIT_SAMPLES: usize = 20;

/// Ordinary least squares y = a + b·x; returns (a, b).
pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return Err(Error::UnderDetermined {
            samples: n,
            needed: 2,
        });
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "regression abscissae are all equal".into(),
        ));
    }
    let b = sxy / sxx;
    Ok((my - b * mx, b))
}

/// Least-squares fit of `law` to the samples with E in `window` (all samples
/// when `None`). Power and exponential laws are fitted in log N, the
/// linear-log offset in relative N.
pub fn fit_dispersion(
    curve: &CountingCurve,
    law: DispersionLaw,
    window: Option<(f64, f64)>,
) -> Result<DispersionFit> {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let pts: Vec<(f64, f64)> = curve
        .window(lo, hi)
        .into_iter()
        .filter(|s| s.1 > 0.0 && s.0.is_finite())
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::UnderDetermined {
            samples: pts.len(),
            needed: MIN_FIT_SAMPLES,
        });
    }
    let e: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let n: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let ln_n: Vec<f64> = n.iter().map(|v| v.ln()).collect();
    let fitted = match law {
        DispersionLaw::PowerLaw => {
            if e.iter().any(|&v| v <= 0.0) {
                return Err(Error::Degenerate(
                    "power law needs positive energies".into(),
                ));
            }
            let ln_e: Vec<f64> = e.iter().map(|v| v.ln()).collect();
            let (a, b) = linear_regression(&ln_e, &ln_n)?;
            FittedLaw::PowerLaw {
                exponent: b,
                prefactor: a.exp(),
            }
        }
        DispersionLaw::LinearLogLaw => {
            // minimizes the relative residual that is reported
            let w: f64 = n.iter().map(|v| v.powi(-2)).sum();
            let offset = e
                .iter()
                .zip(&n)
                .map(|(&ei, &ni)| (ni - average_zero_count(ei)) / (ni * ni))
                .sum::<f64>()
                / w;
            FittedLaw::LinearLogLaw { offset }
        }
        DispersionLaw::ExpLaw => {
            let (a, b) = linear_regression(&e, &ln_n)?;
            FittedLaw::ExpLaw {
                rate: b,
                prefactor: a.exp(),
            }
        }
        DispersionLaw::LogLaw => {
            if e.iter().any(|&v| v <= 0.0) {
                return Err(Error::Degenerate("log law needs positive energies".into()));
            }
            let ln_e: Vec<f64> = e.iter().map(|v| v.ln()).collect();
            let (a, b) = linear_regression(&ln_e, &n)?;
            FittedLaw::LogLaw {
                slope: b,
                intercept: a,
            }
        }
    };
    let rms = (e
        .iter()
        .zip(&n)
        .map(|(&ei, &ni)| ((fitted.predict(ei) - ni) / ni).powi(2))
        .sum::<f64>()
        / e.len() as f64)
        .sqrt();
    Ok(DispersionFit {
        law: fitted,
        rms_residual: rms,
        window: (e[0], e[e.len() - 1]),
        samples: e.len(),
    })
}

/// Local level density dN/dE from least-squares slopes over `windows`
/// consecutive chunks of the curve, as (mean E, slope) pairs.
pub fn local_density(curve: &CountingCurve, windows: usize) -> Result<Vec<(f64, f64)>> {
    let s = &curve.samples;
    if windows == 0 || s.len() < 2 * windows {
        return Err(Error::UnderDetermined {
            samples: s.len(),
            needed: 2 * windows.max(1),
        });
    }
    (0..windows)
        .map(|w| {
            let chunk = &s[w * s.len() / windows..(w + 1) * s.len() / windows];
            let e: Vec<f64> = chunk.iter().map(|p| p.0).collect();
            let n: Vec<f64> = chunk.iter().map(|p| p.1).collect();
            let (_, slope) = linear_regression(&e, &n)?;
            Ok((e.iter().sum::<f64>() / e.len() as f64, slope))
        })
        .collect()
}

/// N_spectrum(E) − N_zeros(E) statistics over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountComparison {
    pub window: (f64, f64),
    /// Constant minimizing the squared residual.
    pub shift: f64,
    pub mean_abs_residual: f64,
    pub max_abs_residual: f64,
    /// Mean of N_zeros over the window, for relative statements.
    pub mean_count: f64,
    pub samples: usize,
}

impl CountComparison {
    pub fn relative_mean_residual(&self) -> f64 {
        self.mean_abs_residual / self.mean_count.max(1.0)
    }
}

/// Compares staircases on every jump point of either sequence inside the
/// window, after removing the best constant shift.
pub fn compare_counts(
    spectrum: &Spectrum,
    zs: &ZeroSet,
    window: (f64, f64),
) -> Result<CountComparison> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::EmptyWindow(format!("[{lo}, {hi}] is empty")));
    }
    let curve = staircase(spectrum)?;
    let spec_range = (curve.samples[0].0, curve.samples[curve.samples.len() - 1].0);
    let zero_range = match (zs.zeros().first(), zs.zeros().last()) {
        (Some(a), Some(b)) => (a.alpha(), b.alpha()),
        _ => return Err(Error::EmptyWindow("zero set is empty".into())),
    };
    let lo_eff = lo.max(spec_range.0).max(zero_range.0);
    let hi_eff = hi.min(spec_range.1).min(zero_range.1);
    if !(hi_eff > lo_eff) {
        return Err(Error::EmptyWindow(format!(
            "window [{lo}, {hi}] misses the overlap of spectrum [{}, {}] and zeros [{}, {}]",
            spec_range.0, spec_range.1, zero_range.0, zero_range.1
        )));
    }
    let mut points: Vec<f64> = curve
        .energies()
        .into_iter()
        .chain(zs.alphas())
        .filter(|&e| e >= lo_eff && e <= hi_eff)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    if points.is_empty() {
        return Err(Error::EmptyWindow(format!(
            "no jump points in [{lo_eff}, {hi_eff}]"
        )));
    }
    let zero_counts: Vec<f64> = points
        .iter()
        .map(|&e| empirical_zero_count(zs, e) as f64)
        .collect();
    let diffs: Vec<f64> = points
        .iter()
        .zip(&zero_counts)
        .map(|(&e, &z)| curve.count_at(e) - z)
        .collect();
    let shift = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let residuals: Vec<f64> = diffs.iter().map(|d| (d - shift).abs()).collect();
    Ok(CountComparison {
        window: (lo_eff, hi_eff),
        shift,
        mean_abs_residual: residuals.iter().sum::<f64>() / residuals.len() as f64,
        max_abs_residual: residuals.iter().copied().fold(0.0, f64::max),
        mean_count: zero_counts.iter().sum::<f64>() / zero_counts.len() as f64,
        samples: points.len(),
    })
}

/// Normalized nearest-neighbour spacings on [0, `range`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// counts / (total · bin width)
    pub density: Vec<f64>,
    pub spacings: usize,
}

/// Upper edge of the spacing histogram in units of the mean spacing.
pub const SPACING_RANGE: f64 = 4.0;

/// Unfolds by the smooth counting function `unfold`, divides the gaps by
/// their mean and bins them on [0, 4); larger gaps land in the last bin.
pub fn spacing_histogram(
    values: &[f64],
    bins: usize,
    unfold: impl Fn(f64) -> f64,
) -> Result<SpacingHistogram> {
    if bins == 0 {
        return Err(Error::Config("need at least one bin".into()));
    }
    if values.len() < 2 {
        return Err(Error::Degenerate("need at least two values".into()));
    }
    let u: Vec<f64> = values.iter().map(|&v| unfold(v)).collect();
    let gaps: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    if !(mean > 0.0) || gaps.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return Err(Error::Degenerate(
            "values must be ascending with positive mean gap".into(),
        ));
    }
    let width = SPACING_RANGE / bins as f64;
    let mut counts = vec![0usize; bins];
    for g in &gaps {
        let idx = ((g / mean) / width).floor() as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let total = gaps.len() as f64;
    Ok(SpacingHistogram {
        edges: (0..=bins).map(|k| k as f64 * width).collect(),
        density: counts.iter().map(|&c| c as f64 / (total * width)).collect(),
        counts,
        spacings: gaps.len(),
    })
}

/// Mean-density unfolding for zero heights: the average counting law.
pub fn unfold_zeros(t: f64) -> f64 {
    average_zero_count(t)
}

/// Number of strict sign changes, ignoring exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| v.signum())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Fraction of index-aligned pairs that share a sign.
pub fn sign_concordance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    if n == 0 {
        return 0.0;
    }
    let same = a
        .iter()
        .zip(b)
        .filter(|(x, y)| x.signum() == y.signum())
        .count();
    same as f64 / n as f64
}

/// Log–log slope of the RMS envelope of an oscillating sequence: the
/// samples are cut into `bins` consecutive groups, each reduced to
/// (mean x, RMS y), and ln RMS is regressed on ln x.
pub fn envelope_decay_exponent(x: &[f64], y: &[f64], bins: usize) -> Result<f64> {
    if bins < 3 || x.len() != y.len() || x.len() < 2 * bins {
        return Err(Error::UnderDetermined {
            samples: x.len(),
            needed: 2 * bins.max(3),
        });
    }
    let n = x.len();
    let mut lx = Vec::with_capacity(bins);
    let mut ly = Vec::with_capacity(bins);
    for b in 0..bins {
        let (s, e) = (b * n / bins, (b + 1) * n / bins);
        let m = (e - s) as f64;
        let mx = x[s..e].iter().sum::<f64>() / m;
        let rms = (y[s..e].iter().map(|v| v * v).sum::<f64>() / m).sqrt();
        if !(mx > 0.0 && rms > 0.0) {
            return Err(Error::Degenerate(
                "envelope needs positive abscissae and nonzero data".into(),
            ));
        }
        lx.push(mx.ln());
        ly.push(rms.ln());
    }
    Ok(linear_regression(&lx, &ly)?.1)
}

/// ln(E/2π)/2π, the local density implied by the average counting law.
pub fn average_zero_density(t: f64) -> f64 {
    (t / (2.0 * PI)).ln() / (2.0 * PI)
}

/// A cell of a report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rectangular report with ordered metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Number formatting of report files: 12 significant digits, shortest form.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{v:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Config(format!(
                "row has {} cells but the table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Column values as numbers (text cells become NaN).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[idx] {
                    Cell::Int(i) => *i as f64,
                    Cell::Num(v) => *v,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    /// `# key: value` lines, a header row, then one record per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Num(v) => format_number(*v),
                    Cell::Text(t) => csv_field(t),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{"metadata": {...}, "columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            Cell::Int(i) => json!(i),
                            Cell::Num(v) if v.is_finite() => json!(v),
                            Cell::Num(v) => json!(format_number(*v)),
                            Cell::Text(t) => json!(t),
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "metadata": meta, "columns": self.columns, "rows": rows })
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    pub fn write_json(&self, mut w: impl Write) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).map_err(std::io::Error::other)?;
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")
    }
}

/// Data lines of a CSV report, metadata comments removed.
pub fn csv_data_section(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

impl CountingCurve {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["E", "N"]);
        t.meta("model", &self.model).meta("rule", &self.rule);
        for &(e, n) in &self.samples {
            t.rows.push(vec![e.into(), n.into()]);
        }
        t
    }
}

impl DispersionFit {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["law", "parameter", "value"]);
        t.meta(
            "window",
            format!(
                "{}..{}",
                format_number(self.window.0),
                format_number(self.window.1)
            ),
        )
        .meta("samples", self.samples)
        .meta("rms_residual", format_number(self.rms_residual));
        for (name, value) in self.law.parameters() {
            t.rows.push(vec![
                self.law.law().name().into(),
                name.into(),
                value.into(),
            ]);
        }
        t
    }
}

impl CountComparison {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["statistic", "value"]);
        for (k, v) in [
            ("window_lo", self.window.0),
            ("window_hi", self.window.1),
            ("shift", self.shift),
            ("mean_abs_residual", self.mean_abs_residual),
            ("max_abs_residual", self.max_abs_residual),
            ("mean_count", self.mean_count),
            ("relative_mean_residual", self.relative_mean_residual()),
            ("samples", self.samples as f64),
        ] {
            t.rows.push(vec![k.into(), v.into()]);
        }
        t
    }
}

impl SpacingHistogram {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["lo", "hi", "count", "density"]);
        t.meta("spacings", self.spacings);
        for (i, &c) in self.counts.iter().enumerate() {
            t.rows.push(vec![
                self.edges[i].into(),
                self.edges[i + 1].into(),
                c.into(),
                self.density[i].into(),
            ]);
        }
        t
    }
}

/// One potential of the dispersion sweep and the law it is fitted with.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepVariant {
    pub name: &'static str,
    pub model: PotentialModel,
    pub law: DispersionLaw,
}

/// Six potentials from ln x up to eˣ, in decreasing order of level growth
/// at fixed energy as the ladder states it.
pub fn sweep_variants() -> Vec<SweepVariant> {
    vec![
        SweepVariant {
            name: "log",
            model: PotentialModel::Log,
            law: DispersionLaw::ExpLaw,
        },
        SweepVariant {
            name: "linear",
            model: PotentialModel::Linear,
            law: DispersionLaw::PowerLaw,
        },
        SweepVariant {
            name: "quadratic",
            model: PotentialModel::Quadratic,
            law: DispersionLaw::PowerLaw,
        },
        SweepVariant {
            name: "power-near-harmonic",
            model: PotentialModel::PowerNearHarmonic { epsilon: 0.1 },
            law: DispersionLaw::PowerLaw,
        },
        SweepVariant {
            name: "log-corrected",
            model: PotentialModel::LogCorrected { b: 1.0 },
            law: DispersionLaw::PowerLaw,
        },
        SweepVariant {
            name: "exponential",
            model: PotentialModel::Exponential,
            law: DispersionLaw::LogLaw,
        },
    ]
}

/// Smooth N(E) = Φ(E)/(μπ) − ν.
pub fn continuous_count<P: Potential + ?Sized>(
    model: &P,
    energy: f64,
    rule: QuantizationRule,
) -> Result<f64> {
    Ok(rule.level_index(phase_integral(model, energy)?.phi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub fit: DispersionFit,
    /// Smooth N at the common reference energy.
    pub count_at_reference: f64,
}

/// Fits every variant on the WKB levels `levels`, one result per variant.
pub fn run_sweep(
    variants: &[SweepVariant],
    levels: &[usize],
    rule: QuantizationRule,
    reference_energy: f64,
) -> Vec<Result<SweepRow>> {
    variants
        .iter()
        .map(|v| {
            let spectrum = wkb_spectrum(&v.model, levels, rule)?;
            let fit = fit_dispersion(&staircase(&spectrum)?, v.law, None)?;
            let count_at_reference = continuous_count(&v.model, reference_energy, rule)?;
            Ok(SweepRow {
                fit,
                count_at_reference,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(values: Vec<f64>) -> Spectrum {
        Spectrum::from_values(values, Provenance::External("test".into())).unwrap()
    }

    #[test]
    fn staircase_steps() {
        let c = staircase(&ext(vec![3.0, 7.0, 11.0])).unwrap();
        assert_eq!(c.count_at(5.0), 1.0);
        assert_eq!(c.count_at(7.0), 2.0);
        assert_eq!(c.count_at(1.0), 0.0);
        for (k, &(e, _)) in c.samples.iter().enumerate() {
            assert_eq!(c.count_at(e), (k + 1) as f64);
        }
        assert!(staircase(&ext(vec![])).is_err());
    }

    #[test]
    fn quadratic_staircase_slope() {
        let c = staircase(&ext((0..200).map(|n| 4.0 * n as f64 + 3.0).collect())).unwrap();
        let d = local_density(&c, 4).unwrap();
        assert!(d.iter().all(|(_, s)| (s - 0.25).abs() < 1e-9));
    }

    #[test]
    fn fits_recover_synthetic_laws() {
        let make = |f: &dyn Fn(f64) -> f64, es: Vec<f64>| CountingCurve {
            samples: es.into_iter().map(|e| (e, f(e))).collect(),
            model: "synthetic".into(),
            rule: "none".into(),
        };
        let es: Vec<f64> = (1..=50).map(|k| 10.0 * k as f64).collect();
        let p = fit_dispersion(
            &make(&|e| 0.3 * e.powf(1.5), es.clone()),
            DispersionLaw::PowerLaw,
            None,
        )
        .unwrap();
        let FittedLaw::PowerLaw {
            exponent,
            prefactor,
        } = p.law
        else {
            panic!()
        };
        assert!((exponent - 1.5).abs() < 0.015 && (prefactor - 0.3).abs() < 0.003);
        let l = fit_dispersion(
            &make(&|e| average_zero_count(e) + 4.0, es.clone()),
            DispersionLaw::LinearLogLaw,
            None,
        )
        .unwrap();
        assert!(matches!(l.law, FittedLaw::LinearLogLaw { offset } if (offset - 4.0).abs() < 0.04));
        assert!(l.rms_residual < 1e-12);
        let small: Vec<f64> = (1..=30).map(|k| 0.2 * k as f64).collect();
        let x = fit_dispersion(
            &make(&|e| 2.0 * (1.7 * e).exp(), small),
            DispersionLaw::ExpLaw,
            None,
        )
        .unwrap();
        assert!(matches!(x.law, FittedLaw::ExpLaw { rate, .. } if (rate - 1.7).abs() < 0.017));
        let g = fit_dispersion(
            &make(&|e| 5.0 * e.ln() + 2.0, es.clone()),
            DispersionLaw::LogLaw,
            None,
        )
        .unwrap();
        assert!(matches!(g.law, FittedLaw::LogLaw { slope, .. } if (slope - 5.0).abs() < 0.05));
        assert!(matches!(
            fit_dispersion(
                &make(&|e| e, es),
                DispersionLaw::PowerLaw,
                Some((0.0, 100.0))
            ),
            Err(Error::UnderDetermined { samples: 10, .. })
        ));
    }

    #[test]
    fn identical_counts_have_no_residual() {
        let zs = ZeroSet::critical_line(&[14.1, 21.0, 25.0, 30.4, 32.9]).unwrap();
        let s = ext(zs.alphas());
        let r = compare_counts(&s, &zs, (10.0, 40.0)).unwrap();
        assert_eq!(r.shift, 0.0);
        assert_eq!(r.max_abs_residual, 0.0);
        assert!(compare_counts(&s, &zs, (100.0, 200.0)).is_err());
        assert!(compare_counts(&s, &zs, (30.0, 20.0)).is_err());
    }

    #[test]
    fn spacing_edge_cases() {
        let even: Vec<f64> = (0..50).map(|k| k as f64 * 0.5).collect();
        let h = spacing_histogram(&even, 8, |v| v).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.counts.iter().sum::<usize>(), 49);
        assert!(spacing_histogram(&even, 0, |v| v).is_err());
        assert!(spacing_histogram(&[1.0], 4, |v| v).is_err());
    }

    #[test]
    fn signs_and_envelopes() {
        assert_eq!(sign_changes(&[1.0, -2.0, 0.0, -1.0, 3.0]), 2);
        assert_eq!(
            sign_concordance(&[1.0, -1.0, 2.0, 3.0], &[2.0, -5.0, -1.0, 1.0]),
            0.75
        );
        let x: Vec<f64> = (400..=1200).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v.powf(-0.5) * (0.7 * v).sin()).collect();
        let p = envelope_decay_exponent(&x, &y, 8).unwrap();
        assert!((p + 0.5).abs() < 0.05, "{p}");
    }

    #[test]
    fn sweep_exponents_and_errors() {
        let levels: Vec<usize> = (100..=400).step_by(10).collect();
        let rows = run_sweep(
            &sweep_variants()[1..3],
            &levels,
            QuantizationRule::STANDARD,
            100.0,
        );
        let exps: Vec<f64> = rows
            .iter()
            .map(|r| match r.as_ref().unwrap().fit.law {
                FittedLaw::PowerLaw { exponent, .. } => exponent,
                _ => panic!(),
            })
            .collect();
        assert!(
            (exps[0] - 1.5).abs() < 0.05 && (exps[1] - 1.0).abs() < 0.01,
            "{exps:?}"
        );
        let few = run_sweep(
            &sweep_variants(),
            &[100, 101, 102],
            QuantizationRule::STANDARD,
            100.0,
        );
        assert_eq!(few.len(), 6);
        assert!(few
            .iter()
            .all(|r| matches!(r, Err(Error::UnderDetermined { samples: 3, .. }))));
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(9.0), "9");
        assert_eq!(format_number(3.015_713_551_234_567_8), "3.01571355123");
        assert_eq!(format_number(-0.25), "-0.25");
        assert_eq!(format_number(1.0e-7), "1e-7");
        assert_eq!(format_number(123_456_789_012_345.0), "1.23456789012e14");
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn table_output() {
        let mut t = Table::new(["N", "E"]);
        t.meta("model", "quadratic");
        t.push(vec![0usize.into(), 3.0.into()]).unwrap();
        assert!(t.push(vec![1usize.into()]).is_err());
        let csv = t.to_csv();
        assert_eq!(csv, "# model: quadratic\nN,E\n0,3\n");
        assert_eq!(csv_data_section(&csv), "N,E\n0,3\n");
        let j = t.to_json();
        assert_eq!(j["rows"][0][1], json!(3.0));
        assert_eq!(j["metadata"]["model"], json!("quadratic"));
    }
}
