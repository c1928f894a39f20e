//! Command-line front end: argument parsing, run configuration and the six
//! report commands. The binary only forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{compare_counts, format_number, run_sweep, sweep_variants, Cell, Table};
use crate::error::{Error, Result};
use crate::perturbation::{
    perturbed_spectrum, ClosedForm, ClosedFormParams, PerturbationConfig, StateSource,
};
use crate::potential::{Fluctuation, Potential, PotentialModel, SMode};
use crate::quantizer::{phase_integral, wkb_spectrum, QuantizationRule};
use crate::schrodinger::{solve_levels, GridSpec, Method};
use crate::zeros::{load_zeros, ZeroSet};

/// Environment variable naming the default zero table.
pub const ZEROS_ENV: &str = "RIEMANN_LAB_ZEROS";
pub const DEFAULT_ZERO_LIMIT: usize = 2000;
pub const DEFAULT_REL_TOL: f64 = 1e-6;
pub const DEFAULT_PERTURB_LEVELS: &str = "50:200";
pub const DEFAULT_SWEEP_LEVELS: &str = "100:2000:10";
pub const DEFAULT_SWEEP_REFERENCE: f64 = 100.0;
pub const DEFAULT_COMPARE_WINDOW: &str = "100:1000";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Log,
    Linear,
    Quadratic,
    Exponential,
    PowerNearHarmonic,
    LogCorrected,
    RiemannPrincipal,
    RiemannFull,
    RiemannIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Paper,
    Standard,
}

impl RuleArg {
    pub fn rule(self) -> QuantizationRule {
        match self {
            RuleArg::Paper => QuantizationRule::PAPER,
            RuleArg::Standard => QuantizationRule::STANDARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SModeArg {
    TermSum,
    BlockIntegral,
    RiemannClosedForm,
}

impl From<SModeArg> for SMode {
    fn from(m: SModeArg) -> Self {
        match m {
            SModeArg::TermSum => SMode::TermSum,
            SModeArg::BlockIntegral => SMode::BlockIntegral,
            SModeArg::RiemannClosedForm => SMode::RiemannClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fd,
    Numerov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Wkb,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClosedFormArg {
    LinearApplication,
    RhClosedForm,
    IntegralForm,
}

/// `a:b:step` sample grid, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for XRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got {s:?}"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {t:?}"))
        };
        let r = XRange {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(r.step > 0.0) || !(r.stop >= r.start) || !r.start.is_finite() || !r.stop.is_finite() {
            return Err(format!("need step > 0 and stop ≥ start, got {s:?}"));
        }
        Ok(r)
    }
}

impl XRange {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// `a:b` or `a:b:stride` quantum numbers, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
    pub stride: usize,
}

impl FromStr for LevelRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!(
                "expected first:last or first:last:stride, got {s:?}"
            ));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("not a level: {t:?}"))
        };
        let r = LevelRange {
            first: num(parts[0])?,
            last: num(parts[1])?,
            stride: if parts.len() == 3 { num(parts[2])? } else { 1 },
        };
        if r.stride == 0 {
            return Err("stride must be positive".into());
        }
        Ok(r)
    }
}

impl LevelRange {
    pub fn levels(&self) -> Vec<usize> {
        if self.last < self.first {
            return Vec::new();
        }
        (self.first..=self.last).step_by(self.stride).collect()
    }
}

/// `lo:hi` energy window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window(pub f64, pub f64);

impl FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {t:?}"))
        };
        Ok(Window(num(a)?, num(b)?))
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "riemann-lab",
    version,
    about = "Spectra of the Riemann-potential oscillator"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Potential model.
    #[arg(long, value_enum, global = true, default_value = "riemann-principal")]
    pub model: ModelKind,
    /// ε of power-near-harmonic.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Log exponent b of log-corrected (1 or 2).
    #[arg(long = "log-power", global = true, default_value_t = 1.0)]
    pub log_power: f64,
    /// Fluctuation mode of riemann-full and perturb.
    #[arg(long = "s-mode", value_enum, global = true, default_value = "term-sum")]
    pub s_mode: SModeArg,
    /// Quantization rule.
    #[arg(long, value_enum, global = true, default_value = "standard")]
    pub rule: RuleArg,
    /// Zero table; defaults to $RIEMANN_LAB_ZEROS.
    #[arg(long, global = true)]
    pub zeros: Option<PathBuf>,
    /// Number of zeros read from the table.
    #[arg(long = "zero-limit", global = true, default_value_t = DEFAULT_ZERO_LIMIT)]
    pub zero_limit: usize,
    /// Relative tolerance of grid eigenvalues.
    #[arg(long = "rel-tol", global = true, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate V(x).
    Potential {
        #[arg(long, default_value = "0:10:0.5")]
        x: XRange,
    },
    /// WKB levels with turning points and phases.
    Wkb {
        #[arg(long, default_value = "0:9")]
        levels: LevelRange,
    },
    /// Grid eigenvalues.
    Solve {
        #[arg(long, default_value = "0:4")]
        levels: LevelRange,
        #[arg(long, value_enum, default_value = "fd")]
        method: MethodArg,
        /// Domain end; sized from the top level when absent.
        #[arg(long = "x-max")]
        x_max: Option<f64>,
        /// Intervals of the coarsest grid (with --x-max).
        #[arg(long, default_value_t = 4000)]
        points: usize,
    },
    /// First-order corrections from the zeros.
    Perturb {
        #[arg(long, default_value = DEFAULT_PERTURB_LEVELS)]
        levels: LevelRange,
        /// Factor applied to the display column only.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, value_enum, default_value = "exact")]
        source: SourceArg,
        #[arg(long = "closed-form", value_enum, default_value = "linear-application")]
        closed_form: ClosedFormArg,
        /// δ of the closed forms.
        #[arg(long, default_value_t = 1.5)]
        delta: f64,
    },
    /// Staircase of WKB levels against the zero staircase.
    Compare {
        #[arg(long, default_value = DEFAULT_COMPARE_WINDOW)]
        window: Window,
    },
    /// Dispersion-law fits over six potentials.
    Sweep {
        #[arg(long, default_value = DEFAULT_SWEEP_LEVELS)]
        levels: LevelRange,
        /// Energy at which the smooth counts are compared.
        #[arg(long = "reference-energy", default_value_t = DEFAULT_SWEEP_REFERENCE)]
        reference_energy: f64,
    },
}

/// Everything a run needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub epsilon: f64,
    pub log_power: f64,
    pub s_mode: SMode,
    pub rule: QuantizationRule,
    pub zeros: Option<PathBuf>,
    pub zero_limit: usize,
    pub rel_tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub command: Command,
}

impl RunConfig {
    /// `env_zeros` stands in for $RIEMANN_LAB_ZEROS.
    pub fn from_cli(cli: Cli, env_zeros: Option<PathBuf>) -> Result<Self> {
        let c = cli.common;
        if !(c.rel_tol > 0.0) {
            return Err(Error::Config(format!(
                "--rel-tol must be positive, got {}",
                c.rel_tol
            )));
        }
        if let Some(p) = c.zeros.as_ref() {
            if !p.exists() {
                return Err(Error::Config(format!(
                    "zero table {} does not exist",
                    p.display()
                )));
            }
        }
        Ok(Self {
            model: c.model,
            epsilon: c.epsilon,
            log_power: c.log_power,
            s_mode: c.s_mode.into(),
            rule: c.rule.rule(),
            zeros: c.zeros.or(env_zeros),
            zero_limit: c.zero_limit,
            rel_tol: c.rel_tol,
            format: c.format,
            output: c.output,
            command: cli.command,
        })
    }

    pub fn load_zero_set(&self) -> Result<ZeroSet> {
        let path = self.zeros.as_ref().ok_or_else(|| {
            Error::Config(format!(
                "this run needs a zero table: pass --zeros or set {ZEROS_ENV}"
            ))
        })?;
        load_zeros(path, self.zero_limit)
    }

    pub fn build_model(&self) -> Result<PotentialModel> {
        Ok(match self.model {
            ModelKind::Log => PotentialModel::Log,
            ModelKind::Linear => PotentialModel::Linear,
            ModelKind::Quadratic => PotentialModel::Quadratic,
            ModelKind::Exponential => PotentialModel::Exponential,
            ModelKind::PowerNearHarmonic => PotentialModel::power_near_harmonic(self.epsilon)?,
            ModelKind::LogCorrected => PotentialModel::log_corrected(self.log_power)?,
            ModelKind::RiemannPrincipal => PotentialModel::RiemannPrincipal,
            ModelKind::RiemannFull => {
                PotentialModel::riemann_full(Arc::new(self.load_zero_set()?), self.s_mode)?
            }
            ModelKind::RiemannIntegral => {
                PotentialModel::RiemannIntegralForm(Arc::new(self.load_zero_set()?))
            }
        })
    }

    fn base_table<S: Into<String>>(
        &self,
        command: &str,
        model: &str,
        columns: impl IntoIterator<Item = S>,
    ) -> Table {
        let mut t = Table::new(columns);
        t.meta("tool", format!("riemann-lab {VERSION}"))
            .meta("command", command)
            .meta("model", model)
            .meta("rule", self.rule.name())
            .meta("rel_tol", format_number(self.rel_tol));
        t
    }
}

/// A finished table; `complete` is false when some rows failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub complete: bool,
}

fn finished(table: Table) -> Result<Outcome> {
    Ok(Outcome {
        table,
        complete: true,
    })
}

fn require_levels(range: &LevelRange) -> Result<Vec<usize>> {
    let levels = range.levels();
    if levels.is_empty() {
        return Err(Error::Config(format!(
            "level range {}:{} is empty",
            range.first, range.last
        )));
    }
    Ok(levels)
}

pub fn cmd_potential(cfg: &RunConfig, x: &XRange) -> Result<Outcome> {
    let model = cfg.build_model()?;
    let mut t = cfg.base_table("potential", &model.label(), ["x", "V"]);
    for p in x.points() {
        t.push(vec![p.into(), model.eval_closed(p)?.into()])?;
    }
    finished(t)
}

pub fn cmd_wkb(cfg: &RunConfig, levels: &LevelRange) -> Result<Outcome> {
    let model = cfg.build_model()?;
    let levels = require_levels(levels)?;
    let spectrum = wkb_spectrum(&model, &levels, cfg.rule)?;
    let mut t = cfg.base_table("wkb", &model.label(), ["N", "E", "x_T", "phi"]);
    for (&n, &e) in spectrum.levels().iter().zip(spectrum.eigenvalues()) {
        let p = phase_integral(&model, e)?;
        t.push(vec![n.into(), e.into(), p.x_t.into(), p.phi.into()])?;
    }
    finished(t)
}

pub fn cmd_solve(
    cfg: &RunConfig,
    levels: &LevelRange,
    method: MethodArg,
    x_max: Option<f64>,
    points: usize,
) -> Result<Outcome> {
    let model = cfg.build_model()?;
    let levels = require_levels(levels)?;
    let method = match method {
        MethodArg::Fd => Method::FiniteDifference,
        MethodArg::Numerov => Method::NumerovShooting,
    };
    let top = *levels.last().expect("non-empty");
    let grid = match x_max {
        Some(x) => GridSpec::new(x, points, method)?,
        None => GridSpec::for_levels(&model, top, method)?,
    }
    .with_tolerance(cfg.rel_tol);
    let spectrum = solve_levels(&model, &grid, &levels)?;
    let mut t = cfg.base_table("solve", &model.label(), ["N", "E"]);
    t.meta("method", method.name());
    for (&n, &e) in spectrum.levels().iter().zip(spectrum.eigenvalues()) {
        t.push(vec![n.into(), e.into()])?;
    }
    finished(t)
}

pub fn cmd_perturb(
    cfg: &RunConfig,
    levels: &LevelRange,
    scale: f64,
    source: SourceArg,
    closed_form: ClosedFormArg,
    delta: f64,
) -> Result<Outcome> {
    let model = cfg.build_model()?;
    let levels = require_levels(levels)?;
    let zeros = Arc::new(cfg.load_zero_set()?);
    let fluct = Fluctuation::new(Arc::clone(&zeros), cfg.s_mode)?;
    let params = match zeros.first_alpha() {
        Some(a1) => Some(ClosedFormParams::new(delta, a1)?),
        None => None,
    };
    let pc = PerturbationConfig {
        rule: cfg.rule,
        source: match source {
            SourceArg::Wkb => StateSource::Wkb,
            SourceArg::Exact => StateSource::Exact,
        },
        closed_form: match closed_form {
            ClosedFormArg::LinearApplication => ClosedForm::LinearApplication,
            ClosedFormArg::RhClosedForm => ClosedForm::RHClosedForm,
            ClosedFormArg::IntegralForm => ClosedForm::IntegralForm,
        },
        params,
    };
    let rows = perturbed_spectrum(&model, &fluct, &levels, &pc)?;
    let mut t = cfg.base_table(
        "perturb",
        &model.label(),
        [
            "N",
            "E_N0",
            "x_T",
            "E_N1_numeric",
            "E_N1_closed",
            "E_N1_scaled",
            "tail_bound",
        ],
    );
    t.meta("zero_count", zeros.len())
        .meta("s_mode", cfg.s_mode.name())
        .meta("source", format!("{:?}", pc.source).to_lowercase())
        .meta("closed_form", pc.closed_form.name())
        .meta("scale", format_number(scale));
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.e0.into(),
            r.x_t.into(),
            r.e1_numeric.into(),
            r.e1_closed.into(),
            (scale * r.e1_numeric).into(),
            r.tail_bound.into(),
        ])?;
    }
    finished(t)
}

/// Highest level whose WKB energy can still fall inside [0, E].
fn top_level_below<P: Potential + ?Sized>(
    model: &P,
    energy: f64,
    rule: QuantizationRule,
) -> Result<usize> {
    let idx = rule.level_index(phase_integral(model, energy)?.phi);
    Ok(idx.max(0.0).floor() as usize + 1)
}

pub fn cmd_compare(cfg: &RunConfig, window: Window) -> Result<Outcome> {
    let model = cfg.build_model()?;
    let zeros = cfg.load_zero_set()?;
    if !(window.1 > window.0) {
        return Err(Error::EmptyWindow(format!(
            "[{}, {}] is empty",
            window.0, window.1
        )));
    }
    let top = top_level_below(&model, window.1, cfg.rule)?;
    let levels: Vec<usize> = (0..=top).collect();
    let spectrum = wkb_spectrum(&model, &levels, cfg.rule)?;
    let report = compare_counts(&spectrum, &zeros, (window.0, window.1))?;
    let mut t = report.to_table();
    let mut meta = cfg
        .base_table("compare", &model.label(), Vec::<String>::new())
        .metadata;
    meta.push(("zero_count".into(), zeros.len().to_string()));
    meta.push(("levels".into(), levels.len().to_string()));
    t.metadata = meta;
    finished(t)
}

pub fn cmd_sweep(cfg: &RunConfig, levels: &LevelRange, reference_energy: f64) -> Result<Outcome> {
    let levels = require_levels(levels)?;
    let variants = sweep_variants();
    let rows = run_sweep(&variants, &levels, cfg.rule, reference_energy);
    let mut t = cfg.base_table(
        "sweep",
        "potential-ladder",
        [
            "variant",
            "law",
            "param1",
            "value1",
            "param2",
            "value2",
            "rms_residual",
            "samples",
            "count_at_reference",
            "status",
        ],
    );
    t.meta(
        "levels",
        format!(
            "{}:{}:{}",
            levels[0],
            levels[levels.len() - 1],
            levels.get(1).map_or(1, |l| l - levels[0])
        ),
    )
    .meta("reference_energy", format_number(reference_energy));
    let mut complete = true;
    for (v, row) in variants.iter().zip(rows) {
        let mut cells: Vec<Cell> = vec![v.name.into(), v.law.name().into()];
        match row {
            Ok(r) => {
                let params = r.fit.law.parameters();
                for k in 0..2 {
                    match params.get(k) {
                        Some(&(name, value)) => cells.extend([name.into(), value.into()]),
                        None => cells.extend(["".into(), "".into()]),
                    }
                }
                cells.extend([
                    r.fit.rms_residual.into(),
                    r.fit.samples.into(),
                    r.count_at_reference.into(),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                complete = false;
                cells.extend([
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                ]);
                cells.push(format!("error: {e}").into());
            }
        }
        t.push(cells)?;
    }
    Ok(Outcome { table: t, complete })
}

/// Runs the configured command.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Potential { x } => cmd_potential(cfg, x),
        Command::Wkb { levels } => cmd_wkb(cfg, levels),
        Command::Solve {
            levels,
            method,
            x_max,
            points,
        } => cmd_solve(cfg, levels, *method, *x_max, *points),
        Command::Perturb {
            levels,
            scale,
            source,
            closed_form,
            delta,
        } => cmd_perturb(cfg, levels, *scale, *source, *closed_form, *delta),
        Command::Compare { window } => cmd_compare(cfg, *window),
        Command::Sweep {
            levels,
            reference_energy,
        } => cmd_sweep(cfg, levels, *reference_energy),
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json()).expect("table serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses `args`, runs, writes the report and returns the exit code:
/// 0 on full success, 1 on a failed computation, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let env_zeros = std::env::var_os(ZEROS_ENV).map(PathBuf::from);
    let result = RunConfig::from_cli(cli, env_zeros).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        let text = render(&outcome.table, cfg.format);
        match &cfg.output {
            Some(path) => fs::write(path, text).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })?;
            }
        }
        Ok(outcome.complete)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("riemann-lab: some rows failed, see the status column");
            1
        }
        Err(e) => {
            eprintln!("riemann-lab: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::FittedLaw;

    fn config(args: &[&str]) -> RunConfig {
        let mut full = vec!["riemann-lab"];
        full.extend_from_slice(args);
        RunConfig::from_cli(Cli::try_parse_from(full).unwrap(), None).unwrap()
    }

    #[test]
    fn ranges_parse() {
        assert_eq!("0:10:0.5".parse::<XRange>().unwrap().points().len(), 21);
        assert_eq!("2:100:1".parse::<XRange>().unwrap().points().len(), 99);
        assert!("1:0:1".parse::<XRange>().is_err());
        assert!("0:1:0".parse::<XRange>().is_err());
        assert_eq!(
            "0:3".parse::<LevelRange>().unwrap().levels(),
            vec![0, 1, 2, 3]
        );
        assert_eq!(
            "10:30:10".parse::<LevelRange>().unwrap().levels(),
            vec![10, 20, 30]
        );
        assert!("3:2".parse::<LevelRange>().unwrap().levels().is_empty());
        assert!("1:2:0".parse::<LevelRange>().is_err());
        assert_eq!("100:1000".parse::<Window>().unwrap(), Window(100.0, 1000.0));
    }

    #[test]
    fn potential_rows() {
        let out = execute(&config(&[
            "potential",
            "--model",
            "quadratic",
            "--x",
            "0:10:0.5",
        ]))
        .unwrap();
        assert_eq!(out.table.rows.len(), 21);
        assert_eq!(out.table.rows[6], vec![Cell::Num(3.0), Cell::Num(9.0)]);
        let out = execute(&config(&["potential", "--x", "2:100:1"])).unwrap();
        let v = out.table.column("V").unwrap();
        assert!((v[0] - 3.0157).abs() < 1e-4, "{}", v[0]);
    }

    #[test]
    fn riemann_full_needs_zeros() {
        let err = execute(&config(&["potential", "--model", "riemann-full"])).unwrap_err();
        assert!(err.to_string().contains(ZEROS_ENV));
        let mut cfg = config(&["potential", "--model", "riemann-full"]);
        cfg.zeros = Some(PathBuf::from("/nonexistent/zeros.txt"));
        let err = execute(&cfg).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/zeros.txt"));
    }

    #[test]
    fn wkb_rows() {
        let out = execute(&config(&["wkb", "--model", "quadratic", "--levels", "0:3"])).unwrap();
        let e = out.table.column("E").unwrap();
        for (got, want) in e.iter().zip([3.0, 7.0, 11.0, 15.0]) {
            assert!((got - want).abs() < 1e-9 * want);
        }
        let out = execute(&config(&[
            "wkb",
            "--model",
            "quadratic",
            "--rule",
            "paper",
            "--levels",
            "0:1",
        ]))
        .unwrap();
        let e = out.table.column("E").unwrap();
        assert!((e[0] - 2.0).abs() < 1e-9 && (e[1] - 10.0).abs() < 1e-8);
        assert!(matches!(
            execute(&config(&["wkb", "--levels", "3:2"])),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn solve_rows() {
        let out = execute(&config(&[
            "solve",
            "--model",
            "quadratic",
            "--levels",
            "0:2",
        ]))
        .unwrap();
        let e = out.table.column("E").unwrap();
        for (got, want) in e.iter().zip([3.0, 7.0, 11.0]) {
            assert!((got - want).abs() < 1e-6 * want, "{got}");
        }
    }

    #[test]
    fn sweep_too_small_flags_every_row() {
        let out = execute(&config(&["sweep", "--levels", "100:105"])).unwrap();
        assert!(!out.complete);
        assert_eq!(out.table.rows.len(), 6);
        assert!(out
            .table
            .rows
            .iter()
            .all(|r| matches!(r.last(), Some(Cell::Text(s)) if s.contains("under-determined"))));
    }

    #[test]
    fn bad_tolerance_rejected() {
        let cli = Cli::try_parse_from(["riemann-lab", "--rel-tol", "0", "wkb"]).unwrap();
        assert!(RunConfig::from_cli(cli, None).is_err());
    }

    #[test]
    fn fitted_law_names_stable() {
        let f = FittedLaw::PowerLaw {
            exponent: 1.0,
            prefactor: 2.0,
        };
        assert_eq!(f.parameters()[0].0, "exponent");
    }
}
