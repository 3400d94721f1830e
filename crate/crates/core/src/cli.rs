//! Command-line surface: single points, figure sweeps, oracle verification
//! and a self-check of the numerical kernels.
//!
//! Settings come from built-in defaults, then an optional TOML file
//! (`--config`), then flags. Exit codes: 0 success, 1 usage or I/O error,
//! 2 numerical failure (quadrature, eigensolver, or a failed check).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{matrix_element_2d, mean_potential_closed_form, RotatedBasisMap};
use crate::oracle::{compare, ComparisonReport, ComparisonTolerances};
use crate::perturbation::{mode_report, ModeReport};
use crate::specfun::{bessel_k0_scaled, integrate_1d, integrate_2d, phi_n};
use crate::{Error, ModeParams, QuadScheme, QuadratureSpec, TruncationSpec};

/// Above this `|⟨𝒰⟩/ħω|` first-order results are reported with a warning.
pub const WEAK_COUPLING_LIMIT: f64 = 0.1;

pub const CSV_COLUMNS: [&str; 10] = [
    "omega_over_planck",
    "lc_over_planck",
    "one_minus_eta",
    "log10_one_minus_eta",
    "one_minus_fidelity",
    "log10_one_minus_fidelity",
    "z_squared",
    "e00_over_hbar_omega",
    "n_max",
    "converged",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum QuadChoice {
    /// Gauss-Hermite with a node-doubling check.
    Gh,
    /// Adaptive tanh-sinh.
    Ts,
}

/// Log-spaced frequency axis, endpoints included exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl OmegaGrid {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.min > 0.0 && self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::param("omega-min", format!("grid bounds must be positive, got {}..{}", self.min, self.max)));
        }
        if !(self.min < self.max) {
            return Err(Error::param("omega-max", format!("need omega-min < omega-max, got {}..{}", self.min, self.max)));
        }
        if self.points < 2 {
            return Err(Error::param("points", format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let (lo, hi) = (self.min.log10(), self.max.log10());
        let last = self.points - 1;
        (0..self.points)
            .map(|i| match i {
                0 => self.min,
                i if i == last => self.max,
                i => 10f64.powf(lo + (hi - lo) * i as f64 / last as f64),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub omega_grid: OmegaGrid,
    pub lc_values: Vec<f64>,
    pub trunc: TruncationSpec,
    pub spec: QuadratureSpec,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            omega_grid: OmegaGrid { min: 1e-3, max: 1.0, points: 61 },
            lc_values: vec![1.0, 2.0],
            trunc: TruncationSpec::default(),
            spec: QuadratureSpec::default(),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> crate::Result<()> {
        self.omega_grid.validate()?;
        if self.lc_values.is_empty() {
            return Err(Error::param("lc-list", "needs at least one value"));
        }
        for &lc in &self.lc_values {
            ModeParams::new(self.omega_grid.min, lc)?;
        }
        self.trunc.validate()?;
        self.spec.validate()
    }

    /// Grid points in output order: `lc` major, `omega` minor.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let omegas = self.omega_grid.values();
        self.lc_values.iter().flat_map(|&lc| omegas.iter().map(move |&w| (w, lc))).collect()
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            omega_min: self.omega_grid.min,
            omega_max: self.omega_grid.max,
            points: self.omega_grid.points,
            lc_list: self.lc_values.clone(),
            nmax: self.trunc.n_max,
            tol: self.trunc.tol,
            quad: match self.spec.scheme {
                QuadScheme::GaussHermite => QuadChoice::Gh,
                QuadScheme::TanhSinh => QuadChoice::Ts,
            },
            nodes: self.spec.nodes,
            quad_tol: self.spec.tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ConfigEcho {
    omega_min: f64,
    omega_max: f64,
    points: usize,
    lc_list: Vec<f64>,
    nmax: usize,
    tol: f64,
    quad: QuadChoice,
    nodes: usize,
    quad_tol: f64,
}

/// Every setting that can come from a config file or a flag. Unset fields
/// leave the lower layer untouched.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Mode frequency in Planck units (point, verify).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Regularization length in Planck lengths (point, verify).
    #[arg(long)]
    pub lc: Option<f64>,
    /// Lowest frequency of the figure grid.
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Highest frequency of the figure grid.
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Number of log-spaced frequencies.
    #[arg(long)]
    pub points: Option<usize>,
    /// Comma-separated regularization lengths.
    #[arg(long, value_delimiter = ',')]
    pub lc_list: Option<Vec<f64>>,
    /// Fock cutoff per mode.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Truncation convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub quad: Option<QuadChoice>,
    /// Gauss-Hermite order.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Quadrature tolerance (config file only).
    #[arg(skip)]
    pub quad_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// `other` wins wherever it is set.
    pub fn overlay(self, other: Settings) -> Settings {
        Settings {
            omega: other.omega.or(self.omega),
            lc: other.lc.or(self.lc),
            omega_min: other.omega_min.or(self.omega_min),
            omega_max: other.omega_max.or(self.omega_max),
            points: other.points.or(self.points),
            lc_list: other.lc_list.or(self.lc_list),
            nmax: other.nmax.or(self.nmax),
            tol: other.tol.or(self.tol),
            quad: other.quad.or(self.quad),
            nodes: other.nodes.or(self.nodes),
            quad_tol: other.quad_tol.or(self.quad_tol),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
        }
    }

    pub fn sweep_config(&self) -> crate::Result<SweepConfig> {
        let mut c = SweepConfig::default();
        if let Some(v) = self.omega_min {
            c.omega_grid.min = v;
        }
        if let Some(v) = self.omega_max {
            c.omega_grid.max = v;
        }
        if let Some(v) = self.points {
            c.omega_grid.points = v;
        }
        if let Some(v) = &self.lc_list {
            c.lc_values = v.clone();
        } else if let Some(v) = self.lc {
            c.lc_values = vec![v];
        }
        c.trunc = self.truncation(c.trunc.n_max);
        c.spec = self.quadrature();
        c.format = self.format.unwrap_or(c.format);
        c.out = self.out.clone();
        c.validate()?;
        Ok(c)
    }

    pub fn truncation(&self, default_n_max: usize) -> TruncationSpec {
        let d = TruncationSpec::default();
        TruncationSpec { n_max: self.nmax.unwrap_or(default_n_max), tol: self.tol.unwrap_or(d.tol) }
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        let tol = self.quad_tol.unwrap_or(d.tol);
        let spec = match self.quad.unwrap_or(QuadChoice::Ts) {
            QuadChoice::Gh => QuadratureSpec::gauss_hermite(200, tol),
            QuadChoice::Ts => QuadratureSpec::tanh_sinh(tol),
        };
        QuadratureSpec { nodes: self.nodes.unwrap_or(spec.nodes), ..spec }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gravdeco", version, about = "Gravitational self-decoherence of a vibration mode coupled to its virtual clone")]
pub struct Cli {
    /// TOML file with the same keys as the long flags (underscores for dashes).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Purity, fidelity and energy at one (omega, lc).
    Point(#[command(flatten)] Settings),
    /// Deficit sweep over a log-spaced omega grid for each lc.
    Figure(#[command(flatten)] Settings),
    /// Compare first-order results with exact diagonalization.
    Verify(#[command(flatten)] Settings),
    /// Reference checks of special functions, quadrature and matrix elements.
    Selfcheck,
}

/// Failure of a command, tagged with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::BasisTooLarge { .. } => CliError::Usage(e.to_string()),
            Error::QuadratureNotConverged { .. } | Error::Eigensolver(_) => CliError::Numerical(e.to_string()),
        }
    }
}

/// Result of a command: text for stdout, warnings for stderr.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

fn row_warnings(r: &ModeReport, trunc: &TruncationSpec, warnings: &mut Vec<String>) {
    if !r.weak_coupling() {
        warnings.push(format!(
            "omega={:e} lc={:e}: |<U>/hbar omega| = {:.4} exceeds {WEAK_COUPLING_LIMIT}; first-order results are outside their range",
            r.omega,
            r.lc,
            r.mean_potential_over_hbar_omega.abs()
        ));
    }
    if !r.converged {
        warnings.push(format!("omega={:e} lc={:e}: truncation at n_max={} did not reach tol={:e}", r.omega, r.lc, r.n_max, trunc.tol));
    }
}

#[derive(Serialize)]
struct FigureRow {
    omega_over_planck: f64,
    lc_over_planck: f64,
    one_minus_eta: f64,
    log10_one_minus_eta: f64,
    one_minus_fidelity: f64,
    log10_one_minus_fidelity: f64,
    z_squared: f64,
    e00_over_hbar_omega: f64,
    n_max: usize,
    converged: bool,
}

impl From<&ModeReport> for FigureRow {
    fn from(r: &ModeReport) -> Self {
        Self {
            omega_over_planck: r.omega,
            lc_over_planck: r.lc,
            one_minus_eta: r.one_minus_eta,
            log10_one_minus_eta: r.log10_one_minus_eta,
            one_minus_fidelity: r.one_minus_fidelity,
            log10_one_minus_fidelity: r.log10_one_minus_fidelity,
            z_squared: r.z_squared,
            e00_over_hbar_omega: r.e00_over_hbar_omega,
            n_max: r.n_max,
            converged: r.converged,
        }
    }
}

fn csv_line(r: &ModeReport) -> String {
    format!(
        "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}",
        r.omega,
        r.lc,
        r.one_minus_eta,
        r.log10_one_minus_eta,
        r.one_minus_fidelity,
        r.log10_one_minus_fidelity,
        r.z_squared,
        r.e00_over_hbar_omega,
        r.n_max,
        r.converged
    )
}

/// CSV with the configuration echoed as `#` comment lines before the header.
pub fn render_csv(config: &SweepConfig, rows: &[ModeReport]) -> String {
    let echo = serde_json::to_value(config.echo()).expect("config echo serializes");
    let mut s = String::new();
    for (k, v) in echo.as_object().expect("config echo is an object") {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s.push_str(&CSV_COLUMNS.join(","));
    s.push('\n');
    for r in rows {
        s.push_str(&csv_line(r));
        s.push('\n');
    }
    s
}

/// `{"config": {...}, "rows": [...]}` with the CSV column names as keys.
/// Non-finite numbers become `null`.
pub fn render_json(config: &SweepConfig, rows: &[ModeReport]) -> String {
    let rows: Vec<FigureRow> = rows.iter().map(FigureRow::from).collect();
    let doc = serde_json::json!({ "config": config.echo(), "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("figure rows serialize");
    s.push('\n');
    s
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(config: &SweepConfig) -> crate::Result<Vec<ModeReport>> {
    config.validate()?;
    config
        .points()
        .par_iter()
        .map(|&(w, lc)| mode_report(&ModeParams::new(w, lc)?, &config.trunc, &config.spec))
        .collect()
}

pub fn cmd_point(omega: f64, lc: f64, trunc: &TruncationSpec, spec: &QuadratureSpec, format: OutputFormat) -> Result<Output, CliError> {
    let params = ModeParams::new(omega, lc)?;
    let report = mode_report(&params, trunc, spec)?;
    let mut out = Output::default();
    row_warnings(&report, trunc, &mut out.warnings);
    out.stdout = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        OutputFormat::Csv => format!("{}\n{}\n", CSV_COLUMNS.join(","), csv_line(&report)),
    };
    Ok(out)
}

pub fn cmd_figure(config: &SweepConfig) -> Result<Output, CliError> {
    let rows = run_sweep(config)?;
    let mut out = Output::default();
    for r in &rows {
        row_warnings(r, &config.trunc, &mut out.warnings);
    }
    out.stdout = match config.format {
        OutputFormat::Csv => render_csv(config, &rows),
        OutputFormat::Json => render_json(config, &rows),
    };
    Ok(out)
}

/// Cutoff used by `verify` unless `--nmax` is given.
pub const VERIFY_N_MAX: usize = 40;

/// Runs the oracle comparison on each point. The command fails with exit
/// code 2 unless every point meets `tol`.
pub fn cmd_verify(
    points: &[(f64, f64)],
    trunc: &TruncationSpec,
    spec: &QuadratureSpec,
    tol: &ComparisonTolerances,
    format: OutputFormat,
) -> Result<(Output, Vec<ComparisonReport>), CliError> {
    let reports = points
        .iter()
        .map(|&(w, lc)| compare(&ModeParams::new(w, lc)?, trunc, spec))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut out = Output::default();
    out.stdout = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
        OutputFormat::Csv => {
            let mut s = String::from(
                "omega_over_planck,lc_over_planck,n_max,rel_diff_one_minus_fidelity,rel_diff_one_minus_eta,energy_gap,state_infidelity,eigen_residual,pass\n",
            );
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{}",
                    r.omega,
                    r.lc,
                    r.n_max,
                    r.rel_diff_one_minus_fidelity,
                    r.rel_diff_one_minus_eta,
                    r.energy_gap,
                    r.state_infidelity,
                    r.eigen_residual,
                    r.passes(tol)
                );
            }
            s
        }
    };
    Ok((out, reports))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, value: f64, want: f64, rel_tol: f64) -> CheckResult {
    let rel = ((value - want) / want).abs();
    CheckResult { name: name.into(), passed: rel <= rel_tol, detail: format!("{value:e} vs {want:e} (rel {rel:.1e}, tol {rel_tol:.0e})") }
}

fn check_result(name: &str, r: crate::Result<f64>, want: f64, rel_tol: f64) -> CheckResult {
    match r {
        Ok(v) => check(name, v, want, rel_tol),
        Err(e) => CheckResult { name: name.into(), passed: false, detail: e.to_string() },
    }
}

/// Reference values of the numerical kernels.
pub fn cmd_selfcheck() -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for (x, want) in [(1e-60, 138.271_037_095_301_15), (1.0, 1.144_463_079_806_895), (2.0, 0.841_568_215_070_771_4), (1e3, 0.039_628_321_600_754_217)] {
        checks.push(check_result(&format!("exp(x) K0(x) at x={x:e}"), bessel_k0_scaled(x), want, 1e-12));
    }
    let gauss = |spec: QuadratureSpec, label: &str| check_result(label, integrate_1d(|q| (-q * q).exp(), &spec).map(|e| e.value), std::f64::consts::PI.sqrt(), 1e-12);
    checks.push(gauss(QuadratureSpec::gauss_hermite(40, 1e-12), "gaussian integral, gauss-hermite"));
    checks.push(gauss(QuadratureSpec::tanh_sinh(1e-12), "gaussian integral, tanh-sinh"));
    for n in [0, 5, 20] {
        let norm = integrate_1d(|q| phi_n(n, q, 0.7).powi(2), &QuadratureSpec::tanh_sinh(1e-12)).map(|e| e.value);
        checks.push(check_result(&format!("oscillator norm n={n}"), norm, 1.0, 1e-12));
    }
    let two_d = integrate_2d(|q, qb| (phi_n(1, q, 1.0) * phi_n(2, qb, 1.0)).powi(2), &QuadratureSpec::gauss_hermite(40, 1e-12)).map(|e| e.value);
    checks.push(check_result("product-state norm (1,2)", two_d, 1.0, 1e-12));
    let map = RotatedBasisMap::new(32);
    let worst = (0..=32).flat_map(|n| (0..=32).map(move |k| (n, k))).map(|(n, k)| (map.shell(n, k).iter().map(|c| c * c).sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
    checks.push(CheckResult { name: "rotated-basis norms, n_max=32".into(), passed: worst < 1e-12, detail: format!("worst deviation {worst:.1e}") });
    for (w, lc) in [(1.0, 1.0), (2.0, 1.0), (1e-3, 2.0)] {
        let p = ModeParams::new(w, lc).expect("valid reference parameters");
        let direct = matrix_element_2d((0, 0), (0, 0), &p, &QuadratureSpec::tanh_sinh(1e-11)).map(|(v, _)| v);
        checks.push(check_result(&format!("<U> closed form vs double integral at ({w}, {lc})"), direct, mean_potential_closed_form(&p), 1e-8));
    }
    checks
}

fn emit(out: &Output, stdout: &mut dyn Write, stderr: &mut dyn Write, path: Option<&Path>) -> Result<(), CliError> {
    for w in &out.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match path {
        Some(p) => std::fs::write(p, &out.stdout).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => stdout.write_all(out.stdout.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => Settings::load(p).map_err(CliError::Usage)?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Point(flags) => {
            let s = file.overlay(flags);
            let omega = s.omega.ok_or_else(|| CliError::Usage("point needs --omega".into()))?;
            let lc = s.lc.ok_or_else(|| CliError::Usage("point needs --lc".into()))?;
            let trunc = s.truncation(TruncationSpec::default().n_max);
            trunc.validate()?;
            let out = cmd_point(omega, lc, &trunc, &s.quadrature(), s.format.unwrap_or(OutputFormat::Json))?;
            emit(&out, stdout, stderr, s.out.as_deref())
        }
        Command::Figure(flags) => {
            let config = file.overlay(flags).sweep_config()?;
            let out = cmd_figure(&config)?;
            emit(&out, stdout, stderr, config.out.as_deref())
        }
        Command::Verify(flags) => {
            let s = file.overlay(flags);
            let omegas = s.omega.map(|w| vec![w]).unwrap_or_else(|| vec![1e-3, 1e-2]);
            let lcs = s.lc_list.clone().or(s.lc.map(|v| vec![v])).unwrap_or_else(|| vec![1.0, 2.0]);
            let points: Vec<(f64, f64)> = lcs.iter().flat_map(|&lc| omegas.iter().map(move |&w| (w, lc))).collect();
            let trunc = s.truncation(VERIFY_N_MAX);
            trunc.validate()?;
            let tol = ComparisonTolerances::default();
            let (out, reports) = cmd_verify(&points, &trunc, &s.quadrature(), &tol, s.format.unwrap_or(OutputFormat::Csv))?;
            emit(&out, stdout, stderr, s.out.as_deref())?;
            let failed = reports.iter().filter(|r| !r.passes(&tol)).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} of {} comparison points outside tolerance", reports.len())));
            }
            Ok(())
        }
        Command::Selfcheck => {
            let checks = cmd_selfcheck();
            let mut text = String::new();
            for c in &checks {
                let _ = writeln!(text, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            emit(&Output { stdout: text, warnings: Vec::new() }, stdout, stderr, None)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} self-checks failed")));
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("gravdeco").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = OmegaGrid { min: 1e-3, max: 1.0, points: 61 };
        let v = g.values();
        assert_eq!((v.len(), v[0], v[60]), (61, 1e-3, 1.0));
        assert!((v[20] - 1e-2).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_grids() {
        for g in [OmegaGrid { min: 0.0, max: 1.0, points: 3 }, OmegaGrid { min: 1.0, max: 1.0, points: 3 }, OmegaGrid { min: 0.1, max: 1.0, points: 1 }] {
            assert!(g.validate().is_err(), "{g:?}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::from_toml("nmax = 20\nlc_list = [0.5, 3.0]\npoints = 5\nquad = \"gh\"\n").unwrap();
        let flags = Settings { nmax: Some(12), ..Settings::default() };
        let c = file.overlay(flags).sweep_config().unwrap();
        assert_eq!(c.trunc.n_max, 12);
        assert_eq!(c.lc_values, vec![0.5, 3.0]);
        assert_eq!(c.omega_grid.points, 5);
        assert_eq!(c.spec.scheme, QuadScheme::GaussHermite);
        assert!(Settings::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn point_reports_energy_and_warns() {
        let (code, out, err) = run_capture(&["point", "--omega", "1", "--lc", "1", "--nmax", "8"]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["e00_over_hbar_omega"].as_f64().unwrap() - 0.210_360_040_764_342_9).abs() < 1e-12);
        assert!(err.contains("exceeds 0.1"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["point", "--omega", "0", "--lc", "1"]).0, 1);
        assert_eq!(run_capture(&["point", "--lc", "1"]).0, 1);
        assert_eq!(run_capture(&["figure", "--points", "1"]).0, 1);
        assert_eq!(run_capture(&["point", "--omega", "1", "--lc", "1", "--quad", "simpson"]).0, 1);
        assert_eq!(run_capture(&["nonsense"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn quadrature_failure_exits_two() {
        let (code, _, err) = run_capture(&["point", "--omega", "1e-3", "--lc", "1", "--quad", "gh", "--nodes", "20", "--nmax", "4"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn csv_layout() {
        let config = SweepConfig {
            omega_grid: OmegaGrid { min: 0.1, max: 1.0, points: 3 },
            lc_values: vec![1.0, 2.0],
            trunc: TruncationSpec::new(8, 1e-10).unwrap(),
            ..SweepConfig::default()
        };
        let out = cmd_figure(&config).unwrap();
        let lines: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("1e-1,1e0,"));
        assert!(lines[4].starts_with("1e-1,2e0,"));
        assert!(lines[1].ends_with(",8,false") || lines[1].ends_with(",8,true"));
        let json = render_json(&config, &run_sweep(&config).unwrap());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&str> = v["rows"][0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = CSV_COLUMNS.to_vec();
        want.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, want);
    }

    #[test]
    fn selfcheck_passes() {
        for c in cmd_selfcheck() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
