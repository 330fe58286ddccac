//! Command-line front end: `run` (one series from a config file), `sweep`
//! (the same config across several values of one parameter), `discrete`
//! (a finite-ladder series straight to stdout), `moments` (spectral-moment
//! classification), and `check` (built-in closed-form verification).
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 numerical error,
//! 3 I/O error. Output files are written atomically (temp file + rename),
//! and identical inputs produce byte-identical outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{
    classify_moment, detect_regrowth, exponential_log_functional, fit_exponential, fit_power_law,
    paley_wiener_checks, short_time_classify, windowed_log_functional, AnalysisError, FitKind,
    MomentClass,
};
use crate::config::{apply_override, parse_config, ConfigError, RunConfig};
use crate::continuum::{
    amplitude_doubly_truncated, survival_series, ContinuumError, SurvivalSeries,
};
use crate::discrete::{
    solve_eigensystem, survival_amplitude_discrete, DiscreteError, DiscreteSpectrum,
};
use crate::model::{ContinuumSpec, ModelParams};
use crate::specfun::{cosint, cot_sum_partial, sinint};

/// A failure with its process exit code class.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or usage (exit 1).
    #[error("{0}")]
    Config(String),
    /// A computation failed or a built-in check did not pass (exit 2).
    #[error("{0}")]
    Numerical(String),
    /// Reading or writing a file failed (exit 3).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// The process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ContinuumError> for CliError {
    fn from(e: ContinuumError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "contdecay",
    version,
    about = "Survival amplitudes and probabilities for a state coupled to \
             full, truncated, or discretized Lorentzian continua"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one survival series from a config file; write CSV and report.
    Run {
        /// Configuration file (flat `key = value` lines).
        #[arg(long)]
        config: PathBuf,
        /// Directory for relative output paths.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run one config with a parameter swept over several values.
    Sweep {
        /// Configuration file for the base run.
        #[arg(long)]
        config: PathBuf,
        /// Parameter to sweep: omega_min, omega_max, alpha, or m.
        #[arg(long)]
        param: String,
        /// Comma-separated values for the swept parameter.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        /// Directory for relative output paths.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the survival series of a finite ladder of levels as CSV.
    Discrete {
        /// Ladder half-size (levels at k·epsilon for k = −m..m).
        #[arg(long)]
        m: u32,
        /// Level spacing (> 0).
        #[arg(long)]
        epsilon: f64,
        /// Coupling strength to each level (≥ 0).
        #[arg(long)]
        vbar: f64,
        /// Time step (> 0).
        #[arg(long)]
        dt: f64,
        /// Number of grid points starting at t = 0.
        #[arg(long)]
        n: usize,
    },
    /// Classify spectral moments of a configured support up to an order.
    Moments {
        /// Configuration file naming the support and parameters.
        #[arg(long)]
        config: PathBuf,
        /// Highest moment order to classify.
        #[arg(long = "n-max")]
        n_max: u32,
    },
    /// Run built-in closed-form verification checks; fail on any mismatch.
    Check,
}

/// Parses the process arguments and runs the selected command, returning
/// the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, out } => cmd_run(&config, out.as_deref()),
        Command::Sweep { config, param, values, out } => {
            cmd_sweep(&config, &param, &values, out.as_deref())
        }
        Command::Discrete { m, epsilon, vbar, dt, n } => cmd_discrete(m, epsilon, vbar, dt, n),
        Command::Moments { config, n_max } => cmd_moments(&config, n_max),
        Command::Check => cmd_check(),
    }
}

/// Fixed-width scientific formatting, the single source of numeric text in
/// every output file (17 significant digits round-trips f64 exactly).
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Final location for an output file: relative paths land in `--out` when
/// given (created if missing), otherwise in the working directory.
fn resolve_output(base: &Path, out_dir: Option<&Path>) -> Result<PathBuf, CliError> {
    let path = match out_dir {
        Some(dir) if base.is_relative() => dir.join(base),
        _ => base.to_path_buf(),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    Ok(path)
}

/// Writes `content` atomically: a temp file in the destination directory,
/// persisted over the final name only once fully written.
fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(&e))?;
    tmp.write_all(content.as_bytes()).map_err(|e| io_err(&e))?;
    tmp.persist(path).map_err(|e| io_err(&e))?;
    Ok(())
}

const CSV_HEADER: &str = "t,re_a_raw,im_a_raw,re_a,im_a,p\n";

/// The series as CSV text: time, raw amplitude, normalized amplitude, and
/// normalized probability per row.
fn series_csv(series: &SurvivalSeries) -> String {
    let mut out = String::from(CSV_HEADER);
    for i in 0..series.len() {
        let raw = series.raw_amplitude(i);
        let norm = series.normalized_amplitude(i);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(series.times()[i]),
            fmt(raw.re),
            fmt(raw.im),
            fmt(norm.re),
            fmt(norm.im),
            fmt(norm.norm_sqr()),
        );
    }
    out
}

fn fit_kind_label(kind: FitKind) -> &'static str {
    match kind {
        FitKind::Exponential => "exponential",
        FitKind::PowerLaw => "power_law",
        FitKind::Linear => "linear",
        FitKind::Quadratic => "quadratic",
    }
}

fn moment_label(class: MomentClass) -> String {
    match class {
        MomentClass::Zero => "zero".to_string(),
        MomentClass::Infinite => "infinite".to_string(),
        MomentClass::Finite(v) => fmt(v),
    }
}

fn spec_lines(spec: ContinuumSpec, lines: &mut Vec<String>) {
    match spec {
        ContinuumSpec::Full => lines.push("spec.kind = full".to_string()),
        ContinuumSpec::LowerTruncated { omega_min } => {
            lines.push("spec.kind = lower_truncated".to_string());
            lines.push(format!("spec.omega_min = {}", fmt(omega_min)));
        }
        ContinuumSpec::DoublyTruncated { omega_min, omega_max } => {
            lines.push("spec.kind = doubly_truncated".to_string());
            lines.push(format!("spec.omega_min = {}", fmt(omega_min)));
            lines.push(format!("spec.omega_max = {}", fmt(omega_max)));
        }
        ContinuumSpec::Discrete { m } => {
            lines.push("spec.kind = discrete".to_string());
            lines.push(format!("spec.m = {m}"));
        }
    }
}

/// The per-run report: model summary plus every analysis the config asked
/// for, as stable `key = value` lines (no paths, so identical runs give
/// identical reports wherever they write).
fn run_report(cfg: &RunConfig, series: &SurvivalSeries) -> Result<Vec<String>, CliError> {
    let mut lines = Vec::new();
    spec_lines(cfg.spec, &mut lines);
    lines.push(format!("params.alpha = {}", fmt(cfg.params.alpha())));
    lines.push(format!("params.half_width = {}", fmt(cfg.params.half_width())));
    lines.push(format!(
        "params.effective_half_width = {}",
        fmt(cfg.params.effective_half_width())
    ));
    lines.push(format!("series.points = {}", series.len()));
    lines.push(format!("series.norm_a0 = {}", fmt(series.norm())));

    if let Some(window) = cfg.analysis.fit_exponential {
        let fit = fit_exponential(series, window)?;
        lines.push(format!("fit.exponential.alpha = {}", fmt(fit.parameter)));
        lines.push(format!("fit.exponential.rms = {}", fmt(fit.rms_residual)));
    }
    if let Some(window) = cfg.analysis.fit_power_law {
        let fit = fit_power_law(series, window)?;
        lines.push(format!("fit.power_law.delta = {}", fmt(fit.parameter)));
        lines.push(format!("fit.power_law.rms = {}", fmt(fit.rms_residual)));
    }
    if cfg.analysis.short_time {
        let st = short_time_classify(series)?;
        lines.push(format!("short_time.kind = {}", fit_kind_label(st.fit.kind)));
        lines.push(format!("short_time.parameter = {}", fmt(st.fit.parameter)));
        lines.push(format!("short_time.slope_at_zero = {}", fmt(st.slope_at_zero)));
    }
    if cfg.analysis.regrowth {
        let events = detect_regrowth(series);
        lines.push(format!("regrowth.count = {}", events.len()));
        for (i, e) in events.iter().enumerate() {
            lines.push(format!("regrowth.{i}.t_min = {}", fmt(e.t_min)));
            lines.push(format!("regrowth.{i}.p_min = {}", fmt(e.p_min)));
            lines.push(format!("regrowth.{i}.t_peak = {}", fmt(e.t_peak)));
            lines.push(format!("regrowth.{i}.p_peak = {}", fmt(e.p_peak)));
            lines.push(format!("regrowth.{i}.gain = {}", fmt(e.gain())));
        }
    }
    if let Some(n_max) = cfg.analysis.moments {
        for n in 1..=n_max {
            let class = classify_moment(cfg.spec, &cfg.params, n, cfg.abs_tol)?;
            lines.push(format!("moment.{n} = {}", moment_label(class)));
        }
    }
    Ok(lines)
}

fn compute_series(cfg: &RunConfig) -> Result<SurvivalSeries, CliError> {
    Ok(survival_series(
        cfg.spec,
        cfg.t0,
        cfg.dt,
        cfg.n,
        &cfg.params,
        cfg.normalize,
        cfg.abs_tol,
    )?)
}

fn cmd_run(config_path: &Path, out_dir: Option<&Path>) -> Result<(), CliError> {
    let cfg = parse_config(&read_file(config_path)?)?;
    let series = compute_series(&cfg)?;

    let base = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("series.csv"));
    let csv_path = resolve_output(&base, out_dir)?;
    write_atomic(&csv_path, &series_csv(&series))?;
    println!("series.csv = {}", csv_path.display());

    let report = run_report(&cfg, &series)?;
    let report_path = csv_path.with_extension("report.txt");
    let mut report_text = String::new();
    for line in &report {
        println!("{line}");
        let _ = writeln!(report_text, "{line}");
    }
    write_atomic(&report_path, &report_text)?;
    println!("report.txt = {}", report_path.display());
    Ok(())
}

/// Filename-safe form of a swept value (anything outside `[-0-9A-Za-z._]`
/// becomes `_`).
fn sanitize_token(token: &str) -> String {
    token
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_') { c } else { '_' })
        .collect()
}

fn cmd_sweep(
    config_path: &Path,
    param: &str,
    values: &[String],
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let base_cfg = parse_config(&read_file(config_path)?)?;
    let base = base_cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("series.csv"));
    let base_path = resolve_output(&base, out_dir)?;
    let stem = base_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(
        || "series".to_string(),
    );
    let dir = base_path.parent().map(Path::to_path_buf).unwrap_or_default();

    let mut summary = String::from("param,value,status,fit\n");
    for token in values.iter().filter(|v| !v.is_empty()) {
        let (status, fit_text) = match sweep_variant(&base_cfg, param, token, &dir, &stem) {
            Ok(fit_text) => ("ok", fit_text),
            Err(CliError::Config(msg)) => {
                eprintln!("sweep {param} = {token}: {msg}");
                ("config_error", String::new())
            }
            Err(CliError::Numerical(msg)) => {
                eprintln!("sweep {param} = {token}: {msg}");
                ("numerical_error", String::new())
            }
            // I/O failures are environmental, not properties of the
            // variant; stop the whole sweep.
            Err(e @ CliError::Io(_)) => return Err(e),
        };
        let _ = writeln!(summary, "{param},{token},{status},{fit_text}");
    }

    let summary_path = dir.join(format!("{stem}.sweep_summary.csv"));
    write_atomic(&summary_path, &summary)?;
    println!("sweep_summary.csv = {}", summary_path.display());
    Ok(())
}

/// One sweep variant: apply the override, compute, write the variant CSV,
/// and return the summary fit text (empty when no fit was configured).
fn sweep_variant(
    base_cfg: &RunConfig,
    param: &str,
    token: &str,
    dir: &Path,
    stem: &str,
) -> Result<String, CliError> {
    let cfg = apply_override(base_cfg, param, token)?;
    let series = compute_series(&cfg)?;
    let name = format!("{stem}.{param}_{}.csv", sanitize_token(token));
    write_atomic(&dir.join(name), &series_csv(&series))?;
    if let Some(window) = cfg.analysis.fit_exponential {
        Ok(fmt(fit_exponential(&series, window)?.parameter))
    } else if let Some(window) = cfg.analysis.fit_power_law {
        Ok(fmt(fit_power_law(&series, window)?.parameter))
    } else {
        Ok(String::new())
    }
}

fn cmd_discrete(m: u32, epsilon: f64, vbar: f64, dt: f64, n: usize) -> Result<(), CliError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Config(format!("--dt must be positive, got {dt}")));
    }
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".to_string()));
    }
    // Argument errors (bad spacing/coupling) are usage errors; only the
    // eigensolve itself is a numerical failure.
    let ladder = DiscreteSpectrum::new(m, epsilon, vbar)
        .map_err(|e: DiscreteError| CliError::Config(e.to_string()))?;
    let eig = solve_eigensystem(&ladder).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut out = String::from(CSV_HEADER);
    for i in 0..n {
        let t = i as f64 * dt;
        let a = survival_amplitude_discrete(t, &eig);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(t),
            fmt(a.re),
            fmt(a.im),
            fmt(a.re),
            fmt(a.im),
            fmt(a.norm_sqr()),
        );
    }
    print!("{out}");
    Ok(())
}

fn cmd_moments(config_path: &Path, n_max: u32) -> Result<(), CliError> {
    let cfg = parse_config(&read_file(config_path)?)?;
    for n in 1..=n_max {
        let class = classify_moment(cfg.spec, &cfg.params, n, cfg.abs_tol)?;
        println!("moment.{n} = {}", moment_label(class));
    }
    Ok(())
}

/// One named check line plus its pass/fail contribution.
struct CheckSink {
    lines: Vec<String>,
    failures: Vec<String>,
}

impl CheckSink {
    fn new() -> Self {
        CheckSink { lines: Vec::new(), failures: Vec::new() }
    }

    fn value(&mut self, name: &str, value: f64) {
        self.lines.push(format!("check.{name} = {}", fmt(value)));
    }

    fn assert(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failures.push(name.to_string());
        }
    }
}

fn cmd_check() -> Result<(), CliError> {
    let mut sink = CheckSink::new();

    // Closed-form integrals behind the bounded-spectrum argument.
    let report = paley_wiener_checks();
    for check in &report.m_integrals {
        let tag = format!("m_integral.{}", check.m);
        sink.value(&format!("{tag}.measured"), check.measured);
        sink.value(&format!("{tag}.pi_over_sin"), check.pi_over_sin);
        sink.value(&format!("{tag}.two_pi_over_sin"), check.two_pi_over_sin);
        sink.assert(&tag, (check.measured - check.pi_over_sin).abs() <= 1e-8);
    }
    sink.value("catalan.measured", report.catalan_measured);
    sink.value("catalan.expected", report.catalan_expected);
    sink.assert(
        "catalan",
        (report.catalan_measured - report.catalan_expected).abs() <= 1e-4,
    );

    // The slowly converging level-sum: its truncation error must fall by
    // roughly a decade per decade of terms (harmonic-like tail).
    let z = 0.25;
    let exact = std::f64::consts::PI * (std::f64::consts::PI * z).tan().recip();
    let err_at = |k: u32| -> Result<f64, CliError> {
        let partial =
            cot_sum_partial(z, k).map_err(|e| CliError::Numerical(e.to_string()))?;
        Ok((partial - exact).abs())
    };
    let errs = [err_at(100)?, err_at(1_000)?, err_at(10_000)?];
    for (i, pair) in errs.windows(2).enumerate() {
        let ratio = pair[0] / pair[1];
        sink.value(&format!("level_sum.decade_ratio.{i}"), ratio);
        sink.assert(&format!("level_sum.decade_ratio.{i}"), (8.0..=12.0).contains(&ratio));
    }

    // Derivative identities of the oscillatory-integral special functions.
    let mut max_err: f64 = 0.0;
    let h = 1e-5;
    for z in [
        num_complex::Complex64::new(2.0, 0.3),
        num_complex::Complex64::new(7.0, 1.0),
        num_complex::Complex64::new(20.0, 2.0),
    ] {
        let step = num_complex::Complex64::new(h, 0.0);
        let dsi = (sinint(z + step) - sinint(z - step)) / (2.0 * h);
        let dci_num = (cosint(z + step).map_err(|e| CliError::Numerical(e.to_string()))?
            - cosint(z - step).map_err(|e| CliError::Numerical(e.to_string()))?)
            / (2.0 * h);
        max_err = max_err.max((dsi - z.sin() / z).norm());
        max_err = max_err.max((dci_num - z.cos() / z).norm());
    }
    sink.value("derivative_identities.max_error", max_err);
    sink.assert("derivative_identities", max_err <= 1e-6);

    // A symmetric band must give a purely real amplitude.
    let params = ModelParams::from_alpha(0.2).map_err(|e| CliError::Config(e.to_string()))?;
    let abs_tol = 1e-10;
    let mut max_imag: f64 = 0.0;
    for t in [1.0, 5.0, 17.3] {
        let a = amplitude_doubly_truncated(t, -3.0, 3.0, &params, abs_tol)?;
        max_imag = max_imag.max(a.im.abs());
    }
    sink.value("symmetric_band.max_imag", max_imag);
    sink.assert("symmetric_band.max_imag", max_imag <= abs_tol);

    // Probabilities stay physical across supports.
    let trunc_params = ModelParams::from_alpha_with_vbar(0.2, 0.0564)
        .and_then(|p| p.with_vbar_sq_in_denominator(true))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let full = survival_series(ContinuumSpec::Full, 0.0, 2.0, 31, &params, true, abs_tol)?;
    let spec = ContinuumSpec::LowerTruncated { omega_min: -1.0 };
    let truncated = survival_series(spec, 0.0, 2.0, 61, &trunc_params, true, abs_tol)?;
    let max_p = full
        .probabilities()
        .iter()
        .chain(truncated.probabilities())
        .fold(f64::MIN, |m, &p| m.max(p));
    sink.value("probability.max", max_p);
    sink.assert("probability.max", (0.0..=1.0 + 1e-12).contains(&max_p));

    // The log-integrability functional: bounded growth for the truncated
    // support, steady growth for the pure exponential.
    let d_eff = trunc_params.effective_half_width();
    for t_hi in [30usize, 60] {
        let idx = t_hi / 2;
        let prefix = SurvivalSeries::from_parts(
            truncated.times()[..=idx].to_vec(),
            truncated.amplitudes()[..=idx].to_vec(),
            true,
            truncated.norm(),
            spec,
            trunc_params,
        )?;
        let measured = windowed_log_functional(&prefix)?;
        let reference = exponential_log_functional(d_eff, 0.0, t_hi as f64);
        sink.value(&format!("log_functional.truncated.{t_hi}"), measured);
        sink.value(&format!("log_functional.exponential.{t_hi}"), reference);
        sink.assert(&format!("log_functional.{t_hi}"), measured < reference);
    }

    for line in &sink.lines {
        println!("{line}");
    }
    if sink.failures.is_empty() {
        println!("check.status = ok");
        Ok(())
    } else {
        println!("check.status = failed");
        Err(CliError::Numerical(format!("checks failed: {}", sink.failures.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ContinuumSpec;
    use num_complex::Complex64;

    #[test]
    fn exit_codes_follow_the_failure_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 3);
    }

    #[test]
    fn tokens_become_safe_filenames() {
        assert_eq!(sanitize_token("-0.2"), "-0.2");
        assert_eq!(sanitize_token("1e-3"), "1e-3");
        assert_eq!(sanitize_token("a/b:c d"), "a_b_c_d");
    }

    #[test]
    fn csv_uses_the_fixed_header_and_full_precision() {
        let params = ModelParams::from_alpha(0.2).unwrap();
        let series = SurvivalSeries::from_parts(
            vec![0.0, 1.0],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)],
            false,
            1.0,
            ContinuumSpec::Full,
            params,
        )
        .unwrap();
        let csv = series_csv(&series);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,re_a_raw,im_a_raw,re_a,im_a,p"));
        let row: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 6);
        assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[3].parse::<f64>().unwrap(), 0.5);
        assert_eq!(row[5].parse::<f64>().unwrap(), 0.3125);
    }

    #[test]
    fn relative_outputs_land_in_the_out_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let resolved =
            resolve_output(Path::new("sub/series.csv"), Some(tmp.path())).unwrap();
        assert_eq!(resolved, tmp.path().join("sub/series.csv"));
        assert!(resolved.parent().unwrap().is_dir(), "parent directory was created");
        let absolute = tmp.path().join("abs.csv");
        let resolved = resolve_output(&absolute, Some(Path::new("/nonexistent"))).unwrap();
        assert_eq!(resolved, absolute);
    }

    #[test]
    fn atomic_write_replaces_content_wholesale() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("file.txt");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second\n");
    }

    #[test]
    fn moment_labels_render_all_classes() {
        assert_eq!(moment_label(MomentClass::Zero), "zero");
        assert_eq!(moment_label(MomentClass::Infinite), "infinite");
        assert!(moment_label(MomentClass::Finite(0.25)).starts_with("2.5"));
    }
}
