//! Command-line front end: configure states and campaigns, run the engine,
//! export grids and reports.
//!
//! Exit codes: 0 on success, 1 on validation/usage errors, 2 on
//! numerical-tolerance failures (e.g. an imaginary-residue violation) and
//! I/O errors.

use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use wigtomo_core::campaign::{reconstruct, CampaignMode, CampaignPlan};
use wigtomo_core::protocol::{
    autocorrelation, calibrate_sign, OscillatorParams, MEASURED_SIGN,
};
use wigtomo_core::quasiprob::{
    evaluate_grid, pure_state_form, GridSpec, SParameter, State,
};
use wigtomo_core::TruncatedFockSpace;

pub mod complex;
pub mod export;
pub mod statespec;

use complex::{format_complex, parse_complex};
use export::{fmt_sig17, Format};
use statespec::StateSpec;

/// Environment variable naming a directory that relative `--out`/`--report`
/// paths are resolved against.
pub const OUTPUT_DIR_ENV: &str = "WIGTOMO_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(wigtomo_core::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => {
                if e.is_tolerance_failure() {
                    2
                } else {
                    1
                }
            }
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<wigtomo_core::Error> for CliError {
    fn from(e: wigtomo_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "wigtomo",
    version,
    about = "Quasiprobability distributions and autocorrelation-based Wigner reconstruction \
             for a truncated harmonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F(alpha, s) at a point or over a grid
    Qdist(QdistArgs),
    /// Reconstruct a Wigner map by running the protocol once per grid point
    Reconstruct(ReconstructArgs),
    /// Sweep the autocorrelation function over time
    Autocorr(AutocorrArgs),
    /// Print the calibrated drive-to-point sign and its evidence table
    CalibrateSign(CalibrateSignArgs),
}

#[derive(Args)]
struct QdistArgs {
    /// State descriptor: fock:N, coherent:Z, cat-even:Z, cat-odd:Z,
    /// superposition:Z0,Z1,...
    #[arg(long)]
    state: String,
    /// Distribution parameter (s < 1; -1 Husimi, 0 Wigner)
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Single evaluation point, complex (conflicts with --grid)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    alpha: Option<String>,
    /// Grid spec re_min:re_max:count,im_min:im_max:count (inclusive endpoints)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Fock dimension override (default: chosen from the adequacy rule)
    #[arg(long)]
    dim: Option<usize>,
    /// Output file (grid mode; default stdout)
    #[arg(long)]
    out: Option<String>,
    /// Output format: csv, json, or pgm
    #[arg(long, default_value = "csv")]
    format: String,
    /// Scale PGM pixels to the map's own range instead of [-2/pi, 2/pi]
    #[arg(long)]
    pgm_autoscale: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    /// State descriptor (see qdist)
    #[arg(long)]
    state: String,
    /// Oscillator angular frequency
    #[arg(long, default_value = "1")]
    omega: f64,
    /// Grid spec re_min:re_max:count,im_min:im_max:count
    #[arg(long, allow_hyphen_values = true, default_value = "-3:3:41,-3:3:41")]
    grid: String,
    /// Measurement mode: exact or shots
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Shots per grid point (shot mode)
    #[arg(long, default_value = "10000")]
    shots: u64,
    /// Base seed; per-point seeds are base XOR point index
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Fock dimension override
    #[arg(long)]
    dim: Option<usize>,
    /// Output file for the reconstructed map (default stdout)
    #[arg(long)]
    out: Option<String>,
    /// Output format: csv, json, or pgm
    #[arg(long, default_value = "csv")]
    format: String,
    /// Also write a full JSON report (both maps plus error metrics) here
    #[arg(long)]
    report: Option<String>,
    /// Scale PGM pixels to the map's own range instead of [-2/pi, 2/pi]
    #[arg(long)]
    pgm_autoscale: bool,
}

#[derive(Args)]
struct AutocorrArgs {
    /// State descriptor (see qdist)
    #[arg(long)]
    state: String,
    /// Oscillator angular frequency
    #[arg(long, default_value = "1")]
    omega: f64,
    /// Drive amplitude, complex
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Sweep end time (default: one period, 2 pi / omega)
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of samples, endpoints inclusive
    #[arg(long, default_value = "201")]
    t_steps: usize,
    /// Fock dimension override
    #[arg(long)]
    dim: Option<usize>,
    /// Output file (default stdout)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CalibrateSignArgs {
    /// Fock dimension for the calibration probes
    #[arg(long, default_value = "64")]
    dim: usize,
}

/// Run the CLI on an argv-style iterator (first element is the program name)
/// and return the process exit code.
pub fn run_cli<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
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
    let result = match cli.command {
        Command::Qdist(args) => run_qdist(args),
        Command::Reconstruct(args) => run_reconstruct(args),
        Command::Autocorr(args) => run_autocorr(args),
        Command::CalibrateSign(args) => run_calibrate(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "axis '{s}' must be min:max:count"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad axis minimum '{}'", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad axis maximum '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad axis count '{}'", parts[2])))?;
    Ok((min, max, count))
}

fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let (re, im) = s.split_once(',').ok_or_else(|| {
        CliError::Usage(format!(
            "grid '{s}' must be re_min:re_max:count,im_min:im_max:count"
        ))
    })?;
    let (re_min, re_max, re_count) = parse_axis(re)?;
    let (im_min, im_max, im_count) = parse_axis(im)?;
    Ok(GridSpec::new(
        re_min, re_max, re_count, im_min, im_max, im_count,
    )?)
}

fn parse_state(s: &str, dim_override: Option<usize>) -> Result<StateSpec, CliError> {
    let mut spec = StateSpec::parse(s).map_err(CliError::Usage)?;
    spec.dim_override = dim_override;
    Ok(spec)
}

fn resolve_out(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(p);
            }
        }
    }
    p
}

fn with_output(
    path: Option<&str>,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = File::create(resolve_out(p))?;
            let mut buf = BufWriter::new(file);
            f(&mut buf)?;
            buf.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
        }
    }
    Ok(())
}

fn export_map(
    map: &wigtomo_core::QuasiDistributionMap,
    stderr: Option<&[f64]>,
    format: Format,
    autoscale: bool,
    out: Option<&str>,
) -> Result<(), CliError> {
    with_output(out, |w| match format {
        Format::Csv => export::write_map_csv(map, stderr, w),
        Format::Json => export::write_map_json(map, stderr, w),
        Format::Pgm => export::write_map_pgm(map, autoscale, w),
    })
}

fn run_qdist(args: QdistArgs) -> Result<(), CliError> {
    let spec = parse_state(&args.state, args.dim)?;
    let s_value: f64 = args
        .s
        .parse()
        .map_err(|_| CliError::Usage(format!("bad s value '{}'", args.s)))?;
    let s = SParameter::new(s_value)?;
    let format = Format::parse(&args.format).map_err(CliError::Usage)?;

    match (&args.alpha, &args.grid) {
        (Some(alpha_str), None) => {
            let alpha = parse_complex(alpha_str).map_err(CliError::Usage)?;
            let space = TruncatedFockSpace::new(spec.static_dim(alpha.norm()))?;
            let psi = spec.build(space)?;
            let value = pure_state_form(&psi, alpha, s)?;
            println!("{value:.9}");
            Ok(())
        }
        (None, Some(grid_str)) => {
            let grid = parse_grid(grid_str)?;
            let space = TruncatedFockSpace::new(spec.static_dim(grid.worst_corner().norm()))?;
            let psi = spec.build(space)?;
            let mut map = evaluate_grid(&State::Pure(psi), s, &grid)?;
            map.meta.state = spec.label().to_string();
            export_map(&map, None, format, args.pgm_autoscale, args.out.as_deref())
        }
        _ => Err(CliError::Usage(
            "qdist needs exactly one of --alpha or --grid".into(),
        )),
    }
}

fn run_reconstruct(args: ReconstructArgs) -> Result<(), CliError> {
    let spec = parse_state(&args.state, args.dim)?;
    let grid = parse_grid(&args.grid)?;
    let format = Format::parse(&args.format).map_err(CliError::Usage)?;
    let mode = match args.mode.as_str() {
        "exact" => CampaignMode::Exact,
        "shots" => CampaignMode::Shots { shots: args.shots },
        other => {
            return Err(CliError::Usage(format!(
                "unknown mode '{other}' (expected exact or shots)"
            )))
        }
    };
    if args.omega <= 0.0 || !args.omega.is_finite() {
        return Err(CliError::Core(wigtomo_core::Error::InvalidFrequency {
            omega: args.omega,
        }));
    }

    let excursion = grid.worst_corner().norm();
    let space = TruncatedFockSpace::new(spec.dynamic_dim(excursion))?;
    let psi = spec.build(space)?;
    let plan = CampaignPlan {
        grid,
        omega: args.omega,
        state_label: spec.label().to_string(),
        mode,
        base_seed: args.seed,
    };
    let report = reconstruct(&plan, &psi)?;

    // Summary goes to stderr so piped map data stays clean.
    eprintln!("points {}", grid.len());
    eprintln!("dim {}", space.dim());
    eprintln!("max_abs_error {}", fmt_sig17(report.max_abs_error));
    eprintln!("rms_error {}", fmt_sig17(report.rms_error));

    export_map(
        &report.reconstructed,
        report.stderr_map.as_deref(),
        format,
        args.pgm_autoscale,
        args.out.as_deref(),
    )?;
    if let Some(report_path) = &args.report {
        with_output(Some(report_path), |w| export::write_report_json(&report, w))?;
    }
    Ok(())
}

fn run_autocorr(args: AutocorrArgs) -> Result<(), CliError> {
    let spec = parse_state(&args.state, args.dim)?;
    let beta = parse_complex(&args.beta).map_err(CliError::Usage)?;
    if args.omega <= 0.0 || !args.omega.is_finite() {
        return Err(CliError::Core(wigtomo_core::Error::InvalidFrequency {
            omega: args.omega,
        }));
    }
    if args.t_steps == 0 {
        return Err(CliError::Usage("t-steps must be at least 1".into()));
    }
    let t_max = args.t_max.unwrap_or(2.0 * PI / args.omega);
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(CliError::Usage(format!("bad t-max {t_max}")));
    }

    let params = OscillatorParams::new(args.omega, beta)?;
    let space = TruncatedFockSpace::new(
        spec.dynamic_dim(params.drive_displacement().norm()),
    )?;
    let psi = spec.build(space)?;

    let samples: Result<Vec<_>, _> = (0..args.t_steps)
        .map(|k| {
            let t = if args.t_steps == 1 {
                0.0
            } else {
                t_max * k as f64 / (args.t_steps - 1) as f64
            };
            autocorrelation(&psi, &params, t)
        })
        .collect();
    let samples = samples?;

    with_output(args.out.as_deref(), |w| {
        writeln!(w, "t,re_value,im_value,re_corrected,im_corrected")?;
        for s in &samples {
            writeln!(
                w,
                "{},{},{},{},{}",
                s.t,
                fmt_sig17(s.value.re),
                fmt_sig17(s.value.im),
                fmt_sig17(s.phase_corrected.re),
                fmt_sig17(s.phase_corrected.im)
            )?;
        }
        Ok(())
    })
}

fn run_calibrate(args: CalibrateSignArgs) -> Result<(), CliError> {
    let space = TruncatedFockSpace::new(args.dim)?;
    let cal = calibrate_sign(space)?;
    println!(
        "{:<16} {:<12} {:>14} {:>14} {:>14}  match",
        "state", "beta", "protocol", "W(+d)", "W(-d)"
    );
    for e in &cal.evidence {
        let verdict = match (e.matches_plus, e.matches_minus) {
            (true, false) => "+",
            (false, true) => "-",
            (true, true) => "both",
            (false, false) => "none",
        };
        println!(
            "{:<16} {:<12} {:>14.9} {:>14.9} {:>14.9}  {}",
            e.state,
            format_complex(e.beta),
            e.protocol_value,
            e.wigner_plus,
            e.wigner_minus,
            verdict
        );
    }
    println!("sign {}", cal.sign);
    if cal.sign != MEASURED_SIGN {
        return Err(CliError::Core(wigtomo_core::Error::CalibrationFailed {
            reason: format!(
                "calibration produced {} but the frozen constant is {}",
                cal.sign, MEASURED_SIGN
            ),
        }));
    }
    Ok(())
}
