//! Command-line front end for `sl2-core`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sl2_core::flows::{reconstruct, sample_magnetic, SampledPath, TrajectorySpec};
use sl2_core::group::{exp_algebra, iwasawa};
use sl2_core::special::{classify_one_param, deform, projected_locus, ProjectedLocus};
use sl2_core::verify::{all_passed, run_all};
use sl2_core::{AlgebraVector, GroupMatrix, StructureTables};

/// Overrides every verification tolerance when set.
pub const TOLERANCE_ENV: &str = "SL2GEO_TOLERANCE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sl2geo", version, about = "Geodesics and contact magnetic trajectories on SL(2,R)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the geodesic from the identity with initial velocity X.
    Geodesic {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Sample the contact magnetic trajectory with initial velocity X and charge q.
    Magnetic {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Print the Iwasawa coordinates of a matrix given as p11,p12,p21,p22.
    Iwasawa {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_four)]
        matrix: [f64; 4],
    },
    /// Print exp(sX) as p11,p12,p21,p22.
    Exp {
        #[arg(long = "X", allow_hyphen_values = true, value_parser = parse_three)]
        x: [f64; 3],
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        s: f64,
    },
    /// Decide whether exp(sX) is a geodesic and describe its projection.
    Classify {
        #[arg(long = "X", allow_hyphen_values = true, value_parser = parse_three)]
        x: [f64; 3],
    },
    /// Sample a trajectory of the deformed structure with curvature c < -3.
    Deform {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        q: f64,
    },
    /// Run every self-check suite and report the largest residual of each.
    Verify {
        /// Overrides every suite tolerance (takes precedence over the environment).
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Initial velocity as A,B,C frame coefficients.
    #[arg(long = "X", allow_hyphen_values = true, value_parser = parse_three)]
    pub x: Option<[f64; 3]>,
    /// Contact angle; with --B0 and --C0 gives X = (cos σ, B0, C0).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x", requires_all = ["b0", "c0"])]
    pub sigma: Option<f64>,
    #[arg(long = "B0", allow_hyphen_values = true, requires = "sigma")]
    pub b0: Option<f64>,
    #[arg(long = "C0", allow_hyphen_values = true, requires = "sigma")]
    pub c0: Option<f64>,
    /// Arclength window s_min,s_max.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_two, default_value = "0,10")]
    pub range: [f64; 2],
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl PathArgs {
    pub fn velocity(&self) -> Result<AlgebraVector> {
        match (self.x, self.sigma, self.b0, self.c0) {
            (Some(x), None, _, _) => Ok(AlgebraVector::from_array(x)),
            (None, Some(sigma), Some(b0), Some(c0)) => Ok(AlgebraVector::new(sigma.cos(), b0, c0)),
            _ => bail!("give the initial velocity as --X A,B,C or as --sigma, --B0 and --C0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form product formula.
    Closed,
    /// Lie-group integration of the reduced equations.
    Numeric,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let values: [f64; N] = values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(values)
}

fn parse_two(s: &str) -> Result<[f64; 2], String> {
    parse_list(s)
}

fn parse_three(s: &str) -> Result<[f64; 3], String> {
    parse_list(s)
}

fn parse_four(s: &str) -> Result<[f64; 4], String> {
    parse_list(s)
}

/// Echo of the effective configuration, stored with JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub velocity: [f64; 3],
    pub charge: f64,
    pub range: [f64; 2],
    pub samples: usize,
    pub holomorphic_c: Option<f64>,
    pub method: Option<Method>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// One output row; CSV columns follow the field order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SampleRow {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta_unwrapped: f64,
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
    pub A: f64,
    pub B: f64,
    pub C: f64,
}

pub const CSV_HEADER: [&str; 11] = [
    "s",
    "x",
    "y",
    "theta_unwrapped",
    "p11",
    "p12",
    "p21",
    "p22",
    "A",
    "B",
    "C",
];

impl SampleRow {
    fn values(&self) -> [f64; 11] {
        [
            self.s,
            self.x,
            self.y,
            self.theta_unwrapped,
            self.p11,
            self.p12,
            self.p21,
            self.p22,
            self.A,
            self.B,
            self.C,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonOutput {
    pub config: RunConfig,
    pub samples: Vec<SampleRow>,
}

pub fn rows(path: &SampledPath) -> Vec<SampleRow> {
    path.samples()
        .iter()
        .map(|p| {
            let [p11, p12, p21, p22] = p.g.entries();
            SampleRow {
                s: p.s,
                x: p.coords.x(),
                y: p.coords.y(),
                theta_unwrapped: p.coords.theta(),
                p11,
                p12,
                p21,
                p22,
                A: p.omega.a,
                B: p.omega.b,
                C: p.omega.c,
            }
        })
        .collect()
}

pub fn write_csv(rows: &[SampleRow], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.values().iter().map(|&v| format!("{:.16e}", if v == 0.0 { 0.0 } else { v })))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(config: &RunConfig, rows: &[SampleRow], out: &mut dyn Write) -> Result<()> {
    let doc = JsonOutput {
        config: config.clone(),
        samples: rows.to_vec(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// Shortest round-trip form, `-0` shown as `0`, scientific outside [1e-4, 1e16).
fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn emit_path(
    config: RunConfig,
    path: &SampledPath,
    stdout: &mut dyn Write,
) -> Result<()> {
    let rows = rows(path);
    let mut file;
    let out: &mut dyn Write = match &config.output {
        Some(p) => {
            file = BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            );
            &mut file
        }
        None => stdout,
    };
    match config.format {
        Format::Csv => write_csv(&rows, out)?,
        Format::Json => write_json(&config, &rows, out)?,
    }
    out.flush()?;
    Ok(())
}

fn trajectory_spec(path: &PathArgs, q: f64) -> Result<TrajectorySpec> {
    let [s_min, s_max] = path.range;
    TrajectorySpec::new(path.velocity()?, q, s_min, s_max, path.samples).map_err(|e| anyhow!(e))
}

fn config_for(
    command: &str,
    path: &PathArgs,
    spec: &TrajectorySpec,
    method: Option<Method>,
    c: Option<f64>,
) -> RunConfig {
    RunConfig {
        command: command.to_string(),
        velocity: spec.velocity.to_array(),
        charge: spec.charge,
        range: path.range,
        samples: spec.n_samples,
        holomorphic_c: c,
        method,
        format: path.format,
        output: path.output.clone(),
    }
}

fn run_path(
    command: &str,
    path: &PathArgs,
    q: f64,
    method: Method,
    stdout: &mut dyn Write,
) -> Result<()> {
    let spec = trajectory_spec(path, q)?;
    let sampled = match method {
        Method::Closed => sample_magnetic(&spec),
        Method::Numeric => reconstruct(&spec),
    }
    .map_err(|e| anyhow!(e))?;
    emit_path(config_for(command, path, &spec, Some(method), None), &sampled, stdout)
}

fn run_deform(path: &PathArgs, c: f64, q: f64, stdout: &mut dyn Write) -> Result<()> {
    let structure = deform(c).map_err(|e| anyhow!(e))?;
    let spec = trajectory_spec(path, q)?;
    let curve = structure.magnetic_curve(spec.velocity, q);
    let sampled = sl2_core::flows::sample_curve(&curve, spec.s_min, spec.s_max, spec.n_samples)
        .map_err(|e| anyhow!(e))?;
    emit_path(config_for("deform", path, &spec, None, Some(c)), &sampled, stdout)
}

fn describe_locus(locus: &ProjectedLocus) -> String {
    match *locus {
        ProjectedLocus::Circle { center_x, radius } => {
            format!("locus=Circle center_x={} radius={}", num(center_x), num(radius))
        }
        ProjectedLocus::VerticalLine => "locus=VerticalLine".to_string(),
        ProjectedLocus::Point => "locus=Point x=0 y=1".to_string(),
    }
}

/// Runs `verify` against the given tables and returns the exit code.
pub fn run_verify(tables: &StructureTables, tolerance: Option<f64>, out: &mut dyn Write) -> i32 {
    let reports = run_all(tables, tolerance);
    let mut lines = String::new();
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        lines.push_str(&format!(
            "{status} {:<36} max_residual={:.3e} tolerance={:.1e}\n",
            r.name, r.max_residual, r.tolerance
        ));
    }
    let ok = all_passed(&reports);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    lines.push_str(&format!(
        "{} suites, {} failed\n",
        reports.len(),
        failed
    ));
    // a closed pipe is not a verification failure
    let _ = out.write_all(lines.as_bytes());
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn env_tolerance() -> Result<Option<f64>> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => {
            let t: f64 = v
                .trim()
                .parse()
                .with_context(|| format!("{TOLERANCE_ENV}={v} is not a number"))?;
            if t < 0.0 || !t.is_finite() {
                bail!("{TOLERANCE_ENV} must be a non-negative number");
            }
            Ok(Some(t))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{TOLERANCE_ENV}: {e}")),
    }
}

/// Executes a parsed command. Errors map to exit code 2.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Geodesic { path, method } => run_path("geodesic", &path, 0.0, method, stdout)?,
        Command::Magnetic { path, q, method } => run_path("magnetic", &path, q, method, stdout)?,
        Command::Deform { path, c, q } => run_deform(&path, c, q, stdout)?,
        Command::Iwasawa { matrix: [a, b, c, d] } => {
            let g = GroupMatrix::new(a, b, c, d).map_err(|e| anyhow!(e))?;
            let k = iwasawa(&g);
            writeln!(stdout, "x={} y={} theta={}", num(k.x()), num(k.y()), num(k.theta()))?;
        }
        Command::Exp { x, s } => {
            let [p11, p12, p21, p22] = exp_algebra(AlgebraVector::from_array(x), s).entries();
            writeln!(
                stdout,
                "p11={} p12={} p21={} p22={}",
                num(p11),
                num(p12),
                num(p21),
                num(p22)
            )?;
        }
        Command::Classify { x } => {
            let x = AlgebraVector::from_array(x);
            if x == AlgebraVector::ZERO {
                bail!("X must be non-zero");
            }
            let class = classify_one_param(x);
            writeln!(
                stdout,
                "kind={:?} a={} b={} c={} delta={}",
                class.kind,
                num(class.abc.a),
                num(class.abc.b),
                num(class.abc.c),
                num(class.delta)
            )?;
            match projected_locus(x) {
                Ok(locus) => writeln!(stdout, "{}", describe_locus(&locus))?,
                Err(_) => writeln!(stdout, "locus=None")?,
            }
        }
        Command::Verify { tolerance } => {
            let tolerance = match tolerance {
                Some(t) => Some(t),
                None => env_tolerance()?,
            };
            return Ok(run_verify(&StructureTables::standard(), tolerance, stdout));
        }
    }
    Ok(EXIT_OK)
}

/// Parses arguments, runs, and reports errors as one line on `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_INVALID
        }
    }
}

pub fn main_stdio() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = main_with(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    code
}
