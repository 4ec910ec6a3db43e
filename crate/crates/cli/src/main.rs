use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use hamrecon::coeffs::{check_conditions, ConditionReport};
use hamrecon::format::{ball_to_doc, function_from_doc, function_to_doc, sphere_from_doc, sphere_to_doc, FunctionDoc};
use hamrecon::krawtchouk::KrawtchoukTable;
use hamrecon::local_dist::{local_distribution, transfer_orthogonal};
use hamrecon::recon::{
    reconstruct_ball_with, reconstruct_full_with, BallData, EtaRoute, ReconOptions, SphereData, DEFAULT_TOLERANCE,
};
use hamrecon::spectral::random_eigenfunction;
use hamrecon::{Error, IndexSet, SchemeParams};

const EXIT_FAIL: u8 = 1;
const EXIT_CONDITIONS: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "hamrecon", version, about = "Reconstruct Hamming graph eigenfunctions from sphere samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ball,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the reconstruction conditions exactly and print a JSON report
    Check {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
    },
    /// CSV of the condition check over every h and d <= h of a (q, n) grid
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Write a seeded random eigenfunction, or its sphere values with --d
    Generate {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        d: Option<usize>,
        /// defaults to standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recover the ball (or the whole function) from sphere values
    Reconstruct {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// obtain face sums through the transfer coefficients
        #[arg(long)]
        oracle_eta: bool,
        /// eigenvalue index, if the input does not record it
        #[arg(long)]
        h: Option<usize>,
        /// sphere radius, if the input does not record it
        #[arg(long)]
        d: Option<usize>,
    },
    /// Mask a seeded eigenfunction to a sphere, reconstruct, report the error
    Verify {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Krawtchouk values P_i(t; n) as CSV, rows i and columns t
    KrawtchoukDump {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
    },
    /// Local distribution of a function in a face, as JSON
    LocalDist {
        #[arg(long)]
        input: PathBuf,
        /// free positions, 1-based, e.g. 1,3
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        face: Vec<usize>,
        #[arg(long)]
        anchor: String,
        /// also predict the orthogonal face from the eigenvalue index
        #[arg(long)]
        h: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Conditions(Box<ConditionReport>),
    Inconsistent(String),
    Unsolvable(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConditionFailure(report) => Failure::Conditions(report),
            e @ Error::InconsistentData { .. } => Failure::Inconsistent(e.to_string()),
            e @ (Error::OriginCondition { .. } | Error::SingularLayer { .. }) => Failure::Unsolvable(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<ExitCode, Failure>;

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn emit(output: Option<&Path>, text: &str) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
    }
}

fn check_tolerance(tolerance: f64) -> std::result::Result<(), Failure> {
    if tolerance > 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("tolerance must be positive, got {tolerance}")))
    }
}

fn check_radius(d: usize, h: usize) -> std::result::Result<(), Failure> {
    if d > h {
        return Err(Failure::Usage(format!("d = {d} exceeds h = {h}")));
    }
    Ok(())
}

fn run_check(q: usize, n: usize, h: usize, d: usize) -> Outcome {
    SchemeParams::new(q, n)?;
    check_radius(d, h)?;
    let report = check_conditions(q, n, h, d)?;
    emit(None, &report.to_json().to_string())?;
    Ok(ExitCode::from(if report.pass { 0 } else { EXIT_CONDITIONS }))
}

fn sweep_row(q: usize, n: usize, h: usize, d: usize) -> hamrecon::Result<String> {
    let report = check_conditions(q, n, h, d)?;
    let (status, k, l) = if report.pass {
        ("pass", String::new(), String::new())
    } else if !report.origin_pass() {
        ("fail-origin", String::new(), String::new())
    } else {
        let f = report.first_failure().expect("a failing layer");
        ("fail-layer", f.k.to_string(), f.l.to_string())
    };
    Ok(format!("{q},{n},{h},{d},{status},{k},{l},{}", report.origin_value))
}

fn run_sweep(qs: &[usize], ns: &[usize]) -> Outcome {
    let mut cells = Vec::new();
    let mut qs = qs.to_vec();
    let mut ns = ns.to_vec();
    qs.sort_unstable();
    qs.dedup();
    ns.sort_unstable();
    ns.dedup();
    for &q in &qs {
        for &n in &ns {
            SchemeParams::new(q, n)?;
            for h in 0..=n {
                for d in 0..=h {
                    cells.push((q, n, h, d));
                }
            }
        }
    }
    let rows = cells
        .par_iter()
        .map(|&(q, n, h, d)| sweep_row(q, n, h, d))
        .collect::<hamrecon::Result<Vec<_>>>()?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "q,n,h,d,status,first_k,first_l,origin_value")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_generate(q: usize, n: usize, h: usize, seed: u64, d: Option<usize>, output: Option<&Path>) -> Outcome {
    let params = SchemeParams::new(q, n)?;
    let f = random_eigenfunction(&params, h, seed)?;
    let doc = match d {
        Some(d) => {
            check_radius(d, h)?;
            sphere_to_doc(&SphereData::from_function(&f, d)?, Some(h))
        }
        None => function_to_doc(&f),
    };
    emit(output, &doc.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn reconstruct_options(tolerance: f64, oracle_eta: bool) -> ReconOptions {
    ReconOptions {
        tolerance,
        eta: if oracle_eta { EtaRoute::Transfer } else { EtaRoute::ClosedForm },
        ..Default::default()
    }
}

#[allow(clippy::too_many_arguments)]
fn run_reconstruct(
    mode: Mode,
    input: &Path,
    output: Option<&Path>,
    tolerance: f64,
    oracle_eta: bool,
    h: Option<usize>,
    d: Option<usize>,
) -> Outcome {
    check_tolerance(tolerance)?;
    let doc = FunctionDoc::from_json(&fs::read_to_string(input)?)?;
    let sphere = sphere_from_doc(&doc, d)?;
    let opts = reconstruct_options(tolerance, oracle_eta);
    let text = match mode {
        Mode::Ball => {
            let h = h.or(doc.eigenindex).ok_or_else(|| {
                Failure::Usage("the eigenvalue index is needed: pass --h or record \"eigenindex\"".into())
            })?;
            check_radius(sphere.radius(), h)?;
            let ball = reconstruct_ball_with(&sphere, h, &opts)?;
            ball_to_doc(&ball, Some(h)).to_json()
        }
        Mode::Full => {
            let h = h.or(doc.eigenindex).unwrap_or(sphere.radius());
            if h != sphere.radius() {
                return Err(Failure::Usage(format!(
                    "full reconstruction needs the sphere of radius h = {h}, got radius {}",
                    sphere.radius()
                )));
            }
            function_to_doc(&reconstruct_full_with(&sphere, &opts)?).to_json()
        }
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    q: usize,
    n: usize,
    h: usize,
    d: usize,
    seed: u64,
    compared: usize,
    max_abs_error: f64,
    max_rel_error: f64,
    tolerance: f64,
    pass: bool,
}

fn errors(pairs: impl Iterator<Item = (Complex64, Complex64)>) -> (usize, f64, f64) {
    let (mut count, mut err, mut scale) = (0, 0.0f64, 0.0f64);
    for (got, expect) in pairs {
        count += 1;
        err = err.max((got - expect).norm());
        scale = scale.max(expect.norm());
    }
    let rel = if scale > 0.0 { err / scale } else { err };
    (count, err, rel)
}

#[allow(clippy::too_many_arguments)]
fn run_verify(mode: Mode, q: usize, n: usize, h: usize, d: Option<usize>, seed: u64, tolerance: f64) -> Outcome {
    check_tolerance(tolerance)?;
    let params = SchemeParams::new(q, n)?;
    if h > n {
        return Err(Failure::Usage(format!("h = {h} exceeds n = {n}")));
    }
    let d = match (mode, d) {
        (Mode::Full, Some(d)) if d != h => {
            return Err(Failure::Usage(format!("full reconstruction uses d = h, got d = {d}")));
        }
        (_, Some(d)) => d,
        (_, None) => h,
    };
    check_radius(d, h)?;
    let started = Instant::now();
    let f = random_eigenfunction(&params, h, seed)?;
    let sphere = SphereData::from_function(&f, d)?;
    let opts = reconstruct_options(tolerance, false);
    let (label, (compared, max_abs_error, max_rel_error)) = match mode {
        Mode::Ball => {
            let ball = reconstruct_ball_with(&sphere, h, &opts)?;
            let truth = BallData::from_function(&f, d)?;
            let ranks = truth.ranks();
            let pairs = ranks.iter().map(|&r| {
                let w = params.word(r);
                (ball.get(&w).expect("in the ball"), truth.get(&w).expect("in the ball"))
            });
            ("ball", errors(pairs))
        }
        Mode::Full => {
            let g = reconstruct_full_with(&sphere, &opts)?;
            ("full", errors(g.values().iter().copied().zip(f.values().iter().copied())))
        }
    };
    let pass = max_rel_error <= tolerance;
    let report = VerifyReport {
        mode: label,
        q,
        n,
        h,
        d,
        seed,
        compared,
        max_abs_error,
        max_rel_error,
        tolerance,
        pass,
    };
    emit(None, &json_line(&report))?;
    eprintln!("wall time: {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
    Ok(ExitCode::from(if pass { 0 } else { EXIT_FAIL }))
}

fn run_krawtchouk_dump(q: usize, n: usize) -> Outcome {
    let table = KrawtchoukTable::new(q, n)?;
    let mut out = std::io::stdout().lock();
    write!(out, "{}", table.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Component {
    j: usize,
    re: f64,
    im: f64,
}

fn components(values: &[Complex64]) -> Vec<Component> {
    values
        .iter()
        .enumerate()
        .map(|(j, v)| Component { j, re: v.re, im: v.im })
        .collect()
}

fn run_local_dist(input: &Path, face: &[usize], anchor: &str, h: Option<usize>) -> Outcome {
    let doc = FunctionDoc::from_json(&fs::read_to_string(input)?)?;
    let f = function_from_doc(&doc)?;
    let params = *f.params();
    let face = IndexSet::new(params.n(), face)?;
    let anchor = params.parse_word(anchor)?;
    let dist = local_distribution(&f, &face, &anchor)?;
    let mut report = serde_json::json!({
        "face": face.positions(),
        "anchor": anchor.to_string(),
        "components": components(dist.components()),
    });
    if let Some(h) = h.or(doc.eigenindex) {
        let other = transfer_orthogonal(&dist, h)?;
        report["h"] = h.into();
        report["orthogonal"] = serde_json::json!({
            "face": other.face().positions(),
            "components": components(other.components()),
        });
    }
    emit(None, &report.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { q, n, h, d } => run_check(q, n, h, d),
        Command::Sweep { q, n } => run_sweep(&q, &n),
        Command::Generate { q, n, h, seed, d, output } => run_generate(q, n, h, seed, d, output.as_deref()),
        Command::Reconstruct {
            mode,
            input,
            output,
            tolerance,
            oracle_eta,
            h,
            d,
        } => run_reconstruct(mode, &input, output.as_deref(), tolerance, oracle_eta, h, d),
        Command::Verify {
            mode,
            q,
            n,
            h,
            d,
            seed,
            tolerance,
        } => run_verify(mode, q, n, h, d, seed, tolerance),
        Command::KrawtchoukDump { q, n } => run_krawtchouk_dump(q, n),
        Command::LocalDist { input, face, anchor, h } => run_local_dist(&input, &face, &anchor, h),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `hamrecon --help` for usage");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Conditions(report)) => {
            eprintln!("{}", report.to_json());
            ExitCode::from(EXIT_CONDITIONS)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INCONSISTENT)
        }
        Err(Failure::Unsolvable(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONDITIONS)
        }
    }
}
