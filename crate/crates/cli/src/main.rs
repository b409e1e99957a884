//! Command-line driver: state generation, closed-path invariants, spectra,
//! verification suites, and random-state surveys.
//!
//! Subsystem labels are 1-based on the command line and become 0-based
//! indices in exactly one place, [`internal_labels`]. Every run echoes its
//! resolved configuration before any result. Exit codes: 0 on success, 1 when
//! a verification-grade claim fails, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use luinv::io::{self, fmt_g17};
use luinv::{
    haar_random_pure, invariant_report, run_suite, spectral_survey, tol, ClosedPath, Error, Result,
    Seed, State, SubsystemDims, Suite,
};

#[derive(Parser)]
#[command(
    name = "luinv",
    version,
    about = "Local-unitary invariants of multipartite states from link matrices composed along closed paths"
)]
struct Cli {
    /// Machine-readable output: one JSON object on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Haar-random pure state and write it as a JSON state file.
    Random(RandomArgs),
    /// Closed-path trace invariant of a state.
    Invariant(InvariantArgs),
    /// Eigenvalues of the path operator, exported as CSV.
    Spectrum(SpectrumArgs),
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Dominant-eigenvalue survey over random states.
    Survey(SurveyArgs),
    /// Shortcut for `verify --suite equiv`.
    Equiv(EquivArgs),
}

#[derive(Args)]
struct RandomArgs {
    /// Subsystem dimensions, comma separated (e.g. 2,3,2).
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output state file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InvariantArgs {
    /// State file produced by `random` (or written by hand).
    #[arg(long)]
    state: PathBuf,
    /// Closed path as 1-based subsystem labels (e.g. 1,2,1,2).
    #[arg(long, value_delimiter = ',', required = true)]
    path: Vec<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    state: PathBuf,
    /// Closed path as 1-based subsystem labels.
    #[arg(long, value_delimiter = ',', required = true)]
    path: Vec<usize>,
    /// Output CSV file (columns k, re, im).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: all, prop1, prop2, equiv, separable, realign.
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SurveyArgs {
    /// Subsystem dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes PREFIX.csv and PREFIX.json.
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Random(a) => cmd_random(a, cli.json),
        Command::Invariant(a) => cmd_invariant(a, cli.json),
        Command::Spectrum(a) => cmd_spectrum(a, cli.json),
        Command::Verify(a) => cmd_verify(a.suite, a.trials, a.seed, cli.json),
        Command::Survey(a) => cmd_survey(a, cli.json),
        Command::Equiv(a) => cmd_verify(Suite::Bridge, a.trials, a.seed, cli.json),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Verification-grade failures exit 1; everything else is a usage or input
/// problem and exits 2.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) | Error::NonConvergence(_) => 1,
        _ => 2,
    }
}

/// The single 1-based -> 0-based boundary for subsystem labels.
fn internal_labels(cli_labels: &[usize]) -> Result<Vec<usize>> {
    cli_labels
        .iter()
        .map(|&l| {
            l.checked_sub(1).ok_or_else(|| {
                Error::InvalidLabel(format!(
                    "subsystem labels are 1-based on the command line, got {l}"
                ))
            })
        })
        .collect()
}

fn seq(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("plain data serializes")
    );
}

fn cmd_random(a: &RandomArgs, json: bool) -> Result<ExitCode> {
    let dims = SubsystemDims::new(a.dims.clone())?;
    let psi = haar_random_pure(&dims, Seed(a.seed));
    let n = psi.amp().len();
    io::write_state(&a.out, &State::Pure(psi))?;
    if json {
        print_json(&json!({
            "config": {"command": "random", "dims": a.dims, "seed": a.seed, "out": a.out},
            "amplitudes": n,
        }));
    } else {
        println!(
            "config  command=random  dims=({})  seed={}  out={}",
            seq(&a.dims),
            a.seed,
            a.out.display()
        );
        println!("wrote {n}-amplitude pure state to {}", a.out.display());
    }
    Ok(ExitCode::SUCCESS)
}

/// Shared by `invariant` and `spectrum`: load, validate, report.
fn load_report(
    state_path: &Path,
    cli_path: &[usize],
) -> Result<(State, ClosedPath, luinv::InvariantReport)> {
    let state = io::read_state(state_path)?;
    let path = ClosedPath::new(internal_labels(cli_path)?)?;
    path.validate_for(state.dims())?;
    let report = invariant_report(&state, &path)?;
    Ok((state, path, report))
}

fn echo_report_config(command: &str, a_state: &Path, state: &State, cli_path: &[usize]) {
    println!(
        "config  command={command}  state={}  dims=({})  path=({})  tol.trace_imag_rel={}  tol.conj_pairing={}  tol.charpoly_imag={}  tol.retrace_min_eig={}",
        a_state.display(),
        seq(state.dims().as_slice()),
        seq(cli_path),
        fmt_g17(tol::TRACE_IMAG_REL),
        fmt_g17(tol::CONJ_PAIRING),
        fmt_g17(tol::CHARPOLY_IMAG),
        fmt_g17(tol::RETRACE_MIN_EIG),
    );
}

fn report_config_json(
    command: &str,
    a_state: &Path,
    state: &State,
    cli_path: &[usize],
) -> serde_json::Value {
    json!({
        "command": command,
        "state": a_state,
        "dims": state.dims().as_slice(),
        "path": cli_path,
        "tolerances": {
            "trace_imag_rel": tol::TRACE_IMAG_REL,
            "conj_pairing": tol::CONJ_PAIRING,
            "charpoly_imag": tol::CHARPOLY_IMAG,
            "retrace_min_eig": tol::RETRACE_MIN_EIG,
        },
    })
}

fn print_report_lines(report: &luinv::InvariantReport) {
    println!("trace = {}", fmt_g17(report.trace));
    println!("imag_residue = {}", fmt_g17(report.trace_imag_residue));
    println!("retracing = {}", report.retracing);
    match report.positive {
        Some(p) => println!("positive = {p}"),
        None => println!("positive = n/a"),
    }
}

fn cmd_invariant(a: &InvariantArgs, json: bool) -> Result<ExitCode> {
    let (state, _path, report) = load_report(&a.state, &a.path)?;
    if json {
        print_json(&json!({
            "config": report_config_json("invariant", &a.state, &state, &a.path),
            "trace": report.trace,
            "imag_residue": report.trace_imag_residue,
            "retracing": report.retracing,
            "positive": report.positive,
        }));
    } else {
        echo_report_config("invariant", &a.state, &state, &a.path);
        print_report_lines(&report);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(a: &SpectrumArgs, json: bool) -> Result<ExitCode> {
    let (state, _path, report) = load_report(&a.state, &a.path)?;
    std::fs::write(&a.out, io::spectrum_csv(&report.eigenvalues))?;
    if json {
        let eigs: Vec<[f64; 2]> = report.eigenvalues.iter().map(|e| [e.re, e.im]).collect();
        print_json(&json!({
            "config": report_config_json("spectrum", &a.state, &state, &a.path),
            "trace": report.trace,
            "imag_residue": report.trace_imag_residue,
            "retracing": report.retracing,
            "positive": report.positive,
            "eigenvalues": eigs,
            "out": a.out,
        }));
    } else {
        echo_report_config("spectrum", &a.state, &state, &a.path);
        print_report_lines(&report);
        println!(
            "wrote {} eigenvalue rows to {}",
            report.eigenvalues.len(),
            a.out.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: Suite, trials: usize, seed: u64, json: bool) -> Result<ExitCode> {
    let checks = run_suite(suite, trials, Seed(seed))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if json {
        print_json(&json!({
            "config": {"command": "verify", "suite": suite.to_string(), "trials": trials, "seed": seed},
            "checks": checks,
            "passed": failed == 0,
        }));
    } else {
        println!("config  command=verify  suite={suite}  trials={trials}  seed={seed}");
        for c in &checks {
            println!(
                "{} {:<34} max_violation={}  trials={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt_g17(c.max_violation),
                c.trials
            );
        }
        println!(
            "{} checks, {} passed, {} failed",
            checks.len(),
            checks.len() - failed,
            failed
        );
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_survey(a: &SurveyArgs, json: bool) -> Result<ExitCode> {
    let dims = SubsystemDims::new(a.dims.clone())?;
    let survey = spectral_survey(&dims, a.samples, Seed(a.seed))?;
    for f in &survey.summary.failures {
        eprintln!("sample {} failed: {}", f.sample_index, f.message);
    }
    let csv_path = format!("{}.csv", a.out);
    let json_path = format!("{}.json", a.out);
    std::fs::write(&csv_path, survey.csv())?;
    std::fs::write(&json_path, survey.summary_json()?)?;
    let s = &survey.summary;
    if json {
        print_json(&json!({
            "config": {
                "command": "survey", "dims": a.dims, "samples": a.samples, "seed": a.seed,
                "out": a.out,
                "tolerances": {
                    "dominance_separation": tol::DOMINANCE_SEPARATION,
                    "dominant_real_rel": tol::DOMINANT_REAL_REL,
                },
            },
            "summary": s,
            "csv": csv_path,
        }));
    } else {
        println!(
            "config  command=survey  dims=({})  samples={}  seed={}  out={}  tol.dominance_separation={}  tol.dominant_real_rel={}",
            seq(&a.dims),
            a.samples,
            a.seed,
            a.out,
            fmt_g17(tol::DOMINANCE_SEPARATION),
            fmt_g17(tol::DOMINANT_REAL_REL),
        );
        println!("succeeded = {}  failed = {}", s.succeeded, s.failed);
        println!(
            "strictly_dominant = {}  dominant_real_fraction = {}",
            s.strictly_dominant_count,
            fmt_g17(s.dominant_real_fraction)
        );
        println!("mean_dominance_ratio = {}", fmt_g17(s.mean_dominance_ratio));
        println!(
            "mean_abs_diag = {}  predicted = {}",
            fmt_g17(s.mean_abs_diag),
            fmt_g17(s.predicted_abs_diag)
        );
        match s.predicted_abs_offdiag {
            Some(p) => println!(
                "mean_abs_offdiag = {}  predicted = {}",
                fmt_g17(s.mean_abs_offdiag),
                fmt_g17(p)
            ),
            None => println!(
                "mean_abs_offdiag = {}  predicted = n/a",
                fmt_g17(s.mean_abs_offdiag)
            ),
        }
        println!("wrote {csv_path} and {json_path}");
    }
    // per-sample failures are tolerated up to one percent
    let ok = (s.failed as f64) <= 0.01 * (a.samples as f64);
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
