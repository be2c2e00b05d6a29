//! `pointpat` — exact Prohorov and weak-hash metrics on point patterns.
//!
//! Subcommands: `prohorov`, `weakhash`, `profile`, `converge`, `approx`.
//! Patterns are JSON files (see [`pattern`]); distances print with 15
//! significant digits. Exit codes: 0 success, 2 input error, 3 oracle
//! mismatch, 4 convergence-criteria disagreement, 5 iteration cap.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pointpat::convergence::{
    check_criterion_integrals, check_criterion_restrictions, check_criterion_sets,
    check_criterion_weakhash, select_continuity_radii, ConvergenceVerdict, MeasureSequence,
    TestFunction,
};
use pointpat::prohorov::{prohorov_distance, prohorov_oracle};
use pointpat::weakhash::{prohorov_profile, truncated_weak_hash, weak_hash_distance};
use pointpat::{approx, CountingMeasure, Point, PointSet};

mod pattern;

use pattern::{load_pattern, serialize_pattern};

const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 2 }
    }

    fn oracle_mismatch(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 3 }
    }

    fn disagreement(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 4 }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<pointpat::Error> for CliError {
    fn from(err: pointpat::Error) -> Self {
        let code = match err {
            pointpat::Error::IterationCap { .. } => 5,
            _ => 2,
        };
        Self { message: err.to_string(), code }
    }
}

#[derive(Parser)]
#[command(
    name = "pointpat",
    version,
    about = "Exact Prohorov and weak-hash metrics on point patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Prohorov distance between two pattern files.
    Prohorov {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Cross-check against the subset-enumeration oracle (small inputs).
        #[arg(long)]
        oracle: bool,
    },
    /// Weak-hash distance d#, optionally truncated to [0, R].
    Weakhash {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Integrate over [0, R] instead of [0, ∞).
        #[arg(long, value_name = "R")]
        truncate: Option<f64>,
        /// Also write the step profile as CSV.
        #[arg(long, value_name = "FILE")]
        profile: Option<PathBuf>,
    },
    /// Write the step profile CSV (shorthand for weakhash --profile).
    Profile {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Convergence diagnostics of a sequence of patterns against a target.
    Converge {
        target: PathBuf,
        #[arg(required = true)]
        terms: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        /// Continuity radii: `auto` or a comma-separated list.
        #[arg(long, default_value = "auto")]
        radii: String,
        /// Continuity sets, e.g. `ball:0,0:0.7;box:0,0:1,1`.
        #[arg(long)]
        sets: Option<String>,
    },
    /// Grid approximant with a certified truncated weak-hash error.
    Approx {
        file: PathBuf,
        /// Window radius R of the certificate.
        #[arg(long)]
        radius: f64,
        /// Error budget for the certified truncated distance.
        #[arg(long)]
        eps: f64,
        /// Starting grid spacing (default 1, halved until certified).
        #[arg(long, value_name = "H0")]
        grid: Option<f64>,
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Prohorov { file_a, file_b, oracle } => cmd_prohorov(&file_a, &file_b, oracle),
        Command::Weakhash { file_a, file_b, truncate, profile } => {
            cmd_weakhash(&file_a, &file_b, truncate, profile.as_deref())
        }
        Command::Profile { file_a, file_b, out } => {
            cmd_weakhash(&file_a, &file_b, None, Some(&out))
        }
        Command::Converge { target, terms, tol, radii, sets } => {
            cmd_converge(&target, &terms, tol, &radii, sets.as_deref())
        }
        Command::Approx { file, radius, eps, grid, out } => {
            cmd_approx(&file, radius, eps, grid, &out)
        }
    }
}

fn load_pair(file_a: &Path, file_b: &Path) -> Result<(CountingMeasure, CountingMeasure), CliError> {
    let a = load_pattern(file_a)?;
    let b = load_pattern(file_b)?;
    if a.ctx() != b.ctx() {
        return Err(CliError::input(format!(
            "{} and {} declare different dimensions or origins",
            file_a.display(),
            file_b.display()
        )));
    }
    Ok((a, b))
}

fn cmd_prohorov(file_a: &Path, file_b: &Path, oracle: bool) -> Result<(), CliError> {
    let (a, b) = load_pair(file_a, file_b)?;
    let distance = prohorov_distance(&a, &b);
    if oracle {
        match prohorov_oracle(&a, &b) {
            Ok(reference) => {
                if (distance - reference).abs() > ORACLE_TOLERANCE {
                    return Err(CliError::oracle_mismatch(format!(
                        "solver returned {} but the oracle returned {}",
                        fmt_significant(distance, 15),
                        fmt_significant(reference, 15)
                    )));
                }
            }
            Err(pointpat::Error::InstanceTooLarge { atoms, max }) => {
                eprintln!("note: oracle skipped ({atoms} atoms exceeds the {max}-atom limit)");
            }
            Err(other) => return Err(other.into()),
        }
    }
    println!("{}", fmt_significant(distance, 15));
    Ok(())
}

fn cmd_weakhash(
    file_a: &Path,
    file_b: &Path,
    truncate: Option<f64>,
    profile_out: Option<&Path>,
) -> Result<(), CliError> {
    let (a, b) = load_pair(file_a, file_b)?;
    let value = match truncate {
        Some(upper) => truncated_weak_hash(&a, &b, upper)?,
        None => weak_hash_distance(&a, &b),
    };
    if let Some(path) = profile_out {
        let csv = prohorov_profile(&a, &b).to_csv();
        std::fs::write(path, csv)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("{}", fmt_significant(value, 15));
    Ok(())
}

fn cmd_converge(
    target_path: &Path,
    term_paths: &[PathBuf],
    tol: f64,
    radii_arg: &str,
    sets_arg: Option<&str>,
) -> Result<(), CliError> {
    let target = load_pattern(target_path)?;
    let mut terms = Vec::with_capacity(term_paths.len());
    for path in term_paths {
        let term = load_pattern(path)?;
        if term.ctx() != target.ctx() {
            return Err(CliError::input(format!(
                "{} declares a different dimension or origin than the target",
                path.display()
            )));
        }
        terms.push(term);
    }
    let seq = MeasureSequence::new(target, terms)?;

    let reach = seq
        .terms()
        .iter()
        .chain(std::iter::once(seq.target()))
        .flat_map(|m| {
            m.atoms()
                .iter()
                .map(|(p, _)| seq.target().ctx().origin_distance(p).unwrap_or(0.0))
        })
        .fold(0.0f64, f64::max);
    let radii = if radii_arg == "auto" {
        select_continuity_radii(seq.target(), 3, reach + 1.0)?
    } else {
        radii_arg
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::input(format!("invalid radius `{s}`")))
            })
            .collect::<Result<Vec<f64>, CliError>>()?
    };

    let origin = seq.target().ctx().origin().clone();
    let sets: Vec<PointSet> = match sets_arg {
        Some(spec) => parse_sets(spec, seq.target().ctx().dimension())?,
        None => radii
            .iter()
            .map(|&r| PointSet::closed_ball(origin.clone(), r))
            .collect::<pointpat::Result<_>>()?,
    };

    let funcs = default_battery(&seq)?;

    let weakhash = check_criterion_weakhash(&seq, tol)?;
    let integrals = check_criterion_integrals(&seq, &funcs, tol)?;
    let restrictions = check_criterion_restrictions(&seq, &radii, tol)?;
    let sets_verdict = check_criterion_sets(&seq, &sets, tol)?;

    let verdicts = [&weakhash, &integrals, &restrictions, &sets_verdict];
    print_trace_table(&verdicts);
    for verdict in verdicts {
        println!(
            "criterion {}: {} (final {}, tol {})",
            verdict.criterion,
            if verdict.pass { "PASS" } else { "FAIL" },
            fmt_significant(*verdict.trace.last().expect("nonempty"), 6),
            fmt_significant(tol, 6),
        );
    }
    let agree = verdicts.iter().all(|v| v.pass == verdicts[0].pass);
    if agree {
        println!("agreement: all criteria agree");
        Ok(())
    } else {
        println!("agreement: criteria disagree");
        Err(CliError::disagreement(
            "the four convergence criteria disagree on this sequence",
        ))
    }
}

/// Tent functions (radius 1, height 1) centred at every atom of the
/// target and of the final term; one tent at the origin if all are empty.
fn default_battery(seq: &MeasureSequence) -> Result<Vec<TestFunction>, CliError> {
    let mut centers: Vec<Point> = seq
        .target()
        .atoms()
        .iter()
        .chain(seq.terms().last().expect("nonempty").atoms())
        .map(|(p, _)| p.clone())
        .collect();
    centers.sort();
    centers.dedup();
    if centers.is_empty() {
        centers.push(seq.target().ctx().origin().clone());
    }
    centers
        .into_iter()
        .map(|c| TestFunction::tent(c, 1.0, 1.0).map_err(CliError::from))
        .collect()
}

fn parse_sets(spec: &str, dimension: usize) -> Result<Vec<PointSet>, CliError> {
    let parse_coords = |text: &str| -> Result<Point, CliError> {
        let coords = text
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::input(format!("invalid coordinate `{c}`")))
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        if coords.len() != dimension {
            return Err(CliError::input(format!(
                "set coordinates have dimension {}, expected {dimension}",
                coords.len()
            )));
        }
        Point::new(coords).map_err(CliError::from)
    };
    spec.split(';')
        .filter(|item| !item.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.trim().split(':').collect();
            match parts.as_slice() {
                ["ball", center, radius] => {
                    let center = parse_coords(center)?;
                    let radius = radius
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::input(format!("invalid radius `{radius}`")))?;
                    PointSet::closed_ball(center, radius).map_err(CliError::from)
                }
                ["box", lo, hi] => Ok(PointSet::Box {
                    lo: parse_coords(lo)?,
                    hi: parse_coords(hi)?,
                }),
                _ => Err(CliError::input(format!(
                    "invalid set `{item}`; expected ball:<coords>:<radius> or box:<coords>:<coords>"
                ))),
            }
        })
        .collect()
}

fn print_trace_table(verdicts: &[&ConvergenceVerdict; 4]) {
    println!(
        "{:>5}  {:>13}  {:>13}  {:>13}  {:>13}",
        "term", "weak-hash", "integrals", "restrictions", "sets"
    );
    let len = verdicts[0].trace.len();
    for row in 0..len {
        println!(
            "{:>5}  {:>13}  {:>13}  {:>13}  {:>13}",
            row + 1,
            fmt_significant(verdicts[0].trace[row], 6),
            fmt_significant(verdicts[1].trace[row], 6),
            fmt_significant(verdicts[2].trace[row], 6),
            fmt_significant(verdicts[3].trace[row], 6),
        );
    }
}

fn cmd_approx(
    file: &Path,
    radius: f64,
    eps: f64,
    grid: Option<f64>,
    out: &Path,
) -> Result<(), CliError> {
    let mu = load_pattern(file)?;
    let grid = match grid {
        Some(h0) => Some(approx::GridSpec::anchored(h0, mu.ctx().origin().clone())?),
        None => None,
    };
    let result = approx::approximate(&mu, radius, eps, grid)?;
    std::fs::write(out, serialize_pattern(&result.approximant))
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", out.display())))?;
    println!("{}", fmt_significant(result.certified_error, 15));
    Ok(())
}

/// Plain-decimal formatting with the given number of significant digits,
/// trailing zeros trimmed.
fn fmt_significant(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}
