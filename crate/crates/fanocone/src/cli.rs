//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use fanocone_core::character::{sufficient_bound, CharacterFormula};
use fanocone_core::degeneration::{min_composition_k, two_step_limit};
use fanocone_core::futaki::futaki_exact;
use fanocone_core::volume::normalized_volume_of;
use fanocone_core::{
    additivity, build_volume_form, classify_regularity, composed_equals_two_step, futaki_with, index_character,
    is_ksemistable, leading_coefficient, limit, log_discrepancy, minimize, mu_weight, normalize_config,
    normalized_volume, validate, vol, Error, FutakiMethod, MinimizeOptions, Number, ProductTestConfig, RationalVector,
    ReebVector, Regularity, ToricConeData, Verdict,
};

use crate::format::*;
use crate::record::{input_hash, RunRecord};

#[derive(Debug, Parser)]
#[command(
    name = "fanocone",
    version,
    about = "Normalized volumes, Futaki invariants and K-semistability of toric cones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Input JSON document; stdin when absent or `-`.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write a run record (command, input hash, output, timing) here.
    #[arg(long, value_name = "FILE")]
    pub record: Option<PathBuf>,
    /// Exact rational arithmetic; numbers are printed as "p/q" strings.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume of a Reeb vector.
    Vol {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Log discrepancy, volume and normalized volume of a Reeb vector.
    Hvol {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// Minimize the normalized volume over the Reeb cone.
    Minimize {
        #[command(flatten)]
        io: Io,
        /// Gradient tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        /// CSV file for a scan of the normalized volume along --segment.
        #[arg(long, value_name = "FILE", requires = "segment")]
        csv: Option<PathBuf>,
        /// Segment endpoints `a:b`, each a comma-separated vector.
        #[arg(long, requires = "csv", allow_hyphen_values = true)]
        segment: Option<String>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Decide whether xi0 minimizes the normalized volume.
    Ksemistable {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        xi0: String,
        /// Distance between slice-normalized xi0 and the minimizer.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Futaki invariant of the product configuration generated by eta.
    Futaki {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        xi0: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long, value_enum, default_value_t = Method::Analytic)]
        method: Method,
    },
    /// Index character samples and their leading coefficient.
    IndexChar {
        #[command(flatten)]
        io: Io,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Also evaluate the truncated lattice sum at this t.
        #[arg(long)]
        t: Option<f64>,
        /// Truncation cutoff on <alpha, xi>; chosen automatically when absent.
        #[arg(long, requires = "t")]
        bound: Option<f64>,
        /// CSV file of (t, t^n F) pairs.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Multiplicity and log canonical threshold of a monomial ideal.
    Lct {
        #[command(flatten)]
        io: Io,
    },
    /// Limits of a toy point under two commuting one-parameter subgroups.
    DegenerateToy {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Analytic,
    FiniteDifference,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    InvalidJson(String),
    InputUnreadable(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "UsageError",
            CliError::InvalidJson(_) => "InvalidJson",
            CliError::InputUnreadable(_) => "InputUnreadable",
            CliError::Io(_) => "IoError",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(s) | CliError::InvalidJson(s) | CliError::InputUnreadable(s) | CliError::Io(s) => s.clone(),
        }
    }

    /// 2 for bad input, 1 when a computation on valid input failed to
    /// produce a certified answer or output could not be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::BoundaryEscape
                | Error::NotConverged { .. }
                | Error::ExtrapolationDiverged
                | Error::VolumeMismatch { .. },
            )
            | CliError::Io(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.code(), "detail": self.detail() })
    }
}

type Res<T> = Result<T, CliError>;

struct Run {
    command: &'static str,
    params: serde_json::Value,
    output: serde_json::Value,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> Res<Vec<u8>> {
    match io.input.as_deref() {
        Some(p) if p != Path::new("-") => {
            std::fs::read(p).map_err(|e| CliError::InputUnreadable(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf).map_err(|e| CliError::InputUnreadable(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_json<'a, T: serde::Deserialize<'a>>(bytes: &'a [u8]) -> Res<T> {
    serde_json::from_slice(bytes).map_err(|e| CliError::InvalidJson(e.to_string()))
}

fn singularity(bytes: &[u8]) -> Res<ToricConeData> {
    Ok(parse_json::<SingularityJson>(bytes)?.to_data()?)
}

fn exact_vector(flag: &str, s: &str) -> Res<Vec<BigRational>> {
    parse_exact_vector(s)
        .ok_or_else(|| CliError::Usage(format!("--{flag}: expected comma-separated rationals, got {s:?}")))
}

fn float_vector(flag: &str, s: &str) -> Res<Vec<f64>> {
    parse_float_vector(s)
        .ok_or_else(|| CliError::Usage(format!("--{flag}: expected comma-separated numbers, got {s:?}")))
}

fn reeb(flag: &str, s: &str, exact: bool) -> Res<ReebVector> {
    if exact {
        Ok(ReebVector::Exact(RationalVector::new(exact_vector(flag, s)?)))
    } else {
        Ok(ReebVector::Approx(float_vector(flag, s)?))
    }
}

fn reeb_values(xi: &ReebVector) -> Vec<Num> {
    match xi {
        ReebVector::Exact(v) => values_exact(v.coords()),
        ReebVector::Approx(v) => values_float(v),
    }
}

fn number(x: Number) -> Num {
    match x {
        Number::Exact(r) => Num::Exact(Rat(r)),
        Number::Approx(f) => Num::Float(f),
    }
}

fn no_exact(io: &Io, command: &str) -> Res<()> {
    if io.exact {
        Err(CliError::Usage(format!("--exact is not available for {command}; its results are floating point")))
    } else {
        Ok(())
    }
}

fn positive(flag: &str, x: f64) -> Res<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{flag} must be a positive number, got {x}")))
    }
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Res<()> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_command(cmd: &Command, input: &[u8]) -> Res<Run> {
    match cmd {
        Command::Vol { io, xi } => {
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let x = reeb("xi", xi, io.exact)?;
            let v = vol(&form, &x)?;
            let out = VolOutput { label: data.label().into(), xi: reeb_values(&x), vol: number(v) };
            Ok(Run { command: "vol", params: json!({"xi": xi, "exact": io.exact}), output: to_value(&out) })
        }
        Command::Hvol { io, xi } => {
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let x = reeb("xi", xi, io.exact)?;
            let out = HvolOutput {
                label: data.label().into(),
                xi: reeb_values(&x),
                log_discrepancy: number(log_discrepancy(&data, &x)?),
                vol: number(vol(&form, &x)?),
                hvol: number(normalized_volume(&data, &form, &x)?),
            };
            Ok(Run { command: "hvol", params: json!({"xi": xi, "exact": io.exact}), output: to_value(&out) })
        }
        Command::Minimize { io, tol, max_iters, csv, segment, samples } => {
            no_exact(io, "minimize")?;
            let tol = positive("tol", *tol)?;
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let gamma = validate(&data)?;
            let opts = MinimizeOptions { tol, max_iters: *max_iters, ..MinimizeOptions::default() };
            let res = minimize(&data, &form, &opts)?;
            // Position error of a Newton minimizer is of the order of its gradient norm.
            let reg_tol = (100.0 * tol).max(1e-9);
            let regularity = match classify_regularity(&ReebVector::Approx(res.minimizer.clone()), reg_tol) {
                Regularity::QuasiRegular => "QuasiRegular",
                Regularity::Irregular => "Irregular",
            };
            if let (Some(path), Some(seg)) = (csv, segment) {
                let (a, b) = seg
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("--segment: expected `a:b`, got {seg:?}")))?;
                let a = float_vector("segment", a)?;
                let b = float_vector("segment", b)?;
                if *samples < 2 {
                    return Err(CliError::Usage("--samples must be at least 2".into()));
                }
                let n = data.rank();
                if let Some(bad) = [&a, &b].into_iter().find(|v| v.len() != n) {
                    return Err(Error::DimensionMismatch { expected: n, got: bad.len() }.into());
                }
                let mut rows = Vec::with_capacity(*samples);
                for i in 0..*samples {
                    let s = i as f64 / (*samples - 1) as f64;
                    let p: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (1.0 - s) * x + s * y).collect();
                    let h = normalized_volume_of(&gamma, &form, p.as_slice())?;
                    let mut row = vec![s];
                    row.extend(&p);
                    row.push(h);
                    rows.push(row);
                }
                let mut header = vec!["s".to_string()];
                header.extend((1..=n).map(|i| format!("xi_{i}")));
                header.push("hvol".into());
                write_csv(path, &header, &rows)?;
            }
            let out = MinimizeOutput {
                label: data.label().into(),
                rank: data.rank(),
                gorenstein: rats(gamma.gamma.coords()),
                minimizer: res.minimizer,
                min_hvol: res.min_hvol,
                grad_norm: res.grad_norm,
                newton_iters: res.newton_iters,
                slice_value: Rat(res.slice_value),
                certificate: format!("{:?}", res.certificate),
                slice_hessian_min_eig: res.slice_hessian_min_eig,
                regularity: regularity.into(),
            };
            let params = json!({"tol": tol, "max_iters": max_iters, "segment": segment, "samples": samples});
            Ok(Run { command: "minimize", params, output: to_value(&out) })
        }
        Command::Ksemistable { io, xi0, tol, max_iters } => {
            no_exact(io, "ksemistable")?;
            let tol = positive("tol", *tol)?;
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let x = float_vector("xi0", xi0)?;
            let opts = MinimizeOptions { max_iters: *max_iters, ..MinimizeOptions::default() };
            let (verdict, witness) = match is_ksemistable(&data, &form, &x, tol, &opts)? {
                Verdict::Yes => ("Yes", None),
                Verdict::No { witness } => ("No", Some(witness)),
            };
            let out = VerdictOutput { label: data.label().into(), xi0: x, verdict: verdict.into(), witness };
            let params = json!({"xi0": xi0, "tol": tol, "max_iters": max_iters});
            Ok(Run { command: "ksemistable", params, output: to_value(&out) })
        }
        Command::Futaki { io, xi0, eta, method } => {
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let out = if io.exact {
                if *method != Method::Analytic {
                    return Err(CliError::Usage("--exact requires --method analytic".into()));
                }
                let cfg = ProductTestConfig::exact(
                    RationalVector::new(exact_vector("xi0", xi0)?),
                    RationalVector::new(exact_vector("eta", eta)?),
                );
                let norm = normalize_config(&data, &cfg)?;
                let f = futaki_exact(&data, &form, &cfg)?;
                FutakiOutput {
                    label: data.label().into(),
                    xi0: values_exact(&cfg.xi0),
                    eta: values_exact(&cfg.eta),
                    normalized_xi0: values_exact(&norm.xi0),
                    normalized_eta: values_exact(&norm.eta),
                    t_xi_eta: values_exact(&f.t_xi_eta),
                    fut: Num::Exact(Rat(f.fut.clone())),
                    fut_hvol: Num::Exact(Rat(f.fut_hvol)),
                    ding: Num::Exact(Rat(f.fut)),
                    method: format!("{:?}", FutakiMethod::AnalyticGradient),
                }
            } else {
                let cfg = ProductTestConfig::new(float_vector("xi0", xi0)?, float_vector("eta", eta)?);
                let m = match method {
                    Method::Analytic => FutakiMethod::AnalyticGradient,
                    Method::FiniteDifference => FutakiMethod::FiniteDifference,
                };
                let norm = normalize_config(&data, &cfg)?;
                let f = futaki_with(&data, &form, &cfg, m)?;
                FutakiOutput {
                    label: data.label().into(),
                    xi0: values_float(&cfg.xi0),
                    eta: values_float(&cfg.eta),
                    normalized_xi0: values_float(&norm.xi0),
                    normalized_eta: values_float(&norm.eta),
                    t_xi_eta: values_float(&f.t_xi_eta),
                    fut: Num::Float(f.fut),
                    fut_hvol: Num::Float(f.fut_hvol),
                    ding: Num::Float(f.ding),
                    method: format!("{:?}", f.method),
                }
            };
            let params = json!({"xi0": xi0, "eta": eta, "method": format!("{method:?}"), "exact": io.exact});
            Ok(Run { command: "futaki", params, output: to_value(&out) })
        }
        Command::IndexChar { io, xi, t, bound, csv } => {
            no_exact(io, "index-char")?;
            let data = singularity(input)?;
            let form = build_volume_form(&data)?;
            let x = float_vector("xi", xi)?;
            let sample = leading_coefficient(&data, &form, &x)?;
            let truncated = match t {
                None => None,
                Some(t) => {
                    let t = positive("t", *t)?;
                    let bound = match bound {
                        Some(b) => positive("bound", *b)?,
                        None => sufficient_bound(&form, &x, t)?,
                    };
                    let tr = index_character(&form, &x, t, bound)?;
                    let closed_form = CharacterFormula::new(&form)?.eval(&x, t)?;
                    Some(TruncatedOutput {
                        t,
                        value: tr.value,
                        closed_form,
                        bound: tr.bound,
                        tail_bound: tr.tail_bound,
                        points: tr.points,
                    })
                }
            };
            if let Some(path) = csv {
                let rows: Vec<Vec<f64>> = sample.scaled().into_iter().map(|(t, f)| vec![t, f]).collect();
                write_csv(path, &["t".into(), "t^n F".into()], &rows)?;
            }
            let out = CharacterOutput {
                label: data.label().into(),
                xi: x,
                t_values: sample.t_values,
                f_values: sample.f_values,
                truncation_bound: sample.truncation_bound,
                a0_estimate: sample.a0_estimate,
                a0_error: sample.a0_error,
                vol: sample.vol,
                truncated,
            };
            Ok(Run { command: "index-char", params: json!({"xi": xi, "t": t, "bound": bound}), output: to_value(&out) })
        }
        Command::Lct { .. } => {
            let ideal = parse_json::<IdealJson>(input)?.to_ideal()?;
            let normalized = ideal.normalized_multiplicity();
            let bound = BigRational::from_integer(ideal.smooth_bound());
            let out = LctOutput {
                n: ideal.n(),
                generators: IdealJson::from_ideal(&ideal).generators,
                mult: Rat::from(ideal.multiplicity()),
                lct: Rat(ideal.lct()),
                satisfied: normalized >= bound,
                normalized: Rat(normalized),
                bound_nn: Rat(bound),
            };
            Ok(Run { command: "lct", params: json!({}), output: to_value(&out) })
        }
        Command::DegenerateToy { .. } => {
            let toy = parse_json::<ToyJson>(input)?;
            let p = toy.to_point()?;
            let mut chain = Vec::new();
            let mut cur = p.clone();
            for d in toy.directions() {
                let mu = mu_weight(&cur, d)?;
                cur = limit(&cur, d)?;
                chain.push(LimitStep { direction: [d.0, d.1], mu, support: weights_json(&cur.weights()) });
            }
            let min_k = min_composition_k(&p);
            let k = toy.k.unwrap_or(min_k);
            let check = composed_equals_two_step(&p, k)?;
            let add = additivity(&p, k)?;
            let k_i64 = i64::try_from(k).map_err(|_| Error::TooLarge(format!("k = {k}")))?;
            let out = ToyOutput {
                support: weights_json(&p.weights()),
                chain,
                two_step: weights_json(&two_step_limit(&p).weights()),
                min_k,
                k,
                composed: weights_json(&limit(&p, (k_i64, 1))?.weights()),
                composed_equals_two_step: matches!(check, fanocone_core::CompositionCheck::Equal { .. }),
                mu_composed: add.composed,
                mu_stepwise: add.stepwise,
                residual: add.residual,
            };
            Ok(Run { command: "degenerate-toy", params: json!({}), output: to_value(&out) })
        }
    }
}

fn io_of(cmd: &Command) -> &Io {
    match cmd {
        Command::Vol { io, .. }
        | Command::Hvol { io, .. }
        | Command::Minimize { io, .. }
        | Command::Ksemistable { io, .. }
        | Command::Futaki { io, .. }
        | Command::IndexChar { io, .. }
        | Command::Lct { io }
        | Command::DegenerateToy { io } => io,
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Res<serde_json::Value> {
    let io = io_of(&cli.command);
    let input = read_input(io, stdin)?;
    let start = Instant::now();
    let run = run_command(&cli.command, &input)?;
    let timing_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &io.record {
        let rec = RunRecord {
            command: run.command.into(),
            input_hash: input_hash(run.command, &run.params, &input),
            output: run.output.clone(),
            timing_ms,
            version: env!("CARGO_PKG_VERSION").into(),
        };
        rec.write(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(run.output)
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code. Results and errors are written to `stdout` as one line of JSON.
pub fn dispatch<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let detail = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return emit(stdout, &CliError::Usage(detail).to_json(), 2);
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => emit(stdout, &out, 0),
        Err(e) => emit(stdout, &e.to_json(), e.exit_code()),
    }
}

fn emit(stdout: &mut dyn Write, v: &serde_json::Value, code: i32) -> i32 {
    match writeln!(stdout, "{v}") {
        Ok(()) => code,
        Err(_) => 1,
    }
}
