//! Command-line front end for the tfloc library: STFT and ambiguity grids,
//! Berezin transforms, localization operators, spreading coefficients,
//! injectivity reports, symbol recovery, and the density and Fourier-gap
//! experiments. Reports are JSON, experiment tables are CSV; outputs are
//! byte-identical for identical configurations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tfloc_core::berezin::{berezin_transform, injectivity_report};
use tfloc_core::io::{
    GridJson, InjectivityReportJson, OperatorJson, SignalJson,
};
use tfloc_core::oper::{
    dft_operator, localization_operator, random_operator, shift_operator, to_spreading,
    OperatorMatrix, RandomClass,
};
use tfloc_core::quantize::{
    approximation_report, berezin_bound_check, density_sweep, fourier_gap_experiment,
};
use tfloc_core::tfcore::{
    cross_ambiguity, stft, translate_span_rank, window_gallery, GridFunction, PhasePoint,
    Signal, WindowKind,
};
use tfloc_core::TflocError;

#[derive(Parser)]
#[command(name = "tfloc", version, about = "Time-frequency localization toolkit on Z_N")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Short-time Fourier transform of a signal file against a window
    Stft {
        #[arg(long)]
        n: usize,
        /// Window spec: delta | rect:L | gauss:SIGMA | zeromaker | file:PATH
        #[arg(long)]
        window1: String,
        /// Signal JSON file
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cross-ambiguity function V_{window1} window2
    Ambiguity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Berezin transform of a target operator
    Berezin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        /// Target: dft | identity | shift:X,W | random:CLASS | file:PATH
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Localization operator from a symbol grid file
    Localize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        /// Symbol GridFunction JSON file
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spreading coefficients of a target operator
    Spreading {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Injectivity diagnostics for a window pair
    InjectReport {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the symbol whose localization operator best approximates a target
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "0")]
        lambda: f64,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density experiment over window pairs and dimensions
    DensitySweep {
        /// Comma-separated dimensions, e.g. 4,8,16
        #[arg(long)]
        n_list: String,
        /// Window pair W1/W2 (gallery specs); repeatable
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Random targets per cell
        #[arg(long, default_value = "3")]
        targets: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// DFT reconstruction cost experiment: exact symbol sup norm and clipped residual
    FourierGap {
        #[arg(long)]
        n_list: String,
        #[arg(long, default_value = "gauss:1.0")]
        window: String,
        #[arg(long, default_value = "1e6")]
        clip_level: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Berezin norm bound check at a Schatten exponent p
    BoundCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window1: String,
        #[arg(long)]
        window2: String,
        #[arg(long)]
        target: String,
        /// 1, 2, or inf
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of the span of all translates of a signal
    TranslateRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Validation(String),
    Math(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl From<TflocError> for CliError {
    fn from(e: TflocError) -> Self {
        match e {
            TflocError::VanishingMultiplier { .. } => CliError::Math(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

type CliResult<T> = Result<T, CliError>;

fn effective_seed(seed: u64) -> CliResult<u64> {
    match std::env::var("TFLOC_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| validation(format!("TFLOC_SEED is not a u64: {v:?}"))),
        Err(_) => Ok(seed),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| validation(format!("cannot parse {}: {e}", path.display())))
}

fn load_window(spec: &str, n: usize) -> CliResult<Signal> {
    if let Some(path) = spec.strip_prefix("file:") {
        let f: SignalJson = read_json(Path::new(path))?;
        let sig = f.to_signal()?;
        if sig.n() != n {
            return Err(validation(format!(
                "window file {} has n={}, expected {n}",
                path,
                sig.n()
            )));
        }
        if sig.is_zero() {
            return Err(validation(format!("window file {path} is the zero signal")));
        }
        Ok(sig)
    } else {
        let kind = WindowKind::parse(spec)?;
        Ok(window_gallery(&kind, n)?)
    }
}

fn load_target(spec: &str, n: usize, seed: u64) -> CliResult<OperatorMatrix> {
    if spec == "dft" {
        return Ok(dft_operator(n)?);
    }
    if spec == "identity" {
        return Ok(OperatorMatrix::identity(n)?);
    }
    if let Some(rest) = spec.strip_prefix("shift:") {
        let (x, w) = rest
            .split_once(',')
            .ok_or_else(|| validation(format!("bad shift spec {spec:?}, want shift:X,W")))?;
        let x: i64 = x
            .trim()
            .parse()
            .map_err(|_| validation(format!("bad shift coordinate {x:?}")))?;
        let w: i64 = w
            .trim()
            .parse()
            .map_err(|_| validation(format!("bad shift coordinate {w:?}")))?;
        return Ok(shift_operator(PhasePoint::new(x, w, n), n)?);
    }
    if let Some(class) = spec.strip_prefix("random:") {
        let class = RandomClass::parse(class)?;
        return Ok(random_operator(seed, n, &class)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let j: OperatorJson = read_json(Path::new(path))?;
        let t = j.to_operator()?;
        if t.n() != n {
            return Err(validation(format!(
                "operator file {} has n={}, expected {n}",
                path,
                t.n()
            )));
        }
        return Ok(t);
    }
    Err(validation(format!(
        "unknown target {spec:?}; want dft | identity | shift:X,W | random:CLASS | file:PATH"
    )))
}

fn parse_n_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| validation(format!("bad dimension {p:?} in n-list")))
        })
        .collect()
}

fn parse_p(s: &str) -> CliResult<f64> {
    match s.trim() {
        "inf" | "infinity" | "oo" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| validation(format!("bad exponent {other:?}"))),
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid_to_csv(g: &GridFunction) -> String {
    let mut s = String::from("x,omega,re,im\n");
    for z in g.points() {
        let v = g.get(z);
        let _ = writeln!(s, "{},{},{},{}", z.x, z.omega, fmt_float(v.re), fmt_float(v.im));
    }
    s
}

fn emit(out: Option<&PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn grid_output(g: &GridFunction, format: Format, out: Option<&PathBuf>) -> CliResult<()> {
    let content = match format {
        Format::Json => {
            let mut s = serde_json::to_string(&GridJson::from_grid(g))
                .map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => grid_to_csv(g),
    };
    emit(out, &content)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Stft {
            n,
            window1,
            input,
            out,
            format,
        } => {
            let g = load_window(&window1, n)?;
            let f: SignalJson = read_json(&input)?;
            let f = f.to_signal()?;
            if f.n() != n {
                return Err(validation(format!(
                    "input signal has n={}, expected {n}",
                    f.n()
                )));
            }
            grid_output(&stft(&g, &f)?, format, out.as_ref())
        }
        Cmd::Ambiguity {
            n,
            window1,
            window2,
            out,
            format,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            grid_output(&cross_ambiguity(&phi1, &phi2)?, format, out.as_ref())
        }
        Cmd::Berezin {
            n,
            window1,
            window2,
            target,
            seed,
            out,
            format,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            let t = load_target(&target, n, effective_seed(seed)?)?;
            grid_output(&berezin_transform(&t, &phi1, &phi2)?, format, out.as_ref())
        }
        Cmd::Localize {
            n,
            window1,
            window2,
            symbol,
            out,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            let a: GridJson = read_json(&symbol)?;
            let a = a.to_grid()?;
            if a.n() != n {
                return Err(validation(format!(
                    "symbol grid has n={}, expected {n}",
                    a.n()
                )));
            }
            let op = localization_operator(&a, &phi1, &phi2)?;
            let mut s = serde_json::to_string(&OperatorJson::from_operator(&op))
                .map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            emit(out.as_ref(), &s)
        }
        Cmd::Spreading {
            n,
            target,
            seed,
            out,
            format,
        } => {
            let t = load_target(&target, n, effective_seed(seed)?)?;
            grid_output(&to_spreading(&t).eta, format, out.as_ref())
        }
        Cmd::InjectReport {
            n,
            window1,
            window2,
            out,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            let rep = injectivity_report(&phi1, &phi2)?;
            let j = InjectivityReportJson::from_report(&rep, &window1, &window2);
            let mut s = serde_json::to_string(&j).map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            emit(out.as_ref(), &s)
        }
        Cmd::Solve {
            n,
            window1,
            window2,
            target,
            lambda,
            seed,
            out,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            let t = load_target(&target, n, effective_seed(seed)?)?;
            let rep = approximation_report(&t, &phi1, &phi2, lambda)?;
            let json = serde_json::json!({
                "n": rep.n,
                "lambda": rep.lambda,
                "residual_hs": rep.residual_hs,
                "residual_op": rep.residual_op,
                "residual_s1": rep.residual_s1,
                "symbol_sup": rep.symbol_sup,
                "symbol": GridJson::from_grid(&rep.symbol),
            });
            let mut s = serde_json::to_string(&json).map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            emit(out.as_ref(), &s)
        }
        Cmd::DensitySweep {
            n_list,
            pairs,
            seed,
            targets,
            out,
            format,
        } => {
            let ns = parse_n_list(&n_list)?;
            let mut kinds = Vec::new();
            for p in &pairs {
                let (a, b) = p.split_once('/').ok_or_else(|| {
                    validation(format!("bad pair {p:?}, want WINDOW1/WINDOW2"))
                })?;
                kinds.push((WindowKind::parse(a.trim())?, WindowKind::parse(b.trim())?));
            }
            let rows = density_sweep(&kinds, &ns, effective_seed(seed)?, targets)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from(
                        "n,window1,window2,injective,max_residual,witness_residual,witness_norm\n",
                    );
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            r.n,
                            r.window1,
                            r.window2,
                            r.injective,
                            fmt_float(r.max_residual),
                            r.witness_residual.map(fmt_float).unwrap_or_default(),
                            r.witness_norm.map(fmt_float).unwrap_or_default(),
                        );
                    }
                    s
                }
                Format::Json => {
                    let vals: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "n": r.n,
                                "window1": r.window1,
                                "window2": r.window2,
                                "injective": r.injective,
                                "max_residual": r.max_residual,
                                "witness_residual": r.witness_residual,
                                "witness_norm": r.witness_norm,
                            })
                        })
                        .collect();
                    let mut s = serde_json::to_string(&vals)
                        .map_err(|e| validation(e.to_string()))?;
                    s.push('\n');
                    s
                }
            };
            emit(out.as_ref(), &content)
        }
        Cmd::FourierGap {
            n_list,
            window,
            clip_level,
            out,
            format,
        } => {
            let ns = parse_n_list(&n_list)?;
            let kind = WindowKind::parse(&window)?;
            let rows = fourier_gap_experiment(&ns, &kind, clip_level)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from(
                        "n,symbol_sup,unclipped_residual_hs,clipped_residual_op,flagged\n",
                    );
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            r.n,
                            r.symbol_sup.map(fmt_float).unwrap_or_default(),
                            r.unclipped_residual_hs.map(fmt_float).unwrap_or_default(),
                            r.clipped_residual_op.map(fmt_float).unwrap_or_default(),
                            r.flagged,
                        );
                    }
                    s
                }
                Format::Json => {
                    let vals: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "n": r.n,
                                "symbol_sup": r.symbol_sup,
                                "unclipped_residual_hs": r.unclipped_residual_hs,
                                "clipped_residual_op": r.clipped_residual_op,
                                "flagged": r.flagged,
                            })
                        })
                        .collect();
                    let mut s = serde_json::to_string(&vals)
                        .map_err(|e| validation(e.to_string()))?;
                    s.push('\n');
                    s
                }
            };
            emit(out.as_ref(), &content)
        }
        Cmd::BoundCheck {
            n,
            window1,
            window2,
            target,
            p,
            seed,
            out,
        } => {
            let phi1 = load_window(&window1, n)?;
            let phi2 = load_window(&window2, n)?;
            let t = load_target(&target, n, effective_seed(seed)?)?;
            let p = parse_p(&p)?;
            let chk = berezin_bound_check(&t, &phi1, &phi2, p)?;
            let json = serde_json::json!({
                "p": if p.is_infinite() { serde_json::Value::from("inf") } else { p.into() },
                "lhs": chk.lhs,
                "rhs": chk.rhs,
                "holds": chk.holds,
            });
            let mut s = serde_json::to_string(&json).map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            emit(out.as_ref(), &s)
        }
        Cmd::TranslateRank { n, input, out } => {
            let f: SignalJson = read_json(&input)?;
            let f = f.to_signal()?;
            if f.n() != n {
                return Err(validation(format!(
                    "input signal has n={}, expected {n}",
                    f.n()
                )));
            }
            let rank = translate_span_rank(&f)?;
            let json = serde_json::json!({ "n": n, "rank": rank });
            let mut s = serde_json::to_string(&json).map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            emit(out.as_ref(), &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Validation(m) => ("validation", m),
                CliError::Math(m) => ("math", m),
            };
            eprintln!("error: {kind}: {}", msg.replace('\n', " "));
            ExitCode::from(e.exit_code())
        }
    }
}
