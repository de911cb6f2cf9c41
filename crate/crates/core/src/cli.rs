//! The `coxnl` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::{classify_nl, find_dinfty_epimorphism, verify_epimorphism, ClassifyError};
use crate::coxgraph::{CoxeterGraph, GraphError, GraphFormat};
use crate::dinfty::{push_forward, word_to_element, DInftyElement, DInftyError, IsometryType};
use crate::georep::{gram_matrix, robust_signature, spectral_radius, word_to_matrix, GeoRepError, Tolerances};
use crate::metricspace::{cayley_ball, delta_estimate, DeltaMode, MetricError};
use crate::selftest;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    GeoRep(#[from] GeoRepError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    DInfty(#[from] DInftyError),
}

impl CliError {
    /// 2 parse/usage, 3 invalid graph, 4 capacity, 5 numeric ambiguity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Graph(e) => graph_code(e),
            CliError::Classify(ClassifyError::Capacity { .. }) => 4,
            CliError::Classify(ClassifyError::LabelTooSmall(_)) => 3,
            CliError::Classify(ClassifyError::Numeric(e)) | CliError::GeoRep(e) => georep_code(e),
            CliError::Metric(MetricError::Capacity { .. }) => 4,
            CliError::Metric(MetricError::Ambiguity { .. }) => 5,
            CliError::Metric(MetricError::Disconnected) => 3,
            CliError::Metric(MetricError::UnknownNode(_) | MetricError::Precondition(_)) => 2,
            CliError::DInfty(DInftyError::InvalidLetter(_)) => 2,
            CliError::DInfty(DInftyError::Graph(e)) => graph_code(e),
        }
    }
}

fn graph_code(e: &GraphError) -> i32 {
    match e {
        GraphError::Syntax { .. } | GraphError::InvalidLetter(_) | GraphError::UnknownLetter(_) => 2,
        _ => 3,
    }
}

fn georep_code(e: &GeoRepError) -> i32 {
    match e {
        GeoRepError::NonConvergence | GeoRepError::Ambiguity(_) => 5,
        GeoRepError::Graph(g) => graph_code(g),
        GeoRepError::IndexOutOfRange { .. } => 2,
        GeoRepError::NotHyperbolicTriangle => 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

/// Decide Property (NL) for Coxeter groups and inspect the models behind
/// the decision.
#[derive(Debug, Parser)]
#[command(name = "coxnl", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: OutputFormat,
    /// Eigenvalues with |λ| at most this count as zero.
    #[arg(long, global = true, value_parser = positive)]
    sig_tol: Option<f64>,
    /// Loxodromic certificates need spectral radius above 1 + margin.
    #[arg(long, global = true, value_parser = positive)]
    lox_margin: Option<f64>,
    /// Allowed residual in MᵀBM = B.
    #[arg(long, global = true, value_parser = positive)]
    form_tol: Option<f64>,
    /// Allowed error in σ² = I.
    #[arg(long, global = true, value_parser = positive)]
    involution_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a graph, printing the verdict with its rule trace.
    Classify { graph: PathBuf },
    /// Search for an epimorphism onto D∞, optionally pushing a word through it.
    Witness { graph: PathBuf, word: Option<String> },
    /// The infinite dihedral group.
    Dinfty {
        #[command(subcommand)]
        command: DinftyCommand,
    },
    /// The geometric representation.
    Georep {
        #[command(subcommand)]
        command: GeorepCommand,
    },
    /// Cayley graph balls.
    Cayley {
        #[command(subcommand)]
        command: CayleyCommand,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum DinftyCommand {
    /// Evaluate a word over {r, s}.
    Eval { word: String },
}

#[derive(Debug, Subcommand)]
enum GeorepCommand {
    /// Matrix, spectral radius and form residual of a word.
    Spectrum { graph: PathBuf, word: String },
}

#[derive(Debug, Subcommand)]
enum CayleyCommand {
    /// Ball around the identity as DOT.
    Ball { graph: PathBuf, radius: usize },
    /// Thin-triangle δ of a ball.
    Delta {
        graph: PathBuf,
        radius: usize,
        /// Examine at most this many geodesics per pair.
        #[arg(long)]
        sampled: Option<usize>,
    },
}

impl Cli {
    fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(v) = self.sig_tol {
            tol.eigen = v;
        }
        if let Some(v) = self.lox_margin {
            tol.loxodromic_margin = v;
        }
        if let Some(v) = self.form_tol {
            tol.form = v;
        }
        if let Some(v) = self.involution_tol {
            tol.involution = v;
        }
        tol
    }
}

/// Run the command line, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &PathBuf) -> Result<CoxeterGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(CoxeterGraph::parse(&text, GraphFormat::sniff(&text))?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
        .map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

/// Classify graph source text and render the verdict.
pub fn classify_source(source: &str, format: OutputFormat, tol: &Tolerances) -> Result<String, CliError> {
    let graph = CoxeterGraph::parse(source, GraphFormat::sniff(source))?;
    let verdict = classify_nl(&graph, tol)?;
    Ok(match format {
        OutputFormat::Json => verdict.to_json(&graph),
        OutputFormat::Text => verdict.to_text(&graph),
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = cli.tolerances();
    let format = cli.format;
    match &cli.command {
        Command::Classify { graph } => {
            let text = std::fs::read_to_string(graph).map_err(|e| CliError::Io {
                path: graph.display().to_string(),
                message: e.to_string(),
            })?;
            emit(out, &classify_source(&text, format, &tol)?)?;
        }
        Command::Witness { graph, word } => {
            let g = load(graph)?;
            emit(out, &witness_report(&g, word.as_deref(), format)?)?;
        }
        Command::Dinfty {
            command: DinftyCommand::Eval { word },
        } => {
            let e = word_to_element(word)?;
            let report = element_json(&e);
            emit(
                out,
                &match format {
                    OutputFormat::Json => to_json(&report),
                    OutputFormat::Text => element_text(&e),
                },
            )?;
        }
        Command::Georep {
            command: GeorepCommand::Spectrum { graph, word },
        } => {
            let g = load(graph)?;
            emit(out, &spectrum_report(&g, word, &tol, format)?)?;
        }
        Command::Cayley {
            command: CayleyCommand::Ball { graph, radius },
        } => {
            let g = load(graph)?;
            let ball = cayley_ball(&g, *radius)?;
            let dot = ball.to_dot();
            emit(
                out,
                &match format {
                    OutputFormat::Json => to_json(&json!({
                        "radius": radius,
                        "nodes": ball.len(),
                        "edges": ball.edges().len(),
                        "dot": dot,
                    })),
                    OutputFormat::Text => format!("{dot}nodes: {}\n", ball.len()),
                },
            )?;
        }
        Command::Cayley {
            command: CayleyCommand::Delta { graph, radius, sampled },
        } => {
            let g = load(graph)?;
            let ball = cayley_ball(&g, *radius)?;
            let mode = match sampled {
                Some(k) => DeltaMode::Sampled(*k),
                None => DeltaMode::Exhaustive,
            };
            let est = delta_estimate(&ball, mode)?;
            let (mode_name, k) = match mode {
                DeltaMode::Exhaustive => ("exhaustive", None),
                DeltaMode::Sampled(k) => ("sampled", Some(k)),
            };
            emit(
                out,
                &match format {
                    OutputFormat::Json => to_json(&json!({
                        "radius": radius,
                        "nodes": ball.len(),
                        "delta": est.delta,
                        "mode": mode_name,
                        "k": k,
                        "lower_bound": est.lower_bound,
                    })),
                    OutputFormat::Text => format!(
                        "delta: {}{}\nmode: {mode_name}{}\nnodes: {}\n",
                        est.delta,
                        if est.lower_bound { " (lower bound)" } else { "" },
                        k.map(|k| format!(" (k = {k})")).unwrap_or_default(),
                        ball.len()
                    ),
                },
            )?;
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let all_passed = results.iter().all(|r| r.passed);
            let text = match format {
                OutputFormat::Json => to_json(&results),
                OutputFormat::Text => {
                    let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
                    let passed = results.iter().filter(|r| r.passed).count();
                    s.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
                    s
                }
            };
            emit(out, &text)?;
            return Ok(if all_passed { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn isometry_datum(t: &IsometryType) -> Value {
    match t {
        IsometryType::Identity => Value::Null,
        IsometryType::EllipticReflection { fixed_point } => json!({ "fixed_point": fixed_point.to_string() }),
        IsometryType::LoxodromicTranslation {
            translation_length,
            attracting_end,
        } => json!({
            "translation_length": translation_length,
            "attracting_end": attracting_end,
        }),
    }
}

fn element_json(e: &DInftyElement) -> Value {
    let t = e.isometry_type();
    json!({
        "p": e.p,
        "q": e.q as u8,
        "isometry": t.kind(),
        "datum": isometry_datum(&t),
        "normal_form": e.normal_form(),
    })
}

fn element_text(e: &DInftyElement) -> String {
    let t = e.isometry_type();
    let nf = e.normal_form();
    format!(
        "element: {e}\nisometry: {}\ndatum: {}\nnormal form: {}\n",
        t.kind(),
        isometry_datum(&t),
        if nf.is_empty() { "(empty word)" } else { &nf }
    )
}

fn witness_report(g: &CoxeterGraph, word: Option<&str>, format: OutputFormat) -> Result<String, CliError> {
    let witness = find_dinfty_epimorphism(g)?;
    let names = |part: &[usize]| -> Vec<String> { part.iter().map(|&i| g.name(i).to_string()).collect() };
    let image = match (&witness, word) {
        (Some(w), Some(text)) => {
            let word = g.parse_word(text)?;
            let e = push_forward(g, w, &word)?;
            let mut v = element_json(&e);
            v["word"] = json!(g.word_names(&word));
            Some((v, e))
        }
        (None, Some(text)) => {
            g.parse_word(text)?;
            None
        }
        _ => None,
    };
    Ok(match format {
        OutputFormat::Json => to_json(&json!({
            "witness": witness.as_ref().map(|w| json!({
                "A": names(&w.a),
                "B": names(&w.b),
                "K": names(&w.k),
            })),
            "verified": witness.as_ref().is_some_and(|w| verify_epimorphism(g, w)),
            "image": image.as_ref().map(|(v, _)| v.clone()),
        })),
        OutputFormat::Text => match &witness {
            None => "epimorphism onto D∞: none found\n".to_string(),
            Some(w) => {
                let mut s = format!(
                    "epimorphism onto D∞: A={{{}}} -> r  B={{{}}} -> s  K={{{}}} -> 1  (verified: {})\n",
                    names(&w.a).join(","),
                    names(&w.b).join(","),
                    names(&w.k).join(","),
                    verify_epimorphism(g, w)
                );
                if let Some((_, e)) = &image {
                    s.push_str(&element_text(e));
                }
                s
            }
        },
    })
}

fn spectrum_report(g: &CoxeterGraph, word: &str, tol: &Tolerances, format: OutputFormat) -> Result<String, CliError> {
    let word = g.parse_word(word)?;
    let m = word_to_matrix(g, &word)?;
    let rho = spectral_radius(&m.entries)?;
    let gram = gram_matrix(g);
    let residual = m.form_residual(&gram);
    let sig = robust_signature(g, tol.eigen)?;
    Ok(match format {
        OutputFormat::Json => to_json(&json!({
            "word": g.word_names(&word),
            "dim": m.dim(),
            "matrix": m.row_major(),
            "spectral_radius": rho,
            "form_residual": residual,
            "form_preserved": residual <= tol.form,
            "signature": sig,
        })),
        OutputFormat::Text => {
            let mut s = format!("word: {}\nmatrix:\n", g.word_names(&word).join(" "));
            for r in 0..m.dim() {
                let row: Vec<String> = (0..m.dim()).map(|c| format!("{:>14.9}", m.entries[(r, c)])).collect();
                s.push_str(&format!("  [{}]\n", row.join(" ")));
            }
            s.push_str(&format!(
                "spectral radius: {rho:.12}\nform residual: {residual:.3e}\nsignature: ({},{},{})\n",
                sig.plus, sig.zero, sig.minus
            ));
            s
        }
    })
}
