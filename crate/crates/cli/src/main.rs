mod error;
mod svg;

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graph_barcode::constructions::{
    cactus, compliant_cactus_spec, counterexample_pair, golden_counterexample, make_standard, random_metric_graph,
    random_tree, RandomGraphSpec, StandardGraph,
};
use graph_barcode::graph::{canonical_tree_code, parse_graph};
use graph_barcode::persistence::{diagram_at, write_diagram_csv};
use graph_barcode::transform::{
    barcode_transform, distortion_between, exact_number, export_transform, measured_persistence_distortion_estimate,
    measured_transform, sampled_injectivity_check, sha256_hex, Density,
};
use graph_barcode::verify::{run_suite, Suite};
use graph_barcode::{Diagram, MetricGraph, Rational};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "graph-barcode", version, about = "Barcode transforms of metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extended persistence diagram of the distance from one basepoint.
    Pd(PdArgs),
    /// Sampled barcode transform written as a directory of diagram CSVs.
    Bt(BtArgs),
    /// Persistence distortion estimate between two graphs.
    Pdist(PdistArgs),
    /// Canonical codes of trees; equal codes mean isometric trees.
    Canon(CanonArgs),
    /// Generate a graph file.
    Gen(GenArgs),
    /// Run a property suite and report per-case results.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct PdArgs {
    graph: PathBuf,
    /// `vertex:<id>` or `<edge id>:<offset>`.
    point: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BtArgs {
    graph: PathBuf,
    #[arg(long)]
    delta: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also write `injectivity.json` listing basepoint pairs whose
    /// diagrams are within this bottleneck distance.
    #[arg(long)]
    tol: Option<String>,
}

#[derive(Args)]
struct PdistArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    delta: String,
    /// Density for the measured variant: `uniform` or `edge=weight,...`,
    /// applied to both graphs.
    #[arg(long)]
    measured: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CanonArgs {
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// A named family: circle(c), interval(l), theta(a,b,c),
    /// dumbbell(l1,bar,l2), star(l1,...), path(l1,...).
    Standard { name: String },
    /// A connected multigraph with generic rational lengths.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_loops: bool,
    },
    /// A random tree with generic rational lengths.
    Tree {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One side of the frozen pair of non-isometric trees with nearly
    /// equal transforms.
    Counterexample {
        #[arg(value_parser = ["g", "h"])]
        side: String,
    },
    /// A cactus over a base graph with thorns chosen to keep the
    /// transform injective.
    Cactus {
        base: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report only failing cases.
    #[arg(long)]
    failures_only: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Whether a command that ran to completion found what it checks for.
enum Outcome {
    Passed,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Pd(a) => pd(a),
        Command::Bt(a) => bt(a),
        Command::Pdist(a) => pdist(a),
        Command::Canon(a) => canon(a),
        Command::Gen(a) => gen(a),
        Command::Verify(a) => verify(a),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn read_graph(path: &Path) -> Result<(MetricGraph, Vec<u8>), CliError> {
    let bytes = read_bytes(path)?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))?;
    let graph = parse_graph(&text).map_err(|e| prefix(path, e.into()))?;
    Ok((graph, bytes))
}

fn prefix(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        CliError::Domain(m) => CliError::Domain(format!("{}: {m}", path.display())),
        io => io,
    }
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational, CliError> {
    s.parse()
        .map_err(|_| CliError::Parse(format!("--{flag}: cannot parse `{s}` as a rational")))
}

fn parse_delta(s: &str) -> Result<Rational, CliError> {
    let delta = parse_rational("delta", s)?;
    if !delta.is_positive() {
        return Err(CliError::Domain(format!("--delta must be positive, got {delta}")));
    }
    Ok(delta)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Parse(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn diagram_json(d: &Diagram) -> Value {
    Value::Array(
        d.points()
            .iter()
            .map(|p| {
                json!({
                    "dim": p.dim,
                    "birth": exact_number(&p.birth),
                    "death": exact_number(&p.death),
                    "subtype": p.kind.tag(),
                })
            })
            .collect(),
    )
}

fn pd(a: PdArgs) -> Result<Outcome, CliError> {
    let (g, _) = read_graph(&a.graph)?;
    let p = g.parse_point(&a.point)?;
    let d = diagram_at(&g, &p);
    let label = g.point_label(&p);
    let text = match a.format {
        Format::Csv => write_diagram_csv(&d),
        Format::Json => pretty(&json!({ "basepoint": label, "points": diagram_json(&d) })),
        Format::Svg => svg::diagram_svg(&d, &label),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Passed)
}

fn bt(a: BtArgs) -> Result<Outcome, CliError> {
    let (g, bytes) = read_graph(&a.graph)?;
    let delta = parse_delta(&a.delta)?;
    let tol = a.tol.as_deref().map(|t| parse_rational("tol", t)).transpose()?;
    if tol.as_ref().is_some_and(Rational::is_negative) {
        return Err(CliError::Domain("--tol must be nonnegative".into()));
    }
    let sample = barcode_transform(&g, &delta)?;
    export_transform(&sample, &sha256_hex(&bytes), &a.out).map_err(|e| match e {
        graph_barcode::transform::TransformError::Io(source) => CliError::io(&a.out, source),
        other => other.into(),
    })?;
    if let Some(tol) = tol {
        let report = sampled_injectivity_check(&sample, &tol);
        let value = json!({
            "points": report.points,
            "distinct_diagrams": report.distinct_diagrams,
            "tolerance": exact_number(&report.tolerance),
            "min_separation": report.min_separation.as_ref().map(exact_number),
            "injective_on_sample": report.injective_on_sample(),
            "close_pairs": report.collisions.iter().map(|c| json!({
                "a": c.a, "b": c.b, "distance": exact_number(&c.distance),
            })).collect::<Vec<_>>(),
        });
        let path = a.out.join("injectivity.json");
        emit(Some(&path), &pretty(&value))?;
    }
    Ok(Outcome::Passed)
}

fn pdist(a: PdistArgs) -> Result<Outcome, CliError> {
    let (g, _) = read_graph(&a.a)?;
    let (h, _) = read_graph(&a.b)?;
    let delta = parse_delta(&a.delta)?;
    let density: Option<Density> = a
        .measured
        .as_deref()
        .map(|s| {
            s.parse()
                .map_err(|e: graph_barcode::transform::TransformError| CliError::Parse(e.to_string()))
        })
        .transpose()?;
    let sg = barcode_transform(&g, &delta)?;
    let sh = barcode_transform(&h, &delta)?;
    let est = distortion_between(&sg, &sh)?;
    let mut rows: Vec<(&str, Rational)> = vec![
        ("delta", delta.clone()),
        ("estimate", est.estimate.clone()),
        ("lower", est.lower.clone()),
        ("upper", est.upper.clone()),
        ("delta_hat_A", est.delta_hat_g.clone()),
        ("delta_hat_B", est.delta_hat_h.clone()),
    ];
    if let Some(density) = &density {
        let mg = measured_transform(&g, &delta, density)?;
        let mh = measured_transform(&h, &delta, density)?;
        let m = measured_persistence_distortion_estimate(&mg, &mh)?;
        rows.push(("w_infinity", m.estimate));
        rows.push(("w_infinity_error_bound", m.error_bound));
    }
    let text = match a.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in &rows {
                obj.insert((*k).to_string(), exact_number(v));
            }
            if let Some(d) = &density {
                obj.insert("density".into(), json!(d.to_string()));
            }
            pretty(&Value::Object(obj))
        }
        Format::Csv => {
            let mut s = String::from("quantity,exact,float\n");
            for (k, v) in &rows {
                s.push_str(&format!("{k},{},{}\n", v.to_exact_string(), v.to_f64()));
            }
            s
        }
        Format::Svg => return Err(unsupported("pdist", a.format)),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Passed)
}

fn canon(a: CanonArgs) -> Result<Outcome, CliError> {
    let mut codes = Vec::new();
    for path in &a.graphs {
        let (g, _) = read_graph(path)?;
        let code = canonical_tree_code(&g).map_err(|e| prefix(path, e.into()))?;
        codes.push((path.display().to_string(), code));
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("file,code\n");
            for (f, c) in &codes {
                s.push_str(&format!("{f},\"{c}\"\n"));
            }
            s
        }
        Format::Json => pretty(&json!({
            "codes": codes.iter().map(|(f, c)| json!({ "file": f, "code": c })).collect::<Vec<_>>(),
            "all_equal": codes.windows(2).all(|w| w[0].1 == w[1].1),
        })),
        Format::Svg => return Err(unsupported("canon", a.format)),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Passed)
}

fn gen(a: GenArgs) -> Result<Outcome, CliError> {
    let graph = match a.kind {
        GenKind::Standard { name } => {
            let spec: StandardGraph = name
                .parse()
                .map_err(|e: graph_barcode::constructions::ConstructionError| CliError::Parse(e.to_string()))?;
            make_standard(&spec)?
        }
        GenKind::Random {
            vertices,
            extra,
            seed,
            no_loops,
        } => {
            let mut spec = RandomGraphSpec::new(vertices, extra);
            spec.allow_loops = !no_loops;
            random_metric_graph(seed, &spec)?
        }
        GenKind::Tree { vertices, seed } => random_tree(seed, vertices)?,
        GenKind::Counterexample { side } => {
            let (g, h) = counterexample_pair(&golden_counterexample())?;
            if side == "g" {
                g
            } else {
                h
            }
        }
        GenKind::Cactus { base, seed } => {
            let (base, _) = read_graph(&base)?;
            cactus(&compliant_cactus_spec(&base, seed)?)?.graph
        }
    };
    emit(a.out.as_deref(), &graph.to_string())?;
    Ok(Outcome::Passed)
}

fn verify(a: VerifyArgs) -> Result<Outcome, CliError> {
    if a.format != Format::Json {
        return Err(unsupported("verify", a.format));
    }
    let mut report = run_suite(a.suite, a.seed);
    if a.failures_only {
        report = report.failures_only();
    }
    let passed = report.passed;
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    emit(a.out.as_deref(), &text)?;
    Ok(if passed { Outcome::Passed } else { Outcome::Failed })
}
