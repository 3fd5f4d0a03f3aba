//! `apollonian`: distances, closed-form checks, disk geodesics and property suites.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or domain mismatch, 3 malformed input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use apollonian::geodesics::{geodesic_arc_disk, sample_arc, verify_geodesic, GeodesicArc, GeodesicReport};
use apollonian::metrics::{apollonian, apollonian_disk, apollonian_oracle_with, ExtremalBoundaryPoint};
use apollonian::suites::{fmt_point, run_all, run_suite, CaseRow, Suite, SuiteReport};
use apollonian::{sampling, Config, Domain, Error, Metric, MetricKind, Point2, WeakMetric};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "apollonian", version, about = "Apollonian and related weak metrics on planar domains")]
struct Cli {
    /// Named domain: unit_disk, upper_half_plane or unit_square.
    #[arg(long, global = true, conflicts_with = "domain_file")]
    domain: Option<String>,
    /// Domain given as JSON, e.g. {"type":"convex_polygon","vertices":[[0,0],[1,0],[0,1]]}.
    #[arg(long, global = true)]
    domain_file: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Boundary samples used by oracles and the harmonic part metric.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Pass threshold for `compare` (default 1e-8) and `geodesic` (default 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the geodesic as an SVG file.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Directed distance from X to Y.
    Dist {
        metric: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Closed form against the boundary oracle on random pairs.
    Compare {
        #[arg(long, default_value_t = 500)]
        pairs: usize,
    },
    /// Apollonian geodesic of the unit disk from X through Y.
    Geodesic {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(short, long, default_value_t = 8)]
        k: usize,
    },
    /// Seeded property suite: axioms, identities, extremals, geodesics, separation, invariance or all.
    Check { suite: String },
}

/// A failure with its exit code.
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail(2, msg.into())
    }

    fn parse(msg: impl Into<String>) -> Self {
        Fail(3, msg.into())
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDomain(_) => 3,
            Error::SearchFailed(_) => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

type CmdResult = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let mut cfg = Config::default();
    if let Some(n) = cli.resolution {
        if n < 8 {
            return Err(Fail::usage("--resolution must be at least 8"));
        }
        cfg.oracle_resolution = n;
    }
    let domain = load_domain(cli)?;
    match &cli.command {
        Command::Dist { metric, x, y } => cmd_dist(cli, &cfg, domain, metric, x, y),
        Command::Compare { pairs } => cmd_compare(cli, &cfg, &domain, *pairs),
        Command::Geodesic { x, y, k } => cmd_geodesic(cli, &domain, x, y, *k),
        Command::Check { suite } => cmd_check(cli, &cfg, suite),
    }
}

fn load_domain(cli: &Cli) -> Result<Domain, Fail> {
    if let Some(path) = &cli.domain_file {
        let text = std::fs::read_to_string(path).map_err(|e| Fail::parse(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| Fail::parse(format!("{}: {e}", path.display())));
    }
    match cli.domain.as_deref().unwrap_or("unit_disk") {
        "unit_disk" => Ok(Domain::UnitDisk),
        "upper_half_plane" => Ok(Domain::UpperHalfPlane),
        "unit_square" => Ok(Domain::unit_square()),
        other => Err(Fail::usage(format!(
            "unknown domain {other:?} (expected unit_disk, upper_half_plane or unit_square; use --domain-file for others)"
        ))),
    }
}

fn parse_point(s: &str) -> Result<Point2, Fail> {
    let bad = || Fail::parse(format!("malformed point {s:?}, expected \"x,y\""));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = a.trim().parse().map_err(|_| bad())?;
    let im: f64 = b.trim().parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Point2::new(re, im))
}

fn print_json<T: Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Fail> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let io = |e: csv::Error| Fail(1, e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| Fail(1, e.to_string()))
}

const CASE_HEADER: [&str; 6] = ["case_id", "input", "expected", "actual", "abs_error", "pass"];

fn case_record(c: &CaseRow) -> Vec<String> {
    vec![
        c.case_id.clone(),
        c.input.clone(),
        c.expected.to_string(),
        c.actual.to_string(),
        c.abs_error.to_string(),
        c.pass.to_string(),
    ]
}

#[derive(Serialize)]
struct DistOutput {
    metric: &'static str,
    domain: Domain,
    from: Point2,
    to: Point2,
    value: f64,
    extremal: Option<ExtremalBoundaryPoint>,
}

fn cmd_dist(cli: &Cli, cfg: &Config, domain: Domain, metric: &str, x: &str, y: &str) -> CmdResult {
    let kind: MetricKind = metric.parse().map_err(|_| {
        let names: Vec<_> = MetricKind::ALL.iter().map(|k| k.name()).collect();
        Fail::usage(format!("unknown metric {metric:?} (expected one of {})", names.join(", ")))
    })?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    let m = Metric::new(kind, domain).with_config(*cfg);
    m.check_applicable()?;
    let d = m.directed(x, y)?;
    let extremal = m.extremal(x, y)?;
    let out = DistOutput { metric: kind.name(), domain: m.domain.clone(), from: d.from, to: d.to, value: d.value, extremal };
    match cli.format {
        Format::Json => print_json(&out),
        Format::Csv => print_csv(
            &["metric", "domain", "from", "to", "value", "extremal"],
            [vec![
                out.metric.to_string(),
                out.domain.name().to_string(),
                fmt_point(x),
                fmt_point(y),
                out.value.to_string(),
                extremal.map(|e| fmt_point(e.point)).unwrap_or_default(),
            ]],
        )?,
    }
    Ok(0)
}

fn cmd_compare(cli: &Cli, cfg: &Config, domain: &Domain, pairs: usize) -> CmdResult {
    if !matches!(domain, Domain::UnitDisk | Domain::UpperHalfPlane) {
        return Err(Fail::usage(format!("compare needs unit_disk or upper_half_plane, not {}", domain.name())));
    }
    let threshold = cli.tol.unwrap_or(1e-8);
    let mut rng = sampling::rng(cli.seed, 0);
    let mut cases = Vec::with_capacity(pairs);
    for k in 0..pairs {
        let (x, y) = match domain {
            Domain::UnitDisk => (sampling::disk_point(&mut rng, 0.98), sampling::disk_point(&mut rng, 0.98)),
            _ => (sampling::half_plane_point(&mut rng), sampling::half_plane_point(&mut rng)),
        };
        let closed = apollonian(domain, x, y, cfg)?;
        let oracle = apollonian_oracle_with(domain, x, y, cfg)?.value;
        let err = (closed - oracle).abs();
        cases.push(CaseRow {
            case_id: format!("compare/{}/{k:05}", domain.name()),
            input: format!("x={} y={}", fmt_point(x), fmt_point(y)),
            expected: closed,
            actual: oracle,
            abs_error: err,
            pass: err <= threshold,
        });
    }
    let max_error = cases.iter().map(|c| c.abs_error).fold(0.0, f64::max);
    let pass = max_error <= threshold;
    match cli.format {
        Format::Json => print_json(&json!({
            "domain": domain.name(),
            "seed": cli.seed,
            "pairs": pairs,
            "threshold": threshold,
            "max_error": max_error,
            "pass": pass,
            "cases": cases,
        })),
        Format::Csv => print_csv(&CASE_HEADER, cases.iter().map(case_record))?,
    }
    Ok(if pass { 0 } else { 1 })
}

fn cmd_geodesic(cli: &Cli, domain: &Domain, x: &str, y: &str, k: usize) -> CmdResult {
    if *domain != Domain::UnitDisk {
        return Err(Fail::usage("geodesic is available on unit_disk only"));
    }
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    if k < 3 {
        return Err(Fail::usage("-k must be at least 3 to check alignment"));
    }
    let tol = cli.tol.unwrap_or(1e-9);
    let arc = geodesic_arc_disk(x, y)?;
    let points = sample_arc(&arc, k);
    let forward = verify_geodesic(&points, &apollonian_disk, tol)?;
    let reversed_path: Vec<Point2> = points.iter().rev().copied().collect();
    let reversed = verify_geodesic(&reversed_path, &apollonian_disk, tol)?;
    if let Some(path) = &cli.svg {
        std::fs::write(path, svg(&points)).map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json => print_json(&geodesic_json(&arc, &points, &forward, &reversed)),
        Format::Csv => print_csv(
            &["index", "x", "y"],
            points.iter().enumerate().map(|(i, p)| vec![i.to_string(), p.re.to_string(), p.im.to_string()]),
        )?,
    }
    Ok(if forward.passed { 0 } else { 1 })
}

fn geodesic_json(arc: &GeodesicArc, points: &[Point2], forward: &GeodesicReport, reversed: &GeodesicReport) -> serde_json::Value {
    json!({
        "points": points.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
        "metadata": {
            "domain": "unit_disk",
            "metric": "apollonian",
            "defect_max": forward.max_defect,
            "triples_checked": forward.triples_checked,
            "passed": forward.passed,
            "support": arc.support,
            "orthogonality_defect": arc.support.unit_orthogonality_defect(),
            "orientation": arc.orientation,
            "exit": [arc.exit.re, arc.exit.im],
            "reversed": {
                "defect_max": reversed.max_defect,
                "worst_triple": reversed.worst,
                "informational": true,
            },
        },
    })
}

/// The unit circle and the sampled arc, y axis pointing up.
fn svg(points: &[Point2]) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{:.6} {:.6} ", if i == 0 { "M" } else { "L" }, p.re, -p.im);
    }
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"440\" height=\"440\">\n",
            "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.005\"/>\n",
            "  <path d=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"0.01\"/>\n",
            "</svg>\n"
        ),
        d.trim_end()
    )
}

fn cmd_check(cli: &Cli, cfg: &Config, suite: &str) -> CmdResult {
    let report: SuiteReport = if suite == "all" {
        run_all(cli.seed, cfg)?
    } else {
        let s: Suite = suite.parse().map_err(|_| {
            Fail::usage(format!(
                "unknown suite {suite:?} (expected axioms, identities, extremals, geodesics, separation, invariance or all)"
            ))
        })?;
        run_suite(s, cli.seed, cfg)?
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "suite": report.suite,
            "seed": report.seed,
            "passed": report.passed(),
            "cases": report.cases,
        })),
        Format::Csv => print_csv(&CASE_HEADER, report.cases.iter().map(case_record))?,
    }
    let failures: Vec<&CaseRow> = report.failures().collect();
    for c in &failures {
        eprintln!("FAIL {} {} expected={} actual={}", c.case_id, c.input, c.expected, c.actual);
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}
