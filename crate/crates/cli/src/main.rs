//! `projmetric`: distance, center, classification and orbit experiments on
//! Hilbert and Minkowski planes.
//!
//! Exit codes: 0 success, 2 domain error, 3 invalid arguments or body spec,
//! 4 I/O error.

mod num;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use projmetric::{
    classify_with, construct_point_reflection, kronecker_orbit, max_gap, scan_centers_with, BodySpec, ConvexBody64,
    GeometryError, MetricSpace64, Point64, ScanConfig,
};

#[derive(Debug, Parser)]
#[command(name = "projmetric", version, about = "Experiments on Hilbert and Minkowski planes")]
struct Cli {
    /// Body spec (JSON). Defaults to the unit disk.
    #[arg(long, global = true)]
    body: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = SpaceKind::Hilbert)]
    space: SpaceKind,
    /// Seed for the randomized isometry checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Tolerance override, `fit=<v>` or `conic=<v>`; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(TolKey, f64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    Hilbert,
    Minkowski,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TolKey {
    Fit,
    Conic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance between two points.
    Dist {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        from: Point64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        to: Point64,
    },
    /// Metric midpoint of two points.
    Midpoint {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        from: Point64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        to: Point64,
    },
    /// Projective-center test on a grid×grid lattice inside the body.
    Centers {
        #[arg(long, default_value_t = 7)]
        grid: usize,
    },
    /// Symmetry verdict from a center scan and a conic fit.
    Classify {
        #[arg(long, default_value_t = 7)]
        grid: usize,
    },
    /// Kronecker orbit {2ip - 2jq} inside a range.
    Orbit {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// `lo..hi`
        #[arg(long, allow_hyphen_values = true, default_value = "0..10", value_parser = parse_range)]
        range: (f64, f64),
        /// Bound on |i| + |j|.
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
    /// Point reflection at a center applied to points.
    Reflect {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        center: Point64,
        /// CSV file of `x,y` rows.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long = "point", allow_hyphen_values = true, value_parser = parse_point)]
        point: Vec<Point64>,
    },
}

enum Failure {
    Domain(GeometryError),
    Spec(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Domain(_) => 2,
            Self::Spec(_) => 3,
            Self::Io(_) => 4,
        }
    }

    fn report(&self) -> String {
        match self {
            Self::Domain(e) => format!("error[{}]: {e}", e.kind()),
            Self::Spec(msg) => format!("error[InvalidSpec]: {msg}"),
            Self::Io(msg) => format!("error[IOError]: {msg}"),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Self::Domain(e)
    }
}

fn parse_point(s: &str) -> Result<Point64, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    match (parse(x), parse(y)) {
        (Some(x), Some(y)) => Ok(Point64::new(x, y)),
        _ => Err(format!("expected two finite numbers, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    Ok((lo, hi))
}

fn parse_tol(s: &str) -> Result<(TolKey, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let key = match key.trim() {
        "fit" => TolKey::Fit,
        "conic" => TolKey::Conic,
        other => return Err(format!("unknown tolerance {other:?} (known: fit, conic)")),
    };
    match value.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok((key, v)),
        _ => Err(format!("tolerance must be a positive number, got {value:?}")),
    }
}

fn load_body(path: Option<&Path>) -> Result<ConvexBody64, Failure> {
    let Some(path) = path else {
        return Ok(ConvexBody64::unit_disk());
    };
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let spec = BodySpec::from_json(&text).map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))?;
    spec.to_body().map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))
}

fn load_space(cli: &Cli) -> Result<MetricSpace64, Failure> {
    let body = load_body(cli.body.as_deref())?;
    match cli.space {
        SpaceKind::Hilbert => Ok(MetricSpace64::hilbert(body)),
        SpaceKind::Minkowski => MetricSpace64::minkowski(body)
            .map_err(|e| Failure::Spec(format!("indicatrix must be centrally symmetric: {e}"))),
    }
}

fn scan_config(cli: &Cli, grid: usize) -> ScanConfig<f64> {
    let mut config = ScanConfig { grid, seed: cli.seed, ..ScanConfig::default() };
    for &(key, value) in &cli.tol {
        match key {
            TolKey::Fit => config.fit_tol = value,
            TolKey::Conic => config.conic_tol = value,
        }
    }
    config
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let format = cli.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(Failure::Spec(format!("format {format:?} is not supported by this command").to_lowercase()))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| num::fmt(v)).collect();
    cells.join(",")
}

#[derive(Serialize)]
struct CenterRow {
    x: f64,
    y: f64,
    residual: f64,
    misses_body: bool,
    is_center: bool,
    isometry_error: Option<f64>,
}

#[derive(Serialize)]
struct Verdict {
    kind: &'static str,
    center_fraction: f64,
    conic_residual: f64,
    grid: usize,
}

#[derive(Serialize)]
struct Orbit {
    values: Vec<f64>,
    max_gap: f64,
}

fn read_points(path: &Path) -> Result<Vec<Point64>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))?;
        let bad = || Failure::Spec(format!("{}: row {} is not x,y", path.display(), line + 1));
        if record.len() != 2 {
            return Err(bad());
        }
        let x = record[0].parse::<f64>();
        let y = record[1].parse::<f64>();
        match (x, y) {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => points.push(Point64::new(x, y)),
            // a header row
            _ if line == 0 && record[0].parse::<f64>().is_err() => {}
            _ => return Err(bad()),
        }
    }
    Ok(points)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match &cli.command {
        Command::Dist { from, to } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
            let d = load_space(cli)?.distance(from, to)?;
            match format {
                Format::Json => out = json(&serde_json::json!({ "distance": num::rounded(d) })),
                _ => writeln!(out, "{}", num::fmt(d)).unwrap(),
            }
        }
        Command::Midpoint { from, to } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
            let m = load_space(cli)?.metric_midpoint(from, to)?;
            match format {
                Format::Json => out = json(&serde_json::json!({ "x": num::rounded(m.x), "y": num::rounded(m.y) })),
                _ => writeln!(out, "{}", csv_row(&[m.x, m.y])).unwrap(),
            }
        }
        Command::Centers { grid } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?;
            let space = load_space(cli)?;
            let reports = scan_centers_with(&space, &scan_config(cli, *grid))?;
            match format {
                Format::Csv => {
                    out.push_str("x,y,residual,misses_body,is_center,isometry_error\n");
                    for r in &reports {
                        let iso = r.reflection_isometry_error.map(num::fmt).unwrap_or_default();
                        let head = csv_row(&[r.point.x, r.point.y, r.fit_residual]);
                        writeln!(out, "{head},{},{},{iso}", r.line_misses_body, r.is_projective_center).unwrap();
                    }
                }
                Format::Json => {
                    let rows: Vec<CenterRow> = reports
                        .iter()
                        .map(|r| CenterRow {
                            x: num::rounded(r.point.x),
                            y: num::rounded(r.point.y),
                            residual: num::rounded(r.fit_residual),
                            misses_body: r.line_misses_body,
                            is_center: r.is_projective_center,
                            isometry_error: r.reflection_isometry_error.map(num::rounded),
                        })
                        .collect();
                    out = json(&rows);
                }
                Format::Svg => out = svg::heat_map(space.body(), &reports, *grid),
            }
        }
        Command::Classify { grid } => {
            let format = format_or(cli, Format::Json, &[Format::Csv, Format::Json])?;
            let v = classify_with(&load_space(cli)?, &scan_config(cli, *grid))?;
            let verdict = Verdict {
                kind: v.kind.as_str(),
                center_fraction: num::rounded(v.center_fraction),
                conic_residual: num::rounded(v.conic_residual),
                grid: v.grid,
            };
            match format {
                Format::Json => out = json(&verdict),
                _ => {
                    out.push_str("kind,center_fraction,conic_residual,grid\n");
                    let nums = csv_row(&[v.center_fraction, v.conic_residual]);
                    writeln!(out, "{},{nums},{}", verdict.kind, v.grid).unwrap();
                }
            }
        }
        Command::Orbit { p, q, range, iters } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
            let (lo, hi) = *range;
            let values = kronecker_orbit(*p, *q, lo, hi, *iters)?;
            let gap = max_gap(&values, lo, hi);
            match format {
                Format::Json => {
                    out = json(&Orbit {
                        values: values.iter().map(|&v| num::rounded(v)).collect(),
                        max_gap: num::rounded(gap),
                    })
                }
                _ => {
                    for v in &values {
                        writeln!(out, "{}", num::fmt(*v)).unwrap();
                    }
                    writeln!(out, "max_gap={}", num::fmt(gap)).unwrap();
                }
            }
        }
        Command::Reflect { center, points, point } => {
            format_or(cli, Format::Csv, &[Format::Csv])?;
            let mut inputs = match points {
                Some(path) => read_points(path)?,
                None => Vec::new(),
            };
            inputs.extend(point.iter().copied());
            if inputs.is_empty() {
                return Err(Failure::Spec("reflect needs --points or at least one --point".into()));
            }
            let space = load_space(cli)?;
            if !space.is_admissible(center) {
                return Err(GeometryError::PointOutside { x: center.x, y: center.y }.into());
            }
            let reflection = construct_point_reflection(&space, center)?;
            let images = inputs.iter().map(|x| reflection.apply(x)).collect::<Result<Vec<_>, _>>()?;
            out.push_str("x,y,rx,ry,d_before,d_after\n");
            for (i, (x, rx)) in inputs.iter().zip(&images).enumerate() {
                // pair with the next point, or with the (fixed) center when alone
                let (y, ry) = if inputs.len() == 1 {
                    (*center, *center)
                } else {
                    let j = (i + 1) % inputs.len();
                    (inputs[j], images[j])
                };
                let before = space.distance(x, &y)?;
                let after = space.distance(rx, &ry)?;
                writeln!(out, "{}", csv_row(&[x.x, x.y, rx.x, rx.y, before, after])).unwrap();
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.report());
            ExitCode::from(failure.code())
        }
    }
}
