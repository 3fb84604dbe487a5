//! `pdwass`: persistence-diagram distances, point-set embeddings, and
//! Hilbert-embeddability certificates from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse/input error,
//! 3 data invariant violation, 4 size limit exceeded.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use pdwass::{
    brute_force_wasserstein, distortion_probe, growth_table_csv, wasserstein, CertificateRecord,
    EmbeddingSpec, Error, Family, FiniteMetricSpace, Order, PartialMatching, PersistenceDiagram,
    PointSet, WassersteinResult, DEFAULT_ISOMETRY_TOL, DEFAULT_PROBE_CAP, DEFAULT_SPECTRAL_TOL,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pdwass",
    version,
    about = "Exact p-Wasserstein distances for persistence diagrams, isometric point-set \
             embeddings, and Hilbert-embeddability certificates",
    after_help = "EXIT CODES:\n  \
        0  success\n  \
        1  verification failure\n  \
        2  parse/input error\n  \
        3  data invariant violation\n  \
        4  size limit exceeded"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OrderArg {
    /// Cost exponent p (any real >= 1)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distance between two diagram CSV files
    Dist {
        /// First diagram CSV
        diagram1: PathBuf,
        /// Second diagram CSV
        diagram2: PathBuf,
        #[command(flatten)]
        order: OrderArg,
        /// Also print the optimal matching
        #[arg(long)]
        matching: bool,
    },
    /// Same distance by brute-force enumeration of all partial matchings
    Oracle {
        diagram1: PathBuf,
        diagram2: PathBuf,
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        matching: bool,
    },
    /// Embed a point set into diagram space, one diagram CSV per point
    Embed {
        /// Point-set CSV (one vector per row)
        points: PathBuf,
        #[command(flatten)]
        order: OrderArg,
        /// Output directory for the diagram files and manifest
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify that the embedding of a point set is an exact isometry
    Verify {
        points: PathBuf,
        #[command(flatten)]
        order: OrderArg,
        /// Relative tolerance for the isometry residuals
        #[arg(long, default_value_t = DEFAULT_ISOMETRY_TOL)]
        tol: f64,
    },
    /// Hilbert-embeddability certificate for a distance-matrix CSV
    Certify {
        /// Distance matrix CSV (n rows of n reals)
        matrix: PathBuf,
        /// Relative eigenvalue tolerance
        #[arg(long, default_value_t = DEFAULT_SPECTRAL_TOL)]
        tol: f64,
        /// Order to record in the certificate (informational)
        #[arg(long)]
        p: Option<f64>,
    },
    /// Obstruction growth table over a sampled metric-space family
    Probe {
        /// Family to sample: euclidean, lp, hypercube, or via-diagrams
        #[arg(long)]
        family: String,
        #[command(flatten)]
        order: OrderArg,
        /// Ascending comma-separated instance sizes
        #[arg(long)]
        sizes: String,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Size cap; defaults to PD_WASSERSTEIN_CAP or 256
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn prefixed(self, path: &Path) -> Self {
        Self {
            code: self.code,
            message: format!("{}: {}", path.display(), self.message),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Parse { .. }
            | Error::EmptyInput(_)
            | Error::NonFinite
            | Error::InvalidOrder(_) => EXIT_PARSE,
            Error::InvariantAtLine { .. }
            | Error::InvalidPoint { .. }
            | Error::InvalidMetric(_)
            | Error::InvalidMatching(_) => EXIT_INVARIANT,
            Error::SizeLimitExceeded { .. } => EXIT_LIMIT,
            Error::IsometryViolation { .. } | Error::BoundViolation { .. } => EXIT_VERIFY,
        };
        Failure::new(code, err.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<PersistenceDiagram, Failure> {
    PersistenceDiagram::from_csv_str(&read_file(path)?)
        .map_err(|e| Failure::from(e).prefixed(path))
}

fn load_points(path: &Path) -> Result<PointSet, Failure> {
    PointSet::from_csv_str(&read_file(path)?).map_err(|e| Failure::from(e).prefixed(path))
}

fn parse_order(p: f64) -> Result<Order, Failure> {
    Order::new(p).map_err(Failure::from)
}

fn print_distance(result: &WassersteinResult, matching: bool) {
    println!("{:.12}", result.distance);
    if matching {
        print_matching(&result.matching);
    }
}

fn print_matching(m: &PartialMatching) {
    let pairs = if m.pairs.is_empty() {
        "-".to_string()
    } else {
        m.pairs
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let fmt_indices = |v: &[usize]| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
        }
    };
    println!("matched: {pairs}");
    println!("unmatched1: {}", fmt_indices(&m.unmatched1));
    println!("unmatched2: {}", fmt_indices(&m.unmatched2));
}

/// Companion file for `embed`: the constants that reproduce the run plus
/// the per-point diagram files, in write order.
#[derive(Serialize)]
struct EmbedManifest {
    n: usize,
    d: usize,
    p: f64,
    c: f64,
    files: Vec<String>,
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dist {
            diagram1,
            diagram2,
            order,
            matching,
        } => {
            let o = parse_order(order.p)?;
            let d1 = load_diagram(&diagram1)?;
            let d2 = load_diagram(&diagram2)?;
            print_distance(&wasserstein(&d1, &d2, o), matching);
            Ok(())
        }
        Command::Oracle {
            diagram1,
            diagram2,
            order,
            matching,
        } => {
            let o = parse_order(order.p)?;
            let d1 = load_diagram(&diagram1)?;
            let d2 = load_diagram(&diagram2)?;
            let result = brute_force_wasserstein(&d1, &d2, o)?;
            print_distance(&result, matching);
            Ok(())
        }
        Command::Embed { points, order, out } => {
            let o = parse_order(order.p)?;
            let points = load_points(&points)?;
            let spec = EmbeddingSpec::new(points, o);
            let diagrams = spec.embed();

            fs::create_dir_all(&out)
                .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", out.display())))?;
            let mut files = Vec::with_capacity(diagrams.len());
            for (i, diagram) in diagrams.iter().enumerate() {
                let name = format!("diagram_{:03}.csv", i + 1);
                let path = out.join(&name);
                fs::write(&path, diagram.to_csv_string())
                    .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
                files.push(name);
            }
            let manifest = EmbedManifest {
                n: spec.source().len(),
                d: spec.source().dim(),
                p: o.p(),
                c: spec.c(),
                files,
            };
            let manifest_path = out.join("manifest.json");
            let body = serde_json::to_string(&manifest).expect("manifest serializes");
            fs::write(&manifest_path, body + "\n").map_err(|e| {
                Failure::new(EXIT_PARSE, format!("{}: {e}", manifest_path.display()))
            })?;
            println!(
                "wrote {} diagrams (d = {}, c = {:.12}) to {}",
                manifest.n,
                manifest.d,
                manifest.c,
                out.display()
            );
            Ok(())
        }
        Command::Verify { points, order, tol } => {
            let o = parse_order(order.p)?;
            if !tol.is_finite() || tol <= 0.0 {
                return Err(Failure::new(EXIT_PARSE, "tolerance must be positive"));
            }
            let points = load_points(&points)?;
            let spec = EmbeddingSpec::new(points, o);
            let report = spec.verify_isometry(tol)?;
            println!("pairs: {}", report.residuals.len());
            println!("max_residual: {:.12e}", report.max_residual);
            println!("isometry: ok (tolerance {tol:e})");
            Ok(())
        }
        Command::Certify { matrix, tol, p } => {
            if !tol.is_finite() || tol <= 0.0 {
                return Err(Failure::new(EXIT_PARSE, "tolerance must be positive"));
            }
            let ms = FiniteMetricSpace::from_csv_str(&read_file(&matrix)?)
                .map_err(|e| Failure::from(e).prefixed(&matrix))?;
            let record = CertificateRecord::build(&ms, p, tol);
            println!("{}", record.to_json());
            Ok(())
        }
        Command::Probe {
            family,
            order,
            sizes,
            seed,
            out,
            cap,
        } => {
            let o = parse_order(order.p)?;
            let family: Family = family.parse()?;
            let sizes = parse_sizes(&sizes)?;
            let cap = cap.or_else(env_cap).unwrap_or(DEFAULT_PROBE_CAP);
            let rows = distortion_probe(family, o, &sizes, seed, cap)?;
            let table = growth_table_csv(&rows);
            match out {
                Some(path) => fs::write(&path, table)
                    .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?,
                None => print!("{table}"),
            }
            Ok(())
        }
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    let sizes = s
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<usize>()
                .map_err(|_| Failure::new(EXIT_PARSE, format!("invalid size `{}`", f.trim())))
        })
        .collect::<Result<Vec<usize>, Failure>>()?;
    if sizes.is_empty() {
        return Err(Failure::new(EXIT_PARSE, "size list is empty"));
    }
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Failure::new(EXIT_PARSE, "sizes must be strictly ascending"));
    }
    Ok(sizes)
}

/// `PD_WASSERSTEIN_CAP` overrides the default probe cap; an explicit
/// `--cap` flag wins over both.
fn env_cap() -> Option<usize> {
    std::env::var("PD_WASSERSTEIN_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
}
