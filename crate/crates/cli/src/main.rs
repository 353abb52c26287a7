//! `cyclogon`: classify cyclic polygons, print non-convexity certificates,
//! fuzz the classifiers against each other and time them.
//!
//! Exit codes: 0 convex (or a clean fuzz run), 1 non-convex (or a fuzz run
//! with problems), 2 input or usage error, 3 internal failure.

mod report;

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cyclogon::bench::{bench, BenchConfig};
use cyclogon::fuzz::{run_fuzz, write_reproductions, FuzzConfig};
use cyclogon::io::{parse, Format, PolygonInput};
use cyclogon::patterns::certify_non_convexity;
use cyclogon::svg::{render, Highlight};
use cyclogon::{analyze_profile, analyze_vertices, Analysis, AngleProfile, Tolerance};

const EXIT_CONVEX: u8 = 0;
const EXIT_NON_CONVEX: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cyclogon",
    version,
    about = "Convexity of cyclic polygons from their central angles"
)]
struct Cli {
    /// Geometric tolerance; also read from CYCLOGON_EPS.
    #[arg(long, global = true, env = "CYCLOGON_EPS", value_name = "FLOAT")]
    eps: Option<f64>,

    /// Base seed for `fuzz` and `bench`.
    #[arg(long, global = true, default_value_t = 0, value_name = "INT")]
    seed: u64,

    /// Input file format for `classify` and `witness` (detected by default);
    /// output format for `fuzz` and `bench` (plain text by default).
    #[arg(long, global = true, value_enum)]
    format: Option<DataFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the verdict, the central angles and the winding number.
    Classify {
        /// Polygon file, or `-` for standard input.
        input: PathBuf,
        /// Add the determinant sign table (convex) or a certificate (non-convex).
        #[arg(long)]
        explain: bool,
        /// Write a diagram of the polygon.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Print a non-convexity certificate: relabelling, pattern, witness and
    /// the two determinants with their negative product.
    Witness {
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Differential run of all classifiers on generated instances.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        /// Directory for reproduction files of failing instances.
        #[arg(long, default_value = "cyclogon-repro", value_name = "DIR")]
        repro_dir: PathBuf,
        /// Keep failing instances at full size.
        #[arg(long)]
        no_shrink: bool,
    },
    /// Time the angle, determinant and hull classifiers.
    Bench {
        /// Vertex counts, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1_000, 10_000, 100_000])]
        sizes: Vec<usize>,
        /// Timed batches per measurement; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Skip the quadratic determinant classifier above this size.
        #[arg(long, default_value_t = 10_000)]
        det_limit: usize,
    },
}

/// An error with the exit code it maps to.
#[derive(Debug)]
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure(EXIT_INPUT, msg.to_string())
    }
}

fn tolerance(eps: Option<f64>) -> Result<Tolerance, Failure> {
    match eps {
        None => Ok(Tolerance::default()),
        Some(e) if e.is_finite() && e >= 0.0 => Ok(Tolerance::with_geom(e)),
        Some(e) => Err(Failure::input(format!(
            "--eps must be a finite non-negative number, got {e}"
        ))),
    }
}

fn read_input(path: &Path, format: Option<DataFormat>) -> Result<PolygonInput, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    let format = match format {
        Some(DataFormat::Json) => Format::Json,
        Some(DataFormat::Csv) => Format::Csv,
        None => Format::detect((path != Path::new("-")).then_some(path), &text),
    };
    parse(&text, format).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn analyze(input: PolygonInput, tol: Tolerance) -> Result<Analysis, Failure> {
    let result = match input {
        PolygonInput::Vertices(v) => analyze_vertices(&v, tol),
        PolygonInput::Thetas(t) => AngleProfile::new(t, tol).and_then(|p| analyze_profile(p, tol)),
    };
    result.map_err(Failure::input)
}

fn write_svg(path: &Path, analysis: &Analysis, tol: Tolerance) -> Result<(), Failure> {
    let highlight = if analysis.verdict.is_convex() {
        None
    } else {
        certify_non_convexity(&analysis.profile, tol).ok().map(|c| {
            let (i, j, k) = c.original_indices();
            Highlight {
                edge: i,
                vertices: [j, k],
            }
        })
    };
    let caption = report::headline(analysis);
    std::fs::write(path, render(&analysis.polygon, Some(&caption), highlight))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn verdict_code(analysis: &Analysis) -> u8 {
    if analysis.verdict.is_convex() {
        EXIT_CONVEX
    } else {
        EXIT_NON_CONVEX
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = tolerance(cli.eps)?;
    match cli.command {
        Command::Classify { input, explain, svg } => {
            let analysis = analyze(read_input(&input, cli.format)?, tol)?;
            print!("{}", report::classification(&analysis, tol, explain));
            if let Some(path) = svg {
                write_svg(&path, &analysis, tol)?;
            }
            Ok(verdict_code(&analysis))
        }
        Command::Witness { input, svg } => {
            let analysis = analyze(read_input(&input, cli.format)?, tol)?;
            println!("{}", report::headline(&analysis));
            if !analysis.verdict.is_convex() {
                let cert = certify_non_convexity(&analysis.profile, tol)
                    .map_err(|e| Failure(EXIT_INTERNAL, format!("no certificate: {e}")))?;
                print!("{}", report::certificate(&cert));
            } else {
                println!("no non-convexity certificate exists for a convex polygon");
            }
            if let Some(path) = svg {
                write_svg(&path, &analysis, tol)?;
            }
            Ok(verdict_code(&analysis))
        }
        Command::Fuzz {
            count,
            n_min,
            n_max,
            threads,
            repro_dir,
            no_shrink,
        } => {
            let threads = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let cfg = FuzzConfig {
                count,
                n_min,
                n_max,
                seed: cli.seed,
                threads,
                tol,
                shrink: !no_shrink,
            };
            let summary = run_fuzz(&cfg).map_err(Failure::input)?;
            match cli.format {
                None => println!("{}", summary.report()),
                Some(DataFormat::Json) => println!("{}", report::fuzz_json(&summary)),
                Some(DataFormat::Csv) => print!("{}", report::fuzz_csv(&summary)),
            }
            let written = write_reproductions(&summary, &repro_dir)
                .map_err(|e| Failure(EXIT_INTERNAL, format!("{}: {e}", repro_dir.display())))?;
            for path in &written {
                eprintln!("reproduction written to {}", path.display());
            }
            Ok(if summary.is_clean() {
                EXIT_CONVEX
            } else {
                EXIT_NON_CONVEX
            })
        }
        Command::Bench { sizes, reps, det_limit } => {
            if let Some(&n) = sizes.iter().find(|&&n| n < 3) {
                return Err(Failure::input(format!("bench sizes must be at least 3, got {n}")));
            }
            let cfg = BenchConfig {
                reps,
                seed: cli.seed,
                determinant_limit: det_limit,
            };
            let rows = bench(&sizes, &cfg).map_err(Failure::input)?;
            match cli.format {
                None => print!("{}", cyclogon::bench::to_table(&rows)),
                Some(DataFormat::Csv) => print!("{}", cyclogon::bench::to_csv(&rows)),
                Some(DataFormat::Json) => println!("{}", report::bench_json(&rows)),
            }
            Ok(EXIT_CONVEX)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclogon::EPS_GEOM;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn tolerance_flag_validation() {
        assert_eq!(tolerance(None).unwrap().geom, EPS_GEOM);
        assert_eq!(tolerance(Some(1e-6)).unwrap().geom, 1e-6);
        assert!(tolerance(Some(-1.0)).is_err());
        assert!(tolerance(Some(f64::NAN)).is_err());
    }
}
