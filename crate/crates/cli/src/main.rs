mod commands;
mod input;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Translation surfaces, rational billiards and wind-tree experiments.
#[derive(Parser, Debug)]
#[command(name = "flatsurf", version)]
pub struct Cli {
    /// Worker threads. Defaults to FLATSURF_THREADS, or 1 when unset.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate surface or polygon files.
    Validate { files: Vec<String> },
    /// Stratum, genus, area and cone points of a surface (or angles of a polygon).
    Info { file: String },
    /// Unfold a rational polygon into a translation surface.
    Unfold {
        #[arg(required_unless_present = "check_octagon")]
        file: Option<String>,
        /// Instead check that the π/8 right triangle unfolds to the regular octagon.
        #[arg(long)]
        check_octagon: bool,
        /// Largest reflection group accepted.
        #[arg(long, default_value_t = flatsurf::unfold::DEFAULT_GROUP_BOUND)]
        bound: usize,
    },
    /// Canonical presentation of a surface.
    Canonicalize { file: String },
    /// Decide whether two files present the same surface. Exit 1 when not.
    Equiv { a: String, b: String },
    /// Apply a real 2x2 matrix `a,b,c,d` (rows first) to a surface.
    Apply {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Systole along the Teichmüller geodesic g_t.
    GtOrbit {
        file: String,
        #[arg(long, alias = "tmax", default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.5)]
        dt: f64,
        /// Tolerance of the floating-point shadow.
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Billiard trajectory in a polygon.
    Billiard {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long)]
        length: f64,
        /// Use floating point instead of exact arithmetic.
        #[arg(long)]
        float: bool,
        /// Write an SVG drawing here.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Straight-line flow on a surface, with discrepancy at each length.
    Flow {
        file: String,
        /// Label of the polygon holding the start point; the first by default.
        #[arg(long)]
        polygon: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        /// Comma-separated lengths.
        #[arg(long)]
        lengths: String,
        /// Discrepancy grid is `grid x grid` per polygon.
        #[arg(long, default_value_t = 4)]
        grid: usize,
        #[arg(long)]
        float: bool,
        /// SVG of the trajectory at the first length.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Search for a billiard path between two points. Exit 1 when none is found.
    Illuminate {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        length: f64,
    },
    /// Saddle connections of length at most L.
    Count {
        file: String,
        #[arg(long, alias = "L")]
        length: f64,
        #[arg(long)]
        svg: Option<String>,
    },
    /// Saddle connection counts N(L), N(L)/L² and their Cesàro average.
    Growth {
        file: String,
        /// Comma-separated lengths, increasing.
        #[arg(long, alias = "Ls")]
        lengths: String,
    },
    /// Generalized diagonals of a polygon up to length L.
    Diagonals {
        file: String,
        #[arg(long, alias = "L")]
        length: f64,
    },
    /// Wind-tree ensemble: displacement series and a diffusion exponent.
    Windtree {
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        /// Path length of each run.
        #[arg(long = "T", default_value_t = 1e5)]
        t_total: f64,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Decades of time used in the fit.
        #[arg(long, default_value_t = 2.0)]
        window: f64,
        /// SVG of the first run, cut to `svg-length`.
        #[arg(long)]
        svg: Option<String>,
        #[arg(long, default_value_t = 60.0)]
        svg_length: f64,
    },
    /// SVG drawing of a surface or polygon.
    Render {
        file: String,
        /// Output path; standard output by default.
        #[arg(long)]
        out: Option<String>,
    },
}

/// A non-zero exit: 1 for a negative domain answer, 2 for errors.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn error(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    /// A "no" answer; the message goes to standard output.
    pub fn no(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::error(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn threads(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("FLATSURF_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::error(format!("FLATSURF_THREADS: bad value '{v}'"))),
        Err(_) => Ok(1),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let n = threads(cli.threads)?;
    if n == 0 {
        return Err(Failure::error("thread count must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::error(e.to_string()))?;
    commands::dispatch(cli.cmd)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) if f.code == 1 => {
            println!("{}", f.message);
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
