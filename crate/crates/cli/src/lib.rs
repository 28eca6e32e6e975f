//! `qlorentz` command line: subcommands for diagrams, weight systems,
//! coloured Jones series, the Lorentz invariant, quantum Lorentz braid sums
//! and the acceptance suite.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 resource guard,
//! 4 failed consistency check (the failing identity is named on stderr).

pub mod commands;
pub mod config;
pub mod output;

use clap::{Args, Parser, Subcommand};
use config::{FileConfig, Format, Overrides, RunConfig, CACHE_ENV};
use qlorentz::Error;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qlorentz", version, about = "h-adic knot invariants from sl2 and the quantum Lorentz group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML file with defaults for any of: order, precision, cutoff, format,
    /// braid, knot, m, p, workers, cache_dir.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Truncation order N (highest power of h kept).
    #[arg(long)]
    pub order: Option<usize>,
    /// Working precision D in decimal digits (at least 30).
    #[arg(long)]
    pub precision: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// A knot given as a braid word or a catalog name.
#[derive(Args, Debug, Clone, Default)]
pub struct KnotArgs {
    /// Braid word such as "s1 -s2 s1 -s2".
    #[arg(long, allow_hyphen_values = true)]
    pub braid: Option<String>,
    /// Catalog name: unknot, trefoil-right (T+), trefoil-left (T-), figure-eight.
    #[arg(long)]
    pub knot: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate chord diagrams, 4T relations or quotient dimensions.
    Diagrams {
        /// Number of chords.
        #[arg(long, default_value_t = 2)]
        chords: usize,
        /// List the 4T relations instead of the diagrams.
        #[arg(long, conflicts_with = "dimensions")]
        relations: bool,
        /// Dimensions of the quotient by 4T for 0..=chords.
        #[arg(long)]
        dimensions: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Central-character values of weight systems on chord diagrams.
    Weights {
        /// Gauss word of a diagram, e.g. ABAB; repeatable. Defaults to all
        /// diagrams with --chords chords.
        #[arg(long = "diagram")]
        diagrams: Vec<String>,
        #[arg(long, default_value_t = 2)]
        chords: usize,
        /// sl2 (polynomials in z) or lorentz (polynomials in p).
        #[arg(long, value_enum, default_value_t = commands::Algebra::Lorentz)]
        algebra: commands::Algebra,
        /// Lorentz route: direct module action, factorized, or both compared.
        #[arg(long, value_enum, default_value_t = commands::Route::Factorized)]
        route: commands::Route,
        /// Minimal spin m of the Lorentz module.
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Coloured Jones series of a knot, at one spin or interpolated in z.
    Jones {
        #[command(flatten)]
        knot: KnotArgs,
        /// Spin such as 1, 3/2.
        #[arg(long, conflicts_with = "interpolate")]
        spin: Option<String>,
        /// Interpolate in the spin z (the default).
        #[arg(long)]
        interpolate: bool,
        /// Keep the blackboard framing of the braid (with --spin).
        #[arg(long, requires = "spin")]
        blackboard: bool,
        #[command(flatten)]
        common: Common,
    },
    /// The Lorentz invariant X(m, p, K), optionally checked against the braid sum.
    Lorentz {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        /// Evaluate at this p instead of printing polynomials in p.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Compare the braid sum at integer p with the Jones side.
        #[arg(long, requires = "p")]
        check_equivalence: bool,
        /// Target framing relative to zero framing.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        framing: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Braid sums and Λ coefficients of the quantum Lorentz group.
    Qlg {
        #[command(flatten)]
        knot: KnotArgs,
        /// Number, complex number such as 1/2+i, or "symbolic".
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Spin cutoff of the state space (at least the order).
        #[arg(long)]
        cutoff: Option<u32>,
        /// Print Λ^{ABC}_D for doubled labels "2A,2B,2C,2D" instead of a braid sum.
        #[arg(long, value_name = "LABELS")]
        lambda: Option<String>,
        /// Evaluate the closed-form trefoil sum instead of a braid.
        #[arg(long, conflicts_with = "lambda")]
        closed_trefoil: bool,
        /// Keep every term instead of dropping those beyond the order.
        #[arg(long)]
        no_prune: bool,
        /// Refuse walks with more live states than this.
        #[arg(long, default_value_t = qlorentz::qlg::DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Directory for the quantum CG cache; also read from QLORENTZ_CACHE_DIR.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite; exits 4 if any criterion fails.
    Verify {
        /// Run only these criteria (comma separated numbers).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Diagrams { common, .. }
            | Command::Weights { common, .. }
            | Command::Jones { common, .. }
            | Command::Lorentz { common, .. }
            | Command::Qlg { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }

    fn overrides(&self) -> Overrides {
        let c = self.common();
        let mut o = Overrides {
            order: c.order,
            precision: c.precision,
            format: c.format,
            workers: c.workers,
            ..Default::default()
        };
        let knot = |o: &mut Overrides, k: &KnotArgs| {
            o.braid = k.braid.clone();
            o.knot = k.knot.clone();
        };
        match self {
            Command::Weights { m, .. } => o.m = *m,
            Command::Jones { knot: k, .. } => knot(&mut o, k),
            Command::Lorentz { knot: k, m, p, .. } => {
                knot(&mut o, k);
                o.m = *m;
                o.p = p.clone();
            }
            Command::Qlg { knot: k, p, cutoff, cache_dir, .. } => {
                knot(&mut o, k);
                o.p = p.clone();
                o.cutoff = *cutoff;
                o.cache_dir = cache_dir.clone();
            }
            Command::Diagrams { .. } | Command::Verify { .. } => {}
        }
        o
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Invalid(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Consistency(_) => EXIT_CONSISTENCY,
    }
}

/// Parse `args` (program name first), run, write the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let file = match &cmd.common().config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let env_cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let cfg = RunConfig::resolve(cmd.overrides(), file, env_cache)?;
    let work = || commands::dispatch(cmd, &cfg);
    let outcome = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Resource(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    }?;
    for note in &outcome.notes {
        let _ = writeln!(err, "note: {note}");
    }
    outcome.report.emit(cfg.format, out).map_err(|e| Error::Resource(format!("write failed: {e}")))?;
    if let Some(identity) = &outcome.failed {
        let _ = writeln!(err, "consistency check failed: {identity}");
        return Ok(EXIT_CONSISTENCY);
    }
    Ok(0)
}
