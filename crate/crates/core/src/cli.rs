//! Command-line frontend.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::embed::{optimal_domain_norm, optimal_range_norm, fournier_check};
use crate::error::{Error, Result};
use crate::format::num;
use crate::kfun::{interp_norm, CoupleSpec, KProfile, Sample};
use crate::mixed::{mixed_norm, GridFn, MixedSpaceSpec};
use crate::space::{ri_norm, RiSpaceSpec};
use crate::step::StepFn;
use crate::verify::{self, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rimix", version, about = "Norms, K-functionals and embeddings for r.i. and mixed norm spaces on the unit cube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// r.i. norm of a step function
    Norm {
        #[arg(long)]
        space: RiSpaceSpec,
        #[arg(long)]
        step: PathBuf,
    },
    /// Mixed norm R(X,Y) of a grid function
    MixedNorm {
        #[arg(long = "X")]
        x: RiSpaceSpec,
        #[arg(long = "Y")]
        y: RiSpaceSpec,
        #[arg(long)]
        grid: PathBuf,
        /// Single axis (0-based) instead of the sum over all axes
        #[arg(long)]
        axis: Option<usize>,
    },
    /// K-functional profile as CSV "t,K"
    Kfun {
        #[command(flatten)]
        input: Input,
        #[arg(long = "X")]
        x: RiSpaceSpec,
        /// Evaluation points; log-spaced over [1e-3, 10] when omitted
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Real interpolation norm (X0, L∞)_{θ,q}
    Interp {
        #[command(flatten)]
        input: Input,
        #[arg(long = "X")]
        x: RiSpaceSpec,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        q: f64,
    },
    /// Optimal r.i. range ‖f*(t^{n'})‖_X of R(X,L∞)
    OptRange {
        #[arg(long = "X")]
        x: RiSpaceSpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        step: PathBuf,
    },
    /// Optimal domain norm ‖f**(t^{1/n'})‖_Z with its enclosure
    OptDomain {
        #[arg(long)]
        space: RiSpaceSpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        step: PathBuf,
    },
    /// ‖f‖_{L^{n',1}}, ‖f‖_{R(L1,L∞)} and their ratio
    Fournier {
        #[arg(long)]
        grid: PathBuf,
    },
    /// Run every property suite and write a JSON report
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    #[arg(long, conflicts_with = "step", required_unless_present = "step")]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub step: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Summary,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for report.json and counterexample dumps
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with a SuiteConfig; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Replace every floating-point tolerance
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Only suites whose id starts with this prefix (repeatable)
    #[arg(long)]
    pub only: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Summary)]
    pub format: Format,
}

pub fn load_step(path: &Path) -> Result<StepFn> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_grid(path: &Path) -> Result<GridFn> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

enum Loaded {
    Step(StepFn),
    Grid(GridFn),
}

impl Loaded {
    fn sample(&self) -> Sample<'_> {
        match self {
            Loaded::Step(f) => Sample::Step(f),
            Loaded::Grid(f) => Sample::Grid(f),
        }
    }

    fn couple(&self, x: RiSpaceSpec) -> CoupleSpec {
        match self {
            Loaded::Step(_) => CoupleSpec::RiLinf { x },
            Loaded::Grid(_) => CoupleSpec::MixedLinf { x },
        }
    }
}

fn load_input(input: &Input) -> Result<Loaded> {
    match (&input.grid, &input.step) {
        (Some(g), _) => Ok(Loaded::Grid(load_grid(g)?)),
        (None, Some(s)) => Ok(Loaded::Step(load_step(s)?)),
        (None, None) => Err(Error::Precondition("one of --grid or --step is required".into())),
    }
}

/// Runs one command, writing results to `out`; returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Norm { space, step } => {
            writeln!(out, "{}", num(ri_norm(&space, &load_step(&step)?)))?;
        }
        Command::MixedNorm { x, y, grid, axis } => {
            let f = load_grid(&grid)?;
            let spec = match axis {
                Some(k) => MixedSpaceSpec::single(x, y, k),
                None => MixedSpaceSpec::symmetric(x, y),
            };
            writeln!(out, "{}", num(mixed_norm(&f, &spec)?))?;
        }
        Command::Kfun { input, x, t, count } => {
            let f = load_input(&input)?;
            let ts = if t.is_empty() {
                KProfile::log_spaced(1e-3, 10.0, count.max(2))
            } else {
                t
            };
            let profile = KProfile::sample(f.sample(), &f.couple(x), &ts)?;
            writeln!(out, "t,K")?;
            for (t, k) in &profile.samples {
                writeln!(out, "{},{}", num(*t), num(*k))?;
            }
        }
        Command::Interp { input, x, theta, q } => {
            let f = load_input(&input)?;
            writeln!(out, "{}", num(interp_norm(f.sample(), &f.couple(x), theta, q)?))?;
        }
        Command::OptRange { x, n, step } => {
            writeln!(out, "{}", num(optimal_range_norm(&x, n, &load_step(&step)?)?))?;
        }
        Command::OptDomain { space, n, step } => {
            let d = optimal_domain_norm(&space, n, &load_step(&step)?)?;
            writeln!(out, "{}", num(d.value))?;
            writeln!(out, "enclosure {} {}", num(d.lower), num(d.upper))?;
            writeln!(out, "equivalent {} ratio {}", num(d.equivalent), num(d.ratio))?;
            if !d.boyd_reliable {
                writeln!(out, "note: upper Boyd index of {space} is not below 1/n'; the equivalence is not guaranteed")?;
            }
        }
        Command::Fournier { grid } => {
            let (l, m, r) = fournier_check(&load_grid(&grid)?)?;
            writeln!(out, "{} {} {}", num(l), num(m), num(r))?;
        }
        Command::Verify(args) => return verify_command(args, out),
    }
    Ok(EXIT_OK)
}

fn verify_command(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.tolerance.is_some() {
        config.tolerance = args.tolerance;
    }
    if !args.only.is_empty() {
        config.only = args.only.clone();
    }
    config.out_dir = args.out.clone();
    let report = verify::run(&config)?;
    match args.format {
        Format::Json => out.write_all(report.to_json().as_bytes())?,
        Format::Summary => {
            for s in &report.suites {
                let status = if s.passed { "pass" } else { "FAIL" };
                writeln!(out, "{status} {} ({} checks, {} violations)", s.id, s.checks, s.violations)?;
                if let Some(e) = &s.error {
                    writeln!(out, "     error: {e}")?;
                }
            }
            writeln!(
                out,
                "{} of {} suites passed (seed {})",
                report.suites.iter().filter(|s| s.passed).count(),
                report.suites.len(),
                report.seed
            )?;
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_PROPERTY })
}

/// Parses `args` and runs; errors go to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
