//! Command-line driver: argument parsing, input loading and report assembly.

mod commands;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use helical_core::collections::directed_subcategory;
use helical_core::dgpres::{parse_presentation, Presentation};
use helical_core::exactlin::Field;
use helical_core::report::{Status, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "helical", version, about = "Exact checks on helices of exceptional and spherical collections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// worker threads (default: all cores, or RAYON_NUM_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// write the report here instead of standard output
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// presentation file
    pub file: PathBuf,
    /// CY dimension; defaults to the file's metadata
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// helix window `lo:hi`
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(i64, i64)>,
    /// reduce all scalars modulo this prime
    #[arg(long)]
    pub prime: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// dg category axioms
    Validate(Input),
    /// self-hom dims of every object
    SphericalCheck(Input),
    /// directed subcategory of the collection
    Directed(Input),
    /// quotient by the directed part against the shifted Serre bimodule
    QuotientCheck(Input),
    /// mutation round trips and the Euler form law
    Mutate {
        #[command(flatten)]
        input: Input,
        /// 1-based slot; all slots when omitted
        #[arg(long)]
        slot: Option<usize>,
        /// mutate in this direction first; both when omitted
        #[arg(long, value_enum)]
        direction: Option<Side>,
    },
    /// right dual collection and its biorthogonality
    DualCollection(Input),
    /// helix window with recipes and the Serre invariant
    Helix(Input),
    /// forward homs of the helix window concentrated in degree 0
    Acyclic(Input),
    /// helix of the spherical collection
    SphericalHelix(Input),
    /// iterated cone against the composite of twists, on each generator
    CotwistCompare {
        #[command(flatten)]
        input: Input,
        /// also search for an explicit quasi-isomorphism
        #[arg(long)]
        search: bool,
    },
    /// homs between spheres against cones in the helix
    TheoremCheck(Input),
    /// the helix Z-algebra on the window
    Zalgebra(Input),
    /// tensor algebra pieces up to a degree
    Tensor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// rolled-up algebra computed two ways
    RolledUp {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// AS-Gorenstein certificate for each simple
    Gorenstein(Input),
    /// Hilbert function along the top diagonal and its polynomial fit
    Hilbert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        points: Option<usize>,
    },
    /// global dimension from minimal resolutions
    Gldim(Input),
    /// validate through hilbert, stopping at the first failure
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        points: Option<usize>,
    },
    /// write a presentation file for a generated family
    Generate {
        /// beilinson, dualnumbers or mkronecker
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
        #[arg(long)]
        prime: Option<u64>,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window {s:?} is not lo:hi"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
    if lo > hi {
        return Err(format!("empty window {s}"));
    }
    Ok((lo, hi))
}

pub const DEFAULT_MAX_DEGREE: usize = 3;
pub const DEFAULT_POINTS: usize = 8;
pub const DEFAULT_MAXLEN: usize = 16;

/// A loaded presentation with the parameters every command shares.
pub struct Loaded {
    pub name: String,
    pub digest: String,
    pub extension: Arc<Presentation>,
    pub d: i64,
    pub ell: usize,
    pub window: Option<(i64, i64)>,
}

impl Loaded {
    pub fn open(input: &Input) -> Result<Self> {
        let bytes = std::fs::read(&input.file).with_context(|| format!("cannot read {}", input.file.display()))?;
        let text = std::str::from_utf8(&bytes).context("input is not UTF-8")?;
        let file = parse_presentation(text).with_context(|| format!("cannot parse {}", input.file.display()))?;
        let mut p = file.presentation;
        if let Some(q) = input.prime {
            p = p.with_field(Field::prime(q)?)?;
        }
        let d = match (input.d, &file.metadata) {
            (Some(d), _) => d,
            (None, Some(m)) => m.d,
            (None, None) => bail!("no --d given and the file carries no metadata"),
        };
        let name = input.file.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        let ell = p.len();
        Ok(Self {
            name,
            digest: hex::encode(Sha256::digest(&bytes)),
            extension: Arc::new(p),
            d,
            ell,
            window: input.window,
        })
    }

    pub fn directed(&self) -> Result<Arc<Presentation>> {
        Ok(Arc::new(directed_subcategory(&self.extension)?))
    }

    /// `[1 − 2ℓ, 3ℓ]` unless given, widened to reach `need_lo` and `need_hi` when not given.
    pub fn window(&self, need_lo: Option<i64>, need_hi: Option<i64>) -> (i64, i64) {
        if let Some(w) = self.window {
            return w;
        }
        let l = self.ell as i64;
        let lo = need_lo.map_or(1 - 2 * l, |n| n.min(1 - 2 * l));
        let hi = need_hi.map_or(3 * l, |n| n.max(3 * l));
        (lo, hi)
    }

    fn header(&self, command: &str) -> Value {
        json!({"command": command, "input": {"file": self.name, "sha256": self.digest}})
    }
}

/// What a command produces: its checks and any computed data.
pub struct Outcome {
    pub parameters: Value,
    pub report: VerificationReport,
    pub data: Value,
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass | Status::Skipped => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn render(header: Value, out: Outcome) -> (String, i32) {
    let overall = out.report.overall();
    let mut v = header;
    v["parameters"] = out.parameters;
    v["checks"] = serde_json::to_value(&out.report.checks).expect("report serializes");
    v["overall"] = json!(overall);
    if !out.data.is_null() {
        v["data"] = out.data;
    }
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    (s, exit_code(overall))
}

/// Runs a parsed command; returns the text to emit and the exit status.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    if let Command::Generate { family, params, prime } = &cli.command {
        let field = match prime {
            Some(p) => Field::prime(*p)?,
            None => Field::Rational,
        };
        return Ok((commands::generate(family, params, field)?, EXIT_PASS));
    }
    let (name, input) = match &cli.command {
        Command::Validate(i) => ("validate", i),
        Command::SphericalCheck(i) => ("spherical-check", i),
        Command::Directed(i) => ("directed", i),
        Command::QuotientCheck(i) => ("quotient-check", i),
        Command::Mutate { input, .. } => ("mutate", input),
        Command::DualCollection(i) => ("dual-collection", i),
        Command::Helix(i) => ("helix", i),
        Command::Acyclic(i) => ("acyclic", i),
        Command::SphericalHelix(i) => ("spherical-helix", i),
        Command::CotwistCompare { input, .. } => ("cotwist-compare", input),
        Command::TheoremCheck(i) => ("theorem-check", i),
        Command::Zalgebra(i) => ("zalgebra", i),
        Command::Tensor { input, .. } => ("tensor", input),
        Command::RolledUp { input, .. } => ("rolled-up", input),
        Command::Gorenstein(i) => ("gorenstein", i),
        Command::Hilbert { input, .. } => ("hilbert", input),
        Command::Gldim(i) => ("gldim", i),
        Command::Pipeline { input, .. } => ("pipeline", input),
        Command::Generate { .. } => unreachable!(),
    };
    let x = Loaded::open(input)?;
    let out = match &cli.command {
        Command::Validate(_) => commands::validate(&x),
        Command::SphericalCheck(_) => commands::spherical_check(&x),
        Command::Directed(_) => commands::directed(&x),
        Command::QuotientCheck(_) => commands::quotient(&x),
        Command::Mutate { slot, direction, .. } => commands::mutate(&x, *slot, *direction),
        Command::DualCollection(_) => commands::dual_collection(&x),
        Command::Helix(_) => commands::helix(&x),
        Command::Acyclic(_) => commands::acyclic(&x),
        Command::SphericalHelix(_) => commands::spherical_helix(&x),
        Command::CotwistCompare { search, .. } => commands::cotwist(&x, *search),
        Command::TheoremCheck(_) => commands::theorem(&x),
        Command::Zalgebra(_) => commands::zalgebra(&x),
        Command::Tensor { max_degree, .. } => commands::tensor(&x, max_degree.unwrap_or(DEFAULT_MAX_DEGREE)),
        Command::RolledUp { max_degree, .. } => commands::rolled_up(&x, max_degree.unwrap_or(DEFAULT_MAX_DEGREE)),
        Command::Gorenstein(_) => commands::gorenstein(&x),
        Command::Hilbert { points, .. } => commands::hilbert(&x, points.unwrap_or(DEFAULT_POINTS)),
        Command::Gldim(_) => commands::gldim(&x),
        Command::Pipeline { points, .. } => commands::pipeline(&x, points.unwrap_or(DEFAULT_POINTS)),
        Command::Generate { .. } => unreachable!(),
    }?;
    Ok(render(x.header(name), out))
}

/// Parses `args` (program name first), runs, and writes the report. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_ERROR,
            };
            let _ = if code == EXIT_PASS { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(e.into()),
        },
        None => execute(&cli),
    };
    match result {
        Ok((text, code)) => match write_output(cli.report.as_deref(), &text, stdout) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e:#}");
                EXIT_ERROR
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn std::io::Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}
