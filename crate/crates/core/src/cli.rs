//! Command-line front end. Every command reads JSON files and writes JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bridge::{cross_check_with, first_to_second, second_to_first};
use crate::error::{Error, Result};
use crate::fock::{FockVector, Statistics};
use crate::gmw::{ClassifierRegistry, Symmetry, TwoParticleState};
use crate::modesep::{DeciderOptions, DeciderRegistry, ModeBipartition, DEFAULT_PAIR_BUDGET, DEFAULT_TOL};
use crate::opexpr::{expectation, normal_order, parse};
use crate::random::{generate_random, RandomState};
use crate::wire::{
    parse_state, to_pretty, ClassificationJson, ComplexJson, CrossCheckJson, FockVectorJson, StateInput,
    TwoParticleJson, VerdictJson,
};

#[derive(Debug, Parser)]
#[command(
    name = "fock-sep",
    version,
    about = "Fock-space algebra and identical-particle separability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticsArg {
    Bose,
    Fermi,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Bose => Statistics::Bose,
            StatisticsArg::Fermi => Statistics::Fermi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    Sym,
    Antisym,
    None,
}

impl From<SymmetryArg> for Symmetry {
    fn from(s: SymmetryArg) -> Self {
        match s {
            SymmetryArg::Sym => Symmetry::Symmetric,
            SymmetryArg::Antisym => Symmetry::Antisymmetric,
            SymmetryArg::None => Symmetry::None,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mode separability by the rank of the coefficient matrix (or another decider).
    Analyze {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        bipartition: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value = "rank")]
        decider: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Property-attribution classification of a two-particle state.
    Gmw {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value = "takagi")]
        classifier: String,
    },
    /// Converts between the coefficient-matrix and Fock representations.
    Convert {
        #[arg(long)]
        state: PathBuf,
        /// Target representation; defaults to the other one.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Normal form of an operator expression, and its expectation on a state.
    Expr {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        state: Option<PathBuf>,
        /// Statistics for the normal form when no state is given.
        #[arg(long, value_enum, default_value = "bose")]
        statistics: StatisticsArg,
    },
    /// Mode separability by testing factorization of local correlations.
    Oracle {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        bipartition: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Maximum number of monomial pairs to examine.
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        budget: usize,
    },
    /// Seeded random state.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 2)]
        particles: usize,
        #[arg(long, value_enum, default_value = "bose")]
        statistics: StatisticsArg,
        /// Draw a coefficient matrix with this exchange symmetry.
        #[arg(long, value_enum)]
        symmetry: Option<SymmetryArg>,
        #[arg(long, value_enum, default_value = "second")]
        format: Format,
    },
    /// Compares property attribution with mode separability.
    Crosscheck {
        #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
        state: Option<PathBuf>,
        /// JSON array of states; reports are returned in input order.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value = "takagi")]
        classifier: String,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<StateInput> {
    parse_state(&read(path)?)
}

fn read_fock(path: &Path) -> Result<FockVector> {
    match read_state(path)? {
        StateInput::Fock(v) => Ok(v),
        StateInput::TwoParticle(t) => first_to_second(&t),
    }
}

fn read_two_particle(path: &Path) -> Result<TwoParticleState> {
    match read_state(path)? {
        StateInput::Fock(v) => second_to_first(&v),
        StateInput::TwoParticle(t) => Ok(t),
    }
}

#[derive(Serialize)]
struct ExprJson {
    normal_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    expectation: Option<ComplexJson>,
}

/// Executes a parsed command and returns its JSON output.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Analyze {
            state,
            bipartition,
            tol,
            decider,
            max_degree,
        } => {
            let v = read_fock(state)?;
            let b = ModeBipartition::parse(bipartition, v.num_modes())?;
            let opts = DeciderOptions {
                tol: *tol,
                max_degree: *max_degree,
                ..DeciderOptions::default()
            };
            let verdict = DeciderRegistry::with_defaults().get(decider)?.decide(&v, &b, &opts)?;
            Ok(to_pretty(&VerdictJson::from(&verdict)))
        }
        Command::Gmw { state, classifier } => {
            let t = read_two_particle(state)?;
            let c = ClassifierRegistry::with_defaults().get(classifier)?.classify(&t)?;
            Ok(to_pretty(&ClassificationJson::from(&c)))
        }
        Command::Convert { state, format } => match (read_state(state)?, format) {
            (StateInput::Fock(v), None | Some(Format::First)) => {
                Ok(to_pretty(&TwoParticleJson::from(&second_to_first(&v)?)))
            }
            (StateInput::Fock(v), Some(Format::Second)) => Ok(to_pretty(&FockVectorJson::from(&v))),
            (StateInput::TwoParticle(t), None | Some(Format::Second)) => {
                Ok(to_pretty(&FockVectorJson::from(&first_to_second(&t)?)))
            }
            (StateInput::TwoParticle(t), Some(Format::First)) => Ok(to_pretty(&TwoParticleJson::from(&t))),
        },
        Command::Expr {
            expr,
            state,
            statistics,
        } => {
            let e = parse(expr)?;
            let out = match state {
                Some(path) => {
                    let v = read_fock(path)?;
                    ExprJson {
                        normal_form: normal_order(&e, v.statistics()).to_string(),
                        expectation: Some(expectation(&e, &v.normalized()?)?.into()),
                    }
                }
                None => ExprJson {
                    normal_form: normal_order(&e, (*statistics).into()).to_string(),
                    expectation: None,
                },
            };
            Ok(to_pretty(&out))
        }
        Command::Oracle {
            state,
            bipartition,
            tol,
            max_degree,
            budget,
        } => {
            let v = read_fock(state)?;
            let b = ModeBipartition::parse(bipartition, v.num_modes())?;
            let opts = DeciderOptions {
                tol: *tol,
                max_degree: *max_degree,
                pair_budget: *budget,
            };
            let verdict = DeciderRegistry::with_defaults()
                .get("correlation")?
                .decide(&v, &b, &opts)?;
            Ok(to_pretty(&VerdictJson::from(&verdict)))
        }
        Command::Random {
            seed,
            modes,
            particles,
            statistics,
            symmetry,
            format,
        } => {
            let stats: Statistics = (*statistics).into();
            let symmetry = match (symmetry, format) {
                (Some(s), _) => Some((*s).into()),
                (None, Format::First) => Some(match stats {
                    Statistics::Bose => Symmetry::Symmetric,
                    Statistics::Fermi => Symmetry::Antisymmetric,
                }),
                (None, Format::Second) => None,
            };
            match generate_random(*seed, *modes, *particles, stats, symmetry)? {
                RandomState::Fock(v) => Ok(to_pretty(&FockVectorJson::from(&v))),
                RandomState::TwoParticle(t) => match format {
                    Format::First => Ok(to_pretty(&TwoParticleJson::from(&t))),
                    Format::Second => Ok(to_pretty(&FockVectorJson::from(&first_to_second(&t)?))),
                },
            }
        }
        Command::Crosscheck {
            state,
            batch,
            tol,
            classifier,
        } => {
            let classifier = ClassifierRegistry::with_defaults().get(classifier)?;
            if let Some(path) = state {
                let t = read_two_particle(path)?;
                let report = cross_check_with(&t, classifier.as_ref(), *tol)?;
                return Ok(to_pretty(&CrossCheckJson::from(&report)));
            }
            let path = batch.as_ref().expect("clap enforces --state or --batch");
            let items: Vec<serde_json::Value> = serde_json::from_str(&read(path)?)?;
            let reports = items
                .par_iter()
                .map(|item| {
                    let t = match parse_state(&item.to_string())? {
                        StateInput::Fock(v) => second_to_first(&v)?,
                        StateInput::TwoParticle(t) => t,
                    };
                    cross_check_with(&t, classifier.as_ref(), *tol).map(|r| CrossCheckJson::from(&r))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(to_pretty(&reports))
        }
    }
}

/// Parses `args`, runs the command and writes the result to `stdout` (or the
/// `--out` file). Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let result = execute(&cli).and_then(|json| match &cli.out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => writeln!(stdout, "{json}").map_err(Error::from),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
