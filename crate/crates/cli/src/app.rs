//! Subcommand dispatch. Each run writes one JSON document to the given
//! writer and returns the exit code: 0 when everything checked holds, 2 when
//! a checked property fails, 1 for usage, input and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symflat::cohomology::{dims_for, ComplexKind};
use symflat::cone::check_chain_identities;
use symflat::connection::Connection;
use symflat::forms::FormLike;
use symflat::lefschetz::decompose;
use symflat::random::Sizes;
use symflat::tty::{check_stasheff, FiberKind};
use symflat::twist::{check_square_zero, EvalMode};

use crate::config::{load_connection, JobConfig};
use crate::dsl::parse_form;
use crate::reports::*;

#[derive(Parser, Debug)]
#[command(name = "symflat", version, about = "Exact checks for symplectically flat connections and twisted primitive cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Complex {
    Prim,
    Cone,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lefschetz decomposition of a form.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        form: String,
    },
    /// Curvature, Phi and the flatness conditions of a connection.
    Flatness {
        #[arg(long)]
        connection: PathBuf,
    },
    /// Stasheff relations k = 1..4 on random primitive elements.
    AinftyCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_deg: u32,
        /// 1 for scalar values, r > 1 for r x r matrix values.
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Applies the twisted differential twice to random elements.
    TwistSquare {
        #[arg(long)]
        connection: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_deg: u32,
    },
    /// Truncated cohomology dimensions with witnesses.
    Cohomology {
        #[arg(long)]
        connection: PathBuf,
        #[arg(long, value_enum, default_value = "prim")]
        complex: Complex,
        #[arg(long, default_value_t = 5)]
        truncation: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        margins: Vec<u32>,
    },
    /// Chain-map, homotopy and exactness identities between the cone and the
    /// primitive complex.
    ConeVerify {
        #[arg(long)]
        connection: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A finished report and its exit code.
struct Outcome {
    json: String,
    code: i32,
}

fn outcome<T: Serialize>(report: &T, ok: bool) -> anyhow::Result<Outcome> {
    Ok(Outcome {
        json: serde_json::to_string_pretty(report)?,
        code: if ok { 0 } else { 2 },
    })
}

fn counterexample(inputs: Vec<String>, residual: String) -> Counterexample {
    Counterexample { inputs, residual }
}

fn not_flat(c: &Connection, config: JobConfig) -> anyhow::Result<Option<Outcome>> {
    if c.is_symplectically_flat() {
        return Ok(None);
    }
    let report = ErrorOut {
        error: "connection is not symplectically flat".into(),
        config: Some(config),
    };
    outcome(&report, false).map(Some)
}

fn execute(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Decompose { n, form } => {
            JobConfig::new(n, 1)?;
            let f = parse_form(&form, n)?;
            let comps: Vec<Component> = decompose(&f)
                .nonzero()
                .map(|(r, b)| Component { r, form: b.to_string() })
                .collect();
            outcome(&comps, true)
        }
        Command::Flatness { connection } => {
            let c = load_connection(&connection)?;
            let r = c.analyze_flatness();
            let ym = if r.f0.is_zero() { Some(matrix_out(&c.yang_mills_residual()?)) } else { None };
            let report = FlatnessOut {
                config: JobConfig::for_connection(&c),
                is_symplectically_flat: r.is_symplectically_flat,
                f: matrix_out(&r.f),
                f0: matrix_out(&r.f0),
                phi: matrix_out(&r.phi),
                d_a_phi: matrix_out(&r.d_a_phi),
                bianchi_consistent: r.bianchi_consistent,
                yang_mills_residual: ym,
            };
            outcome(&report, r.is_symplectically_flat)
        }
        Command::AinftyCheck {
            n,
            trials,
            seed,
            max_deg,
            rank,
        } => {
            let mut config = JobConfig::new(n, rank)?;
            config.seed = Some(seed);
            config.trials = Some(trials);
            config.max_deg = Some(max_deg);
            let kind = if rank == 1 { FiberKind::Scalar } else { FiberKind::Matrix(rank) };
            let sizes = Sizes {
                max_deg,
                ..Sizes::default()
            };
            let relations: Vec<RelationOut> = check_stasheff(n, kind, 4, trials, seed, &sizes)?
                .into_iter()
                .map(|r| RelationOut {
                    k: r.k,
                    trials: r.trials,
                    failures: r.failures,
                    counterexample: r
                        .counterexample
                        .map(|(ins, res)| counterexample(ins.iter().map(|e| e.to_string()).collect(), res.to_string())),
                })
                .collect();
            let passed = relations.iter().all(|r| r.failures == 0);
            outcome(&AinftyOut { config, passed, relations }, passed)
        }
        Command::TwistSquare {
            connection,
            trials,
            seed,
            max_deg,
        } => {
            let c = load_connection(&connection)?;
            let mut config = JobConfig::for_connection(&c);
            config.seed = Some(seed);
            config.trials = Some(trials);
            config.max_deg = Some(max_deg);
            let sizes = Sizes {
                max_deg,
                ..Sizes::default()
            };
            let r = check_square_zero(&c, trials, seed, &sizes, EvalMode::Checked)?;
            let report = TwistSquareOut {
                config,
                flat: r.flat,
                residual_failures: r.failures,
                witness: r.witness.map(|(b, v)| counterexample(vec![b.to_string()], v.to_string())),
            };
            outcome(&report, r.failures == 0)
        }
        Command::Cohomology {
            connection,
            complex,
            truncation,
            margins,
        } => {
            let c = load_connection(&connection)?;
            let mut config = JobConfig::for_connection(&c);
            config.truncation = Some(truncation);
            config.margins = Some(margins.clone());
            if let Some(o) = not_flat(&c, config.clone())? {
                return Ok(o);
            }
            let kind = match complex {
                Complex::Prim => ComplexKind::Primitive,
                Complex::Cone => ComplexKind::Cone,
            };
            let r = dims_for(&c, kind, truncation, &margins)?;
            let report = CohomologyOut {
                config: JobConfig {
                    margins: Some(r.margins.clone()),
                    ..config
                },
                complex: kind.to_string(),
                stabilized: r.stabilized(),
                dims: r.dims(),
                positions: r
                    .positions
                    .iter()
                    .map(|p| PositionOut {
                        position: p.label.clone(),
                        grading: p.grading,
                        dim: p.dim,
                        stabilized: p.stabilized,
                        by_margin: p.by_margin.iter().map(|(margin, dim)| MarginDim { margin: *margin, dim: *dim }).collect(),
                        witnesses: p.witnesses.iter().map(|w| w.components()).collect(),
                    })
                    .collect(),
            };
            let ok = report.stabilized;
            outcome(&report, ok)
        }
        Command::ConeVerify { connection, trials, seed } => {
            let c = load_connection(&connection)?;
            let mut config = JobConfig::for_connection(&c);
            config.seed = Some(seed);
            config.trials = Some(trials);
            if let Some(o) = not_flat(&c, config.clone())? {
                return Ok(o);
            }
            let r = check_chain_identities(&c, trials, seed, &Sizes::default(), &[])?;
            let identities: Vec<IdentityOut> = r
                .checks
                .iter()
                .map(|i| IdentityOut {
                    name: i.name.to_string(),
                    checked: i.checked,
                    failures: i.failures,
                    passed: i.passed(),
                    counterexample: i.counterexample.clone().map(|(input, res)| counterexample(vec![input], res)),
                })
                .collect();
            let passed = r.passed();
            outcome(&ConeVerifyOut { config, passed, identities }, passed)
        }
    }
}

/// Runs the command line `argv` (program name first), writing the report to
/// `out`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            return write_error(out, &e.to_string());
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            if writeln!(out, "{}", o.json).is_err() {
                return 1;
            }
            o.code
        }
        Err(e) => write_error(out, &format!("{e:#}")),
    }
}

fn write_error(out: &mut dyn Write, message: &str) -> i32 {
    let report = ErrorOut {
        error: message.trim_end().to_string(),
        config: None,
    };
    let json = serde_json::to_string_pretty(&report).expect("serializable");
    let _ = writeln!(out, "{json}");
    1
}

/// [`run_with`] on standard output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(argv, &mut lock)
}
