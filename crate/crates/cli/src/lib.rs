//! Command-line front end. [`run`] parses arguments and returns the exit
//! code with everything that should go to stdout and stderr, so the binary
//! is a thin wrapper and tests can call it in-process.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use envequiv::gallery::gallery;
use envequiv::io::{
    bisimulation_to_json, certificate_to_json, check_signal_alphabet, environment_to_json,
    environment_to_string, map_from_json, map_to_json, parse_environment, parse_signal,
    sampled_to_json, signal_to_json, state_to_json, to_dot, trace_to_json, MapJson, RationalJson,
};
use envequiv::{
    check_equiv_sampled, compute_bisimulation, cyclic_cover, edge_voltages,
    lift_state_path, parse_rational, universal_cover_truncation, verify_covering,
    BisimulationResult, Env, Error, Motion, Rational, SampledVerdict, SamplingParams, Signal,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISTINGUISHED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "envequiv", version, about = "Trace equivalence of ported metric-graph environments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensor trace and final state of a signal applied from the start vertex.
    Trace {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        signal: PathBuf,
    },
    /// L1 distance between two signals.
    Metric {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Point on the geodesic from `left` (at 0) to `right` (at 1).
    Geodesic {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Rational in [0, 1], e.g. 1/2.
        #[arg(long)]
        at: String,
    },
    /// Verify that a map is a covering of `base` by `cover`.
    CheckCover {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Lift a base signal's trajectory to the cover.
    Lift {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        signal: PathBuf,
    },
    /// k-fold cyclic cover from per-edge voltages.
    GenCyclic {
        #[arg(long)]
        env: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Comma-separated voltage of each edge in tail-to-head direction.
        #[arg(long, value_delimiter = ',')]
        voltage: Vec<usize>,
    },
    /// Universal cover cut off at a metric radius around the start vertex.
    GenUniversal {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        radius: String,
    },
    /// Sampled trace comparison: all discrete signals up to --max-len, then random ones.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 6)]
        max_pieces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact decision by bisimulation (unit edge lengths only).
    Bisim {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Shortest discrete distinguishing signal up to --max-len, if any.
    Distinguish {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Extra random signals tried after the discrete ones.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the built-in example pairs as environment and DOT files.
    Gallery {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, value: &Value, summary: String) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("plain data");
        stdout.push('\n');
        Outcome {
            code,
            stdout,
            stderr: summary + "\n",
        }
    }

    fn error(err: &CliError) -> Self {
        Outcome {
            code: err.code(),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn code(&self) -> i32 {
        let core = match self {
            CliError::Io { .. } => return EXIT_INVALID,
            CliError::Input { source, .. } | CliError::Core(source) => source,
        };
        match core {
            Error::Validation(_) | Error::Json(_) | Error::Structural { .. } => EXIT_INVALID,
            Error::Precondition(_) | Error::NonUnitLength { .. } => EXIT_PRECONDITION,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn execute(command: Command) -> Outcome {
    dispatch(command).unwrap_or_else(|e| Outcome::error(&e))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn with_path<T>(path: &Path, r: envequiv::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn load_env(path: &Path) -> CliResult<Env> {
    with_path(path, parse_environment(&read(path)?))
}

fn load_signal(path: &Path) -> CliResult<Signal> {
    with_path(path, parse_signal(&read(path)?))
}

fn load_signal_for(path: &Path, env: &Env) -> CliResult<Signal> {
    let u = load_signal(path)?;
    with_path(path, check_signal_alphabet(&u, env.alphabet_width()))?;
    Ok(u)
}

fn load_map(path: &Path) -> CliResult<envequiv::GraphMap> {
    let doc: MapJson = with_path(path, serde_json::from_str(&read(path)?).map_err(Error::from))?;
    Ok(map_from_json(&doc))
}

fn rat(r: &Rational) -> Value {
    serde_json::to_value(RationalJson::from_rational(r)).expect("plain data")
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Trace { env, signal } => {
            let e = load_env(&env)?;
            let u = load_signal_for(&signal, &e)?;
            let traj = e.trajectory(&u);
            let trace = e.trace_of(&u);
            let out = json!({
                "trace": trace_to_json(&trace),
                "final_state": state_to_json(e.graph(), traj.final_state()),
            });
            let summary = format!(
                "{} segments, {} events over duration {}",
                trace.segments().len(),
                trace.events().len(),
                u.duration()
            );
            Ok(Outcome::json(EXIT_OK, &out, summary))
        }
        Command::Metric { left, right } => {
            let (u, v) = (load_signal(&left)?, load_signal(&right)?);
            let d = u.distance(&v);
            Ok(Outcome::json(EXIT_OK, &json!({ "distance": rat(&d) }), format!("distance {d}")))
        }
        Command::Geodesic { left, right, at } => {
            let (u, v) = (load_signal(&left)?, load_signal(&right)?);
            let s = parse_rational(&at)?;
            let w = u.geodesic(&v, &s)?;
            let out = json!({
                "at": rat(&s),
                "distance": rat(&u.distance(&v)),
                "signal": signal_to_json(&w),
            });
            Ok(Outcome::json(EXIT_OK, &out, format!("geodesic point at {s}: {w}")))
        }
        Command::CheckCover { cover, base, map } => {
            let (c, b, f) = (load_env(&cover)?, load_env(&base)?, load_map(&map)?);
            let cert = with_path(&map, verify_covering(&f, &c, &b))?;
            let positive = cert.is_positive();
            let summary = if positive {
                "map is a covering".to_string()
            } else {
                format!("map is not a covering: {} violation(s)", cert.violations.len())
            };
            let code = if positive { EXIT_OK } else { EXIT_DISTINGUISHED };
            Ok(Outcome::json(code, &certificate_to_json(&cert), summary))
        }
        Command::Lift { cover, base, map, signal } => {
            let (c, b, f) = (load_env(&cover)?, load_env(&base)?, load_map(&map)?);
            let u = load_signal_for(&signal, &b)?;
            let cert = with_path(&map, verify_covering(&f, &c, &b))?;
            let lifted = lift_state_path(&cert, &c, &b, &u)?;
            let motions: Vec<Value> = lifted
                .motions()
                .iter()
                .map(|m| match m {
                    Motion::Stay => json!("stay"),
                    Motion::Along(d) => json!({ "dart": d.0 }),
                })
                .collect();
            let out = json!({
                "times": lifted.times().iter().map(rat).collect::<Vec<_>>(),
                "states": lifted.states().iter().map(|x| state_to_json(c.graph(), x)).collect::<Vec<_>>(),
                "motions": motions,
                "trace": trace_to_json(&c.trace_of(&u)),
            });
            let summary = format!("lifted {} breakpoints", lifted.times().len());
            Ok(Outcome::json(EXIT_OK, &out, summary))
        }
        Command::GenCyclic { env, k, voltage } => {
            let e = load_env(&env)?;
            if voltage.len() != e.graph().edge_count() {
                return Err(Error::Validation(format!(
                    "{} voltages given for {} edges",
                    voltage.len(),
                    e.graph().edge_count()
                ))
                .into());
            }
            if k == 0 {
                return Err(Error::Validation("k must be positive".into()).into());
            }
            let (cover, map) = cyclic_cover(&e, k, &edge_voltages(&voltage, k))?;
            let out = json!({
                "environment": environment_to_json(&cover)?,
                "map": map_to_json(&map),
            });
            let summary = format!(
                "{k}-fold cover: {} vertices, {} edges",
                cover.graph().vertex_count(),
                cover.graph().edge_count()
            );
            Ok(Outcome::json(EXIT_OK, &out, summary))
        }
        Command::GenUniversal { env, radius } => {
            let e = load_env(&env)?;
            let r = parse_rational(&radius)?;
            let ball = universal_cover_truncation(&e, &r)?;
            let boundary: BTreeSet<&str> = ball.boundary.iter().map(|v| ball.env.graph().name(*v)).collect();
            let out = json!({
                "environment": environment_to_json(&ball.env)?,
                "map": map_to_json(&ball.map),
                "boundary": boundary,
            });
            let summary = format!(
                "radius {r}: {} vertices, {} on the boundary",
                ball.env.graph().vertex_count(),
                ball.boundary.len()
            );
            Ok(Outcome::json(EXIT_OK, &out, summary))
        }
        Command::Equiv { left, right, max_len, random, max_pieces, seed } => {
            let (a, b) = (load_env(&left)?, load_env(&right)?);
            let params = SamplingParams { max_len, random_signals: random, max_pieces, seed };
            sampled(&a, &b, &params)
        }
        Command::Distinguish { left, right, max_len, random, seed } => {
            let (a, b) = (load_env(&left)?, load_env(&right)?);
            let params = SamplingParams {
                max_len,
                random_signals: random,
                max_pieces: SamplingParams::default().max_pieces,
                seed,
            };
            sampled(&a, &b, &params)
        }
        Command::Bisim { left, right } => {
            let (a, b) = (load_env(&left)?, load_env(&right)?);
            let result = compute_bisimulation(&a, &b)?;
            let out = bisimulation_to_json(&a, &b, &result);
            Ok(match &result {
                BisimulationResult::Related { relation, stats } => Outcome::json(
                    EXIT_OK,
                    &out,
                    format!("related: {} pairs, {} refinement rounds", relation.len(), stats.rounds),
                ),
                BisimulationResult::Distinguished { witness, divergence, .. } => Outcome::json(
                    EXIT_DISTINGUISHED,
                    &out,
                    format!("distinguished by {witness}, traces split at {divergence}"),
                ),
            })
        }
        Command::Gallery { out } => {
            fs::create_dir_all(&out).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?;
            let mut written = Vec::new();
            for pair in gallery() {
                for (side, env) in [("left", &pair.left), ("right", &pair.right)] {
                    let stem = format!("{}_{side}", pair.name);
                    let json_path = out.join(format!("{stem}.json"));
                    let dot_path = out.join(format!("{stem}.dot"));
                    write(&json_path, &(environment_to_string(env)? + "\n"))?;
                    write(&dot_path, &to_dot(env, &stem))?;
                    written.push(json!({
                        "pair": pair.name,
                        "side": side,
                        "environment": json_path.display().to_string(),
                        "dot": dot_path.display().to_string(),
                    }));
                }
            }
            let pairs: Vec<Value> = gallery()
                .iter()
                .map(|p| json!({ "name": p.name, "summary": p.summary }))
                .collect();
            let summary = format!("wrote {} files to {}", 2 * written.len(), out.display());
            Ok(Outcome::json(EXIT_OK, &json!({ "pairs": pairs, "files": written }), summary))
        }
    }
}

fn sampled(a: &Env, b: &Env, params: &SamplingParams) -> CliResult<Outcome> {
    let verdict = check_equiv_sampled(a, b, params)?;
    let out = sampled_to_json(&verdict);
    Ok(match &verdict {
        SampledVerdict::NoDivergence { signals_checked, .. } => Outcome::json(
            EXIT_OK,
            &out,
            format!("no divergence in {signals_checked} signals"),
        ),
        SampledVerdict::Distinguished { witness, divergence, .. } => Outcome::json(
            EXIT_DISTINGUISHED,
            &out,
            format!("distinguished by {witness}, traces split at {divergence}"),
        ),
    })
}
