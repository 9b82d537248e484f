//! Command-line front end: parses arguments, runs one operation and streams
//! records to standard output.
//!
//! Exit codes: 0 on success, 1 on a domain error (one JSON line on stderr with
//! a stable `reason`), 2 on a usage error.

pub mod records;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use equifreq_core::chains::{build_chain, perondi_chain, Partition, PerondiConfig};
use equifreq_core::conic::{integer_solution, ConicSolution, Slope};
use equifreq_core::oracle::{audit_index, enumerate_groups_with, EnumerateOptions, Parallelism};
use equifreq_core::pairs::{combine, decompose, Quadruple, Transition};
use equifreq_core::physics::{line_for, ConstantsProfile};
use equifreq_core::{Error, Nat};
use num_bigint::{BigInt, BigUint};

use records::{Emitter, Format, Record};

/// Environment variable that lifts the enumeration bound guard.
pub const MAX_N_OVERRIDE_VAR: &str = "EQUIFREQ_MAX_N_OVERRIDE";

#[derive(Debug, Parser)]
#[command(name = "equifreq", version, about = "Exact equal-frequency hydrogen transitions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integer solution of x^2 - y^2 = s z^2 from a chord slope and multiplier.
    Solve {
        #[arg(long)]
        s: BigUint,
        #[arg(long, value_parser = parse_fraction)]
        q: (BigInt, BigInt),
        #[arg(long, allow_hyphen_values = true)]
        l: BigInt,
    },
    /// Combine two solutions of one conic into an equal-frequency pair.
    Pair(PairArgs),
    /// Canonical witness of a valid quadruple N1,N2,N3,N4.
    Decompose {
        #[arg(long, value_parser = parse_levels)]
        quad: [BigUint; 4],
    },
    /// Check a quadruple N1,N2,N3,N4 and print its common difference.
    Verify {
        #[arg(long, value_parser = parse_levels)]
        quad: [BigUint; 4],
    },
    /// Chain from solutions X,Y,Z of one conic.
    Chain {
        #[arg(long)]
        s: BigUint,
        #[arg(long = "sol", value_parser = parse_triple, required = true)]
        sols: Vec<[BigUint; 3]>,
        #[arg(long)]
        k: BigUint,
    },
    /// Perondi prime-partition chain.
    Perondi {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// 1-based index lists I:J, e.g. `1,2:` or `1:2`.
        #[arg(long = "partition", value_parser = parse_partition, required = true)]
        partitions: Vec<Partition>,
        #[arg(long, conflicts_with = "auto_delta")]
        delta: Option<BigUint>,
        /// Smallest admissible Delta (the default when --delta is absent).
        #[arg(long)]
        auto_delta: bool,
    },
    /// Brute-force all equal-frequency groups with upper level <= N.
    Enumerate {
        #[arg(long = "max-n")]
        max_n: u64,
        /// Decompose every pair in every group and report failures.
        #[arg(long)]
        audit: bool,
        /// Worker threads; 1 forces the sequential path.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Photon energy, frequency and wavelength of a transition U,L.
    Spectrum {
        #[arg(long = "transition", value_parser = parse_pair, required = true)]
        transitions: Vec<(BigUint, BigUint)>,
        #[arg(long, value_enum, default_value_t = Profile::Paper)]
        constants: Profile,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long, required_unless_present = "seed_demo")]
    s: Option<BigUint>,
    #[arg(long, value_parser = parse_fraction, required_unless_present = "seed_demo")]
    q1: Option<(BigInt, BigInt)>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "seed_demo")]
    l1: Option<BigInt>,
    #[arg(long, value_parser = parse_fraction, required_unless_present = "seed_demo")]
    q2: Option<(BigInt, BigInt)>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "seed_demo")]
    l2: Option<BigInt>,
    #[arg(long, required_unless_present = "seed_demo")]
    k: Option<BigUint>,
    /// Suppress the pair when both transitions coincide.
    #[arg(long)]
    nontrivial: bool,
    /// Run the worked example: s=6, q1=5/7, l1=5, q2=1/1, l2=7, k=4.
    #[arg(long, conflicts_with_all = ["s", "q1", "l1", "q2", "l2", "k"])]
    seed_demo: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum Profile {
    Paper,
    Codata,
}

impl From<Profile> for ConstantsProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Paper => ConstantsProfile::Paper,
            Profile::Codata => ConstantsProfile::Codata,
        }
    }
}

fn parse_fraction(s: &str) -> Result<(BigInt, BigInt), String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    Ok((n, d))
}

fn parse_list<const N: usize>(s: &str) -> Result<[BigUint; N], String> {
    let parts: Vec<BigUint> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("bad integer {p:?}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<_>| format!("expected {N} comma-separated integers, got {}", v.len()))
}

fn parse_levels(s: &str) -> Result<[BigUint; 4], String> {
    parse_list::<4>(s)
}

fn parse_triple(s: &str) -> Result<[BigUint; 3], String> {
    parse_list::<3>(s)
}

fn parse_pair(s: &str) -> Result<(BigUint, BigUint), String> {
    let [u, l] = parse_list::<2>(s)?;
    Ok((u, l))
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Process-level settings read from the environment.
#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    pub max_n_override: bool,
}

impl Context {
    pub fn from_env() -> Self {
        let max_n_override = std::env::var(MAX_N_OVERRIDE_VAR)
            .map(|v| !matches!(v.trim(), "" | "0" | "false"))
            .unwrap_or(false);
        Context { max_n_override }
    }
}

#[derive(serde::Serialize)]
struct ErrorLine<'a> {
    kind: &'static str,
    reason: &'a str,
    message: String,
}

fn report(err: &mut dyn Write, reason: &str, message: String) {
    let line = ErrorLine {
        kind: "error",
        reason,
        message,
    };
    let _ = writeln!(err, "{}", serde_json::to_string(&line).expect("plain strings serialize"));
}

enum Failure {
    Domain(Error),
    AuditFailed(usize),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, ctx: Context, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut emitter = Emitter::new(cli.format, out);
    let result = emitter
        .emit(&Record::header())
        .map_err(Failure::from)
        .and_then(|_| execute(cli.command, ctx, &mut emitter, err));
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            report(err, e.reason(), e.to_string());
            1
        }
        Err(Failure::AuditFailed(n)) => {
            report(err, "audit failed", format!("{n} pairs failed to decompose"));
            1
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            report(err, "io error", e.to_string());
            1
        }
    }
}

fn solution(s: &BigUint, q: &(BigInt, BigInt), l: &BigInt) -> Result<ConicSolution, Error> {
    let slope = Slope::new(q.0.clone(), q.1.clone())?;
    integer_solution(s, &slope, l)
}

fn execute(command: Command, ctx: Context, emitter: &mut Emitter<'_>, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve { s, q, l } => {
            emitter.emit(&Record::conic(&solution(&s, &q, &l)?))?;
        }
        Command::Pair(args) => {
            let (s, q1, l1, q2, l2, k) = if args.seed_demo {
                let big = |n: i64| BigInt::from(n);
                (Nat::from(6u32), (big(5), big(7)), big(5), (big(1), big(1)), big(7), Nat::from(4u32))
            } else {
                let missing = || Error::Parse("pair arguments".into());
                (
                    args.s.ok_or_else(missing)?,
                    args.q1.ok_or_else(missing)?,
                    args.l1.ok_or_else(missing)?,
                    args.q2.ok_or_else(missing)?,
                    args.l2.ok_or_else(missing)?,
                    args.k.ok_or_else(missing)?,
                )
            };
            let sol1 = solution(&s, &q1, &l1)?;
            let sol2 = solution(&s, &q2, &l2)?;
            let (quad, witness) = combine(&sol1, &sol2, &k)?;
            emitter.emit(&Record::conic(&sol1))?;
            emitter.emit(&Record::conic(&sol2))?;
            if args.nontrivial && quad.is_trivial() {
                let _ = writeln!(err, "trivial pair {quad} suppressed");
            } else {
                emitter.emit(&Record::quadruple(&quad))?;
                emitter.emit(&Record::witness(&witness))?;
            }
        }
        Command::Decompose { quad } => {
            let quad = Quadruple::from_levels(quad)?;
            let witness = decompose(&quad)?;
            emitter.emit(&Record::quadruple(&quad))?;
            emitter.emit(&Record::witness(&witness))?;
        }
        Command::Verify { quad } => {
            emitter.emit(&Record::quadruple(&Quadruple::from_levels(quad)?))?;
        }
        Command::Chain { s, sols, k } => {
            let sols = sols
                .into_iter()
                .map(|[x, y, z]| ConicSolution::new(s.clone(), x, y, z))
                .collect::<Result<Vec<_>, _>>()?;
            emitter.emit(&Record::chain(&build_chain(&sols, &k)?, None))?;
        }
        Command::Perondi {
            primes,
            partitions,
            delta,
            auto_delta: _,
        } => {
            let config = match delta {
                Some(d) => PerondiConfig::new(primes, partitions, d)?,
                None => PerondiConfig::with_minimal_delta(primes, partitions)?,
            };
            let chain = perondi_chain(&config)?;
            emitter.emit(&Record::chain(&chain, Some(config.delta())))?;
        }
        Command::Enumerate { max_n, audit, threads } => {
            let options = EnumerateOptions {
                parallelism: threads.map_or(Parallelism::Auto, Parallelism::Threads),
                allow_large: ctx.max_n_override,
            };
            let index = enumerate_groups_with(max_n, options)?;
            for group in &index.groups {
                emitter.emit(&Record::group(group))?;
            }
            if audit {
                let report = audit_index(&index, options.parallelism);
                emitter.emit(&Record::audit(&report))?;
                if !report.passed() {
                    return Err(Failure::AuditFailed(report.failures.len()));
                }
            }
        }
        Command::Spectrum { transitions, constants } => {
            for (u, l) in transitions {
                let t = Transition::new(u, l)?;
                emitter.emit(&Record::line(&t, &line_for(&t, constants.into())?))?;
            }
        }
    }
    Ok(())
}
