//! Command-line entry point.
//!
//! Standard output is line-oriented `key=value` records; standard error
//! carries diagnostics only. Exit codes: 0 = found/true/success, 1 =
//! not-found/false, 2 = usage or input error, 3 = budget exceeded.

use crate::circuits::{parse as parse_circuit, Assignment};
use crate::error::Error;
use crate::gadgets::{self, GadgetTable, StarVerdict, DEFAULT_GRID_BUDGET};
use crate::games::io::{load_game, write_explicit, GameFile};
use crate::games::potential::{verify_potential, PotentialCertificate};
use crate::games::{GameView, Profile, TopFracQuery};
use crate::reductions::{reduce_bqp_to_game, BqpInstance, PneReducedGame, SatReducedGame};
use crate::solvers::local_search::{best_response_dynamics, nwr_local_search, SearchResult};
use crate::solvers::montecarlo::{monte_carlo_topfrac, MonteCarloOutcome};
use crate::solvers::{solve, topfrac_regime, Mode, Outcome, Problem, SolveOptions};
use crate::{Rational, Scalar, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "nwr", version, about = "Circuit games, no-worst-response solvers, and reductions", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate, and evaluate Boolean circuits.
    Circuit {
        #[command(subcommand)]
        command: CircuitCommand,
    },
    /// Exhaustively decide/find/count PNE, NWR, or (alpha, beta) profiles.
    Solve(SolveArgs),
    /// Seeded randomized search for an (alpha, beta) profile.
    Montecarlo(MontecarloArgs),
    /// Transform an instance into a game, with provenance recorded.
    Reduce {
        #[command(subcommand)]
        command: ReduceCommand,
    },
    /// Search, verify, and bound covering-gadget tables.
    Gadget {
        #[command(subcommand)]
        command: GadgetCommand,
    },
    /// Check whether a game admits an exact potential.
    VerifyPotential(VerifyPotentialArgs),
    /// Deterministic improvement dynamics on potential games.
    LocalSearch {
        #[command(subcommand)]
        command: LocalSearchCommand,
    },
}

#[derive(Subcommand)]
enum CircuitCommand {
    /// Evaluate a circuit on an input bit string.
    Eval {
        /// Circuit file.
        #[arg(long)]
        circuit: PathBuf,
        /// Input bits in declaration order, e.g. `1011`.
        #[arg(long)]
        assign: String,
    },
    /// Check well-formedness (arities, references, acyclicity).
    Validate {
        /// Circuit file.
        #[arg(long)]
        circuit: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Pne,
    Nwr,
    Topfrac,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Decide,
    Find,
    Count,
}

#[derive(Args)]
struct SolveArgs {
    /// Game file.
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "decide")]
    mode: ModeArg,
    /// Fraction of players that must qualify (topfrac only), as `num/den`.
    #[arg(long)]
    alpha: Option<String>,
    /// Top-action fraction (topfrac only), as `num/den`.
    #[arg(long)]
    beta: Option<String>,
    /// Maximum number of profiles to enumerate.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
    /// Worker threads; the result is identical for any count.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct MontecarloArgs {
    /// Game file.
    #[arg(long)]
    game: PathBuf,
    /// Fraction of players that must qualify, as `num/den`.
    #[arg(long)]
    alpha: String,
    /// Top-action fraction, as `num/den`.
    #[arg(long)]
    beta: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run even when the success guarantee's precondition fails.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Circuit satisfiability to NWR existence.
    SatToNwr {
        /// Source circuit file (single output).
        #[arg(long)]
        circuit: PathBuf,
        /// Actions per reduced player (>= 2).
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Output game file.
        #[arg(long)]
        out: PathBuf,
    },
    /// PNE existence in a 2-action potential game to NWR existence.
    PneToNwr {
        /// Source game file (explicit, 2 actions per player).
        #[arg(long)]
        game: PathBuf,
        /// Verified gadget file with m = 2.
        #[arg(long)]
        gadget: PathBuf,
        /// Output game file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Binary quadratic program to an identical-interest game.
    Bqp {
        /// Instance file (`bqp <n>`, `q <n ints>`, `Q` plus n matrix rows).
        #[arg(long)]
        input: PathBuf,
        /// Output game file.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Find a verified table at the smallest feasible side length.
    Find {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mhat: usize,
        /// Largest side length to try.
        #[arg(long, default_value_t = 6)]
        max_q: usize,
        /// Output gadget file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a gadget file against the covering condition.
    Verify {
        /// Gadget file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Maximum table size accepted.
        #[arg(long, default_value_t = DEFAULT_GRID_BUDGET)]
        budget: u64,
    },
    /// Report the sufficient side length from the existence argument.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mhat: usize,
    },
}

#[derive(Args)]
struct VerifyPotentialArgs {
    /// Game file.
    #[arg(long)]
    game: PathBuf,
    /// Maximum number of profiles to evaluate.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
}

#[derive(Args)]
struct LocalSearchArgs {
    /// Game file (must pass the potential check).
    #[arg(long)]
    game: PathBuf,
    /// Start profile as comma-separated action indices; defaults to all 0.
    #[arg(long)]
    start: Option<String>,
    /// Maximum number of profiles to evaluate.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
}

#[derive(Subcommand)]
enum LocalSearchCommand {
    /// Worst-responder improvement steps, ending at an NWR profile.
    Nwr(LocalSearchArgs),
    /// Best-response dynamics, ending at a pure Nash equilibrium.
    Br(LocalSearchArgs),
}

/// Runs the CLI on `argv`; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version on stdout with success.
            let _ = e.print();
            return if e.exit_code() == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Error::BudgetExceeded { needed, budget }) => {
            eprintln!("error: enumeration budget exceeded: {needed} > {budget}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })
}

fn parse_rational(label: &str, s: &str) -> Result<Rational, Error> {
    Rational::parse_frac(s)
        .map_err(|e| Error::InvalidInput(format!("{label}: {}", e.message)))
}

fn parse_query(alpha: &str, beta: &str) -> Result<TopFracQuery, Error> {
    TopFracQuery::new(parse_rational("alpha", alpha)?, parse_rational("beta", beta)?)
}

fn csv(profile: &Profile) -> String {
    let parts: Vec<String> = profile.0.iter().map(|a| a.to_string()).collect();
    parts.join(",")
}

fn parse_start(s: &str, n: usize) -> Result<Profile, Error> {
    let actions: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("bad start profile `{s}`")))?;
    if actions.len() != n {
        return Err(Error::InvalidInput(format!(
            "start profile has {} entries, game has {n} players",
            actions.len()
        )));
    }
    Ok(Profile(actions))
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Circuit { command } => run_circuit(command),
        Command::Solve(args) => run_solve(args),
        Command::Montecarlo(args) => run_montecarlo(args),
        Command::Reduce { command } => run_reduce(command),
        Command::Gadget { command } => run_gadget(command),
        Command::VerifyPotential(args) => run_verify_potential(args),
        Command::LocalSearch { command } => run_local_search(command),
    }
}

fn run_circuit(command: CircuitCommand) -> Result<i32, Error> {
    match command {
        CircuitCommand::Eval { circuit, assign } => {
            let c = parse_circuit(&read_file(&circuit)?)?;
            c.validate()
                .map_err(|vs| join_violations(&vs))?;
            let bits: Vec<bool> = assign
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::InvalidInput(format!("bad input bit `{other}`"))),
                })
                .collect::<Result<_, _>>()?;
            let outputs = c.eval(&Assignment(bits))?;
            let rendered: String = outputs.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!("outputs={rendered}");
            Ok(0)
        }
        CircuitCommand::Validate { circuit } => {
            let c = parse_circuit(&read_file(&circuit)?)?;
            match c.validate() {
                Ok(()) => {
                    println!(
                        "valid=1 inputs={} gates={} outputs={}",
                        c.inputs.len(),
                        c.gates.len(),
                        c.outputs.len()
                    );
                    Ok(0)
                }
                Err(violations) => {
                    for v in &violations {
                        eprintln!("violation: {v}");
                    }
                    println!("valid=0");
                    Ok(1)
                }
            }
        }
    }
}

fn join_violations(vs: &[crate::circuits::Violation]) -> Error {
    let msgs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    Error::InvalidCircuit(msgs.join("; "))
}

fn run_solve(args: SolveArgs) -> Result<i32, Error> {
    let loaded = load_game::<Rational>(&args.game)?;
    let game = loaded.game.view();
    let (problem, regime) = match args.problem {
        ProblemArg::Pne => (Problem::Pne, None),
        ProblemArg::Nwr => (Problem::Nwr, None),
        ProblemArg::Topfrac => {
            let (Some(alpha), Some(beta)) = (&args.alpha, &args.beta) else {
                return Err(Error::InvalidInput(
                    "topfrac requires --alpha and --beta".into(),
                ));
            };
            let query = parse_query(alpha, beta)?;
            let counts = game.action_counts();
            let uniform = counts.windows(2).all(|w| w[0] == w[1]);
            let regime =
                topfrac_regime(&query, counts.len(), uniform.then(|| counts[0]));
            (Problem::TopFrac(query), Some(regime))
        }
    };
    let mode = match args.mode {
        ModeArg::Decide => Mode::Decide,
        ModeArg::Find => Mode::Find,
        ModeArg::Count => Mode::Count,
    };
    let options = SolveOptions { budget: args.budget, workers: args.workers };
    let result = solve(game, &problem, mode, &options)?;
    let (value, code) = match &result.outcome {
        Outcome::Exists(p) => {
            let v = match mode {
                Mode::Decide => "yes".to_string(),
                _ => csv(p),
            };
            (v, 0)
        }
        Outcome::NotExists => ("no".to_string(), 1),
        Outcome::Count(k) => (k.to_string(), 0),
    };
    let mode_name = match mode {
        Mode::Decide => "decide",
        Mode::Find => "find",
        Mode::Count => "count",
    };
    let regime_field = regime.map(|r| format!(" regime={r}")).unwrap_or_default();
    println!(
        "result problem={} mode={mode_name} value={value} scanned={}{regime_field}",
        problem.name(),
        result.profiles_scanned
    );
    Ok(code)
}

fn run_montecarlo(args: MontecarloArgs) -> Result<i32, Error> {
    let loaded = load_game::<Rational>(&args.game)?;
    let game = loaded.game.view();
    let query = parse_query(&args.alpha, &args.beta)?;
    let report = monte_carlo_topfrac(game, &query, args.seed, args.force)?;
    let guarantee = if report.guaranteed { "half" } else { "none" };
    let (outcome, fields, code) = match &report.outcome {
        MonteCarloOutcome::Success { profile, qualifying } => {
            ("success", format!("profile={} qualifying={qualifying}", csv(profile)), 0)
        }
        MonteCarloOutcome::Fallback { profile } => {
            ("fallback", format!("profile={}", csv(profile)), 1)
        }
    };
    println!(
        "montecarlo outcome={outcome} {fields} iterations={} seed={} guarantee={guarantee}",
        report.iterations, report.seed
    );
    Ok(code)
}

fn explicit_of<R: Scalar>(loaded: GameFile<R>) -> Result<crate::games::ExplicitGame<R>, Error> {
    match loaded {
        GameFile::Explicit(g) => Ok(g),
        GameFile::Circuit(g) => crate::games::ExplicitGame::from_view(&g),
    }
}

fn run_reduce(command: ReduceCommand) -> Result<i32, Error> {
    match command {
        ReduceCommand::SatToNwr { circuit, m, out } => {
            let source = parse_circuit(&read_file(&circuit)?)?;
            let reduced = SatReducedGame::new(source, m)?;
            let explicit = reduced.to_explicit::<Rational>()?;
            let header = reduced.provenance(&circuit.display().to_string());
            write_file(&out, &format!("{header}\n{}", write_explicit(&explicit)))?;
            println!(
                "reduced kind=sat players={} actions={} out={}",
                explicit.action_counts().len(),
                m,
                out.display()
            );
            Ok(0)
        }
        ReduceCommand::PneToNwr { game, gadget, out } => {
            let loaded = load_game::<Rational>(&game)?;
            let source = explicit_of(loaded.game)?;
            let table = GadgetTable::from_text(&read_file(&gadget)?, DEFAULT_GRID_BUDGET)?;
            let reduced = PneReducedGame::new(source, table, 1 << 24)?;
            let header = reduced.provenance(
                &game.display().to_string(),
                &gadget.display().to_string(),
            );
            let explicit = reduced.to_explicit()?;
            write_file(&out, &format!("{header}\n{}", write_explicit(&explicit)))?;
            println!(
                "reduced kind=pne players={} q={} out={}",
                explicit.action_counts().len(),
                reduced.q(),
                out.display()
            );
            Ok(0)
        }
        ReduceCommand::Bqp { input, out } => {
            let inst = parse_bqp(&read_file(&input)?)?;
            let game = reduce_bqp_to_game::<Rational>(&inst)?;
            let header = inst.provenance(&input.display().to_string());
            write_file(&out, &format!("{header}\n{}", write_explicit(&game)))?;
            println!(
                "reduced kind=bqp players={} out={}",
                inst.dimension(),
                out.display()
            );
            Ok(0)
        }
    }
}

/// Parses a binary quadratic program file:
///
/// ```text
/// bqp <n>
/// q <n integers>
/// Q
/// <n rows of n integers>
/// ```
fn parse_bqp(text: &str) -> Result<BqpInstance, Error> {
    let mut lines = text
        .lines()
        .map(|raw| raw.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let bad = |msg: &str| Error::InvalidInput(format!("bqp file: {msg}"));
    let n: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("bqp "))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad("expected `bqp <n>`"))?;
    let q: Vec<i64> = lines
        .next()
        .and_then(|l| l.strip_prefix("q "))
        .map(|s| s.split_whitespace().map(|t| t.parse::<i64>()).collect::<Result<_, _>>())
        .and_then(|r| r.ok())
        .ok_or_else(|| bad("expected `q <n integers>`"))?;
    if q.len() != n {
        return Err(bad(&format!("expected {n} linear coefficients, got {}", q.len())));
    }
    if lines.next() != Some("Q") {
        return Err(bad("expected `Q` before the matrix rows"));
    }
    let matrix: Vec<Vec<i64>> = (0..n)
        .map(|k| {
            lines
                .next()
                .ok_or_else(|| bad(&format!("missing matrix row {}", k + 1)))?
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| bad("bad matrix entry")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    BqpInstance::new(matrix, q)
}

fn run_gadget(command: GadgetCommand) -> Result<i32, Error> {
    match command {
        GadgetCommand::Find { m, mhat, max_q, out } => {
            match gadgets::search_smallest_q(m, mhat, max_q) {
                Some(g) => {
                    write_file(&out, &g.to_text())?;
                    println!(
                        "gadget m={} mhat={} q={} verified=1 out={}",
                        g.m(),
                        g.mhat(),
                        g.q(),
                        out.display()
                    );
                    Ok(0)
                }
                None => {
                    println!("gadget m={m} mhat={mhat} found=0 max_q={max_q}");
                    Ok(1)
                }
            }
        }
        GadgetCommand::Verify { input, budget } => {
            let mut g = GadgetTable::from_text(&read_file(&input)?, budget)?;
            match g.verify_star(budget)? {
                StarVerdict::Verified => {
                    println!("verified=1 m={} mhat={} q={}", g.m(), g.mhat(), g.q());
                    Ok(0)
                }
                StarVerdict::Counterexample { point, colour } => {
                    println!("verified=0 counterexample point={point} colour={colour}");
                    Ok(1)
                }
            }
        }
        GadgetCommand::Bound { m, mhat } => {
            let q = gadgets::lll_sufficient_q(m, mhat)?;
            let b = gadgets::lll_bounds(m, mhat, q as usize);
            println!(
                "bound m={m} mhat={mhat} q={q} group_size={} lambda={:.6} p={:.6e} d={} condition={:.6}",
                gadgets::reduction2_group_size(mhat),
                b.lambda,
                b.p,
                b.d,
                b.condition
            );
            Ok(0)
        }
    }
}

fn run_verify_potential(args: VerifyPotentialArgs) -> Result<i32, Error> {
    let loaded = load_game::<Rational>(&args.game)?;
    let game = loaded.game.view();
    match verify_potential(game, args.budget)? {
        PotentialCertificate::Potential { .. } => {
            println!("potential=1");
            Ok(0)
        }
        PotentialCertificate::NotPotential(cycle) => {
            println!(
                "potential=0 players={},{} profile={} residual={}",
                cycle.players.0,
                cycle.players.1,
                csv(&cycle.profile),
                cycle.residual.to_frac_string()
            );
            Ok(1)
        }
    }
}

fn run_local_search(command: LocalSearchCommand) -> Result<i32, Error> {
    let (args, kind) = match command {
        LocalSearchCommand::Nwr(args) => (args, "nwr"),
        LocalSearchCommand::Br(args) => (args, "br"),
    };
    let loaded = load_game::<Rational>(&args.game)?;
    let game = loaded.game.view();
    let n = game.num_players();
    let start = match &args.start {
        Some(s) => parse_start(s, n)?,
        None => Profile(vec![0; n]),
    };
    let SearchResult { profile, trace } = if kind == "nwr" {
        nwr_local_search(game, start, args.budget)?
    } else {
        best_response_dynamics(game, start, args.budget)?
    };
    println!("result dynamics={kind} profile={} steps={}", csv(&profile), trace.len());
    Ok(0)
}
