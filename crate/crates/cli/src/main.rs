//! `kostant`: play, inspect and verify Kostant games from the shell.
//!
//! Exit status is 0 on success, 1 when a verification finds a counterexample
//! and 2 for usage or input errors.

mod commands;
mod verify;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "kostant", version, about = "Kostant chip-firing games on Dynkin diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct DiagramArgs {
    /// Catalog type such as A3, D4 or F4.
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: Option<String>,
    /// Diagram JSON file: {"n": .., "edges": [{"from", "to", "arrows"}]}.
    #[arg(long, value_name = "PATH")]
    pub diagram_file: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
pub struct ActiveArgs {
    /// Active vertices I, 1-based, e.g. 1,3.
    #[arg(long, value_delimiter = ',', conflicts_with = "inactive")]
    pub active: Option<Vec<usize>>,
    /// Inactive vertices J; the active set is the complement.
    #[arg(long, value_delimiter = ',')]
    pub inactive: Option<Vec<usize>>,
}

/// A modified game (`--active`/`--inactive`) or a classical one (`--initial`).
#[derive(Args, Clone)]
pub struct GameArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    #[command(flatten)]
    pub active: ActiveArgs,
    /// Initial chips of a classical game, e.g. 1,0,0,0.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["active", "inactive"])]
    pub initial: Option<Vec<i64>>,
    /// Moves before a game counts as diverging.
    #[arg(long)]
    pub step_cap: Option<usize>,
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Dot,
    Csv,
    Words,
    Counts,
}

#[derive(Subcommand)]
enum Command {
    /// List the positive roots or coroots with their heights.
    Roots {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        coroots: bool,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Play one game and print its trace.
    Play {
        #[command(flatten)]
        game: GameArgs,
        /// lowest, highest, random or random:<seed>.
        #[arg(long, default_value = "lowest")]
        strategy: String,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The graph of reachable configurations.
    Graph {
        #[command(flatten)]
        game: GameArgs,
        /// Classical only: union of the games started at every basis vector.
        #[arg(long, conflicts_with = "initial")]
        all_starts: bool,
        #[arg(long, default_value_t = kostant::game::DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(long, value_enum, default_value = "dot")]
        emit: Emit,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The reduced-word automaton of a modified game.
    Dfa {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[command(flatten)]
        active: ActiveArgs,
        #[arg(long)]
        minimize: bool,
        /// Longest word listed by `--emit words` or `--emit counts`.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "dot")]
        emit: Emit,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Standard Young tableaux of type A games with a single source.
    Syt {
        /// Permutation size; the diagram is A_{n-1}.
        #[arg(long)]
        n: usize,
        /// The 1-based source vertex.
        #[arg(long)]
        k: usize,
        #[command(subcommand)]
        action: SytAction,
    },
    /// Mukai inequalities for one parabolic or a sweep.
    Mukai {
        /// Catalog type such as B3.
        #[arg(long = "type", value_name = "TYPE")]
        ty: Option<String>,
        /// Simple roots of the Levi factor, 1-based (may be empty).
        #[arg(long, value_delimiter = ',', requires = "ty")]
        delta_p: Option<Vec<usize>>,
        /// Sweep all catalog types up to this rank.
        #[arg(long, conflicts_with_all = ["ty", "delta_p"])]
        max_rank: Option<usize>,
        /// json for one parabolic; csv (default) or json for a sweep.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive verification sweeps.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory of static files served outside /v1.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Append-only JSON-lines session log, replayed at startup.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Idle seconds before a session is evicted.
        #[arg(long, default_value_t = 3600)]
        idle_timeout: u64,
    },
}

#[derive(Subcommand)]
pub enum SytAction {
    /// Tableau of a move sequence (1-based vertices).
    Fill {
        #[arg(value_delimiter = ',', required = true)]
        moves: Vec<usize>,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Move sequence of a tableau given as JSON rows, e.g. [[1,3],[2,4]].
    Sequence { rows: String },
    /// Every Grassmannian permutation with its shape and tableau count.
    Counts {
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
}

#[derive(Subcommand)]
pub enum VerifyCheck {
    /// Configurations vs. minimal coset representatives, with path sets.
    Bijection {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
    },
    /// Final chip totals and per-step increments vs. coroot heights.
    RootCounting {
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
    },
    /// Automaton languages vs. reversed reduced words of W^J.
    DfaLanguage {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Move sequences vs. standard Young tableaux in type A.
    SytBijection {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

/// A verification that ran and found a counterexample.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn run(cli: Cli) -> anyhow::Result<()> {
    use commands::*;
    match cli.command {
        Command::Roots { diagram, coroots, emit, out } => roots(&diagram, coroots, emit, &out),
        Command::Play { game, strategy, emit, out } => play(&game, &strategy, emit, &out),
        Command::Graph { game, all_starts, node_cap, emit, out } => graph(&game, all_starts, node_cap, emit, &out),
        Command::Dfa { diagram, active, minimize, max_len, emit, out } => {
            dfa(&diagram, &active, minimize, max_len, emit, &out)
        }
        Command::Syt { n, k, action } => syt(n, k, &action),
        Command::Mukai { ty, delta_p, max_rank, emit, out } => {
            mukai(ty.as_deref(), delta_p.as_deref(), max_rank, emit, &out)
        }
        Command::Verify { check } => verify::run(&check),
        Command::Serve { addr, static_dir, log, idle_timeout } => serve(addr, static_dir, log, idle_timeout),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn active_and_inactive_forms_agree() {
        let i = ActiveArgs { active: Some(vec![2]), inactive: None };
        let j = ActiveArgs { active: None, inactive: Some(vec![1, 3]) };
        assert_eq!(commands::active_set(3, &i).unwrap(), commands::active_set(3, &j).unwrap());
        assert!(commands::active_set(3, &ActiveArgs::default()).is_err());
    }
}
