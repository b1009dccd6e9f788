//! `ncca`: decide, synthesize, and inspect number-conserving
//! non-uniform elementary cellular automata.
//!
//! Exit codes are part of the contract: 0 means yes or success, 1 means
//! the CA is not number conserving, 2 means a usage error or a resource
//! limit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ncca_core::{
    brute_force_is_ncca, build_stg, build_tree, next_config, synthesize,
    synthesize_with_choices, Configuration, Rule, RuleVector,
};
use ncca_core::decide::{decide_ncca, decide_ncca_traced};
use ncca_core::oracle::count_ncca_vectors;

#[derive(Parser)]
#[command(name = "ncca", version, about = "Number conservation in non-uniform elementary CAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide number conservation in O(n); needs at least 5 cells
    Decide {
        /// Comma-separated Wolfram numbers, one per cell
        #[arg(long, required_unless_present = "rules_file", conflicts_with = "rules_file")]
        rules: Option<String>,
        /// Read the rule vector from a file instead; vectors long enough
        /// to need the linear algorithm overflow the argument list
        #[arg(long)]
        rules_file: Option<PathBuf>,
        /// Also print the per-level super-node trace as JSON
        #[arg(long)]
        trace: bool,
    },
    /// Build number-conserving rule vectors of a given size
    Synthesize {
        /// Number of cells, at least 5
        #[arg(long)]
        n: usize,
        /// Seed for the deterministic choice stream
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// How many vectors to emit, seeded seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// JSON file {"rule0": .., "alphas": [..]} replaying explicit
        /// choices instead of a seed
        #[arg(long, conflicts_with_all = ["seed", "count"])]
        choices: Option<PathBuf>,
        /// Also print each synthesis trace as JSON
        #[arg(long)]
        trace: bool,
    },
    /// Check number conservation by enumerating all 2^n configurations
    Oracle {
        #[arg(long)]
        rules: String,
    },
    /// Evolve a configuration, printing steps+1 lines
    Simulate {
        #[arg(long)]
        rules: String,
        /// Initial configuration as a 0/1 string, cell 0 leftmost
        #[arg(long)]
        init: String,
        #[arg(long)]
        steps: usize,
    },
    /// Emit the weighted reachability tree
    Tree {
        #[arg(long)]
        rules: String,
        /// Skip expanding sub-nodes; required beyond 16 cells
        #[arg(long)]
        prune: bool,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
    },
    /// Emit the full state-transition graph as DOT
    Stg {
        #[arg(long)]
        rules: String,
    },
    /// Count the number-conserving rule vectors over the nine conserving
    /// rules
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Worker threads; defaults to the available parallelism
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = CountFormat::Text)]
        format: CountFormat,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum TreeFormat {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum CountFormat {
    Text,
    Json,
}

#[derive(Deserialize)]
struct ChoiceFile {
    rule0: u8,
    alphas: Vec<u8>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Decide { rules, rules_file, trace } => {
            let text = match (rules, rules_file) {
                (Some(inline), _) => inline,
                (None, Some(path)) => std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let rv = parse_rules(&text)?;
            if trace {
                let (verdict, levels) = decide_ncca_traced(&rv).map_err(|e| e.to_string())?;
                println!("{verdict}");
                println!("{}", serde_json::to_string(&levels).expect("trace serializes"));
                Ok(yes_no(verdict.is_accepted()))
            } else {
                let verdict = decide_ncca(&rv).map_err(|e| e.to_string())?;
                println!("{verdict}");
                Ok(yes_no(verdict.is_accepted()))
            }
        }
        Command::Synthesize { n, seed, count, choices, trace } => {
            if let Some(path) = choices {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let file: ChoiceFile = serde_json::from_str(&text)
                    .map_err(|e| format!("bad choices file {}: {e}", path.display()))?;
                let (rv, t) = synthesize_with_choices(n, Rule::new(file.rule0), &file.alphas)
                    .map_err(|e| e.to_string())?;
                println!("{rv}");
                if trace {
                    println!("{}", serde_json::to_string(&t).expect("trace serializes"));
                }
            } else {
                for i in 0..count {
                    let (rv, t) = synthesize(n, seed + i as u64).map_err(|e| e.to_string())?;
                    println!("{rv}");
                    if trace {
                        println!("{}", serde_json::to_string(&t).expect("trace serializes"));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { rules } => {
            let rv = parse_rules(&rules)?;
            let conserving = brute_force_is_ncca(&rv).map_err(|e| e.to_string())?;
            println!("{}", if conserving { "yes" } else { "no" });
            Ok(yes_no(conserving))
        }
        Command::Simulate { rules, init, steps } => {
            let rv = parse_rules(&rules)?;
            let mut config: Configuration = init.parse().map_err(|e| format!("{e}"))?;
            println!("{config}");
            for _ in 0..steps {
                config = next_config(&rv, &config).map_err(|e| e.to_string())?;
                println!("{config}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tree { rules, prune, format } => {
            let rv = parse_rules(&rules)?;
            let tree = build_tree(&rv, prune).map_err(|e| e.to_string())?;
            match format {
                TreeFormat::Dot => print!("{}", tree.to_dot()),
                TreeFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&tree.to_json()).expect("tree serializes")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stg { rules } => {
            let rv = parse_rules(&rules)?;
            let graph = build_stg(&rv).map_err(|e| e.to_string())?;
            print!("{}", graph.to_dot());
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { n, jobs, format } => {
            let jobs = jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |p| p.get())
            });
            let census = count_ncca_vectors(n, jobs).map_err(|e| e.to_string())?;
            match format {
                CountFormat::Text => println!("{}", census.count),
                CountFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&census).expect("census serializes")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_rules(s: &str) -> Result<RuleVector, String> {
    s.parse::<RuleVector>().map_err(|e| e.to_string())
}

fn yes_no(accepted: bool) -> ExitCode {
    if accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
