use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nc_cumulants::io::{family_from_str, family_to_string};
use nc_cumulants::partitions::{
    enumerate_monotone_irr_bounded, enumerate_nc_bounded, enumerate_nc_irr_bounded, DEFAULT_MAX_N,
};
use nc_cumulants::trees::all_trees;
use nc_cumulants::verify::{run_suite, SUITES};
use nc_cumulants::{CumulantFamily, Kind, RootedTree};

const MAX_TREE_SIZE: usize = 12;
const MAX_N_ENV: &str = "NC_CUMULANTS_MAX_N";

#[derive(Parser)]
#[command(name = "nc-cumulants", version, about = "Non-crossing partitions, monotone cumulants and the pre-Lie Magnus expansion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List non-crossing partitions, one per line.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Number of blocks (monotone-irr only).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        /// Print only the number of results.
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tree factorials, monotone counts and omega coefficients.
    #[command(group(ArgGroup::new("input").required(true).args(["tree", "max_size"])))]
    Omega {
        /// A rooted tree in bracket form, e.g. "[[][]]".
        #[arg(long)]
        tree: Option<String>,
        /// Every tree with at most this many vertices.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_TREE_SIZE as u64))]
        max_size: Option<u64>,
    },
    /// Statistics of a single rooted tree.
    Tree {
        #[arg(long)]
        tree: String,
    },
    /// Convert a cumulant family stored as a JSON envelope.
    Convert {
        #[arg(long)]
        from: Kind,
        #[arg(long)]
        to: Kind,
        /// Input file, or "-" for stdin.
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also print the symbolic expansion on words of this length to stderr.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        show_order: Option<u64>,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=7))]
        max_order: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    Nc,
    NcIrr,
    MonotoneIrr,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Usage or input problems map to exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&m| m >= 1)
            .map(|m| m.max(DEFAULT_MAX_N))
            .ok_or_else(|| Failure(format!("{MAX_N_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn emit<T>(items: &[T], count: bool, format: Format, text: impl Fn(&T) -> String, js: impl Fn(&T) -> serde_json::Value) {
    let mut out = io::stdout().lock();
    if count {
        let _ = writeln!(out, "{}", items.len());
        return;
    }
    for it in items {
        let line = match format {
            Format::Text => text(it),
            Format::Json => js(it).to_string(),
        };
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

fn enumerate(kind: EnumKind, n: usize, k: Option<usize>, count: bool, format: Format) -> Result<(), Failure> {
    let bound = max_n()?;
    match kind {
        EnumKind::Nc | EnumKind::NcIrr => {
            if k.is_some() {
                return Err(Failure("--k only applies to monotone-irr".into()));
            }
            let ps = match kind {
                EnumKind::Nc => enumerate_nc_bounded(n, bound)?,
                _ => enumerate_nc_irr_bounded(n, bound)?,
            };
            emit(&ps, count, format, ToString::to_string, |p| p.to_json());
        }
        EnumKind::MonotoneIrr => {
            let k = k.ok_or_else(|| Failure("monotone-irr requires --k".into()))?;
            let ms = enumerate_monotone_irr_bounded(n, k, bound)?;
            emit(&ms, count, format, ToString::to_string, |m| m.to_json());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OmegaRow {
    tree: String,
    factorial: String,
    monotone_count: String,
    omega: String,
}

impl OmegaRow {
    fn new(t: &RootedTree) -> Self {
        OmegaRow {
            tree: t.encode(),
            factorial: t.factorial().to_string(),
            monotone_count: t.monotone_count().to_string(),
            omega: t.omega().to_string(),
        }
    }
}

#[derive(Serialize)]
struct TreeReport {
    tree: String,
    size: usize,
    depth: usize,
    leaves: usize,
    factorial: String,
    monotone_count: String,
    leaf_removals: Vec<String>,
    /// Entry `k - 1` counts quasi-monotone orders of rank `k`.
    omega_k: Vec<String>,
    omega: String,
}

fn omega(tree: Option<String>, max_size: Option<usize>) -> Result<(), Failure> {
    let trees = match (tree, max_size) {
        (Some(s), _) => vec![s.parse::<RootedTree>()?],
        (None, Some(m)) => (1..=m).flat_map(all_trees).collect(),
        (None, None) => unreachable!("clap requires one input"),
    };
    let mut out = io::stdout().lock();
    for t in &trees {
        let row = serde_json::to_string(&OmegaRow::new(t))?;
        if writeln!(out, "{row}").is_err() {
            break;
        }
    }
    Ok(())
}

fn tree(s: &str) -> Result<(), Failure> {
    let t: RootedTree = s.parse()?;
    let removals = if t.size() > 1 {
        t.leaf_removals()?.iter().map(RootedTree::encode).collect()
    } else {
        Vec::new()
    };
    let report = TreeReport {
        tree: t.encode(),
        size: t.size(),
        depth: t.depth(),
        leaves: t.num_leaves(),
        factorial: t.factorial().to_string(),
        monotone_count: t.monotone_count().to_string(),
        leaf_removals: removals,
        omega_k: (1..=t.size()).map(|k| t.omega_k(k).to_string()).collect(),
        omega: t.omega().to_string(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn convert(from: Kind, to: Kind, input: &PathBuf, output: Option<&PathBuf>, show_order: Option<usize>) -> Result<(), Failure> {
    let family = family_from_str(&read_input(input)?)?;
    if family.kind != from {
        return Err(Failure(format!("input holds {} but --from is {from}", family.kind)));
    }
    if let Some(m) = show_order {
        match nc_cumulants::cumulants::format_expansion(from, to, m) {
            Ok(s) => eprintln!("{s}"),
            Err(e) => eprintln!("note: {e}"),
        }
    }
    let result: CumulantFamily = family.convert(to)?;
    let text = family_to_string(&result);
    match output {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verify(suite: &str, seed: u64, max_order: usize) -> Result<bool, Failure> {
    let reports = run_suite(suite, seed, max_order)?;
    let all = reports.iter().all(|r| r.passed());
    println!("{}", serde_json::to_string_pretty(&reports)?);
    Ok(all)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Enumerate { kind, n, k, count, format } => {
            enumerate(kind, n as usize, k.map(|k| k as usize), count, format)?;
        }
        Command::Omega { tree, max_size } => omega(tree, max_size.map(|m| m as usize))?,
        Command::Tree { tree: s } => tree(&s)?,
        Command::Convert { from, to, input, output, show_order } => {
            convert(from, to, &input, output.as_ref(), show_order.map(|m| m as usize))?;
        }
        Command::Verify { suite, seed, max_order } => return verify(&suite, seed, max_order as usize),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
