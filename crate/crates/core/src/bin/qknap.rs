use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qknap::bench::{self, BenchSpec, CapacitySweep};
use qknap::dominance::{compare, evaluate, falsification_witness, suffix_sums, Valuation};
use qknap::greedy::{greedy_r, greedy_w, GreedyResult};
use qknap::io::{self, CapacityMode, GeneratorParams};
use qknap::model::{Instance, Subset};
use qknap::{dp, oracle, Error};

/// Knapsack with qualitative item levels.
#[derive(Parser)]
#[command(name = "qknap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every non-dominated count vector with the dynamic program.
    Solve {
        instance: PathBuf,
        /// Also dump every table cell.
        #[arg(long)]
        matrix: bool,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 when the frontier is empty.
        #[arg(long)]
        fail_empty: bool,
        /// Report wall time on standard error.
        #[arg(long)]
        timing: bool,
    },
    /// Single efficient selection by a greedy fill.
    Greedy {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: GreedyMode,
        #[arg(long)]
        json: bool,
    },
    /// Frontier by exhaustive enumeration (small instances).
    Enumerate {
        instance: PathBuf,
        /// Enumerate beyond the size guard.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        fail_empty: bool,
    },
    /// Generate a random instance.
    Gen(GenArgs),
    /// Compare two selections under dominance.
    Check {
        instance: PathBuf,
        /// Comma-separated item ids of the first selection.
        #[arg(long = "a", allow_hyphen_values = true)]
        a: String,
        /// Comma-separated item ids of the second selection.
        #[arg(long = "b", allow_hyphen_values = true)]
        b: String,
        /// Print separating valuations where weak dominance fails.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sweep generated instances through the solver and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GreedyMode {
    R,
    W,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, conflicts_with = "ratio", required_unless_present = "ratio")]
    capacity: Option<u64>,
    /// Capacity as a fraction of the total weight, `p/q` or decimal.
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Item counts, e.g. `10,20` or `10..12`.
    #[arg(long)]
    n: String,
    #[arg(long)]
    k: String,
    #[arg(long, conflicts_with = "ratio", required_unless_present = "ratio")]
    capacity: Option<String>,
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long)]
    wmax: u64,
    #[arg(long)]
    seeds: String,
}

enum Failure {
    Empty(String),
    Input(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Empty(_) => 1,
            Failure::Input(_) => 2,
            Failure::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Empty(m) | Failure::Input(m) | Failure::Guard(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleGuard { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    io::parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_ids(text: &str) -> Result<Subset, Failure> {
    let ids = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Failure::Input(format!("bad item id `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subset::new(ids)?)
}

fn greedy_text(r: &GreedyResult) -> String {
    format!(
        "vector={} weight={} items={} guarantee={}\n",
        r.vector, r.weight, r.subset, r.guarantee
    )
}

fn greedy_json(r: &GreedyResult) -> String {
    let doc = json!({
        "vector": r.vector.counts(),
        "weight": r.weight,
        "items": r.subset.ids(),
        "guarantee": r.guarantee,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
}

fn check_subsets(
    inst: &Instance,
    a: &Subset,
    b: &Subset,
    witness: bool,
    as_json: bool,
) -> Result<String, Failure> {
    let ga = inst.rank_cardinality_vector(a)?;
    let gb = inst.rank_cardinality_vector(b)?;
    for (name, s) in [("a", a), ("b", b)] {
        let w = inst.total_weight(s)?;
        if w > inst.capacity() {
            return Err(Failure::Empty(format!(
                "selection {name} {s} weighs {w}, above capacity {}",
                inst.capacity()
            )));
        }
    }
    let verdict = compare(&ga, &gb)?;
    let (sa, sb) = (suffix_sums(&ga), suffix_sums(&gb));

    let n = inst.len() as u64;
    let mut witnesses: Vec<(&str, Valuation)> = Vec::new();
    if witness {
        if let Some(v) = falsification_witness(&gb, &ga, n)? {
            witnesses.push(("a_over_b", v));
        }
        if let Some(v) = falsification_witness(&ga, &gb, n)? {
            witnesses.push(("b_over_a", v));
        }
    }

    if as_json {
        let mut doc = json!({
            "verdict": verdict,
            "vector_a": ga.counts(),
            "vector_b": gb.counts(),
            "suffix_a": sa.sums(),
            "suffix_b": sb.sums(),
        });
        for (name, v) in &witnesses {
            doc[format!("witness_{name}")] = json!({
                "valuation": v.values().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "value_a": evaluate(v, &ga)?.to_string(),
                "value_b": evaluate(v, &gb)?.to_string(),
            });
        }
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    }

    let mut out = format!("{verdict}\nsuffix_a={sa}\nsuffix_b={sb}\n");
    for (name, v) in &witnesses {
        out += &format!(
            "witness_{name}={v} value_a={} value_b={}\n",
            evaluate(v, &ga)?,
            evaluate(v, &gb)?
        );
    }
    Ok(out)
}

fn frontier_output(
    f: &dp::FrontierResult,
    matrix: Option<&dp::LabelMatrix>,
    as_json: bool,
    fail_empty: bool,
) -> Result<String, Failure> {
    if fail_empty && f.labels.is_empty() {
        return Err(Failure::Empty("frontier is empty".into()));
    }
    Ok(match (as_json, matrix) {
        (true, m) => io::frontier_json(f, m),
        (false, Some(m)) => io::serialize_frontier_with_matrix(f, m),
        (false, None) => io::serialize_frontier(f),
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Solve {
            instance,
            matrix,
            json,
            fail_empty,
            timing,
        } => {
            let inst = load(&instance)?;
            let (f, m) = if matrix {
                let (f, m) = dp::solve_with_matrix(&inst)?;
                (f, Some(m))
            } else {
                (dp::solve(&inst)?, None)
            };
            if timing {
                eprintln!("solve: {:.3} ms", f.stats.elapsed.as_secs_f64() * 1e3);
            }
            frontier_output(&f, m.as_ref(), json, fail_empty)
        }
        Command::Greedy {
            instance,
            mode,
            json,
        } => {
            let inst = load(&instance)?;
            let r = match mode {
                GreedyMode::R => greedy_r(&inst),
                GreedyMode::W => greedy_w(&inst),
            };
            Ok(if json { greedy_json(&r) } else { greedy_text(&r) })
        }
        Command::Enumerate {
            instance,
            force,
            json,
            fail_empty,
        } => {
            let inst = load(&instance)?;
            let f = oracle::enumerate_frontier(&inst, force)?;
            frontier_output(&f, None, json, fail_empty)
        }
        Command::Gen(args) => {
            let capacity = match (args.capacity, args.ratio) {
                (Some(w), _) => CapacityMode::Fixed(w),
                (None, Some(r)) => CapacityMode::Ratio(io::parse_ratio(&r)?),
                (None, None) => return Err(Failure::Input("--capacity or --ratio is required".into())),
            };
            let inst = io::generate_instance(&GeneratorParams {
                n: args.n,
                levels: args.k,
                capacity,
                weight_max: args.wmax,
                seed: args.seed,
            })?;
            Ok(io::serialize_instance(&inst))
        }
        Command::Check {
            instance,
            a,
            b,
            witness,
            json,
        } => {
            let inst = load(&instance)?;
            check_subsets(&inst, &parse_ids(&a)?, &parse_ids(&b)?, witness, json)
        }
        Command::Bench(args) => {
            let to_usize = |v: Vec<u64>| v.into_iter().map(|x| x as usize).collect::<Vec<_>>();
            let capacities = match (args.capacity, args.ratio) {
                (Some(ws), _) => CapacitySweep::Fixed(bench::parse_axis(&ws)?),
                (None, Some(r)) => CapacitySweep::Ratio(io::parse_ratio(&r)?),
                (None, None) => return Err(Failure::Input("--capacity or --ratio is required".into())),
            };
            let spec = BenchSpec {
                ns: to_usize(bench::parse_axis(&args.n)?),
                ks: to_usize(bench::parse_axis(&args.k)?),
                capacities,
                weight_max: args.wmax,
                seeds: bench::parse_axis(&args.seeds)?,
            };
            Ok(bench::to_csv(&bench::run(&spec)?))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("qknap: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
