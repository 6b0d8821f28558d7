//! `efxlab`: batch front end for checking, counting and constructing fair allocations.
//!
//! Exit codes: 0 success or property holds, 1 property fails or nothing
//! satisfies it, 2 usage or input error, 3 enumeration cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use efxlab::approx::quarter_wefx;
use efxlab::construct::{
    alg1_n_plus_2, bobw_lottery, cut_and_choose_efx, leximax_cut_efx_plus, weighted_leximinpp_optimal_with_cap,
};
use efxlab::enumeration::iter_allocations;
use efxlab::fairness::check_with_cap;
use efxlab::fixtures::{export_fixtures, verify_paper_suite_with};
use efxlab::io::allocation_to_value;
use efxlab::reduction::{parse_graph, reduce_with};
use efxlab::wefx_po::wefx_po_binary;
use efxlab::{
    count_satisfying_with, min_count_search, parse_allocation, parse_instance, Allocation, CountOptions, Error,
    Instance, Property, Rational, DEFAULT_CAP,
};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "efxlab", version, about = "Exact EFX-family fairness workbench")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Largest number of allocations an exhaustive operation may visit.
    #[arg(long, global = true, env = "EFXLAB_CAP", default_value_t = DEFAULT_CAP)]
    cap: u64,

    /// Worker threads for exhaustive counting.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    NPlus2,
    CutAndChoose,
    LeximaxEfxPlus,
    LeximinPp,
    WefxPoBinary,
    QuarterWefx,
    Bobw,
}

#[derive(clap::Args, Debug)]
struct PropertyArgs {
    /// efx | efx-plus | ef1 | ef | po | wef | wefx | wwefx | alpha-wefx
    #[arg(long)]
    property: String,

    /// Approximation factor for alpha-wefx, as `p/q`.
    #[arg(long)]
    alpha: Option<Rational>,
}

impl PropertyArgs {
    fn resolve(&self) -> Result<Property, Error> {
        Property::parse(&self.property, self.alpha.clone())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide one property for one allocation.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
        #[command(flatten)]
        property: PropertyArgs,
    },
    /// Count the complete allocations satisfying a property.
    Count {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        property: PropertyArgs,
        /// Satisfying allocations to list, in enumeration order.
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
    },
    /// List complete allocations, optionally only those satisfying a property.
    Enumerate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        property: Option<String>,
        #[arg(long)]
        alpha: Option<Rational>,
        /// Stop after this many listed allocations.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Run a constructive algorithm.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// Picking order for n-plus-2, comma separated; identity by default.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Cutting agent for the two-agent procedures.
        #[arg(long, default_value_t = 0)]
        cutter: usize,
    },
    /// Sample random additive instances and report the fewest satisfying allocations.
    Search {
        #[arg(long)]
        n: usize,
        /// Defaults to n + 2.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value = "efx")]
        property: String,
        #[arg(long)]
        alpha: Option<Rational>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Values are drawn uniformly from 0..=value-range.
        #[arg(long, default_value_t = 1000)]
        value_range: u64,
    },
    /// Count perfect matchings of a bipartite graph through EFX counting.
    Reduce {
        /// One `i j` edge per line, 0-based.
        #[arg(long)]
        graph: PathBuf,
        /// Side size; inferred from the largest index when absent.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Re-derive every stored example fixture.
    VerifyPaper {
        /// Also write the fixture instances as `<dir>/<id>.json`.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// What a command produced and how the process should exit.
struct Outcome {
    json: Value,
    table: String,
    code: u8,
}

impl Outcome {
    fn ok(json: Value, table: String) -> Self {
        Outcome { json, table, code: 0 }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_instance(path: &PathBuf) -> Result<Instance, Error> {
    parse_instance(&read(path)?)
}

fn count_options(cli: &Cli, witness_limit: usize) -> CountOptions {
    CountOptions { threads: cli.threads.max(1), cap: cli.cap, witness_limit }
}

fn allocation_table(alloc: &Allocation) -> String {
    alloc
        .bundles()
        .iter()
        .enumerate()
        .map(|(i, b)| format!("agent {i}: {b}\n"))
        .collect()
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check { instance, allocation, property } => {
            let inst = load_instance(instance)?;
            let alloc = parse_allocation(&read(allocation)?, Some(&inst))?;
            let prop = property.resolve()?;
            let report = check_with_cap(&inst, &alloc, &prop, cli.cap)?;
            let mut table = format!("{prop}: {}\n", if report.holds { "holds" } else { "fails" });
            if let Some(w) = report.witness {
                let good = w.good.map_or("-".to_string(), |g| g.to_string());
                table.push_str(&format!("witness: envier {} envied {} good {good}\n", w.envier, w.envied));
            }
            if let Some(d) = &report.dominator {
                table.push_str(&format!("dominated by {d}\n"));
            }
            Ok(Outcome { json: report.to_json(&prop), table, code: if report.holds { 0 } else { EXIT_FAILS } })
        }
        Command::Count { instance, property, witnesses } => {
            let inst = load_instance(instance)?;
            let prop = property.resolve()?;
            let result = count_satisfying_with(&inst, &prop, &count_options(cli, *witnesses))?;
            let mut table = format!("{}\n", result.satisfying);
            for w in &result.witnesses {
                table.push_str(&format!("{w}\n"));
            }
            let code = if result.satisfying > 0 { 0 } else { EXIT_FAILS };
            Ok(Outcome { json: result.to_json(&prop), table, code })
        }
        Command::Enumerate { instance, property, alpha, limit } => {
            let inst = load_instance(instance)?;
            let prop = property.as_deref().map(|p| Property::parse(p, alpha.clone())).transpose()?;
            let mut listed = Vec::new();
            let mut table = String::new();
            for (index, alloc) in iter_allocations(inst.n(), inst.m(), cli.cap)?.enumerate() {
                if limit.is_some_and(|l| listed.len() >= l) {
                    break;
                }
                if let Some(p) = &prop {
                    if !check_with_cap(&inst, &alloc, p, cli.cap)?.holds {
                        continue;
                    }
                }
                table.push_str(&format!("{index}\t{alloc}\n"));
                let mut doc = allocation_to_value(&alloc);
                doc["index"] = json!(index);
                listed.push(doc);
            }
            Ok(Outcome::ok(json!({ "allocations": listed }), table))
        }
        Command::Solve { instance, algorithm, order, cutter } => {
            let inst = load_instance(instance)?;
            let alloc = match algorithm {
                Algorithm::NPlus2 => {
                    let order = order.clone().unwrap_or_else(|| (0..inst.n()).collect());
                    alg1_n_plus_2(&inst, &order)?
                }
                Algorithm::CutAndChoose => cut_and_choose_efx(&inst, *cutter)?,
                Algorithm::LeximaxEfxPlus => leximax_cut_efx_plus(&inst, *cutter)?,
                Algorithm::LeximinPp => weighted_leximinpp_optimal_with_cap(&inst, cli.cap)?,
                Algorithm::WefxPoBinary => wefx_po_binary(&inst)?,
                Algorithm::QuarterWefx => quarter_wefx(&inst)?,
                Algorithm::Bobw => {
                    let lottery = bobw_lottery(&inst)?;
                    let entries: Vec<Value> = lottery
                        .entries
                        .iter()
                        .map(|e| json!({ "probability": e.probability.to_string(), "allocation": allocation_to_value(&e.allocation) }))
                        .collect();
                    let table = lottery
                        .entries
                        .iter()
                        .map(|e| format!("{}\t{}\n", e.probability, e.allocation))
                        .collect();
                    return Ok(Outcome::ok(json!({ "entries": entries }), table));
                }
            };
            Ok(Outcome::ok(allocation_to_value(&alloc), allocation_table(&alloc)))
        }
        Command::Search { n, m, property, alpha, samples, seed, value_range } => {
            let prop = Property::parse(property, alpha.clone())?;
            let m = m.unwrap_or(n + 2);
            let report = min_count_search(*n, m, &prop, *samples, *seed, *value_range, &count_options(cli, 0))?;
            let table = format!("min {prop} count over {samples} samples (seed {seed}): {}\n", report.min_count);
            Ok(Outcome::ok(report.to_json(), table))
        }
        Command::Reduce { graph, n } => {
            let g = parse_graph(&read(graph)?, *n)?;
            let report = reduce_with(&g, &count_options(cli, 0))?;
            let efx = report.efx_count.map_or("-".to_string(), |c| c.to_string());
            let table = format!(
                "n {}  k {}  efx allocations {efx}  perfect matchings {}\n",
                report.n, report.k, report.matchings
            );
            Ok(Outcome::ok(report.to_json(), table))
        }
        Command::VerifyPaper { export } => {
            if let Some(dir) = export {
                export_fixtures(dir)?;
            }
            let report = verify_paper_suite_with(&count_options(cli, 0));
            let code = if report.all_passed() { 0 } else { EXIT_FAILS };
            Ok(Outcome { json: report.to_json(), table: report.to_table(), code })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize")),
                Format::Table => print!("{}", out.table),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_USAGE,
            })
        }
    }
}
