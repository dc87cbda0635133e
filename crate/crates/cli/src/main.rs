use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conformant::bench::{generate, run_suite, Budget, Family, FamilySpec, SuiteFilter, Variant};
use conformant::dd::{NodeStore, StoreConfig};
use conformant::oracle::{oracle_search, OracleConfig, OracleError, OracleOutcome};
use conformant::par::Execution;
use conformant::planner::{Outcome, Plan, PlannerOptions, VerifyMode};
use conformant::report::RunReport;
use conformant::{Error, Problem};
use serde_json::json;

const EXIT_PLAN: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "conformant", version, about = "Conformant planner for nondeterministic domains")]
struct Cli {
    /// log2 of the initial unique-table size (overrides CMBP_UNIQUE_TABLE_BITS).
    #[arg(long, global = true, value_name = "BITS")]
    table_bits: Option<u8>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a conformant plan.
    Plan {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        max_depth: usize,
        #[arg(long)]
        no_prune: bool,
        #[arg(long, default_value_t = 1)]
        all_plans: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check a plan from every initial state and print the belief trace.
    Verify {
        file: PathBuf,
        /// Semicolon-separated action names.
        #[arg(long, allow_hyphen_values = true)]
        plan: String,
        /// Simulate explicit states instead of using the symbolic encoding.
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        json: bool,
    },
    /// Explicit-state breadth-first search from the initial belief.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = OracleConfig::default().bound)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Generate, plan and compare benchmark instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    min: Option<usize>,
    #[arg(long)]
    max: Option<usize>,
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long, conflicts_with = "noninertial")]
    toilets: Option<usize>,
    #[arg(long)]
    noninertial: Option<usize>,
    /// Write each generated domain into this directory.
    #[arg(long, value_name = "DIR")]
    emit: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    max_depth: usize,
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PLAN };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn store(bits: Option<u8>) -> NodeStore {
    let mut config = StoreConfig::from_env();
    if let Some(b) = bits {
        config.unique_table_bits = b.min(30);
    }
    NodeStore::with_config(config)
}

fn load(path: &Path, bits: Option<u8>) -> Result<Problem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Problem::with_store(&text, store(bits)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn instance_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Plan {
            file,
            max_depth,
            no_prune,
            all_plans,
            json,
        } => {
            let mut problem = load(&file, cli.table_bits)?;
            let opts = PlannerOptions {
                max_depth,
                prune: !no_prune,
                all_plans,
            };
            let search = problem.plan(&opts)?;
            let report = RunReport::from_search("plan", &instance_name(&file), &search);
            if json {
                println!("{}", report.to_json());
            } else {
                match search.outcome {
                    Outcome::Plan => {
                        for p in &search.plans {
                            println!("PLAN {p}");
                        }
                        println!("length {}", search.level);
                    }
                    Outcome::Fail => println!("FAIL: no conformant solution"),
                    Outcome::Unknown => println!("UNKNOWN: depth limit {max_depth} reached"),
                }
                println!("belief states {} inserted, {} hits", search.bs_inserted, search.bs_hits);
                println!("level  relation_nodes  plans_kept");
                for l in &search.levels {
                    println!("{:>5}  {:>14}  {:>10}", l.level, l.relation_nodes, l.plans_kept);
                }
            }
            Ok(match search.outcome {
                Outcome::Plan => EXIT_PLAN,
                Outcome::Fail => EXIT_FAIL,
                Outcome::Unknown => EXIT_UNKNOWN,
            })
        }
        Command::Verify {
            file,
            plan,
            explicit,
            json,
        } => {
            let mut problem = load(&file, cli.table_bits)?;
            let plan = Plan::parse(&plan);
            let mode = if explicit { VerifyMode::Explicit } else { VerifyMode::Symbolic };
            let v = problem.verify(plan.actions(), mode)?;
            let names = |s| problem.explicit.true_fluents(s).join(",");
            if json {
                let trace: Vec<Vec<String>> = v.trace.iter().map(|b| b.iter().map(|&s| names(s)).collect()).collect();
                let out = json!({
                    "command": "verify",
                    "instance": instance_name(&file),
                    "plan": plan.actions(),
                    "conformant": v.conformant,
                    "failed_step": v.failed_step,
                    "trace": trace,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else {
                for (i, belief) in v.trace.iter().enumerate() {
                    let label = if i == 0 { "initial" } else { plan.actions()[i - 1].as_str() };
                    let states: Vec<String> = belief.iter().map(|&s| format!("{{{}}}", names(s))).collect();
                    println!("{i:>3} {label:<12} {}", states.join(" "));
                }
                match v.failed_step {
                    Some(step) => println!("NOT CONFORMANT: {} is not applicable at step {}", plan.actions()[step], step + 1),
                    None if v.conformant => println!("CONFORMANT"),
                    None => println!("NOT CONFORMANT: final belief leaves the goal"),
                }
            }
            Ok(if v.conformant { EXIT_PLAN } else { EXIT_FAIL })
        }
        Command::Oracle { file, bound, json } => {
            let problem = load(&file, cli.table_bits)?;
            let config = OracleConfig {
                bound,
                ..OracleConfig::default()
            };
            let (outcome, code, result) = match oracle_search(&problem.explicit, &config) {
                Ok(r) if r.outcome == OracleOutcome::Plan => ("PLAN", EXIT_PLAN, Some(r)),
                Ok(r) => ("FAIL", EXIT_FAIL, Some(r)),
                Err(OracleError::BoundExceeded { .. }) => ("UNKNOWN", EXIT_UNKNOWN, None),
                Err(e) => return Err(Error::from(e).into()),
            };
            let plan = result.as_ref().and_then(|r| r.plan.clone());
            let length = result.as_ref().and_then(|r| r.length);
            if json {
                let out = json!({
                    "command": "oracle",
                    "instance": instance_name(&file),
                    "outcome": outcome,
                    "plan": plan,
                    "length": length,
                    "expanded": result.as_ref().map(|r| r.expanded),
                    "bound": bound,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else {
                match (&plan, length) {
                    (Some(p), Some(l)) => println!("PLAN {}\nlength {l}", p.join(";")),
                    _ if code == EXIT_UNKNOWN => println!("UNKNOWN: inconclusive, more than {bound} belief states"),
                    _ => println!("FAIL: no conformant solution"),
                }
            }
            Ok(code)
        }
        Command::Bench(args) => bench(args),
    }
}

fn file_stem(spec: &FamilySpec) -> String {
    spec.to_string()
        .to_ascii_lowercase()
        .replace(['(', ','], "-")
        .replace(')', "")
}

fn bench(args: BenchArgs) -> Result<u8, Failure> {
    if let (Some(a), Some(b)) = (args.min, args.max) {
        if a > b {
            return Err(Failure::Usage(format!("--min {a} exceeds --max {b}")));
        }
    }
    let filter = SuiteFilter {
        family: Some(args.family),
        variant: args.variant,
        min: args.min,
        max: args.max,
        extra: args.toilets.or(args.noninertial),
    };
    let specs = filter.instances();
    if specs.is_empty() {
        return Err(Failure::Usage(format!(
            "no {} instances match; give --min and --max",
            args.family
        )));
    }
    for spec in &specs {
        spec.check().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(dir) = &args.emit {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for spec in &specs {
            let path = dir.join(format!("{}.ar", file_stem(spec)));
            let text = generate(spec).map_err(Error::from)?;
            fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
    }
    let budget = Budget {
        options: PlannerOptions {
            max_depth: args.max_depth,
            prune: !args.no_prune,
            all_plans: 1,
        },
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = run_suite(&filter, &budget);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.all_pass() { EXIT_PLAN } else { EXIT_FAIL })
}
