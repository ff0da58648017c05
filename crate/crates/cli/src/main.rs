//! `doptimal` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use doptimal::{
    bound_value, build_design, builtin_corpus, canonical_form, enumerate_params, exact_determinant,
    exhaustive_search, format_matrix, format_sds_record, infeasible_orders, is_feasible_order,
    params_to_pair, parse_matrix_file, parse_sds_file, search_driver, verify_doptimal, verify_gram,
    verify_sds, Error, Origin, ParameterSet, Sds, SearchConfig, DETERMINANT_ORDER_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "doptimal",
    version,
    about = "D-optimal designs from supplementary difference sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List feasible parameter sets.
    Params(ParamsArgs),
    /// Verify SDS records from a file or the built-in corpus.
    Verify(VerifyArgs),
    /// Search for D-optimal SDS pairs.
    Search(SearchArgs),
    /// Build design matrices from SDS records.
    Construct(ConstructArgs),
    /// Exact determinants of design matrices.
    Det(DetArgs),
}

#[derive(Args)]
struct ParamsArgs {
    /// List every parameter set with v up to this bound.
    #[arg(long, conflicts_with = "v", required_unless_present = "v")]
    max_v: Option<u32>,
    /// List the parameter sets of a single order.
    #[arg(long)]
    v: Option<u32>,
    /// Also list orders excluded by the two-squares condition.
    #[arg(long)]
    infeasible: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// File of SDS records.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Verify the embedded corpus.
    #[arg(long)]
    builtin: bool,
    /// Also require distinct canonical forms within each parameter set.
    #[arg(long)]
    pairwise_nonequiv: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    v: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    lambda: u32,
    /// Compression factor; must divide v.
    #[arg(long, required_unless_present = "exhaustive")]
    m: Option<u32>,
    /// Try every pair of blocks instead of compressing (small v only).
    #[arg(long)]
    exhaustive: bool,
    /// Stop after this many distinct solutions.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct DetArgs {
    #[arg(long)]
    input: PathBuf,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Params(args) => params(args),
        Command::Verify(args) => verify(args),
        Command::Search(args) => search(args),
        Command::Construct(args) => construct(args),
        Command::Det(args) => det(args),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn print_param_row(q: &ParameterSet) {
    let pair = params_to_pair(q).expect("enumerated sets invert");
    println!("{q} x={} y={} n={}", pair.x(), pair.y(), q.n());
}

fn infeasible_line(v: u32) -> String {
    format!("infeasible: {} not a sum of two squares", 2 * v - 1)
}

fn params(args: ParamsArgs) -> Outcome {
    if let Some(v) = args.v {
        match is_feasible_order(v)? {
            None => println!("{}", infeasible_line(v)),
            Some((a, b)) => {
                println!("# {} = {a}^2 + {b}^2", 2 * v - 1);
                enumerate_params(v)
                    .iter()
                    .filter(|q| q.v() == v)
                    .for_each(print_param_row);
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let max_v = args.max_v.expect("clap requires --max-v or --v");
    enumerate_params(max_v).iter().for_each(print_param_row);
    if args.infeasible {
        for v in infeasible_orders(max_v) {
            println!("v={v} {}", infeasible_line(v));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// One report line per record: all checks, or the first failing one.
fn check_record(location: &str, sds: &Sds) -> bool {
    let mut checks = vec![("sds", verify_sds(sds)), ("doptimal", verify_doptimal(sds))];
    match build_design(sds) {
        Ok(design) => checks.push(("gram", verify_gram(&design))),
        Err(e) => {
            println!("FAIL {location} {} gram: {e}", sds.params());
            return false;
        }
    }
    match checks.iter().find(|(_, verdict)| verdict.is_err()) {
        Some((name, Err(violation))) => {
            println!(
                "FAIL {location} {} {name} {}: {violation}",
                sds.params(),
                violation.kind()
            );
            false
        }
        _ => {
            println!("PASS {location} {} sds doptimal gram", sds.params());
            true
        }
    }
}

struct Record {
    location: String,
    /// Records are compared for equivalence only within the same source.
    source: &'static str,
    sds: Sds,
}

/// Canonical forms must be distinct within each D-optimal parameter set.
fn check_nonequivalence(records: &[Record]) -> Result<bool, Failure> {
    let mut groups: BTreeMap<(&str, String), Vec<&Record>> = BTreeMap::new();
    for record in records.iter().filter(|r| r.sds.params().is_doptimal()) {
        let key = (record.source, record.sds.params().to_string());
        groups.entry(key).or_default().push(record);
    }
    let mut ok = true;
    for ((source, params), members) in groups.into_iter().filter(|(_, m)| m.len() > 1) {
        let params = format!(
            "{source}{}{params}",
            if source.is_empty() { "" } else { " " }
        );
        let mut seen: BTreeMap<Sds, &str> = BTreeMap::new();
        let mut clash = None;
        for (location, sds) in members.iter().map(|r| (&r.location, &r.sds)) {
            if let Some(first) = seen.insert(canonical_form(sds)?, location) {
                clash = Some((first, location));
                break;
            }
        }
        match clash {
            None => println!("PASS nonequiv {params} {} records distinct", members.len()),
            Some((a, b)) => {
                ok = false;
                println!("FAIL nonequiv {params}: {a} and {b} are equivalent");
            }
        }
    }
    Ok(ok)
}

fn verify(args: VerifyArgs) -> Outcome {
    let records: Vec<Record> = if args.builtin {
        builtin_corpus()
            .iter()
            .map(|e| {
                let (location, source) = match e.origin {
                    Origin::ParameterTable => ("table".to_string(), "table"),
                    Origin::NewOrderListing { number } => (format!("listing #{number}"), "listing"),
                };
                Record {
                    location,
                    source,
                    sds: e.sds.clone(),
                }
            })
            .collect()
    } else {
        let path = args.file.expect("clap requires a file or --builtin");
        parse_sds_file(&read(&path)?)?
            .into_iter()
            .map(|(line, sds)| Record {
                location: format!("line {line}"),
                source: "",
                sds,
            })
            .collect()
    };
    let mut ok = true;
    for record in &records {
        ok &= check_record(&record.location, &record.sds);
    }
    if args.pairwise_nonequiv {
        ok &= check_nonequivalence(&records)?;
    }
    eprintln!(
        "{} records, {}",
        records.len(),
        if ok { "all pass" } else { "failures" }
    );
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn search(args: SearchArgs) -> Outcome {
    let params = ParameterSet::pair(args.v, args.r, args.s, args.lambda);
    if args.v.is_multiple_of(2) {
        return Err(Error::EvenOrder(args.v).into());
    }
    if !params.is_doptimal() {
        return Err(Error::NotFeasible(params.to_string()).into());
    }
    if args.exhaustive {
        let mut found = exhaustive_search(&params)?;
        if let Some(limit) = args.limit {
            found.truncate(limit);
        }
        for sds in &found {
            println!("{}", format_sds_record(sds));
        }
        eprintln!("exhaustive {params} solutions={}", found.len());
        return Ok(ExitCode::SUCCESS);
    }
    let budget = match args.budget_seconds {
        Some(secs) => Some(
            Duration::try_from_secs_f64(secs)
                .map_err(|e| Failure::usage(format!("--budget-seconds: {e}")))?,
        ),
        None => None,
    };
    let cfg = SearchConfig {
        workers: args.workers.max(1),
        max_solutions: args.limit,
        time_budget: budget,
        ..SearchConfig::new(params, args.m.expect("clap requires --m"))
    };
    let report = search_driver(&cfg, |sds| println!("{}", format_sds_record(sds)))?;
    eprintln!("{report}");
    if report.solutions.is_empty() && report.status != doptimal::SearchStatus::Exhausted {
        eprintln!("no solution found before the search was cut short");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn construct(args: ConstructArgs) -> Outcome {
    let records = parse_sds_file(&read(&args.input)?)?;
    let mut out = String::new();
    for (line, sds) in &records {
        let design = build_design(sds)?;
        if let Err(violation) = verify_gram(&design) {
            println!(
                "FAIL line {line} {} gram {}: {violation}",
                sds.params(),
                violation.kind()
            );
            return Ok(ExitCode::FAILURE);
        }
        println!(
            "PASS line {line} {} gram order {}",
            sds.params(),
            design.order()
        );
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format_matrix(&design));
    }
    fs::write(&args.output, out)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.output.display())))?;
    Ok(ExitCode::SUCCESS)
}

fn det(args: DetArgs) -> Outcome {
    let matrices = parse_matrix_file(&read(&args.input)?)?;
    let mut ok = true;
    for (i, design) in matrices.iter().enumerate() {
        let order = design.order();
        if order > DETERMINANT_ORDER_LIMIT {
            return Err(Failure::usage(format!(
                "matrix {}: order {order} exceeds the determinant limit {DETERMINANT_ORDER_LIMIT}",
                i + 1
            )));
        }
        let det = exact_determinant(design)?;
        let bound = (order % 2 == 0)
            .then(|| bound_value(order as u32 / 2).ok())
            .flatten();
        match bound {
            Some(b) if det.magnitude() == b.magnitude() => {
                println!("PASS matrix {} order {order} |det| = {b} = bound", i + 1)
            }
            Some(b) => {
                ok = false;
                println!("FAIL matrix {} order {order} det = {det}, bound {b}", i + 1);
            }
            None => println!("matrix {} order {order} det = {det} (no bound)", i + 1),
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
