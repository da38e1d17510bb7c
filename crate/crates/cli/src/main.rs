//! Command-line surface for the sp4mono toolkit.
//!
//! Every published table is a subcommand: `catalog` and `generators` dump
//! the operator list, `index` runs Todd-Coxeter coset enumeration, `modn`
//! computes indices in Sp4(Z/N) (one cell or the whole survey table),
//! `geometry` prints the (Z/2)^4 reports, `classify` emits the Lambda
//! classification data, `gamma` evaluates the congruence-subgroup index
//! formula, and `decompose` rewrites an integral symplectic matrix as a
//! word in the Behr generators.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 enumeration budget
//! exceeded, 4 internal invariant violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;
use serde_json::json;

use sp4mono::catalog::{
    builtin_catalog, gamma_index, plot_data, theorem_status, IndexStatus, OperatorKind,
    OperatorRecord,
};
use sp4mono::coset::{
    enumerate_monodromy, strategy_by_name, EnumerationResult, Outcome, DEFAULT_BUDGET, MAX_BUDGET,
};
use sp4mono::error::Error;
use sp4mono::geometry::{
    self, act_point, cycle_notation, pentad_permutation, point_label, syntheme_permutation,
    transvection, LINE_PENTADS, LINE_PENTAD_LABELS, PENTADS, PENTAD_LABELS, SYNTHEMES,
    SYNTHEME_LABELS,
};
use sp4mono::matrix::{format_rational, ExactMatrix4};
use sp4mono::modgroup::{
    crt_lower_bound, monodromy_mod_index, order_method_by_name, OrderMethod,
};
use sp4mono::modmat::mod_reduce;
use sp4mono::words::decompose;
use sp4mono::Result;

/// Budget cap environment variable honored by every enumeration.
const MAX_COSETS_ENV: &str = "SP4MONO_MAX_COSETS";

/// Moduli used for the combined lower bound reported on budget exhaustion:
/// the largest feasible prime powers for 2, 3 and 5.
const BOUND_MODULI: [u32; 3] = [16, 27, 25];

#[derive(Parser)]
#[command(name = "sp4mono", version, about = "Monodromy subgroups of Sp4(Z): exact index computations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the operator catalog (all records, or one).
    Catalog(SelectorArgs),
    /// Print the integral generators of one case.
    Generators(SelectorArgs),
    /// Compute the index of a monodromy group in Sp4(Z) by coset enumeration.
    Index(IndexArgs),
    /// Compute indices of images in Sp4(Z/N): one cell or the survey table.
    Modn(ModnArgs),
    /// Reports on the symplectic geometry of (Z/2)^4.
    Geometry(GeometryArgs),
    /// The Lambda = (7k - 2d)/24 classification data for the 14 hypergeometric cases.
    Classify,
    /// The index of the congruence subgroup Gamma(d1, d2) in Sp4(Z).
    Gamma(GammaArgs),
    /// Rewrite an integral symplectic matrix as a word in the Behr generators.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct SelectorArgs {
    /// Select a case by its AESZ number.
    #[arg(long, conflicts_with = "dk")]
    aesz: Option<u32>,
    /// Select the pair (d, k) directly, e.g. `--dk 1,3`.
    #[arg(long, value_parser = parse_dk)]
    dk: Option<(u32, u32)>,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    selector: SelectorArgs,
    /// Enumeration strategy.
    #[arg(long, default_value = "hlt", value_parser = ["hlt", "felsch"])]
    strategy: String,
    /// Maximum number of cosets to define (live + dead).
    #[arg(long)]
    budget: Option<usize>,
    /// Opt in to the long-running cases and raise the default budget to the ceiling.
    #[arg(long)]
    long: bool,
}

#[derive(Args)]
struct ModnArgs {
    #[command(flatten)]
    selector: SelectorArgs,
    /// The modulus N.
    #[arg(long, conflicts_with = "table")]
    n: Option<u32>,
    /// Print the whole survey table (rows N, columns the 14 hypergeometric cases).
    #[arg(long)]
    table: bool,
    /// Order computation method (default: chosen by group size).
    #[arg(long, value_parser = ["bfs", "schreier_sims"])]
    method: Option<String>,
    /// Extend the table rows from N <= 9 to N <= 27.
    #[arg(long)]
    long: bool,
    /// Drop table rows with N above this bound.
    #[arg(long)]
    max_n: Option<u32>,
    /// Compute table cells one at a time instead of fanning out.
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct GeometryArgs {
    /// Print one report instead of all of them.
    #[arg(long, value_enum)]
    report: Option<Report>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Report {
    Pentads,
    Synthemes,
    LinePentads,
    Actions,
    Theorem4,
    Stabilizers,
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    d1: u32,
    /// Defaults to 1; must divide d1.
    #[arg(long, default_value_t = 1)]
    d2: u32,
}

#[derive(Args)]
struct DecomposeArgs {
    /// The matrix as a JSON array of 4 rows, entries integers or "p/q" strings.
    #[arg(long)]
    matrix: String,
}

fn parse_dk(s: &str) -> std::result::Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [d, k] = parts.as_slice() else {
        return Err(format!("expected d,k (e.g. 1,3), got {s:?}"));
    };
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad {t:?}: {e}"));
    Ok((parse(d)?, parse(k)?))
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::BudgetExceeded { .. } => 3,
                Error::InvariantViolation(_) => 4,
                _ => 2,
            });
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Catalog(sel) => cmd_catalog(cli.format, sel),
        Command::Generators(sel) => cmd_generators(cli.format, sel),
        Command::Index(args) => cmd_index(cli.format, args),
        Command::Modn(args) => cmd_modn(cli.format, args),
        Command::Geometry(args) => cmd_geometry(cli.format, args),
        Command::Classify => cmd_classify(cli.format),
        Command::Gamma(args) => cmd_gamma(cli.format, args),
        Command::Decompose(args) => cmd_decompose(cli.format, args),
    }
}

fn no_csv(format: Format) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::InvalidInput(
            "csv output is not available for this subcommand".into(),
        ));
    }
    Ok(())
}

/// A resolved case: the pair (d, k) plus any extra generators. Selecting by
/// AESZ number includes that record's extra generators; selecting by (d, k)
/// gives the bare group G(d, k).
struct Case {
    label: String,
    aesz: Option<u32>,
    d: u32,
    k: u32,
    extras: Vec<ExactMatrix4>,
}

fn resolve_case(sel: &SelectorArgs) -> Result<Case> {
    match (sel.aesz, sel.dk) {
        (Some(aesz), None) => {
            let record = builtin_catalog()
                .by_aesz(aesz)
                .ok_or_else(|| Error::InvalidInput(format!("unknown AESZ number {aesz}")))?;
            Ok(Case {
                label: format!("AESZ {aesz} = ({},{})", record.d, record.k),
                aesz: Some(aesz),
                d: record.d,
                k: record.k,
                extras: record.extra_generators.clone(),
            })
        }
        (None, Some((d, k))) => {
            if d == 0 || k == 0 {
                return Err(Error::InvalidInput("d and k must be positive".into()));
            }
            Ok(Case {
                label: format!("({d},{k})"),
                aesz: None,
                d,
                k,
                extras: Vec::new(),
            })
        }
        _ => Err(Error::InvalidInput(
            "select a case with exactly one of --aesz or --dk".into(),
        )),
    }
}

// --- catalog ---------------------------------------------------------------

fn cmd_catalog(format: Format, sel: &SelectorArgs) -> Result<i32> {
    let catalog = builtin_catalog();
    let records: Vec<&OperatorRecord> = match (sel.aesz, sel.dk) {
        (Some(aesz), None) => vec![catalog
            .by_aesz(aesz)
            .ok_or_else(|| Error::InvalidInput(format!("unknown AESZ number {aesz}")))?],
        (None, Some((d, k))) => vec![catalog
            .hypergeometric_by_dk(d, k)
            .ok_or_else(|| Error::InvalidInput(format!("no hypergeometric case ({d},{k})")))?],
        (None, None) => catalog.records().iter().collect(),
        _ => {
            return Err(Error::InvalidInput(
                "select with at most one of --aesz or --dk".into(),
            ))
        }
    };
    match format {
        Format::Json => {
            let values: Vec<_> = records.iter().map(|r| serde_json::to_value(r)).collect::<std::result::Result<_, _>>()?;
            println!("{}", serde_json::to_string_pretty(&values)?);
        }
        Format::Csv => {
            println!("aesz,kind,d,k,c2H,c3,discriminant,n1,extra_generators");
            for r in &records {
                let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
                println!(
                    "{},{},{},{},{},{},{},{},{}",
                    r.aesz,
                    kind_name(r.kind),
                    r.d,
                    r.k,
                    r.c2h,
                    r.c3,
                    opt(r.discriminant),
                    opt(r.n1),
                    r.extra_generators.len()
                );
            }
        }
        Format::Text => {
            for r in &records {
                let mut line = format!(
                    "AESZ {:<3} {:<15} (d,k)=({},{})  c2H={:<3} c3={}",
                    r.aesz,
                    kind_name(r.kind),
                    r.d,
                    r.k,
                    r.c2h,
                    r.c3
                );
                if let Some(alphas) = &r.alphas {
                    let list: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
                    write!(line, "  alphas={}", list.join(",")).unwrap();
                }
                if let Some(n1) = r.n1 {
                    write!(line, "  n1={n1}").unwrap();
                }
                if let Some(disc) = r.discriminant {
                    write!(line, "  N={disc}").unwrap();
                }
                if !r.extra_generators.is_empty() {
                    write!(line, "  extras={}", r.extra_generators.len()).unwrap();
                }
                if r.k_identity_anomaly {
                    line.push_str("  [k-identity anomaly]");
                }
                println!("{line}");
            }
        }
    }
    Ok(0)
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Hypergeometric => "hypergeometric",
        OperatorKind::Conifold => "conifold",
    }
}

// --- generators ------------------------------------------------------------

fn cmd_generators(format: Format, sel: &SelectorArgs) -> Result<i32> {
    no_csv(format)?;
    let case = resolve_case(sel)?;
    let (m, n) = sp4mono::catalog::integral_generators(case.d, case.k);
    let mut named: Vec<(String, &ExactMatrix4)> =
        vec![(format!("M({},{})", case.d, case.k), &m), ("N".into(), &n)];
    for (i, t) in case.extras.iter().enumerate() {
        named.push((format!("T{}", i + 1), t));
    }
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("case".into(), json!(case.label));
            for (name, mat) in &named {
                obj.insert(name.clone(), serde_json::to_value(mat)?);
            }
            println!("{}", serde_json::to_string_pretty(&obj)?);
        }
        _ => {
            println!("{}", case.label);
            for (name, mat) in &named {
                println!("{name} =");
                print_matrix(mat);
            }
        }
    }
    Ok(0)
}

fn print_matrix(m: &ExactMatrix4) {
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        println!("  [{}]", cells.join(", "));
    }
}

// --- index -----------------------------------------------------------------

/// The cases whose enumeration is not minutes-scale (or provably cannot
/// finish): they require `--long` and come with an up-front estimate.
fn heavy_estimate(case: &Case) -> Option<&'static str> {
    if case.aesz == Some(33) {
        return Some("expect about 5.5M cosets with hlt, a few seconds");
    }
    match (case.d, case.k) {
        (4, 4) => Some(
            "the index is 47,185,920; only felsch closes it, at 56M cosets \
             and about 2.7 GB of coset table; expect six minutes",
        ),
        (6, 5) => Some(
            "enumeration has never completed within the 70M-coset ceiling; \
             the index is at least 18,662,400",
        ),
        (9, 6) => Some(
            "enumeration has never completed within the 70M-coset ceiling; \
             the index is at least 1,133,740,800",
        ),
        (5, 4) => Some(
            "enumeration exhausts the 70M-coset ceiling; \
             the index is at least 62,400,000",
        ),
        _ => None,
    }
}

fn resolve_budget(requested: Option<usize>, long: bool) -> usize {
    let mut budget = requested.unwrap_or(if long { MAX_BUDGET } else { DEFAULT_BUDGET });
    if let Ok(cap) = std::env::var(MAX_COSETS_ENV) {
        match cap.parse::<usize>() {
            Ok(cap) => budget = budget.min(cap),
            Err(_) => eprintln!("warning: ignoring unparsable {MAX_COSETS_ENV}={cap:?}"),
        }
    }
    budget.min(MAX_BUDGET).max(1)
}

fn cmd_index(format: Format, args: &IndexArgs) -> Result<i32> {
    let case = resolve_case(&args.selector)?;

    // The seven proved-infinite groups: report that instead of burning the
    // budget on an enumeration that cannot close.
    if case.extras.is_empty() && theorem_status(case.d, case.k) == Some(IndexStatus::Infinite) {
        match format {
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "case": case.label, "outcome": "infinite", "proved": true,
                }))?
            ),
            Format::Csv => {
                println!("case,strategy,outcome,index,lower_bound");
                println!("{},,infinite,,", case.label);
            }
            Format::Text => println!("{}: infinite index in Sp4(Z) (proved)", case.label),
        }
        return Ok(0);
    }

    if let Some(estimate) = heavy_estimate(&case) {
        if !args.long {
            return Err(Error::InvalidInput(format!(
                "{} is a long-running case; pass --long to run it ({estimate})",
                case.label
            )));
        }
        eprintln!("{}: {estimate}", case.label);
    }

    let strategy = strategy_by_name(&args.strategy)?;
    let budget = resolve_budget(args.budget, args.long);
    let result = enumerate_monodromy(case.d, case.k, &case.extras, strategy, budget)?;
    print_index_result(format, &case, &result, budget)
}

fn print_index_result(
    format: Format,
    case: &Case,
    result: &EnumerationResult,
    budget: usize,
) -> Result<i32> {
    let stats = &result.stats;
    match result.outcome {
        Outcome::Completed { index } => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "case": case.label,
                        "strategy": result.strategy,
                        "outcome": "completed",
                        "index": index,
                        "stats": stats_json(stats),
                    }))?
                ),
                Format::Csv => {
                    println!("case,strategy,outcome,index,lower_bound");
                    println!("{},{},completed,{index},", case.label, result.strategy);
                }
                Format::Text => {
                    println!(
                        "[Sp4(Z) : {}] = {index}   ({}, {} cosets defined, {} ms)",
                        case.label, result.strategy, stats.defined, stats.elapsed_ms
                    );
                }
            }
            Ok(0)
        }
        Outcome::BudgetExceeded { live, defined } => {
            // Not an index claim: report what is provable instead, the
            // combined lower bound from the largest feasible prime-power
            // moduli.
            let bound = index_lower_bound(case)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "case": case.label,
                        "strategy": result.strategy,
                        "outcome": "budget_exceeded",
                        "budget": budget,
                        "live": live,
                        "defined": defined,
                        "lower_bound": bound.to_string(),
                        "bound_moduli": BOUND_MODULI,
                        "stats": stats_json(stats),
                    }))?
                ),
                Format::Csv => {
                    println!("case,strategy,outcome,index,lower_bound");
                    println!(
                        "{},{},budget_exceeded,,{bound}",
                        case.label, result.strategy
                    );
                }
                Format::Text => {
                    println!(
                        "[Sp4(Z) : {}]: budget of {budget} cosets exceeded \
                         ({live} live, {defined} defined); index >= {bound} \
                         (from moduli {BOUND_MODULI:?})",
                        case.label
                    );
                }
            }
            Ok(3)
        }
    }
}

fn stats_json(stats: &sp4mono::coset::EnumerationStats) -> serde_json::Value {
    json!({
        "defined": stats.defined,
        "peak_live": stats.peak_live,
        "coincidences": stats.coincidences,
        "deductions": stats.deductions,
        "elapsed_ms": stats.elapsed_ms,
    })
}

/// Product of the image indices at the pairwise coprime moduli 16, 27, 25;
/// a divisor (hence lower bound) of the true index.
fn index_lower_bound(case: &Case) -> Result<BigUint> {
    let mut cells = Vec::new();
    for n in BOUND_MODULI {
        let report = monodromy_mod_index(case.d, case.k, &case.extras, n, None)?;
        cells.push((n, report.index));
    }
    crt_lower_bound(&cells)
}

// --- modn ------------------------------------------------------------------

fn cmd_modn(format: Format, args: &ModnArgs) -> Result<i32> {
    if args.table {
        if args.selector.aesz.is_some() || args.selector.dk.is_some() {
            return Err(Error::InvalidInput(
                "--table surveys all 14 hypergeometric cases; drop the selector".into(),
            ));
        }
        return cmd_modn_table(format, args);
    }
    let Some(n) = args.n else {
        return Err(Error::InvalidInput(
            "pass --n N for one cell or --table for the survey".into(),
        ));
    };
    let case = resolve_case(&args.selector)?;
    let method = resolve_method(args.method.as_deref())?;
    let report = monodromy_mod_index(case.d, case.k, &case.extras, n, method)?;
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "case": case.label,
                "modulus": n,
                "group_order": report.group_order.to_string(),
                "subgroup_order": report.subgroup_order.to_string(),
                "index": report.index.to_string(),
                "method": report.method,
            }))?
        ),
        Format::Csv => {
            println!("case,n,group_order,subgroup_order,index,method");
            println!(
                "{},{n},{},{},{},{}",
                case.label, report.group_order, report.subgroup_order, report.index, report.method
            );
        }
        Format::Text => println!(
            "{} mod {n}: index {} in Sp4(Z/{n})   (image order {}, group order {}, {})",
            case.label, report.index, report.subgroup_order, report.group_order, report.method
        ),
    }
    Ok(0)
}

fn resolve_method(name: Option<&str>) -> Result<Option<&'static dyn OrderMethod>> {
    name.map(order_method_by_name).transpose()
}

fn cmd_modn_table(format: Format, args: &ModnArgs) -> Result<i32> {
    let method = resolve_method(args.method.as_deref())?;
    let cases: Vec<(u32, u32)> = builtin_catalog()
        .hypergeometric()
        .map(|r| (r.d, r.k))
        .collect();
    let mut rows: Vec<u32> = if args.long { (2..=27).collect() } else { (2..=9).collect() };
    if let Some(max_n) = args.max_n {
        rows.retain(|&n| n <= max_n);
    }

    let jobs: Vec<(u32, (u32, u32))> = rows
        .iter()
        .flat_map(|&n| cases.iter().map(move |&dk| (n, dk)))
        .collect();
    let cell = |&(n, (d, k)): &(u32, (u32, u32))| -> ((u32, (u32, u32)), Result<BigUint>) {
        let value = monodromy_mod_index(d, k, &[], n, method).map(|r| r.index);
        ((n, (d, k)), value)
    };
    let computed: Vec<_> = if args.serial {
        jobs.iter().map(cell).collect()
    } else {
        use rayon::prelude::*;
        jobs.par_iter().map(cell).collect()
    };
    let mut table: BTreeMap<(u32, (u32, u32)), String> = BTreeMap::new();
    for (key, value) in computed {
        let cell = match value {
            Ok(index) => index.to_string(),
            Err(e) => {
                eprintln!("cell N={} ({},{}): {e}", key.0, key.1 .0, key.1 .1);
                "?".into()
            }
        };
        table.insert(key, cell);
    }

    let header: Vec<String> = cases.iter().map(|&(d, k)| format!("({d},{k})")).collect();
    match format {
        Format::Json => {
            let rows_json: Vec<_> = rows
                .iter()
                .map(|&n| {
                    json!({
                        "n": n,
                        "indices": cases
                            .iter()
                            .map(|&dk| table[&(n, dk)].clone())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "columns": header,
                    "rows": rows_json,
                }))?
            );
        }
        Format::Csv => {
            println!("N,{}", header.join(","));
            for &n in &rows {
                let cells: Vec<&str> =
                    cases.iter().map(|&dk| table[&(n, dk)].as_str()).collect();
                println!("{n},{}", cells.join(","));
            }
        }
        Format::Text => {
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for (i, &dk) in cases.iter().enumerate() {
                for &n in &rows {
                    widths[i] = widths[i].max(table[&(n, dk)].len());
                }
            }
            let mut line = String::from("N     ");
            for (h, w) in header.iter().zip(&widths) {
                write!(line, " {h:>w$}").unwrap();
            }
            println!("{line}");
            for &n in &rows {
                let mut line = format!("{n:<6}");
                for (&dk, w) in cases.iter().zip(&widths) {
                    write!(line, " {:>w$}", table[&(n, dk)]).unwrap();
                }
                println!("{line}");
            }
        }
    }
    Ok(0)
}

// --- geometry --------------------------------------------------------------

fn cmd_geometry(format: Format, args: &GeometryArgs) -> Result<i32> {
    no_csv(format)?;
    let reports = match args.report {
        Some(r) => vec![r],
        None => vec![
            Report::Pentads,
            Report::Synthemes,
            Report::LinePentads,
            Report::Actions,
            Report::Theorem4,
            Report::Stabilizers,
        ],
    };
    let mut obj = serde_json::Map::new();
    for report in reports {
        match report {
            Report::Pentads => geometry_pentads(format, &mut obj)?,
            Report::Synthemes => geometry_synthemes(format, &mut obj)?,
            Report::LinePentads => geometry_line_pentads(format, &mut obj)?,
            Report::Actions => geometry_actions(format, &mut obj)?,
            Report::Theorem4 => geometry_theorem4(format, &mut obj)?,
            Report::Stabilizers => geometry_stabilizers(format, &mut obj)?,
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&obj)?);
    }
    Ok(0)
}

fn points_string(points: &[u8]) -> String {
    let letters: Vec<String> = points.iter().map(|&p| point_label(p).to_string()).collect();
    format!("{{{}}}", letters.join(","))
}

fn geometry_pentads(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    if format == Format::Json {
        let list: Vec<_> = PENTADS
            .iter()
            .zip(PENTAD_LABELS)
            .map(|(p, label)| json!({ "label": label, "points": points_string(p) }))
            .collect();
        obj.insert("pentads".into(), json!(list));
    } else {
        println!("pentads:");
        for (p, label) in PENTADS.iter().zip(PENTAD_LABELS) {
            println!("  {label} = {}", points_string(p));
        }
    }
    Ok(())
}

fn syntheme_string(s: &[[u8; 3]; 2]) -> String {
    format!("{{{},{}}}", points_string(&s[0]), points_string(&s[1]))
}

fn geometry_synthemes(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    if format == Format::Json {
        let list: Vec<_> = SYNTHEMES
            .iter()
            .zip(SYNTHEME_LABELS)
            .map(|(s, label)| json!({ "label": label, "triples": syntheme_string(s) }))
            .collect();
        obj.insert("synthemes".into(), json!(list));
    } else {
        println!("synthemes:");
        for (s, label) in SYNTHEMES.iter().zip(SYNTHEME_LABELS) {
            println!("  {label:<4} = {}", syntheme_string(s));
        }
    }
    Ok(())
}

fn geometry_line_pentads(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let line_pentad_string = |lp: &[[u8; 3]; 5]| -> String {
        let lines: Vec<String> = lp.iter().map(|l| points_string(l)).collect();
        lines.join(" ")
    };
    if format == Format::Json {
        let list: Vec<_> = LINE_PENTADS
            .iter()
            .zip(LINE_PENTAD_LABELS)
            .map(|(lp, label)| json!({ "label": label, "lines": line_pentad_string(lp) }))
            .collect();
        obj.insert("line_pentads".into(), json!(list));
    } else {
        println!("line pentads (spreads of lagrangian lines):");
        for (lp, label) in LINE_PENTADS.iter().zip(LINE_PENTAD_LABELS) {
            println!("  {label} = {}", line_pentad_string(lp));
        }
    }
    Ok(())
}

fn geometry_actions(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let reduce = |m: &ExactMatrix4| mod_reduce(m, 2);
    let (m13, n) = sp4mono::catalog::integral_generators(1, 3);
    let (m12, _) = sp4mono::catalog::integral_generators(1, 2);
    let (m13, n, m12) = (reduce(&m13)?, reduce(&n)?, reduce(&m12)?);

    let ta = transvection(geometry::point_from_label('a')?);
    let ta_pentads = cycle_notation(&pentad_permutation(&ta)?, &PENTAD_LABELS);
    let m13_pentads = cycle_notation(&pentad_permutation(&m13)?, &PENTAD_LABELS);
    let n_pentads = cycle_notation(&pentad_permutation(&n)?, &PENTAD_LABELS);
    let m12_synthemes = cycle_notation(&syntheme_permutation(&m12)?, &SYNTHEME_LABELS);
    let n_synthemes = cycle_notation(&syntheme_permutation(&n)?, &SYNTHEME_LABELS);
    let g13_fixed: Vec<&str> = geometry::fixed_pentads(&[m13.clone(), n.clone()])?
        .into_iter()
        .map(|i| PENTAD_LABELS[i])
        .collect();
    let g12_fixed: Vec<&str> = geometry::fixed_synthemes(&[m12.clone(), n.clone()])?
        .into_iter()
        .map(|i| SYNTHEME_LABELS[i])
        .collect();
    // Point images of M(1,3), the survey's worked example.
    let m13_points: Vec<String> = ['a', 'd', 'g', 'm', 'o']
        .iter()
        .map(|&c| {
            let p = geometry::point_from_label(c)?;
            Ok(format!("{c}->{}", point_label(act_point(&m13, p)?)))
        })
        .collect::<Result<_>>()?;

    if format == Format::Json {
        obj.insert(
            "actions".into(),
            json!({
                "T_a_on_pentads": ta_pentads,
                "M(1,3)_on_pentads": m13_pentads,
                "N_on_pentads": n_pentads,
                "M(1,3)_point_images": m13_points,
                "G(1,3)_fixed_pentads": g13_fixed,
                "M(1,2)_on_synthemes": m12_synthemes,
                "N_on_synthemes": n_synthemes,
                "G(1,2)_fixed_synthemes": g12_fixed,
            }),
        );
    } else {
        println!("actions mod 2:");
        println!("  T_a on pentads:        {ta_pentads}");
        println!("  M(1,3) on pentads:     {m13_pentads}   (points: {})", m13_points.join(", "));
        println!("  N on pentads:          {n_pentads}");
        println!("  G(1,3) fixes pentads:  {}", g13_fixed.join(", "));
        println!("  M(1,2) on synthemes:   {m12_synthemes}");
        println!("  N on synthemes:        {n_synthemes}");
        println!("  G(1,2) fixes synthemes: {}", g12_fixed.join(", "));
    }
    Ok(())
}

fn geometry_theorem4(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let report = geometry::verify_theorem4()?;
    if format == Format::Json {
        obj.insert("theorem4".into(), serde_json::to_value(&report)?);
    } else {
        println!("stabilizer characterizations mod 2:");
        println!("  |Sp4(Z/2)| = {}", report.sp4_f2_order);
        println!(
            "  G(1,3) mod 2: order {}, index {}, fixed pentads {:?}, equals pentad stabilizer: {}, generators contained: {}",
            report.g13_order,
            report.g13_index,
            report.g13_common_fixed_pentads.iter().map(|&i| PENTAD_LABELS[i]).collect::<Vec<_>>(),
            report.g13_equals_pentad_stabilizer,
            report.g13_generators_in_stabilizer,
        );
        println!(
            "  G(1,2) mod 2: order {}, index {}, fixed synthemes {:?}, equals syntheme stabilizer: {}, generators contained: {}",
            report.g12_order,
            report.g12_index,
            report.g12_common_fixed_synthemes.iter().map(|&i| SYNTHEME_LABELS[i]).collect::<Vec<_>>(),
            report.g12_equals_syntheme_stabilizer,
            report.g12_generators_in_stabilizer,
        );
    }
    Ok(())
}

fn geometry_stabilizers(format: Format, obj: &mut serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let cmp = geometry::compare_pentad_stabilizers()?;
    if format == Format::Json {
        obj.insert("stabilizers".into(), serde_json::to_value(&cmp)?);
    } else {
        println!("point-pentad vs line-pentad stabilizers:");
        println!(
            "  orders {} and {}, conjugate: {}",
            cmp.pentad_stabilizer_order, cmp.line_pentad_stabilizer_order, cmp.conjugate
        );
        println!("  point-pentad fixed-point character:  {:?}", cmp.pentad_character);
        println!("  line-pentad fixed-point character:   {:?}", cmp.line_pentad_character);
    }
    Ok(())
}

// --- classify --------------------------------------------------------------

fn cmd_classify(format: Format) -> Result<i32> {
    let rows = plot_data(builtin_catalog());
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("aesz,d,k,lambda,predicted,status");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.aesz,
                    r.d,
                    r.k,
                    r.lambda,
                    prediction_name(r.predicted),
                    status_name(r.status)
                );
            }
        }
        Format::Text => {
            println!("AESZ  (d,k)    Lambda  predicted  proved");
            for r in &rows {
                println!(
                    "{:<5} ({},{})  {:>6}  {:<9}  {}",
                    r.aesz,
                    r.d,
                    r.k,
                    r.lambda,
                    prediction_name(r.predicted),
                    status_name(r.status)
                );
            }
        }
    }
    Ok(0)
}

fn prediction_name(p: sp4mono::catalog::IndexPrediction) -> &'static str {
    use sp4mono::catalog::IndexPrediction::*;
    match p {
        Finite => "finite",
        Infinite => "infinite",
        Boundary => "boundary",
    }
}

fn status_name(s: IndexStatus) -> &'static str {
    match s {
        IndexStatus::Finite => "finite",
        IndexStatus::Infinite => "infinite",
    }
}

// --- gamma -----------------------------------------------------------------

fn cmd_gamma(format: Format, args: &GammaArgs) -> Result<i32> {
    let index = gamma_index(args.d1, args.d2)?;
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "d1": args.d1,
                "d2": args.d2,
                "index": index.to_string(),
            }))?
        ),
        Format::Csv => {
            println!("d1,d2,index");
            println!("{},{},{index}", args.d1, args.d2);
        }
        Format::Text => println!("[Sp4(Z) : Gamma({},{})] = {index}", args.d1, args.d2),
    }
    Ok(0)
}

// --- decompose -------------------------------------------------------------

fn cmd_decompose(format: Format, args: &DecomposeArgs) -> Result<i32> {
    no_csv(format)?;
    let matrix: ExactMatrix4 = serde_json::from_str(&args.matrix)
        .map_err(|e| Error::InvalidInput(format!("malformed matrix literal: {e}")))?;
    let word = decompose(&matrix)?;
    if word.evaluate() != matrix {
        return Err(Error::InvariantViolation(
            "decomposition does not evaluate back to the input".into(),
        ));
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "word": serde_json::to_value(&word)?,
                "display": word.to_string(),
                "letters": word.letter_len(),
            }))?
        ),
        _ => println!("{word}"),
    }
    Ok(0)
}
