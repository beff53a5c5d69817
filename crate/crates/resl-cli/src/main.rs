//! Command-line front end: validate and classify algebras, run state
//! censuses, quotients, completions and catalog scans.
//!
//! Exit codes: 0 success, 1 domain failure (axiom violation, failed suite,
//! budget), 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use resl_core::algebra::ResiduatedLattice;
use resl_core::catalog;
use resl_core::classify::{classify, identity_suite};
use resl_core::convergence::completion;
use resl_core::filter::{filter_props, quotient, FilterSet};
use resl_core::io::{census_csv, load_algebra};
use resl_core::report::{ItemStatus, SuiteReport};
use resl_core::state::{census, enumerate_states, Budget, ClassFilter, StateMap};

#[derive(Parser)]
#[command(name = "resl", version, about = "finite residuated lattice workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

/// Options shared by every subcommand. A fixed seed makes every sampled
/// report reproducible; all shipped commands are exhaustive at the
/// supported sizes, so the seed is recorded in report headers only.
#[derive(Args, Clone)]
struct RunConfig {
    /// output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// worker threads (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// random seed recorded with sampled reports
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// raw candidate budget for enumerations (positive)
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file and print its classification
    Validate { path: PathBuf },
    /// Print only the classification flags
    Classify { path: PathBuf },
    /// Census of states between two algebras (codomain defaults to domain)
    States {
        dom: PathBuf,
        cod: Option<PathBuf>,
        /// state class: all, type1, type1-op, type2, type3, riecan, morphism
        #[arg(long, default_value = "type1")]
        class: String,
    },
    /// Quotient by a filter given as comma-separated element names
    Quotient {
        path: PathBuf,
        #[arg(long)]
        filter: String,
    },
    /// Completion along an order-preserving type I self-state
    Completion {
        path: PathBuf,
        /// census row id (e.g. s6) or explicit table (e.g. 0,1,1,0,0,1)
        #[arg(long)]
        state: String,
    },
    /// Exhaustive open-problem scan over the small-algebra catalog
    Scan {
        /// problem id: type2-subset-type1, type3-join, mv-self-states
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Build the catalog of all small algebras up to isomorphism
    Catalog {
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// output directory (defaults to $RESL_CATALOG_DIR or ./catalog)
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

enum CliError {
    /// usage or parse problem -> exit 2
    Parse(String),
    /// domain failure: axiom violation, budget, failed suite -> exit 1
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

fn load(path: &Path) -> Result<ResiduatedLattice, CliError> {
    load_algebra(path).map_err(|e| match e {
        resl_core::io::IoError::Read { .. } | resl_core::io::IoError::Parse { .. } => {
            CliError::Parse(e.to_string())
        }
        resl_core::io::IoError::Algebra(inner) => CliError::Domain(inner.to_string()),
        other => CliError::Domain(other.to_string()),
    })
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn suite_lines(rep: &SuiteReport) -> Vec<(String, String, String)> {
    rep.items
        .iter()
        .map(|item| {
            let (status, extra) = match &item.status {
                ItemStatus::Passed => ("pass".to_string(), String::new()),
                ItemStatus::Failed { witness } => ("fail".to_string(), format!("{witness:?}")),
                ItemStatus::Skipped { reason } => ("skip".to_string(), reason.clone()),
            };
            (item.id.clone(), status, extra)
        })
        .collect()
}

fn print_flags_and_suite(
    format: Format,
    a: &ResiduatedLattice,
    suite: Option<&SuiteReport>,
) -> String {
    let cls = classify(a);
    match format {
        Format::Text => {
            let mut out = format!("carrier: {} elements (bot {}, top {})\n", a.n(), a.bot(), a.top());
            for (name, v) in cls.flags() {
                out.push_str(&format!("{name}: {v}\n"));
            }
            if let Some(rep) = suite {
                for (id, status, extra) in suite_lines(rep) {
                    if extra.is_empty() {
                        out.push_str(&format!("{status} {id}\n"));
                    } else {
                        out.push_str(&format!("{status} {id} ({extra})\n"));
                    }
                }
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            out.push_str(&format!("n,{}\n", a.n()));
            for (name, v) in cls.flags() {
                out.push_str(&format!("{name},{}\n", u8::from(v)));
            }
            if let Some(rep) = suite {
                for (id, status, extra) in suite_lines(rep) {
                    out.push_str(&format!("identity.{id},{status}{}{extra}\n",
                        if extra.is_empty() { "" } else { ":" }));
                }
            }
            out
        }
        Format::Json => {
            let mut doc = serde_json::json!({
                "n": a.n(),
                "classification": serde_json::to_value(cls).unwrap(),
            });
            if let Some(rep) = suite {
                let items: Vec<serde_json::Value> = suite_lines(rep)
                    .into_iter()
                    .map(|(id, status, extra)| {
                        serde_json::json!({"id": id, "status": status, "info": extra})
                    })
                    .collect();
                doc["identities"] = serde_json::Value::Array(items);
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    }
}

fn cmd_validate(path: &Path, format: Format) -> Result<String, CliError> {
    let a = load(path)?;
    let rep = identity_suite(&a);
    let out = print_flags_and_suite(format, &a, Some(&rep));
    if !rep.passed() {
        // a validated algebra that fails an identity indicates a defect
        return Err(CliError::Domain(format!("identity suite failed:\n{rep}")));
    }
    Ok(out)
}

fn cmd_classify(path: &Path, format: Format) -> Result<String, CliError> {
    let a = load(path)?;
    Ok(print_flags_and_suite(format, &a, None))
}

fn cmd_states(
    dom: &Path,
    cod: Option<&PathBuf>,
    class: &str,
    format: Format,
    budget: Budget,
) -> Result<String, CliError> {
    let a = load(dom)?;
    let l = match cod {
        Some(p) => load(p)?,
        None => a.clone(),
    };
    let filter = ClassFilter::parse(class)
        .ok_or_else(|| CliError::Parse(format!("unknown state class '{class}'")))?;
    let rows = census(&a, &l, filter, budget).map_err(domain)?;
    Ok(match format {
        Format::Csv => census_csv(&a, &rows),
        Format::Text => {
            let mut out = format!("{} states of class {class}\n", rows.len());
            out.push_str(&census_csv(&a, &rows));
            out
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .enumerate()
                .map(|(i, (s, cls))| {
                    serde_json::json!({
                        "id": format!("s{}", i + 1),
                        "table": s.table,
                        "flags": serde_json::to_value(cls).unwrap(),
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({ "states": items })).unwrap()
            )
        }
    })
}

fn parse_elements(a: &ResiduatedLattice, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            a.element_by_name(tok)
                .ok_or_else(|| CliError::Parse(format!("unknown element '{tok}'")))
        })
        .collect()
}

fn cmd_quotient(path: &Path, filter_text: &str, format: Format) -> Result<String, CliError> {
    let a = load(path)?;
    let members = parse_elements(&a, filter_text)?;
    let f = FilterSet::from_members(a.n(), members);
    f.check_filter(&a).map_err(domain)?;
    let props = filter_props(&a, &f).map_err(domain)?;
    let q = quotient(&a, &f).map_err(domain)?;
    let class_names: Vec<String> = q
        .classes
        .iter()
        .map(|cl| {
            let names: Vec<String> = cl.iter().map(|&x| a.name_of(x)).collect();
            names.join(" ")
        })
        .collect();
    Ok(match format {
        Format::Text | Format::Csv => {
            let mut out = format!(
                "filter: {{{}}} proper={} prime={} maximal={}\n",
                filter_text, props.proper, props.prime, props.maximal
            );
            out.push_str(&format!("classes: {}\n", q.classes.len()));
            for (i, names) in class_names.iter().enumerate() {
                out.push_str(&format!("class {i}: {{{names}}}\n"));
            }
            out.push_str(&format!("projection: {:?}\n", q.proj));
            let raw = q.ops.to_raw();
            out.push_str(&format!("induced times: {:?}\n", raw.times));
            out.push_str(&format!("induced imp: {:?}\n", raw.imp));
            out
        }
        Format::Json => {
            let raw = q.ops.to_raw();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "filter": filter_text,
                    "proper": props.proper,
                    "prime": props.prime,
                    "maximal": props.maximal,
                    "classes": q.classes,
                    "projection": q.proj,
                    "induced": serde_json::to_value(raw).unwrap(),
                }))
                .unwrap()
            )
        }
    })
}

fn resolve_state(
    a: &ResiduatedLattice,
    text: &str,
    budget: Budget,
) -> Result<StateMap, CliError> {
    if let Some(row) = text.strip_prefix('s').and_then(|t| t.parse::<usize>().ok()) {
        // row id in the type I self-census, in lexicographic order
        let states = enumerate_states(a, a, ClassFilter::type_i(), budget).map_err(domain)?;
        return states
            .get(row.checked_sub(1).ok_or_else(|| {
                CliError::Parse("census rows are numbered from 1".to_string())
            })?)
            .cloned()
            .ok_or_else(|| {
                CliError::Parse(format!(
                    "census row {row} out of range (census has {} rows)",
                    states.len()
                ))
            });
    }
    Ok(StateMap::new(parse_elements(a, text)?))
}

fn cmd_completion(
    path: &Path,
    state_text: &str,
    format: Format,
    budget: Budget,
) -> Result<String, CliError> {
    let a = load(path)?;
    let s = resolve_state(&a, state_text, budget)?;
    let comp = completion(&a, &a, &s).map_err(domain)?;
    let verdicts = suite_lines(&comp.clauses);
    let out = match format {
        Format::Text | Format::Csv => {
            let mut out = format!("state: {:?}\n", s.table);
            out.push_str(&format!("completed carrier: {} elements\n", comp.completed.n()));
            out.push_str(&format!("embedding: {:?}\n", comp.embed));
            out.push_str(&format!("lifted state: {:?}\n", comp.lifted.table));
            for (id, status, extra) in &verdicts {
                if extra.is_empty() {
                    out.push_str(&format!("{status} {id}\n"));
                } else {
                    out.push_str(&format!("{status} {id} ({extra})\n"));
                }
            }
            out
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = verdicts
                .iter()
                .map(|(id, status, extra)| {
                    serde_json::json!({"id": id, "status": status, "info": extra})
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "state": s.table,
                    "completed_carrier": comp.completed.n(),
                    "embedding": comp.embed,
                    "lifted_state": comp.lifted.table,
                    "clauses": items,
                }))
                .unwrap()
            )
        }
    };
    if !comp.clauses.passed() {
        return Err(CliError::Domain(format!("completion clause failed:\n{}", comp.clauses)));
    }
    Ok(out)
}

fn catalog_dir(explicit: Option<&PathBuf>) -> PathBuf {
    explicit.cloned().unwrap_or_else(|| {
        std::env::var_os("RESL_CATALOG_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("catalog"))
    })
}

/// Reuse a persisted catalog when it covers the requested orders, otherwise
/// enumerate from scratch.
fn catalog_for_scan(
    max_order: usize,
    budget: Budget,
) -> Result<Vec<catalog::CatalogEntry>, CliError> {
    let dir = catalog_dir(None);
    if dir.join("index.json").exists() {
        if let Ok(loaded) = catalog::load_catalog(&dir) {
            let covered: Vec<catalog::CatalogEntry> =
                loaded.into_iter().filter(|e| e.algebra.n() <= max_order).collect();
            if covered.iter().any(|e| e.algebra.n() == max_order) {
                return Ok(covered);
            }
        }
    }
    catalog::build_catalog(max_order, budget).map_err(domain)
}

fn cmd_scan(
    problem: &str,
    max_order: usize,
    format: Format,
    budget: Budget,
    seed: u64,
) -> Result<String, CliError> {
    if max_order > catalog::DEFAULT_MAX_ORDER {
        return Err(CliError::Parse(format!(
            "max order {max_order} exceeds the supported {}",
            catalog::DEFAULT_MAX_ORDER
        )));
    }
    let entries = catalog_for_scan(max_order, budget)?;
    let findings = match problem {
        "type2-subset-type1" => {
            catalog::scan_type_ii_subset_type_i(&entries, budget).map_err(domain)?
        }
        "type3-join" => catalog::scan_type_iii_join_question(&entries, budget).map_err(domain)?,
        "mv-self-states" => {
            catalog::scan_mv_self_state_criterion(&entries, budget).map_err(domain)?
        }
        other => return Err(CliError::Parse(format!("unknown problem '{other}'"))),
    };
    Ok(match format {
        Format::Csv => {
            format!("# seed: {seed}\n{}", catalog::scan_csv(&findings))
        }
        Format::Text => {
            let mut out = format!(
                "# seed: {seed}\nproblem {problem} over {} algebras (order <= {max_order}): {} findings\n",
                entries.len(),
                findings.len()
            );
            for f in &findings {
                out.push_str(&format!(
                    "{} -> {}: state {:?} ({}; witness {:?})\n",
                    f.dom, f.cod, f.state, f.detail, f.witness
                ));
            }
            out.push_str(&format!("note: {}\n", catalog::SCAN_EVIDENCE_NOTE));
            out
        }
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "seed": seed,
                "problem": problem,
                "algebras": entries.len(),
                "findings": serde_json::to_value(&findings).unwrap(),
                "note": catalog::SCAN_EVIDENCE_NOTE,
            }))
            .unwrap()
        ),
    })
}

fn cmd_catalog(
    max_order: usize,
    dir: Option<&PathBuf>,
    format: Format,
    budget: Budget,
) -> Result<String, CliError> {
    if max_order > catalog::DEFAULT_MAX_ORDER {
        return Err(CliError::Parse(format!(
            "max order {max_order} exceeds the supported {}",
            catalog::DEFAULT_MAX_ORDER
        )));
    }
    let entries = catalog::build_catalog(max_order, budget).map_err(domain)?;
    let dir = catalog_dir(dir);
    catalog::save_catalog(&dir, &entries).map_err(domain)?;
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for order in 2..=max_order {
        let c = entries.iter().filter(|e| e.algebra.n() == order).count();
        counts.push((order, c));
    }
    Ok(match format {
        Format::Text | Format::Csv => {
            let mut out = format!("catalog written to {}\n", dir.display());
            for (order, c) in counts {
                out.push_str(&format!("order {order}: {c} algebras\n"));
            }
            out
        }
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "dir": dir.display().to_string(),
                "counts": counts,
            }))
            .unwrap()
        ),
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let budget = Budget(cli.run.budget);
    let format = cli.run.format;
    match &cli.command {
        Command::Validate { path } => cmd_validate(path, format),
        Command::Classify { path } => cmd_classify(path, format),
        Command::States { dom, cod, class } => {
            cmd_states(dom, cod.as_ref(), class, format, budget)
        }
        Command::Quotient { path, filter } => cmd_quotient(path, filter, format),
        Command::Completion { path, state } => cmd_completion(path, state, format, budget),
        Command::Scan { problem, max_order } => {
            cmd_scan(problem, *max_order, format, budget, cli.run.seed)
        }
        Command::Catalog { max_order, dir } => {
            cmd_catalog(*max_order, dir.as_ref(), format, budget)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.run.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.run.jobs)
            .build_global()
        {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
