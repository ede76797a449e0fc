//! `t2q`: command-line front end for `quasigroup-t2`.
//!
//! Tables are read and written in the plain text format (order on the first
//! line, then one row per line). Reports are `key: value` lines. A command
//! that prints a table to stdout sends its report to stderr; with `--out`
//! the table goes to the file and the report to stdout.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 search exhausted
//! without a model, 4 search budget exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasigroup_t2::identity::{resolve_identity, t2, Identity, ParseError};
use quasigroup_t2::modular::{
    b_solutions, build_t_form, compare_with_listing, scan_polynomial, ModularError,
    PUBLISHED_LISTING,
};
use quasigroup_t2::search::{search, SearchError, SearchMode, SearchSpec, SearchStatus};
use quasigroup_t2::spectrum::{
    pbd_compose, spectrum_report, two_power_construct, Pbd, SpectrumError, SpectrumOptions,
};
use quasigroup_t2::{fixtures, CayleyTable, Parastrophe, TableError};

#[derive(Parser)]
#[command(
    name = "t2q",
    version,
    about = "Build, check and search for T2-quasigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a table against an identity.
    Verify {
        #[arg(long)]
        table: PathBuf,
        /// Catalog name (T2, C3, Stein1, ...) or an identity such as "x*x=x".
        #[arg(long, default_value = "T2")]
        identity: String,
    },
    /// Build a table from a construction.
    #[command(subcommand)]
    Construct(Construct),
    /// Evaluate and factor k^5 + k^4 + 1 over a range of k.
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        /// Add prime factorizations and compare with the published listing.
        #[arg(long)]
        factor: bool,
    },
    /// Search for quasigroups of a given order satisfying identities.
    Search(SearchArgs),
    /// Direct product of two tables.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose idempotent block models along a lambda = 1 design.
    Compose {
        #[arg(long)]
        pbd: PathBuf,
        /// Block model as SIZE=TABLEFILE; repeat for each block size.
        #[arg(long = "model", required = true, value_parser = parse_model_arg)]
        models: Vec<(usize, PathBuf)>,
        /// Identities the block models must satisfy (default T2).
        #[arg(long = "identity")]
        identities: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Existence status of T2-quasigroups for orders 1..=max.
    Spectrum {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        idempotent: bool,
        #[arg(long, default_value_t = quasigroup_t2::search::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Designs to compose along (idempotent reports only).
        #[arg(long = "pbd")]
        designs: Vec<PathBuf>,
    },
    /// Print a bundled reference table.
    Fixture {
        /// One of star3, circ5, star7, diamond8, bullet11, boxtimes4, boxdot7,
        /// boxplus9, boxminus11; omit to list them.
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// x*y = -k^3 x + k y + b over Z_modulus.
    Modular {
        #[arg(long)]
        modulus: u64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        b: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// An order-2^k table built from the order-4 and order-8 references.
    TwoPower {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    order: usize,
    /// Identities to impose (default T2); repeatable.
    #[arg(long = "identity")]
    identities: Vec<String>,
    #[arg(long)]
    idempotent: bool,
    /// Count every model instead of stopping at the first.
    #[arg(long, conflicts_with = "limit")]
    count: bool,
    /// Collect up to this many models.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = quasigroup_t2::search::DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Write the first witness here instead of printing all to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model_arg(s: &str) -> Result<(usize, PathBuf), String> {
    let (size, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected SIZE=TABLEFILE, got {s:?}"))?;
    let size = size
        .trim()
        .parse()
        .map_err(|_| format!("block size must be a positive integer, got {size:?}"))?;
    Ok((size, PathBuf::from(path)))
}

enum Failure {
    Usage(String),
    Domain { name: &'static str, message: String },
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}
domain_from!(
    TableError,
    ModularError,
    SearchError,
    SpectrumError,
    ParseError
);

/// What a successful command produced.
struct Output {
    tables: Vec<CayleyTable>,
    report: String,
    out: Option<PathBuf>,
    code: u8,
}

impl Output {
    fn report(report: String) -> Self {
        Output {
            tables: Vec::new(),
            report,
            out: None,
            code: 0,
        }
    }

    fn table(table: CayleyTable, report: String, out: Option<PathBuf>) -> Self {
        Output {
            tables: vec![table],
            report,
            out,
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(output) => match emit(output) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error[Io]: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain { name, message }) => {
            eprintln!("error[{name}]: {message}");
            ExitCode::from(1)
        }
    }
}

fn emit(output: Output) -> std::io::Result<u8> {
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    match (&output.out, output.tables.first()) {
        (Some(path), Some(first)) => {
            std::fs::write(path, first.to_text())?;
            stdout.write_all(output.report.as_bytes())?;
        }
        (_, None) => stdout.write_all(output.report.as_bytes())?,
        (None, Some(_)) => {
            for (i, t) in output.tables.iter().enumerate() {
                if i > 0 {
                    stdout.write_all(b"\n")?;
                }
                stdout.write_all(t.to_text().as_bytes())?;
            }
            eprint!("{}", output.report);
        }
    }
    stdout.flush()?;
    Ok(output.code)
}

fn check_path(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("no such file: {}", path.display())))
    }
}

fn read_table(path: &Path) -> Result<CayleyTable, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.parse::<CayleyTable>()?)
}

fn identities_or_t2(specs: &[String]) -> Result<Vec<Identity>, Failure> {
    if specs.is_empty() {
        return Ok(vec![t2()]);
    }
    specs
        .iter()
        .map(|s| resolve_identity(s).map_err(Failure::from))
        .collect()
}

fn identity_label(id: &Identity) -> String {
    id.name.clone().unwrap_or_else(|| id.canonical())
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Verify { table, identity } => {
            check_path(&table)?;
            let id = resolve_identity(&identity)?;
            let t = read_table(&table)?;
            let verdict = id.check(&t);
            let mut r = String::new();
            writeln!(r, "order: {}", t.order()).unwrap();
            writeln!(r, "identity: {}", identity_label(&id)).unwrap();
            writeln!(r, "canonical: {}", id.canonical()).unwrap();
            writeln!(r, "holds: {}", verdict.holds).unwrap();
            if let Some((x, y)) = verdict.counterexample {
                writeln!(r, "counterexample: x={x} y={y}").unwrap();
            }
            writeln!(r, "idempotent: {}", t.is_idempotent()).unwrap();
            writeln!(
                r,
                "t2_by_translations: {}",
                t.satisfies_t2_via_translations()
            )
            .unwrap();
            let left_div = t.parastrophe(Parastrophe::SWAP_23);
            writeln!(
                r,
                "orthogonal_to_left_division: {}",
                t.is_orthogonal_to(&left_div)?
            )
            .unwrap();
            Ok(Output::report(r))
        }
        Command::Construct(Construct::Modular { modulus, k, b, out }) => {
            let form = build_t_form(modulus, k, b)?;
            let table = form.materialize()?;
            let cond = form.check_conditions();
            let sols = b_solutions(modulus, k);
            let nonzero: Vec<String> = sols
                .iter()
                .filter(|&&b| b != 0)
                .map(u64::to_string)
                .collect();
            let all: Vec<String> = sols.iter().map(u64::to_string).collect();
            let mut r = String::new();
            writeln!(r, "modulus: {}", form.modulus()).unwrap();
            writeln!(r, "k: {}", form.c()).unwrap();
            writeln!(
                r,
                "form: x*y = {}x + {}y + {}",
                form.a(),
                form.c(),
                form.b()
            )
            .unwrap();
            writeln!(r, "phi_ok: {}", cond.phi_ok).unwrap();
            writeln!(r, "psi_ok: {}", cond.psi_ok).unwrap();
            writeln!(r, "b_ok: {}", cond.b_ok).unwrap();
            writeln!(r, "b_solutions: {}", all.join(" ")).unwrap();
            writeln!(
                r,
                "b_nonzero_solutions: {}",
                if nonzero.is_empty() {
                    "none".to_string()
                } else {
                    nonzero.join(" ")
                }
            )
            .unwrap();
            writeln!(r, "t2_holds: {}", t2().check(&table).holds).unwrap();
            writeln!(r, "idempotent: {}", table.is_idempotent()).unwrap();
            Ok(Output::table(table, r, out))
        }
        Command::Construct(Construct::TwoPower { k, out }) => {
            let table = two_power_construct(k)?;
            let (a, b) = quasigroup_t2::spectrum::two_power_decomposition(k)
                .expect("construction succeeded");
            let mut r = String::new();
            writeln!(r, "order: {}", table.order()).unwrap();
            writeln!(r, "decomposition: {k} = 2*{a} + 3*{b}").unwrap();
            Ok(Output::table(table, r, out))
        }
        Command::Scan { from, to, factor } => {
            if from > to {
                return Err(Failure::Usage(format!("--from {from} exceeds --to {to}")));
            }
            let scan = scan_polynomial(from, to)?;
            let mut r = String::new();
            if factor {
                writeln!(r, "k\tf(k)\tfactors").unwrap();
            } else {
                writeln!(r, "k\tf(k)").unwrap();
            }
            for row in &scan.rows {
                if factor {
                    let fs: Vec<String> = row.factors.iter().map(u64::to_string).collect();
                    writeln!(r, "{}\t{}\t{}", row.k, row.value, fs.join(" ")).unwrap();
                } else {
                    writeln!(r, "{}\t{}", row.k, row.value).unwrap();
                }
            }
            if factor {
                let ps: Vec<String> = scan.primes.iter().map(u64::to_string).collect();
                writeln!(r, "# primes: {}", ps.join(" ")).unwrap();
                let covered = PUBLISHED_LISTING
                    .domain
                    .iter()
                    .all(|k| (from..=to).contains(k));
                if !covered {
                    let (lo, hi) = listing_span();
                    writeln!(
                        r,
                        "# listing: not compared (scan does not cover {lo}..{hi})"
                    )
                    .unwrap();
                    return Ok(Output::report(r));
                }
                let d = compare_with_listing(&scan, &PUBLISHED_LISTING);
                for (k, printed, actual) in &d.value_mismatches {
                    writeln!(
                        r,
                        "# listing_value_mismatch: k={k} printed={printed} actual={actual}"
                    )
                    .unwrap();
                }
                for k in &d.duplicate_keys {
                    writeln!(r, "# listing_duplicate_key: {k}").unwrap();
                }
                for k in &d.missing_keys {
                    writeln!(r, "# listing_missing_key: {k}").unwrap();
                }
                for (p, fs) in &d.composite_entries {
                    let fs: Vec<String> = fs.iter().map(u64::to_string).collect();
                    writeln!(r, "# listing_composite_entry: {p} = {}", fs.join("*")).unwrap();
                }
                for p in &d.spurious_primes {
                    writeln!(r, "# listing_spurious_prime: {p}").unwrap();
                }
                for p in &d.unlisted_primes {
                    writeln!(r, "# listing_unlisted_prime: {p}").unwrap();
                }
            }
            Ok(Output::report(r))
        }
        Command::Search(args) => run_search(args),
        Command::Product { left, right, out } => {
            check_path(&left)?;
            check_path(&right)?;
            let (a, b) = (read_table(&left)?, read_table(&right)?);
            let table = a.direct_product(&b)?;
            let mut r = String::new();
            writeln!(r, "order: {}", table.order()).unwrap();
            writeln!(r, "t2_holds: {}", t2().check(&table).holds).unwrap();
            Ok(Output::table(table, r, out))
        }
        Command::Compose {
            pbd,
            models,
            identities,
            out,
        } => {
            check_path(&pbd)?;
            for (_, path) in &models {
                check_path(path)?;
            }
            let ids = identities_or_t2(&identities)?;
            let text = std::fs::read_to_string(&pbd)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", pbd.display())))?;
            let design: Pbd = text.parse()?;
            let mut block_models = BTreeMap::new();
            for (size, path) in &models {
                block_models.insert(*size, read_table(path)?);
            }
            let table = pbd_compose(&design, &block_models, &ids)?;
            let mut r = String::new();
            writeln!(r, "order: {}", table.order()).unwrap();
            writeln!(r, "idempotent: {}", table.is_idempotent()).unwrap();
            for id in &ids {
                writeln!(
                    r,
                    "holds[{}]: {}",
                    identity_label(id),
                    id.check(&table).holds
                )
                .unwrap();
            }
            Ok(Output::table(table, r, out))
        }
        Command::Spectrum {
            max,
            idempotent,
            budget,
            designs,
        } => {
            if max == 0 {
                return Err(Failure::Usage("--max must be positive".into()));
            }
            for path in &designs {
                check_path(path)?;
            }
            let mut opts = SpectrumOptions {
                idempotent,
                budget,
                designs: Vec::new(),
            };
            for path in &designs {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                opts.designs.push(text.parse()?);
            }
            let report = spectrum_report(max, &opts);
            let mut r = String::new();
            writeln!(r, "order\tstatus\tevidence\tnodes\tdetail").unwrap();
            for e in &report.entries {
                writeln!(
                    r,
                    "{}\t{}\t{}\t{}\t{}",
                    e.order,
                    e.status.as_str(),
                    e.evidence.map_or("-", |ev| ev.as_str()),
                    e.nodes,
                    e.detail
                )
                .unwrap();
            }
            Ok(Output::report(r))
        }
        Command::Fixture { name } => match name {
            None => {
                let mut r = String::new();
                for f in fixtures::ALL {
                    writeln!(r, "{}\t{}\t{}", f.name, f.table().order(), f.symbol).unwrap();
                }
                Ok(Output::report(r))
            }
            Some(name) => {
                let f = fixtures::by_name(&name)
                    .ok_or_else(|| Failure::Usage(format!("unknown fixture {name:?}")))?;
                Ok(Output::table(f.table(), String::new(), None))
            }
        },
    }
}

fn listing_span() -> (i64, i64) {
    let d = PUBLISHED_LISTING.domain;
    (
        d.iter().copied().min().unwrap_or(0),
        d.iter().copied().max().unwrap_or(0),
    )
}

fn run_search(args: SearchArgs) -> Result<Output, Failure> {
    let ids = identities_or_t2(&args.identities)?;
    let mode = match (args.count, args.limit) {
        (true, _) => SearchMode::Count,
        (false, Some(k)) => SearchMode::Enumerate(k),
        (false, None) => SearchMode::FindOne,
    };
    let spec = SearchSpec::new(args.order, ids)
        .idempotent(args.idempotent)
        .budget(args.budget)
        .mode(mode);
    let outcome = search(&spec)?;
    let mut r = String::new();
    writeln!(r, "status: {}", outcome.status.as_str()).unwrap();
    writeln!(r, "order: {}", args.order).unwrap();
    writeln!(r, "nodes: {}", outcome.nodes_explored).unwrap();
    if let Some(c) = outcome.count {
        writeln!(r, "count: {c}").unwrap();
    }
    writeln!(r, "witnesses: {}", outcome.witnesses.len()).unwrap();
    let code = match outcome.status {
        SearchStatus::Found => 0,
        SearchStatus::ExhaustedNone => 3,
        SearchStatus::BudgetExceeded => 4,
    };
    // count mode reports numbers, not tables
    let tables = if args.count {
        Vec::new()
    } else {
        outcome.witnesses
    };
    Ok(Output {
        tables,
        report: r,
        out: args.out,
        code,
    })
}
