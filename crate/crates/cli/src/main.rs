//! `calbch`: coefficient tables, BCH series and verification suites for
//! commutative automorphic loops, over exact rationals.
//!
//! Exit codes: 0 success, 1 a verification found a counterexample, 2 usage
//! error, 3 internal invariant violation. Data goes to stdout, diagnostics to
//! stderr; `CALBCH_LOG={error,info,debug}` controls verbosity.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use calbch_core::calts::{
    amodel, check_ca_axioms, derived_series, free2_dim, Free2, LtsStructure,
};
use calbch_core::engines::{
    alpha_recursion, bch_dot_direct, bch_symbolic, beta_from_alpha, beta_genfun, cross_validate,
    free2_context, matrix_model, verify_bracket_collapse, BchProduct, CoeffTable, CrossConfig,
    EngineId, TableKind,
};
use calbch_core::verify::{verify_identity, Identity};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Hard degree caps per engine; beyond them the run is rejected as a usage
/// error before any computation starts.
const MAX_SERIES_DEGREE: u32 = 64;
const MAX_HOPF_DEGREE: u32 = 13;
const MAX_DOT_DIRECT_DEGREE: u32 = 7;
const MAX_VERIFY_DEGREE: u32 = 8;

#[derive(Parser)]
#[command(name = "calbch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the commutative automorphic BCH coefficient table.
    Beta(TableArgs),
    /// Compute the left Bruck BCH coefficient table.
    Alpha(TableArgs),
    /// Print the BCH series over the free triple-system basis.
    Bch(BchArgs),
    /// Run a verification suite; exits 1 on any counterexample.
    Verify(VerifyArgs),
    /// Run every engine and compare the tables cell by cell.
    CrossValidate(CrossArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Genfun,
    Recursion,
    Hopf,
    Matrix,
    DotDirect,
}

impl EngineArg {
    fn id(self) -> EngineId {
        match self {
            EngineArg::Genfun => EngineId::Genfun,
            EngineArg::Recursion => EngineId::Recursion,
            EngineArg::Hopf => EngineId::Hopf,
            EngineArg::Matrix => EngineId::Matrix,
            EngineArg::DotDirect => EngineId::DotDirect,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Latex,
}

#[derive(Args)]
struct TableArgs {
    /// Largest total degree p+q of the table.
    #[arg(long, default_value_t = 14)]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "genfun")]
    engine: EngineArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductArg {
    Bruck,
    Dot,
}

#[derive(Args)]
struct BchArgs {
    #[arg(long, default_value_t = 7)]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "dot")]
    product: ProductArg,
    /// `text` (one term per line) or `json`.
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lts,
    Hopf,
    Bch,
    Oracle,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Override the default per-check degree.
    #[arg(long)]
    degree: Option<u32>,
    /// Restrict the hopf suite to one identity.
    #[arg(long)]
    identity: Option<String>,
    /// Extra structure-constant table (JSON) for the lts suite.
    #[arg(long)]
    input: Option<String>,
    /// Emit the reports as JSON instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CrossArgs {
    /// Degree for the genfun, recursion and matrix engines.
    #[arg(long, default_value_t = 14)]
    series_degree: u32,
    /// Degree for the Hopf engines.
    #[arg(long, default_value_t = 11)]
    hopf_degree: u32,
    /// Degree for the direct dot-product engine.
    #[arg(long, default_value_t = 7)]
    dot_direct_degree: u32,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CALBCH_LOG"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(_) => {
            eprintln!("calbch: internal invariant violation (see panic message above)");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Beta(args) => table_command(TableKind::Beta, args),
        Command::Alpha(args) => table_command(TableKind::Alpha, args),
        Command::Bch(args) => bch_command(args),
        Command::Verify(args) => verify_command(args),
        Command::CrossValidate(args) => cross_command(args),
    }
}

fn usage_error(message: &str) -> u8 {
    eprintln!("calbch: {message}");
    EXIT_USAGE
}

fn engine_degree_cap(engine: EngineId) -> u32 {
    match engine {
        EngineId::Genfun | EngineId::Recursion | EngineId::Matrix => MAX_SERIES_DEGREE,
        EngineId::Hopf => MAX_HOPF_DEGREE,
        EngineId::DotDirect => MAX_DOT_DIRECT_DEGREE,
    }
}

fn table_command(kind: TableKind, args: TableArgs) -> u8 {
    let engine = args.engine.id();
    let cap = engine_degree_cap(engine);
    if args.max_degree < 2 || args.max_degree > cap {
        return usage_error(&format!(
            "engine {engine} supports 2 <= max-degree <= {cap}, got {}",
            args.max_degree
        ));
    }
    let n = args.max_degree;
    let table = match (kind, engine) {
        (TableKind::Beta, EngineId::Genfun) => beta_genfun(n),
        (TableKind::Beta, EngineId::Recursion) => beta_from_alpha(&alpha_recursion(n)),
        (TableKind::Beta, EngineId::Hopf) => bch_symbolic(n, BchProduct::Dot).table,
        (TableKind::Beta, EngineId::Matrix) => matrix_model(n).beta,
        (TableKind::Beta, EngineId::DotDirect) => bch_dot_direct(n),
        (TableKind::Alpha, EngineId::Recursion) => alpha_recursion(n),
        (TableKind::Alpha, EngineId::Hopf) => bch_symbolic(n, BchProduct::Bruck).table,
        (TableKind::Alpha, EngineId::Matrix) => matrix_model(n).alpha,
        (TableKind::Alpha, EngineId::Genfun | EngineId::DotDirect) => {
            return usage_error(&format!(
                "engine {engine} only produces the beta table"
            ));
        }
    };
    let bytes = render_table(&table, args.format);
    write_output(args.output.as_deref(), &bytes)
}

fn render_table(table: &CoeffTable, format: FormatArg) -> String {
    match format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => format!("{}\n", table.to_json()),
        FormatArg::Latex => table.to_latex(),
    }
}

fn write_output(path: Option<&str>, bytes: &str) -> u8 {
    match path {
        None => {
            print!("{bytes}");
            std::io::stdout().flush().ok();
            0
        }
        Some(path) => match fs::write(path, bytes) {
            Ok(()) => 0,
            Err(err) => usage_error(&format!("cannot write {path}: {err}")),
        },
    }
}

fn bch_command(args: BchArgs) -> u8 {
    if args.max_degree < 1 || args.max_degree > MAX_HOPF_DEGREE {
        return usage_error(&format!(
            "bch supports 1 <= max-degree <= {MAX_HOPF_DEGREE}, got {}",
            args.max_degree
        ));
    }
    let product = match args.product {
        ProductArg::Bruck => BchProduct::Bruck,
        ProductArg::Dot => BchProduct::Dot,
    };
    let outcome = bch_symbolic(args.max_degree, product);
    let rendered = match args.format.as_str() {
        "text" => {
            let mut out = String::new();
            for (key, value) in outcome.series.iter() {
                out.push_str(&format!("{key:?} {value}\n"));
            }
            out
        }
        "json" => {
            let terms: Vec<serde_json::Value> = outcome
                .series
                .iter()
                .map(|(key, value)| {
                    serde_json::json!({"key": format!("{key:?}"), "value": value.to_string()})
                })
                .collect();
            format!(
                "{}\n",
                serde_json::json!({
                    "product": match product {
                        BchProduct::Bruck => "bruck",
                        BchProduct::Dot => "dot",
                    },
                    "max_degree": args.max_degree,
                    "terms": terms,
                })
            )
        }
        other => return usage_error(&format!("unknown format {other:?}")),
    };
    write_output(args.output.as_deref(), &rendered)
}

/// One check outcome inside a suite run.
struct CheckLine {
    name: String,
    checked: usize,
    failures: Vec<String>,
}

fn emit_suite(json: bool, suite: &str, lines: Vec<CheckLine>) -> u8 {
    let mut failed = false;
    if json {
        let checks: Vec<serde_json::Value> = lines
            .iter()
            .map(|line| {
                serde_json::json!({
                    "name": line.name,
                    "checked": line.checked,
                    "failures": line.failures,
                })
            })
            .collect();
        failed = lines.iter().any(|l| !l.failures.is_empty());
        println!(
            "{}",
            serde_json::json!({"suite": suite, "checks": checks, "passed": !failed})
        );
    } else {
        for line in &lines {
            if line.failures.is_empty() {
                println!("ok   {} ({} checked)", line.name, line.checked);
            } else {
                failed = true;
                println!(
                    "FAIL {} ({} checked, {} failures)",
                    line.name,
                    line.checked,
                    line.failures.len()
                );
                for f in line.failures.iter().take(5) {
                    println!("     {f}");
                }
            }
        }
    }
    if failed {
        EXIT_MISMATCH
    } else {
        0
    }
}

fn verify_command(args: VerifyArgs) -> u8 {
    if let Some(degree) = args.degree {
        let cap = match args.suite {
            SuiteArg::Hopf | SuiteArg::Bch => MAX_VERIFY_DEGREE,
            SuiteArg::Lts | SuiteArg::Oracle => 12,
        };
        if degree == 0 || degree > cap {
            return usage_error(&format!("suite degree must be within 1..={cap}"));
        }
    }
    match args.suite {
        SuiteArg::Lts => lts_suite(&args),
        SuiteArg::Hopf => hopf_suite(&args),
        SuiteArg::Bch => bch_suite(&args),
        SuiteArg::Oracle => oracle_suite(&args),
    }
}

fn report_to_line(name: String, report: calbch_core::calts::AxiomReport) -> CheckLine {
    CheckLine {
        name,
        checked: report.checked,
        failures: report
            .violations
            .into_iter()
            .map(|v| format!("{} fails at {} ({})", v.kind, v.witness, v.discrepancy))
            .collect(),
    }
}

fn lts_suite(args: &VerifyArgs) -> u8 {
    let degree = args.degree.unwrap_or(9);
    let mut lines = Vec::new();

    let matrix = LtsStructure::matrix_example();
    lines.push(report_to_line(
        "ca-axioms matrix-example".into(),
        check_ca_axioms(&matrix, degree),
    ));
    let series = derived_series(&matrix, degree);
    lines.push(CheckLine {
        name: format!("derived-series matrix-example dims {:?}", series.dims),
        checked: 1,
        failures: if series.solvable {
            vec![]
        } else {
            vec!["matrix example should be solvable".into()]
        },
    });

    let free2 = Free2::new(degree);
    lines.push(report_to_line(
        format!("ca-axioms free2 (degree {degree})"),
        check_ca_axioms(&free2, degree),
    ));

    if let Some(path) = &args.input {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => return usage_error(&format!("cannot read {path}: {err}")),
        };
        match LtsStructure::from_json(&text) {
            Ok(sys) => {
                lines.push(report_to_line(
                    format!("ca-axioms {path}"),
                    check_ca_axioms(&sys, degree),
                ));
                let series = derived_series(&sys, degree);
                lines.push(CheckLine {
                    name: format!("derived-series {path} dims {:?}", series.dims),
                    checked: 1,
                    failures: vec![],
                });
            }
            Err(err) => return usage_error(&format!("cannot parse {path}: {err}")),
        }
    }
    emit_suite(args.json, "lts", lines)
}

fn hopf_suite(args: &VerifyArgs) -> u8 {
    let identities: Vec<Identity> = match &args.identity {
        None => Identity::CATALOGUE.to_vec(),
        Some(name) => match Identity::from_name(name) {
            Some(id) => vec![id],
            None => return usage_error(&format!("unknown identity {name:?}")),
        },
    };
    let max_degree = identities
        .iter()
        .map(|id| args.degree.unwrap_or_else(|| id.default_degree()))
        .max()
        .unwrap_or(5);
    let (ctx, _) = free2_context(max_degree);
    let mut lines = Vec::new();
    for id in identities {
        let degree = args.degree.unwrap_or_else(|| id.default_degree());
        let report = verify_identity(&ctx, id, degree);
        lines.push(CheckLine {
            name: format!("{} (degree {})", report.identity, report.degree),
            checked: report.checked,
            failures: report
                .failures
                .iter()
                .map(|f| format!("{}: {} != {}", f.witness, f.lhs, f.rhs))
                .collect(),
        });
    }
    emit_suite(args.json, "hopf", lines)
}

fn bch_suite(args: &VerifyArgs) -> u8 {
    let degree = args.degree.unwrap_or(7).min(MAX_DOT_DIRECT_DEGREE);
    let mut lines = Vec::new();

    // the direct engine against the twist-shortcut engine, cell by cell
    let direct = bch_dot_direct(degree);
    let shortcut = bch_symbolic(degree, BchProduct::Dot).table;
    let mut failures = Vec::new();
    let mut cells = 0;
    for p in 1..degree {
        for q in 1..=(degree - p) {
            cells += 1;
            if direct.get(p, q) != shortcut.get(p, q) {
                failures.push(format!(
                    "({p},{q}): direct {} vs shortcut {}",
                    direct.get(p, q),
                    shortcut.get(p, q)
                ));
            }
        }
    }
    lines.push(CheckLine {
        name: format!("dot-direct equals hopf-dot (degree {degree})"),
        checked: cells,
        failures,
    });

    // parity and antisymmetry of the generating-function table
    let table_degree = (2 * degree).min(14);
    let beta = beta_genfun(table_degree);
    let mut failures = Vec::new();
    let mut cells = 0;
    for p in 1..table_degree {
        for q in 1..=(table_degree - p) {
            cells += 1;
            let v = beta.get(p, q);
            if (p + q) % 2 == 0 && !v.is_zero() {
                failures.push(format!("({p},{q}) should vanish, got {v}"));
            }
            if q + p <= table_degree && beta.get(q, p) != -v.clone() {
                failures.push(format!("antisymmetry fails at ({p},{q})"));
            }
        }
    }
    lines.push(CheckLine {
        name: format!("beta parity and antisymmetry (degree {table_degree})"),
        checked: cells,
        failures,
    });

    // bracket-collapse lemma feeding the matrix engine
    let collapse_degree = (2 * degree + 1).min(13);
    lines.push(CheckLine {
        name: format!("matrix bracket collapse to -4u (length <= {collapse_degree})"),
        checked: 1,
        failures: verify_bracket_collapse(collapse_degree),
    });

    emit_suite(args.json, "bch", lines)
}

fn oracle_suite(args: &VerifyArgs) -> u8 {
    let degree = args.degree.unwrap_or(9);
    let mut lines = Vec::new();

    let pairs = amodel::critical_pairs();
    lines.push(CheckLine {
        name: "rewriting confluence on overlaps".into(),
        checked: pairs.len(),
        failures: pairs
            .iter()
            .filter(|p| !p.joinable())
            .map(|p| {
                format!(
                    "{} -> {} vs {}",
                    p.superposition, p.left_normal_form, p.right_normal_form
                )
            })
            .collect(),
    });

    let mismatches = amodel::oracle_mismatches(degree);
    lines.push(CheckLine {
        name: format!("free2 structure constants vs rewriting oracle (degree {degree})"),
        checked: 1,
        failures: mismatches,
    });

    let mut failures = Vec::new();
    for n in 1..=degree {
        let brute = amodel::bruteforce_graded_dim(n);
        let formula = free2_dim(n);
        if brute != formula {
            failures.push(format!("degree {n}: brute force {brute} vs formula {formula}"));
        }
    }
    lines.push(CheckLine {
        name: format!("graded dimensions vs brute force (degrees 1..={degree})"),
        checked: degree as usize,
        failures,
    });

    emit_suite(args.json, "oracle", lines)
}

fn cross_command(args: CrossArgs) -> u8 {
    if args.series_degree > MAX_SERIES_DEGREE
        || args.hopf_degree > MAX_HOPF_DEGREE
        || args.dot_direct_degree > MAX_DOT_DIRECT_DEGREE
    {
        return usage_error(&format!(
            "degree caps: series {MAX_SERIES_DEGREE}, hopf {MAX_HOPF_DEGREE}, dot-direct {MAX_DOT_DIRECT_DEGREE}"
        ));
    }
    let report = cross_validate(CrossConfig {
        series_degree: args.series_degree,
        hopf_degree: args.hopf_degree,
        dot_direct_degree: args.dot_direct_degree,
    });
    if args.json {
        println!("{}", report.to_json());
    } else {
        for (left, right, degree, cells) in &report.comparisons {
            println!("compared {left} vs {right} up to degree {degree}: {cells} cells");
        }
        for d in &report.disagreements {
            println!(
                "DISAGREE ({},{}): {} = {} vs {} = {}",
                d.p, d.q, d.left_engine, d.left, d.right_engine, d.right
            );
        }
        println!(
            "{}",
            if report.passed() {
                "all engines agree"
            } else {
                "engines disagree"
            }
        );
    }
    if report.passed() {
        0
    } else {
        EXIT_MISMATCH
    }
}
