use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chowkit::dr_class::{self, ClassFormat, WeightVector};
use chowkit::exact_arith::fmt_rational;
use chowkit::zero_section::{self, CoefficientTable, VerificationReport};
use chowkit::{Error, FormatMode, Polynomial, RingContext, VarSet};

const CACHE_ENV: &str = "CHOWKIT_CACHE_DIR";

#[derive(Parser)]
#[command(name = "chowkit", version, about = "Exact computations in tautological rings of abelian varieties")]
struct Cli {
    /// Emit machine-readable JSON
    #[arg(long, global = true)]
    json: bool,

    /// Suppress report output; only the exit status is meaningful
    #[arg(long, global = true, conflicts_with = "verbose")]
    quiet: bool,

    /// Include timings
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the zero-section identities
    Verify(VerifyArgs),
    /// Inspect the genus-g quotient ring
    Ring {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        #[command(subcommand)]
        action: RingAction,
    },
    /// Print the alpha/eta coefficient tables
    Coeffs {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Table::Both)]
        table: Table,
    },
    /// Expand the double ramification class
    Dr {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        /// Comma-separated integer weights, e.g. 2,-1,-1
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        weights: Vec<i64>,
        #[arg(long, value_enum, default_value_t = DrFormat::Text)]
        format: DrFormat,
        /// Drop terms with delta_irr or xi_i
        #[arg(long)]
        compact_type: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "range")]
struct GenusRange {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    genus: Option<u32>,
    /// Run genera 1..=N
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_genus: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    range: GenusRange,
    #[arg(long, value_enum, default_value_t = Which::All)]
    which: Which,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Main,
    Eta,
    Triangular,
    Invariance,
    Solver,
    All,
}

#[derive(Subcommand)]
enum RingAction {
    /// dim R^k for k = 0..2g-1
    Dims,
    /// Gram matrices of the socle pairing and their determinants
    Pairing,
    /// The defining relations, by d-grade
    Relations,
    /// Normal form of an expression in xi, T1, P, T2
    Reduce { expr: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Alpha,
    Eta,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DrFormat {
    Json,
    Latex,
    Text,
}

struct Output {
    json: bool,
    quiet: bool,
    verbose: bool,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { json: cli.json, quiet: cli.quiet, verbose: cli.verbose };
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(&out, &args),
        Command::Ring { genus, action } => cmd_ring(&out, genus as usize, &action),
        Command::Coeffs { genus, table } => cmd_coeffs(&out, genus as usize, table),
        Command::Dr { genus, weights, format, compact_type } => {
            cmd_dr(&out, genus as usize, weights, format, compact_type)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Output, text: &str) {
    if !out.quiet {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        let _ = writeln!(lock, "{text}");
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn open_context(g: usize) -> Result<RingContext, Failure> {
    let ctx = RingContext::new(g)?;
    if let Some(dir) = cache_dir() {
        ctx.load_cache_dir(&dir);
    }
    Ok(ctx)
}

fn close_context(ctx: &RingContext) {
    if let Some(dir) = cache_dir() {
        if let Err(e) = ctx.save_cache_dir(&dir) {
            eprintln!("warning: could not write cache to {}: {e}", dir.display());
        }
    }
}

fn checks(which: Which) -> &'static [Which] {
    match which {
        Which::All => &[Which::Main, Which::Eta, Which::Triangular, Which::Invariance, Which::Solver],
        Which::Main => &[Which::Main],
        Which::Eta => &[Which::Eta],
        Which::Triangular => &[Which::Triangular],
        Which::Invariance => &[Which::Invariance],
        Which::Solver => &[Which::Solver],
    }
}

fn run_genus(g: usize, which: Which) -> Result<Vec<VerificationReport>, Error> {
    let ctx = RingContext::new(g)?;
    if let Some(dir) = cache_dir() {
        ctx.load_cache_dir(&dir);
    }
    let mut reports = Vec::new();
    for check in checks(which) {
        reports.push(match check {
            Which::Main => zero_section::verify_main_in(&ctx)?,
            Which::Eta => zero_section::verify_eta_alpha(g)?,
            Which::Triangular => zero_section::verify_triangular_in(&ctx)?,
            Which::Invariance => zero_section::verify_invariance_in(&ctx)?,
            Which::Solver => zero_section::verify_solver_in(&ctx)?,
            Which::All => unreachable!(),
        });
    }
    close_context(&ctx);
    Ok(reports)
}

fn cmd_verify(out: &Output, args: &VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let genera: Vec<usize> = match (args.range.genus, args.range.max_genus) {
        (Some(g), _) => vec![g as usize],
        (None, Some(n)) => (1..=n as usize).collect(),
        (None, None) => unreachable!("clap enforces the group"),
    };
    let results: Vec<Result<Vec<VerificationReport>, Error>> = if genera.len() == 1 {
        vec![run_genus(genera[0], args.which)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = genera.iter().map(|&g| s.spawn(move || run_genus(g, args.which))).collect();
            handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
        })
    };
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let all_hold = reports.iter().all(|r| r.holds);

    if out.json {
        let mut v = json!({
            "holds": all_hold,
            "reports": reports.iter().map(|r| r.to_json(out.verbose)).collect::<Vec<_>>(),
        });
        if out.verbose {
            v["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
        }
        emit(out, &serde_json::to_string_pretty(&v).expect("json"));
    } else {
        let mut lines = Vec::new();
        for r in &reports {
            let status = if r.holds { "holds" } else { "FAILS" };
            let mut line = format!("genus {:<2} {:<11} {status}", r.genus, r.identity);
            if let Some(k) = r.kernel_dimension {
                line.push_str(&format!("  kernel_dimension={k}"));
            }
            if !r.holds {
                line.push_str(&format!("  residual={}", r.residual.format(FormatMode::Text)));
            }
            if out.verbose {
                line.push_str(&format!("  {:.1} ms", r.elapsed.as_secs_f64() * 1e3));
            }
            lines.push(line);
        }
        lines.push(format!("{} of {} checks hold", reports.iter().filter(|r| r.holds).count(), reports.len()));
        if out.verbose {
            lines.push(format!("total {:.1} ms", start.elapsed().as_secs_f64() * 1e3));
        }
        emit(out, &lines.join("\n"));
    }
    if all_hold {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_ring(out: &Output, g: usize, action: &RingAction) -> Result<(), Failure> {
    let ctx = open_context(g)?;
    let text = match action {
        RingAction::Dims => {
            let dims: Vec<usize> = (0..2 * g).map(|k| ctx.dim_graded(k, None)).collect();
            if out.json {
                json!({ "genus": g, "dims": dims }).to_string()
            } else {
                dims.iter().enumerate().map(|(k, d)| format!("dim R^{k} = {d}")).collect::<Vec<_>>().join("\n")
            }
        }
        RingAction::Pairing => {
            let mut entries = Vec::new();
            let mut lines = Vec::new();
            for k in 0..g {
                let p = ctx.pairing_matrix(k)?;
                let fmt_basis = |b: &[Polynomial]| b.iter().map(|m| m.format(FormatMode::Text)).collect::<Vec<_>>();
                let rows: Vec<Vec<String>> =
                    p.matrix.to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
                let det = fmt_rational(&p.determinant());
                lines.push(format!("k = {k}: R^{} x R^{}", g - 1 - k, g - 1 + k));
                lines.push(format!("  rows: {}", fmt_basis(&p.row_basis).join(", ")));
                lines.push(format!("  cols: {}", fmt_basis(&p.col_basis).join(", ")));
                for r in &rows {
                    lines.push(format!("  [{}]", r.join(", ")));
                }
                lines.push(format!("  det = {det}"));
                entries.push(json!({
                    "k": k,
                    "row_basis": fmt_basis(&p.row_basis),
                    "col_basis": fmt_basis(&p.col_basis),
                    "matrix": rows,
                    "determinant": det,
                }));
            }
            if out.json {
                json!({ "genus": g, "pairings": entries }).to_string()
            } else {
                lines.join("\n")
            }
        }
        RingAction::Relations => {
            let rels: Vec<(i64, String)> = (0..=2 * g as i64)
                .map(|j| {
                    let l = g as i64 - j;
                    (l, ctx.relation(l).expect("relation in range").format(FormatMode::Text))
                })
                .collect();
            if out.json {
                let list: Vec<Value> = rels.iter().map(|(l, r)| json!({ "d_grade": l, "relation": r })).collect();
                json!({ "genus": g, "relations": list }).to_string()
            } else {
                rels.iter().map(|(l, r)| format!("l = {l:>3}: {r}")).collect::<Vec<_>>().join("\n")
            }
        }
        RingAction::Reduce { expr } => {
            let p = Polynomial::parse(&VarSet::canonical(), expr).map_err(|e| parse_failure(expr, e))?;
            let nf = ctx.normal_form(&p)?.format(FormatMode::Text);
            if out.json {
                json!({ "genus": g, "input": expr, "normal_form": nf }).to_string()
            } else {
                nf
            }
        }
    };
    close_context(&ctx);
    emit(out, &text);
    Ok(())
}

fn parse_failure(expr: &str, e: Error) -> Failure {
    let pos = match &e {
        Error::Syntax { pos, .. } | Error::UnknownVariable { pos, .. } => *pos,
        _ => return e.into(),
    };
    let caret = " ".repeat(expr[..pos.min(expr.len())].chars().count());
    Failure::Usage(format!("{e}\n  {expr}\n  {caret}^"))
}

fn cmd_coeffs(out: &Output, g: usize, table: Table) -> Result<(), Failure> {
    let t = CoefficientTable::for_genus(g);
    let keys = chowkit::chow_ring::abc_triples(g);
    let show_alpha = table != Table::Eta;
    let show_eta = table != Table::Alpha;
    if out.json {
        let entries: Vec<Value> = keys
            .iter()
            .map(|&k| {
                let mut e = json!({ "a": k.0, "b": k.1, "c": k.2 });
                if show_alpha {
                    e["alpha"] = json!(fmt_rational(t.alpha(k).expect("entry")));
                }
                if show_eta {
                    e["eta"] = json!(fmt_rational(t.eta(k).expect("entry")));
                }
                e
            })
            .collect();
        emit(out, &json!({ "genus": g, "entries": entries }).to_string());
        return Ok(());
    }
    let mut rows = vec![{
        let mut h = vec!["(a,b,c)".to_string()];
        if show_alpha {
            h.push("alpha".into());
        }
        if show_eta {
            h.push("eta".into());
        }
        h
    }];
    for &k in &keys {
        let mut r = vec![format!("({},{},{})", k.0, k.1, k.2)];
        if show_alpha {
            r.push(fmt_rational(t.alpha(k).expect("entry")));
        }
        if show_eta {
            r.push(fmt_rational(t.eta(k).expect("entry")));
        }
        rows.push(r);
    }
    let widths: Vec<usize> = (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
    let text: Vec<String> = rows
        .iter()
        .map(|r| {
            r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
        })
        .collect();
    emit(out, &text.join("\n"));
    Ok(())
}

fn cmd_dr(out: &Output, g: usize, weights: Vec<i64>, format: DrFormat, compact: bool) -> Result<(), Failure> {
    let d = WeightVector::new(weights)?;
    let mut class = dr_class::dr_class(g, &d)?;
    if compact {
        class = class.specialize_compact_type();
    }
    let mode = match (out.json, format) {
        (true, _) | (_, DrFormat::Json) => ClassFormat::Json,
        (_, DrFormat::Latex) => ClassFormat::Latex,
        (_, DrFormat::Text) => ClassFormat::Text,
    };
    emit(out, &class.serialize(mode));
    Ok(())
}
