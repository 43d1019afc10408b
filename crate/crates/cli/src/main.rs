mod input;
mod lemmas;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use dp1_core::criteria::{rationality_report, ActionSetup, VerdictReport};
use dp1_core::curves::CurveTable;
use dp1_core::lattice::DEFAULT_CLOSURE_CAP;
use dp1_core::stars::{Census, StarTable};
use dp1_core::weyl::{carter_type_order3, element_order, roots, DEFAULT_ORDER_CAP};

use crate::lemmas::Lemma;

/// `println!` that ignores write errors, so piping into `head` does not panic.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "dp1",
    version,
    about = "Exceptional curves, W(E8) elements and star configurations on degree-1 del Pezzo surfaces"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group closure to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The 240 exceptional curves with their families and classes.
    ListCurves,
    /// The 240 roots with the indices used by `s i j ...` reflection words.
    ListRoots,
    /// All star configurations, preceded by their count.
    ListStars,
    /// Order, invariant rank and (for order 3) Carter type of an element.
    ClassifyElement {
        #[arg(short, long = "element")]
        element: String,
    },
    /// Invariant curves and stars of an element.
    Census {
        #[arg(short, long = "element")]
        element: String,
    },
    /// Re-runs a named check and exits with status 1 if it fails.
    VerifyLemma { lemma: Lemma },
    /// Rationality verdict for automorphism group G and Galois image Gamma (JSON).
    Report {
        #[arg(short = 'g', long = "group")]
        group: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<dp1_core::Error>() {
            Some(dp1_core::Error::InvariantViolation(_)) => Failure::Check(format!("{e:#}")),
            _ => Failure::Usage(e),
        }
    }
}

impl From<dp1_core::Error> for Failure {
    fn from(e: dp1_core::Error) -> Self {
        Failure::from(anyhow::Error::from(e))
    }
}

fn print_json<T: Serialize>(value: &T) {
    out!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn list_curves(json: bool) {
    let table = CurveTable::global();
    if json {
        let rows: Vec<_> = table
            .curves()
            .iter()
            .map(|c| json!({"id": c.id, "name": table.name(c.id), "family": c.family.to_string(), "class": c.class.coeffs()}))
            .collect();
        print_json(&rows);
        return;
    }
    for c in table.curves() {
        out!("{:>3} {:<6} {:<2} {}", c.id, table.name(c.id), c.family, c.class);
    }
}

fn list_roots(json: bool) {
    if json {
        let rows: Vec<_> =
            roots().iter().enumerate().map(|(i, r)| json!({"index": i, "class": r.class().coeffs()})).collect();
        print_json(&rows);
        return;
    }
    for (i, r) in roots().iter().enumerate() {
        out!("{i:>3} {}", r.class());
    }
}

fn list_stars(json: bool) {
    let table = CurveTable::global();
    let stars = StarTable::global().stars();
    if json {
        let texts: Vec<String> = stars.iter().map(|s| s.to_text(table)).collect();
        print_json(&json!({"count": stars.len(), "stars": texts}));
        return;
    }
    out!("{} stars", stars.len());
    for (i, s) in stars.iter().enumerate() {
        out!("{i:>4} {}", s.to_text(table));
    }
}

fn classify_element(arg: &str, json: bool) -> Result<(), Failure> {
    let m = input::element_arg(arg)?;
    let order = element_order(&m, DEFAULT_ORDER_CAP)?;
    let rank = m.fixed_rank();
    let carter = if order == 3 { Some(carter_type_order3(&m)?.to_string()) } else { None };
    if json {
        print_json(&json!({"order": order, "fixed_rank": rank, "carter_type": carter}));
    } else {
        match carter {
            Some(t) => out!("order {order}, rank {rank}, type {t}"),
            None => out!("order {order}, rank {rank}"),
        }
    }
    Ok(())
}

fn census(arg: &str, json: bool) -> Result<(), Failure> {
    let table = CurveTable::global();
    let m = input::element_arg(arg)?;
    let census = Census::of(&m)?;
    let faithful = census.faithful().len();
    let trivial = census.trivial().len();
    let curves: Vec<&str> = census.invariant_curves.iter().map(|&c| table.name(c)).collect();
    if json {
        let stars: Vec<_> = census
            .stars
            .iter()
            .map(|a| json!({"star": a.star.to_text(table), "action": format!("{:?}", a.kind)}))
            .collect();
        let relations: Vec<_> =
            census.relations.iter().map(|(i, j, r)| json!({"a": i, "b": j, "relation": r.to_string()})).collect();
        print_json(&json!({
            "invariant_curves": curves,
            "trivial_stars": trivial,
            "faithful_stars": faithful,
            "stars": stars,
            "relations": relations,
        }));
        return Ok(());
    }
    out!("invariant curves: {}; faithful stars: {faithful}", curves.len());
    out!("trivial stars: {trivial}");
    if !curves.is_empty() {
        out!("curves: {}", curves.join(", "));
    }
    for (i, a) in census.stars.iter().enumerate() {
        out!("star {i} {:?} {}", a.kind, a.star.to_text(table));
    }
    for (i, j, r) in &census.relations {
        out!("pair {i} {j} {r}");
    }
    Ok(())
}

fn verify_lemma(lemma: Lemma, cap: usize, json: bool) -> Result<(), Failure> {
    let outcome = lemmas::verify(lemma, cap)?;
    if json {
        print_json(&outcome);
    } else {
        out!("{}", outcome.text());
    }
    match outcome.counterexample {
        Some(c) if !outcome.ok => Err(Failure::Check(c)),
        _ => Ok(()),
    }
}

fn report(group: Option<&str>, gamma: Option<&str>, cap: usize) -> Result<(), Failure> {
    let setup = ActionSetup::new(input::group_arg(group)?, input::group_arg(gamma)?)?;
    let verdict = rationality_report(&setup, cap)?;
    print_json(&VerdictReport::from(&verdict));
    Ok(())
}

/// Accepts the single-dash spelling `-gamma` for `--gamma`.
fn normalize_args(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| if a == "-gamma" { "--gamma".to_string() } else { a }).collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_args(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::ListCurves => {
            list_curves(cli.json);
            Ok(())
        }
        Command::ListRoots => {
            list_roots(cli.json);
            Ok(())
        }
        Command::ListStars => {
            list_stars(cli.json);
            Ok(())
        }
        Command::ClassifyElement { element } => classify_element(element, cli.json),
        Command::Census { element } => census(element, cli.json),
        Command::VerifyLemma { lemma } => verify_lemma(*lemma, cli.cap, cli.json),
        Command::Report { group, gamma } => report(group.as_deref(), gamma.as_deref(), cli.cap),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
