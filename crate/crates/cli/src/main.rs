use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use repzeta::io::{multiset_to_csv, multiset_to_json, zeta_to_json, zeta_to_latex};
use repzeta::oracle::{
    compare_with_formula, Comparison, OracleError, RingChoice, DEFAULT_MAX_ORDER,
};
use repzeta::{family_zeta, FamilyId, ZetaPoly};

#[derive(Parser)]
#[command(
    name = "repzeta",
    version,
    about = "Representation zeta polynomials of finite linear groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tower {
    P,
    T,
    Sd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Gl,
    P,
    T,
    Sd,
    G,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Zmod,
    Fpt,
    Both,
}

#[derive(Args)]
struct FamilyArgs {
    /// Group family.
    #[arg(long, value_enum)]
    family: Family,
    /// Matrix size.
    #[arg(long)]
    n: usize,
    /// Length of the local ring (family g only).
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Zeta polynomial of GL_n(F_q).
    Gl {
        #[arg(long)]
        n: usize,
    },
    /// Zeta polynomial of P_n, T_n or (F_q^n x F_q^n) : GL_n(F_q).
    Tower {
        #[arg(long, value_enum)]
        family: Tower,
        #[arg(long)]
        n: usize,
    },
    /// Zeta polynomial of Aut(o_l + o_1^n).
    Group {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
    },
    /// Degree multiset at a given q.
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        q: u64,
    },
    /// Compare the formula with brute-force degrees of the explicit group.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Kind::Both)]
        kind: Kind,
        /// Refuse groups larger than this.
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn family_id(args: &FamilyArgs) -> Result<FamilyId, Failure> {
    let tag = match args.family {
        Family::Gl => "gl",
        Family::P => "p",
        Family::T => "t",
        Family::Sd => "sd",
        Family::G => "g",
    };
    if args.ell.is_some() && !matches!(args.family, Family::G) {
        return Err(Failure::Usage("--ell only applies to family g".into()));
    }
    FamilyId::from_parts(tag, args.n, args.ell)
        .and_then(FamilyId::validate)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn zeta_of(f: FamilyId) -> Result<ZetaPoly, Failure> {
    family_zeta(f).map_err(|e| Failure::Usage(e.to_string()))
}

fn render_zeta(z: &ZetaPoly, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(pretty(&zeta_to_json(z))),
        Format::Latex => Ok(format!("{}\n", zeta_to_latex(z))),
        Format::Text => Ok(format!("{z}\n")),
        Format::Csv => Err(Failure::Usage(
            "csv output is only available for eval".into(),
        )),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn verify(
    f: FamilyId,
    primes: &[u32],
    kind: Kind,
    max_order: u64,
    format: Format,
) -> Result<(String, bool), Failure> {
    let choice = match kind {
        Kind::Zmod => RingChoice::IntegersMod,
        Kind::Fpt => RingChoice::TruncatedPoly,
        Kind::Both => RingChoice::Both,
    };
    let results: Vec<Result<Comparison, OracleError>> = std::thread::scope(|s| {
        let handles: Vec<_> = primes
            .iter()
            .map(|&p| s.spawn(move || compare_with_formula(f, p, choice, max_order)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification panicked"))
            .collect()
    });
    let mut comparisons = Vec::new();
    for r in results {
        comparisons.push(r?);
    }
    let all_match = comparisons.iter().all(Comparison::is_match);
    let out = match format {
        Format::Json => {
            let results: Vec<Value> = primes
                .iter()
                .zip(&comparisons)
                .map(|(p, c)| {
                    let mut v = c.to_json();
                    v["p"] = json!(p);
                    v
                })
                .collect();
            pretty(&json!({
                "family": f.tag(),
                "group": f.to_string(),
                "results": results,
                "match": all_match,
            }))
        }
        Format::Text => {
            let mut s = String::new();
            for c in &comparisons {
                for r in &c.reports {
                    s.push_str(&format!("{r}\n"));
                }
                if let Some(agree) = c.rings_agree {
                    s.push_str(&format!("rings agree: {agree}\n"));
                }
            }
            s
        }
        _ => {
            return Err(Failure::Usage(
                "verify supports json and text output".into(),
            ))
        }
    };
    Ok((out, all_match))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Gl { n } => render_zeta(
            &zeta_of(
                FamilyId::Gl { n: *n }
                    .validate()
                    .map_err(|e| Failure::Usage(e.to_string()))?,
            )?,
            cli.format,
        ),
        Command::Tower { family, n } => {
            let f = match family {
                Tower::P => FamilyId::P { n: *n },
                Tower::T => FamilyId::T { n: *n },
                Tower::Sd => FamilyId::Sd { n: *n },
            };
            render_zeta(&zeta_of(f)?, cli.format)
        }
        Command::Group { ell, n } => {
            render_zeta(&zeta_of(FamilyId::G { ell: *ell, n: *n })?, cli.format)
        }
        Command::Eval { family, q } => {
            let f = family_id(family)?;
            if *q < 2 {
                return Err(Failure::Usage("--q must be at least 2".into()));
            }
            let m = zeta_of(f)?
                .eval(&BigInt::from(*q))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            match cli.format {
                Format::Json => Ok(pretty(&multiset_to_json(&m))),
                Format::Csv => Ok(multiset_to_csv(&m)),
                Format::Text => Ok(m.iter().map(|(d, c)| format!("{d}: {c}\n")).collect()),
                Format::Latex => Err(Failure::Usage(
                    "latex output is not available for eval".into(),
                )),
            }
        }
        Command::Verify {
            family,
            p,
            kind,
            max_order,
        } => {
            let f = family_id(family)?;
            let (out, ok) = verify(f, p, *kind, *max_order, cli.format)?;
            if ok {
                Ok(out)
            } else {
                emit(cli, &out)?;
                Err(Failure::Mismatch(format!(
                    "{f}: formula and oracle disagree"
                )))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|text| emit(&cli, &text));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("repzeta: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("repzeta: {msg}");
            ExitCode::from(2)
        }
    }
}
