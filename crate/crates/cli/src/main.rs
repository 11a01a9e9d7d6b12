use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tridend::algebra::{coproduct, product, reduced_coproduct, TriAlgebra};
use tridend::brace_gv::{brace, primitive_kernel, primitive_rank};
use tridend::harness::{self, AlgebraName, Algebras, QMode, VerifyOptions};
use tridend::linear::{parse_element, Element};
use tridend::mperm_algebra::{lift_word, phi, std_m};
use tridend::pqsym_algebra::{alpha, iota};
use tridend::words::{park, parse_word, std_word, Surjection};
use tridend::ProductKind;

#[derive(Parser)]
#[command(name = "tridend", version, about = "Exact q-tridendriform bialgebra computations")]
struct Cli {
    /// st, pqsym, tree or mperm (default st; `verify` runs all unless given)
    #[arg(long, global = true)]
    algebra: Option<String>,

    /// `symbolic`, or an integer to substitute for q
    #[arg(long, global = true, default_value = "symbolic")]
    q: String,

    /// Upper bound on the degrees used by `verify` and `dims`
    #[arg(long, global = true)]
    max_degree: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate `x OP y` for OP in left, middle, right, star (or < . > *)
    Eval { x: String, op: String, y: String },
    /// Coproduct of an element
    Coproduct {
        x: String,
        /// Drop the `1 # x` and `x # 1` terms
        #[arg(long)]
        reduced: bool,
    },
    /// Brace operation M_{1n}(x; y1, ..., yn)
    Brace { x: String, ys: Vec<String> },
    /// Rank of e_tri and a basis of primitives in one degree
    Primitives {
        #[arg(long)]
        degree: usize,
    },
    /// Apply alpha, phi, iota, std, park, std-m or lift
    Morphism { name: String, args: Vec<String> },
    /// Run the verification suites
    Verify,
    /// Basis counts and primitive ranks
    Dims {
        /// Largest degree for primitive ranks
        #[arg(long, default_value_t = 4)]
        rank_degree: usize,
    },
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn parse_kind(op: &str) -> Result<ProductKind> {
    Ok(match op {
        "left" | "<" | "≺" => ProductKind::Left,
        "middle" | "." | "·" => ProductKind::Middle,
        "right" | ">" | "≻" => ProductKind::Right,
        "star" | "*" | "∗" => ProductKind::Star,
        _ => bail!("unknown product `{op}`"),
    })
}

fn parse_el<A: TriAlgebra>(alg: &A, s: &str) -> Result<Element<A::Basis>> {
    parse_element(s, |t| alg.parse_basis(t)).with_context(|| format!("cannot parse `{s}` in {}", alg.name()))
}

fn show<A: TriAlgebra>(e: &Element<A::Basis>, q: QMode) -> Element<A::Basis> {
    match q {
        QMode::Symbolic => e.clone(),
        QMode::Int(v) => e.specialize(v),
    }
}

fn eval<A: TriAlgebra>(alg: &A, q: QMode, x: &str, op: &str, y: &str) -> Result<Output> {
    let kind = parse_kind(op)?;
    let r = show::<A>(&product(alg, kind, &parse_el(alg, x)?, &parse_el(alg, y)?), q);
    Ok(Output::ok(r.to_string(), r.to_json()))
}

fn coproduct_cmd<A: TriAlgebra>(alg: &A, q: QMode, x: &str, reduced: bool) -> Result<Output> {
    let x = parse_el(alg, x)?;
    let mut t = if reduced { reduced_coproduct(alg, &x) } else { coproduct(alg, &x) };
    if let QMode::Int(v) = q {
        t = t.specialize(v);
    }
    Ok(Output::ok(t.to_string(), t.to_json()))
}

fn brace_cmd<A: TriAlgebra>(alg: &A, q: QMode, x: &str, ys: &[String]) -> Result<Output> {
    let x = parse_el(alg, x)?;
    let ys = ys.iter().map(|y| parse_el(alg, y)).collect::<Result<Vec<_>>>()?;
    let r = show::<A>(&brace(alg, &x, &ys), q);
    Ok(Output::ok(r.to_string(), r.to_json()))
}

fn primitives_cmd<A: TriAlgebra>(alg: &A, q: QMode, degree: usize) -> Result<Output> {
    let v = match q {
        QMode::Int(v) => v,
        QMode::Symbolic => bail!("primitives needs an integer --q"),
    };
    let rank = primitive_rank(alg, degree, v);
    let kernel = primitive_kernel(alg, degree, v);
    let mut text = format!("rank {rank}\nkernel dimension {}\n", kernel.len());
    for k in &kernel {
        text.push_str(&format!("{k}\n"));
    }
    let json = json!({
        "algebra": alg.name(), "degree": degree, "q": v, "rank": rank,
        "kernel": kernel.iter().map(Element::to_json).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text.trim_end().to_string(), json))
}

fn morphism_cmd(name: &str, args: &[String]) -> Result<Output> {
    let arg = |i: usize| args.get(i).map(String::as_str).ok_or_else(|| anyhow!("{name} needs {} argument(s)", i + 1));
    let surj = |s: &str| Surjection::parse(s).map_err(anyhow::Error::from);
    let (text, json) = match name {
        "alpha" => {
            let e = alpha(&surj(arg(0)?)?);
            (e.to_string(), e.to_json())
        }
        "iota" => {
            let e = iota(&surj(arg(0)?)?);
            (e.to_string(), e.to_json())
        }
        "phi" => {
            let w = phi(&surj(arg(0)?)?);
            (w.to_string(), json!(w.to_string()))
        }
        "std" => {
            let w = std_word(&parse_word(arg(0)?)?);
            (w.to_string(), json!(w.to_string()))
        }
        "park" => {
            let w = park(&parse_word(arg(0)?)?);
            (w.to_string(), json!(w.to_string()))
        }
        "std-m" | "std_m" => {
            let blocks = tridend::mperm_algebra::parse_blocks(arg(0)?)?;
            let w = std_m(&blocks)?;
            (w.to_string(), json!(w.to_string()))
        }
        "lift" => {
            let w = lift_word(&surj(arg(0)?)?, &parse_word(arg(1)?)?)?;
            (w.to_string(), json!(w.to_string()))
        }
        _ => bail!("unknown morphism `{name}` (alpha, phi, iota, std, park, std-m, lift)"),
    };
    Ok(Output::ok(text, json))
}

fn verify_cmd(algs: &Algebras, q: QMode, cap: Option<usize>, only: Option<AlgebraName>) -> Result<Output> {
    let algebras = only.map_or_else(|| AlgebraName::ALL.to_vec(), |a| vec![a]);
    let reports = harness::verify_all(algs, &VerifyOptions { algebras, q, cap });
    Ok(Output { text: harness::reports_text(&reports), json: harness::reports_json(&reports), ok: harness::all_as_expected(&reports) })
}

fn dims_cmd(algs: &Algebras, max_degree: usize, rank_degree: usize) -> Result<Output> {
    let d = harness::dims_report(algs, max_degree, rank_degree);
    Ok(Output::ok(d.to_string(), serde_json::to_value(&d)?))
}

macro_rules! on_algebra {
    ($algs:expr, $name:expr, |$a:ident| $body:expr) => {
        match $name {
            AlgebraName::St => {
                let $a = &$algs.st;
                $body
            }
            AlgebraName::Pqsym => {
                let $a = &$algs.pqsym;
                $body
            }
            AlgebraName::Tree => {
                let $a = &$algs.tree;
                $body
            }
            AlgebraName::Mperm => {
                let $a = &$algs.mperm;
                $body
            }
        }
    };
}

fn run(cli: &Cli) -> Result<Output> {
    let q: QMode = cli.q.parse()?;
    let chosen: Option<AlgebraName> = cli.algebra.as_deref().map(str::parse).transpose()?;
    let name = chosen.unwrap_or(AlgebraName::St);
    let algs = Algebras::new();
    match &cli.command {
        Command::Eval { x, op, y } => on_algebra!(algs, name, |a| eval(a, q, x, op, y)),
        Command::Coproduct { x, reduced } => on_algebra!(algs, name, |a| coproduct_cmd(a, q, x, *reduced)),
        Command::Brace { x, ys } => on_algebra!(algs, name, |a| brace_cmd(a, q, x, ys)),
        Command::Primitives { degree } => on_algebra!(algs, name, |a| primitives_cmd(a, q, *degree)),
        Command::Morphism { name, args } => morphism_cmd(name, args),
        Command::Verify => verify_cmd(&algs, q, cli.max_degree, chosen),
        Command::Dims { rank_degree } => dims_cmd(&algs, cli.max_degree.unwrap_or(5), *rank_degree),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text.trim_end().to_string(),
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
            };
            if let Err(e) = writeln!(std::io::stdout().lock(), "{body}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
