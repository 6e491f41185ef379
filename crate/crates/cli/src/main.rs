//! `bsc`: JSON front end for Bott–Samelson bimodule computations.
//!
//! Exit codes: 0 success, 1 a check failed, 2 malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use bsc_core::bimodule::{concat, element_from_tensor, localization_matrix, DEFAULT_LOCALIZATION_BOUND};
use bsc_core::diagram::{check_relation, Diagram, Generator, Slice};
use bsc_core::poly::{decompose, demazure};
use bsc_core::suites::{run_suite, Suite, SuiteOptions};
use bsc_core::vertex::{hom_space_report, solve_vertex, solve_vertex_with_cache_dir};
use bsc_core::{BSElement, CartanData, Error, Gallery, Morphism, Poly};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bsc", version, about = "Bott–Samelson bimodules, their morphisms and diagram relations")]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached vertex solutions.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Demazure operator ∂_s of a polynomial, or its decomposition.
    Demazure {
        #[arg(long)]
        cartan: String,
        /// Reflection index, 1-based.
        #[arg(long)]
        s: usize,
        #[arg(long)]
        poly: String,
        /// Print `{"invariant": P_s(f), "demazure": ∂_s(f)}` instead.
        #[arg(long)]
        decompose: bool,
    },
    /// Normalizes a pure tensor `a_1 ⊗ … ⊗ a_{n+1}` into the ε-basis.
    Normalize {
        #[arg(long)]
        cartan: String,
        /// Comma-separated 1-based indices, e.g. `1,2,1`.
        #[arg(long, default_value = "")]
        seq: String,
        /// JSON list of n+1 polynomial strings.
        #[arg(long)]
        tensor: String,
    },
    /// Localizes an element at one gallery or at all of them, or prints a localization matrix.
    Localize {
        #[arg(long)]
        cartan: String,
        /// Element JSON, inline or `@file`.
        #[arg(long, conflicts_with = "matrix")]
        element: Option<String>,
        /// Gallery as a bitstring such as `101`; all galleries if omitted.
        #[arg(long)]
        gallery: Option<String>,
        /// Print the localization matrix of this sequence.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Concatenation product of two elements.
    Concat {
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Matrix of one generator placed on a sequence.
    Gen {
        #[arg(long)]
        cartan: String,
        /// dot_top, dot_bot, split, merge, vertex or jw.
        #[arg(long)]
        r#gen: String,
        #[arg(long, default_value = "")]
        seq: String,
        /// 1-based strand, or the 0-based gap for dot_bot.
        #[arg(long)]
        strand: usize,
        /// Color label for dot_bot.
        #[arg(long)]
        color: Option<String>,
    },
    /// The vertex f_{s,t} and its hom-space report.
    Vertex {
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// The Jones–Wenzl projector f_{t,s} ∘ f_{s,t}.
    Jw {
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Evaluates a diagram file, or checks it against a second one.
    Eval {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Runs a built-in suite: onecolor, twocolor, localization or all.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        cartan: String,
    },
    /// Cartan data and braid orders.
    Cartan {
        #[arg(long)]
        cartan: String,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(value, ok)| {
        let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        match &cli.out {
            Some(path) => fs::write(path, text + "\n")
                .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?,
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            None => {
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("bsc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let cache = cli.cache.as_deref();
    let value = match &cli.command {
        Command::Demazure { cartan, s, poly, decompose: split } => {
            let c = parse_cartan(cartan)?;
            let s = index(&c, *s)?;
            let f = Poly::parse(poly, c.rank())?;
            if *split {
                let (p, d) = decompose(&c, s, &f)?;
                json!({ "invariant": p.to_string(), "demazure": d.to_string() })
            } else {
                json!(demazure(&c, s, &f)?.to_string())
            }
        }
        Command::Normalize { cartan, seq, tensor } => {
            let c = parse_cartan(cartan)?;
            let seq = parse_seq(&c, seq)?;
            let slots = match read_json(tensor)? {
                Value::Array(items) => items
                    .iter()
                    .map(|v| Poly::from_json(v, c.rank()))
                    .collect::<bsc_core::Result<Vec<_>>>()?,
                _ => return Err(input_error("--tensor must be a JSON list of polynomials")),
            };
            element_from_tensor(&c, &seq, &slots)?.to_json()
        }
        Command::Localize { cartan, element, gallery, matrix } => {
            let c = parse_cartan(cartan)?;
            match (element, matrix) {
                (_, Some(seq)) => {
                    let seq = parse_seq(&c, seq)?;
                    let m = localization_matrix(&c, &seq, max_seq()?)?;
                    json!({
                        "seq": seq.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "entries": m.entries.iter()
                            .map(|row| row.iter().map(|p| p.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "full_rank": m.full_rank,
                        "determinant": m.determinant.map(|d| d.to_string()),
                    })
                }
                (Some(element), None) => {
                    let m = BSElement::from_json(c.clone(), &read_json(element)?)?;
                    let galleries = match gallery {
                        Some(g) => vec![Gallery::parse(m.seq().to_vec(), g)?],
                        None => Gallery::all(m.seq()),
                    };
                    let mut out = serde_json::Map::new();
                    for g in galleries {
                        out.insert(g.to_string(), m.localize(&g)?.to_json());
                    }
                    Value::Object(out)
                }
                (None, None) => return Err(input_error("localize needs --element or --matrix")),
            }
        }
        Command::Concat { cartan, left, right } => {
            let c = parse_cartan(cartan)?;
            let a = BSElement::from_json(c.clone(), &read_json(left)?)?;
            let b = BSElement::from_json(c, &read_json(right)?)?;
            concat(&a, &b)?.to_json()
        }
        Command::Gen { cartan, r#gen, seq, strand, color } => {
            let c = parse_cartan(cartan)?;
            let seq = parse_seq(&c, seq)?;
            let g = Generator::parse(r#gen)?;
            let color = match color {
                Some(label) => Some(c.index_of(label)?),
                None if g == Generator::DotBot => return Err(input_error("dot_bot needs --color")),
                None => None,
            };
            let d = Diagram::new(c, seq, vec![Slice::new(g, *strand, color)])?;
            d.evaluate_with_cache(cache)?.to_json()
        }
        Command::Vertex { cartan, s, t } => {
            let c = parse_cartan(cartan)?;
            let (s, t) = (index(&c, *s)?, index(&c, *t)?);
            let f = vertex(&c, s, t, cache)?;
            json!({ "vertex": f.to_json(), "report": hom_space_report(&c, s, t)?.to_json() })
        }
        Command::Jw { cartan, s, t } => {
            let c = parse_cartan(cartan)?;
            let (s, t) = (index(&c, *s)?, index(&c, *t)?);
            bsc_core::morphism::compose(&vertex(&c, t, s, cache)?, &vertex(&c, s, t, cache)?)?.to_json()
        }
        Command::Eval { diagram, against } => {
            let lhs = read_diagram(diagram)?;
            match against {
                None => lhs.evaluate_with_cache(cache)?.to_json(),
                Some(path) => {
                    let report = check_relation(&lhs, &read_diagram(path)?)?;
                    return Ok((report.to_json(), report.equal));
                }
            }
        }
        Command::Check { suite, cartan } => {
            let c = parse_cartan(cartan)?;
            let opts = SuiteOptions { max_seq: max_seq()?, cache_dir: cli.cache.clone() };
            let report = run_suite(Suite::parse(suite)?, &c, &opts)?;
            return Ok((report.to_json(), report.passed()));
        }
        Command::Cartan { cartan } => {
            let c = parse_cartan(cartan)?;
            let r = c.rank();
            let mut pairs = Vec::new();
            for s in 0..r {
                for t in s + 1..r {
                    let m = c.m_order(s, t)?;
                    pairs.push(json!({ "s": c.label(s), "t": c.label(t), "m": m }));
                }
            }
            json!({ "labels": c.labels(), "matrix": c.matrix(), "rank": r, "braid_orders": pairs })
        }
    };
    Ok((value, true))
}

fn parse_cartan(text: &str) -> Result<Arc<CartanData>, Failure> {
    let trimmed = text.trim();
    let c = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: Value = serde_json::from_str(trimmed).map_err(|e| input_error(format!("--cartan: {e}")))?;
        CartanData::from_json(&value)?
    } else {
        CartanData::from_type(trimmed)?
    };
    Ok(Arc::new(c))
}

/// Converts a 1-based reflection index.
fn index(c: &CartanData, i: usize) -> Result<usize, Failure> {
    let i0 = i.checked_sub(1).ok_or_else(|| input_error("reflection indices are 1-based"))?;
    c.check_index(i0)?;
    Ok(i0)
}

/// Comma-separated 1-based indices or labels.
fn parse_seq(c: &CartanData, text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok(c.index_of(s)?))
        .collect()
}

/// Inline JSON, or `@path` to read it from a file.
fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| input_error(format!("invalid JSON: {e}")))
}

fn read_diagram(path: &Path) -> Result<Diagram, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: invalid JSON: {e}", path.display())))?;
    Ok(Diagram::from_json(&value)?)
}

fn vertex(c: &Arc<CartanData>, s: usize, t: usize, cache: Option<&Path>) -> Result<Morphism, Failure> {
    Ok(match cache {
        Some(dir) => solve_vertex_with_cache_dir(c, s, t, dir)?,
        None => solve_vertex(c, s, t)?,
    })
}

fn max_seq() -> Result<usize, Failure> {
    match std::env::var("BSC_MAX_SEQ") {
        Ok(v) => v.trim().parse().map_err(|_| input_error(format!("BSC_MAX_SEQ must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_LOCALIZATION_BOUND),
    }
}
