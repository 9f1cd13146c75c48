//! `wld`: command-line front end for Wilson loop diagram computations.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wld_core::denominator::verify_radical;
use wld_core::enumerate::{enumerate_admissible, enumerate_weakly_admissible};
use wld_core::le::le_from_necklace;
use wld_core::matroid::bases;
use wld_core::necklace::grassmann_necklace;
use wld_core::selftest::{self, SelftestOptions};
use wld_core::sympoly::c_matrix;
use wld_core::{Diagram, Propagator};

#[derive(Parser, Debug)]
#[command(
    name = "wld",
    version,
    about = "Wilson loop diagrams, positroids and their denominators"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Input {
    /// Diagram file, inline JSON such as '{"n":7,"propagators":[[1,4]]}', or `-` for stdin.
    input: String,
}

#[derive(Args, Debug)]
struct Ordered {
    #[command(flatten)]
    input: Input,
    /// Row order of C(W) as a JSON list of propagators, e.g. '[[5,8],[1,4]]'.
    /// Defaults to the order in the input.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report admissibility; exits 1 if the diagram is not admissible.
    Check(Input),
    /// Grassmann necklace with per-propagator assignments.
    Necklace(Input),
    /// Le diagram of the positroid cell.
    Le(Input),
    /// Dimension of the positroid cell (plus count of the Le diagram).
    Dim(Input),
    /// All bases of the transversal matroid.
    Bases(Input),
    /// The symbolic matrix C(W).
    Cmatrix(Ordered),
    /// The denominator R(W) and the radical checks.
    Denom {
        #[command(flatten)]
        ordered: Ordered,
        /// Print only the integrand, numerator differentials over R(W).
        #[arg(long)]
        omega: bool,
    },
    /// List every admissible diagram with k propagators on n vertices.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Weakly admissible diagrams instead.
        #[arg(long)]
        weak: bool,
    },
    /// Run the invariant suite over enumerated diagrams; exits 1 on any failure.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Random admissible diagrams with 9 <= n <= 12 added to the sweeps.
        #[arg(long, default_value_t = 500)]
        random: usize,
        #[arg(long, default_value_t = 2021)]
        seed: u64,
    },
}

/// Failures mapped to exit codes: usage and malformed input give 2,
/// everything the library rejects gives 1.
enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

impl From<wld_core::Error> for Failure {
    fn from(e: wld_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

struct Output {
    body: String,
    ok: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, ok: true }
    }
}

fn read_input(input: &Input) -> Result<Diagram, Failure> {
    let text = if input.input == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")
            .map_err(Failure::Usage)?;
        buf
    } else if input.input.trim_start().starts_with('{') {
        input.input.clone()
    } else {
        let path = PathBuf::from(&input.input);
        std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::Usage)?
    };
    serde_json::from_str(&text)
        .context("malformed diagram JSON")
        .map_err(Failure::Usage)
}

fn read_order(w: &Diagram, order: &Option<String>) -> Result<Vec<Propagator>, Failure> {
    match order {
        None => Ok(w.propagators().to_vec()),
        Some(text) => serde_json::from_str(text)
            .context("malformed --order JSON")
            .map_err(Failure::Usage),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn braces(set: impl IntoIterator<Item = usize>) -> String {
    let items: Vec<String> = set.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Check(input) => {
            let w = read_input(input)?;
            let report = w.admissibility();
            let body = if json {
                to_json(&report)
            } else if report.ok {
                format!("{w}: admissible")
            } else {
                let reason = w
                    .require_admissible()
                    .err()
                    .map(|e| e.to_string())
                    .unwrap_or_default();
                format!("{w}: {reason}")
            };
            Ok(Output {
                body,
                ok: report.ok,
            })
        }
        Command::Necklace(input) => {
            let w = read_input(input)?;
            let neck = grassmann_necklace(&w)?;
            if json {
                return Ok(Output::ok(to_json(&neck.to_json())));
            }
            let mut body = String::new();
            for i in 1..=w.n() {
                let parts: Vec<String> = neck
                    .contributions(i)
                    .unwrap_or_default()
                    .iter()
                    .map(|(p, v)| format!("{p}->{v}"))
                    .collect();
                writeln!(
                    body,
                    "I_{i} = {}  {}",
                    braces(neck.term_cyclic(i)),
                    parts.join(" ")
                )
                .unwrap();
            }
            Ok(Output::ok(body.trim_end().to_string()))
        }
        Command::Le(input) => {
            let w = read_input(input)?;
            let le = le_from_necklace(&grassmann_necklace(&w)?)?;
            let body = if json {
                to_json(&le.to_json())
            } else {
                le.render_ascii().trim_end().to_string()
            };
            Ok(Output::ok(body))
        }
        Command::Dim(input) => {
            let w = read_input(input)?;
            let dim = wld_core::le::dimension(&w)?;
            let body = if json {
                to_json(&json!({ "k": w.k(), "n": w.n(), "dimension": dim }))
            } else {
                dim.to_string()
            };
            Ok(Output::ok(body))
        }
        Command::Bases(input) => {
            let w = read_input(input)?;
            w.require_weakly_admissible()?;
            let all = bases(&w);
            let body = if json {
                to_json(&json!({ "k": w.k(), "n": w.n(), "count": all.len(), "bases": all }))
            } else {
                all.into_iter().map(braces).collect::<Vec<_>>().join("\n")
            };
            Ok(Output::ok(body))
        }
        Command::Cmatrix(ordered) => {
            let w = read_input(&ordered.input)?;
            let m = c_matrix(&w, &read_order(&w, &ordered.order)?)?;
            let body = if json {
                to_json(&m.to_json())
            } else {
                m.to_string().trim_end().to_string()
            };
            Ok(Output::ok(body))
        }
        Command::Denom { ordered, omega } => {
            let w = read_input(&ordered.input)?;
            let rep = verify_radical(&w, &read_order(&w, &ordered.order)?)?;
            let ok = rep.checks.radical_ok;
            if *omega {
                return Ok(Output {
                    body: rep.omega_string(),
                    ok,
                });
            }
            if json {
                return Ok(Output {
                    body: to_json(&rep.to_json()),
                    ok,
                });
            }
            let mut body = String::new();
            writeln!(body, "R = {}", rep.r_necklace).unwrap();
            writeln!(body, "R(W) = {}", rep.denominator_string()).unwrap();
            for ef in rep.edges.iter().filter(|ef| !ef.factors.is_empty()) {
                writeln!(body, "  R_{} = {}", ef.edge, ef.render()).unwrap();
            }
            for ix in &rep.indices {
                let s: Vec<String> = ix.s_set.iter().map(|p| p.to_string()).collect();
                writeln!(body, "  r_{} = {}  S = {{{}}}", ix.index, ix.r, s.join(",")).unwrap();
            }
            let c = rep.checks;
            write!(
                body,
                "checks: r_divides_delta={} products_equal={} square_free={} deltas_reduce={} degree={} radical_ok={}",
                c.r_divides_delta,
                c.products_equal,
                c.square_free,
                c.deltas_reduce,
                rep.r_definition.degree(),
                c.radical_ok
            )
            .unwrap();
            Ok(Output { body, ok })
        }
        Command::Enumerate { k, n, weak } => {
            if *n == 0 {
                return Err(Failure::Usage(anyhow!("--n must be at least 1")));
            }
            let all: Vec<Diagram> = if *weak {
                enumerate_weakly_admissible(*k, *n).collect()
            } else {
                enumerate_admissible(*k, *n).collect()
            };
            let body = if json {
                to_json(&all)
            } else {
                all.iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Output::ok(body))
        }
        Command::Selftest {
            max_n,
            random,
            seed,
        } => {
            let results = selftest::run(&SelftestOptions {
                max_n: *max_n,
                random: *random,
                seed: *seed,
            });
            let ok = results.iter().all(|r| r.passed());
            let body = if json {
                to_json(&results)
            } else {
                let mut lines: Vec<String> = results.iter().map(|r| r.to_string()).collect();
                let passed = results.iter().filter(|r| r.passed()).count();
                lines.push(format!("{passed}/{} cases passed", results.len()));
                lines.join("\n")
            };
            Ok(Output { body, ok })
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
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.body);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
