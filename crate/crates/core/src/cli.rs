//! Command-line front end. `run` is the whole program minus process exit,
//! so it can be driven from tests.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::derham::{self, Format};
use crate::error::{Error, Result};
use crate::findim::{verify_wedge, wedge_decomposition, Decomposition};
use crate::guards::{Guards, MAX_RANK};
use crate::half::Half;
use crate::reference;
use crate::report::SuiteReport;
use crate::spinor_decomp::{
    self, column_height, e_label, e_table, forms_spinor_decomposition, tensor_with_defining, tensor_with_spinor, XiIndex,
};
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "spinor-forms", version, about = "Decompositions of spinor-valued forms over sp(2l, C)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    /// Read weights as ε-coordinates instead of fundamental coordinates.
    #[arg(long, global = true)]
    pub epsilon: bool,

    /// Truncation depth for character checks (default 12 for rank ≤ 3, else 8).
    #[arg(long, global = true)]
    pub depth: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose the i-th exterior power of the defining representation.
    Wedge { rank: usize, i: usize },
    /// Decompose F(ν) ⊗ 𝕊₊ for a dominant integral weight ν.
    TensorSpinor {
        rank: usize,
        #[arg(allow_hyphen_values = true)]
        weight: String,
    },
    /// Decompose L(λ) ⊗ 𝕍 for λ in the set A.
    TensorDefining {
        rank: usize,
        #[arg(allow_hyphen_values = true)]
        weight: String,
    },
    /// Decompose the spinor-valued i-forms.
    Forms { rank: usize, i: usize },
    /// Print every label E_{i,j}.
    Ejtable { rank: usize },
    /// Print the operator diagram.
    Diagram { rank: usize },
    /// Run every verification suite.
    Verify { rank: usize },
}

impl Command {
    fn rank(&self) -> usize {
        match self {
            Command::Wedge { rank, .. }
            | Command::TensorSpinor { rank, .. }
            | Command::TensorDefining { rank, .. }
            | Command::Forms { rank, .. }
            | Command::Ejtable { rank }
            | Command::Diagram { rank }
            | Command::Verify { rank } => *rank,
        }
    }
}

pub fn default_depth(rank: usize) -> u32 {
    if rank <= 3 { 12 } else { 8 }
}

/// Comma-separated exact fractions such as `0,1,-3/2`.
pub fn parse_weight(text: &str, rank: usize, epsilon: bool) -> Result<Weight> {
    let coords: Vec<Half> = text
        .split(',')
        .map(|p| p.trim().parse::<Half>())
        .collect::<Result<_>>()?;
    if coords.len() != rank {
        return Err(Error::Rank { expected: rank, found: coords.len() });
    }
    if epsilon {
        Weight::from_epsilon(&coords)
    } else {
        Weight::from_fundamental(&coords, rank)
    }
}

enum Outcome {
    Done(String),
    VerificationFailed(String),
}

fn coords_json(w: &Weight) -> Value {
    json!(w.fundamental_coords())
}

fn decomposition_text(d: &Decomposition) -> String {
    let mut s: String = d.iter().map(|(l, n)| {
        if n == 1 { format!("{l}\n") } else { format!("{n} x {l}\n") }
    }).collect();
    if s.is_empty() {
        s.push_str("0\n");
    }
    s
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn no_dot(cli: &Cli) -> Result<()> {
    if cli.format == OutputFormat::Dot {
        return Err(Error::Parse("dot output is only available for the diagram command".into()));
    }
    Ok(())
}

fn check_degree(rank: usize, i: usize) -> Result<()> {
    if i > 2 * rank {
        return Err(Error::Domain(format!("form degree {i} exceeds {}", 2 * rank)));
    }
    Ok(())
}

pub fn run_suites(rank: usize, depth: u32) -> Result<Vec<SuiteReport>> {
    let mut suites = vec![
        verify_wedge(rank)?,
        spinor_decomp::verify_forms(rank, depth)?,
        spinor_decomp::verify_tensor_spinor(rank, depth, 3)?,
        spinor_decomp::verify_tensor_defining(rank, depth)?,
        derham::verify_diagram(rank)?,
    ];
    if rank >= 3 {
        suites.push(reference::eleven_case_regression(rank)?);
    }
    if rank == 3 {
        let mut golden = SuiteReport::new("rank-3-reference");
        let table_ok = if e_table(3)? == reference::rank3_table() {
            Ok(())
        } else {
            Err("label table differs from the reference".to_string())
        };
        golden.record("label table", table_ok);
        let edges = derham::diagram(3)?.edges;
        let expected = reference::rank3_edges();
        let edges_ok = if edges == expected {
            Ok(())
        } else {
            let missing = expected.difference(&edges).count();
            let extra = edges.difference(&expected).count();
            Err(format!("{missing} reference edges missing, {extra} unexpected"))
        };
        golden.record("diagram edges", edges_ok);
        suites.push(golden);
    }
    Ok(suites)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let rank = cli.command.rank();
    if !(2..=MAX_RANK).contains(&rank) {
        return Err(Error::Domain(format!("rank must lie in 2..={MAX_RANK}, got {rank}")));
    }
    let depth = cli.depth.unwrap_or_else(|| default_depth(rank));
    Guards::current().check_cone(rank, depth)?;
    let json_out = cli.format == OutputFormat::Json;

    let doc = match &cli.command {
        Command::Wedge { i, .. } => {
            no_dot(cli)?;
            check_degree(rank, *i)?;
            let d = wedge_decomposition(rank, *i)?;
            if json_out {
                pretty(&json!({ "rank": rank, "i": i, "decomposition": d }))
            } else {
                decomposition_text(&d)
            }
        }
        Command::TensorSpinor { weight, .. } => {
            no_dot(cli)?;
            let nu = parse_weight(weight, rank, cli.epsilon)?;
            let d = tensor_with_spinor(&nu)?;
            if json_out {
                pretty(&json!({ "rank": rank, "weight": coords_json(&nu), "decomposition": d }))
            } else {
                decomposition_text(&d)
            }
        }
        Command::TensorDefining { weight, .. } => {
            no_dot(cli)?;
            let lam = parse_weight(weight, rank, cli.epsilon)?;
            let d = tensor_with_defining(&lam)?;
            if json_out {
                pretty(&json!({ "rank": rank, "weight": coords_json(&lam), "decomposition": d }))
            } else {
                decomposition_text(&d)
            }
        }
        Command::Forms { i, .. } => {
            no_dot(cli)?;
            check_degree(rank, *i)?;
            let d = forms_spinor_decomposition(rank, *i)?;
            let rows: Vec<(usize, Weight)> = (0..=column_height(rank, *i))
                .map(|j| Ok((j, e_label(rank, XiIndex { i: *i, j })?.highest_weight().clone())))
                .collect::<Result<_>>()?;
            if rows.len() != d.len() || rows.iter().any(|(_, w)| !d.labels().any(|l| l.highest_weight() == w)) {
                return Err(Error::Consistency(format!("column {i} does not match its labels")));
            }
            if json_out {
                let summands: Vec<Value> = rows
                    .iter()
                    .map(|(j, w)| json!({ "i": i, "j": j, "label": coords_json(w) }))
                    .collect();
                pretty(&json!({ "rank": rank, "i": i, "summands": summands }))
            } else {
                rows.iter().map(|(j, w)| format!("E_{i},{j} {}\n", w.shorthand())).collect()
            }
        }
        Command::Ejtable { .. } => {
            no_dot(cli)?;
            if json_out {
                let entries: Vec<Value> = e_table(rank)?
                    .iter()
                    .map(|(idx, l)| json!({ "i": idx.i, "j": idx.j, "label": coords_json(l.highest_weight()) }))
                    .collect();
                pretty(&json!({ "rank": rank, "table": entries }))
            } else {
                spinor_decomp::render_table(rank)?
            }
        }
        Command::Diagram { .. } => {
            let d = derham::diagram(rank)?;
            let format = match cli.format {
                OutputFormat::Json => Format::Json,
                OutputFormat::Text => Format::Text,
                OutputFormat::Dot => Format::Dot,
            };
            derham::emit(&d, format)
        }
        Command::Verify { .. } => {
            no_dot(cli)?;
            let suites = run_suites(rank, depth)?;
            let passed = suites.iter().all(SuiteReport::passed);
            let doc = if json_out {
                pretty(&json!({ "rank": rank, "depth": depth, "passed": passed, "suites": suites }))
            } else {
                let mut s: String = suites.iter().map(|r| format!("{r}\n")).collect();
                s.push_str(if passed { "all suites passed\n" } else { "verification failed\n" });
                s
            };
            if !passed {
                return Ok(Outcome::VerificationFailed(doc));
            }
            doc
        }
    };
    Ok(Outcome::Done(doc))
}

fn error_json(kind: &str, message: &str) -> String {
    let mut s = json!({ "error": { "kind": kind, "message": message } }).to_string();
    s.push('\n');
    s
}

/// Exit status 0 on success, 1 on usage or domain errors (structured JSON on
/// `err`), 2 when a verification suite fails (report on `out`).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = err.write_all(error_json("usage", e.to_string().trim()).as_bytes());
            return 1;
        }
    };
    match execute(&cli) {
        Ok(Outcome::Done(doc)) => {
            let _ = out.write_all(doc.as_bytes());
            0
        }
        Ok(Outcome::VerificationFailed(doc)) => {
            let _ = out.write_all(doc.as_bytes());
            2
        }
        Err(e) => {
            let _ = err.write_all(error_json(e.kind(), &e.to_string()).as_bytes());
            1
        }
    }
}
