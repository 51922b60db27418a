//! `mdag-probe`: JSON and DOT front end for the mdag-core library.
//!
//! Exit status 0 on success, 1 on a domain or I/O error (reported as JSON on
//! standard error), 2 on a usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mdag_core::dsep::{d_separated, DsepQuery};
use mdag_core::json::{catalog_jsonl, canonical, parse, DsepVerdict, JsonCodec};
use mdag_core::models::{
    do_pattern_shadow, dominance_witness, generate_all_patterns, reconstruct_binary, uniform_cards, FullConditional,
    Params, ProbeDataset,
};
use mdag_core::order::{enumerate_mdags_n, hasse, structurally_dominates, DotStyle};
use mdag_core::reduction::{canonical_pdag, lnodes_to_faces, re_reduce};
use mdag_core::swig::{check_commutation, split, split_subset};
use mdag_core::{Exact, Mdag, Pdag};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mdag-probe", version, about = "Marginalized DAGs, node splitting and probing-scheme dominance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Count (or list) the mDAGs on n temporally ordered nodes.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print the directed, complex and mDAG counts (the default).
        #[arg(long)]
        counts: bool,
        /// Write the catalog as JSON lines.
        #[arg(long, value_name = "FILE")]
        catalog: Option<PathBuf>,
    },
    /// RE-reduce a pDAG.
    Reduce {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Write the reduction trace here.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Project a pDAG to its mDAG.
    ToMdag {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Canonical pDAG of an mDAG.
    Canonical {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Split the visible nodes of a graph (all of them by default).
    Split {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Does g structurally dominate h?
    Dominates {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "FILE")]
        h: PathBuf,
    },
    /// Hasse diagram of structural dominance on n nodes.
    Hasse {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Data of every do-pattern from a graph and parameters.
    Simulate {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        /// Parameters; random ones from --seed and --card when absent.
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
        /// Restrict interventions to the value 0.
        #[arg(long)]
        one_do: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        card: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// One do-pattern of a full conditional.
    Shadow {
        #[arg(long, value_name = "FILE")]
        fc: PathBuf,
        #[arg(long = "do", value_delimiter = ',')]
        do_nodes: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        values: Vec<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Full conditional of binary all-patterns data.
    Reconstruct {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Dominance certificate, or data separating h from g.
    Witness {
        #[arg(long, value_name = "FILE")]
        g: PathBuf,
        #[arg(long, value_name = "FILE")]
        h: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// d-separation of A and B given C.
    Dsep {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        c: Vec<String>,
    },
    /// Check that splitting commutes with projection to the mDAG.
    CommuteCheck {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load<T: JsonCodec>(path: &Path) -> anyhow::Result<T> {
    Ok(T::from_json(&read(path)?)?)
}

/// An mDAG file, or a pDAG file projected to its mDAG.
fn load_mdag(path: &Path) -> anyhow::Result<Mdag> {
    let v = parse(&read(path)?)?;
    if v.get("facets").is_some() {
        Ok(Mdag::from_value(&v)?)
    } else {
        Ok(lnodes_to_faces(&Pdag::from_value(&v)?))
    }
}

/// A pDAG file, or the canonical pDAG of an mDAG file.
fn load_pdag(path: &Path) -> anyhow::Result<Pdag> {
    let v = parse(&read(path)?)?;
    if v.get("facets").is_some() {
        Ok(canonical_pdag(&Mdag::from_value(&v)?))
    } else {
        Ok(Pdag::from_value(&v)?)
    }
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Enumerate { n, counts: _, catalog } => {
            let cat = enumerate_mdags_n(n)?;
            if let Some(path) = catalog {
                write(&path, &catalog_jsonl(&cat))?;
            }
            let v = json!({"directed": cat.directed_count(), "complexes": cat.complex_count(), "mdags": cat.len()});
            emit(None, &canonical(&v))
        }
        Command::Reduce { input, trace, out } => {
            let (g, steps) = re_reduce(&load::<Pdag>(&input)?);
            if let Some(path) = trace {
                write(&path, &steps.to_json())?;
            }
            emit(out.as_deref(), &g.to_json())
        }
        Command::ToMdag { input, out } => emit(out.as_deref(), &lnodes_to_faces(&load::<Pdag>(&input)?).to_json()),
        Command::Canonical { input, out } => emit(out.as_deref(), &canonical_pdag(&load::<Mdag>(&input)?).to_json()),
        Command::Split { input, subset, out } => {
            let g = load_pdag(&input)?;
            let s = match subset {
                Some(names) => split_subset(&g, &names)?,
                None => split(&g)?,
            };
            emit(out.as_deref(), &s.to_json())
        }
        Command::Dominates { g, h } => {
            let d = structurally_dominates(&load_mdag(&g)?, &load_mdag(&h)?)?;
            emit(None, &canonical(&json!({"dominates": d})))
        }
        Command::Hasse { n, out, format } => {
            let cat = enumerate_mdags_n(n)?;
            let h = hasse(&cat);
            let text = match format {
                Format::Json => h.to_json(),
                Format::Dot => h.to_dot_with_islands(&cat, &DotStyle { name: format!("hasse{n}"), ..DotStyle::default() }),
            };
            emit(out.as_deref(), &text)
        }
        Command::Simulate { graph, params, one_do, seed, card, out } => {
            let g = load_pdag(&graph)?;
            let par: Params<Exact> = match params {
                Some(p) => load(&p)?,
                None => Params::seeded(&g, &uniform_cards(&g, card), card, seed)?,
            };
            emit(out.as_deref(), &generate_all_patterns(&g, &par, one_do)?.to_json())
        }
        Command::Shadow { fc, do_nodes, values, out } => {
            let fc: FullConditional<Exact> = load(&fc)?;
            emit(out.as_deref(), &do_pattern_shadow(&fc, &do_nodes, &values)?.to_json())
        }
        Command::Reconstruct { dataset, out } => {
            let ds: ProbeDataset<Exact> = load(&dataset)?;
            emit(out.as_deref(), &reconstruct_binary(&ds)?.to_json())
        }
        Command::Witness { g, h, out } => {
            let w = dominance_witness::<Exact>(&load_mdag(&g)?, &load_mdag(&h)?)?;
            emit(out.as_deref(), &w.to_json())
        }
        Command::Dsep { input, a, b, c } => {
            let g = load_pdag(&input)?;
            let query = DsepQuery::new(&a, &b, &c)?;
            let d_separated = d_separated(&g, &query)?;
            emit(None, &DsepVerdict { query, d_separated }.to_json())
        }
        Command::CommuteCheck { input } => {
            let ok = check_commutation(&load::<Pdag>(&input)?)?;
            emit(None, &canonical(&json!({"commutes": ok})))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.downcast_ref::<mdag_core::Error>().map_or("io", |d| d.code());
            eprint!("{}", canonical(&json!({"error": code, "message": format!("{e:#}")})));
            ExitCode::from(1)
        }
    }
}
