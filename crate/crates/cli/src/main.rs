//! Command-line front end: evaluate alternating enumerators, dump
//! fixed-point lattices, run the witness searches, drive the
//! inclusion-exclusion reduction and the clique gadget, and run the
//! verification suite.
//!
//! Exit codes: 0 success, 1 input or hypothesis error, 2 capacity error,
//! 3 falsified-invariant abort (a fact the searches are entitled to rely on
//! failed at desk scale, which indicates a bug and must be unmissable).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use indsub_core::altenum::{alt_enum_modp, alt_enum_naive_with_cap, exact_mod_p, MAX_NAIVE_EDGES};
use indsub_core::error::{Error, Result};
use indsub_core::gf::FieldSpec;
use indsub_core::graph::Graph;
use indsub_core::group::{rotation_group, sylow_group, FixedPointLattice};
use indsub_core::property::{parse_property, PropertyHandle, PropertySpec};
use indsub_core::reduce::{
    clique_gadget, count_cliques, count_cp_hom, count_indsub, count_indsub_shifted,
};
use indsub_core::witness::{classify_k, prime_power_witness, sylow_biclique_witness, KVerdict};
use indsub_core::{acceptance, witness::WitnessReport};

#[derive(Parser)]
#[command(name = "indsub", version, about = "alternating enumerators, fixed-point lattices, and witness searches for induced-subgraph counting", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    Rot,
    Syl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Alternating enumerator of a property on a graph: the exact naive
    /// value and, given field parameters, the mod-p value through the
    /// fixed-point lattice.
    Ae(AeArgs),
    /// Enumerate the fixed points of a group acting on K_{p^m} with levels
    /// and, given a property, satisfaction and residues.
    Lattice(LatticeArgs),
    /// Witness searches: prime-power win-win, Sylow biclique, or
    /// classification of a k value.
    Witness(WitnessArgs),
    /// Count induced subgraphs for a shifted property via
    /// inclusion-exclusion oracle calls.
    Reduce(ReduceArgs),
    /// Build the clique gadget and compare its color-prescribed
    /// homomorphism count to the clique count.
    Gadget(GadgetArgs),
    /// Run the verification suite (all criteria, or one by id).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AeArgs {
    /// Property file (one property per file).
    #[arg(long)]
    property: PathBuf,
    /// Graph file ("n m" header, then edge lines "u v").
    #[arg(long)]
    graph: PathBuf,
    /// Field characteristic; enables the mod-p engine.
    #[arg(long)]
    p: Option<u32>,
    /// Field degree.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Acting group for the mod-p engine.
    #[arg(long, value_enum, default_value_t = GroupKind::Rot)]
    group: GroupKind,
    /// Lower the naive engine edge cap (hard cap 25).
    #[arg(long, default_value_t = MAX_NAIVE_EDGES)]
    max_edges_naive: usize,
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, value_enum, default_value_t = GroupKind::Rot)]
    group: GroupKind,
    /// Optional property: adds satisfaction and residue columns.
    #[arg(long)]
    property: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKindArg {
    PrimePower,
    Sylow,
    Classify,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_enum)]
    kind: WitnessKindArg,
    /// Property file; the property is declared edge-monotone and the
    /// declaration is verified exhaustively on small graphs before any
    /// search runs.
    #[arg(long)]
    property: PathBuf,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// Parameter for --kind classify.
    #[arg(long)]
    k: Option<usize>,
    /// Re-confirm the witness with the exact treewidth algorithm where
    /// feasible.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    property: PathBuf,
    /// Graph file for the shift graph H.
    #[arg(long)]
    shift: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct GadgetArgs {
    /// Pattern graph file (must contain K_{ell,ell}).
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Host graph file whose ell-cliques are counted.
    #[arg(long)]
    g: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single criterion by id (1..=13).
    #[arg(long)]
    criterion: Option<usize>,
}

/// Prints a line to stdout, exiting quietly when the consumer closed the
/// pipe (e.g. `indsub lattice ... | head`).
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{}", text.as_ref()).is_err() {
        std::process::exit(0);
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    Graph::from_text(&text)
}

fn read_property(path: &Path) -> Result<PropertySpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_property(&text)
}

fn lattice_for(kind: GroupKind, p: u32, m: u32) -> Result<FixedPointLattice> {
    let order = (p as u64)
        .checked_pow(m)
        .filter(|&o| o <= 64)
        .ok_or_else(|| Error::Capacity(format!("{p}^{m} exceeds 64 vertices")))?;
    let host = Graph::complete(order as usize)?;
    match kind {
        GroupKind::Rot => {
            let spec = FieldSpec::new(p, m)?;
            FixedPointLattice::new(&rotation_group(&spec), &host)
        }
        GroupKind::Syl => FixedPointLattice::new(&sylow_group(p, m)?, &host),
    }
}

fn run_ae(args: &AeArgs) -> Result<()> {
    let spec = read_property(&args.property)?;
    let handle = PropertyHandle::new(spec);
    let graph = read_graph(&args.graph)?;
    let naive = if graph.edge_count() <= args.max_edges_naive {
        Some(alt_enum_naive_with_cap(
            &handle,
            &graph,
            args.max_edges_naive,
        )?)
    } else {
        None
    };
    let mut out = json!({
        "property": handle.name(),
        "naive": naive.as_ref().map(|v| v.to_string()),
        "mod_p": serde_json::Value::Null,
        "p": serde_json::Value::Null,
        "level": serde_json::Value::Null,
    });
    if let Some(p) = args.p {
        let lattice = lattice_for(args.group, p, args.m)?;
        let fp = lattice.locate(&graph).ok_or_else(|| {
            Error::Input("graph is not a fixed point of the requested lattice".to_string())
        })?;
        let residue = alt_enum_modp(&handle, &lattice, &fp)?;
        if let Some(exact) = &naive {
            if exact_mod_p(exact, p) != residue {
                return Err(Error::FalsifiedLemma(
                    "naive and mod-p engines disagree".to_string(),
                ));
            }
        }
        out["mod_p"] = json!(residue);
        out["p"] = json!(p);
        out["level"] = json!(fp.level);
    }
    emit(serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn run_lattice(args: &LatticeArgs) -> Result<()> {
    let lattice = lattice_for(args.group, args.p, args.m)?;
    let handle = match &args.property {
        Some(path) => Some(PropertyHandle::new(read_property(path)?)),
        None => None,
    };
    let p = lattice.p();
    let mut rows: Vec<serde_json::Value> = Vec::new();
    for fp in lattice.points() {
        let graph = lattice.graph_of(&fp);
        let orbit_list: Vec<String> = (0..lattice.orbit_count())
            .filter(|i| fp.orbit_set >> i & 1 == 1)
            .map(|i| i.to_string())
            .collect();
        let (phi, residue) = match &handle {
            Some(h) => {
                let phi = h.evaluate(&graph);
                let residue = p.map(|_| alt_enum_modp(h, &lattice, &fp)).transpose()?;
                (Some(phi), residue)
            }
            None => (None, None),
        };
        rows.push(json!({
            "level": fp.level,
            "orbit_set": orbit_list.join(";"),
            "edge_count": graph.edge_count(),
            "phi": phi,
            "residue": residue,
        }));
    }
    match args.format {
        Format::Json => {
            emit(serde_json::to_string_pretty(&rows).expect("json"));
        }
        Format::Csv => {
            emit("level,orbit_set,edge_count,phi,residue");
            for r in &rows {
                emit(format!(
                    "{},{},{},{},{}",
                    r["level"],
                    r["orbit_set"].as_str().unwrap_or(""),
                    r["edge_count"],
                    r["phi"]
                        .as_bool()
                        .map(|b| b.to_string())
                        .unwrap_or_default(),
                    r["residue"]
                        .as_u64()
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                ));
            }
        }
        Format::Pretty => {
            let counts = lattice.level_counts();
            emit(format!(
                "{} fixed points on {} orbits; per-level counts {:?}",
                lattice.point_count(),
                lattice.orbit_count(),
                counts
            ));
            for r in &rows {
                emit(format!(
                    "level {} orbits [{}] edges {}{}{}",
                    r["level"],
                    r["orbit_set"].as_str().unwrap_or(""),
                    r["edge_count"],
                    r["phi"]
                        .as_bool()
                        .map(|b| format!(" phi {b}"))
                        .unwrap_or_default(),
                    r["residue"]
                        .as_u64()
                        .map(|v| format!(" residue {v}"))
                        .unwrap_or_default(),
                ));
            }
        }
    }
    Ok(())
}

fn witness_json(report: &WitnessReport, verify: bool) -> Result<serde_json::Value> {
    let mut out = serde_json::to_value(report).expect("report serializes");
    if verify {
        let confirmed = report.confirm_treewidth()?;
        out["verified_treewidth"] = json!(confirmed);
    }
    Ok(out)
}

fn run_witness(args: &WitnessArgs) -> Result<()> {
    let mut spec = read_property(&args.property)?;
    spec.declared_edge_monotone = true;
    let handle = PropertyHandle::new(spec);
    let out = match args.kind {
        WitnessKindArg::PrimePower => {
            let (p, m) = (require(args.p, "--p")?, args.m.unwrap_or(1));
            witness_json(&prime_power_witness(&handle, p, m)?, args.verify)?
        }
        WitnessKindArg::Sylow => {
            let (p, m) = (require(args.p, "--p")?, require(args.m, "--m")?);
            witness_json(&sylow_biclique_witness(&handle, p, m)?, args.verify)?
        }
        WitnessKindArg::Classify => {
            let k = require(args.k, "--k")?;
            let classification = classify_k(&handle, k)?;
            let mut value =
                serde_json::to_value(&classification).expect("classification serializes");
            if args.verify {
                if let KVerdict::Concentrated(report) = &classification.verdict {
                    value["verified_treewidth"] = json!(report.confirm_treewidth()?);
                }
            }
            value
        }
    };
    emit(serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn require<T: Copy>(opt: Option<T>, flag: &str) -> Result<T> {
    opt.ok_or_else(|| Error::Input(format!("{flag} is required for this witness kind")))
}

fn run_reduce(args: &ReduceArgs) -> Result<()> {
    let spec = read_property(&args.property)?;
    let handle = PropertyHandle::new(spec);
    let shift_graph = read_graph(&args.shift)?;
    let graph = read_graph(&args.graph)?;
    if args.k + shift_graph.vertex_count() > indsub_core::graph::MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "k + |V(H)| = {} exceeds the {}-vertex cap",
            args.k + shift_graph.vertex_count(),
            indsub_core::graph::MAX_VERTICES
        )));
    }
    let mut calls = 0u64;
    let mut oracle = |k: usize, g: &Graph| {
        calls += 1;
        Ok(count_indsub(&handle, k, g)?.value)
    };
    let reduced = count_indsub_shifted(&shift_graph, args.k, &graph, &mut oracle)?;
    // Cross-check against the direct count of the shifted property.
    let shifted = PropertyHandle::new(handle.spec().shift(&shift_graph));
    let direct = count_indsub(&shifted, args.k, &graph)?;
    if reduced.value != direct.value {
        return Err(Error::FalsifiedLemma(format!(
            "inclusion-exclusion count {} differs from the direct count {}",
            reduced.value, direct.value
        )));
    }
    let out = json!({
        "count": reduced.value.to_string(),
        "method": "reduction",
        "oracle_calls": calls,
        "oracle_parameter": args.k + shift_graph.vertex_count(),
    });
    emit(serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn run_gadget(args: &GadgetArgs) -> Result<()> {
    let f = read_graph(&args.f)?;
    let g = read_graph(&args.g)?;
    let gadget = clique_gadget(&f, args.ell, &g)?;
    let homs = count_cp_hom(&gadget)?.value;
    let cliques = count_cliques(&g, args.ell)?.value;
    if homs != cliques {
        return Err(Error::FalsifiedLemma(format!(
            "gadget count {homs} differs from the clique count {cliques}"
        )));
    }
    let out = json!({
        "count": homs.to_string(),
        "method": "direct",
        "gadget_vertices": gadget.graph().vertex_count(),
        "vertex_law": 2 * args.ell * g.vertex_count() + f.vertex_count() - 2 * args.ell,
    });
    emit(serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<()> {
    let reports =
        match args.criterion {
            Some(id) => vec![acceptance::run_one(id)
                .ok_or_else(|| Error::Input(format!("no criterion {id}")))?],
            None => acceptance::run_all(),
        };
    let mut all_pass = true;
    for r in &reports {
        emit(r.line());
        all_pass &= r.pass;
    }
    if !all_pass {
        return Err(Error::FalsifiedLemma(
            "verification suite failed".to_string(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ae(args) => run_ae(args),
        Command::Lattice(args) => run_lattice(args),
        Command::Witness(args) => run_witness(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Gadget(args) => run_gadget(args),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
