use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use dqes_core::{maxcut_hamiltonian, molecule_fixture, random_graph, transverse_field_ising};

use crate::manifest::RunManifest;
use crate::{resolve_out, slug, usage, RunContext};

#[derive(Debug, Subcommand)]
pub enum ProblemCommand {
    /// Write a problem as an observable file.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Seeded G(n, p) graph plus its Max-Cut ZZ observable.
    Maxcut {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Observable path; the graph goes next to it with a `.graph` extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Open-chain transverse-field Ising model.
    Ising {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        czz: f64,
        #[arg(long)]
        cx: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A built-in molecular Hamiltonian.
    Fixture {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: ProblemCommand, ctx: &RunContext) -> Result<()> {
    let ProblemCommand::Gen(cmd) = cmd;
    let manifest = RunManifest::new(&ctx.args, ctx.timestamp);
    match cmd {
        GenCommand::Maxcut {
            nodes,
            edge_prob,
            seed,
            out,
        } => {
            let graph = random_graph(nodes, edge_prob, seed).map_err(|e| usage(e.to_string()))?;
            let obs = maxcut_hamiltonian(&graph)?;
            let path = resolve_out(out.as_deref(), &format!("maxcut{nodes}-s{seed}.json"));
            let graph_path = path.with_extension("graph");
            let header = [
                format!("G(n, p) with p = {edge_prob}, seed {seed}"),
                format!("{} edges", graph.edges().len()),
            ];
            let graph_text = graph.to_text(&header);
            crate::write_file(&graph_path, &graph_text)?;
            crate::write_file(&path, &obs.to_json())?;
            manifest
                .seed("graph", seed)
                .input("observable", obs.content_hash())
                .detail("edge_prob", edge_prob)
                .detail("edges", graph.edges().len())
                .write_sidecar(&path)?;
            println!(
                "wrote {} ({} edges) and {} ({} terms)",
                graph_path.display(),
                graph.edges().len(),
                path.display(),
                obs.terms().len()
            );
        }
        GenCommand::Ising { n, czz, cx, out } => {
            let obs = transverse_field_ising(n, czz, cx).map_err(|e| usage(e.to_string()))?;
            let path = resolve_out(out.as_deref(), &format!("ising{n}.json"));
            crate::write_file(&path, &obs.to_json())?;
            manifest
                .input("observable", obs.content_hash())
                .detail("czz", czz)
                .detail("cx", cx)
                .write_sidecar(&path)?;
            println!("wrote {} ({} terms)", path.display(), obs.terms().len());
        }
        GenCommand::Fixture { name, out } => {
            let obs = molecule_fixture(&name).map_err(|e| usage(e.to_string()))?;
            let path = resolve_out(out.as_deref(), &format!("{}.json", slug(&name)));
            crate::write_file(&path, &obs.to_json())?;
            manifest
                .input("observable", obs.content_hash())
                .detail("fixture", &name)
                .write_sidecar(&path)?;
            println!("wrote {} ({} terms)", path.display(), obs.terms().len());
        }
    }
    Ok(())
}
