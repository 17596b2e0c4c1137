use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use dqes_core::format::sig12;
use dqes_core::mub::MAX_FULL_QUBITS;
use dqes_core::{
    basis_statistics, basis_statistics_per_subset, build_full_mub_set, realize_partial_state,
    run_full_dqes, run_partial_dqes, BasisSummary, LandscapeReport, Observable,
};
use rayon::prelude::*;

use crate::manifest::RunManifest;
use crate::svg::{self, Series, PALETTE};
use crate::{resolve_out, slug, usage, ObservableSource, RunContext};

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub source: ObservableSource,
    /// Qubits per MUB block; the remaining qubits stay in |0>.
    #[arg(long, conflicts_with = "full")]
    pub k: Option<usize>,
    /// Sweep the complete MUB set (n <= 3).
    #[arg(long)]
    pub full: bool,
    /// Output CSV (default: landscape-<name>.csv in $DQES_OUT_DIR).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw a scatter plot, one colour per basis.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Print statistics per (subset, basis) instead of per basis.
    #[arg(long)]
    pub per_subset: bool,
    /// Add shot-sampled estimates next to the exact energies.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Sweeps according to `k`/`full`, defaulting to the full set when n <= 3
/// and to K = 3 otherwise.
pub fn sweep(obs: &Observable, k: Option<usize>, full: bool) -> Result<LandscapeReport> {
    let n = obs.num_qubits();
    if full && n > MAX_FULL_QUBITS {
        return Err(usage(format!(
            "--full needs n <= {MAX_FULL_QUBITS}, the observable has {n} qubits (use --k)"
        )));
    }
    let k = k.unwrap_or(n.min(MAX_FULL_QUBITS));
    if k == 0 || k > n.min(MAX_FULL_QUBITS) {
        anyhow::bail!(
            "--k {k} is out of range for a {n}-qubit observable (1 <= K <= {})",
            n.min(MAX_FULL_QUBITS)
        );
    }
    if k == n {
        Ok(run_full_dqes(obs, &build_full_mub_set(n)?)?)
    } else {
        Ok(run_partial_dqes(obs, k)?)
    }
}

fn sampled_csv(
    report: &LandscapeReport,
    obs: &Observable,
    shots: u64,
    seed: u64,
) -> Result<String> {
    let set = build_full_mub_set(report.k)?;
    let rows = report
        .records
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let state = realize_partial_state(&r.spec, &set)?;
            let (mean, stderr) =
                obs.expectation_sampled(&state, shots, seed.wrapping_add(i as u64))?;
            Ok(format!(
                "{},{},{},{},{},{},{}\n",
                i,
                r.spec.subset_label(),
                r.spec.basis_index,
                r.spec.state_index,
                sig12(r.energy),
                sig12(mean),
                sig12(stderr)
            ))
        })
        .collect::<dqes_core::Result<Vec<_>>>()?;
    Ok(
        std::iter::once("index,subset,basis,state,energy,sampled,stderr\n".to_string())
            .chain(rows)
            .collect(),
    )
}

pub fn plot(report: &LandscapeReport, title: &str) -> String {
    let num_bases = report
        .records
        .iter()
        .map(|r| r.spec.basis_index)
        .max()
        .map_or(0, |b| b + 1);
    let series: Vec<Series> = (0..num_bases)
        .map(|b| Series {
            name: format!("basis {b}"),
            color: PALETTE[b % PALETTE.len()],
            points: report
                .records
                .iter()
                .enumerate()
                .filter(|(_, r)| r.spec.basis_index == b)
                .map(|(i, r)| (i as f64, r.energy))
                .collect(),
        })
        .collect();
    svg::scatter(title, "state index", "energy", &series)
}

fn print_stats(rows: &[BasisSummary]) {
    println!(
        "{:>8} {:>6} {:>6} {:>14} {:>14} {:>14} {:>12}",
        "subset", "basis", "count", "min", "mean", "max", "variance"
    );
    for s in rows {
        let subset = s.subset.as_ref().map_or_else(
            || "all".to_string(),
            |v| v.iter().map(usize::to_string).collect::<Vec<_>>().join("-"),
        );
        println!(
            "{:>8} {:>6} {:>6} {:>14.8} {:>14.8} {:>14.8} {:>12.4e}",
            subset, s.basis_index, s.count, s.min, s.mean, s.max, s.variance
        );
    }
}

pub fn run(args: LandscapeArgs, ctx: &RunContext) -> Result<()> {
    let (name, obs) = args.source.load()?;
    if args.shots == Some(0) {
        return Err(usage("--shots must be at least 1"));
    }
    let report = sweep(&obs, args.k, args.full)?.with_name(&name);
    let csv = match args.shots {
        Some(shots) => sampled_csv(&report, &obs, shots, args.seed)?,
        None => report.to_csv(),
    };
    let out = resolve_out(
        args.out.as_deref(),
        &format!("landscape-{}.csv", slug(&name)),
    );
    crate::write_file(&out, &csv)?;

    let mut manifest = RunManifest::new(&ctx.args, ctx.timestamp)
        .seed("sampling", args.seed)
        .input("observable", report.observable_hash.clone())
        .detail("observable_name", &name)
        .detail("n", report.n)
        .detail("k", report.k)
        .detail("mub", &report.mub_description)
        .detail("records", report.records.len());
    if let Some(shots) = args.shots {
        manifest = manifest.detail("shots", shots);
    }
    manifest.write_sidecar(&out)?;

    if let Some(path) = &args.plot {
        let title = format!("{name}: {}", report.mub_description);
        crate::write_file(path, &plot(&report, &title)).context("writing the plot")?;
    }

    let stats = if args.per_subset {
        basis_statistics_per_subset(&report)?
    } else {
        basis_statistics(&report)?
    };
    println!(
        "{name}: {} ({} records) -> {}",
        report.mub_description,
        report.records.len(),
        out.display()
    );
    print_stats(&stats);
    if let Some(best) = report.argmin() {
        println!("lowest: {} energy {}", best.label, sig12(best.energy));
    }
    Ok(())
}
