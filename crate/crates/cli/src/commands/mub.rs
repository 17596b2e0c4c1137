use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use dqes_core::{build_full_mub_set, verify_mub_set};

use crate::manifest::RunManifest;
use crate::{resolve_out, RunContext};

fn parse_n(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n @ 1..=3) => Ok(n),
        Ok(n) => Err(format!(
            "complete MUB sets are available for n <= 3 only (got {n})"
        )),
        Err(_) => Err(format!("{s:?} is not a qubit count")),
    }
}

#[derive(Debug, Subcommand)]
pub enum MubCommand {
    /// Check orthonormality and unbiasedness; exits 1 on failure.
    Verify {
        /// Qubit count, 1 to 3.
        #[arg(value_parser = parse_n)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Write the set as JSON: `{"n", "bases": [[[[re, im], ...], ...], ...]}`.
    Export {
        #[arg(value_parser = parse_n)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

pub fn run(cmd: MubCommand, ctx: &RunContext) -> Result<()> {
    match cmd {
        MubCommand::Verify { n, tol } => {
            let set = build_full_mub_set(n)?;
            let report = verify_mub_set(&set, tol);
            println!(
                "n = {n}: {} bases, {} states",
                report.num_bases, report.num_states
            );
            println!(
                "max orthonormality deviation: {:.3e}",
                report.max_orthonormality_deviation
            );
            println!(
                "max unbiasedness deviation:   {:.3e}",
                report.max_unbiasedness_deviation
            );
            println!(
                "tolerance {tol:e}: {}",
                if report.passed { "PASS" } else { "FAIL" }
            );
            if !report.passed {
                anyhow::bail!("MUB verification failed at tolerance {tol:e}");
            }
            Ok(())
        }
        MubCommand::Export { n, out, tol } => {
            let set = build_full_mub_set(n)?;
            let report = verify_mub_set(&set, tol);
            if !report.passed {
                anyhow::bail!("refusing to export: verification failed at tolerance {tol:e}");
            }
            let path = resolve_out(out.as_deref(), &format!("mub-n{n}.json"));
            crate::write_file(&path, &set.to_json())?;
            RunManifest::new(&ctx.args, ctx.timestamp)
                .detail("bases", set.num_bases())
                .detail("states", set.num_states())
                .write_sidecar(&path)?;
            println!(
                "wrote {} ({} bases, {} states)",
                path.display(),
                set.num_bases(),
                set.num_states()
            );
            Ok(())
        }
    }
}
