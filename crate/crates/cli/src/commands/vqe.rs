use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use dqes_core::format::sig12;
use dqes_core::problems::MAX_SPECTRUM_QUBITS;
use dqes_core::{
    build_full_mub_set, exact_spectrum, rank_initial_states, run_vqe, Ansatz, FitConfig,
    InitStrategy, Observable, OptimizerConfig, ParameterVector, PartialMubSpec, RotationAxes,
    VqeResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::landscape::sweep;
use crate::manifest::RunManifest;
use crate::svg::{self, Series, PALETTE};
use crate::{default_out_dir, slug, usage, ObservableSource, RunContext};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Strategy {
    /// Prepare the MUB state, then apply the ansatz from zero parameters.
    Shifted,
    /// Fit ansatz parameters that produce the MUB state from |0...0>.
    Fit,
}

#[derive(Debug, Args)]
pub struct VqeArgs {
    #[command(flatten)]
    pub source: ObservableSource,
    /// Comma-separated: `top-K`, `random-M`, or state labels such as `b1s2@1-2`.
    #[arg(long, default_value = "top-3")]
    pub init: String,
    /// MUB block size used to rank states for `top-K` (default: min(n, 3)).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Y (real amplitudes) or YZ.
    #[arg(long, default_value = "Y")]
    pub axes: RotationAxes,
    #[arg(long, value_enum, default_value = "shifted")]
    pub strategy: Strategy,
    /// With `--strategy fit`, run unreachable states with the shifted strategy instead of failing.
    #[arg(long)]
    pub allow_fallback: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Stop a run once the energy falls to this value.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Output directory (default: $DQES_OUT_DIR or the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw the convergence curves.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, PartialEq)]
enum InitItem {
    Top(usize),
    Random(usize),
    Spec(String),
}

fn parse_init(s: &str) -> Result<Vec<InitItem>> {
    let items: Vec<InitItem> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let count = |rest: &str| {
                rest.parse::<usize>()
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| {
                        usage(format!("bad --init item {t:?}: expected a positive count"))
                    })
            };
            if let Some(rest) = t.strip_prefix("top-") {
                Ok(InitItem::Top(count(rest)?))
            } else if let Some(rest) = t.strip_prefix("random-") {
                Ok(InitItem::Random(count(rest)?))
            } else {
                Ok(InitItem::Spec(t.to_string()))
            }
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(usage("--init is empty"));
    }
    Ok(items)
}

struct Planned {
    label: String,
    /// Qubits in the MUB block, 0 when no MUB state is involved.
    block: usize,
    init: InitStrategy,
    landscape_energy: Option<f64>,
}

#[derive(Serialize)]
struct RunSummary {
    label: String,
    init: String,
    landscape_energy: Option<f64>,
    start_energy: f64,
    final_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_vs_exact: Option<f64>,
    evaluations: usize,
    termination: &'static str,
    fell_back: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_fidelity: Option<f64>,
    final_params: ParameterVector,
    trace_file: String,
}

#[derive(Serialize)]
struct Summary {
    observable: String,
    observable_hash: String,
    n: usize,
    seed: u64,
    ansatz: AnsatzInfo,
    optimizer: OptimizerInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_ground_energy: Option<f64>,
    runs: Vec<RunSummary>,
}

#[derive(Serialize)]
struct AnsatzInfo {
    layers: usize,
    axes: String,
    parameters: usize,
}

#[derive(Serialize)]
struct OptimizerInfo {
    rho_init: f64,
    tol: f64,
    max_evals: usize,
    threshold: Option<f64>,
}

fn plan(args: &VqeArgs, obs: &Observable, ansatz: &Ansatz) -> Result<Vec<Planned>> {
    let n = obs.num_qubits();
    let dim = ansatz.parameter_count();
    let items = parse_init(&args.init)?;
    let mut specs: Vec<(PartialMubSpec, Option<f64>)> = Vec::new();
    let mut planned = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut random_count = 0;
    for item in items {
        match item {
            InitItem::Top(k) => {
                let report = sweep(obs, args.k, false)?;
                let top = rank_initial_states(&report, k.min(report.records.len()))?;
                specs.extend(top.into_iter().map(|(s, e)| (s, Some(e))));
            }
            InitItem::Spec(label) => {
                let spec = PartialMubSpec::parse_label(n, &label)
                    .map_err(|e| usage(format!("bad --init item: {e}")))?;
                if spec.k > 3 {
                    return Err(usage(format!(
                        "{label}: MUB blocks are limited to 3 qubits"
                    )));
                }
                specs.push((spec, None));
            }
            InitItem::Random(m) => {
                for _ in 0..m {
                    random_count += 1;
                    let theta: Vec<f64> = (0..dim)
                        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                        .collect();
                    planned.push(Planned {
                        label: format!("random{random_count}"),
                        block: 0,
                        init: InitStrategy::RawParams {
                            theta: ParameterVector::new(theta),
                        },
                        landscape_energy: None,
                    });
                }
            }
        }
    }
    let mut mub_runs = Vec::new();
    for (spec, energy) in specs {
        let init = match args.strategy {
            Strategy::Shifted => InitStrategy::shifted(spec.clone(), dim),
            Strategy::Fit => InitStrategy::ParameterFit {
                spec: spec.clone(),
                allow_fallback: args.allow_fallback,
                fit: FitConfig {
                    seed: args.seed,
                    ..FitConfig::default()
                },
            },
        };
        mub_runs.push(Planned {
            label: spec.label(),
            block: spec.k,
            init,
            landscape_energy: energy,
        });
    }
    mub_runs.extend(planned);
    Ok(mub_runs)
}

fn bloch_csv(result: &VqeResult, ansatz: &Ansatz) -> Result<String> {
    let mut s = String::from("eval,x,y,z\n");
    for e in &result.trace.evaluations {
        let state = ansatz.prepare(&e.params, &result.reference_state)?;
        let [x, y, z] = state.bloch()?;
        s.push_str(&format!(
            "{},{},{},{}\n",
            e.index,
            sig12(x),
            sig12(y),
            sig12(z)
        ));
    }
    Ok(s)
}

pub fn run(args: VqeArgs, ctx: &RunContext) -> Result<()> {
    let (name, obs) = args.source.load()?;
    let n = obs.num_qubits();
    let ansatz = Ansatz::new(n, args.layers, args.axes).map_err(|e| usage(e.to_string()))?;
    let config = OptimizerConfig {
        rho_init: args.rho,
        tol: args.tol,
        max_evals: args.max_evals,
        threshold: args.threshold,
    };
    config
        .validate(ansatz.parameter_count())
        .map_err(|e| usage(e.to_string()))?;
    let runs = plan(&args, &obs, &ansatz)?;
    let exact = (n <= MAX_SPECTRUM_QUBITS)
        .then(|| exact_spectrum(&obs).map(|r| r.ground_energy))
        .transpose()?;

    let results: Vec<VqeResult> = runs
        .par_iter()
        .map(|p| {
            let mubs = build_full_mub_set(p.block.max(1))?;
            run_vqe(&obs, &p.init, &ansatz, &config, &mubs)
                .with_context(|| format!("initialization {}", p.label))
        })
        .collect::<Result<_>>()?;

    let dir = args.out.clone().unwrap_or_else(default_out_dir);
    let mut summaries = Vec::new();
    for (i, (p, r)) in runs.iter().zip(&results).enumerate() {
        let stem = format!("trace-{:02}-{}", i + 1, slug(&p.label));
        let trace_file = format!("{stem}.csv");
        crate::write_file(&dir.join(&trace_file), &r.trace.to_csv())?;
        if n == 1 {
            crate::write_file(
                &dir.join(format!("bloch-{:02}-{}.csv", i + 1, slug(&p.label))),
                &bloch_csv(r, &ansatz)?,
            )?;
        }
        summaries.push(RunSummary {
            label: p.label.clone(),
            init: r.init.clone(),
            landscape_energy: p.landscape_energy,
            start_energy: r.trace.evaluations[0].energy,
            final_energy: r.final_energy,
            error_vs_exact: exact.map(|e0| r.final_energy - e0),
            evaluations: r.trace.len(),
            termination: r.trace.termination.as_str(),
            fell_back: r.fell_back,
            fit_fidelity: r.fit_fidelity,
            final_params: r.final_params.clone(),
            trace_file,
        });
    }
    let summary = Summary {
        observable: name.clone(),
        observable_hash: obs.content_hash(),
        n,
        seed: args.seed,
        ansatz: AnsatzInfo {
            layers: args.layers,
            axes: args.axes.to_string(),
            parameters: ansatz.parameter_count(),
        },
        optimizer: OptimizerInfo {
            rho_init: config.rho_init,
            tol: config.tol,
            max_evals: config.max_evals,
            threshold: config.threshold,
        },
        exact_ground_energy: exact,
        runs: summaries,
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    let summary_path = dir.join("summary.json");
    crate::write_file(&summary_path, &text)?;
    RunManifest::new(&ctx.args, ctx.timestamp)
        .input("observable", obs.content_hash())
        .seed("init", args.seed)
        .detail("observable_name", &name)
        .write_to(&dir.join("manifest.json"))?;

    if args.plot {
        let series: Vec<Series> = summary
            .runs
            .iter()
            .zip(&results)
            .enumerate()
            .map(|(i, (s, r))| Series {
                name: s.label.clone(),
                color: PALETTE[i % PALETTE.len()],
                points: r
                    .trace
                    .evaluations
                    .iter()
                    .map(|e| (e.index as f64, e.energy))
                    .collect(),
            })
            .collect();
        let svg = svg::lines(
            &format!("{name}: VQE convergence"),
            "evaluation",
            "energy",
            &series,
            exact.map(|e| (e, "exact ground energy")),
        );
        crate::write_file(&dir.join("convergence.svg"), &svg)?;
    }

    println!(
        "{name}: {} runs, ansatz {} x{} ({} parameters)",
        summary.runs.len(),
        args.axes,
        args.layers,
        ansatz.parameter_count()
    );
    if let Some(e0) = exact {
        println!("exact ground energy {}", sig12(e0));
    }
    println!(
        "{:<16} {:>16} {:>16} {:>12} {:>6}  stop",
        "init", "start", "final", "error", "evals"
    );
    for s in &summary.runs {
        println!(
            "{:<16} {:>16.10} {:>16.10} {:>12} {:>6}  {}{}",
            s.label,
            s.start_energy,
            s.final_energy,
            s.error_vs_exact
                .map_or_else(|| "-".into(), |e| format!("{e:.3e}")),
            s.evaluations,
            s.termination,
            if s.fell_back {
                " (fell back to shifted)"
            } else {
                ""
            }
        );
    }
    println!("wrote {}", summary_path.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_lists() {
        assert_eq!(
            parse_init("top-2, random-3,b1s0@1-2").unwrap(),
            vec![
                InitItem::Top(2),
                InitItem::Random(3),
                InitItem::Spec("b1s0@1-2".into())
            ]
        );
        for bad in ["", "top-0", "random-x", ","] {
            assert!(parse_init(bad).is_err(), "{bad}");
        }
    }
}
