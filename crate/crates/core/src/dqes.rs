//! Exhaustive cost evaluation over full and partial MUB sets.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::mub::{
    build_full_mub_set, enumerate_partial_specs, realize_partial_state, MubSet, PartialMubSpec,
    MAX_FULL_QUBITS,
};
use crate::pauli::Observable;
use crate::qstate::StateVector;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LandscapeRecord {
    pub spec: PartialMubSpec,
    pub energy: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisSummary {
    pub basis_index: usize,
    /// Present only for per-subset tables.
    pub subset: Option<Vec<usize>>,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LandscapeReport {
    pub observable_name: String,
    pub observable_hash: String,
    pub n: usize,
    pub k: usize,
    pub mub_description: String,
    pub records: Vec<LandscapeRecord>,
    pub summary: Vec<BasisSummary>,
}

impl LandscapeReport {
    fn assemble(
        obs: &Observable,
        k: usize,
        mub_description: String,
        records: Vec<LandscapeRecord>,
    ) -> Self {
        let summary = summarize(&records, false);
        Self {
            observable_name: "observable".into(),
            observable_hash: obs.content_hash(),
            n: obs.num_qubits(),
            k,
            mub_description,
            records,
            summary,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.observable_name = name.into();
        self
    }

    /// Lowest-energy record (earliest on ties).
    pub fn argmin(&self) -> Option<&LandscapeRecord> {
        self.records
            .iter()
            .reduce(|a, b| if b.energy < a.energy { b } else { a })
    }

    /// `index,subset,basis,state,energy`, one record per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,subset,basis,state,energy\n");
        for (i, r) in self.records.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                i,
                r.spec.subset_label(),
                r.spec.basis_index,
                r.spec.state_index,
                sig12(r.energy)
            ));
        }
        s
    }
}

/// Energy evaluation with a precomputed diagonal when the observable has one.
enum Evaluator<'a> {
    Diagonal(Vec<f64>),
    General(&'a Observable),
}

impl<'a> Evaluator<'a> {
    fn new(obs: &'a Observable) -> Self {
        obs.diagonal()
            .map_or(Evaluator::General(obs), Evaluator::Diagonal)
    }

    fn energy(&self, state: &StateVector) -> Result<f64> {
        match self {
            Evaluator::General(obs) => obs.expectation(state),
            Evaluator::Diagonal(d) => {
                if d.len() != state.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "{}-entry diagonal on a {}-amplitude state",
                        d.len(),
                        state.dim()
                    )));
                }
                Ok(state
                    .amplitudes()
                    .iter()
                    .zip(d)
                    .map(|(a, x)| a.norm_sqr() * x)
                    .sum())
            }
        }
    }
}

fn full_spec(n: usize, basis_index: usize, state_index: usize) -> PartialMubSpec {
    PartialMubSpec {
        n,
        k: n,
        subset: (1..=n).collect(),
        basis_index,
        state_index,
    }
}

/// One record per state of `set`, exact energies.
pub fn run_full_dqes(obs: &Observable, set: &MubSet) -> Result<LandscapeReport> {
    let n = obs.num_qubits();
    if set.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit MUB set for a {}-qubit observable",
            set.num_qubits(),
            n
        )));
    }
    if n > MAX_FULL_QUBITS {
        return Err(Error::OutOfRange {
            what: "full sweep qubit count",
            value: n.to_string(),
            bound: "n <= 3 (use a partial sweep)",
        });
    }
    let eval = Evaluator::new(obs);
    let points: Vec<(usize, usize)> = (0..set.num_bases())
        .flat_map(|b| (0..set.bases()[b].len()).map(move |s| (b, s)))
        .collect();
    let records = points
        .par_iter()
        .map(|&(b, s)| {
            let spec = full_spec(n, b, s);
            Ok(LandscapeRecord {
                energy: eval.energy(set.state(b, s))?,
                label: spec.label(),
                spec,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let desc = format!("full MUB set, n={n}, {} bases", set.num_bases());
    Ok(LandscapeReport::assemble(obs, n, desc, records))
}

/// Partial sweep over every `k`-subset of qubits, the rest held at `|0>`.
pub fn run_partial_dqes(obs: &Observable, k: usize) -> Result<LandscapeReport> {
    let n = obs.num_qubits();
    let specs = enumerate_partial_specs(n, k)?;
    let set = build_full_mub_set(k)?;
    let eval = Evaluator::new(obs);
    let records = specs
        .into_par_iter()
        .map(|spec| {
            let state = realize_partial_state(&spec, &set)?;
            Ok(LandscapeRecord {
                energy: eval.energy(&state)?,
                label: spec.label(),
                spec,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let desc = format!("partial MUB states, K={k} of n={n}");
    Ok(LandscapeReport::assemble(obs, k, desc, records))
}

fn summarize(records: &[LandscapeRecord], per_subset: bool) -> Vec<BasisSummary> {
    let mut groups: BTreeMap<(usize, Vec<usize>), Vec<f64>> = BTreeMap::new();
    for r in records {
        let subset = if per_subset {
            r.spec.subset.clone()
        } else {
            Vec::new()
        };
        groups
            .entry((r.spec.basis_index, subset))
            .or_default()
            .push(r.energy);
    }
    let mut out: Vec<BasisSummary> = groups
        .into_iter()
        .map(|((basis_index, subset), e)| {
            let count = e.len();
            let mean = e.iter().sum::<f64>() / count as f64;
            let variance = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / count as f64;
            BasisSummary {
                basis_index,
                subset: per_subset.then_some(subset),
                count,
                min: e.iter().copied().fold(f64::INFINITY, f64::min),
                max: e.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean,
                variance,
            }
        })
        .collect();
    if per_subset {
        out.sort_by(|a, b| {
            a.subset
                .cmp(&b.subset)
                .then(a.basis_index.cmp(&b.basis_index))
        });
    }
    out
}

/// Per-basis min, max, mean and variance, aggregated over qubit subsets and
/// sorted by basis index.
pub fn basis_statistics(report: &LandscapeReport) -> Result<Vec<BasisSummary>> {
    if report.records.is_empty() {
        return Err(Error::InvalidArgument("empty landscape report".into()));
    }
    Ok(summarize(&report.records, false))
}

/// Like [`basis_statistics`] but one row per (subset, basis).
pub fn basis_statistics_per_subset(report: &LandscapeReport) -> Result<Vec<BasisSummary>> {
    if report.records.is_empty() {
        return Err(Error::InvalidArgument("empty landscape report".into()));
    }
    Ok(summarize(&report.records, true))
}

/// The `k` lowest-energy records, ascending, ties in enumeration order.
pub fn rank_initial_states(
    report: &LandscapeReport,
    k: usize,
) -> Result<Vec<(PartialMubSpec, f64)>> {
    if k == 0 || k > report.records.len() {
        return Err(Error::OutOfRange {
            what: "number of ranked states",
            value: k.to_string(),
            bound: "1 <= k <= record count",
        });
    }
    let mut order: Vec<usize> = (0..report.records.len()).collect();
    order.sort_by(|&a, &b| {
        report.records[a]
            .energy
            .total_cmp(&report.records[b].energy)
            .then(a.cmp(&b))
    });
    Ok(order
        .into_iter()
        .take(k)
        .map(|i| (report.records[i].spec.clone(), report.records[i].energy))
        .collect())
}
