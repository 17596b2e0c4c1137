//! Unconstrained derivative-free minimization in the style of Powell's
//! COBYLA: a linear model interpolated on a simplex of `dim + 1` points,
//! trust-region steps of length `rho` against the model gradient, and
//! geometry-repair steps that keep the simplex well shaped before `rho` is
//! halved towards the final tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vqa::ParameterVector;

/// Shrink `rho` when the achieved reduction is below this fraction of the
/// model's prediction.
const POOR_RATIO: f64 = 0.1;
/// Simplex acceptability: every vertex at least `ALPHA rho` from the
/// opposite face and at most `BETA rho` from the best vertex.
const ALPHA: f64 = 0.25;
const BETA: f64 = 2.1;
/// Geometry-repair step length, as a fraction of `rho`.
const GAMMA: f64 = 0.5;
const DELTA: f64 = 1.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub rho_init: f64,
    pub tol: f64,
    pub max_evals: usize,
    pub threshold: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            rho_init: 0.5,
            tol: 1e-6,
            max_evals: 500,
            threshold: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.rho_init > 0.0 && self.rho_init.is_finite()) {
            return Err(Error::InvalidArgument("rho_init must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        if self.max_evals < dim + 2 {
            return Err(Error::InvalidArgument(format!(
                "max_evals = {} but at least dim + 2 = {} are needed",
                self.max_evals,
                dim + 2
            )));
        }
        if self.threshold.is_some_and(f64::is_nan) {
            return Err(Error::InvalidArgument("threshold is NaN".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Converged,
    MaxEvals,
    Threshold,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxEvals => "max-evals",
            Termination::Threshold => "threshold",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Initial,
    Probe,
    TrustRegion,
    Geometry,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    /// 1-based.
    pub index: usize,
    pub params: ParameterVector,
    pub energy: f64,
    pub kind: StepKind,
    /// For trust-region steps: whether the point improved on the best value.
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationTrace {
    pub evaluations: Vec<Evaluation>,
    pub termination: Termination,
}

impl OptimizationTrace {
    /// Lowest-energy evaluation (earliest on ties).
    pub fn best(&self) -> &Evaluation {
        self.evaluations
            .iter()
            .reduce(|a, b| if b.energy < a.energy { b } else { a })
            .expect("trace has at least one evaluation")
    }

    pub fn final_energy(&self) -> f64 {
        self.best().energy
    }

    pub fn len(&self) -> usize {
        self.evaluations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evaluations.is_empty()
    }

    /// `eval,energy,theta_0,...` with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let dim = self.evaluations.first().map_or(0, |e| e.params.len());
        let mut s = String::from("eval,energy");
        for j in 0..dim {
            s.push_str(&format!(",theta_{j}"));
        }
        s.push('\n');
        for e in &self.evaluations {
            s.push_str(&format!("{},{}", e.index, crate::format::sig12(e.energy)));
            for t in e.params.as_slice() {
                s.push(',');
                s.push_str(&crate::format::sig12(*t));
            }
            s.push('\n');
        }
        s
    }
}

struct Stop(Termination);

struct Recorder<F> {
    cost: F,
    evaluations: Vec<Evaluation>,
    max_evals: usize,
    threshold: Option<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Recorder<F> {
    fn eval(&mut self, x: &[f64], kind: StepKind, best: f64) -> Result<f64, Stop> {
        if self.evaluations.len() >= self.max_evals {
            return Err(Stop(Termination::MaxEvals));
        }
        let raw = (self.cost)(x);
        let f = if raw.is_nan() { f64::INFINITY } else { raw };
        self.evaluations.push(Evaluation {
            index: self.evaluations.len() + 1,
            params: ParameterVector::new(x.to_vec()),
            energy: raw,
            kind,
            accepted: kind == StepKind::TrustRegion && f < best,
        });
        if self.threshold.is_some_and(|t| f <= t) {
            return Err(Stop(Termination::Threshold));
        }
        Ok(f)
    }
}

/// Minimizes `cost` from `theta0`.
///
/// Evaluation 1 is `theta0` and evaluations `2..=dim + 1` are `theta0` with
/// coordinate `j - 2` raised by `rho_init`. The run stops once `rho` has
/// reached `tol` and no further progress is possible, when `cost` drops to
/// `threshold`, or after `max_evals` evaluations.
pub fn minimize<F>(cost: F, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = theta0.len();
    config.validate(dim)?;
    let mut rec = Recorder {
        cost,
        evaluations: Vec::new(),
        max_evals: config.max_evals,
        threshold: config.threshold,
    };
    let termination = match run(&mut rec, theta0, config) {
        Ok(()) => Termination::Converged,
        Err(Stop(t)) => t,
    };
    Ok(OptimizationTrace {
        evaluations: rec.evaluations,
        termination,
    })
}

fn run<F: FnMut(&[f64]) -> f64>(
    rec: &mut Recorder<F>,
    theta0: &[f64],
    config: &OptimizerConfig,
) -> Result<(), Stop> {
    let dim = theta0.len();
    let f0 = rec.eval(theta0, StepKind::Initial, f64::INFINITY)?;
    if dim == 0 {
        return Ok(());
    }
    let mut rho = config.rho_init;
    let mut verts: Vec<(Vec<f64>, f64)> = vec![(theta0.to_vec(), f0)];
    for j in 0..dim {
        let mut x = theta0.to_vec();
        x[j] += rho;
        let f = rec.eval(&x, StepKind::Probe, f64::INFINITY)?;
        verts.push((x, f));
    }

    let mut repair_geometry = false;
    loop {
        // Best vertex first; ties keep the earlier vertex.
        let best = (1..=dim).fold(0, |b, j| if verts[j].1 < verts[b].1 { j } else { b });
        verts.swap(0, best);
        let (base, fbase) = (verts[0].0.clone(), verts[0].1);

        let offsets: Vec<Vec<f64>> = verts[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let Some(inv) = invert(&offsets) else {
            // Degenerate simplex: rebuild it around the best point.
            for j in 0..dim {
                let mut x = base.clone();
                x[j] += rho;
                let f = rec.eval(&x, StepKind::Geometry, fbase)?;
                verts[j + 1] = (x, f);
            }
            continue;
        };
        // inv[i][j]: column j of the inverse is the normal of the face
        // opposite vertex j.
        let column = |j: usize| -> Vec<f64> { (0..dim).map(|i| inv[i][j]).collect() };
        let df: Vec<f64> = verts[1..].iter().map(|(_, f)| f - fbase).collect();
        let grad: Vec<f64> = (0..dim).map(|i| dot(&inv[i], &df)).collect();
        let gnorm = norm(&grad);

        let sigma: Vec<f64> = (0..dim).map(|j| 1.0 / norm(&column(j))).collect();
        let eta: Vec<f64> = offsets.iter().map(|o| norm(o)).collect();
        let acceptable =
            sigma.iter().all(|&s| s >= ALPHA * rho) && eta.iter().all(|&e| e <= BETA * rho);

        if repair_geometry || !(gnorm > 0.0 && gnorm.is_finite()) {
            if acceptable {
                if rho <= config.tol {
                    return Ok(());
                }
                rho *= 0.5;
                if rho <= 1.5 * config.tol {
                    rho = config.tol;
                }
                repair_geometry = true;
                continue;
            }
            // Replace the farthest vertex, or else the one closest to its
            // opposite face, with a point along that face's normal.
            let far = argmax(&eta);
            let l = if eta[far] > BETA * rho {
                far
            } else {
                argmax(&sigma.iter().map(|s| -s).collect::<Vec<_>>())
            };
            let mut dir = column(l);
            let scale = GAMMA * rho / norm(&dir);
            if dot(&dir, &grad) > 0.0 {
                dir.iter_mut().for_each(|d| *d = -*d);
            }
            let x: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + scale * d).collect();
            let f = rec.eval(&x, StepKind::Geometry, fbase)?;
            verts[l + 1] = (x, f);
            repair_geometry = false;
            continue;
        }

        let step: Vec<f64> = grad.iter().map(|g| -rho * g / gnorm).collect();
        let x: Vec<f64> = base.iter().zip(&step).map(|(b, s)| b + s).collect();
        let f = rec.eval(&x, StepKind::TrustRegion, fbase)?;
        let predicted = rho * gnorm;
        let actual = fbase - f;

        // Barycentric weights of the new point in the current simplex; the
        // weight of a vertex is the volume ratio after swapping it out.
        let lambda: Vec<f64> = (0..dim).map(|j| dot(&step, &column(j))).collect();
        let lambda_base = 1.0 - lambda.iter().sum::<f64>();
        let weight = |v: &[f64]| {
            let d = v
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            (d / (DELTA * rho)).powi(2).max(1.0)
        };
        if f < fbase {
            let mut drop = 0;
            let mut score = lambda_base.abs() * weight(&verts[0].0);
            for j in 0..dim {
                let s = lambda[j].abs() * weight(&verts[j + 1].0);
                if s > score {
                    score = s;
                    drop = j + 1;
                }
            }
            verts[drop] = (x, f);
        } else {
            let scores: Vec<f64> = (0..dim)
                .map(|j| lambda[j].abs() * weight(&verts[j + 1].0))
                .collect();
            let l = argmax(&scores);
            if scores[l] > 1.0 {
                verts[l + 1] = (x, f);
            }
        }
        repair_geometry = actual < POOR_RATIO * predicted;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn argmax(v: &[f64]) -> usize {
    (1..v.len()).fold(0, |b, j| if v[j] > v[b] { j } else { b })
}

/// Gauss-Jordan inverse with partial pivoting; `None` when (near) singular.
fn invert(rows: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = rows.len();
    let scale = rows.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(scale > 0.0 && scale.is_finite()) {
        return None;
    }
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        a[col].iter_mut().for_each(|x| *x /= p);
        inv[col].iter_mut().for_each(|x| *x /= p);
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                if factor != 0.0 {
                    for k in 0..n {
                        a[r][k] -= factor * a[col][k];
                        inv[r][k] -= factor * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn convex_quadratic_converges() {
        let trace = minimize(
            |t| t.iter().map(|x| x * x).sum(),
            &[1.0, 1.0],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(trace.final_energy() < 1e-8, "{}", trace.final_energy());
        assert_eq!(trace.termination, Termination::Converged);
    }

    #[test]
    fn rosenbrock_makes_progress() {
        let rosen = |t: &[f64]| (1.0 - t[0]).powi(2) + 100.0 * (t[1] - t[0] * t[0]).powi(2);
        let cfg = OptimizerConfig {
            max_evals: 5000,
            tol: 1e-8,
            ..Default::default()
        };
        let trace = minimize(rosen, &[-1.2, 1.0], &cfg).unwrap();
        // Linear models crawl along the valley; demand a large reduction from 24.2.
        assert!(trace.final_energy() < 0.05, "{}", trace.final_energy());
        assert!(trace.best().params.as_slice()[0] > 0.5);
    }

    #[test]
    fn constant_cost_keeps_initial_energy() {
        let trace = minimize(|_| 3.5, &[0.1, 0.2, 0.3], &OptimizerConfig::default()).unwrap();
        assert_eq!(trace.final_energy(), 3.5);
        assert_eq!(trace.best().index, 1);
        assert_eq!(trace.termination, Termination::Converged);
    }

    #[test]
    fn threshold_stops_immediately() {
        let cfg = OptimizerConfig {
            threshold: Some(0.0),
            ..Default::default()
        };
        let trace = minimize(|t| t[0].abs(), &[0.0, 1.0], &cfg).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.termination, Termination::Threshold);
    }

    #[test]
    fn max_evals_is_respected() {
        let cfg = OptimizerConfig {
            max_evals: 7,
            ..Default::default()
        };
        let trace = minimize(|t| t.iter().map(|x| x.sin()).sum(), &[0.3; 4], &cfg).unwrap();
        assert_eq!(trace.len(), 7);
        assert_eq!(trace.termination, Termination::MaxEvals);
    }

    #[test]
    fn config_validation() {
        let f = |_: &[f64]| 0.0;
        let bad = [
            OptimizerConfig {
                rho_init: 0.0,
                ..Default::default()
            },
            OptimizerConfig {
                tol: -1.0,
                ..Default::default()
            },
            OptimizerConfig {
                max_evals: 3,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(minimize(f, &[0.0, 0.0], &cfg).is_err());
        }
    }

    #[test]
    fn nan_costs_are_never_selected() {
        let trace = minimize(
            |t| {
                if t[0] > 0.2 {
                    f64::NAN
                } else {
                    (t[0] + 1.0).powi(2)
                }
            },
            &[0.0],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(trace.final_energy().abs() < 1e-8);
    }

    #[test]
    fn csv_layout() {
        let cfg = OptimizerConfig {
            max_evals: 4,
            ..Default::default()
        };
        let csv = minimize(|t| t[0] + 2.0 * t[1], &[0.0, 0.0], &cfg)
            .unwrap()
            .to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "eval,energy,theta_0,theta_1");
        assert_eq!(lines[1], "1,0,0,0");
        assert_eq!(lines[2], "2,0.5,0.5,0");
        assert_eq!(lines[3], "3,1,0,0.5");
    }

    proptest! {
        #[test]
        fn probe_pattern(
            theta in prop::collection::vec(-3.0f64..3.0, 1..6),
            rho in 0.01f64..1.0,
            shift in -2.0f64..2.0,
        ) {
            let cfg = OptimizerConfig { rho_init: rho, ..Default::default() };
            let trace = minimize(
                |t| t.iter().map(|x| (x - shift).powi(2)).sum::<f64>(),
                &theta,
                &cfg,
            ).unwrap();
            let evals = &trace.evaluations;
            prop_assert_eq!(evals[0].params.as_slice(), theta.as_slice());
            for j in 0..theta.len() {
                let p = evals[j + 1].params.as_slice();
                for (k, (a, b)) in p.iter().zip(&theta).enumerate() {
                    if k == j {
                        prop_assert_eq!(*a, b + rho);
                    } else {
                        prop_assert_eq!(a, b);
                    }
                }
            }
            for (i, e) in evals.iter().enumerate() {
                prop_assert_eq!(e.index, i + 1);
            }
            let min = evals.iter().map(|e| e.energy).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(trace.final_energy(), min);
        }

        #[test]
        fn accepted_steps_are_monotone(seed in 0u64..50) {
            let c = seed as f64 * 0.1;
            let trace = minimize(
                |t| (t[0] - c).powi(2) + 3.0 * (t[1] + c).powi(2) + (t[0] * t[1]).sin(),
                &[0.5, -0.5],
                &OptimizerConfig::default(),
            ).unwrap();
            let mut best = f64::INFINITY;
            for e in &trace.evaluations {
                if e.kind == StepKind::TrustRegion && e.accepted {
                    prop_assert!(e.energy < best);
                }
                best = best.min(e.energy);
            }
        }
    }
}
