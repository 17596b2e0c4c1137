//! Problem Hamiltonians: molecular fixtures, transverse-field Ising chains and
//! unweighted Max-Cut, plus dense exact diagonalization as the ground-truth
//! oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Observable, Pauli, PauliString, Term};
use crate::qstate::{StateVector, MAX_QUBITS};

/// Largest register accepted by [`exact_spectrum`].
pub const MAX_SPECTRUM_QUBITS: usize = 10;

pub const FIXTURE_NAMES: [&str; 2] = ["H2_075", "HeH+_100"];

/// Reduced two-qubit molecular Hamiltonians (Hartree).
pub fn molecule_fixture(name: &str) -> Result<Observable> {
    let pairs: &[(f64, &str)] = match name {
        "H2_075" => &[
            (-1.05540303, "II"),
            (0.38874759, "IZ"),
            (-0.38874759, "ZI"),
            (-0.01117714, "ZZ"),
            (0.18177154, "XX"),
        ],
        "HeH+_100" => &[
            (-3.04506092, "II"),
            (0.50258052, "IZ"),
            (0.11926278, "IX"),
            (-0.50258052, "ZI"),
            (0.11926278, "XI"),
            (-0.13894646, "ZZ"),
            (-0.11926145, "ZX"),
            (0.11926145, "XZ"),
            (0.11714671, "XX"),
        ],
        _ => {
            return Err(Error::UnknownFixture {
                name: name.to_string(),
                hint: format!(
                    "built-in molecules are {}; load other Hamiltonians from an observable file",
                    FIXTURE_NAMES.join(", ")
                ),
            })
        }
    };
    Observable::from_pairs(pairs)
}

/// Open chain `c_zz sum Z_i Z_{i+1} + c_x sum X_i`.
pub fn transverse_field_ising(n: usize, c_zz: f64, c_x: f64) -> Result<Observable> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "Ising chain length",
            value: n.to_string(),
            bound: "n >= 2",
        });
    }
    let mut terms = Vec::with_capacity(2 * n - 1);
    for i in 0..n - 1 {
        let mut letters = vec![Pauli::I; n];
        letters[i] = Pauli::Z;
        letters[i + 1] = Pauli::Z;
        terms.push(Term {
            coeff: c_zz,
            pauli: PauliString::new(letters)?,
        });
    }
    for i in 0..n {
        let mut letters = vec![Pauli::I; n];
        letters[i] = Pauli::X;
        terms.push(Term {
            coeff: c_x,
            pauli: PauliString::new(letters)?,
        });
    }
    Observable::new(n, terms)
}

/// `X + Y` on one qubit.
pub fn single_qubit_xy() -> Observable {
    Observable::from_pairs(&[(1.0, "X"), (1.0, "Y")]).expect("valid literal")
}

/// Named built-ins understood by the CLI.
pub fn named_observable(name: &str) -> Result<Observable> {
    match name {
        "xy1" => Ok(single_qubit_xy()),
        "ising_fig7" => transverse_field_ising(3, 0.04645122, 0.27498273),
        "ising_fig8" => transverse_field_ising(3, 0.61436456, 0.32435029),
        _ => molecule_fixture(name).map_err(|_| Error::UnknownFixture {
            name: name.to_string(),
            hint: "known fixtures: H2_075, HeH+_100, xy1, ising_fig7, ising_fig8".into(),
        }),
    }
}

/// Undirected simple graph with 0-based nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    seed: Option<u64>,
}

impl GraphSpec {
    /// Normalizes each edge to `u < v` and rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            let (u, v) = (u.min(v), u.max(v));
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop on node {u}")));
            }
            if v >= node_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) references a node >= {node_count}"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
            norm.push((u, v));
        }
        Ok(Self {
            node_count,
            edges: norm,
            seed: None,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Graph file: `nodes <N>` first, `#` comments, then one `u v` per line.
    pub fn to_text(&self, header: &[String]) -> String {
        let mut s = format!("nodes {}\n", self.node_count);
        for h in header {
            s.push_str(&format!("# {h}\n"));
        }
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines
            .next()
            .ok_or_else(|| Error::parse("line 1", "empty graph file"))?;
        let node_count = first
            .strip_prefix("nodes")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(format!("line {ln}"), "expected `nodes <N>`"))?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                let msg = if fields.len() == 3 {
                    "weighted edges are not supported".to_string()
                } else {
                    format!("expected `u v`, found {line:?}")
                };
                return Err(Error::parse(format!("line {ln}"), msg));
            }
            let parse = |f: &str| {
                f.parse::<usize>().map_err(|_| {
                    Error::parse(format!("line {ln}"), format!("bad node index {f:?}"))
                })
            };
            edges.push((parse(fields[0])?, parse(fields[1])?));
        }
        Self::new(node_count, edges)
    }
}

/// Each unordered pair `(u, v)`, `u < v` in lexicographic order, is kept
/// independently with probability `edge_probability`.
pub fn random_graph(node_count: usize, edge_probability: f64, seed: u64) -> Result<GraphSpec> {
    if node_count < 2 {
        return Err(Error::OutOfRange {
            what: "node count",
            value: node_count.to_string(),
            bound: "node_count >= 2",
        });
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::OutOfRange {
            what: "edge probability",
            value: edge_probability.to_string(),
            bound: "0 <= p <= 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..node_count {
        for v in u + 1..node_count {
            if rng.random::<f64>() < edge_probability {
                edges.push((u, v));
            }
        }
    }
    let mut g = GraphSpec::new(node_count, edges)?;
    g.seed = Some(seed);
    Ok(g)
}

/// Number of edges whose endpoints get different bits. `assignment[i]` is
/// node `i`.
pub fn cut_value(graph: &GraphSpec, assignment: &[bool]) -> Result<usize> {
    if assignment.len() != graph.node_count {
        return Err(Error::DimensionMismatch(format!(
            "assignment of length {} for {} nodes",
            assignment.len(),
            graph.node_count
        )));
    }
    Ok(graph
        .edges
        .iter()
        .filter(|(u, v)| assignment[*u] != assignment[*v])
        .count())
}

/// `sum_{(u,v) in E} Z_u Z_v`; node `i` maps to qubit `i + 1`.
pub fn maxcut_hamiltonian(graph: &GraphSpec) -> Result<Observable> {
    let n = graph.node_count;
    if n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            what: "Max-Cut node count",
            value: n.to_string(),
            bound: "n <= 12",
        });
    }
    let terms = graph
        .edges
        .iter()
        .map(|&(u, v)| {
            let mut letters = vec![Pauli::I; n];
            letters[u] = Pauli::Z;
            letters[v] = Pauli::Z;
            Ok(Term {
                coeff: 1.0,
                pauli: PauliString::new(letters)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let terms = if terms.is_empty() {
        vec![Term {
            coeff: 0.0,
            pauli: PauliString::identity(n)?,
        }]
    } else {
        terms
    };
    Observable::new(n, terms)
}

#[derive(Clone, Debug)]
pub struct ExactSpectrumResult {
    pub ground_energy: f64,
    pub ground_state: StateVector,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

/// Dense Hermitian diagonalization. Diagonal observables are read off
/// directly; real-valued matrices use the real symmetric solver.
pub fn exact_spectrum(obs: &Observable) -> Result<ExactSpectrumResult> {
    let n = obs.num_qubits();
    if n > MAX_SPECTRUM_QUBITS {
        return Err(Error::OutOfRange {
            what: "qubit count for exact diagonalization",
            value: n.to_string(),
            bound: "n <= 10",
        });
    }
    let dim = 1usize << n;

    if let Some(diag) = obs.diagonal() {
        let ground = argmin(&diag);
        let mut eigenvalues = diag.clone();
        eigenvalues.sort_by(f64::total_cmp);
        return Ok(ExactSpectrumResult {
            ground_energy: diag[ground],
            ground_state: StateVector::basis(n, ground)?,
            eigenvalues,
        });
    }

    let dense = obs.to_dense();
    let (values, ground_vec): (Vec<f64>, Vec<Complex64>) = if dense.iter().all(|z| z.im == 0.0) {
        let m = DMatrix::from_row_iterator(dim, dim, dense.iter().map(|z| z.re));
        let eig = m.symmetric_eigen();
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let g = argmin(&values);
        let v = eig
            .eigenvectors
            .column(g)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        (values, v)
    } else {
        let m = DMatrix::from_row_iterator(dim, dim, dense.iter().copied());
        let eig = m.symmetric_eigen();
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let g = argmin(&values);
        (values, eig.eigenvectors.column(g).iter().copied().collect())
    };
    let ground_energy = values[argmin(&values)];
    let mut eigenvalues = values;
    eigenvalues.sort_by(f64::total_cmp);
    Ok(ExactSpectrumResult {
        ground_energy,
        ground_state: StateVector::normalized(n, ground_vec)?,
        eigenvalues,
    })
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::build_full_mub_set;
    use std::f64::consts::SQRT_2;

    fn bits(n: usize, x: usize) -> Vec<bool> {
        (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect()
    }

    fn triangle() -> GraphSpec {
        GraphSpec::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn residual(obs: &Observable, r: &ExactSpectrumResult) -> f64 {
        let dim = r.ground_state.dim();
        let m = obs.to_dense();
        let v = r.ground_state.amplitudes();
        (0..dim)
            .map(|i| {
                let hv: Complex64 = (0..dim).map(|j| m[i * dim + j] * v[j]).sum();
                (hv - r.ground_energy * v[i]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn fixtures() {
        let h2 = molecule_fixture("H2_075").unwrap();
        assert_eq!(h2.terms().len(), 5);
        assert_eq!(h2.terms()[0].coeff, -1.05540303);
        assert_eq!(h2.terms()[0].pauli.to_string(), "II");

        let heh = molecule_fixture("HeH+_100").unwrap();
        assert_eq!(heh.terms().len(), 9);
        let xz = heh
            .terms()
            .iter()
            .find(|t| t.pauli.to_string() == "XZ")
            .unwrap();
        assert_eq!(xz.coeff, 0.11926145);

        let err = molecule_fixture("LiH").unwrap_err().to_string();
        assert!(err.contains("observable file"), "{err}");
    }

    #[test]
    fn ising_examples() {
        let weak = transverse_field_ising(3, 0.04645122, 0.27498273).unwrap();
        let labels: Vec<String> = weak.terms().iter().map(|t| t.pauli.to_string()).collect();
        assert_eq!(labels, ["ZZI", "IZZ", "XII", "IXI", "IIX"]);
        assert_eq!(weak.terms()[1].coeff, 0.04645122);
        assert_eq!(weak.terms()[4].coeff, 0.27498273);

        let strong = transverse_field_ising(3, 0.61436456, 0.32435029).unwrap();
        assert_eq!(strong.terms()[0].coeff, 0.61436456);
        assert_eq!(strong.terms()[2].coeff, 0.32435029);

        let zz = transverse_field_ising(2, 1.0, 0.0).unwrap();
        assert_eq!(zz.terms()[0].pauli.to_string(), "ZZ");
        assert!((exact_spectrum(&zz).unwrap().ground_energy + 1.0).abs() < 1e-12);

        assert!(transverse_field_ising(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn xy_examples() {
        let xy = single_qubit_xy();
        let spec = exact_spectrum(&xy).unwrap();
        // Closed form: eigenvalues of [[0, 1 - i], [1 + i, 0]] are +-|1 - i|.
        assert!((spec.eigenvalues[0] + SQRT_2).abs() < 1e-12);
        assert!((spec.eigenvalues[1] - SQRT_2).abs() < 1e-12);
        assert!(residual(&xy, &spec) < 1e-8);

        let set = build_full_mub_set(1).unwrap();
        assert!(xy.expectation(set.state(0, 0)).unwrap().abs() < 1e-15);
        assert!((xy.expectation(set.state(1, 1)).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn z_spectrum() {
        let z = Observable::from_pairs(&[(1.0, "Z")]).unwrap();
        assert_eq!(exact_spectrum(&z).unwrap().eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn molecule_ground_energies() {
        // Frozen from an independent numpy eigvalsh of the Kronecker-built matrices.
        let h2 = molecule_fixture("H2_075").unwrap();
        let r = exact_spectrum(&h2).unwrap();
        assert!(
            (r.ground_energy - H2_GROUND).abs() < 1e-10,
            "{}",
            r.ground_energy
        );
        assert!(residual(&h2, &r) < 1e-8);

        let heh = molecule_fixture("HeH+_100").unwrap();
        let r = exact_spectrum(&heh).unwrap();
        assert!(
            (r.ground_energy - HEH_GROUND).abs() < 1e-10,
            "{}",
            r.ground_energy
        );
        assert!(residual(&heh, &r) < 1e-8);
    }

    // In the XX-coupled {|01>, |10>} block of H2 the energies are
    // -1.05540303 + 0.01117714 -+ sqrt(0.77749518^2 + 0.18177154^2).
    const H2_GROUND: f64 = -1.842_686_689_086_094;
    const HEH_GROUND: f64 = -3.918_559_543_558_811;

    #[test]
    fn h2_ground_closed_form() {
        let e = -1.05540303 + 0.01117714 - (0.77749518f64.powi(2) + 0.18177154f64.powi(2)).sqrt();
        assert!((e - H2_GROUND).abs() < 1e-12);
    }

    #[test]
    fn complex_spectrum_path() {
        let obs = Observable::from_pairs(&[(0.7, "XY"), (0.2, "ZI"), (-0.4, "YZ")]).unwrap();
        let r = exact_spectrum(&obs).unwrap();
        assert!(residual(&obs, &r) < 1e-8);
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.ground_energy, r.eigenvalues[0]);
    }

    #[test]
    fn cut_value_examples() {
        let k3 = triangle();
        assert_eq!(cut_value(&k3, &[false, true, false]).unwrap(), 2);
        let best = (0..8)
            .map(|x| cut_value(&k3, &bits(3, x)).unwrap())
            .max()
            .unwrap();
        assert_eq!(best, 2);
        assert_eq!(cut_value(&k3, &[false; 3]).unwrap(), 0);
        let edge = GraphSpec::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(cut_value(&edge, &[false, true]).unwrap(), 1);
        assert!(cut_value(&edge, &[false]).is_err());
    }

    #[test]
    fn maxcut_examples() {
        let k3 = triangle();
        let h = maxcut_hamiltonian(&k3).unwrap();
        for x in 0..8 {
            let e = h.expectation(&StateVector::basis(3, x).unwrap()).unwrap();
            let cut = cut_value(&k3, &bits(3, x)).unwrap() as f64;
            assert_eq!(e, 3.0 - 2.0 * cut);
        }
        assert_eq!(
            h.expectation(&StateVector::basis(3, 0b010).unwrap())
                .unwrap(),
            -1.0
        );

        let edge = maxcut_hamiltonian(&GraphSpec::new(2, vec![(0, 1)]).unwrap()).unwrap();
        assert_eq!(
            edge.expectation(&StateVector::basis(2, 0).unwrap())
                .unwrap(),
            1.0
        );
        assert_eq!(
            edge.expectation(&StateVector::basis(2, 1).unwrap())
                .unwrap(),
            -1.0
        );

        assert!(maxcut_hamiltonian(&GraphSpec::new(13, vec![]).unwrap()).is_err());
    }

    #[test]
    fn random_graph_examples() {
        let full = random_graph(6, 1.0, 1).unwrap();
        assert_eq!(full.edges().len(), 15);
        assert!(random_graph(6, 0.0, 1).unwrap().edges().is_empty());
        assert_eq!(
            random_graph(8, 0.5, 42).unwrap(),
            random_graph(8, 0.5, 42).unwrap()
        );
        assert_eq!(random_graph(8, 0.5, 42).unwrap().seed(), Some(42));
        assert!(random_graph(8, 1.5, 42).is_err());
        assert!(random_graph(1, 0.5, 42).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(GraphSpec::new(3, vec![(1, 1)]).is_err());
        assert!(GraphSpec::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(GraphSpec::new(3, vec![(0, 3)]).is_err());
        assert_eq!(GraphSpec::new(3, vec![(2, 0)]).unwrap().edges(), &[(0, 2)]);
    }

    #[test]
    fn graph_text_round_trip_and_errors() {
        let g = random_graph(8, 0.5, 42).unwrap();
        let text = g.to_text(&["seed 42".into(), "edge_prob 0.5".into()]);
        assert!(text.starts_with("nodes 8\n# seed 42\n"));
        let back = GraphSpec::from_text(&text).unwrap();
        assert_eq!(back.edges(), g.edges());

        let err = GraphSpec::from_text("nodes 3\n0 1 2.5\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2") && err.contains("weighted"), "{err}");
        assert!(GraphSpec::from_text("vertices 3\n").is_err());
        assert!(GraphSpec::from_text("nodes 3\n0 x\n").is_err());
    }

    #[test]
    fn size_bound() {
        let obs = Observable::from_pairs(&[(1.0, "XXXXXXXXXXX")]).unwrap();
        assert!(exact_spectrum(&obs).is_err());
    }
}
