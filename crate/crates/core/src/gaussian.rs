//! Linear-Gaussian AMP models `x = Bᵀx + ε`.
//!
//! `B[u][v]` is the coefficient of the directed edge `u -> v`. The noise `ε`
//! is independent across chain components; inside a component its precision
//! matrix is zero exactly where the undirected edge is missing.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::causal::{enumerate_adjusting_sets_with, AdjustLimits, AdjustMode, AdjustingSet};
use crate::error::{Error, Result};
use crate::graph::ChainGraph;
use crate::nodeset::NodeSet;
use crate::strong::StrongLabeling;

/// Relative tolerance for the noise-precision sparsity check.
const SPARSITY_TOL: f64 = 1e-8;
/// Eigenvalue ratio below which a regression design counts as singular.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearGaussianModel {
    graph: ChainGraph,
    coefficients: BTreeMap<(usize, usize), f64>,
    noise: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    /// Coefficient magnitudes are drawn from `[coef_min, coef_max]` with a random sign.
    pub coef_min: f64,
    pub coef_max: f64,
    /// Scale of the off-diagonal noise precision entries.
    pub noise_strength: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { coef_min: 0.3, coef_max: 1.0, noise_strength: 0.5 }
    }
}

impl LinearGaussianModel {
    /// Checks that `coefficients` are keyed by exactly the directed edges and
    /// that `noise` is symmetric positive definite, block diagonal over the
    /// chain components, with the undirected-edge sparsity in its inverse.
    pub fn new(graph: ChainGraph, coefficients: BTreeMap<(usize, usize), f64>, noise: DMatrix<f64>) -> Result<Self> {
        let n = graph.n();
        let directed = graph.directed_edges();
        if coefficients.len() != directed.len() || directed.iter().any(|e| !coefficients.contains_key(e)) {
            return Err(Error::InvalidModel("coefficients must match the directed edges".into()));
        }
        if noise.nrows() != n || noise.ncols() != n {
            return Err(Error::InvalidModel(format!("noise must be {n}x{n}")));
        }
        if (&noise - noise.transpose()).abs().max() > 1e-12 * noise.abs().max().max(1.0) {
            return Err(Error::InvalidModel("noise covariance is not symmetric".into()));
        }
        let parts = graph.chain_components();
        for i in 0..n {
            for j in 0..n {
                if parts.component_of[i] != parts.component_of[j] && noise[(i, j)] != 0.0 {
                    return Err(Error::InvalidModel("noise is correlated across chain components".into()));
                }
            }
        }
        if noise.clone().cholesky().is_none() {
            return Err(Error::InvalidModel("noise covariance is not positive definite".into()));
        }
        let precision = noise.clone().try_inverse().ok_or(Error::SingularSystem)?;
        let scale = precision.abs().max();
        for i in 0..n {
            for j in 0..n {
                let same = parts.component_of[i] == parts.component_of[j];
                if i != j && same && !graph.has_undirected(i, j) && precision[(i, j)].abs() > SPARSITY_TOL * scale {
                    return Err(Error::InvalidModel(format!(
                        "noise precision is nonzero between non-adjacent {} and {}",
                        graph.name(i),
                        graph.name(j)
                    )));
                }
            }
        }
        Ok(LinearGaussianModel { graph, coefficients, noise })
    }

    pub fn graph(&self) -> &ChainGraph {
        &self.graph
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.coefficients
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.noise
    }

    pub fn coefficient(&self, from: usize, to: usize) -> Option<f64> {
        self.coefficients.get(&(from, to)).copied()
    }

    /// `B` with `B[(u, v)]` the coefficient of `u -> v`.
    pub fn coefficient_matrix(&self) -> DMatrix<f64> {
        let n = self.graph.n();
        let mut b = DMatrix::zeros(n, n);
        for (&(u, v), &c) in &self.coefficients {
            b[(u, v)] = c;
        }
        b
    }
}

/// Deterministic random model for `g`.
pub fn random_model(g: &ChainGraph, seed: u64, config: &ModelConfig) -> LinearGaussianModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut signed = |lo: f64, hi: f64| {
        let mag = rng.random_range(lo..=hi);
        if rng.random_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let coefficients: BTreeMap<_, _> =
        g.directed_edges().into_iter().map(|e| (e, signed(config.coef_min, config.coef_max))).collect();

    let n = g.n();
    let mut precision = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.undirected_edges() {
        let w = signed(0.2 * config.noise_strength, config.noise_strength);
        precision[(u, v)] = w;
        precision[(v, u)] = w;
    }
    for i in 0..n {
        let off: f64 = precision.row(i).iter().map(|x| x.abs()).sum();
        precision[(i, i)] = 1.0 + off;
    }
    let mut noise = precision.try_inverse().expect("diagonally dominant matrices are invertible");
    // zero the exact cross-component entries left by rounding
    let parts = g.chain_components();
    for i in 0..n {
        for j in 0..n {
            if parts.component_of[i] != parts.component_of[j] {
                noise[(i, j)] = 0.0;
            }
        }
    }
    noise = (&noise + noise.transpose()) * 0.5;
    LinearGaussianModel::new(g.clone(), coefficients, noise).expect("generated model is valid")
}

/// A covariance matrix with its variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    pub names: Arc<[String]>,
    pub matrix: DMatrix<f64>,
}

impl Covariance {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.matrix[(self.index_of(a)?, self.index_of(b)?)])
    }
}

/// `Σ = (I - Bᵀ)⁻¹ Σ_ε (I - Bᵀ)⁻ᵀ`.
pub fn population_covariance(m: &LinearGaussianModel) -> Result<Covariance> {
    let n = m.graph.n();
    let a =
        (DMatrix::identity(n, n) - m.coefficient_matrix().transpose()).try_inverse().ok_or(Error::SingularSystem)?;
    let sigma = &a * &m.noise * a.transpose();
    Ok(Covariance { names: m.graph.names().clone(), matrix: (&sigma + sigma.transpose()) * 0.5 })
}

/// Observations in rows, one column per named variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub data: DMatrix<f64>,
}

impl Dataset {
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
        let mut rdr = csv::Reader::from_reader(reader);
        let names: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
        if names.is_empty() {
            return Err(Error::Dataset("missing header row".into()));
        }
        let mut values = Vec::new();
        let mut rows = 0;
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != names.len() {
                return Err(Error::Dataset(format!(
                    "row {} has {} fields, expected {}",
                    i + 1,
                    rec.len(),
                    names.len()
                )));
            }
            for field in rec.iter() {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Dataset(format!("row {}: cannot parse {field:?} as a number", i + 1)))?;
                values.push(v);
            }
            rows += 1;
        }
        Ok(Dataset { data: DMatrix::from_row_slice(rows, names.len(), &values), names })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.names)?;
        for row in self.data.row_iter() {
            w.write_record(row.iter().map(|v| format!("{v:?}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Unbiased sample covariance with columns reordered to `names`.
    pub fn covariance_over(&self, names: &Arc<[String]>) -> Result<Covariance> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| {
                self.names
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| Error::Dataset(format!("dataset has no column {n}")))
            })
            .collect::<Result<_>>()?;
        let rows = self.data.nrows();
        if rows < 2 {
            return Err(Error::Dataset("at least two rows are needed for a covariance".into()));
        }
        let x = self.data.select_columns(&cols);
        let means = x.row_mean();
        let mut centered = x;
        for mut row in centered.row_iter_mut() {
            row -= &means;
        }
        let cov = centered.transpose() * &centered / (rows - 1) as f64;
        Ok(Covariance { names: names.clone(), matrix: cov })
    }
}

/// Draws `n` observations by visiting chain components in order.
pub fn sample(m: &LinearGaussianModel, n: usize, seed: u64) -> Dataset {
    let g = &m.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = g.chain_components();
    let factors: Vec<(Vec<usize>, DMatrix<f64>)> = parts
        .components
        .iter()
        .map(|&comp| {
            let idx: Vec<usize> = comp.iter().collect();
            let block = m.noise.select_rows(&idx).select_columns(&idx);
            let l = block.cholesky().expect("noise blocks are positive definite").l();
            (idx, l)
        })
        .collect();
    let mut data = DMatrix::zeros(n, g.n());
    for r in 0..n {
        for (idx, l) in &factors {
            let z = DVector::from_fn(idx.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
            let eps = l * z;
            for (k, &v) in idx.iter().enumerate() {
                let mean: f64 = g.parents(v).iter().map(|p| m.coefficients[&(p, v)] * data[(r, p)]).sum();
                data[(r, v)] = mean + eps[k];
            }
        }
    }
    Dataset { names: g.names().to_vec(), data }
}

/// Sum over directed paths `x -> ... -> y` of coefficient products.
pub fn true_effect(m: &LinearGaussianModel, x: usize, y: usize) -> Result<f64> {
    let g = &m.graph;
    if x >= g.n() || y >= g.n() {
        return Err(Error::UnknownNode(format!("#{}", x.max(y))));
    }
    if x == y {
        return Err(Error::InvalidQuery("cause and effect must differ".into()));
    }
    // effect of x on each node, filled in chain-component order
    let mut effect = vec![0.0; g.n()];
    effect[x] = 1.0;
    for comp in g.chain_components().components {
        for v in comp {
            if v != x {
                effect[v] = g.parents(v).iter().map(|p| effect[p] * m.coefficients[&(p, v)]).sum();
            }
        }
    }
    Ok(effect[y])
}

/// Coefficient of `x` in the regression of `y` on `{x} ∪ z`; zero when `y ∈ z`.
pub fn adjusted_effect(cov: &Covariance, x: usize, y: usize, z: NodeSet) -> Result<f64> {
    let n = cov.names.len();
    if x >= n || y >= n || !z.is_subset(NodeSet::full(n)) {
        return Err(Error::InvalidQuery("index out of range".into()));
    }
    if x == y || z.contains(x) {
        return Err(Error::InvalidQuery("need x != y and x outside the adjusting set".into()));
    }
    if z.contains(y) {
        return Ok(0.0);
    }
    let cols: Vec<usize> = std::iter::once(x).chain(z.iter()).collect();
    let sxx = cov.matrix.select_rows(&cols).select_columns(&cols);
    let sxy = DVector::from_iterator(cols.len(), cols.iter().map(|&c| cov.matrix[(c, y)]));

    let eig = sxx.clone().symmetric_eigen();
    let (imin, &lmin) =
        eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("design has at least one column");
    let lmax = eig.eigenvalues.amax();
    let well_posed = lmin > SINGULAR_TOL * lmax.max(f64::MIN_POSITIVE);
    if !well_posed {
        let v = eig.eigenvectors.column(imin);
        let involved =
            cols.iter().enumerate().filter(|&(k, _)| v[k].abs() > 1e-6).map(|(_, &c)| cov.names[c].clone()).collect();
        return Err(Error::SingularRegression(involved));
    }
    let beta = sxx.cholesky().ok_or(Error::SingularSystem)?.solve(&sxy);
    Ok(beta[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectBoundReport {
    pub lower: f64,
    pub upper: f64,
    pub entries: Vec<(AdjustingSet, f64)>,
    pub mode: AdjustMode,
    pub truth: Option<f64>,
}

impl EffectBoundReport {
    pub fn covers(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }
}

/// Evaluates every adjusting set produced by `mode` on `cov`.
pub fn bound_effect(
    cov: &Covariance,
    l: &StrongLabeling,
    x: usize,
    y: usize,
    mode: AdjustMode,
    limits: AdjustLimits,
) -> Result<EffectBoundReport> {
    if cov.names != *l.graph.names() {
        return Err(Error::NodeSetMismatch);
    }
    if x == y {
        return Err(Error::InvalidQuery("cause and effect must differ".into()));
    }
    let sets = enumerate_adjusting_sets_with(l, x, mode, limits)?;
    let mut entries = Vec::with_capacity(sets.len());
    for s in sets {
        entries.push((s, adjusted_effect(cov, x, y, s.set)?));
    }
    let lower = entries.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let upper = entries.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(EffectBoundReport { lower, upper, entries, mode, truth: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::adjusting_set;
    use crate::io::parse_compact;
    use crate::strong::label_graph;

    fn chain_model() -> LinearGaussianModel {
        let g = parse_compact("A->B B->C").unwrap();
        let coefs = BTreeMap::from([((0, 1), 0.5), ((1, 2), 0.5)]);
        LinearGaussianModel::new(g, coefs, DMatrix::identity(3, 3)).unwrap()
    }

    #[test]
    fn chain_covariance() {
        let cov = population_covariance(&chain_model()).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(cov.get("A", "A").unwrap(), 1.0));
        assert!(close(cov.get("B", "B").unwrap(), 1.25));
        assert!(close(cov.get("C", "C").unwrap(), 1.3125));
        assert!(close(cov.get("A", "C").unwrap(), 0.25));
    }

    #[test]
    fn chain_effects() {
        let m = chain_model();
        let cov = population_covariance(&m).unwrap();
        assert_eq!(true_effect(&m, 0, 2).unwrap(), 0.25);
        assert_eq!(true_effect(&m, 2, 0).unwrap(), 0.0);
        assert!((adjusted_effect(&cov, 0, 2, NodeSet::EMPTY).unwrap() - 0.25).abs() < 1e-12);
        assert!(adjusted_effect(&cov, 0, 2, NodeSet::singleton(1)).unwrap().abs() < 1e-12);
        assert_eq!(adjusted_effect(&cov, 1, 2, NodeSet::singleton(2)).unwrap(), 0.0);
        assert!(adjusted_effect(&cov, 0, 2, NodeSet::singleton(0)).is_err());
    }

    #[test]
    fn undirected_edges_carry_no_effect() {
        let g = parse_compact("A--B").unwrap();
        let m = random_model(&g, 3, &ModelConfig::default());
        assert_eq!(true_effect(&m, 0, 1).unwrap(), 0.0);
        assert!(m.noise()[(0, 1)] != 0.0);
        let cov = population_covariance(&m).unwrap();
        let z = adjusting_set(&g, 0).unwrap();
        assert_eq!(adjusted_effect(&cov, 0, 1, z).unwrap(), 0.0);
    }

    #[test]
    fn random_models_are_deterministic() {
        let g = parse_compact("A->B B--C D").unwrap();
        let cfg = ModelConfig::default();
        assert_eq!(random_model(&g, 11, &cfg), random_model(&g, 11, &cfg));
        assert_ne!(random_model(&g, 11, &cfg), random_model(&g, 12, &cfg));
        let empty = parse_compact("A B").unwrap();
        let m = random_model(&empty, 1, &cfg);
        assert!(m.coefficients().is_empty());
        assert_eq!(m.noise()[(0, 1)], 0.0);
    }

    #[test]
    fn model_validation() {
        let g = parse_compact("A->B C").unwrap();
        let bad = LinearGaussianModel::new(g.clone(), BTreeMap::new(), DMatrix::identity(3, 3));
        assert!(matches!(bad, Err(Error::InvalidModel(_))));
        let mut noise = DMatrix::identity(3, 3);
        noise[(0, 2)] = 0.3;
        noise[(2, 0)] = 0.3;
        let bad = LinearGaussianModel::new(g, BTreeMap::from([((0, 1), 1.0)]), noise);
        assert!(matches!(bad, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn sampling_matches_population() {
        let m = chain_model();
        let d = sample(&m, 200_000, 5);
        let cov = d.covariance_over(m.graph().names()).unwrap();
        assert!((cov.get("A", "C").unwrap() - 0.25).abs() < 0.02);
        assert_eq!(sample(&m, 1, 9).rows(), 1);
        assert_eq!(sample(&m, 10, 9), sample(&m, 10, 9));
    }

    #[test]
    fn csv_round_trip() {
        let d = sample(&chain_model(), 5, 2);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let back = Dataset::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, d);
        assert!(Dataset::read_csv("A,B\n1,x\n".as_bytes()).is_err());
    }

    #[test]
    fn singular_regression_names_columns() {
        let names: Arc<[String]> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let matrix = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.5, 1.0, 1.0, 0.5, 0.5, 0.5, 1.0]);
        let cov = Covariance { names, matrix };
        match adjusted_effect(&cov, 0, 2, NodeSet::singleton(1)) {
            Err(Error::SingularRegression(cols)) => assert_eq!(cols, ["A", "B"]),
            other => panic!("expected a singular design, got {other:?}"),
        }
    }

    #[test]
    fn bounds_for_a_single_undirected_edge() {
        let g = parse_compact("A->B").unwrap();
        let m = random_model(&g, 4, &ModelConfig::default());
        let beta = m.coefficient(0, 1).unwrap();
        let cov = population_covariance(&m).unwrap();
        let l = label_graph(&g).unwrap();
        let r = bound_effect(&cov, &l, 0, 1, AdjustMode::MaxOriented, AdjustLimits::default()).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert!((r.lower - beta.min(0.0)).abs() < 1e-12);
        assert!((r.upper - beta.max(0.0)).abs() < 1e-12);
        assert!(r.covers(beta, 1e-12));
    }
}
