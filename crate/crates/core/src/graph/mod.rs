//! Weighted graphs `(V, E, ω, μ)` and the graph Laplacian
//!
//! `Δf(x) = Σ_{y∼x} (ω_xy / μ(x)) (f(y) − f(x))`.
//!
//! Graphs are finite, immutable after construction, and stored as a
//! compressed adjacency list in which every undirected edge appears once in
//! each endpoint's row. Vertices are dense indices `0..n`; the external ids
//! used in graph files are kept in a label table.

mod generate;
mod io;

use std::collections::VecDeque;
use std::ops::{Deref, DerefMut};

use serde::Serialize;

use crate::error::{Error, Result};

pub use generate::{generate_lattice, generate_path, generate_tree};
pub use io::{load_graph, save_graph};

/// Real-valued function on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Self {
        Self((0..n).map(f).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Deref for VertexFunction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for VertexFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// Integer coordinates of a `ℤ^N` truncation, one row of `dim` entries per
/// vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dim: usize,
    half_width: usize,
    coords: Vec<i64>,
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn coords(&self, x: usize) -> &[i64] {
        &self.coords[x * self.dim..(x + 1) * self.dim]
    }

    /// Vertex index of the given point, if it lies in the truncation.
    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if point.len() != self.dim {
            return None;
        }
        let l = self.half_width as i64;
        let side = 2 * l + 1;
        let mut idx = 0i64;
        for &c in point {
            if c.abs() > l {
                return None;
            }
            idx = idx * side + (c + l);
        }
        Some(idx as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    mu: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    labels: Vec<u64>,
    lattice: Option<Lattice>,
    boundary: Vec<bool>,
}

impl WeightedGraph {
    pub fn num_vertices(&self) -> usize {
        self.mu.len()
    }

    /// Number of unordered pairs `{x, y}`, `x ≠ y`, with `ω_xy > 0` in at
    /// least one direction.
    pub fn num_edges(&self) -> usize {
        let mut count = 0;
        for x in 0..self.num_vertices() {
            for (y, _) in self.neighbors(x) {
                if x < y || (x > y && self.weight(y, x) == 0.0) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn mu(&self, x: usize) -> f64 {
        self.mu[x]
    }

    pub fn mu_all(&self) -> &[f64] {
        &self.mu
    }

    pub fn label(&self, x: usize) -> u64 {
        self.labels[x]
    }

    pub fn index_of_label(&self, label: u64) -> Option<usize> {
        // Labels are strictly increasing in index order for every
        // constructor in this crate.
        self.labels.binary_search(&label).ok()
    }

    /// Stored row of `x`: pairs `(y, ω_xy)` with `ω_xy > 0`, sorted by `y`.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[x]..self.offsets[x + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// `ω_xy` as stored in the row of `x` (0 when absent).
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        let range = self.offsets[x]..self.offsets[x + 1];
        match self.targets[range.clone()].binary_search(&y) {
            Ok(k) => self.weights[range.start + k],
            Err(_) => 0.0,
        }
    }

    /// Undirected edges `(x, y, ω_xy)` with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |x| {
            self.neighbors(x)
                .filter(move |&(y, _)| x < y)
                .map(move |(y, w)| (x, y, w))
        })
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// Vertices on the truncation boundary of a generated family (missing
    /// neighbors compared to the infinite graph). Empty for graphs that are
    /// not truncations.
    pub fn boundary(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary.get(x).copied().unwrap_or(false)
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.iter().any(|&b| b)
    }

    /// Natural base vertex: the lattice origin, otherwise vertex 0.
    pub fn default_origin(&self) -> usize {
        match &self.lattice {
            Some(lat) => lat.index_of(&vec![0; lat.dim]).unwrap_or(0),
            None => 0,
        }
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(x))
        }
    }

    fn check_function(&self, f: &[f64]) -> Result<()> {
        if f.len() == self.num_vertices() {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected: self.num_vertices(),
                got: f.len(),
            })
        }
    }

    /// `Δf(x)` at a single vertex. `f` must cover every vertex.
    #[inline]
    pub fn laplacian_at(&self, f: &[f64], x: usize) -> f64 {
        let fx = f[x];
        let mut acc = 0.0;
        for k in self.offsets[x]..self.offsets[x + 1] {
            acc += self.weights[k] * (f[self.targets[k]] - fx);
        }
        acc / self.mu[x]
    }

    /// Writes `Δf` into `out`.
    pub fn laplacian_into(&self, f: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_function(f)?;
        self.check_function(out)?;
        for (x, o) in out.iter_mut().enumerate() {
            *o = self.laplacian_at(f, x);
        }
        Ok(())
    }

    /// `Σ_{y∼x} ω_xy / μ(x)`.
    pub fn weighted_degree(&self, x: usize) -> Result<f64> {
        self.check_vertex(x)?;
        let total: f64 = self.neighbors(x).map(|(_, w)| w).sum();
        Ok(total / self.mu[x])
    }

    /// Smallest admissible constant in `Σ_{y∼x} ω_xy ≤ C₁ μ(x)`.
    pub fn max_weighted_degree(&self) -> f64 {
        (0..self.num_vertices())
            .map(|x| self.neighbors(x).map(|(_, w)| w).sum::<f64>() / self.mu[x])
            .fold(0.0, f64::max)
    }

    /// Connected components under `ω_xy > 0` (either direction), as a
    /// component id per vertex and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.num_vertices();
        // Reverse rows so one-sided entries still connect.
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            for (y, _) in self.neighbors(x) {
                if y != x {
                    reverse[y].push(x);
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                let fwd = self.neighbors(x).map(|(y, _)| y);
                for y in fwd.chain(reverse[x].iter().copied()) {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }
}

/// `Δf` as a new vertex function.
pub fn laplacian_apply(g: &WeightedGraph, f: &[f64]) -> Result<VertexFunction> {
    let mut out = VertexFunction::zeros(g.num_vertices());
    g.laplacian_into(f, &mut out)?;
    Ok(out)
}

pub fn weighted_degree(g: &WeightedGraph, x: usize) -> Result<f64> {
    g.weighted_degree(x)
}

/// Incremental constructor. Accepts arbitrary (even invalid) weights so that
/// [`validate_graph`] can report on them; [`GraphBuilder::build`] refuses
/// anything that violates the weighted-graph axioms.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    mu: Vec<f64>,
    labels: Option<Vec<u64>>,
    entries: Vec<(usize, usize, f64)>,
    lattice: Option<Lattice>,
    boundary: Vec<bool>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(mu: Vec<f64>) -> Self {
        Self {
            mu,
            ..Self::default()
        }
    }

    pub fn add_vertex(&mut self, mu: f64) -> usize {
        self.mu.push(mu);
        self.mu.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.mu.len()
    }

    /// Sets `ω_xy = ω_yx = w`.
    pub fn add_edge(&mut self, x: usize, y: usize, w: f64) -> &mut Self {
        self.entries.push((x, y, w));
        if x != y {
            self.entries.push((y, x, w));
        }
        self
    }

    /// Sets `ω_xy = w` only.
    pub fn set_directed(&mut self, x: usize, y: usize, w: f64) -> &mut Self {
        self.entries.push((x, y, w));
        self
    }

    /// External ids, one per vertex, strictly increasing.
    pub fn labels(&mut self, labels: Vec<u64>) -> &mut Self {
        self.labels = Some(labels);
        self
    }

    pub(crate) fn lattice(&mut self, lattice: Lattice) -> &mut Self {
        self.lattice = Some(lattice);
        self
    }

    pub(crate) fn boundary(&mut self, boundary: Vec<bool>) -> &mut Self {
        self.boundary = boundary;
        self
    }

    /// Builds without checking the axioms. Repeated entries for the same
    /// ordered pair keep the last weight; zero weights are dropped.
    pub fn build_unchecked(self) -> Result<WeightedGraph> {
        let n = self.mu.len();
        let mut entries = self.entries;
        for &(x, y, _) in &entries {
            if x >= n {
                return Err(Error::UnknownVertex(x));
            }
            if y >= n {
                return Err(Error::UnknownVertex(y));
            }
        }
        // Stable sort keeps insertion order within a pair; keep the last.
        entries.sort_by_key(|&(x, y, _)| (x, y));
        let mut dedup: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for e in entries {
            match dedup.last_mut() {
                Some(last) if (last.0, last.1) == (e.0, e.1) => *last = e,
                _ => dedup.push(e),
            }
        }
        dedup.retain(|&(_, _, w)| w != 0.0);

        let mut offsets = vec![0usize; n + 1];
        for &(x, _, _) in &dedup {
            offsets[x + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = dedup.iter().map(|e| e.1).collect();
        let weights = dedup.iter().map(|e| e.2).collect();

        let labels = match self.labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::InvalidGraph(format!(
                        "{} labels for {} vertices",
                        l.len(),
                        n
                    )));
                }
                if l.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidGraph(
                        "labels must be strictly increasing".into(),
                    ));
                }
                l
            }
            None => (0..n as u64).collect(),
        };
        let boundary = if self.boundary.len() == n {
            self.boundary
        } else {
            vec![false; n]
        };

        Ok(WeightedGraph {
            mu: self.mu,
            offsets,
            targets,
            weights,
            labels,
            lattice: self.lattice,
            boundary,
        })
    }

    /// Builds and validates; any axiom violation is an error.
    pub fn build(self) -> Result<WeightedGraph> {
        let g = self.build_unchecked()?;
        let report = validate_graph(&g);
        if report.is_valid() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(report.to_string()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Loop { vertex: usize, weight: f64 },
    Asymmetry { x: usize, y: usize, forward: f64, backward: f64 },
    InvalidWeight { x: usize, y: usize, weight: f64 },
    NonpositiveMu { vertex: usize, mu: f64 },
    Disconnected { components: usize, representatives: Vec<usize> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            match v {
                Violation::Loop { vertex, weight } => {
                    write!(f, "loop at vertex {vertex} (ω = {weight})")?
                }
                Violation::Asymmetry { x, y, forward, backward } => {
                    write!(f, "asymmetric weight ω_{x},{y} = {forward} vs ω_{y},{x} = {backward}")?
                }
                Violation::InvalidWeight { x, y, weight } => {
                    write!(f, "invalid edge weight ω_{x},{y} = {weight}")?
                }
                Violation::NonpositiveMu { vertex, mu } => {
                    write!(f, "nonpositive μ({vertex}) = {mu}")?
                }
                Violation::Disconnected { components, .. } => {
                    write!(f, "disconnected: {components} components")?
                }
            }
        }
        Ok(())
    }
}

/// Lists every violated weighted-graph axiom. Violations are data, so this
/// never fails.
pub fn validate_graph(g: &WeightedGraph) -> ValidationReport {
    let mut violations = Vec::new();
    for x in 0..g.num_vertices() {
        let mu = g.mu(x);
        if !(mu > 0.0 && mu.is_finite()) {
            violations.push(Violation::NonpositiveMu { vertex: x, mu });
        }
    }
    for x in 0..g.num_vertices() {
        for (y, w) in g.neighbors(x) {
            if !(w >= 0.0 && w.is_finite()) {
                violations.push(Violation::InvalidWeight { x, y, weight: w });
            }
            if x == y {
                violations.push(Violation::Loop { vertex: x, weight: w });
                continue;
            }
            let back = g.weight(y, x);
            // Report each asymmetric pair once.
            if back != w && (x < y || back == 0.0) {
                violations.push(Violation::Asymmetry {
                    x,
                    y,
                    forward: w,
                    backward: back,
                });
            }
        }
    }
    let (comp, count) = g.components();
    if count > 1 {
        let mut representatives = vec![usize::MAX; count];
        for (x, &c) in comp.iter().enumerate() {
            if representatives[c] == usize::MAX {
                representatives[c] = x;
            }
        }
        violations.push(Violation::Disconnected {
            components: count,
            representatives,
        });
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 3]);
        b.add_edge(0, 1, 1.0).add_edge(1, 2, 1.0);
        b.build().unwrap()
    }

    #[test]
    fn path_is_valid() {
        assert!(validate_graph(&path3()).is_valid());
    }

    #[test]
    fn loop_is_reported() {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 3]);
        b.add_edge(0, 1, 1.0).add_edge(1, 2, 1.0).add_edge(0, 0, 1.0);
        let g = b.build_unchecked().unwrap();
        let report = validate_graph(&g);
        assert!(report
            .violations
            .contains(&Violation::Loop { vertex: 0, weight: 1.0 }));
    }

    #[test]
    fn two_disjoint_edges_are_two_components() {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 4]);
        b.add_edge(0, 1, 1.0).add_edge(2, 3, 1.0);
        let report = validate_graph(&b.build_unchecked().unwrap());
        assert_eq!(
            report.violations,
            vec![Violation::Disconnected {
                components: 2,
                representatives: vec![0, 2]
            }]
        );
    }

    #[test]
    fn asymmetry_and_bad_mu_are_reported() {
        let mut b = GraphBuilder::with_vertices(vec![1.0, -1.0]);
        b.set_directed(0, 1, 1.0).set_directed(1, 0, 2.0);
        let report = validate_graph(&b.build_unchecked().unwrap());
        assert_eq!(report.violations.len(), 2);
        assert!(matches!(report.violations[0], Violation::NonpositiveMu { vertex: 1, .. }));
        assert!(matches!(report.violations[1], Violation::Asymmetry { x: 0, y: 1, .. }));

        let mut b = GraphBuilder::with_vertices(vec![1.0, 1.0]);
        b.set_directed(0, 1, 1.0);
        let report = validate_graph(&b.build_unchecked().unwrap());
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn build_rejects_invalid() {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 2]);
        b.add_edge(0, 0, 1.0).add_edge(0, 1, 1.0);
        assert!(matches!(b.build(), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn laplacian_of_bump_on_path() {
        let lap = laplacian_apply(&path3(), &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(&*lap, &[1.0, -2.0, 1.0]);
    }

    #[test]
    fn laplacian_with_weights() {
        let mut b = GraphBuilder::with_vertices(vec![1.0, 4.0]);
        b.add_edge(0, 1, 2.0);
        let g = b.build().unwrap();
        let lap = laplacian_apply(&g, &[1.0, 0.0]).unwrap();
        assert_eq!(&*lap, &[-2.0, 0.5]);
        assert_eq!(g.weighted_degree(1).unwrap(), 0.5);
        assert_eq!(g.weighted_degree(0).unwrap(), 2.0);
    }

    #[test]
    fn laplacian_annihilates_constants() {
        let g = generate_lattice(2, 3).unwrap();
        let lap = laplacian_apply(&g, &vec![3.25; g.num_vertices()]).unwrap();
        assert!(lap.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_domain_mismatch() {
        assert!(matches!(
            laplacian_apply(&path3(), &[1.0, 2.0]),
            Err(Error::DomainMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn weighted_degree_cases() {
        let g = generate_lattice(2, 2).unwrap();
        let origin = g.default_origin();
        assert_eq!(g.weighted_degree(origin).unwrap(), 4.0);
        assert_eq!(g.max_weighted_degree(), 4.0);

        let single = GraphBuilder::with_vertices(vec![1.0]).build().unwrap();
        assert_eq!(single.weighted_degree(0).unwrap(), 0.0);
        assert!(matches!(single.weighted_degree(3), Err(Error::UnknownVertex(3))));
    }

    #[test]
    fn duplicate_entries_keep_last() {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 2]);
        b.add_edge(0, 1, 1.0).add_edge(0, 1, 3.0);
        let g = b.build().unwrap();
        assert_eq!(g.weight(0, 1), 3.0);
        assert_eq!(g.num_edges(), 1);
    }
}
