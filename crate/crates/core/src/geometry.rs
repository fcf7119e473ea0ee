//! Pseudo-metrics on a graph, jump size, metric balls, the Laplacian of the
//! distance function, and an empirical check of the structural hypotheses
//! (bounded weighted degree, finite jump size, decay of `Δd(·, x₀)`).

use std::collections::{BTreeMap, VecDeque};
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Dense symmetric distance table over the vertices of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMetric {
    n: usize,
    d: Vec<f64>,
}

impl TableMetric {
    /// Builds from a full `n × n` matrix (row-major) and verifies the
    /// pseudo-metric axioms exhaustively.
    pub fn from_matrix(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "table has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        let t = Self { n, d };
        t.verify()?;
        Ok(t)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.n + y]
    }

    fn verify(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            if self.get(x, x) != 0.0 {
                return Err(Error::InvalidMetric(format!("d({x},{x}) = {} ≠ 0", self.get(x, x))));
            }
            for y in 0..n {
                let v = self.get(x, y);
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) = {v}")));
                }
                if v != self.get(y, x) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) ≠ d({y},{x})")));
                }
            }
        }
        for z in 0..n {
            for x in 0..n {
                let dxz = self.get(x, z);
                for y in 0..n {
                    let lhs = self.get(x, y);
                    let rhs = dxz + self.get(z, y);
                    if lhs > rhs * (1.0 + 1e-12) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({x},{y}) = {lhs} > d({x},{z}) + d({z},{y}) = {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reads `d <id1> <id2> <value>` lines (ids are graph labels). A pair
    /// given in one order fills the other; pairs given in neither order are
    /// an error, except the diagonal.
    pub fn load<R: BufRead>(reader: R, g: &WeightedGraph) -> Result<Self> {
        let n = g.num_vertices();
        let mut given: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let content = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            match toks.as_slice() {
                [] => {}
                ["d", a, b, v] => {
                    let mut idx = [0usize; 2];
                    for (slot, tok) in idx.iter_mut().zip([a, b]) {
                        let id: u64 = tok.parse().map_err(|_| perr(format!("bad id {tok:?}")))?;
                        *slot = g
                            .index_of_label(id)
                            .ok_or_else(|| perr(format!("unknown vertex id {id}")))?;
                    }
                    let v: f64 = v.parse().map_err(|_| perr(format!("bad distance {v:?}")))?;
                    let key = (idx[0].min(idx[1]), idx[0].max(idx[1]));
                    if let Some(&prev) = given.get(&key) {
                        if prev != v {
                            return Err(perr(format!("conflicting distance {v} vs {prev}")));
                        }
                    }
                    given.insert(key, v);
                }
                _ => return Err(perr(format!("malformed record {:?}", content.trim()))),
            }
        }
        let mut d = vec![0.0; n * n];
        for x in 0..n {
            for y in x + 1..n {
                let v = *given.get(&(x, y)).ok_or_else(|| {
                    Error::InvalidMetric(format!(
                        "no distance given between ids {} and {}",
                        g.label(x),
                        g.label(y)
                    ))
                })?;
                d[x * n + y] = v;
                d[y * n + x] = v;
            }
            if let Some(&v) = given.get(&(x, x)) {
                d[x * n + x] = v;
            }
        }
        Self::from_matrix(n, d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Minimum number of edges on a path.
    GraphDistance,
    /// `ℓ¹` distance between lattice coordinates.
    LatticeL1,
    /// Euclidean distance between lattice coordinates.
    LatticeL2,
    Table(TableMetric),
}

/// Distances `d(x₀, ·)` to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    origin: usize,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn from_values(origin: usize, values: Vec<f64>) -> Self {
        Self { origin, values }
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    #[inline]
    pub fn get(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `Δ d(·, x₀)` at `x`.
    pub fn laplacian_at(&self, g: &WeightedGraph, x: usize) -> f64 {
        g.laplacian_at(&self.values, x)
    }

    /// Distance from `x₀` to the nearest truncation-boundary vertex;
    /// infinite when the graph is not a truncation.
    pub fn boundary_clearance(&self, g: &WeightedGraph) -> f64 {
        g.boundary()
            .iter()
            .zip(&self.values)
            .filter(|(&b, _)| b)
            .map(|(_, &d)| d)
            .fold(f64::INFINITY, f64::min)
    }
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::GraphDistance => "graph",
            Metric::LatticeL1 => "l1",
            Metric::LatticeL2 => "l2",
            Metric::Table(_) => "table",
        }
    }

    fn check_support(&self, g: &WeightedGraph) -> Result<()> {
        match self {
            Metric::LatticeL1 | Metric::LatticeL2 if g.lattice().is_none() => {
                Err(Error::MetricUnsupported { metric: self.name() })
            }
            Metric::Table(t) if t.num_vertices() != g.num_vertices() => Err(Error::InvalidMetric(
                format!("table covers {} vertices, graph has {}", t.num_vertices(), g.num_vertices()),
            )),
            _ => Ok(()),
        }
    }

    #[inline]
    fn coord_distance(&self, a: &[i64], b: &[i64]) -> f64 {
        match self {
            Metric::LatticeL1 => a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum::<i64>() as f64,
            _ => (a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<i64>() as f64).sqrt(),
        }
    }

    pub fn distance_field(&self, g: &WeightedGraph, x0: usize) -> Result<DistanceField> {
        g.check_vertex(x0)?;
        self.check_support(g)?;
        let n = g.num_vertices();
        let values = match self {
            Metric::GraphDistance => {
                let mut dist = vec![usize::MAX; n];
                dist[x0] = 0;
                let mut queue = VecDeque::from([x0]);
                while let Some(x) = queue.pop_front() {
                    for (y, _) in g.neighbors(x) {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            queue.push_back(y);
                        }
                    }
                }
                if let Some(x) = dist.iter().position(|&d| d == usize::MAX) {
                    return Err(Error::Disconnected(x));
                }
                dist.into_iter().map(|d| d as f64).collect()
            }
            Metric::LatticeL1 | Metric::LatticeL2 => {
                let lat = g.lattice().expect("checked above");
                let c0 = lat.coords(x0);
                (0..n).map(|x| self.coord_distance(c0, lat.coords(x))).collect()
            }
            Metric::Table(t) => (0..n).map(|x| t.get(x0, x)).collect(),
        };
        Ok(DistanceField { origin: x0, values })
    }

    pub fn distance(&self, g: &WeightedGraph, x: usize, y: usize) -> Result<f64> {
        g.check_vertex(x)?;
        g.check_vertex(y)?;
        self.check_support(g)?;
        Ok(match self {
            Metric::GraphDistance => self.distance_field(g, x)?.get(y),
            Metric::LatticeL1 | Metric::LatticeL2 => {
                let lat = g.lattice().expect("checked above");
                self.coord_distance(lat.coords(x), lat.coords(y))
            }
            Metric::Table(t) => t.get(x, y),
        })
    }

    /// Distance from every vertex to the nearest truncation-boundary vertex
    /// (all infinite when the graph has no boundary).
    pub fn boundary_distances(&self, g: &WeightedGraph) -> Result<Vec<f64>> {
        self.check_support(g)?;
        let n = g.num_vertices();
        if !g.has_boundary() {
            return Ok(vec![f64::INFINITY; n]);
        }
        Ok(match self {
            Metric::LatticeL1 | Metric::LatticeL2 => {
                // The nearest boundary point is reached along a single axis.
                let lat = g.lattice().expect("checked above");
                let l = lat.half_width() as i64;
                (0..n)
                    .map(|x| lat.coords(x).iter().map(|c| l - c.abs()).min().unwrap_or(0) as f64)
                    .collect()
            }
            Metric::GraphDistance => {
                let mut dist = vec![usize::MAX; n];
                let mut queue = VecDeque::new();
                for x in (0..n).filter(|&x| g.is_boundary(x)) {
                    dist[x] = 0;
                    queue.push_back(x);
                }
                while let Some(x) = queue.pop_front() {
                    for (y, _) in g.neighbors(x) {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            queue.push_back(y);
                        }
                    }
                }
                dist.into_iter()
                    .map(|d| if d == usize::MAX { f64::INFINITY } else { d as f64 })
                    .collect()
            }
            Metric::Table(t) => {
                let bnd: Vec<usize> = (0..n).filter(|&x| g.is_boundary(x)).collect();
                (0..n)
                    .map(|x| bnd.iter().map(|&b| t.get(x, b)).fold(f64::INFINITY, f64::min))
                    .collect()
            }
        })
    }
}

pub fn distance(m: &Metric, g: &WeightedGraph, x: usize, y: usize) -> Result<f64> {
    m.distance(g, x, y)
}

/// `sup { d(x, y) : x ∼ y }`.
pub fn jump_size(m: &Metric, g: &WeightedGraph) -> Result<f64> {
    m.check_support(g)?;
    if g.num_edges() == 0 {
        return Err(Error::NoEdges);
    }
    if *m == Metric::GraphDistance {
        return Ok(1.0);
    }
    let mut j: f64 = 0.0;
    for x in 0..g.num_vertices() {
        for (y, _) in g.neighbors(x) {
            j = j.max(m.distance(g, x, y)?);
        }
    }
    Ok(j)
}

/// Closed ball `{y : d(x₀, y) ≤ R}` by full scan, in index order.
pub fn ball(m: &Metric, g: &WeightedGraph, x0: usize, radius: f64) -> Result<Vec<usize>> {
    Ok(ball_in_field(&m.distance_field(g, x0)?, radius))
}

pub fn ball_in_field(field: &DistanceField, radius: f64) -> Vec<usize> {
    field
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d <= radius)
        .map(|(x, _)| x)
        .collect()
}

/// `Δ d(·, x₀)` evaluated at `x`.
pub fn laplacian_of_distance(m: &Metric, g: &WeightedGraph, x0: usize, x: usize) -> Result<f64> {
    g.check_vertex(x)?;
    Ok(m.distance_field(g, x0)?.laplacian_at(g, x))
}

/// How the decay constant `C₂` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum C2Policy {
    /// Smallest constant that fits every scanned vertex; no violations.
    Empirical,
    /// User-supplied constant.
    Fixed { value: f64 },
    /// `slack ×` the smallest constant fitting the innermost shell
    /// `R0 < d ≤ 2 R0`; exposes constants that must grow with the radius.
    InnerShell { slack: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionOptions {
    pub include_boundary: bool,
    pub c2: C2Policy,
}

impl Default for AssumptionOptions {
    fn default() -> Self {
        Self {
            include_boundary: false,
            c2: C2Policy::Empirical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayViolation {
    pub vertex: usize,
    pub distance: f64,
    pub observed: f64,
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionAReport {
    #[serde(rename = "C1")]
    pub c1: f64,
    pub j: f64,
    pub alpha: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    pub violations: Vec<DecayViolation>,
    pub excluded_boundary: Vec<usize>,
    /// Smallest constant fitting the scan, regardless of policy.
    pub c2_empirical: f64,
    pub c2_policy: C2Policy,
    pub scanned: usize,
    /// Finiteness of balls cannot be decided on a finite carrier.
    pub finite_balls: &'static str,
}

/// Degree bound, jump size and decay of `Δd` on a finite graph. Vertices
/// within jump-size distance of the truncation boundary are excluded from
/// the `C₂` scan unless `opts.include_boundary` is set.
pub fn assumption_a_report(
    m: &Metric,
    g: &WeightedGraph,
    x0: usize,
    alpha: f64,
    r0: f64,
    opts: AssumptionOptions,
) -> Result<AssumptionAReport> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} not in [0, 1]")));
    }
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!("R0 = {r0} must be positive")));
    }
    let field = m.distance_field(g, x0)?;
    let j = jump_size(m, g)?;
    let c1 = g.max_weighted_degree();
    let to_boundary = m.boundary_distances(g)?;

    let mut excluded_boundary = Vec::new();
    let mut scan = Vec::new();
    for (x, &gap) in to_boundary.iter().enumerate() {
        let near_boundary = gap <= j;
        if near_boundary {
            excluded_boundary.push(x);
        }
        if field.get(x) > r0 && (opts.include_boundary || !near_boundary) {
            let d = field.get(x);
            scan.push((x, d, field.laplacian_at(g, x)));
        }
    }
    if scan.is_empty() {
        return Err(Error::EmptyScan { r0 });
    }
    let scaled = |d: f64, lap: f64| lap * d.powf(alpha);
    let c2_empirical = scan
        .iter()
        .map(|&(_, d, lap)| scaled(d, lap))
        .fold(0.0, f64::max);
    let c2 = match opts.c2 {
        C2Policy::Empirical => c2_empirical,
        C2Policy::Fixed { value } => value,
        C2Policy::InnerShell { slack } => {
            slack
                * scan
                    .iter()
                    .filter(|&&(_, d, _)| d <= 2.0 * r0)
                    .map(|&(_, d, lap)| scaled(d, lap))
                    .fold(0.0, f64::max)
        }
    };
    let violations = if matches!(opts.c2, C2Policy::Empirical) {
        Vec::new()
    } else {
        scan.iter()
            .filter_map(|&(x, d, lap)| {
                let allowed = c2 / d.powf(alpha);
                (lap > allowed + 1e-12 * allowed.abs().max(1.0)).then_some(DecayViolation {
                    vertex: x,
                    distance: d,
                    observed: lap,
                    allowed,
                })
            })
            .collect()
    };
    Ok(AssumptionAReport {
        c1,
        j,
        alpha,
        c2,
        r0,
        violations,
        excluded_boundary,
        c2_empirical,
        c2_policy: opts.c2,
        scanned: scan.len(),
        finite_balls: "not checkable on truncation",
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellMax {
    pub inner_radius: f64,
    pub max_positive_laplacian: f64,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaFit {
    pub alpha_hat: f64,
    pub c2_hat: f64,
    /// Unclamped fitted decay exponent.
    pub raw_alpha: f64,
    pub shells: Vec<ShellMax>,
    /// Inner radii of shells dropped because they were empty or had
    /// `max Δd⁺ = 0`.
    pub excluded: Vec<f64>,
}

/// Fits `max_{d ∈ [r, 2r)} Δd⁺ ≈ C₂ r^{−α}` over geometric shells starting at
/// `R0`, on vertices away from the truncation boundary.
pub fn fit_alpha(m: &Metric, g: &WeightedGraph, x0: usize, r0: f64) -> Result<AlphaFit> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!("R0 = {r0} must be positive")));
    }
    let field = m.distance_field(g, x0)?;
    let j = jump_size(m, g)?;
    let to_boundary = m.boundary_distances(g)?;
    let interior: Vec<usize> = (0..g.num_vertices())
        .filter(|&x| to_boundary[x] > j && field.get(x) >= r0)
        .collect();
    let reach = interior.iter().map(|&x| field.get(x)).fold(0.0, f64::max);

    let mut shells = Vec::new();
    let mut excluded = Vec::new();
    let mut r = r0;
    while r <= reach {
        let mut max_lap: f64 = 0.0;
        let mut count = 0;
        for &x in &interior {
            let d = field.get(x);
            if d >= r && d < 2.0 * r {
                count += 1;
                max_lap = max_lap.max(field.laplacian_at(g, x));
            }
        }
        if count > 0 && max_lap > 0.0 {
            shells.push(ShellMax {
                inner_radius: r,
                max_positive_laplacian: max_lap,
                vertices: count,
            });
        } else {
            excluded.push(r);
        }
        r *= 2.0;
    }
    if shells.len() < 3 {
        return Err(Error::TooFewShells {
            usable: shells.len(),
            excluded,
        });
    }
    let pts: Vec<(f64, f64)> = shells
        .iter()
        .map(|s| (s.inner_radius.ln(), s.max_positive_laplacian.ln()))
        .collect();
    let (slope, intercept) = crate::fit::least_squares_line(&pts);
    Ok(AlphaFit {
        alpha_hat: (-slope).clamp(0.0, 1.0),
        c2_hat: intercept.exp(),
        raw_alpha: -slope,
        shells,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lattice, generate_path, GraphBuilder};

    fn at(g: &WeightedGraph, p: &[i64]) -> usize {
        g.lattice().unwrap().index_of(p).unwrap()
    }

    #[test]
    fn distances() {
        let g = generate_lattice(2, 5).unwrap();
        let (o, p) = (at(&g, &[0, 0]), at(&g, &[3, 4]));
        assert_eq!(Metric::LatticeL2.distance(&g, o, p).unwrap(), 5.0);
        assert_eq!(Metric::LatticeL1.distance(&g, o, p).unwrap(), 7.0);
        assert_eq!(Metric::GraphDistance.distance(&g, o, p).unwrap(), 7.0);
        for m in [Metric::LatticeL1, Metric::LatticeL2, Metric::GraphDistance] {
            assert_eq!(m.distance(&g, p, p).unwrap(), 0.0);
        }
        let path = generate_path(3).unwrap();
        assert_eq!(Metric::GraphDistance.distance(&path, 0, 2).unwrap(), 2.0);
        assert!(matches!(
            Metric::LatticeL2.distance(&path, 0, 2),
            Err(Error::MetricUnsupported { .. })
        ));
        assert!(matches!(Metric::GraphDistance.distance(&path, 0, 9), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn graph_distance_needs_connectivity() {
        let mut b = GraphBuilder::with_vertices(vec![1.0; 3]);
        b.add_edge(0, 1, 1.0);
        let g = b.build_unchecked().unwrap();
        assert!(matches!(
            Metric::GraphDistance.distance_field(&g, 0),
            Err(Error::Disconnected(2))
        ));
    }

    #[test]
    fn jump_sizes() {
        let g = generate_lattice(2, 3).unwrap();
        assert_eq!(jump_size(&Metric::LatticeL2, &g).unwrap(), 1.0);
        assert_eq!(jump_size(&Metric::LatticeL1, &g).unwrap(), 1.0);

        let mut b = GraphBuilder::with_vertices(vec![1.0; 2]);
        b.add_edge(0, 1, 1.0);
        let edge = b.build().unwrap();
        let t = TableMetric::from_matrix(2, vec![0.0, 2.5, 2.5, 0.0]).unwrap();
        assert_eq!(jump_size(&Metric::Table(t), &edge).unwrap(), 2.5);

        let single = GraphBuilder::with_vertices(vec![1.0]).build().unwrap();
        assert!(matches!(jump_size(&Metric::GraphDistance, &single), Err(Error::NoEdges)));
    }

    #[test]
    fn balls() {
        let g = generate_lattice(1, 5).unwrap();
        let o = g.default_origin();
        let b = ball(&Metric::LatticeL2, &g, o, 2.0).unwrap();
        let coords: Vec<i64> = b.iter().map(|&x| g.lattice().unwrap().coords(x)[0]).collect();
        assert_eq!(coords, vec![-2, -1, 0, 1, 2]);
        assert_eq!(ball(&Metric::LatticeL2, &g, o, 0.0).unwrap(), vec![o]);

        // Lattice points with x² + y² ≤ 2.25.
        let g2 = generate_lattice(2, 4).unwrap();
        let b = ball(&Metric::LatticeL2, &g2, g2.default_origin(), 1.5).unwrap();
        let brute = (-4i64..=4)
            .flat_map(|x| (-4i64..=4).map(move |y| (x, y)))
            .filter(|&(x, y)| ((x * x + y * y) as f64) <= 2.25)
            .count();
        assert_eq!(brute, 9);
        assert_eq!(b.len(), brute);
    }

    #[test]
    fn laplacian_of_distance_examples() {
        let g = generate_lattice(2, 6).unwrap();
        let o = g.default_origin();
        let x = at(&g, &[3, 0]);
        // (4,0): +1, (2,0): −1, (3,±1): +1 each.
        assert_eq!(laplacian_of_distance(&Metric::LatticeL1, &g, o, x).unwrap(), 2.0);
        let expected = 4.0 + 2.0 + 2.0 * 10f64.sqrt() - 4.0 * 3.0;
        let got = laplacian_of_distance(&Metric::LatticeL2, &g, o, x).unwrap();
        assert!((got - expected).abs() < 1e-14);
        assert!((got - 0.32456).abs() < 1e-5);
        for m in [Metric::LatticeL1, Metric::LatticeL2, Metric::GraphDistance] {
            assert_eq!(laplacian_of_distance(&m, &g, o, o).unwrap(), 4.0);
        }
    }

    #[test]
    fn table_metric_validation() {
        assert!(TableMetric::from_matrix(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(TableMetric::from_matrix(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2
        let bad = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0];
        assert!(TableMetric::from_matrix(3, bad).is_err());
        // Pseudo-metric: distinct points at distance zero are fine.
        let ok = vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        assert!(TableMetric::from_matrix(3, ok).is_ok());
    }

    #[test]
    fn table_metric_load() {
        let g = generate_path(3).unwrap();
        let t = TableMetric::load("d 0 1 1.5\nd 2 1 1.0 # reversed\nd 0 2 2.5\n".as_bytes(), &g)
            .unwrap();
        assert_eq!(t.get(1, 0), 1.5);
        assert_eq!(t.get(1, 2), 1.0);
        assert!(TableMetric::load("d 0 1 1.5\n".as_bytes(), &g).is_err());
        assert!(TableMetric::load("d 0 1 1.5\nd 1 0 1.0\n".as_bytes(), &g).is_err());
    }

    #[test]
    fn assumption_report_path_graph_distance() {
        let g = generate_lattice(1, 20).unwrap();
        let o = g.default_origin();
        let r = assumption_a_report(&Metric::GraphDistance, &g, o, 0.0, 1.0, Default::default())
            .unwrap();
        assert_eq!(r.c2, 0.0);
        assert_eq!(r.c1, 2.0);
        assert_eq!(r.j, 1.0);
        // Endpoints and their neighbours sit in the boundary layer.
        assert_eq!(r.excluded_boundary.len(), 4);

        let r = assumption_a_report(&Metric::LatticeL2, &g, o, 1.0, 1.0, Default::default())
            .unwrap();
        assert_eq!(r.c2, 0.0);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn assumption_report_errors() {
        let g = generate_lattice(1, 3).unwrap();
        let o = g.default_origin();
        assert!(matches!(
            assumption_a_report(&Metric::LatticeL2, &g, o, 1.0, 50.0, Default::default()),
            Err(Error::EmptyScan { .. })
        ));
        assert!(assumption_a_report(&Metric::LatticeL2, &g, o, 1.5, 1.0, Default::default()).is_err());
    }

    #[test]
    fn fixed_c2_reports_violations() {
        let g = generate_lattice(2, 12).unwrap();
        let o = g.default_origin();
        let opts = AssumptionOptions {
            include_boundary: false,
            c2: C2Policy::Fixed { value: 1.0 },
        };
        let r = assumption_a_report(&Metric::LatticeL1, &g, o, 1.0, 2.0, opts).unwrap();
        assert!(!r.violations.is_empty());
        assert!(r.violations.iter().all(|v| v.observed == 2.0));
    }

    #[test]
    fn fit_alpha_degenerate() {
        let g = generate_lattice(1, 200).unwrap();
        assert!(matches!(
            fit_alpha(&Metric::GraphDistance, &g, g.default_origin(), 1.0),
            Err(Error::TooFewShells { usable: 0, .. })
        ));
    }
}
