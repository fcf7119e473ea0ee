//! Explicit leapfrog integration of
//! `u_tt = Δu + h₁|v|^p`, `v_tt = Δv + h₂|u|^q` on a finite graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutoffs::TestFunction;
use crate::error::{Error, Result};
use crate::geometry::DistanceField;
use crate::graph::{VertexFunction, WeightedGraph};
use crate::potential::Potential;

pub const DEFAULT_SAFETY: f64 = 0.5;
pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e8;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;
const EDGELESS_DT: f64 = 0.1;
const PAR_CHUNK: usize = 2048;

/// `safety · 2/√λ̂` with `λ̂ = 4 max_x deg_ω(x)/μ(x)`, twice the Gershgorin
/// bound on the spectrum of `−Δ`; 0.1 for a graph without edges.
pub fn cfl_dt(g: &WeightedGraph, safety: f64) -> f64 {
    let lambda = 4.0 * g.max_weighted_degree();
    if lambda > 0.0 {
        safety * 2.0 / lambda.sqrt()
    } else {
        EDGELESS_DT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `h₁|v|^p` drives `u` and `h₂|u|^q` drives `v`.
    #[default]
    Coupled,
    /// `h₁|u|^p` drives `u` and `h₂|v|^q` drives `v`.
    Uncoupled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub u0: VertexFunction,
    pub u1: VertexFunction,
    pub v0: VertexFunction,
    pub v1: VertexFunction,
}

impl InitialData {
    pub fn zeros(n: usize) -> Self {
        Self {
            u0: VertexFunction::zeros(n),
            u1: VertexFunction::zeros(n),
            v0: VertexFunction::zeros(n),
            v1: VertexFunction::zeros(n),
        }
    }

    /// Same position and velocity for both fields.
    pub fn symmetric(position: VertexFunction, velocity: VertexFunction) -> Self {
        Self {
            u0: position.clone(),
            u1: velocity.clone(),
            v0: position,
            v1: velocity,
        }
    }

    /// Largest distance from `x₀` at which any datum is nonzero.
    pub fn support_radius(&self, field: &DistanceField) -> f64 {
        (0..self.u0.len())
            .filter(|&x| [&self.u0, &self.u1, &self.v0, &self.v1].iter().any(|f| f[x] != 0.0))
            .map(|x| field.get(x))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct WaveSystemProblem<'a> {
    pub graph: &'a WeightedGraph,
    /// Distances from `x₀`, used by radial potentials.
    pub field: &'a DistanceField,
    pub h1: Potential,
    pub h2: Potential,
    pub p: f64,
    pub q: f64,
    pub data: InitialData,
    pub dt: f64,
    pub horizon: f64,
    pub blowup_threshold: f64,
    pub coupling: Coupling,
    pub max_steps: usize,
}

impl<'a> WaveSystemProblem<'a> {
    /// Unit potentials, `dt` at half the stability bound, threshold `1e8`.
    pub fn new(
        graph: &'a WeightedGraph,
        field: &'a DistanceField,
        p: f64,
        q: f64,
        data: InitialData,
        horizon: f64,
    ) -> Self {
        Self {
            graph,
            field,
            h1: Potential::one(),
            h2: Potential::one(),
            p,
            q,
            data,
            dt: cfl_dt(graph, DEFAULT_SAFETY),
            horizon,
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            coupling: Coupling::Coupled,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.graph.num_vertices();
        if self.field.values().len() != n {
            return Err(Error::DomainMismatch {
                expected: n,
                got: self.field.values().len(),
            });
        }
        for f in [&self.data.u0, &self.data.u1, &self.data.v0, &self.data.v1] {
            if f.len() != n {
                return Err(Error::DomainMismatch {
                    expected: n,
                    got: f.len(),
                });
            }
        }
        self.h1.check_domain(n)?;
        self.h2.check_domain(n)?;
        if !(self.p > 1.0 && self.q > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need p, q > 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if !(self.dt > 0.0 && self.horizon > 0.0 && self.blowup_threshold > 0.0) {
            return Err(Error::InvalidParameter(
                "dt, horizon and blow-up threshold must be positive".into(),
            ));
        }
        if self.graph.num_edges() > 0 {
            let bound = cfl_dt(self.graph, 1.0);
            if self.dt > bound {
                return Err(Error::Unstable { dt: self.dt, bound });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrajectoryStatus {
    /// `reached_horizon` is false when the step cap stopped the run.
    Completed { reached_horizon: bool },
    /// First step whose sup-norm exceeded the threshold or was nonfinite.
    Blowup { t_b: f64, step: usize, vertex: usize },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    /// `u^n` for `n = 0, 1, …`; the offending step of a blow-up is not
    /// stored.
    pub u: Vec<VertexFunction>,
    pub v: Vec<VertexFunction>,
    pub u1: VertexFunction,
    pub v1: VertexFunction,
    pub status: TrajectoryStatus,
    pub threshold: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Last stored time.
    pub fn end_time(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match self.status {
            TrajectoryStatus::Blowup { t_b, .. } => Some(t_b),
            TrajectoryStatus::Completed { .. } => None,
        }
    }
}

/// Vertex maximizing `max(|u|, |v|)`, with nonfinite entries ranking first.
fn sup_vertex(u: &[f64], v: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for x in 0..u.len() {
        let m = u[x].abs().max(v[x].abs());
        let m = if m.is_finite() { m } else { f64::INFINITY };
        if m > best.1 {
            best = (x, m);
        }
    }
    best
}

struct Stepper<'p, 'a> {
    prob: &'p WaveSystemProblem<'a>,
}

impl Stepper<'_, '_> {
    /// Acceleration `Δf + h|source|^e` at one vertex.
    #[inline]
    fn accel(&self, f: &[f64], src: &[f64], h: &Potential, e: f64, x: usize, t: f64) -> f64 {
        let d = self.prob.field.get(x);
        let s = src[x].abs();
        let forcing = if s == 0.0 { 0.0 } else { h.eval(x, d, t) * s.powf(e) };
        self.prob.graph.laplacian_at(f, x) + forcing
    }

    /// Writes `2f − f_prev + dt²·accel` (or the Taylor start-up when
    /// `prev` is the initial velocity) into `out`.
    #[allow(clippy::too_many_arguments)]
    fn advance(
        &self,
        f: &[f64],
        prev: &[f64],
        src: &[f64],
        h: &Potential,
        e: f64,
        t: f64,
        startup: bool,
        out: &mut [f64],
    ) {
        let dt = self.prob.dt;
        let dt2 = dt * dt;
        out.par_iter_mut().with_min_len(PAR_CHUNK).enumerate().for_each(|(x, o)| {
            let a = self.accel(f, src, h, e, x, t);
            *o = if startup {
                f[x] + dt * prev[x] + 0.5 * dt2 * a
            } else {
                2.0 * f[x] - prev[x] + dt2 * a
            };
        });
    }

    fn step(&self, u: &[f64], u_prev: &[f64], v: &[f64], v_prev: &[f64], t: f64, startup: bool) -> (Vec<f64>, Vec<f64>) {
        let prob = self.prob;
        let n = u.len();
        let (src_u, src_v) = match prob.coupling {
            Coupling::Coupled => (v, u),
            Coupling::Uncoupled => (u, v),
        };
        let mut nu = vec![0.0; n];
        let mut nv = vec![0.0; n];
        self.advance(u, u_prev, src_u, &prob.h1, prob.p, t, startup, &mut nu);
        self.advance(v, v_prev, src_v, &prob.h2, prob.q, t, startup, &mut nv);
        (nu, nv)
    }
}

/// Runs the leapfrog scheme up to the horizon, the step cap or the first
/// step above the blow-up threshold.
pub fn simulate(prob: &WaveSystemProblem) -> Result<Trajectory> {
    prob.validate()?;
    let dt = prob.dt;
    let total = (prob.horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let steps = total.min(prob.max_steps);
    let stepper = Stepper { prob };

    let mut traj = Trajectory {
        dt,
        u: Vec::with_capacity(steps.min(1 << 16) + 1),
        v: Vec::with_capacity(steps.min(1 << 16) + 1),
        u1: prob.data.u1.clone(),
        v1: prob.data.v1.clone(),
        status: TrajectoryStatus::Completed {
            reached_horizon: steps == total,
        },
        threshold: prob.blowup_threshold,
    };

    let check = |u: &[f64], v: &[f64], n: usize| -> Option<TrajectoryStatus> {
        let (vertex, m) = sup_vertex(u, v);
        (m > prob.blowup_threshold).then_some(TrajectoryStatus::Blowup {
            t_b: n as f64 * dt,
            step: n,
            vertex,
        })
    };

    if let Some(s) = check(&prob.data.u0, &prob.data.v0, 0) {
        traj.status = s;
        return Ok(traj);
    }
    traj.u.push(prob.data.u0.clone());
    traj.v.push(prob.data.v0.clone());

    for n in 1..=steps {
        let t_prev = (n - 1) as f64 * dt;
        let (nu, nv) = {
            let u = &traj.u[n - 1];
            let v = &traj.v[n - 1];
            if n == 1 {
                stepper.step(u, &prob.data.u1, v, &prob.data.v1, t_prev, true)
            } else {
                stepper.step(u, &traj.u[n - 2], v, &traj.v[n - 2], t_prev, false)
            }
        };
        if let Some(s) = check(&nu, &nv, n) {
            traj.status = s;
            return Ok(traj);
        }
        traj.u.push(nu.into());
        traj.v.push(nv.into());
    }
    Ok(traj)
}

/// Which equation of the pair is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    /// `u` tested, sourced by `v` under the coupled system.
    #[default]
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakTerms {
    /// `∫Σ u φ_tt μ dt`.
    pub dtt: f64,
    /// `−∫Σ Δu φ μ dt`.
    pub laplacian: f64,
    /// `Σ u₀ φ_t(·, 0) μ`.
    pub u0: f64,
    /// `−Σ u₁ φ(·, 0) μ`.
    pub u1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakFormReport {
    pub field: Field,
    pub lhs: f64,
    /// `∫Σ h |source|^e φ μ dt`.
    pub rhs: f64,
    pub residual: f64,
    pub terms: WeakTerms,
    pub dt: f64,
    pub test_function: TestFunction,
    pub time_support: f64,
    /// Largest absolute integrand scale, for relative tolerances.
    pub scale: f64,
}

/// Time quadrature for the weak-form integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakQuadrature {
    /// Composite trapezoid for every term.
    Trapezoid,
    /// Every integral is taken of the trajectory's piecewise-linear
    /// interpolant in time: the `u φ_tt` term in closed form (second
    /// differences of `φ`), the others by three-point Gauss-Legendre per
    /// step. Plain trapezoid converges erratically because `φ_tt` of a C²
    /// cut-off has kinks.
    #[default]
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeakOptions {
    pub field: Field,
    pub coupling: Coupling,
    pub quadrature: WeakQuadrature,
}

/// Three-point Gauss-Legendre nodes and weights on `[0, 1]`.
const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

struct WeakContext<'a> {
    g: &'a WeightedGraph,
    field: &'a DistanceField,
    tf: &'a TestFunction,
    h: &'a Potential,
    exponent: f64,
    fs: &'a [VertexFunction],
    srcs: &'a [VertexFunction],
    dt: f64,
    last: usize,
}

impl WeakContext<'_> {
    #[inline]
    fn forcing(&self, x: usize, d: f64, t: f64, src: f64) -> f64 {
        let s = src.abs();
        if s == 0.0 {
            0.0
        } else {
            self.h.eval(x, d, t) * s.powf(self.exponent)
        }
    }

    /// Weighted contributions `[u φ_tt, −Δu φ, h|src|^e φ, scale]` at grid
    /// time `k`.
    fn trapezoid_step(&self, k: usize) -> Result<[f64; 4]> {
        let dt = self.dt;
        let t = k as f64 * dt;
        let w = if k == 0 || k == self.last { 0.5 * dt } else { dt };
        let (f, src) = (&self.fs[k], &self.srcs[k]);
        let mut acc = [0.0; 4];
        for x in 0..f.len() {
            let d = self.field.get(x);
            let jet = self.tf.eval(d, t)?;
            if jet.value == 0.0 && jet.d2 == 0.0 {
                continue;
            }
            let mu = self.g.mu(x);
            let lap = self.g.laplacian_at(f, x);
            let forcing = self.forcing(x, d, t, src[x]);
            acc[0] += w * f[x] * jet.d2 * mu;
            acc[1] -= w * lap * jet.value * mu;
            acc[2] += w * forcing * jet.value * mu;
            acc[3] = acc[3].max(
                (f[x] * jet.d2).abs().max((lap * jet.value).abs()).max((forcing * jet.value).abs()) * mu,
            );
        }
        Ok(acc)
    }

    /// The `u φ_tt` weight of sample `k` plus the interval `[t_k, t_{k+1}]`
    /// for the other terms. Test functions are nonincreasing in time, so a
    /// vertex with `φ(t_{k−1}) = 0` contributes nothing.
    fn product_step(&self, k: usize) -> Result<[f64; 4]> {
        let dt = self.dt;
        let t = k as f64 * dt;
        let f = &self.fs[k];
        let interval = k < self.last;
        let mut acc = [0.0; 4];
        for x in 0..f.len() {
            let d = self.field.get(x);
            let prev = if k > 0 { self.tf.eval(d, t - dt)?.value } else { f64::INFINITY };
            if prev == 0.0 {
                continue;
            }
            let jet = self.tf.eval(d, t)?;
            let next = self.tf.eval(d, t + dt)?.value;
            let mu = self.g.mu(x);
            let weight_tt = if k == 0 {
                (next - jet.value) / dt - jet.d1
            } else {
                (next - 2.0 * jet.value + prev) / dt
            };
            acc[0] += f[x] * weight_tt * mu;
            if !interval || jet.value == 0.0 {
                continue;
            }
            let f1 = &self.fs[k + 1];
            let (s0, s1) = (self.srcs[k][x], self.srcs[k + 1][x]);
            let (l0, l1) = (self.g.laplacian_at(f, x), self.g.laplacian_at(f1, x));
            for &(theta, w) in &GAUSS3 {
                let tq = t + theta * dt;
                let phi = self.tf.eval(d, tq)?.value;
                if phi == 0.0 {
                    continue;
                }
                let lap = (1.0 - theta) * l0 + theta * l1;
                let forcing = self.forcing(x, d, tq, (1.0 - theta) * s0 + theta * s1);
                acc[1] -= dt * w * lap * phi * mu;
                acc[2] += dt * w * forcing * phi * mu;
                acc[3] = acc[3].max((lap * phi).abs().max((forcing * phi).abs()) * mu);
            }
            acc[3] = acc[3].max((f[x] * jet.d2).abs() * mu);
        }
        Ok(acc)
    }
}

/// Weak-form inequality of one equation evaluated along a trajectory with
/// exact test-function derivatives.
pub fn weak_residual(
    traj: &Trajectory,
    g: &WeightedGraph,
    field: &DistanceField,
    tf: &TestFunction,
    h: &Potential,
    exponent: f64,
    opts: &WeakOptions,
) -> Result<WeakFormReport> {
    let n = g.num_vertices();
    if field.values().len() != n || traj.u.first().is_some_and(|u| u.len() != n) {
        return Err(Error::DomainMismatch {
            expected: n,
            got: field.values().len(),
        });
    }
    h.check_domain(n)?;
    let support = tf.time_support();
    if let TrajectoryStatus::Blowup { t_b, .. } = traj.status {
        if t_b < support {
            return Err(Error::TruncatedSupport { t_blowup: t_b, support });
        }
    }
    // Index of the first grid time at or past the support end.
    let last = (support / traj.dt - 1e-9).ceil().max(0.0) as usize;
    if last + 1 > traj.len() {
        return Err(Error::SupportViolation {
            support,
            horizon: traj.end_time(),
        });
    }

    let (fs, srcs, vel): (&[VertexFunction], &[VertexFunction], &VertexFunction) =
        match (opts.field, opts.coupling) {
            (Field::U, Coupling::Coupled) => (&traj.u, &traj.v, &traj.u1),
            (Field::U, Coupling::Uncoupled) => (&traj.u, &traj.u, &traj.u1),
            (Field::V, Coupling::Coupled) => (&traj.v, &traj.u, &traj.v1),
            (Field::V, Coupling::Uncoupled) => (&traj.v, &traj.v, &traj.v1),
        };

    let dt = traj.dt;
    let ctx = WeakContext {
        g,
        field,
        tf,
        h,
        exponent,
        fs,
        srcs,
        dt,
        last,
    };
    let per_step: Vec<[f64; 4]> = (0..=last)
        .into_par_iter()
        .map(|k| match opts.quadrature {
            WeakQuadrature::Trapezoid => ctx.trapezoid_step(k),
            WeakQuadrature::Product => ctx.product_step(k),
        })
        .collect::<Result<_>>()?;

    let mut dtt = 0.0;
    let mut lap = 0.0;
    let mut rhs = 0.0;
    let mut scale: f64 = 0.0;
    for a in &per_step {
        dtt += a[0];
        lap += a[1];
        rhs += a[2];
        scale = scale.max(a[3]);
    }
    let mut t_u0 = 0.0;
    let mut t_u1 = 0.0;
    for x in 0..n {
        let jet = tf.eval(field.get(x), 0.0)?;
        t_u0 += fs[0][x] * jet.d1 * g.mu(x);
        t_u1 -= vel[x] * jet.value * g.mu(x);
    }
    let terms = WeakTerms {
        dtt,
        laplacian: lap,
        u0: t_u0,
        u1: t_u1,
    };
    let lhs = dtt + lap + t_u0 + t_u1;
    Ok(WeakFormReport {
        field: opts.field,
        lhs,
        rhs,
        residual: lhs - rhs,
        terms,
        dt,
        test_function: *tf,
        time_support: support,
        scale,
    })
}

/// `Σ μ ((uⁿ − uⁿ⁻¹)/dt)²/2 + ¼ Σ_x Σ_{y∼x} ω_xy ∇uⁿ ∇uⁿ⁻¹`; the
/// cross-step potential makes this exactly invariant under the linear
/// leapfrog update.
pub fn energy_diagnostic(traj: &Trajectory, g: &WeightedGraph, n: usize) -> Result<f64> {
    if n == 0 || n >= traj.len() {
        return Err(Error::StepOutOfRange {
            index: n,
            len: traj.len(),
        });
    }
    let (a, b) = (&traj.u[n], &traj.u[n - 1]);
    let dt = traj.dt;
    let kinetic: f64 = (0..g.num_vertices())
        .map(|x| {
            let r = (a[x] - b[x]) / dt;
            0.5 * g.mu(x) * r * r
        })
        .sum();
    let potential: f64 = g
        .edges()
        .map(|(x, y, w)| 0.5 * w * (a[y] - a[x]) * (b[y] - b[x]))
        .sum();
    Ok(kinetic + potential)
}

/// Warning text when the truncation boundary sits closer than the data
/// support plus one unit of distance per unit time.
pub fn truncation_warning(
    g: &WeightedGraph,
    field: &DistanceField,
    data: &InitialData,
    horizon: f64,
) -> Option<String> {
    let clearance = field.boundary_clearance(g);
    let needed = data.support_radius(field) + horizon;
    (clearance < needed).then(|| {
        format!(
            "truncation boundary at distance {clearance} is inside data support + T = {needed}; \
             boundary effects may reach the region of interest"
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoffs::RadialCutoff;
    use crate::geometry::Metric;
    use crate::graph::{generate_lattice, generate_path, GraphBuilder};

    fn single() -> (WeightedGraph, DistanceField) {
        let g = GraphBuilder::with_vertices(vec![1.0]).build().unwrap();
        (g, DistanceField::from_values(0, vec![0.0]))
    }

    #[test]
    fn cfl_examples() {
        let g = generate_lattice(2, 5).unwrap();
        assert_eq!(cfl_dt(&g, 0.5), 0.25);
        let p = generate_path(5).unwrap();
        assert!((cfl_dt(&p, 0.5) - 0.5 * 2.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!((cfl_dt(&p, 0.5) - 0.35355).abs() < 1e-5);
        assert_eq!(cfl_dt(&single().0, 0.5), 0.1);
    }

    #[test]
    fn zero_is_fixed_point() {
        let g = generate_lattice(1, 10).unwrap();
        let f = Metric::LatticeL2.distance_field(&g, g.default_origin()).unwrap();
        let prob = WaveSystemProblem::new(&g, &f, 2.0, 3.0, InitialData::zeros(21), 5.0);
        let t = simulate(&prob).unwrap();
        assert_eq!(t.status, TrajectoryStatus::Completed { reached_horizon: true });
        assert!(t.u.iter().chain(&t.v).all(|s| s.iter().all(|&v| v == 0.0)));
        let steps = (5.0 / prob.dt).ceil() as usize;
        assert_eq!(t.len(), steps + 1);
    }

    #[test]
    fn unstable_step_rejected() {
        let g = generate_lattice(2, 3).unwrap();
        let f = Metric::LatticeL2.distance_field(&g, g.default_origin()).unwrap();
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::zeros(49), 1.0);
        prob.dt = 0.6;
        assert!(matches!(simulate(&prob), Err(Error::Unstable { .. })));
    }

    #[test]
    fn step_cap() {
        let (g, f) = single();
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::zeros(1), 10.0);
        prob.max_steps = 5;
        let t = simulate(&prob).unwrap();
        assert_eq!(t.status, TrajectoryStatus::Completed { reached_horizon: false });
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn single_vertex_blows_up() {
        let (g, f) = single();
        let data = InitialData::symmetric(vec![1.0].into(), vec![0.0].into());
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, data, 10.0);
        prob.dt = 1e-3;
        let t = simulate(&prob).unwrap();
        let TrajectoryStatus::Blowup { t_b, vertex, .. } = t.status else {
            panic!("no blow-up: {:?}", t.status);
        };
        assert_eq!(vertex, 0);
        // w'' = w², w(0) = 1: blow-up time ∫₁^∞ dw / √(2(w³ − 1)/3) ≈ 2.97448.
        assert!((t_b - 2.97448).abs() < 0.01, "{t_b}");
    }

    #[test]
    fn uncoupled_mode_differs() {
        let (g, f) = single();
        let data = InitialData {
            u0: vec![1.0].into(),
            u1: vec![0.0].into(),
            v0: vec![0.0].into(),
            v1: vec![0.0].into(),
        };
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, data, 0.5);
        prob.dt = 0.01;
        let coupled = simulate(&prob).unwrap();
        prob.coupling = Coupling::Uncoupled;
        let uncoupled = simulate(&prob).unwrap();
        let end = coupled.len() - 1;
        // Coupled: u sees |v|² = 0 at first, so it moves slower.
        assert!(coupled.u[end][0] < uncoupled.u[end][0]);
        assert_eq!(uncoupled.v[end][0], 0.0);
    }

    #[test]
    fn linear_energy_is_conserved() {
        let g = generate_path(40).unwrap();
        let f = Metric::GraphDistance.distance_field(&g, 0).unwrap();
        let u0 = VertexFunction::from_fn(40, |x| (-((x as f64 - 20.0).powi(2)) / 8.0).exp());
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::symmetric(u0, VertexFunction::zeros(40)), 1.0);
        prob.h1 = Potential::Constant { c: 0.0 };
        prob.h2 = Potential::Constant { c: 0.0 };
        prob.dt = cfl_dt(&g, 0.5) / 2.0;
        prob.horizon = 1000.0 * prob.dt;
        let t = simulate(&prob).unwrap();
        let e0 = energy_diagnostic(&t, &g, 1).unwrap();
        let e1 = energy_diagnostic(&t, &g, 1000).unwrap();
        assert!(((e1 - e0) / e0).abs() < 1e-10);
        assert!(energy_diagnostic(&t, &g, 0).is_err());
    }

    #[test]
    fn energy_trivial_cases() {
        let (g, f) = single();
        let data = InitialData::symmetric(vec![1.0].into(), vec![2.0].into());
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, data, 0.1);
        prob.h1 = Potential::Constant { c: 0.0 };
        prob.h2 = Potential::Constant { c: 0.0 };
        prob.dt = 0.01;
        let t = simulate(&prob).unwrap();
        assert!((energy_diagnostic(&t, &g, 1).unwrap() - 2.0).abs() < 1e-12);

        let data = InitialData::zeros(1);
        let t = simulate(&WaveSystemProblem::new(&g, &f, 2.0, 2.0, data, 1.0)).unwrap();
        assert_eq!(energy_diagnostic(&t, &g, 3).unwrap(), 0.0);
    }

    fn radial(r: f64) -> TestFunction {
        TestFunction::Radial(RadialCutoff::new(2.0, 2.0, r, 5.0).unwrap())
    }

    #[test]
    fn weak_zero_trajectory() {
        let g = generate_lattice(1, 30).unwrap();
        let f = Metric::LatticeL2.distance_field(&g, g.default_origin()).unwrap();
        let t = simulate(&WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::zeros(61), 20.0)).unwrap();
        let r = weak_residual(&t, &g, &f, &radial(8.0), &Potential::one(), 2.0, &WeakOptions::default()).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
    }

    #[test]
    fn weak_support_errors() {
        let g = generate_lattice(1, 30).unwrap();
        let f = Metric::LatticeL2.distance_field(&g, g.default_origin()).unwrap();
        let t = simulate(&WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::zeros(61), 5.0)).unwrap();
        assert!(matches!(
            weak_residual(&t, &g, &f, &radial(8.0), &Potential::one(), 2.0, &WeakOptions::default()),
            Err(Error::SupportViolation { .. })
        ));
        let (g, f) = single();
        let data = InitialData::symmetric(vec![10.0].into(), vec![0.0].into());
        let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, data, 50.0);
        prob.dt = 0.01;
        let t = simulate(&prob).unwrap();
        assert!(matches!(
            weak_residual(&t, &g, &f, &radial(8.0), &Potential::one(), 2.0, &WeakOptions::default()),
            Err(Error::TruncatedSupport { .. })
        ));
    }

    #[test]
    fn weak_linear_consistency() {
        let g = generate_lattice(1, 200).unwrap();
        let f = Metric::LatticeL2.distance_field(&g, g.default_origin()).unwrap();
        let n = g.num_vertices();
        let bump = VertexFunction::from_fn(n, |x| (-(f.get(x).powi(2)) / 8.0).exp());
        let run = |dt: f64| {
            let mut prob = WaveSystemProblem::new(&g, &f, 2.0, 2.0, InitialData::symmetric(bump.clone(), bump.clone()), 30.0);
            prob.h1 = Potential::Constant { c: 0.0 };
            prob.h2 = Potential::Constant { c: 0.0 };
            prob.dt = dt;
            let t = simulate(&prob).unwrap();
            weak_residual(&t, &g, &f, &radial(16.0), &prob.h1, 2.0, &WeakOptions::default()).unwrap()
        };
        let a = run(0.1);
        let b = run(0.05);
        assert_eq!(a.rhs, 0.0);
        let sum = a.terms.dtt + a.terms.laplacian + a.terms.u0 + a.terms.u1;
        assert!((sum - a.lhs).abs() <= 1e-12 * a.scale.max(a.lhs.abs()));
        assert!(a.lhs.abs() < 1e-2 * a.scale.max(1.0), "{a:?}");
        assert!(a.lhs.abs() / b.lhs.abs() >= 3.0, "{} {}", a.lhs, b.lhs);
    }
}
