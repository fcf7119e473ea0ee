//! Critical exponents, space-time volume integrals and the growth verdicts.
//!
//! A bound "for every `R ≥ R₀`, `I(R) ≤ C R^κ`" cannot be falsified from
//! finitely many radii, so every verdict compares the log-log slope of
//! `I(R)` over a geometric grid of radii against `κ` plus a tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutoffs::SpaceTimeRegion;
use crate::error::{Error, Result};
use crate::fit::growth_exponent_estimate;
use crate::geometry::DistanceField;
use crate::graph::WeightedGraph;
use crate::potential::Potential;

pub const DEFAULT_TOLERANCE: f64 = 0.2;
pub const DEFAULT_POINTS_PER_UNIT: f64 = 32.0;

/// `p(q+1)(1+α)/(pq−1)`.
pub fn crit_exponent(p: f64, q: f64, alpha: f64) -> f64 {
    p * (q + 1.0) * (1.0 + alpha) / (p * q - 1.0)
}

/// `(1+α)p/(p−1)`.
pub fn single_eq_exponent(p: f64, alpha: f64) -> f64 {
    (1.0 + alpha) * p / (p - 1.0)
}

fn default_theta() -> f64 {
    2.0
}

fn default_alpha() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    1.0
}

fn default_r0() -> f64 {
    8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_theta")]
    pub theta1: f64,
    #[serde(default = "default_theta")]
    pub theta2: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(rename = "R0", default = "default_r0")]
    pub r0: f64,
}

impl SystemParams {
    /// `θ₁ = θ₂ = 2`, `α = 1`, `δ = 1`, `R₀ = 8`.
    pub fn new(p: f64, q: f64) -> Self {
        Self {
            p,
            q,
            theta1: default_theta(),
            theta2: default_theta(),
            alpha: default_alpha(),
            delta: default_delta(),
            r0: default_r0(),
        }
    }

    fn check_exponents(&self) -> Result<()> {
        if !(self.q > 1.0 && self.p >= self.q) {
            return Err(Error::InvalidParameter(format!(
                "need p ≥ q > 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("α = {} not in [0, 1]", self.alpha)));
        }
        if !(self.r0 > 0.0) {
            return Err(Error::InvalidParameter(format!("R0 = {} must be positive", self.r0)));
        }
        Ok(())
    }

    /// Invariants for the radial family.
    pub fn validate(&self) -> Result<()> {
        self.check_exponents()?;
        if !(self.theta1 >= 2.0 && self.theta2 >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "θ₁ = {}, θ₂ = {}: both must be ≥ 2",
                self.theta1, self.theta2
            )));
        }
        if 2.0 * self.theta1 / self.theta2 < 1.0 + self.alpha {
            return Err(Error::InvalidParameter(format!(
                "2θ₁/θ₂ = {} < 1 + α = {}",
                2.0 * self.theta1 / self.theta2,
                1.0 + self.alpha
            )));
        }
        Ok(())
    }

    /// Invariants for the exponentially weighted family.
    pub fn validate_weighted(&self) -> Result<()> {
        self.check_exponents()?;
        if !(self.delta > 0.0) {
            return Err(Error::InvalidParameter(format!("δ = {} must be positive", self.delta)));
        }
        Ok(())
    }

    pub fn critical_exponent(&self) -> f64 {
        crit_exponent(self.p, self.q, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMode {
    /// Closed form for time-independent potentials, Simpson otherwise.
    #[default]
    Auto,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriterionOptions {
    pub tolerance: f64,
    pub points_per_unit: f64,
    pub integration: IntegrationMode,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            points_per_unit: DEFAULT_POINTS_PER_UNIT,
            integration: IntegrationMode::Auto,
        }
    }
}

/// Composite Simpson rule with at least `density` points per unit length.
fn simpson(a: f64, b: f64, density: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let mut n = ((b - a) * density).ceil().max(2.0) as usize;
    n += n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// `∫_a^b h(x, t)^{−γ} dt` for one vertex.
fn time_weight(
    h: &Potential,
    x: usize,
    d: f64,
    (a, b): (f64, f64),
    gamma: f64,
    opts: &CriterionOptions,
) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let closed = match opts.integration {
        IntegrationMode::Auto => h.is_time_independent(),
        IntegrationMode::ClosedForm => {
            if !h.is_time_independent() {
                return Err(Error::InvalidParameter(
                    "closed-form integration needs a time-independent potential".into(),
                ));
            }
            true
        }
        IntegrationMode::Quadrature => false,
    };
    if closed {
        Ok(h.inverse_power(x, d, a, gamma)? * (b - a))
    } else {
        simpson(a, b, opts.points_per_unit, |t| h.inverse_power(x, d, t, gamma))
    }
}

fn check_shadow(g: &WeightedGraph, field: &DistanceField, reach: f64) -> Result<()> {
    let clearance = field.boundary_clearance(g);
    if clearance <= reach {
        return Err(Error::TruncationTooSmall(format!(
            "region reaches distance {reach} but the truncation boundary is at {clearance}"
        )));
    }
    Ok(())
}

/// Deterministic parallel sum of per-vertex contributions.
fn vertex_sum(n: usize, f: impl Fn(usize) -> Result<f64> + Sync + Send) -> Result<f64> {
    let parts: Vec<f64> = (0..n).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

/// `∫₀^∞ Σ_x 1_reg(x, t) h(x, t)^{−γ} μ(x) dt`.
pub fn region_integral(
    g: &WeightedGraph,
    field: &DistanceField,
    reg: &SpaceTimeRegion,
    h: &Potential,
    gamma: f64,
) -> Result<f64> {
    region_integral_with(g, field, reg, h, gamma, &CriterionOptions::default())
}

pub fn region_integral_with(
    g: &WeightedGraph,
    field: &DistanceField,
    reg: &SpaceTimeRegion,
    h: &Potential,
    gamma: f64,
    opts: &CriterionOptions,
) -> Result<f64> {
    let n = g.num_vertices();
    if field.values().len() != n {
        return Err(Error::DomainMismatch {
            expected: n,
            got: field.values().len(),
        });
    }
    h.check_domain(n)?;
    if let Some(reach) = reg.spatial_reach() {
        check_shadow(g, field, reach)?;
    }
    vertex_sum(n, |x| {
        let d = field.get(x);
        match reg.time_interval(d) {
            Some(iv) => Ok(g.mu(x) * time_weight(h, x, d, iv, gamma, opts)?),
            None => Ok(0.0),
        }
    })
}

/// Radii `R₀·2^k` for as long as `admits(R)` holds; fails with fewer than
/// three.
pub fn default_r_grid(r0: f64, admits: impl Fn(f64) -> bool) -> Result<Vec<f64>> {
    let grid: Vec<f64> = (0..)
        .map(|k| r0 * 2f64.powi(k))
        .take_while(|&r| admits(r))
        .take(64)
        .collect();
    if grid.len() < 3 {
        return Err(Error::TruncationTooSmall(format!(
            "only {} radii starting at {r0} fit the truncation",
            grid.len()
        )));
    }
    Ok(grid)
}

/// `R₀·2^k` with the `E_R` shadow inside the truncation.
pub fn radial_r_grid(g: &WeightedGraph, field: &DistanceField, params: &SystemParams) -> Result<Vec<f64>> {
    let clearance = field.boundary_clearance(g);
    let factor = 2f64.powf(1.0 / params.theta1);
    default_r_grid(params.r0, |r| factor * r < clearance)
}

/// `R₀·2^k` with `2R` inside the truncation.
pub fn weighted_r_grid(g: &WeightedGraph, field: &DistanceField, params: &SystemParams) -> Result<Vec<f64>> {
    let clearance = field.boundary_clearance(g);
    default_r_grid(params.r0, |r| 2.0 * r < clearance)
}

fn check_grid(grid: &[f64], r0: f64) -> Result<()> {
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "R grid needs at least 3 strictly increasing radii".into(),
        ));
    }
    if grid[0] < r0 {
        return Err(Error::InvalidParameter(format!(
            "R grid starts at {} below R0 = {r0}",
            grid[0]
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionMode {
    Theorem1,
    Theorem2,
    TheoremA,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "I_h1")]
    pub i_h1: f64,
    #[serde(rename = "I_h2", skip_serializing_if = "Option::is_none")]
    pub i_h2: Option<f64>,
    /// `(V1, V2, V3, V4)` in the weighted mode.
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub mode: CriterionMode,
    pub params: SystemParams,
    #[serde(rename = "R_grid")]
    pub r_grid: Vec<f64>,
    pub series: Vec<SeriesPoint>,
    /// One fitted slope per tested series.
    pub exponents: Vec<f64>,
    /// The largest fitted slope.
    pub exponent_estimate: f64,
    pub critical_exponent: f64,
    pub satisfied: bool,
    pub tolerance: f64,
    /// Largest log-space residual over the fitted series.
    pub fit_residual: f64,
    pub notes: Vec<String>,
}

impl CriterionVerdict {
    /// `(R, I)` pairs of the first series.
    pub fn per_r_values(&self) -> Vec<(f64, f64)> {
        self.series.iter().map(|s| (s.r, s.i_h1)).collect()
    }
}

const INITIAL_DATA_NOTE: &str = "initial-data hypothesis is not part of this verdict; \
    see initial_data_conditions for the candidate quantities";

#[allow(clippy::too_many_arguments)]
fn finish(
    mode: CriterionMode,
    params: SystemParams,
    r_grid: &[f64],
    series: Vec<SeriesPoint>,
    fitted: &[Vec<(f64, f64)>],
    critical_exponent: f64,
    tolerance: f64,
    notes: Vec<String>,
) -> Result<CriterionVerdict> {
    let fits = fitted
        .iter()
        .map(|s| growth_exponent_estimate(s))
        .collect::<Result<Vec<_>>>()?;
    let exponents: Vec<f64> = fits.iter().map(|f| f.slope).collect();
    let exponent_estimate = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fit_residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
    Ok(CriterionVerdict {
        mode,
        params,
        r_grid: r_grid.to_vec(),
        series,
        exponents,
        exponent_estimate,
        critical_exponent,
        satisfied: exponent_estimate <= critical_exponent + tolerance,
        tolerance,
        fit_residual,
        notes,
    })
}

fn e_region(r: f64, params: &SystemParams) -> SpaceTimeRegion {
    SpaceTimeRegion::E {
        radius: r,
        theta1: params.theta1,
        theta2: params.theta2,
    }
}

/// Growth of the two `E_R` integrals weighted by `h₁^{−1/(p−1)}` and
/// `h₂^{−1/(q−1)}` against `p(q+1)(1+α)/(pq−1)`.
#[allow(clippy::too_many_arguments)]
pub fn theorem1_check(
    g: &WeightedGraph,
    field: &DistanceField,
    params: &SystemParams,
    h1: &Potential,
    h2: &Potential,
    r_grid: &[f64],
    opts: &CriterionOptions,
) -> Result<CriterionVerdict> {
    params.validate()?;
    check_grid(r_grid, params.r0)?;
    let g1 = 1.0 / (params.p - 1.0);
    let g2 = 1.0 / (params.q - 1.0);
    let series = r_grid
        .iter()
        .map(|&r| {
            let reg = e_region(r, params);
            let i1 = region_integral_with(g, field, &reg, h1, g1, opts)?;
            let i2 = if h1 == h2 && g1 == g2 {
                i1
            } else {
                region_integral_with(g, field, &reg, h2, g2, opts)?
            };
            Ok(SeriesPoint {
                r,
                i_h1: i1,
                i_h2: Some(i2),
                v: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s1: Vec<_> = series.iter().map(|s| (s.r, s.i_h1)).collect();
    let s2: Vec<_> = series.iter().map(|s| (s.r, s.i_h2.unwrap_or(0.0))).collect();
    finish(
        CriterionMode::Theorem1,
        *params,
        r_grid,
        series,
        &[s1, s2],
        params.critical_exponent(),
        opts.tolerance,
        vec![INITIAL_DATA_NOTE.to_string()],
    )
}

/// Single-equation counterpart: the `E_R` integral of `h^{−1/(p−1)}`
/// against `(1+α)p/(p−1)`. Only `p`, `θ₁`, `θ₂`, `α` and `R₀` of `params`
/// are used.
pub fn theorem_a_check(
    g: &WeightedGraph,
    field: &DistanceField,
    params: &SystemParams,
    h: &Potential,
    r_grid: &[f64],
    opts: &CriterionOptions,
) -> Result<CriterionVerdict> {
    let single = SystemParams { q: params.p, ..*params };
    single.validate()?;
    check_grid(r_grid, params.r0)?;
    let gamma = 1.0 / (params.p - 1.0);
    let series = r_grid
        .iter()
        .map(|&r| {
            Ok(SeriesPoint {
                r,
                i_h1: region_integral_with(g, field, &e_region(r, params), h, gamma, opts)?,
                i_h2: None,
                v: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s: Vec<_> = series.iter().map(|s| (s.r, s.i_h1)).collect();
    finish(
        CriterionMode::TheoremA,
        single,
        r_grid,
        series,
        &[s],
        single_eq_exponent(params.p, params.alpha),
        opts.tolerance,
        Vec::new(),
    )
}

/// The four exponentially weighted volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VQuantities {
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    #[serde(rename = "V3")]
    pub v3: f64,
    #[serde(rename = "V4")]
    pub v4: f64,
}

impl VQuantities {
    pub fn max(&self) -> f64 {
        self.v1.max(self.v2).max(self.v3).max(self.v4)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.v1, self.v2, self.v3, self.v4]
    }
}

/// `V1..V4` at radius `R`: with `T = R^{(1+α)/2}`, `V1` integrates
/// `h₁^{−1/(p−1)} e^{−δd/R} μ` over `B_R × [T, 2T]`, `V2` over
/// `(V∖B_R) × [0, 2T]`, and `V3`, `V4` do the same with `h₂^{−1/(q−1)}`.
pub fn v_quantities(
    g: &WeightedGraph,
    field: &DistanceField,
    params: &SystemParams,
    h1: &Potential,
    h2: &Potential,
    r: f64,
    opts: &CriterionOptions,
) -> Result<VQuantities> {
    params.validate_weighted()?;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("R = {r} must be positive")));
    }
    let n = g.num_vertices();
    if field.values().len() != n {
        return Err(Error::DomainMismatch {
            expected: n,
            got: field.values().len(),
        });
    }
    h1.check_domain(n)?;
    h2.check_domain(n)?;
    check_shadow(g, field, 2.0 * r)?;
    let t = r.powf((1.0 + params.alpha) / 2.0);
    let g1 = 1.0 / (params.p - 1.0);
    let g2 = 1.0 / (params.q - 1.0);
    let same = h1 == h2 && g1 == g2;
    let parts: Vec<[f64; 4]> = (0..n)
        .into_par_iter()
        .map(|x| {
            let d = field.get(x);
            let w = g.mu(x) * (-params.delta * d / r).exp();
            let iv = if d <= r { (t, 2.0 * t) } else { (0.0, 2.0 * t) };
            let a = w * time_weight(h1, x, d, iv, g1, opts)?;
            let b = if same { a } else { w * time_weight(h2, x, d, iv, g2, opts)? };
            Ok(if d <= r { [a, 0.0, b, 0.0] } else { [0.0, a, 0.0, b] })
        })
        .collect::<Result<_>>()?;
    let mut v = [0.0; 4];
    for p in &parts {
        for k in 0..4 {
            v[k] += p[k];
        }
    }
    Ok(VQuantities {
        v1: v[0],
        v2: v[1],
        v3: v[2],
        v4: v[3],
    })
}

/// Growth of `max(V1..V4)` against `p(q+1)(1+α)/(pq−1)`.
pub fn theorem2_check(
    g: &WeightedGraph,
    field: &DistanceField,
    params: &SystemParams,
    h1: &Potential,
    h2: &Potential,
    r_grid: &[f64],
    opts: &CriterionOptions,
) -> Result<CriterionVerdict> {
    params.validate_weighted()?;
    check_grid(r_grid, params.r0)?;
    let series = r_grid
        .iter()
        .map(|&r| {
            let v = v_quantities(g, field, params, h1, h2, r, opts)?;
            Ok(SeriesPoint {
                r,
                i_h1: v.max(),
                i_h2: None,
                v: Some(v.as_array()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s: Vec<_> = series.iter().map(|s| (s.r, s.i_h1)).collect();
    finish(
        CriterionMode::Theorem2,
        *params,
        r_grid,
        series,
        &[s],
        params.critical_exponent(),
        opts.tolerance,
        Vec::new(),
    )
}

/// `Σ_x |f(x)| e^{−δ d(x, x₀)} μ(x)`.
pub fn xdelta_norm(g: &WeightedGraph, field: &DistanceField, f: &[f64], delta: f64) -> Result<f64> {
    let n = g.num_vertices();
    if f.len() != n {
        return Err(Error::DomainMismatch {
            expected: n,
            got: f.len(),
        });
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} must be positive")));
    }
    Ok((0..n)
        .map(|x| f[x].abs() * (-delta * field.get(x)).exp() * g.mu(x))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialDataPoint {
    #[serde(rename = "R")]
    pub r: f64,
    /// `Σ_{B_R} u₁⁺ μ − Σ_{B_2R} u₁⁻ μ`.
    pub liminf_u1: f64,
    pub liminf_v1: f64,
    /// `−Σ_{B_R} u₁⁺ μ + Σ_{B_2R} u₁⁺ μ`, as printed in the proof.
    pub proof_u1: f64,
    pub proof_v1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialDataReport {
    pub total_u1: f64,
    pub total_v1: f64,
    /// `Σ u₁ μ ≥ 0` and `Σ v₁ μ ≥ 0`.
    pub totals_nonnegative: bool,
    pub per_r: Vec<InitialDataPoint>,
    /// Minimum of `liminf_u1` over the grid, a proxy for the liminf.
    pub liminf_u1_min: f64,
    pub liminf_v1_min: f64,
    /// Both liminf proxies are positive, or the data vanish identically.
    pub liminf_positive: bool,
}

pub fn initial_data_conditions(
    g: &WeightedGraph,
    field: &DistanceField,
    u1: &[f64],
    v1: &[f64],
    r_grid: &[f64],
) -> Result<InitialDataReport> {
    let n = g.num_vertices();
    for f in [u1, v1] {
        if f.len() != n {
            return Err(Error::DomainMismatch {
                expected: n,
                got: f.len(),
            });
        }
    }
    let total = |f: &[f64]| (0..n).map(|x| f[x] * g.mu(x)).sum::<f64>();
    let ball_sum = |f: &[f64], r: f64, part: fn(f64) -> f64| {
        (0..n)
            .filter(|&x| field.get(x) <= r)
            .map(|x| part(f[x]) * g.mu(x))
            .sum::<f64>()
    };
    let pos = |v: f64| v.max(0.0);
    let neg = |v: f64| (-v).max(0.0);
    let per_r: Vec<InitialDataPoint> = r_grid
        .iter()
        .map(|&r| InitialDataPoint {
            r,
            liminf_u1: ball_sum(u1, r, pos) - ball_sum(u1, 2.0 * r, neg),
            liminf_v1: ball_sum(v1, r, pos) - ball_sum(v1, 2.0 * r, neg),
            proof_u1: -ball_sum(u1, r, pos) + ball_sum(u1, 2.0 * r, pos),
            proof_v1: -ball_sum(v1, r, pos) + ball_sum(v1, 2.0 * r, pos),
        })
        .collect();
    let min_of = |sel: fn(&InitialDataPoint) -> f64| {
        per_r.iter().map(sel).fold(f64::INFINITY, f64::min)
    };
    let liminf_u1_min = min_of(|p| p.liminf_u1);
    let liminf_v1_min = min_of(|p| p.liminf_v1);
    let vanishes = |f: &[f64]| f.iter().all(|&v| v == 0.0);
    let total_u1 = total(u1);
    let total_v1 = total(v1);
    Ok(InitialDataReport {
        total_u1,
        total_v1,
        totals_nonnegative: total_u1 >= 0.0 && total_v1 >= 0.0,
        liminf_positive: (vanishes(u1) || liminf_u1_min > 0.0)
            && (vanishes(v1) || liminf_v1_min > 0.0),
        per_r,
        liminf_u1_min,
        liminf_v1_min,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringReport {
    #[serde(rename = "R")]
    pub r: f64,
    pub m: u32,
    pub kappas: Vec<f64>,
    pub samples: usize,
    /// `(d, t)` samples of `F_R` outside every `E_{κR}`.
    pub uncovered: Vec<(f64, f64)>,
}

impl CoveringReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Pointwise check that `F_R ⊂ ∪_{k=0}^m E_{κ_k R}` with
/// `κ_k = 2^{k/θ₁ − 1}` and `m` the smallest integer above `3θ₁ − 1`.
pub fn covering_check(
    field: &DistanceField,
    theta1: f64,
    theta2: f64,
    r: f64,
    points_per_unit: f64,
) -> CoveringReport {
    const SLACK: f64 = 1e-12;
    let m = (3.0 * theta1 - 1.0).floor() as u32 + 1;
    let kappas: Vec<f64> = (0..=m).map(|k| 2f64.powf(k as f64 / theta1 - 1.0)).collect();
    let f = SpaceTimeRegion::F {
        radius: r,
        theta1,
        theta2,
    };
    let mut samples = 0;
    let mut uncovered = Vec::new();
    for &d in field.values() {
        let Some((lo, hi)) = f.time_interval(d) else {
            continue;
        };
        let n = ((hi - lo) * points_per_unit).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            samples += 1;
            // The sampled endpoints sit exactly on annulus boundaries.
            let a = d.powf(theta1) + t.powf(theta2);
            let inside = kappas.iter().any(|&kappa| {
                let lo = (kappa * r).powf(theta1);
                lo * (1.0 - SLACK) <= a && a <= 2.0 * lo * (1.0 + SLACK)
            });
            if !inside {
                uncovered.push((d, t));
            }
        }
    }
    CoveringReport {
        r,
        m,
        kappas,
        samples,
        uncovered,
    }
}
