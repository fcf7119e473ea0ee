//! Empirical constants for the derivative bounds of both test-function
//! families, measured by exhaustive vertex scans on a uniform time grid.

use rayon::prelude::*;
use serde::Serialize;

use super::{RadialCutoff, SeparableCutoff, SpaceTimeRegion};
use crate::error::{Error, Result};
use crate::geometry::{jump_size, Metric};
use crate::graph::WeightedGraph;

/// Default time-grid density (samples per unit time).
pub const DEFAULT_POINTS_PER_UNIT: f64 = 16.0;

fn time_grid(t_max: f64, points_per_unit: f64) -> Vec<f64> {
    let steps = (t_max * points_per_unit).ceil().max(1.0) as usize;
    let h = t_max / steps as f64;
    (0..=steps).map(|k| k as f64 * h).collect()
}

fn jump_or_zero(m: &Metric, g: &WeightedGraph) -> Result<f64> {
    match jump_size(m, g) {
        Ok(j) => Ok(j),
        Err(Error::NoEdges) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct RadialMaxima {
    lap: f64,
    lap_abs: f64,
    dt: f64,
    dt_abs: f64,
    dtt: f64,
    dtt_abs: f64,
    out_lap: f64,
    out_dt: f64,
    out_dtt: f64,
    samples: usize,
}

impl RadialMaxima {
    fn merge(self, o: Self) -> Self {
        Self {
            lap: self.lap.max(o.lap),
            lap_abs: self.lap_abs.max(o.lap_abs),
            dt: self.dt.max(o.dt),
            dt_abs: self.dt_abs.max(o.dt_abs),
            dtt: self.dtt.max(o.dtt),
            dtt_abs: self.dtt_abs.max(o.dtt_abs),
            out_lap: self.out_lap.max(o.out_lap),
            out_dt: self.out_dt.max(o.out_dt),
            out_dtt: self.out_dtt.max(o.out_dtt),
            samples: self.samples + o.samples,
        }
    }
}

/// Constants for the radial family `φ_R` (power 1):
/// `−Δφ_R ≤ C R^{−(1+α)} 1_{F_R}`, `−(φ_R)_t ≤ C R^{−θ₁/θ₂} 1_{E_R}`,
/// `−(φ_R)_tt ≤ C R^{−2θ₁/θ₂} 1_{E_R}`. Signed constants use the positive
/// part of the left-hand side, `*_abs` its absolute value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialLemmaReport {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "C_lap")]
    pub c_lap: f64,
    #[serde(rename = "C_dt")]
    pub c_dt: f64,
    #[serde(rename = "C_dtt")]
    pub c_dtt: f64,
    #[serde(rename = "C_lap_abs")]
    pub c_lap_abs: f64,
    #[serde(rename = "C_dt_abs")]
    pub c_dt_abs: f64,
    #[serde(rename = "C_dtt_abs")]
    pub c_dtt_abs: f64,
    /// Largest of the three outside-region positive parts.
    pub outside_violation: f64,
    /// `max (−Δφ_R)⁺` over samples outside `F_R`.
    pub outside_lap: f64,
    pub outside_dt: f64,
    pub outside_dtt: f64,
    /// Time step of the sampling grid.
    pub grid_resolution: f64,
    pub samples: usize,
}

pub fn verify_lemma_sec3(
    g: &WeightedGraph,
    m: &Metric,
    x0: usize,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    radius: f64,
) -> Result<RadialLemmaReport> {
    let cutoff = RadialCutoff::new(theta1, theta2, radius, 1.0)?;
    verify_lemma_sec3_with(g, m, x0, &cutoff, alpha, DEFAULT_POINTS_PER_UNIT)
}

/// Scans every vertex over `t ∈ [0, ((4R)^{θ₁})^{1/θ₂}]`, which covers `F_R`.
pub fn verify_lemma_sec3_with(
    g: &WeightedGraph,
    m: &Metric,
    x0: usize,
    cutoff: &RadialCutoff,
    alpha: f64,
    points_per_unit: f64,
) -> Result<RadialLemmaReport> {
    let RadialCutoff {
        theta1,
        theta2,
        radius,
        ..
    } = *cutoff;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("α = {alpha} not in [0, 1]")));
    }
    if 2.0 * theta1 / theta2 < 1.0 + alpha {
        return Err(Error::InvalidParameter(format!(
            "2θ₁/θ₂ = {} < 1 + α = {}",
            2.0 * theta1 / theta2,
            1.0 + alpha
        )));
    }
    let cutoff = RadialCutoff { power: 1.0, ..*cutoff };
    let field = m.distance_field(g, x0)?;
    let j = jump_or_zero(m, g)?;
    let clearance = field.boundary_clearance(g);
    if clearance <= 4.0 * radius + j {
        return Err(Error::TruncationTooSmall(format!(
            "F_R reaches distance {} (+ jump {j}) but the truncation boundary is at {clearance}",
            4.0 * radius
        )));
    }

    let e_reg = SpaceTimeRegion::E {
        radius,
        theta1,
        theta2,
    };
    let f_reg = SpaceTimeRegion::F {
        radius,
        theta1,
        theta2,
    };
    let t_max = (4.0 * radius).powf(theta1).powf(1.0 / theta2);
    let times = time_grid(t_max, points_per_unit);
    let support = cutoff.spatial_support();
    let lap_scale = radius.powf(1.0 + alpha);
    let dt_scale = radius.powf(theta1 / theta2);
    let dtt_scale = radius.powf(2.0 * theta1 / theta2);

    let n = g.num_vertices();
    let maxima = (0..n)
        .into_par_iter()
        .map(|x| {
            let dx = field.get(x);
            let nbrs: Vec<(f64, f64)> = g.neighbors(x).map(|(y, w)| (field.get(y), w)).collect();
            let near = nbrs.iter().map(|n| n.0).fold(dx, f64::min);
            let mut acc = RadialMaxima {
                samples: times.len(),
                ..Default::default()
            };
            if near >= support {
                // φ_R vanishes at x and all its neighbours for every t.
                return acc;
            }
            let mu = g.mu(x);
            for &t in &times {
                let jet = cutoff.base_jet(dx, t);
                let lap = nbrs
                    .iter()
                    .map(|&(dy, w)| w * (cutoff.base_jet(dy, t).value - jet.value))
                    .sum::<f64>()
                    / mu;
                if f_reg.contains(dx, t) {
                    acc.lap = acc.lap.max(lap_scale * (-lap).max(0.0));
                    acc.lap_abs = acc.lap_abs.max(lap_scale * lap.abs());
                } else {
                    acc.out_lap = acc.out_lap.max((-lap).max(0.0));
                }
                if e_reg.contains(dx, t) {
                    acc.dt = acc.dt.max(dt_scale * (-jet.d1).max(0.0));
                    acc.dt_abs = acc.dt_abs.max(dt_scale * jet.d1.abs());
                    acc.dtt = acc.dtt.max(dtt_scale * (-jet.d2).max(0.0));
                    acc.dtt_abs = acc.dtt_abs.max(dtt_scale * jet.d2.abs());
                } else {
                    acc.out_dt = acc.out_dt.max((-jet.d1).max(0.0));
                    acc.out_dtt = acc.out_dtt.max((-jet.d2).max(0.0));
                }
            }
            acc
        })
        .reduce(RadialMaxima::default, RadialMaxima::merge);

    Ok(RadialLemmaReport {
        radius,
        c_lap: maxima.lap,
        c_dt: maxima.dt,
        c_dtt: maxima.dtt,
        c_lap_abs: maxima.lap_abs,
        c_dt_abs: maxima.dt_abs,
        c_dtt_abs: maxima.dtt_abs,
        outside_violation: maxima.out_lap.max(maxima.out_dt).max(maxima.out_dtt),
        outside_lap: maxima.out_lap,
        outside_dt: maxima.out_dt,
        outside_dtt: maxima.out_dtt,
        grid_resolution: times.get(1).copied().unwrap_or(t_max),
        samples: maxima.samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportCheck {
    /// `(φ_R)_t = (φ_R)_tt = 0` at every sample with `t ∉ [R^{(1+α)/2}, 2R^{(1+α)/2}]`.
    pub time_band: bool,
    /// `Δφ_R = 0` wherever `x` and all its neighbours sit on ψ's plateau.
    pub plateau: bool,
    /// `(φ_R)_t(x, 0) = 0` at every vertex.
    pub zero_time: bool,
    pub max_dt_outside_band: f64,
    pub max_lap_on_plateau: f64,
}

impl SupportCheck {
    pub fn passed(&self) -> bool {
        self.time_band && self.plateau && self.zero_time
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct SeparableMaxima {
    dt: f64,
    dtt: f64,
    lap: f64,
    dt_signed: f64,
    dtt_signed: f64,
    lap_signed: f64,
    dt_outside: f64,
    lap_plateau: f64,
    dt_zero: f64,
}

impl SeparableMaxima {
    fn merge(self, o: Self) -> Self {
        Self {
            dt: self.dt.max(o.dt),
            dtt: self.dtt.max(o.dtt),
            lap: self.lap.max(o.lap),
            dt_signed: self.dt_signed.max(o.dt_signed),
            dtt_signed: self.dtt_signed.max(o.dtt_signed),
            lap_signed: self.lap_signed.max(o.lap_signed),
            dt_outside: self.dt_outside.max(o.dt_outside),
            lap_plateau: self.lap_plateau.max(o.lap_plateau),
            dt_zero: self.dt_zero.max(o.dt_zero),
        }
    }
}

/// Constants for the separable family:
/// `|(φ_R)_t| ≤ C R^{−(1+α)/2} η^{s−1} e^{−δd/R} 1_{Q_R}`,
/// `|(φ_R)_tt| ≤ C R^{−(1+α)} η^{s−2} e^{−δd/R} 1_{Q_R}`,
/// `|Δφ_R| ≤ C R^{−(1+α)} η^s e^{−δd/R} 1_{V∖B_R(x₀)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableLemmaReport {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "C_dt")]
    pub c_dt: f64,
    #[serde(rename = "C_dtt")]
    pub c_dtt: f64,
    #[serde(rename = "C_lap")]
    pub c_lap: f64,
    /// Same ratios using `(−·)⁺` instead of `|·|`.
    #[serde(rename = "C_dt_signed")]
    pub c_dt_signed: f64,
    #[serde(rename = "C_dtt_signed")]
    pub c_dtt_signed: f64,
    #[serde(rename = "C_lap_signed")]
    pub c_lap_signed: f64,
    pub support_check: SupportCheck,
    pub grid_resolution: f64,
    pub jump: f64,
}

pub fn verify_lemma_sec4(
    g: &WeightedGraph,
    m: &Metric,
    x0: usize,
    power: f64,
    alpha: f64,
    delta: f64,
    radius: f64,
) -> Result<SeparableLemmaReport> {
    verify_lemma_sec4_with(g, m, x0, power, alpha, delta, radius, DEFAULT_POINTS_PER_UNIT)
}

/// Scans `t ∈ [0, 3R^{(1+α)/2}]` so that samples past the support are
/// included. Vertices within one jump of the truncation boundary are left
/// out of the Laplacian scan.
#[allow(clippy::too_many_arguments)]
pub fn verify_lemma_sec4_with(
    g: &WeightedGraph,
    m: &Metric,
    x0: usize,
    power: f64,
    alpha: f64,
    delta: f64,
    radius: f64,
    points_per_unit: f64,
) -> Result<SeparableLemmaReport> {
    if !(power > 2.0) {
        return Err(Error::InvalidParameter(format!("s = {power} must exceed 2")));
    }
    let field = m.distance_field(g, x0)?;
    let j = jump_or_zero(m, g)?;
    let cutoff = SeparableCutoff::new(power, radius, alpha, delta, j)?;
    let clearance = field.boundary_clearance(g);
    if clearance <= 2.0 * radius + j {
        return Err(Error::TruncationTooSmall(format!(
            "need the boundary beyond 2R + j = {}, found {clearance}",
            2.0 * radius + j
        )));
    }
    let to_boundary = m.boundary_distances(g)?;

    let scale = cutoff.time_scale();
    let times = time_grid(3.0 * scale, points_per_unit);
    let time_jets: Vec<_> = times.iter().map(|&t| cutoff.time_factor(t)).collect();
    let eta: Vec<f64> = times.iter().map(|&t| super::eta_jet(t / scale).value).collect();
    let space: Vec<f64> = field.values().iter().map(|&d| cutoff.space_factor(d)).collect();
    let on_plateau: Vec<bool> = field
        .values()
        .iter()
        .map(|&d| (d - j) / radius <= 1.0)
        .collect();
    let lap_scale = radius.powf(1.0 + alpha);

    let maxima = (0..g.num_vertices())
        .into_par_iter()
        .map(|x| {
            let mut acc = SeparableMaxima::default();
            let d = field.get(x);
            let weight = (-delta * d / radius).exp();
            let in_ball = d <= radius;
            let interior = to_boundary[x] > j;
            let plateau = on_plateau[x] && g.neighbors(x).all(|(y, _)| on_plateau[y]);
            for (k, &t) in times.iter().enumerate() {
                let jet = time_jets[k].scale(space[x]);
                let e = eta[k];
                let in_band = t >= scale && t <= 2.0 * scale;
                if k == 0 {
                    acc.dt_zero = acc.dt_zero.max(jet.d1.abs());
                }
                if in_band {
                    if e > 0.0 {
                        let r1 = scale / (e.powf(power - 1.0) * weight);
                        let r2 = lap_scale / (e.powf(power - 2.0) * weight);
                        acc.dt = acc.dt.max(jet.d1.abs() * r1);
                        acc.dt_signed = acc.dt_signed.max((-jet.d1).max(0.0) * r1);
                        acc.dtt = acc.dtt.max(jet.d2.abs() * r2);
                        acc.dtt_signed = acc.dtt_signed.max((-jet.d2).max(0.0) * r2);
                    }
                } else {
                    acc.dt_outside = acc.dt_outside.max(jet.d1.abs()).max(jet.d2.abs());
                }
                if !interior || t > 2.0 * scale {
                    continue;
                }
                let tf = time_jets[k].value;
                let vx = tf * space[x];
                let lap = g
                    .neighbors(x)
                    .map(|(y, w)| w * (tf * space[y] - vx))
                    .sum::<f64>()
                    / g.mu(x);
                if plateau {
                    acc.lap_plateau = acc.lap_plateau.max(lap.abs());
                }
                if !in_ball && e > 0.0 {
                    let r = lap_scale / (e.powf(power) * weight);
                    acc.lap = acc.lap.max(lap.abs() * r);
                    acc.lap_signed = acc.lap_signed.max((-lap).max(0.0) * r);
                }
            }
            acc
        })
        .reduce(SeparableMaxima::default, SeparableMaxima::merge);

    Ok(SeparableLemmaReport {
        radius,
        c_dt: maxima.dt,
        c_dtt: maxima.dtt,
        c_lap: maxima.lap,
        c_dt_signed: maxima.dt_signed,
        c_dtt_signed: maxima.dtt_signed,
        c_lap_signed: maxima.lap_signed,
        support_check: SupportCheck {
            time_band: maxima.dt_outside == 0.0,
            plateau: maxima.lap_plateau == 0.0,
            zero_time: maxima.dt_zero == 0.0,
            max_dt_outside_band: maxima.dt_outside,
            max_lap_on_plateau: maxima.lap_plateau,
        },
        grid_resolution: times[1] - times[0],
        jump: j,
    })
}

/// `max / min` of a nonempty list of positive constants.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lattice, GraphBuilder};

    #[test]
    fn single_vertex_has_no_laplacian() {
        let g = GraphBuilder::with_vertices(vec![1.0]).build().unwrap();
        let r = verify_lemma_sec3(&g, &Metric::GraphDistance, 0, 2.0, 2.0, 1.0, 3.0).unwrap();
        assert_eq!(r.c_lap, 0.0);
        assert_eq!(r.outside_lap, 0.0);
        assert!(r.c_dt > 0.0);
    }

    #[test]
    fn rejects_small_truncation_and_bad_exponents() {
        let g = generate_lattice(2, 10).unwrap();
        let o = g.default_origin();
        assert!(matches!(
            verify_lemma_sec3(&g, &Metric::LatticeL2, o, 2.0, 2.0, 1.0, 4.0),
            Err(Error::TruncationTooSmall(_))
        ));
        assert!(verify_lemma_sec3(&g, &Metric::LatticeL2, o, 2.0, 4.0, 1.0, 1.0).is_err());
        assert!(matches!(
            verify_lemma_sec4(&g, &Metric::LatticeL2, o, 6.0, 1.0, 1.0, 8.0),
            Err(Error::TruncationTooSmall(_))
        ));
        assert!(verify_lemma_sec4(&g, &Metric::LatticeL2, o, 2.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn one_dimensional_support_check() {
        let g = generate_lattice(1, 60).unwrap();
        let r = verify_lemma_sec4(&g, &Metric::LatticeL2, g.default_origin(), 6.0, 1.0, 1.0, 16.0)
            .unwrap();
        assert!(r.support_check.passed(), "{:?}", r.support_check);
        assert!(r.c_lap > 0.0 && r.c_dt > 0.0 && r.c_dtt > 0.0);
    }
}
