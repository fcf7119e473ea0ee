//! Experiment configuration: a single JSON document.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use graphwave::criterion::{CriterionMode, CriterionOptions, SystemParams};
use graphwave::cutoffs::phi;
use graphwave::dynamics::{Coupling, Field, WeakQuadrature, DEFAULT_BLOWUP_THRESHOLD, DEFAULT_MAX_STEPS, DEFAULT_SAFETY};
use graphwave::geometry::TableMetric;
use graphwave::graph::{generate_lattice, generate_path, generate_tree, load_graph};
use graphwave::{DistanceField, InitialData, Metric, Potential, VertexFunction, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Lattice { dim: usize, half_width: usize },
    Tree { branching: usize, depth: usize },
    Path { n: usize },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn build(&self) -> Result<WeightedGraph, CliError> {
        Ok(match self {
            GraphSpec::Lattice { dim, half_width } => generate_lattice(*dim, *half_width)?,
            GraphSpec::Tree { branching, depth } => generate_tree(*branching, *depth)?,
            GraphSpec::Path { n } => generate_path(*n)?,
            GraphSpec::File { path } => {
                let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
                load_graph(BufReader::new(file))?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    GraphDistance,
    LatticeL1,
    LatticeL2,
    Table { path: PathBuf },
}

impl MetricSpec {
    pub fn build(&self, g: &WeightedGraph) -> Result<Metric, CliError> {
        Ok(match self {
            MetricSpec::GraphDistance => Metric::GraphDistance,
            MetricSpec::LatticeL1 => Metric::LatticeL1,
            MetricSpec::LatticeL2 => Metric::LatticeL2,
            MetricSpec::Table { path } => {
                let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
                Metric::Table(TableMetric::load(BufReader::new(file), g)?)
            }
        })
    }
}

/// Initial data as a function of the distance to `x₀`. Both components get
/// the same position and velocity unless given as a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSpec {
    /// `amplitude · exp(−d²/(2 width²))`; velocity `velocity · exp(…)`.
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        velocity: f64,
    },
    /// `amplitude · φ(d/radius)`, compactly supported.
    Bump {
        amplitude: f64,
        radius: f64,
        #[serde(default)]
        velocity: f64,
    },
    /// Uniform samples in `[0, amplitude]` inside `B_radius`, drawn from
    /// the experiment seed.
    Random { amplitude: f64, radius: f64 },
    Table {
        u0: Vec<f64>,
        u1: Vec<f64>,
        v0: Vec<f64>,
        v1: Vec<f64>,
    },
}

impl DataSpec {
    pub fn build(&self, field: &DistanceField, seed: u64) -> Result<InitialData, CliError> {
        let n = field.values().len();
        let shaped = |shape: &dyn Fn(f64) -> f64, a: f64, b: f64| {
            let s: Vec<f64> = (0..n).map(|x| shape(field.get(x))).collect();
            InitialData::symmetric(
                VertexFunction::from_fn(n, |x| a * s[x]),
                VertexFunction::from_fn(n, |x| b * s[x]),
            )
        };
        Ok(match *self {
            DataSpec::Gaussian { amplitude, width, velocity } => {
                if !(width > 0.0) {
                    return Err(CliError::Config(format!("gaussian width {width} must be positive")));
                }
                shaped(&|d| (-d * d / (2.0 * width * width)).exp(), amplitude, velocity)
            }
            DataSpec::Bump { amplitude, radius, velocity } => {
                if !(radius > 0.0) {
                    return Err(CliError::Config(format!("bump radius {radius} must be positive")));
                }
                shaped(&|d| phi(d / radius), amplitude, velocity)
            }
            DataSpec::Random { amplitude, radius } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut draw = || {
                    VertexFunction::from_fn(n, |x| {
                        let r: f64 = rng.random();
                        if field.get(x) <= radius { amplitude * r } else { 0.0 }
                    })
                };
                InitialData { u0: draw(), u1: draw(), v0: draw(), v1: draw() }
            }
            DataSpec::Table { ref u0, ref u1, ref v0, ref v1 } => {
                for f in [u0, u1, v0, v1] {
                    if f.len() != n {
                        return Err(CliError::Config(format!(
                            "data table has {} entries for {n} vertices",
                            f.len()
                        )));
                    }
                }
                InitialData {
                    u0: u0.clone().into(),
                    u1: u1.clone().into(),
                    v0: v0.clone().into(),
                    v1: v1.clone().into(),
                }
            }
        })
    }
}

fn default_safety() -> f64 {
    DEFAULT_SAFETY
}

fn default_threshold() -> f64 {
    DEFAULT_BLOWUP_THRESHOLD
}

fn default_max_steps() -> usize {
    DEFAULT_MAX_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub data: DataSpec,
    /// Horizon.
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Fixed step; `safety × cfl_dt` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default)]
    pub coupling: Coupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    Radial,
    Separable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakSpec {
    #[serde(default)]
    pub family: Family,
    #[serde(rename = "R")]
    pub radius: f64,
    /// Power `s`; the default exponent of the system when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default)]
    pub field: Field,
    #[serde(default)]
    pub quadrature: WeakQuadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSpec {
    #[serde(default)]
    pub family: Family,
    #[serde(rename = "R")]
    pub radii: Vec<f64>,
    /// Power of the separable family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_per_unit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub p: Vec<f64>,
    /// Diagonal `q = p` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    /// Also run the simulation block for each cell.
    #[serde(default)]
    pub simulate: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Blow-up event JSON of `simulate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<PathBuf>,
}

fn default_metric() -> MetricSpec {
    MetricSpec::GraphDistance
}

fn default_mode() -> CriterionMode {
    CriterionMode::Theorem1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    #[serde(default = "default_metric")]
    pub metric: MetricSpec,
    /// Label of `x₀`; the generator's centre or the first vertex when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<u64>,
    pub params: SystemParams,
    #[serde(default)]
    pub h1: Potential,
    #[serde(default)]
    pub h2: Potential,
    #[serde(default = "default_mode")]
    pub mode: CriterionMode,
    /// Radii of the criterion; generated from `R0` when absent.
    #[serde(rename = "R_grid", default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub criterion: CriterionOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<WeakSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<LemmaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: OutputSpec,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.check_files()?;
        Ok(cfg)
    }

    fn check_files(&self) -> Result<(), CliError> {
        let files = [
            match &self.graph {
                GraphSpec::File { path } => Some(path),
                _ => None,
            },
            match &self.metric {
                MetricSpec::Table { path } => Some(path),
                _ => None,
            },
        ];
        for path in files.into_iter().flatten() {
            if !path.is_file() {
                return Err(CliError::Config(format!("{} does not exist", path.display())));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Graph, metric and distances from `x₀`.
pub struct Setup {
    pub graph: WeightedGraph,
    pub metric: Metric,
    pub x0: usize,
    pub field: DistanceField,
}

impl Setup {
    pub fn new(graph: GraphSpec, metric: &MetricSpec, x0: Option<u64>) -> Result<Self, CliError> {
        let graph = graph.build()?;
        let metric = metric.build(&graph)?;
        let x0 = match x0 {
            Some(label) => graph
                .index_of_label(label)
                .ok_or_else(|| CliError::Config(format!("no vertex with id {label}")))?,
            None => graph.default_origin(),
        };
        let field = metric.distance_field(&graph, x0)?;
        Ok(Self { graph, metric, x0, field })
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        Self::new(cfg.graph.clone(), &cfg.metric, cfg.x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            graph: GraphSpec::Lattice { dim: 2, half_width: 10 },
            metric: MetricSpec::LatticeL2,
            x0: Some(3),
            params: SystemParams::new(2.0, 3.0),
            h1: Potential::RadialTemporal { a: 0.5, b: -0.25 },
            h2: Potential::Table { values: vec![1.0, 2.0] },
            mode: CriterionMode::Theorem2,
            r_grid: Some(vec![2.0, 4.0, 8.0]),
            criterion: CriterionOptions::default(),
            simulation: Some(SimulationSpec {
                data: DataSpec::Bump { amplitude: 0.1, radius: 3.0, velocity: 0.0 },
                horizon: 10.0,
                dt: Some(0.01),
                safety: 0.5,
                threshold: 1e6,
                max_steps: 1000,
                coupling: Coupling::Uncoupled,
            }),
            weak: Some(WeakSpec {
                family: Family::Separable,
                radius: 4.0,
                s: Some(6.0),
                field: Field::V,
                quadrature: WeakQuadrature::Trapezoid,
            }),
            lemma: Some(LemmaSpec { family: Family::Radial, radii: vec![8.0, 16.0], s: None, points_per_unit: Some(8.0) }),
            sweep: Some(SweepSpec { p: vec![1.5, 2.0], q: None, simulate: true }),
            seed: 7,
            outputs: OutputSpec { out: Some("out.json".into()), events: None },
        }
    }

    #[test]
    fn round_trip() {
        let cfg = sample();
        let back: ExperimentConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), cfg.to_json());
    }

    #[test]
    fn minimal_document() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"graph":{"kind":"path","n":5},"params":{"p":2,"q":2}}"#).unwrap();
        assert_eq!(cfg.metric, MetricSpec::GraphDistance);
        assert_eq!(cfg.h1, Potential::one());
        assert_eq!(cfg.mode, CriterionMode::Theorem1);
        assert_eq!(cfg.params.r0, 8.0);
    }

    #[test]
    fn seeded_data_is_reproducible() {
        let field = DistanceField::from_values(0, vec![0.0, 1.0, 2.0, 3.0]);
        let spec = DataSpec::Random { amplitude: 1.0, radius: 2.0 };
        let a = spec.build(&field, 11).unwrap();
        assert_eq!(a, spec.build(&field, 11).unwrap());
        assert_ne!(a, spec.build(&field, 12).unwrap());
        assert_eq!(a.u0[3], 0.0);
    }
}
