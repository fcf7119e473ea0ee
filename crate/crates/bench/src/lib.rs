//! Fixtures shared by the kernel benchmarks.

use graphwave::graph::generate_lattice;
use graphwave::{DistanceField, InitialData, Metric, VertexFunction, WeightedGraph};

/// `ℤ^dim` truncation with Euclidean distances from the centre.
pub struct Fixture {
    pub graph: WeightedGraph,
    pub field: DistanceField,
}

impl Fixture {
    pub fn lattice(dim: usize, half_width: usize) -> Self {
        let graph = generate_lattice(dim, half_width).expect("lattice within limits");
        let field = Metric::LatticeL2
            .distance_field(&graph, graph.default_origin())
            .expect("lattice metric");
        Self { graph, field }
    }

    /// Smooth, sign-changing test vector.
    pub fn wave(&self) -> VertexFunction {
        VertexFunction::from_fn(self.graph.num_vertices(), |x| {
            let d = self.field.get(x);
            (0.3 * d).sin() * (-d / 20.0).exp()
        })
    }

    /// Small Gaussian data that stays bounded over short horizons.
    pub fn gaussian_data(&self, amplitude: f64) -> InitialData {
        let n = self.graph.num_vertices();
        let f = VertexFunction::from_fn(n, |x| amplitude * (-self.field.get(x).powi(2) / 8.0).exp());
        InitialData::symmetric(f.clone(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        let fx = Fixture::lattice(2, 4);
        assert_eq!(fx.graph.num_vertices(), 81);
        assert_eq!(fx.wave()[fx.graph.default_origin()], 0.0);
        assert_eq!(fx.gaussian_data(0.5).u0[fx.graph.default_origin()], 0.5);
    }
}
