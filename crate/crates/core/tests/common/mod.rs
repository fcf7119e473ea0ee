#![allow(dead_code)]

use graphwave::{GraphBuilder, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random connected graph together with its dense weight matrix.
pub struct RandomGraph {
    pub graph: WeightedGraph,
    pub mu: Vec<f64>,
    pub dense: Vec<Vec<f64>>,
}

/// Spanning tree plus random chords; μ ∈ [0.5, 2], ω ∈ (0, 1].
pub fn random_graph(seed: u64, max_vertices: usize) -> RandomGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_vertices);
    let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    let mut dense = vec![vec![0.0; n]; n];
    let mut b = GraphBuilder::with_vertices(mu.clone());
    let mut put = |x: usize, y: usize, w: f64, dense: &mut Vec<Vec<f64>>| {
        dense[x][y] = w;
        dense[y][x] = w;
        b.add_edge(x, y, w);
    };
    for x in 1..n {
        let parent = rng.random_range(0..x);
        let w = 1.0 - rng.random::<f64>();
        put(x, parent, w, &mut dense);
    }
    let chords = rng.random_range(0..=2 * n);
    for _ in 0..chords {
        let x = rng.random_range(0..n);
        let y = rng.random_range(0..n);
        if x != y && dense[x][y] == 0.0 {
            let w = 1.0 - rng.random::<f64>();
            put(x, y, w, &mut dense);
        }
    }
    RandomGraph {
        graph: b.build().expect("valid by construction"),
        mu,
        dense,
    }
}

pub fn random_function(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// `Δf(x) = Σ_y W[x][y] (f(y) − f(x)) / μ(x)` from the dense matrix.
pub fn dense_laplacian(mu: &[f64], dense: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
    (0..mu.len())
        .map(|x| {
            (0..mu.len())
                .map(|y| dense[x][y] * (f[y] - f[x]))
                .sum::<f64>()
                / mu[x]
        })
        .collect()
}

/// Reference solution of `w'' = w², w(0) = w₀, w'(0) = 0` at `t = k·step`,
/// from classical RK4 refined by step halving until successive passes agree
/// to `1e-11` relative.
pub fn ode_reference(w0: f64, step: f64, count: usize) -> Vec<f64> {
    let rk4 = |sub: usize| -> Vec<f64> {
        let h = step / sub as f64;
        let f = |w: f64, v: f64| (v, w * w);
        let (mut w, mut v) = (w0, 0.0);
        let mut out = vec![w];
        for _ in 1..count {
            for _ in 0..sub {
                let (a1, b1) = f(w, v);
                let (a2, b2) = f(w + 0.5 * h * a1, v + 0.5 * h * b1);
                let (a3, b3) = f(w + 0.5 * h * a2, v + 0.5 * h * b2);
                let (a4, b4) = f(w + h * a3, v + h * b3);
                w += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
                v += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            }
            out.push(w);
        }
        out
    };
    let mut sub = 4;
    let mut prev = rk4(sub);
    loop {
        sub *= 2;
        let next = rk4(sub);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        if change < 1e-11 || sub > 1 << 16 {
            return next;
        }
        prev = next;
    }
}
