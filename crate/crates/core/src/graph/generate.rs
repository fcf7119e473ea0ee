use super::{GraphBuilder, Lattice, WeightedGraph};
use crate::error::{Error, Result};

const MAX_VERTICES: usize = 50_000_000;

/// `ℤ^N ∩ [−L, L]^N` with nearest-neighbour edges, `ω ≡ 1`, `μ ≡ 1`.
/// Vertices are ordered lexicographically by coordinate.
pub fn generate_lattice(dim: usize, half_width: usize) -> Result<WeightedGraph> {
    if !(1..=4).contains(&dim) {
        return Err(Error::InvalidParameter(format!(
            "lattice dimension must be in 1..=4, got {dim}"
        )));
    }
    if half_width < 1 {
        return Err(Error::InvalidParameter("lattice half-width must be ≥ 1".into()));
    }
    let side = 2 * half_width + 1;
    let n = side
        .checked_pow(dim as u32)
        .filter(|&n| n <= MAX_VERTICES)
        .ok_or_else(|| Error::InvalidParameter(format!("lattice {side}^{dim} is too large")))?;

    let l = half_width as i64;
    let mut coords = Vec::with_capacity(n * dim);
    let mut boundary = Vec::with_capacity(n);
    let mut point = vec![-l; dim];
    for _ in 0..n {
        coords.extend_from_slice(&point);
        boundary.push(point.iter().any(|c| c.abs() == l));
        // Odometer increment, last axis fastest.
        for axis in (0..dim).rev() {
            if point[axis] < l {
                point[axis] += 1;
                break;
            }
            point[axis] = -l;
        }
    }

    let mut b = GraphBuilder::with_vertices(vec![1.0; n]);
    let mut stride = 1;
    for axis in (0..dim).rev() {
        for x in 0..n {
            if coords[x * dim + axis] < l {
                b.add_edge(x, x + stride, 1.0);
            }
        }
        stride *= side;
    }
    b.lattice(Lattice {
        dim,
        half_width,
        coords,
    })
    .boundary(boundary);
    b.build_unchecked()
}

/// Rooted `b`-ary tree of the given depth, vertices in breadth-first order
/// with the root at index 0. The deepest level is marked as truncation
/// boundary.
pub fn generate_tree(branching: usize, depth: usize) -> Result<WeightedGraph> {
    if branching < 2 || depth < 1 {
        return Err(Error::InvalidParameter(format!(
            "tree needs branching ≥ 2 and depth ≥ 1, got ({branching}, {depth})"
        )));
    }
    let mut n = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level = level
            .checked_mul(branching)
            .ok_or_else(|| Error::InvalidParameter("tree is too large".into()))?;
        n += level;
    }
    if n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!("tree with {n} vertices is too large")));
    }
    let leaves_start = n - level;
    let mut b = GraphBuilder::with_vertices(vec![1.0; n]);
    for child in 1..n {
        b.add_edge((child - 1) / branching, child, 1.0);
    }
    b.boundary((0..n).map(|x| x >= leaves_start).collect());
    b.build_unchecked()
}

/// Path `0 – 1 – … – (n−1)` with unit weights.
pub fn generate_path(n: usize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("path needs n ≥ 2, got {n}")));
    }
    let mut b = GraphBuilder::with_vertices(vec![1.0; n]);
    for x in 0..n - 1 {
        b.add_edge(x, x + 1, 1.0);
    }
    b.build_unchecked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;

    #[test]
    fn lattice_counts() {
        let g = generate_lattice(1, 2).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (5, 4));
        let g = generate_lattice(2, 1).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (9, 12));
        let g = generate_lattice(2, 50).unwrap();
        assert_eq!(g.num_vertices(), 10201);
        assert!(validate_graph(&g).is_valid());
    }

    #[test]
    fn lattice_coordinates_and_origin() {
        let g = generate_lattice(3, 2).unwrap();
        let lat = g.lattice().unwrap();
        let o = g.default_origin();
        assert_eq!(lat.coords(o), &[0, 0, 0]);
        for x in 0..g.num_vertices() {
            assert_eq!(lat.index_of(lat.coords(x)), Some(x));
            let c = lat.coords(x);
            for (y, _) in g.neighbors(x) {
                let d: i64 = c.iter().zip(lat.coords(y)).map(|(a, b)| (a - b).abs()).sum();
                assert_eq!(d, 1);
            }
            assert_eq!(g.is_boundary(x), c.iter().any(|v| v.abs() == 2));
        }
    }

    #[test]
    fn lattice_rejects_bad_parameters() {
        assert!(generate_lattice(0, 3).is_err());
        assert!(generate_lattice(5, 3).is_err());
        assert!(generate_lattice(2, 0).is_err());
    }

    #[test]
    fn tree_counts() {
        let g = generate_tree(2, 3).unwrap();
        assert_eq!(g.num_vertices(), 15);
        assert!(validate_graph(&g).is_valid());
        assert_eq!(generate_tree(3, 2).unwrap().num_vertices(), 13);
        assert_eq!(g.boundary().iter().filter(|&&b| b).count(), 8);
        assert!(generate_tree(1, 3).is_err());
        assert!(generate_tree(2, 0).is_err());
    }

    #[test]
    fn path_is_a_path() {
        let g = generate_path(3).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1, 1.0), (1, 2, 1.0)]);
        assert!(validate_graph(&g).is_valid());
        assert!(generate_path(1).is_err());
    }
}
