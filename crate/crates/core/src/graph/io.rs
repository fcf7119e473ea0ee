//! Text graph format: `v <id> <mu>` and `e <id1> <id2> <omega>` records,
//! one per line, `#` starting a comment.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{GraphBuilder, WeightedGraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad vertex id {tok:?}")))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("bad weight {tok:?}")))?;
    if !w.is_finite() {
        return Err(parse_err(line, format!("weight {tok} is not finite")));
    }
    Ok(w)
}

/// Reads a graph. Ids need not be contiguous; they are mapped to dense
/// indices in increasing id order and kept as labels.
pub fn load_graph<R: BufRead>(reader: R) -> Result<WeightedGraph> {
    let mut vertices: BTreeMap<u64, f64> = BTreeMap::new();
    let mut edges: BTreeMap<(u64, u64), (f64, usize)> = BTreeMap::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(k) => &line[..k],
            None => &line[..],
        };
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["v", id, mu] => {
                let id = parse_id(id, lineno)?;
                let mu = parse_weight(mu, lineno)?;
                if mu <= 0.0 {
                    return Err(parse_err(lineno, format!("nonpositive μ = {mu} for vertex {id}")));
                }
                if vertices.insert(id, mu).is_some() {
                    return Err(parse_err(lineno, format!("vertex {id} declared twice")));
                }
            }
            ["e", a, b, w] => {
                let a = parse_id(a, lineno)?;
                let b = parse_id(b, lineno)?;
                let w = parse_weight(w, lineno)?;
                if a == b {
                    return Err(parse_err(lineno, format!("loop at vertex {a}")));
                }
                if w < 0.0 {
                    return Err(parse_err(lineno, format!("negative weight {w}")));
                }
                let key = (a.min(b), a.max(b));
                if let Some(&(prev, prev_line)) = edges.get(&key) {
                    if prev != w {
                        return Err(parse_err(
                            lineno,
                            format!(
                                "edge {}–{} has weight {w}, conflicting with {prev} on line {prev_line}",
                                key.0, key.1
                            ),
                        ));
                    }
                } else {
                    edges.insert(key, (w, lineno));
                }
            }
            _ => return Err(parse_err(lineno, format!("malformed record {:?}", content.trim()))),
        }
    }

    let labels: Vec<u64> = vertices.keys().copied().collect();
    let index = |id: u64, line: usize| {
        labels
            .binary_search(&id)
            .map_err(|_| parse_err(line, format!("edge references undeclared vertex {id}")))
    };
    let mut b = GraphBuilder::with_vertices(vertices.values().copied().collect());
    for (&(a, c), &(w, line)) in &edges {
        b.add_edge(index(a, line)?, index(c, line)?, w);
    }
    b.labels(labels);
    b.build_unchecked()
}

/// Writes vertices sorted by id, then edges `id1 < id2` in lexicographic
/// order. Weights use the shortest representation that reads back exactly.
pub fn save_graph<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    for x in 0..g.num_vertices() {
        writeln!(out, "v {} {:?}", g.label(x), g.mu(x))?;
    }
    // Labels increase with index, so index order is id order.
    for (x, y, w) in g.edges() {
        writeln!(out, "e {} {} {:?}", g.label(x), g.label(y), w)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_path;

    fn load_str(s: &str) -> Result<WeightedGraph> {
        load_graph(s.as_bytes())
    }

    #[test]
    fn loads_single_edge() {
        let g = load_str("v 0 1.0\nv 1 1.0\ne 0 1 1.0\n").unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 1.0)]);
    }

    #[test]
    fn comments_and_sparse_ids() {
        let g = load_str("# header\nv 10 2.0  # heavy\nv 3 1.0\n\ne 10 3 0.5\n").unwrap();
        assert_eq!(g.label(0), 3);
        assert_eq!(g.label(1), 10);
        assert_eq!(g.mu(1), 2.0);
        assert_eq!(g.weight(0, 1), 0.5);
        assert_eq!(g.index_of_label(10), Some(1));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(load_str("v 0 1.0\ne 0 0 1.0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(load_str("v 0 0.0\n").is_err());
        assert!(load_str("v 0 1\nv 1 1\ne 0 1 1\ne 1 0 2\n").is_err());
        assert!(load_str("v 0 1\nv 1 1\ne 0 1 1\ne 1 0 1\n").is_ok());
        assert!(load_str("v 0 1\nx 0\n").is_err());
        assert!(load_str("v 0 1\ne 0 7 1\n").is_err());
        assert!(load_str("v 0 abc\n").is_err());
        assert!(load_str("v 0 1\nv 0 1\n").is_err());
    }

    #[test]
    fn round_trip_path() {
        let g = generate_path(3).unwrap();
        let mut buf = Vec::new();
        save_graph(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "v 0 1.0\nv 1 1.0\nv 2 1.0\ne 0 1 1.0\ne 1 2 1.0\n"
        );
        assert_eq!(load_graph(&buf[..]).unwrap(), g);
    }
}
