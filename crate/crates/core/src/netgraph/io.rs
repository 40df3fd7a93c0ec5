//! Edge-list text format: one `node_a,node_b,p` record per line, `#` starts a
//! comment. A line holding a single id declares a node, which may be
//! isolated.

use std::fmt::Write as _;
use std::path::Path;

use super::Network;
use crate::error::GraphError;

pub fn parse_edge_list(text: &str) -> Result<Network, GraphError> {
    let mut g = Network::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |msg: String| GraphError::Parse { line: no + 1, msg };
        match fields.as_slice() {
            [id] => {
                g.ensure_node(id);
            }
            [a, b, p] => {
                let p: f64 = p.parse().map_err(|_| err(format!("bad probability `{p}`")))?;
                let i = g.ensure_node(a);
                let j = g.ensure_node(b);
                g.add_edge_idx(i, j, p).map_err(|e| err(e.to_string()))?;
            }
            _ => return Err(err(format!("expected `a,b,p`, got `{line}`"))),
        }
    }
    Ok(g)
}

pub fn read_edge_list(path: &Path) -> Result<Network, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

/// Node declarations first, in index order, so that reading the text back
/// reproduces node indices; then one line per edge.
pub fn write_edge_list(g: &Network) -> String {
    let mut out = String::new();
    for id in g.ids() {
        let _ = writeln!(out, "{id}");
    }
    for (i, j, p) in g.edges() {
        let _ = writeln!(out, "{},{},{}", g.id(i), g.id(j), p);
    }
    out
}

fn cell(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

/// Square matrix as CSV with a header row of node ids and the row id in the
/// first column.
pub fn write_matrix_csv(ids: &[String], m: &[Vec<f64>]) -> String {
    let mut out = String::from("node");
    for id in ids {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    for (id, row) in ids.iter().zip(m) {
        out.push_str(id);
        for &x in row {
            out.push(',');
            out.push_str(&cell(x));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# demo\nx\na,b,0.5\nb, c ,0.25 # trailing\n\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        let again = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again, g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_edge_list("a,b,0.5\na,b\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_edge_list("a,b,x"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a,b,1.5"), Err(GraphError::Parse { line: 1, .. })));
    }

    #[test]
    fn matrix_csv() {
        let s = write_matrix_csv(&["a".into(), "b".into()], &[vec![0.0, f64::INFINITY], vec![f64::INFINITY, 0.0]]);
        assert_eq!(s, "node,a,b\na,0,inf\nb,inf,0\n");
    }
}
