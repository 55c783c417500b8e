use std::fmt::Write as _;

use super::{Graph, GraphError};

const NAMES_DIRECTIVE: &str = "names:";

/// Parses the edge-list format: `#` comments, a header line `n m`, then `m` lines `u v`
/// with `u < v`. A comment of the form `# names: a b c` attaches display names.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(list) = comment.trim().strip_prefix(NAMES_DIRECTIVE) {
                names = Some((line_no, list.split_whitespace().map(str::to_owned).collect()));
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line_no, format!("expected two integers, found `{line}`")));
        }
        let a = parse_num(fields[0], line_no)?;
        let b = parse_num(fields[1], line_no)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= b {
                    return Err(parse_err(line_no, format!("edge `{a} {b}` must satisfy u < v")));
                }
                if b >= n {
                    return Err(parse_err(line_no, format!("vertex {b} out of range 0..{n}")));
                }
                edges.push((a, b, line_no));
            }
        }
    }

    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `n m` header".into()))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    let mut g = Graph::empty(n);
    for (u, v, line_no) in edges {
        g.add_edge(u, v).map_err(|e| parse_err(line_no, e.to_string()))?;
    }
    if let Some((line_no, list)) = names {
        if list.len() != n {
            return Err(parse_err(line_no, format!("{} names for {n} vertices", list.len())));
        }
        g = g.with_names(list);
    }
    Ok(g)
}

/// Writes the edge-list format; names, when present, go into a `# names:` comment.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(names) = g.names() {
        let _ = writeln!(out, "# {NAMES_DIRECTIVE} {}", names.join(" "));
    }
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn parse_num(s: &str, line: usize) -> Result<usize, GraphError> {
    s.parse().map_err(|_| parse_err(line, format!("`{s}` is not a non-negative integer")))
}

fn parse_err(line: usize, message: String) -> GraphError {
    GraphError::Parse { line, message }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_names() {
        let text = "# a path\n# names: x y z\n3 2\n0 1\n1 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.label(2), "z");
        assert_eq!(write_edge_list(&g), "# names: x y z\n3 2\n0 1\n1 2\n");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 1\n1 0\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 3\n").is_err());
        assert!(parse_edge_list("3 2\n0 1\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 x\n").is_err());
    }
}
