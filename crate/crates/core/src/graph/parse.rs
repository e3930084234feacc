use super::{Graph, GraphError};

/// Parses the edge-list text format.
///
/// One `u v` pair per line (0-based). Blank lines and lines starting with `#`
/// are ignored; LF and CRLF endings are accepted. An optional `n=<count>` line
/// fixes the vertex count, otherwise it is `1 + max index`.
pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("n=") {
            if declared_n.is_some() {
                return Err(parse_err(line, "repeated n= header"));
            }
            if !edges.is_empty() {
                return Err(parse_err(line, "n= header must precede edges"));
            }
            let n = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad vertex count '{}'", rest.trim())))?;
            declared_n = Some(n);
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(line, format!("expected two vertex indices, got '{trimmed}'")));
        };
        let u = parse_index(a, line)?;
        let v = parse_index(b, line)?;
        edges.push((line, (u, v)));
    }
    let n = match declared_n {
        Some(n) => n,
        None => edges.iter().map(|&(_, (u, v))| u.max(v) + 1).max().unwrap_or(0),
    };
    Graph::from_numbered_edges(n, &edges)
}

fn parse_index(field: &str, line: usize) -> Result<usize, GraphError> {
    field
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("'{field}' is not a vertex index")))
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}
