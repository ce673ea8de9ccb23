//! Text formats: edge lists, community files, integer lists.
//!
//! Node ids are 1-based on disk and 0-based in memory.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use abcdo_core::Graph;

use crate::error::{CliError, Result};

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_id(path: &Path, line: usize, field: &str) -> Result<u32> {
    match field.parse::<u32>() {
        Ok(0) => Err(CliError::parse(path, line, "node ids start at 1")),
        Ok(id) => Ok(id - 1),
        Err(_) => Err(CliError::parse(
            path,
            line,
            format!("invalid node id `{field}`"),
        )),
    }
}

/// One edge per line, `u<TAB>v` with `u < v`, sorted, each edge once.
pub fn format_edge_list(edges: &[(u32, u32)]) -> String {
    let mut sorted: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = String::with_capacity(sorted.len() * 12);
    for (u, v) in sorted {
        writeln!(out, "{}\t{}", u + 1, v + 1).expect("string write");
    }
    out
}

/// Reads whitespace-separated pairs of 1-based ids. Lines starting with
/// `#` are skipped.
pub fn parse_edge_list(path: &Path, text: &str) -> Result<Vec<(u32, u32)>> {
    content_lines(text)
        .map(|(line, l)| {
            let mut fields = l.split_whitespace();
            let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
                return Err(CliError::parse(path, line, "expected two node ids"));
            };
            if fields.next().is_some() {
                return Err(CliError::parse(path, line, "expected exactly two fields"));
            }
            Ok((parse_id(path, line, a)?, parse_id(path, line, b)?))
        })
        .collect()
}

/// `node<TAB>label` per node in id order.
pub fn format_labels(labels: &[u32]) -> String {
    let mut out = String::with_capacity(labels.len() * 8);
    for (v, l) in labels.iter().enumerate() {
        writeln!(out, "{}\t{}", v + 1, l).expect("string write");
    }
    out
}

/// Reads a community file. Every node `1..=n` must appear exactly once.
pub fn parse_labels(path: &Path, text: &str) -> Result<Vec<u32>> {
    let mut labels: Vec<Option<u32>> = Vec::new();
    for (line, l) in content_lines(text) {
        let mut fields = l.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CliError::parse(path, line, "expected `node<TAB>label`"));
        };
        let node = parse_id(path, line, a)? as usize;
        let label = b
            .parse::<u32>()
            .map_err(|_| CliError::parse(path, line, format!("invalid label `{b}`")))?;
        if node >= labels.len() {
            labels.resize(node + 1, None);
        }
        if labels[node].replace(label).is_some() {
            return Err(CliError::parse(
                path,
                line,
                format!("node {} listed twice", node + 1),
            ));
        }
    }
    labels
        .iter()
        .enumerate()
        .map(|(v, l)| {
            l.ok_or_else(|| {
                CliError::invalid(format!("{}: node {} has no label", path.display(), v + 1))
            })
        })
        .collect()
}

/// One integer per line.
pub fn parse_integers(path: &Path, text: &str) -> Result<Vec<u32>> {
    content_lines(text)
        .map(|(line, l)| {
            l.parse::<u32>().map_err(|_| {
                CliError::parse(path, line, format!("expected an integer, found `{l}`"))
            })
        })
        .collect()
}

pub fn format_integers(values: impl IntoIterator<Item = u64>) -> String {
    let mut out = String::new();
    for x in values {
        writeln!(out, "{x}").expect("string write");
    }
    out
}

/// Loads an edge list. The node count is the largest id seen, raised to
/// `min_nodes` when a community file covers more nodes.
pub fn load_graph(path: &Path, min_nodes: usize) -> Result<Graph> {
    let edges = parse_edge_list(path, &read_text(path)?)?;
    let n = edges
        .iter()
        .map(|&(u, v)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0)
        .max(min_nodes);
    Ok(Graph::from_edges(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip_is_sorted_and_one_based() {
        let text = format_edge_list(&[(3, 1), (0, 2), (1, 3)]);
        assert_eq!(text, "1\t3\n2\t4\n");
        let parsed = parse_edge_list(Path::new("e"), &text).unwrap();
        assert_eq!(parsed, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_edge_list(Path::new("e.tsv"), "1\t2\n# c\n3\tx\n").unwrap_err();
        assert_eq!(err.to_string(), "e.tsv:3: invalid node id `x`");
        let err = parse_edge_list(Path::new("e.tsv"), "0 1\n").unwrap_err();
        assert!(err.to_string().starts_with("e.tsv:1:"));
        let err = parse_labels(Path::new("c"), "1\t1\n1\t2\n").unwrap_err();
        assert_eq!(err.to_string(), "c:2: node 1 listed twice");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn labels_round_trip() {
        let labels = vec![0, 2, 1, 1];
        let text = format_labels(&labels);
        assert_eq!(text, "1\t0\n2\t2\n3\t1\n4\t1\n");
        assert_eq!(parse_labels(Path::new("c"), &text).unwrap(), labels);
        assert!(parse_labels(Path::new("c"), "2\t1\n").is_err());
    }

    #[test]
    fn integers() {
        assert_eq!(
            parse_integers(Path::new("d"), "5\n\n7\n").unwrap(),
            vec![5, 7]
        );
        assert_eq!(format_integers([1, 2]), "1\n2\n");
        assert!(parse_integers(Path::new("d"), "5\n-1\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        let missing = dir.path().join("no/such/dir/x");
        assert_eq!(write_atomic(&missing, b"").unwrap_err().exit_code(), 4);
    }

    proptest::proptest! {
        #[test]
        fn formats_round_trip(
            edges in proptest::collection::vec((0u32..500, 0u32..500), 0..200),
            labels in proptest::collection::vec(0u32..20, 1..100),
        ) {
            let text = format_edge_list(&edges);
            let back = parse_edge_list(Path::new("e"), &text).unwrap();
            proptest::prop_assert_eq!(format_edge_list(&back), text);
            proptest::prop_assert!(back.iter().all(|&(u, v)| u <= v));
            proptest::prop_assert_eq!(parse_labels(Path::new("c"), &format_labels(&labels)).unwrap(), labels);
        }
    }
}
