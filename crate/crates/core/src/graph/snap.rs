//! SNAP edge-list ingestion: whitespace-separated vertex-id pairs, `#`
//! comment lines, arbitrary (possibly sparse) integer ids. Vertex ids are
//! remapped to dense 0-based indices in sorted id order; self-loops and
//! repeated edges (either orientation) are dropped and counted.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A parsed edge list plus everything needed to trace results back to the
/// original file: the id mapping and the drop counts.
#[derive(Debug)]
pub struct SnapLoad {
    pub graph: Graph,
    /// Original SNAP id of each dense vertex index.
    pub original_ids: Vec<u64>,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

pub fn load_snap_edge_list(path: impl AsRef<Path>) -> Result<SnapLoad> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);

    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let a = tokens.next();
        let b = tokens.next();
        let extra = tokens.next();
        let (a, b) = match (a, b, extra) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::EdgeListParse {
                    path: shown,
                    line: lineno + 1,
                    reason: format!("expected two vertex ids, got `{trimmed}`"),
                })
            }
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|e| Error::EdgeListParse {
                path: shown.clone(),
                line: lineno + 1,
                reason: format!("bad vertex id `{tok}`: {e}"),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            self_loops += 1;
            continue;
        }
        raw_edges.push((a.min(b), a.max(b)));
    }
    if raw_edges.is_empty() {
        return Err(Error::EmptyEdgeList { path: shown });
    }

    let mut id_map: BTreeMap<u64, u32> = BTreeMap::new();
    for &(a, b) in &raw_edges {
        id_map.entry(a).or_insert(0);
        id_map.entry(b).or_insert(0);
    }
    let mut original_ids = Vec::with_capacity(id_map.len());
    for (slot, (&orig, dense)) in id_map.iter_mut().enumerate() {
        *dense = slot as u32;
        original_ids.push(orig);
    }

    let mut edges: Vec<(u32, u32)> = raw_edges
        .iter()
        .map(|&(a, b)| (id_map[&a], id_map[&b]))
        .collect();
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicates = before - edges.len();

    Ok(SnapLoad {
        graph: Graph::new(original_ids.len(), edges)?,
        original_ids,
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    })
}

/// Persists the dense-index → original-id table as two-column CSV.
pub fn write_remap_csv(path: impl AsRef<Path>, original_ids: &[u64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "dense_index,original_id")?;
    for (dense, orig) in original_ids.iter().enumerate() {
        writeln!(out, "{dense},{orig}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn loads_a_plain_path() {
        let f = edge_file("0 1\n1 2\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        assert_eq!(load.graph.num_vertices(), 3);
        assert_eq!(load.graph.num_edges(), 2);
        assert_eq!(load.graph.max_degree(), 2);
        assert_eq!(load.original_ids, vec![0, 1, 2]);
        assert_eq!(load.self_loops_dropped, 0);
        assert_eq!(load.duplicates_dropped, 0);
    }

    #[test]
    fn drops_self_loops_and_remaps_sparse_ids() {
        let f = edge_file("# comment\n5 5\n5 7\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        assert_eq!(load.graph.num_vertices(), 2);
        assert_eq!(load.graph.num_edges(), 1);
        assert_eq!(load.self_loops_dropped, 1);
        assert_eq!(load.original_ids, vec![5, 7]);
        assert_eq!(load.graph.edges(), &[(0, 1)]);
    }

    #[test]
    fn dedupes_either_orientation_and_counts() {
        let f = edge_file("0 1\n1 0\n2 0\n3 1\n0 1\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        assert_eq!(load.duplicates_dropped, 2);
        assert_eq!(load.graph.num_edges(), 3);
        assert_eq!(load.graph.edges(), &[(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn dense_indices_follow_sorted_original_ids() {
        let f = edge_file("30 10\n20 10\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        assert_eq!(load.original_ids, vec![10, 20, 30]);
        assert_eq!(load.graph.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn tabs_and_padding_are_accepted() {
        let f = edge_file("  0\t1 \n\n1\t\t2\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        assert_eq!(load.graph.num_edges(), 2);
    }

    #[test]
    fn malformed_lines_are_reported_with_their_number() {
        let f = edge_file("0 1\n2\n");
        match load_snap_edge_list(f.path()) {
            Err(Error::EdgeListParse { line: 2, reason, .. }) => {
                assert!(reason.contains("expected two vertex ids"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        let f = edge_file("# header\n\n0 1\n0 1 2\n");
        match load_snap_edge_list(f.path()) {
            Err(Error::EdgeListParse { line: 4, .. }) => {}
            other => panic!("expected parse error at line 4, got {other:?}"),
        }

        let f = edge_file("0 1\nx 2\n");
        match load_snap_edge_list(f.path()) {
            Err(Error::EdgeListParse { line: 2, reason, .. }) => {
                assert!(reason.contains("bad vertex id `x`"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        let f = edge_file("-1 2\n");
        assert!(matches!(
            load_snap_edge_list(f.path()),
            Err(Error::EdgeListParse { line: 1, .. })
        ));
    }

    #[test]
    fn files_without_usable_edges_are_rejected() {
        for contents in ["", "# only a comment\n", "3 3\n"] {
            let f = edge_file(contents);
            assert!(matches!(
                load_snap_edge_list(f.path()),
                Err(Error::EmptyEdgeList { .. })
            ));
        }
    }

    #[test]
    fn missing_file_surfaces_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("not_there.txt");
        assert!(matches!(
            load_snap_edge_list(&path),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn remap_csv_round_trip() {
        let f = edge_file("5 7\n7 9\n");
        let load = load_snap_edge_list(f.path()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("remap.csv");
        write_remap_csv(&out, &load.original_ids).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text, "dense_index,original_id\n0,5\n1,7\n2,9\n");
    }
}
