//! Undirected graphs for total-variation trend filtering: edge-list
//! construction, SNAP file ingestion, grid synthesis, the TV energy, the
//! exact TV prox via its dual, and the stochastic GTF potential.

mod gtf;
mod snap;
mod tv_prox;

pub use gtf::{gtf_potential, run_gtf, EdgeBatch, GtfProblem};
pub use snap::{load_snap_edge_list, write_remap_csv, SnapLoad};
pub use tv_prox::{full_tv_prox_dual, full_tv_prox_dual_warm};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Undirected simple graph on vertices `0..num_vertices`, edges stored once
/// as `(v, w)` with `v < w`.
#[derive(Debug, Clone)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph, normalizing edge orientation. Self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    pub fn new(num_vertices: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidParameter {
                name: "num_vertices",
                reason: "must be positive".into(),
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::DegenerateEdge(a as usize));
            }
            let hi = a.max(b) as usize;
            if hi >= num_vertices {
                return Err(Error::IndexOutOfRange {
                    index: hi,
                    dim: num_vertices,
                });
            }
            normalized.push((a.min(b), a.max(b)));
        }
        let mut seen = std::collections::HashSet::with_capacity(normalized.len());
        for &(v, w) in &normalized {
            if !seen.insert((v, w)) {
                return Err(Error::DuplicateEdge {
                    v: v as usize,
                    w: w as usize,
                });
            }
        }
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(v, w) in &normalized {
            adjacency[v as usize].push(w);
            adjacency[w as usize].push(v);
        }
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            num_vertices,
            edges: normalized,
            adjacency,
            max_degree,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// 4-neighbor lattice on `rows × cols` vertices, row-major vertex ids.
pub fn make_grid_graph(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter {
            name: "rows/cols",
            reason: format!("grid dimensions must be positive, got {rows}×{cols}"),
        });
    }
    let at = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges)
}

/// Total-variation energy `λ · Σ_{(v,w)∈E} |x(v) − x(w)|`, each undirected
/// edge counted once.
pub fn tv_energy<F: Real>(x: &[F], g: &Graph, lambda: F) -> Result<F> {
    if x.len() != g.num_vertices {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices,
            got: x.len(),
        });
    }
    let sum: F = g
        .edges
        .iter()
        .map(|&(v, w)| (x[v as usize] - x[w as usize]).abs())
        .sum();
    Ok(lambda * sum)
}
