use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use super::{DiGraph, VertexId};

/// Kahn's algorithm stalled; `remaining` are the vertices never released.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph has a cycle through {} residual vertices", remaining.len())]
pub struct CycleFound {
    pub remaining: Vec<VertexId>,
}

/// Kahn-style topological sort. Among ready vertices the smallest index is
/// emitted first, so the order is a pure function of the edge set.
pub fn topological_sort(g: &DiGraph) -> Result<Vec<VertexId>, CycleFound> {
    let n = g.vertex_count();
    let mut in_deg = vec![0usize; n];
    for (_, v) in g.edges() {
        in_deg[v.0] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = in_deg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| Reverse(v))
        .collect();

    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(VertexId(u));
        for &v in g.out_neighbors(VertexId(u)) {
            in_deg[v.0] -= 1;
            if in_deg[v.0] == 0 {
                ready.push(Reverse(v.0));
            }
        }
    }

    if order.len() == n {
        Ok(order)
    } else {
        let remaining = (0..n)
            .filter(|&v| in_deg[v] > 0)
            .map(VertexId)
            .collect();
        Err(CycleFound { remaining })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<VertexId> {
        v.iter().copied().map(VertexId).collect()
    }

    #[test]
    fn path_has_unique_order() {
        let g = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(topological_sort(&g).unwrap(), ids(&[0, 1, 2]));
    }

    #[test]
    fn two_cycle_is_reported() {
        let g = DiGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(topological_sort(&g).unwrap_err().remaining, ids(&[0, 1]));
    }

    #[test]
    fn ties_break_to_smallest_index() {
        let g = DiGraph::with_vertices(3);
        assert_eq!(topological_sort(&g).unwrap(), ids(&[0, 1, 2]));
        let g = DiGraph::from_edges(4, &[(3, 0), (2, 1)]).unwrap();
        assert_eq!(topological_sort(&g).unwrap(), ids(&[2, 1, 3, 0]));
    }

    #[test]
    fn cycle_downstream_vertices_are_residual() {
        let g = DiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 1), (2, 3)]).unwrap();
        assert_eq!(topological_sort(&g).unwrap_err().remaining, ids(&[1, 2, 3]));
    }
}
