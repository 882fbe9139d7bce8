use crate::graph::{topological_sort, Coloring, DiGraph};

use super::MajorityError;

/// Colors a DAG in reverse topological order. Every out-neighbor is colored
/// before its source, and the source takes whichever of the two colors is
/// rarer among them (ties go to color 0), so at most half of its out-edges
/// are monochromatic.
pub fn greedy_dag_2color(g: &DiGraph) -> Result<Coloring, MajorityError> {
    let order = topological_sort(g)?;
    let mut colors = vec![0u32; g.vertex_count()];
    for &v in order.iter().rev() {
        let ones = g
            .out_neighbors(v)
            .iter()
            .filter(|u| colors[u.0] == 1)
            .count();
        let zeros = g.out_degree(v) - ones;
        colors[v.0] = if ones < zeros { 1 } else { 0 };
    }
    Ok(Coloring::new_unchecked(2, colors))
}
