//! Per-arc partitions with global node indexing, vertex node copies, and the
//! continuous piecewise-linear interpolation operator.
//!
//! Each arc j gets uniform cells of width `dx` plus one closing cell
//! (possibly shorter) ending exactly at the arc length. Every vertex owns one
//! node copy per incident arc; the copies are distinct storage slots that the
//! solver synchronizes after each sweep.

use crate::error::{GeometryError, GridError};
use crate::network::Network;
use crate::tol;

#[derive(Debug, Clone)]
pub struct ArcGrid {
    /// Node parameters: `ts[0] = 0 < ... < ts[last] = arc length`.
    pub ts: Vec<f64>,
    /// Global index of this arc's node 0.
    pub offset: usize,
}

impl ArcGrid {
    pub fn node_count(&self) -> usize {
        self.ts.len()
    }

    pub fn length(&self) -> f64 {
        *self.ts.last().unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub arcs: Vec<ArcGrid>,
    /// Target step; every cell is at most this wide.
    pub dx: f64,
    /// Widest cell actually present.
    pub dx_max: f64,
    /// Per vertex id: global node indices of its copies, in arc order.
    pub vertex_nodes: Vec<Vec<usize>>,
    /// Per global node: Some(vertex id) for vertex copies.
    pub node_vertex: Vec<Option<usize>>,
    /// Per global node: (arc id, local index).
    pub node_arc: Vec<(usize, usize)>,
    /// Embedded coordinates of every node.
    pub node_positions: Vec<Vec<f64>>,
    total: usize,
}

impl Grid {
    pub fn build(net: &Network, dx: f64) -> Result<Self, GridError> {
        let min_len = net
            .arcs
            .iter()
            .map(|a| a.length)
            .fold(f64::INFINITY, f64::min);
        if dx <= 0.0 || !dx.is_finite() || dx >= min_len {
            return Err(GridError::StepTooLarge { dx, min_len });
        }
        let mut arcs = Vec::with_capacity(net.arcs.len());
        let mut node_vertex = Vec::new();
        let mut node_arc = Vec::new();
        let mut node_positions = Vec::new();
        let mut vertex_nodes = vec![Vec::new(); net.vertices.len()];
        let mut offset = 0;
        let mut dx_max = 0.0f64;
        for arc in &net.arcs {
            let l = arc.length;
            // interior nodes at k*dx, closing node exactly at l
            let mut k_max = (l / dx).floor() as usize;
            while k_max > 0 && k_max as f64 * dx >= l - 1e-12 * l.max(1.0) {
                k_max -= 1;
            }
            let mut ts: Vec<f64> = (0..=k_max).map(|k| k as f64 * dx).collect();
            ts.push(l);
            for w in ts.windows(2) {
                dx_max = dx_max.max(w[1] - w[0]);
            }
            for (m, &t) in ts.iter().enumerate() {
                node_arc.push((arc.id, m));
                node_positions.push(arc.param.eval(arc.id, t)?);
                let vertex = if m == 0 {
                    Some(arc.start)
                } else if m == ts.len() - 1 {
                    Some(arc.end)
                } else {
                    None
                };
                if let Some(v) = vertex {
                    vertex_nodes[v].push(offset + m);
                }
                node_vertex.push(vertex);
            }
            arcs.push(ArcGrid { ts, offset });
            offset = node_arc.len();
        }
        Ok(Self {
            arcs,
            dx,
            dx_max,
            vertex_nodes,
            node_vertex,
            node_arc,
            node_positions,
            total: offset,
        })
    }

    pub fn node_count(&self) -> usize {
        self.total
    }

    pub fn node_index(&self, arc: usize, m: usize) -> usize {
        self.arcs[arc].offset + m
    }

    /// Cell index i such that `ts[i] <= t <= ts[i+1]`.
    pub fn locate(&self, arc: usize, t: f64) -> Result<usize, GridError> {
        let ts = &self.arcs[arc].ts;
        let l = *ts.last().unwrap();
        if t < -tol::PARAM_SLACK || t > l + tol::PARAM_SLACK {
            return Err(GridError::Geometry(GeometryError::OutOfRange {
                arc,
                t,
                len: l,
            }));
        }
        let t = t.clamp(0.0, l);
        let i = match ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        Ok(i.min(ts.len() - 2))
    }

    /// Value of the piecewise-linear interpolant of `field` at parameter `t`
    /// on an arc. Exact at nodes; convex combination of the two cell values
    /// elsewhere.
    pub fn interpolate(&self, field: &NodeField, arc: usize, t: f64) -> Result<f64, GridError> {
        let i = self.locate(arc, t)?;
        let ag = &self.arcs[arc];
        let (t0, t1) = (ag.ts[i], ag.ts[i + 1]);
        let w = ((t.clamp(0.0, ag.length()) - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let v0 = field.0[ag.offset + i];
        let v1 = field.0[ag.offset + i + 1];
        Ok(v0 + w * (v1 - v0))
    }
}

/// One real value per global grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField(pub Vec<f64>);

impl NodeField {
    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self(vec![value; grid.node_count()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for NodeField {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for NodeField {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn exact_division_has_uniform_nodes() {
        let net = presets::single_arc(1.0, 0.0, 0.0);
        let grid = Grid::build(&net, 0.25).unwrap();
        assert_eq!(grid.arcs[0].ts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn closing_cell_ends_exactly_at_the_arc_length() {
        let net = presets::single_arc(1.1, 0.0, 0.0);
        let grid = Grid::build(&net, 0.25).unwrap();
        assert_eq!(grid.arcs[0].ts, vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.1]);
        assert!(grid.dx_max <= 0.25 + 1e-15);
    }

    #[test]
    fn step_larger_than_shortest_arc_is_rejected() {
        let net = presets::single_arc(0.2, 0.0, 0.0);
        assert!(matches!(
            Grid::build(&net, 0.25),
            Err(GridError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn vertex_copies_match_degree() {
        let net = presets::y_network(1.0, 1.3, 0.7);
        let grid = Grid::build(&net, 0.1).unwrap();
        for v in &net.vertices {
            assert_eq!(grid.vertex_nodes[v.id].len(), net.degree(v.id));
        }
        let total: usize = grid.arcs.iter().map(|a| a.node_count()).sum();
        assert_eq!(total, grid.node_count());
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_linear_between() {
        let net = presets::single_arc(1.0, 0.0, 0.0);
        let grid = Grid::build(&net, 0.5).unwrap();
        let field = NodeField(vec![0.0, 1.0, 0.0]);
        assert_eq!(grid.interpolate(&field, 0, 0.5).unwrap(), 1.0);
        assert_eq!(grid.interpolate(&field, 0, 0.25).unwrap(), 0.5);
        // linear field reproduced exactly anywhere
        let lin = NodeField(vec![2.0, 2.5, 3.0]);
        for t in [0.1, 0.33, 0.77, 0.99] {
            assert!((grid.interpolate(&lin, 0, t).unwrap() - (2.0 + t)).abs() < 1e-14);
        }
        assert!(grid.interpolate(&field, 0, 1.2).is_err());
    }

    #[test]
    fn basis_weights_form_a_partition_of_unity() {
        let net = presets::single_arc(1.1, 0.0, 0.0);
        let grid = Grid::build(&net, 0.25).unwrap();
        let n = grid.node_count();
        for k in 0..40 {
            let t = 1.1 * k as f64 / 40.0;
            let mut sum = 0.0;
            for j in 0..n {
                let mut unit = NodeField(vec![0.0; n]);
                unit[j] = 1.0;
                let w = grid.interpolate(&unit, 0, t).unwrap();
                assert!((-1e-15..=1.0 + 1e-15).contains(&w), "weight {w} out of [0,1]");
                sum += w;
            }
            assert!((sum - 1.0).abs() < 1e-12, "weights sum to {sum} at t = {t}");
        }
    }

    #[test]
    fn interpolation_is_monotone_in_the_field() {
        let net = presets::single_arc(1.3, 0.0, 0.0);
        let grid = Grid::build(&net, 0.3).unwrap();
        let n = grid.node_count();
        let w1 = NodeField((0..n).map(|i| (i as f64 * 0.7).sin()).collect());
        let w2 = NodeField(w1.0.iter().map(|v| v + 0.05).collect());
        for k in 0..=50 {
            let t = 1.3 * k as f64 / 50.0;
            let a = grid.interpolate(&w1, 0, t).unwrap();
            let b = grid.interpolate(&w2, 0, t).unwrap();
            assert!(a <= b + 1e-15);
        }
    }

    #[test]
    fn interpolation_error_second_order_for_smooth_fields() {
        let net = presets::single_arc(2.0, 0.0, 0.0);
        let dx = 0.05;
        let grid = Grid::build(&net, dx).unwrap();
        let f = |t: f64| (3.0 * t).sin();
        let field = NodeField(grid.arcs[0].ts.iter().map(|&t| f(t)).collect());
        let bound = dx * dx / 8.0 * 9.0; // max |f''| = 9
        for k in 0..=400 {
            let t = 2.0 * k as f64 / 400.0;
            let err = (grid.interpolate(&field, 0, t).unwrap() - f(t)).abs();
            assert!(err <= bound * (1.0 + 1e-12), "err {err} > bound {bound}");
        }
    }
}
