//! Shortest-path reconstruction from the argmin controls recorded at the
//! converged solution.
//!
//! From the grid node nearest to the requested start, the walk repeatedly
//! steps to the foot point of the node's recorded control, snaps to the
//! nearest node of the target arc, and stops at a boundary vertex. Both the
//! foot and the snapped node enter the point list, so consecutive points
//! share an arc and are never more than h apart.

use crate::error::PathError;
use crate::geometry::NetworkPoint;
use crate::grid::Grid;
use crate::network::Network;
use crate::solver::SolveResult;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub arc: usize,
    pub t: f64,
    pub cumulative_cost: f64,
}

/// A discrete approximate shortest path to the boundary.
#[derive(Debug, Clone)]
pub struct NetworkPath {
    pub points: Vec<PathPoint>,
    /// Total accumulated running cost, sum of h f |q| over the steps.
    pub cost: f64,
}

fn nearest_node(grid: &Grid, arc: usize, t: f64) -> usize {
    let ts = &grid.arcs[arc].ts;
    let i = ts.partition_point(|&x| x < t);
    if i == 0 {
        return grid.arcs[arc].offset;
    }
    if i >= ts.len() {
        return grid.arcs[arc].offset + ts.len() - 1;
    }
    // ties snap to the lower node
    if t - ts[i - 1] <= ts[i] - t {
        grid.arcs[arc].offset + i - 1
    } else {
        grid.arcs[arc].offset + i
    }
}

fn node_cost(net: &Network, grid: &Grid, gid: usize) -> f64 {
    match grid.node_vertex[gid] {
        Some(v) => net.cost_at_vertex(v),
        None => {
            let (arc, m) = grid.node_arc[gid];
            net.cost
                .eval(&grid.node_positions[gid], arc, grid.arcs[arc].ts[m])
        }
    }
}

/// Follow the recorded controls from `start` until a boundary vertex is
/// reached.
pub fn extract_path(
    net: &Network,
    grid: &Grid,
    result: &SolveResult,
    start: NetworkPoint,
    max_steps: usize,
) -> Result<NetworkPath, PathError> {
    let controls = result.controls.as_ref().ok_or(PathError::MissingControls)?;
    let h = result.h;
    let mut gid = match start {
        NetworkPoint::Vertex(v) => {
            if v >= net.vertices.len() {
                return Err(PathError::PointOffNetwork);
            }
            grid.vertex_nodes[v][0]
        }
        NetworkPoint::OnArc { arc, t } => {
            if arc >= net.arcs.len()
                || t < -tol::PARAM_SLACK
                || t > net.arcs[arc].length + tol::PARAM_SLACK
            {
                return Err(PathError::PointOffNetwork);
            }
            nearest_node(grid, arc, t.clamp(0.0, net.arcs[arc].length))
        }
    };
    let mut cost = 0.0;
    let mut points = Vec::new();
    let push = |points: &mut Vec<PathPoint>, arc: usize, t: f64, cost: f64| {
        let dup = points
            .last()
            .is_some_and(|p: &PathPoint| p.arc == arc && (p.t - t).abs() <= tol::PARAM_SLACK);
        if !dup {
            points.push(PathPoint {
                arc,
                t,
                cumulative_cost: cost,
            });
        }
    };
    {
        let (arc, m) = grid.node_arc[gid];
        push(&mut points, arc, grid.arcs[arc].ts[m], cost);
    }
    let mut steps = 0;
    loop {
        if let Some(v) = grid.node_vertex[gid] {
            if net.is_boundary(v) {
                return Ok(NetworkPath { points, cost });
            }
        }
        steps += 1;
        if steps > max_steps {
            return Err(PathError::MaxStepsExceeded(max_steps));
        }
        let control = controls[gid];
        let (own_arc, own_m) = grid.node_arc[gid];
        if control.q == 0.0 {
            return Err(PathError::PathStalled {
                node: gid,
                arc: own_arc,
                t: grid.arcs[own_arc].ts[own_m],
            });
        }
        // parameter of the current node on the control's arc
        let t_here = if control.arc == own_arc {
            grid.arcs[own_arc].ts[own_m]
        } else {
            let v = grid.node_vertex[gid].expect("control switches arcs only at a vertex");
            let a = &net.arcs[control.arc];
            if a.start == v {
                0.0
            } else {
                a.length
            }
        };
        let foot = (t_here - h * control.q).clamp(0.0, net.arcs[control.arc].length);
        cost += h * node_cost(net, grid, gid) * control.q.abs();
        push(&mut points, control.arc, foot, cost);
        gid = nearest_node(grid, control.arc, foot);
        let (arc, m) = grid.node_arc[gid];
        push(&mut points, arc, grid.arcs[arc].ts[m], cost);
    }
}
