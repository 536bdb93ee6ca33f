//! The fully discrete semi-Lagrangian scheme and its Gauss-Seidel fixed-point
//! iteration.
//!
//! At an interior node x = pi_j(t) the update is
//!
//!   min over q in `[-1,1]` with `t - h q` in `[0, l_j]` of
//!       `I_j[W](t - h q) + h f(x) |q|`
//!
//! where I_j is the piecewise-linear interpolant on arc j. The objective is
//! piecewise linear in q, so its infimum is attained on the finite candidate
//! set {feasibility endpoints} + {q mapping onto a grid node}; the update
//! evaluates exactly that set. Interior vertices take the minimum over all
//! incident arcs with the control sign fixed by the arc orientation, and
//! boundary vertices are pinned to their Dirichlet value.
//!
//! In transformed mode the iteration is read through w = 1 - exp(-u). With
//! the transform applied to the interpolated value the node update
//!
//!   `w <- exp(-h f |q|) (1 - exp(-I_j[u])) + 1 - exp(-h f |q|)`
//!   `  =  1 - exp(-(h f |q| + I_j[u]))`
//!
//! is a strictly monotone function of the direct objective, so both modes
//! produce identical iterates and controls; the mode changes the metric in
//! which residuals are measured (and in which the iteration provably
//! contracts with factor exp(-h eta)).

use crate::error::SolveError;
use crate::grid::{Grid, NodeField};
use crate::network::Network;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationVariable {
    Direct,
    Kruzkov,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Semi-Lagrangian step (length units).
    pub h: f64,
    /// Sup-norm stopping threshold for one full sweep.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub iteration_variable: IterationVariable,
    pub record_controls: bool,
}

impl SolverConfig {
    pub fn new(h: f64) -> Self {
        Self {
            h,
            tolerance: tol::DEFAULT_TOLERANCE,
            max_sweeps: tol::DEFAULT_MAX_SWEEPS,
            iteration_variable: IterationVariable::Direct,
            record_controls: false,
        }
    }

    /// The well-posedness theory wants dx <= h/2; the reference experiments
    /// all run dx = h. Violations are surfaced as a warning, not an error.
    pub fn warnings(&self, grid: &Grid) -> Vec<String> {
        let mut w = Vec::new();
        if grid.dx_max > self.h / 2.0 + 1e-15 {
            w.push(format!(
                "grid step {:.6} exceeds h/2 = {:.6}; uniqueness theory assumes dx <= h/2",
                grid.dx_max,
                self.h / 2.0
            ));
        }
        w
    }
}

/// Argmin record of one node update: the arc the control steps into and the
/// signed control q* in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub arc: usize,
    pub q: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub values: NodeField,
    pub controls: Option<Vec<Control>>,
    /// Step the controls were recorded at.
    pub h: f64,
    pub sweeps_used: usize,
    /// Residual in the iteration variable (u directly, w in transformed mode).
    pub final_residual: f64,
    pub converged: bool,
    /// Sup-norm change per sweep, in the iteration variable.
    pub residual_history: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    q: f64,
    arc: usize,
}

/// Deterministic preference order: lower objective, then larger |q|, then
/// negative q, then lower arc id. Ties on the objective are broken toward
/// the largest step so that recorded controls march toward the boundary
/// across the flat objectives that constant costs produce.
fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.value != b.value {
        return a.value < b.value;
    }
    let (qa, qb) = (a.q.abs(), b.q.abs());
    if qa != qb {
        return qa > qb;
    }
    if a.q != b.q {
        return a.q < b.q;
    }
    a.arc < b.arc
}

/// Update operators bound to one network/grid pair with precomputed costs.
pub struct Solver<'a> {
    pub net: &'a Network,
    pub grid: &'a Grid,
    pub h: f64,
    f_node: Vec<f64>,
    f_vertex: Vec<f64>,
}

impl<'a> Solver<'a> {
    pub fn new(net: &'a Network, grid: &'a Grid, h: f64) -> Result<Self, SolveError> {
        assert!(h > 0.0, "step h must be positive");
        let mut f_node = Vec::with_capacity(grid.node_count());
        for gid in 0..grid.node_count() {
            let (arc, m) = grid.node_arc[gid];
            let t = grid.arcs[arc].ts[m];
            let f = net.cost.eval(&grid.node_positions[gid], arc, t);
            if f < net.cost.eta {
                return Err(SolveError::NonPositiveCost {
                    node: gid,
                    value: f,
                    eta: net.cost.eta,
                });
            }
            f_node.push(f);
        }
        let f_vertex = net
            .vertices
            .iter()
            .map(|v| net.cost_at_vertex(v.id))
            .collect();
        Ok(Self {
            net,
            grid,
            h,
            f_node,
            f_vertex,
        })
    }

    pub fn max_cost(&self) -> f64 {
        self.f_node
            .iter()
            .chain(self.f_vertex.iter())
            .fold(0.0f64, |a, &b| a.max(b))
    }

    /// Best candidate for the objective restricted to one arc, from the
    /// parameter `t` (a node or vertex position on that arc).
    fn best_on_arc(&self, field: &NodeField, arc: usize, t: f64, f: f64) -> Candidate {
        let ag = &self.grid.arcs[arc];
        let l = ag.length();
        let h = self.h;
        let q_hi = (t / h).min(1.0);
        let q_lo = ((t - l) / h).max(-1.0);
        let foot_lo = t - h * q_hi;
        let foot_hi = t - h * q_lo;
        // contiguous node range whose feet are feasible
        let ts = &ag.ts;
        let k_lo = ts.partition_point(|&x| x < foot_lo - tol::PARAM_SLACK);
        let k_hi = ts.partition_point(|&x| x <= foot_hi + tol::PARAM_SLACK);
        let mut best: Option<Candidate> = None;
        let consider = |c: Candidate, best: &mut Option<Candidate>| match best {
            Some(b) => {
                if better(&c, b) {
                    *best = Some(c);
                }
            }
            None => *best = Some(c),
        };
        for k in k_lo..k_hi {
            let q = ((t - ts[k]) / h).clamp(q_lo, q_hi);
            let c = Candidate {
                value: field[ag.offset + k] + h * f * q.abs(),
                q,
                arc,
            };
            consider(c, &mut best);
        }
        // feasibility endpoints at full step; feet may fall inside a cell
        if q_hi == 1.0 {
            let v = self.grid.interpolate(field, arc, t - h).unwrap() + h * f;
            consider(
                Candidate {
                    value: v,
                    q: 1.0,
                    arc,
                },
                &mut best,
            );
        }
        if q_lo == -1.0 {
            let v = self.grid.interpolate(field, arc, t + h).unwrap() + h * f;
            consider(
                Candidate {
                    value: v,
                    q: -1.0,
                    arc,
                },
                &mut best,
            );
        }
        best.expect("feasible q interval is never empty (q = 0)")
    }

    /// Update of a node strictly inside an arc.
    pub fn local_update(&self, field: &NodeField, arc: usize, m: usize) -> (f64, Control) {
        let t = self.grid.arcs[arc].ts[m];
        let f = self.f_node[self.grid.node_index(arc, m)];
        let c = self.best_on_arc(field, arc, t, f);
        (c.value, Control { arc: c.arc, q: c.q })
    }

    /// Update of an interior vertex: minimum over all incident arcs, control
    /// sign determined by the arc orientation at the vertex.
    pub fn vertex_update(&self, field: &NodeField, vertex: usize) -> (f64, Control) {
        let f = self.f_vertex[vertex];
        let mut best: Option<Candidate> = None;
        for arc_id in self.net.incident_arcs(vertex) {
            let a = &self.net.arcs[arc_id];
            let t = if a.start == vertex {
                0.0
            } else {
                self.grid.arcs[arc_id].length()
            };
            let c = self.best_on_arc(field, arc_id, t, f);
            match &mut best {
                Some(b) => {
                    if better(&c, b) {
                        *b = c;
                    }
                }
                None => best = Some(c),
            }
        }
        let c = best.expect("vertex has at least one incident arc");
        (c.value, Control { arc: c.arc, q: c.q })
    }

    /// Dirichlet value of a boundary vertex.
    pub fn boundary_value(&self, vertex: usize) -> Result<f64, SolveError> {
        self.net
            .boundary
            .get(&vertex)
            .copied()
            .ok_or(SolveError::MissingDirichletValue(vertex))
    }

    fn update_node(&self, field: &NodeField, gid: usize) -> (f64, Control) {
        let (arc, m) = self.grid.node_arc[gid];
        match self.grid.node_vertex[gid] {
            Some(v) => {
                if let Some(&g) = self.net.boundary.get(&v) {
                    (g, Control { arc, q: 0.0 })
                } else {
                    self.vertex_update(field, v)
                }
            }
            None => self.local_update(field, arc, m),
        }
    }

    /// One Gauss-Seidel pass in arc-major, node-ascending order. Updated
    /// values are visible immediately within the pass.
    fn pass(&self, field: &mut NodeField) {
        for ag in &self.grid.arcs {
            for m in 0..ag.ts.len() {
                let gid = ag.offset + m;
                let (v, _) = self.update_node(field, gid);
                field[gid] = v;
            }
        }
    }

    /// Synchronize every vertex's node copies to their minimum.
    fn reinitialize_vertices(&self, field: &mut NodeField) {
        for copies in &self.grid.vertex_nodes {
            if copies.len() < 2 {
                continue;
            }
            let m = copies
                .iter()
                .map(|&g| field[g])
                .fold(f64::INFINITY, f64::min);
            for &g in copies {
                field[g] = m;
            }
        }
    }

    /// One full sweep (pass + vertex re-initialization); returns the sup-norm
    /// change of the solution values.
    pub fn sweep(&self, field: &mut NodeField) -> f64 {
        let before = field.clone();
        self.pass(field);
        self.reinitialize_vertices(field);
        field
            .0
            .iter()
            .zip(&before.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    }

    /// Dominating initial field: Dirichlet data on boundary copies, an upper
    /// bound of the solution everywhere else. Starting above the solution is
    /// required for the iteration to select the correct minimum.
    pub fn initial_field(&self) -> NodeField {
        let max_g = self
            .net
            .boundary
            .values()
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let max_g = if max_g.is_finite() { max_g } else { 0.0 };
        let upper = max_g + self.max_cost() * self.net.total_length() + 1.0;
        let mut field = NodeField::constant(self.grid, upper);
        for (v, &g) in &self.net.boundary {
            for &gid in &self.grid.vertex_nodes[*v] {
                field[gid] = g;
            }
        }
        field
    }

    /// Recompute the argmin record of every node against the converged field
    /// without modifying it.
    fn record_controls(&self, field: &NodeField) -> Vec<Control> {
        (0..self.grid.node_count())
            .map(|gid| self.update_node(field, gid).1)
            .collect()
    }
}

/// Run the fixed-point iteration to convergence.
pub fn solve(net: &Network, grid: &Grid, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    let solver = Solver::new(net, grid, cfg.h)?;
    let mut field = solver.initial_field();
    let mut history = Vec::new();
    let mut sweeps = 0;
    let mut converged = false;
    let mut final_residual = f64::INFINITY;
    let mut before = field.clone();
    while sweeps < cfg.max_sweeps {
        before.0.copy_from_slice(&field.0);
        solver.pass(&mut field);
        solver.reinitialize_vertices(&mut field);
        sweeps += 1;
        let mut u_res = 0.0f64;
        let mut w_res = 0.0f64;
        for (a, b) in field.0.iter().zip(&before.0) {
            u_res = u_res.max((a - b).abs());
            w_res = w_res.max(((-a).exp() - (-b).exp()).abs());
        }
        let (metric, gate) = match cfg.iteration_variable {
            IterationVariable::Direct => (u_res, u_res <= cfg.tolerance),
            IterationVariable::Kruzkov => {
                (w_res, u_res <= cfg.tolerance && w_res <= cfg.tolerance)
            }
        };
        history.push(metric);
        final_residual = metric;
        if gate {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SolveError::NotConverged {
            sweeps,
            residual: final_residual,
            tolerance: cfg.tolerance,
        });
    }
    let controls = cfg
        .record_controls
        .then(|| solver.record_controls(&field));
    Ok(SolveResult {
        values: field,
        controls,
        h: cfg.h,
        sweeps_used: sweeps,
        final_residual,
        converged,
        residual_history: history,
    })
}

#[derive(Debug, Clone)]
pub struct CompatViolation {
    pub x: usize,
    pub y: usize,
    /// Amount by which g(x) - g(y) exceeds S(y, x).
    pub excess: f64,
}

#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub violations: Vec<CompatViolation>,
}

impl CompatibilityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check g(x) - g(y) <= S(y, x) over all ordered boundary pairs, where
/// `distance` returns the minimal running cost S between two vertices.
pub fn check_compatibility<F: Fn(usize, usize) -> f64>(
    net: &Network,
    distance: F,
) -> CompatibilityReport {
    let mut violations = Vec::new();
    for (&x, &gx) in &net.boundary {
        for (&y, &gy) in &net.boundary {
            if x == y {
                continue;
            }
            let s = distance(y, x);
            if gx - gy > s + tol::COMPATIBILITY_SLACK {
                violations.push(CompatViolation {
                    x,
                    y,
                    excess: gx - gy - s,
                });
            }
        }
    }
    CompatibilityReport { violations }
}
