//! Convergence studies over halving refinement schedules: error norms
//! against an exact or fine-grid reference, observed orders, and report
//! formatting.
//!
//! Norms follow the uniform and L2 norms of the error function on each arc:
//! the piecewise-linear numerical solution is compared with the reference on
//! a subgrid of every cell (not only at nodes), and the maximum over arcs is
//! reported.

use crate::error::StudyError;
use crate::grid::{Grid, NodeField};
use crate::network::Network;
use crate::solver::{solve, SolverConfig};
use crate::tol;

/// Interior evaluation points per grid cell for the error norms.
pub const SAMPLES_PER_CELL: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct ErrorNorms {
    pub linf: f64,
    pub l2: f64,
}

/// Per-arc uniform and L2 norms of (numerical - reference), maximized over
/// arcs. The L2 norm uses the trapezoid rule on the sampled error.
pub fn error_norms<F: Fn(usize, f64) -> f64>(
    grid: &Grid,
    field: &NodeField,
    reference: F,
) -> ErrorNorms {
    let mut linf = 0.0f64;
    let mut l2 = 0.0f64;
    for (arc, ag) in grid.arcs.iter().enumerate() {
        let mut arc_linf = 0.0f64;
        let mut acc = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for cell in 0..ag.node_count() - 1 {
            let (t0, t1) = (ag.ts[cell], ag.ts[cell + 1]);
            let last_cell = cell == ag.node_count() - 2;
            let top = if last_cell {
                SAMPLES_PER_CELL
            } else {
                SAMPLES_PER_CELL - 1
            };
            for k in 0..=top {
                let t = t0 + (t1 - t0) * k as f64 / SAMPLES_PER_CELL as f64;
                let err = (grid.interpolate(field, arc, t).unwrap() - reference(arc, t)).abs();
                arc_linf = arc_linf.max(err);
                if let Some((tp, ep)) = prev {
                    acc += 0.5 * (ep * ep + err * err) * (t - tp);
                }
                prev = Some((t, err));
            }
        }
        linf = linf.max(arc_linf);
        l2 = l2.max(acc.sqrt());
    }
    ErrorNorms { linf, l2 }
}

/// log2 of the error ratio under step halving.
pub fn observed_order(coarse: f64, fine: f64) -> Result<f64, StudyError> {
    if coarse <= tol::ORDER_ZERO_ERROR {
        return Err(StudyError::ZeroError(coarse));
    }
    if fine <= tol::ORDER_ZERO_ERROR {
        return Err(StudyError::ZeroError(fine));
    }
    Ok((coarse / fine).log2())
}

/// Reference solution for a study: a closed-form evaluator or the self-
/// reference protocol on a fine grid.
pub enum Reference<'a> {
    Exact {
        name: String,
        eval: Box<dyn Fn(usize, f64) -> f64 + 'a>,
    },
    FineGrid {
        dx: f64,
    },
}

#[derive(Debug, Clone)]
pub struct StudyRow {
    pub dx: f64,
    pub linf: f64,
    pub ord_linf: Option<f64>,
    pub l2: f64,
    pub ord_l2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    /// `exact:<name>` or `fine:<dx>`.
    pub reference: String,
}

/// Solve at every step of a halving schedule with h = dx and tabulate the
/// error norms and observed orders against the reference.
pub fn run_study(
    net: &Network,
    reference: Reference,
    steps: &[f64],
    tolerance: f64,
    max_sweeps: usize,
) -> Result<StudyReport, StudyError> {
    if steps.len() < 2 {
        return Err(StudyError::TooFewSteps);
    }
    for w in steps.windows(2) {
        if (w[1] - 0.5 * w[0]).abs() > 1e-9 * w[0] {
            return Err(StudyError::StepsNotHalving(w[0], w[1]));
        }
    }
    let (label, eval): (String, Box<dyn Fn(usize, f64) -> f64>) = match reference {
        Reference::Exact { name, eval } => (format!("exact:{name}"), eval),
        Reference::FineGrid { dx } => {
            let grid = Grid::build(net, dx)?;
            let mut cfg = SolverConfig::new(dx);
            cfg.tolerance = tolerance;
            cfg.max_sweeps = max_sweeps;
            let fine = solve(net, &grid, &cfg)?;
            (
                format!("fine:{dx}"),
                Box::new(move |arc, t| grid.interpolate(&fine.values, arc, t).unwrap()),
            )
        }
    };
    let mut rows: Vec<StudyRow> = Vec::with_capacity(steps.len());
    for &dx in steps {
        let grid = Grid::build(net, dx)?;
        let mut cfg = SolverConfig::new(dx);
        cfg.tolerance = tolerance;
        cfg.max_sweeps = max_sweeps;
        let res = solve(net, &grid, &cfg)?;
        let norms = error_norms(&grid, &res.values, &eval);
        let (ord_linf, ord_l2) = match rows.last() {
            Some(prev) => (
                observed_order(prev.linf, norms.linf).ok(),
                observed_order(prev.l2, norms.l2).ok(),
            ),
            None => (None, None),
        };
        rows.push(StudyRow {
            dx,
            linf: norms.linf,
            ord_linf,
            l2: norms.l2,
            ord_l2,
        });
    }
    Ok(StudyReport {
        rows,
        reference: label,
    })
}

/// Floating-point formatting used by every exported table: 17 significant
/// digits, enough to reproduce the f64 bit pattern.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl StudyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dx,linf,ord_linf,l2,ord_l2\n");
        for r in &self.rows {
            let ord = |o: Option<f64>| o.map(fmt_float).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(r.dx),
                fmt_float(r.linf),
                ord(r.ord_linf),
                fmt_float(r.l2),
                ord(r.ord_l2)
            ));
        }
        out
    }

    /// Plain-text table: dx=h | Linf | Ord(Linf) | L2 | Ord(L2).
    pub fn to_table(&self) -> String {
        let mut out = format!("reference: {}\n", self.reference);
        out.push_str(&format!(
            "{:<10} | {:<13} {:<10} | {:<13} {:<10}\n",
            "dx=h", "||.||_inf", "Ord(Linf)", "||.||_2", "Ord(L2)"
        ));
        out.push_str(&"-".repeat(66));
        out.push('\n');
        for r in &self.rows {
            let ord = |o: Option<f64>| match o {
                Some(v) => format!("{v:.4}"),
                None => String::from("-"),
            };
            out.push_str(&format!(
                "{:<10} | {:<13.6e} {:<10} | {:<13.6e} {:<10}\n",
                r.dx,
                r.linf,
                ord(r.ord_linf),
                r.l2,
                ord(r.ord_l2)
            ));
        }
        out
    }
}

/// Longest strictly decreasing suffix of a residual history, ignoring
/// entries at the floating-point noise floor. Used to examine the asymptotic
/// contraction rate of an iteration.
pub fn monotone_tail(history: &[f64]) -> Vec<f64> {
    let positive: Vec<f64> = history.iter().copied().filter(|r| *r > 1e-13).collect();
    if positive.is_empty() {
        return positive;
    }
    let mut start = positive.len() - 1;
    while start > 0 && positive[start - 1] > positive[start] {
        start -= 1;
    }
    positive[start..].to_vec()
}
