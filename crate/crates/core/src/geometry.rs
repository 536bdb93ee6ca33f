//! Arc-length parametrization of arc geometries and the intrinsic path
//! distance on the network.
//!
//! Every arc is exposed to the rest of the crate through its unit-speed
//! parametrization pi_j : [0, l_j] -> R^N. Segments and polylines are exact;
//! sine arcs carry a cumulative-length table refined on demand by Newton
//! iteration on the quadrature.

use crate::error::GeometryError;
use crate::network::{GeometrySpec, Network};
use crate::tol;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// A point on the network: either interior to an arc (addressed by the
/// arc-length parameter) or a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetworkPoint {
    OnArc { arc: usize, t: f64 },
    Vertex(usize),
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Distance from a point to the segment [a, b].
pub fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let denom = dot(&ab, &ab);
    let s = if denom > 0.0 {
        (dot(&ap, &ab) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let closest: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + s * d).collect();
    euclid(p, &closest)
}

/// Minimal distance between the segments [p0, p1] and [q0, q1] in R^N.
pub fn segment_distance(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64]) -> f64 {
    let u = sub(p1, p0);
    let v = sub(q1, q0);
    let w = sub(p0, q0);
    let (a, b, c) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
    let (d, e) = (dot(&u, &w), dot(&v, &w));
    let denom = a * c - b * b;
    let mut s = if denom > 1e-30 {
        ((b * e - c * d) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = if c > 1e-30 {
        ((b * s + e) / c).clamp(0.0, 1.0)
    } else {
        0.0
    };
    // re-clamp s against the clamped t
    if a > 1e-30 {
        s = ((b * t - d) / a).clamp(0.0, 1.0);
    }
    if c > 1e-30 {
        t = ((b * s + e) / c).clamp(0.0, 1.0);
    }
    let cp: Vec<f64> = p0.iter().zip(&u).map(|(x, du)| x + s * du).collect();
    let cq: Vec<f64> = q0.iter().zip(&v).map(|(x, dv)| x + t * dv).collect();
    euclid(&cp, &cq)
}

/// Adaptive Simpson quadrature to a relative tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let left = simpson(f, a, c);
        let right = simpson(f, c, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            left + right + delta / 15.0
        } else {
            recurse(f, a, c, left, 0.5 * eps, depth - 1)
                + recurse(f, c, b, right, 0.5 * eps, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let whole = simpson(f, a, b);
    let scale = whole.abs().max(b - a);
    recurse(f, a, b, whole, rel_tol * scale, 48)
}

#[derive(Debug, Clone)]
enum ParamKind {
    /// Segment or polyline: vertices of the polygonal chain with cumulative
    /// lengths; the arc-length parametrization is exact.
    Chain { points: Vec<Vec<f64>>, cum: Vec<f64> },
    /// Planar sine curve base + s*axis + amplitude*sin(omega*s)*normal with
    /// unit orthogonal axis/normal; arc length by quadrature.
    Sine {
        base: Vec<f64>,
        axis: Vec<f64>,
        normal: Vec<f64>,
        amplitude: f64,
        omega: f64,
        extent: f64,
        /// raw parameters s_k and cumulative arc length at s_k
        table_s: Vec<f64>,
        table_len: Vec<f64>,
    },
}

/// Unit-speed parametrization of one arc.
#[derive(Debug, Clone)]
pub struct ArcParametrization {
    length: f64,
    kind: ParamKind,
}

fn sine_speed(amplitude: f64, omega: f64, s: f64) -> f64 {
    let d = amplitude * omega * (omega * s).cos();
    (1.0 + d * d).sqrt()
}

impl ArcParametrization {
    pub fn from_spec(spec: &GeometrySpec) -> Result<Self, GeometryError> {
        let kind = match spec {
            GeometrySpec::Segment { from, to } => {
                if from.len() != to.len() {
                    return Err(GeometryError::DimensionMismatch);
                }
                chain(vec![from.clone(), to.clone()])
            }
            GeometrySpec::Polyline { points } => {
                if points.len() < 2 || points.iter().any(|p| p.len() != points[0].len()) {
                    return Err(GeometryError::DimensionMismatch);
                }
                chain(points.clone())
            }
            GeometrySpec::Sine {
                base,
                axis,
                amplitude,
                angular_frequency,
                extent,
            } => {
                if base.len() != 2 || axis.len() != 2 {
                    return Err(GeometryError::SineDimension(base.len().max(axis.len())));
                }
                let norm = (axis[0] * axis[0] + axis[1] * axis[1]).sqrt();
                if norm < tol::DEGENERATE_LENGTH || *extent <= 0.0 {
                    return Err(GeometryError::DegenerateGeometry(norm.min(*extent)));
                }
                let u = vec![axis[0] / norm, axis[1] / norm];
                // left-hand normal in the plane
                let n = vec![-u[1], u[0]];
                let (a, w, e) = (*amplitude, *angular_frequency, *extent);
                let samples = tol::PARAM_TABLE_SAMPLES;
                let mut table_s = Vec::with_capacity(samples + 1);
                let mut table_len = Vec::with_capacity(samples + 1);
                let speed = |s: f64| sine_speed(a, w, s);
                let mut acc = 0.0;
                table_s.push(0.0);
                table_len.push(0.0);
                for k in 1..=samples {
                    let s0 = e * (k - 1) as f64 / samples as f64;
                    let s1 = e * k as f64 / samples as f64;
                    acc += adaptive_simpson(&speed, s0, s1, tol::QUADRATURE_REL);
                    table_s.push(s1);
                    table_len.push(acc);
                }
                ParamKind::Sine {
                    base: base.clone(),
                    axis: u,
                    normal: n,
                    amplitude: a,
                    omega: w,
                    extent: e,
                    table_s,
                    table_len,
                }
            }
        };
        let length = match &kind {
            ParamKind::Chain { cum, .. } => *cum.last().unwrap(),
            ParamKind::Sine { table_len, .. } => *table_len.last().unwrap(),
        };
        if length < tol::DEGENERATE_LENGTH {
            return Err(GeometryError::DegenerateGeometry(length));
        }
        Ok(Self { length, kind })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ParamKind::Chain { points, .. } => points[0].len(),
            ParamKind::Sine { base, .. } => base.len(),
        }
    }

    /// Point at arc length `t` from the start, for `t` in [0, l] up to slack.
    pub fn eval(&self, arc: usize, t: f64) -> Result<Vec<f64>, GeometryError> {
        if t < -tol::PARAM_SLACK || t > self.length + tol::PARAM_SLACK {
            return Err(GeometryError::OutOfRange {
                arc,
                t,
                len: self.length,
            });
        }
        let t = t.clamp(0.0, self.length);
        Ok(match &self.kind {
            ParamKind::Chain { points, cum } => {
                let i = upper_cell(cum, t);
                let w = (t - cum[i]) / (cum[i + 1] - cum[i]);
                points[i]
                    .iter()
                    .zip(&points[i + 1])
                    .map(|(a, b)| a + w * (b - a))
                    .collect()
            }
            ParamKind::Sine {
                base,
                axis,
                normal,
                amplitude,
                omega,
                extent,
                table_s,
                table_len,
            } => {
                let s = invert_length(table_s, table_len, *amplitude, *omega, t)
                    .clamp(0.0, *extent);
                let y = amplitude * (omega * s).sin();
                vec![base[0] + s * axis[0] + y * normal[0], base[1] + s * axis[1] + y * normal[1]]
            }
        })
    }
}

fn chain(points: Vec<Vec<f64>>) -> ParamKind {
    let mut cum = Vec::with_capacity(points.len());
    cum.push(0.0);
    for w in points.windows(2) {
        let d = euclid(&w[0], &w[1]);
        cum.push(cum.last().unwrap() + d);
    }
    ParamKind::Chain { points, cum }
}

/// Index of the cell [cum[i], cum[i+1]] containing `t` (last cell on ties).
fn upper_cell(cum: &[f64], t: f64) -> usize {
    match cum.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(i) => i.min(cum.len() - 2),
        Err(i) => i.saturating_sub(1).min(cum.len() - 2),
    }
}

/// Solve cumulative_length(s) = target by table lookup plus Newton refinement.
fn invert_length(table_s: &[f64], table_len: &[f64], amplitude: f64, omega: f64, target: f64) -> f64 {
    let i = upper_cell(table_len, target);
    let (s0, s1) = (table_s[i], table_s[i + 1]);
    let (l0, l1) = (table_len[i], table_len[i + 1]);
    let mut s = s0 + (target - l0) / (l1 - l0).max(f64::MIN_POSITIVE) * (s1 - s0);
    let speed = |x: f64| sine_speed(amplitude, omega, x);
    // Newton on L(s) - target; L evaluated incrementally from the table knot.
    for _ in 0..8 {
        let ls = l0 + adaptive_simpson(&speed, s0, s, tol::QUADRATURE_REL * 1e-2);
        let step = (ls - target) / speed(s);
        s -= step;
        s = s.clamp(s0, s1);
        if step.abs() < 1e-14 * (1.0 + s.abs()) {
            break;
        }
    }
    s
}

/// Arc length of a geometry: exact for segments and polylines, quadrature to
/// relative tolerance for sine arcs.
pub fn arc_length(spec: &GeometrySpec) -> Result<f64, GeometryError> {
    Ok(ArcParametrization::from_spec(spec)?.length())
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over an adjacency list; returns distances from `start`.
pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], start: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: start,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(HeapEntry {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    dist
}

/// Shortest-path length along the network between two points.
///
/// The vertex graph with arc-length weights is augmented with the two query
/// points as temporary nodes.
pub fn path_distance(net: &Network, x: NetworkPoint, y: NetworkPoint) -> f64 {
    let nv = net.vertices.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nv + 2];
    let add = |adj: &mut Vec<Vec<(usize, f64)>>, a: usize, b: usize, w: f64| {
        adj[a].push((b, w));
        adj[b].push((a, w));
    };
    for arc in &net.arcs {
        add(&mut adj, arc.start, arc.end, arc.length);
    }
    let attach = |adj: &mut Vec<Vec<(usize, f64)>>, node: usize, p: NetworkPoint| -> usize {
        match p {
            NetworkPoint::Vertex(i) => i,
            NetworkPoint::OnArc { arc, t } => {
                let a = &net.arcs[arc];
                adj[node].push((a.start, t));
                adj[a.start].push((node, t));
                adj[node].push((a.end, a.length - t));
                adj[a.end].push((node, a.length - t));
                node
            }
        }
    };
    let sx = attach(&mut adj, nv, x);
    let sy = attach(&mut adj, nv + 1, y);
    // both points interior to the same arc: the direct route along the arc
    if let (NetworkPoint::OnArc { arc: ax, t: tx }, NetworkPoint::OnArc { arc: ay, t: ty }) = (x, y)
    {
        if ax == ay {
            add(&mut adj, sx, sy, (tx - ty).abs());
        }
    }
    dijkstra(&adj, sx)[sy]
}
