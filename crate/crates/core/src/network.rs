//! Network description: vertices, oriented arcs with geometry, boundary set
//! with Dirichlet data, running cost, and the structural validation checks.

use crate::error::{GeometryError, NetworkError};
use crate::geometry::{self, euclid, ArcParametrization};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: usize,
    pub position: Vec<f64>,
}

/// Closed set of arc geometries. Parametrizations are by arc length
/// regardless of the native parameter of the description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Segment {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    Polyline {
        points: Vec<Vec<f64>>,
    },
    /// base + s*axis + amplitude*sin(angular_frequency*s)*normal(axis),
    /// s in [0, extent]; planar only.
    Sine {
        base: Vec<f64>,
        axis: Vec<f64>,
        amplitude: f64,
        angular_frequency: f64,
        extent: f64,
    },
}

/// An oriented arc between two vertices. `length` is the arc length of the
/// geometry, computed at construction.
#[derive(Debug, Clone)]
pub struct Arc {
    pub id: usize,
    pub start: usize,
    pub end: usize,
    pub geometry: GeometrySpec,
    pub length: f64,
    pub param: ArcParametrization,
}

/// Running cost f evaluated at embedded coordinates (or per-arc tables),
/// together with its declared positive lower bound eta.
#[derive(Debug, Clone)]
pub struct CostSpec {
    pub kind: CostKind,
    pub eta: f64,
}

#[derive(Debug, Clone)]
pub enum CostKind {
    Constant {
        value: f64,
    },
    /// f(x) = slope * x_1 + intercept
    AffineX1 {
        slope: f64,
        intercept: f64,
    },
    /// f(x) = offset + sin_coeff * sin(sin_freq * x_1) + cos_coeff * cos(cos_freq * x_2)
    Sinusoidal {
        offset: f64,
        sin_coeff: f64,
        sin_freq: f64,
        cos_coeff: f64,
        cos_freq: f64,
    },
    /// Per-arc samples (t, f) interpolated linearly in the arc parameter.
    ExpressionTable {
        arcs: Vec<ArcTable>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcTable {
    pub arc: usize,
    pub samples: Vec<(f64, f64)>,
}

impl CostSpec {
    /// Cost at a network point; `position` are the embedded coordinates of
    /// pi_arc(t).
    pub fn eval(&self, position: &[f64], arc: usize, t: f64) -> f64 {
        match &self.kind {
            CostKind::Constant { value } => *value,
            CostKind::AffineX1 { slope, intercept } => slope * position[0] + intercept,
            CostKind::Sinusoidal {
                offset,
                sin_coeff,
                sin_freq,
                cos_coeff,
                cos_freq,
            } => {
                offset
                    + sin_coeff * (sin_freq * position[0]).sin()
                    + cos_coeff * (cos_freq * position[1]).cos()
            }
            CostKind::ExpressionTable { arcs } => {
                let table = arcs
                    .iter()
                    .find(|a| a.arc == arc)
                    .unwrap_or_else(|| panic!("no cost table for arc {arc}"));
                let s = &table.samples;
                if t <= s[0].0 {
                    return s[0].1;
                }
                for w in s.windows(2) {
                    if t <= w[1].0 {
                        let lambda = (t - w[0].0) / (w[1].0 - w[0].0);
                        return w[0].1 + lambda * (w[1].1 - w[0].1);
                    }
                }
                s[s.len() - 1].1
            }
        }
    }
}

/// An embedded topological network with Dirichlet boundary data.
#[derive(Debug, Clone)]
pub struct Network {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc>,
    /// Boundary vertex ids with their Dirichlet values.
    pub boundary: BTreeMap<usize, f64>,
    pub cost: CostSpec,
    pub dim: usize,
}

impl Network {
    pub fn new(
        vertices: Vec<Vertex>,
        arcs: Vec<(usize, usize, usize, GeometrySpec)>,
        boundary: Vec<(usize, f64)>,
        cost: CostSpec,
    ) -> Result<Self, NetworkError> {
        let mut vertices = vertices;
        vertices.sort_by_key(|v| v.id);
        for (k, v) in vertices.iter().enumerate() {
            if v.id != k {
                return Err(NetworkError::Parse(format!(
                    "vertex ids must be contiguous from 0, found {} at position {k}",
                    v.id
                )));
            }
        }
        let dim = vertices
            .first()
            .map(|v| v.position.len())
            .ok_or_else(|| NetworkError::Parse("network has no vertices".into()))?;
        if vertices.iter().any(|v| v.position.len() != dim) {
            return Err(NetworkError::Parse(
                "vertex positions have mixed dimensions".into(),
            ));
        }
        let mut arcs = arcs;
        arcs.sort_by_key(|a| a.0);
        let built = arcs
            .into_iter()
            .enumerate()
            .map(|(k, (id, start, end, geometry))| {
                if id != k {
                    return Err(NetworkError::Parse(format!(
                        "arc ids must be contiguous from 0, found {id} at position {k}"
                    )));
                }
                for v in [start, end] {
                    if v >= vertices.len() {
                        return Err(NetworkError::UnknownVertex(v, id));
                    }
                }
                let param = ArcParametrization::from_spec(&geometry)?;
                if param.dim() != dim {
                    return Err(NetworkError::Geometry(GeometryError::DimensionMismatch));
                }
                Ok(Arc {
                    id,
                    start,
                    end,
                    length: param.length(),
                    geometry,
                    param,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let boundary_map: BTreeMap<usize, f64> = boundary.into_iter().collect();
        for &v in boundary_map.keys() {
            if v >= vertices.len() {
                return Err(NetworkError::Parse(format!(
                    "boundary references unknown vertex {v}"
                )));
            }
        }
        Ok(Self {
            vertices,
            arcs: built,
            boundary: boundary_map,
            cost,
            dim,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, NetworkError> {
        let file: NetworkFile =
            serde_json::from_str(text).map_err(|e| NetworkError::Parse(e.to_string()))?;
        file.into_network()
    }

    pub fn to_json(&self) -> String {
        NetworkFile::from_network(self).to_string_pretty()
    }

    /// Arc ids incident to a vertex, ascending.
    pub fn incident_arcs(&self, vertex: usize) -> Vec<usize> {
        self.arcs
            .iter()
            .filter(|a| a.start == vertex || a.end == vertex)
            .map(|a| a.id)
            .collect()
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.arcs
            .iter()
            .map(|a| (a.start == vertex) as usize + (a.end == vertex) as usize)
            .sum()
    }

    pub fn is_boundary(&self, vertex: usize) -> bool {
        self.boundary.contains_key(&vertex)
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length).sum()
    }

    /// Cost at the position of a vertex. The same coordinates are used for
    /// every incident arc, so vertex updates see one consistent value.
    pub fn cost_at_vertex(&self, vertex: usize) -> f64 {
        // Table costs are parametrized per arc; take the lowest incident arc.
        if let CostKind::ExpressionTable { .. } = self.cost.kind {
            let Some(&arc) = self.incident_arcs(vertex).first() else {
                return self.cost.eta; // isolated vertex, value never used
            };
            let a = &self.arcs[arc];
            let t = if a.start == vertex { 0.0 } else { a.length };
            return self.cost.eval(&self.vertices[vertex].position, arc, t);
        }
        self.cost.eval(&self.vertices[vertex].position, usize::MAX, 0.0)
    }
}

/// Signed incidence matrix: entry `[i][j]` is +1 if arc j starts at vertex i,
/// -1 if it ends there, 0 otherwise.
///
/// Fails with `InconsistentOrientation` when an arc's geometry endpoints do
/// not match its declared start/end vertices.
pub fn build_incidence(net: &Network) -> Result<Vec<Vec<i8>>, NetworkError> {
    let mut m = vec![vec![0i8; net.arcs.len()]; net.vertices.len()];
    for arc in &net.arcs {
        let p0 = arc.param.eval(arc.id, 0.0).unwrap();
        let p1 = arc.param.eval(arc.id, arc.length).unwrap();
        let start_gap = euclid(&p0, &net.vertices[arc.start].position);
        let end_gap = euclid(&p1, &net.vertices[arc.end].position);
        if start_gap > tol::GEOMETRY_MATCH || end_gap > tol::GEOMETRY_MATCH {
            return Err(NetworkError::InconsistentOrientation {
                arc: arc.id,
                start_gap,
                end_gap,
            });
        }
        m[arc.start][arc.id] = 1;
        m[arc.end][arc.id] = -1;
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(checks: &mut Vec<Check>, name: &'static str, offenders: Vec<String>) {
    checks.push(Check {
        name,
        passed: offenders.is_empty(),
        details: if offenders.is_empty() {
            String::from("ok")
        } else {
            offenders.join("; ")
        },
    });
}

/// Run every structural check and return the full report. Nothing is
/// enforced here; callers decide whether failures abort.
pub fn validate_network(net: &Network) -> ValidationReport {
    let mut checks = Vec::new();

    // distinct vertex positions
    let mut offenders = Vec::new();
    for i in 0..net.vertices.len() {
        for j in i + 1..net.vertices.len() {
            if euclid(&net.vertices[i].position, &net.vertices[j].position) < tol::GEOMETRY_MATCH {
                offenders.push(format!("vertices {i} and {j} coincide"));
            }
        }
    }
    check(&mut checks, "vertex positions pairwise distinct", offenders);

    // arcs join two distinct vertices and geometry endpoints match them
    let mut offenders = Vec::new();
    for arc in &net.arcs {
        if arc.start == arc.end {
            offenders.push(format!("arc {} is a self-loop", arc.id));
            continue;
        }
        let p0 = arc.param.eval(arc.id, 0.0).unwrap();
        let p1 = arc.param.eval(arc.id, arc.length).unwrap();
        if euclid(&p0, &net.vertices[arc.start].position) > tol::GEOMETRY_MATCH
            || euclid(&p1, &net.vertices[arc.end].position) > tol::GEOMETRY_MATCH
        {
            offenders.push(format!("arc {} endpoints off vertices", arc.id));
        }
    }
    check(&mut checks, "arc endpoints lie on declared vertices", offenders);

    // Sampled polylines back the geometric checks below; min-distance
    // predicates run on the polyline segments, so transversal crossings are
    // detected even when the crossing point falls between samples.
    let samples: Vec<Vec<Vec<f64>>> = net
        .arcs
        .iter()
        .map(|arc| {
            (0..=tol::VALIDATION_SAMPLES)
                .map(|k| {
                    let t = arc.length * k as f64 / tol::VALIDATION_SAMPLES as f64;
                    arc.param.eval(arc.id, t).unwrap()
                })
                .collect()
        })
        .collect();

    // #(closure of e_j intersect V) == 2: no third vertex on the arc
    let mut offenders = Vec::new();
    for arc in &net.arcs {
        let threshold = tol::SELF_INTERSECTION_REL * arc.length;
        for v in &net.vertices {
            if v.id == arc.start || v.id == arc.end {
                continue;
            }
            let min = samples[arc.id]
                .windows(2)
                .map(|w| geometry::point_segment_distance(&v.position, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min);
            if min < threshold {
                offenders.push(format!("vertex {} lies on arc {}", v.id, arc.id));
            }
        }
    }
    check(&mut checks, "arcs meet vertices only at endpoints", offenders);

    // arcs are non-self-intersecting: non-adjacent polyline segments stay apart
    let mut offenders = Vec::new();
    for arc in &net.arcs {
        let threshold = tol::SELF_INTERSECTION_REL * arc.length;
        let pts = &samples[arc.id];
        'outer: for i in 0..pts.len() - 1 {
            for j in i + 2..pts.len() - 1 {
                let d = geometry::segment_distance(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]);
                if d < threshold {
                    offenders.push(format!("arc {} self-intersects", arc.id));
                    break 'outer;
                }
            }
        }
    }
    check(&mut checks, "arcs are non-self-intersecting", offenders);

    // pairwise: arcs share at most one vertex and intersect only there
    let mut offenders = Vec::new();
    let segs = tol::VALIDATION_SAMPLES;
    for a in &net.arcs {
        for b in &net.arcs {
            if b.id <= a.id {
                continue;
            }
            let shared: Vec<usize> = [a.start, a.end]
                .into_iter()
                .filter(|v| *v == b.start || *v == b.end)
                .collect();
            if shared.len() > 1 {
                offenders.push(format!("arcs {} and {} share two vertices", a.id, b.id));
                continue;
            }
            let threshold = tol::SELF_INTERSECTION_REL * a.length.min(b.length);
            // polyline segments touching a shared vertex legitimately meet there
            let excluded = |arc: &Arc, seg: usize, v: usize| {
                (arc.start == v && seg < 2) || (arc.end == v && seg >= segs - 2)
            };
            let mut crossing = false;
            'pairs: for i in 0..segs {
                for j in 0..segs {
                    if shared
                        .iter()
                        .any(|&v| excluded(a, i, v) && excluded(b, j, v))
                    {
                        continue;
                    }
                    let d = geometry::segment_distance(
                        &samples[a.id][i],
                        &samples[a.id][i + 1],
                        &samples[b.id][j],
                        &samples[b.id][j + 1],
                    );
                    if d < threshold {
                        crossing = true;
                        break 'pairs;
                    }
                }
            }
            if crossing {
                offenders.push(format!(
                    "arcs {} and {} intersect away from a shared vertex",
                    a.id, b.id
                ));
            }
        }
    }
    check(
        &mut checks,
        "distinct arcs meet in at most one shared vertex",
        offenders,
    );

    // connectivity
    let mut seen = vec![false; net.vertices.len()];
    if !net.vertices.is_empty() {
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for arc in &net.arcs {
                for (p, q) in [(arc.start, arc.end), (arc.end, arc.start)] {
                    if p == v && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
    }
    let offenders: Vec<String> = seen
        .iter()
        .enumerate()
        .filter(|(_, s)| !**s)
        .map(|(v, _)| format!("vertex {v} unreachable from vertex 0"))
        .collect();
    check(&mut checks, "network is connected", offenders);

    // every degree-1 vertex carries Dirichlet data
    let mut offenders = Vec::new();
    for v in &net.vertices {
        if net.degree(v.id) == 1 && !net.is_boundary(v.id) {
            offenders.push(format!("degree-1 vertex {} lacks a Dirichlet value", v.id));
        }
    }
    check(&mut checks, "degree-1 vertices are boundary", offenders);

    check(
        &mut checks,
        "boundary set is nonempty",
        if net.boundary.is_empty() {
            vec!["no boundary vertices".into()]
        } else {
            vec![]
        },
    );

    // cost positivity on sampled points
    let mut offenders = Vec::new();
    for arc in &net.arcs {
        for (k, p) in samples[arc.id].iter().enumerate() {
            let t = arc.length * k as f64 / tol::VALIDATION_SAMPLES as f64;
            let f = net.cost.eval(p, arc.id, t);
            if f < net.cost.eta {
                offenders.push(format!(
                    "f = {f:.3e} < eta = {:.3e} on arc {} at t = {t:.4}",
                    net.cost.eta, arc.id
                ));
                break;
            }
        }
    }
    check(&mut checks, "cost bounded below by eta", offenders);

    // cost continuity across vertices
    let mut offenders = Vec::new();
    for v in &net.vertices {
        let mut values = Vec::new();
        for arc_id in net.incident_arcs(v.id) {
            let arc = &net.arcs[arc_id];
            let t = if arc.start == v.id { 0.0 } else { arc.length };
            values.push(net.cost.eval(&v.position, arc_id, t));
        }
        if let (Some(min), Some(max)) = (
            values.iter().cloned().reduce(f64::min),
            values.iter().cloned().reduce(f64::max),
        ) {
            if max - min > tol::GEOMETRY_MATCH {
                offenders.push(format!(
                    "cost jumps by {:.3e} across vertex {}",
                    max - min,
                    v.id
                ));
            }
        }
    }
    check(&mut checks, "cost continuous across vertices", offenders);

    ValidationReport { checks }
}

// ---------------------------------------------------------------------------
// file format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    vertices: Vec<Vertex>,
    arcs: Vec<ArcFile>,
    boundary: Vec<BoundaryFile>,
    cost: CostFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcFile {
    id: usize,
    start: usize,
    end: usize,
    geometry: GeometrySpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryFile {
    vertex: usize,
    g: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostFile {
    kind: String,
    params: serde_json::Value,
    eta: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineParams {
    slope: f64,
    intercept: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SinusoidalParams {
    offset: f64,
    sin_coeff: f64,
    sin_freq: f64,
    cos_coeff: f64,
    cos_freq: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableParams {
    arcs: Vec<ArcTable>,
}

impl NetworkFile {
    fn into_network(self) -> Result<Network, NetworkError> {
        let parse = |e: serde_json::Error| NetworkError::Parse(e.to_string());
        let kind = match self.cost.kind.as_str() {
            "constant" => {
                let p: ConstantParams = serde_json::from_value(self.cost.params).map_err(parse)?;
                CostKind::Constant { value: p.value }
            }
            "affine-in-x1" => {
                let p: AffineParams = serde_json::from_value(self.cost.params).map_err(parse)?;
                CostKind::AffineX1 {
                    slope: p.slope,
                    intercept: p.intercept,
                }
            }
            "sinusoidal" => {
                let p: SinusoidalParams =
                    serde_json::from_value(self.cost.params).map_err(parse)?;
                CostKind::Sinusoidal {
                    offset: p.offset,
                    sin_coeff: p.sin_coeff,
                    sin_freq: p.sin_freq,
                    cos_coeff: p.cos_coeff,
                    cos_freq: p.cos_freq,
                }
            }
            "expression-table" => {
                let p: TableParams = serde_json::from_value(self.cost.params).map_err(parse)?;
                CostKind::ExpressionTable { arcs: p.arcs }
            }
            other => {
                return Err(NetworkError::Parse(format!("unknown cost kind `{other}`")));
            }
        };
        if self.cost.eta <= 0.0 {
            return Err(NetworkError::Parse(format!(
                "eta must be positive, got {}",
                self.cost.eta
            )));
        }
        Network::new(
            self.vertices,
            self.arcs
                .into_iter()
                .map(|a| (a.id, a.start, a.end, a.geometry))
                .collect(),
            self.boundary.into_iter().map(|b| (b.vertex, b.g)).collect(),
            CostSpec {
                kind,
                eta: self.cost.eta,
            },
        )
    }

    fn from_network(net: &Network) -> Self {
        let (kind, params) = match &net.cost.kind {
            CostKind::Constant { value } => (
                "constant",
                serde_json::to_value(ConstantParams { value: *value }).unwrap(),
            ),
            CostKind::AffineX1 { slope, intercept } => (
                "affine-in-x1",
                serde_json::to_value(AffineParams {
                    slope: *slope,
                    intercept: *intercept,
                })
                .unwrap(),
            ),
            CostKind::Sinusoidal {
                offset,
                sin_coeff,
                sin_freq,
                cos_coeff,
                cos_freq,
            } => (
                "sinusoidal",
                serde_json::to_value(SinusoidalParams {
                    offset: *offset,
                    sin_coeff: *sin_coeff,
                    sin_freq: *sin_freq,
                    cos_coeff: *cos_coeff,
                    cos_freq: *cos_freq,
                })
                .unwrap(),
            ),
            CostKind::ExpressionTable { arcs } => (
                "expression-table",
                serde_json::to_value(TableParams { arcs: arcs.clone() }).unwrap(),
            ),
        };
        NetworkFile {
            vertices: net.vertices.clone(),
            arcs: net
                .arcs
                .iter()
                .map(|a| ArcFile {
                    id: a.id,
                    start: a.start,
                    end: a.end,
                    geometry: a.geometry.clone(),
                })
                .collect(),
            boundary: net
                .boundary
                .iter()
                .map(|(v, g)| BoundaryFile { vertex: *v, g: *g })
                .collect(),
            cost: CostFile {
                kind: kind.to_string(),
                params,
                eta: net.cost.eta,
            },
        }
    }

    fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }
}
