//! Bundled example networks used by the test suites, the acceptance harness,
//! and the shipped network files.

use crate::network::{CostKind, CostSpec, GeometrySpec, Network, Vertex};
use std::f64::consts::PI;

/// Arc length of y = sin(2 pi x) over one period, computed by adaptive
/// quadrature of sqrt(1 + (2 pi cos 2 pi t)^2) and cross-checked against a
/// dense Riemann sum (both agree to 3e-15).
pub const TEST1_SINE_ARC_LENGTH: f64 = 4.188275203698433;

pub fn unit_cost() -> CostSpec {
    CostSpec {
        kind: CostKind::Constant { value: 1.0 },
        eta: 1.0,
    }
}

pub fn unit_sine(base: Vec<f64>, axis: Vec<f64>) -> GeometrySpec {
    GeometrySpec::Sine {
        base,
        axis,
        amplitude: 1.0,
        angular_frequency: 2.0 * PI,
        extent: 1.0,
    }
}

fn vertex(id: usize, x: f64, y: f64) -> Vertex {
    Vertex {
        id,
        position: vec![x, y],
    }
}

fn segment(a: &Vertex, b: &Vertex) -> GeometrySpec {
    GeometrySpec::Segment {
        from: a.position.clone(),
        to: b.position.clone(),
    }
}

fn segments(
    vertices: &[Vertex],
    pairs: &[(usize, usize)],
) -> Vec<(usize, usize, usize, GeometrySpec)> {
    pairs
        .iter()
        .enumerate()
        .map(|(id, &(s, e))| (id, s, e, segment(&vertices[s], &vertices[e])))
        .collect()
}

/// One horizontal segment of length `l` with Dirichlet data at both ends.
pub fn single_arc(l: f64, g0: f64, g1: f64) -> Network {
    let vs = vec![vertex(0, 0.0, 0.0), vertex(1, l, 0.0)];
    let arcs = segments(&vs, &[(0, 1)]);
    Network::new(vs, arcs, vec![(0, g0), (1, g1)], unit_cost()).unwrap()
}

/// Two collinear segments v0 - v1 - v2 with boundary at the outer ends.
pub fn two_arc_path(l0: f64, l1: f64) -> Network {
    let vs = vec![
        vertex(0, 0.0, 0.0),
        vertex(1, l0, 0.0),
        vertex(2, l0 + l1, 0.0),
    ];
    let arcs = segments(&vs, &[(0, 1), (1, 2)]);
    Network::new(vs, arcs, vec![(0, 0.0), (2, 0.0)], unit_cost()).unwrap()
}

fn y_vertices(l0: f64, l1: f64, l2: f64) -> Vec<Vertex> {
    vec![
        vertex(0, 0.0, 0.0),
        vertex(1, l0, 0.0),
        vertex(2, -0.6 * l1, 0.8 * l1),
        vertex(3, -0.6 * l2, -0.8 * l2),
    ]
}

/// Hub at the origin, three straight legs, all tips boundary with g = 0.
pub fn y_network(l0: f64, l1: f64, l2: f64) -> Network {
    let vs = y_vertices(l0, l1, l2);
    let arcs = segments(&vs, &[(0, 1), (0, 2), (0, 3)]);
    Network::new(
        vs,
        arcs,
        vec![(1, 0.0), (2, 0.0), (3, 0.0)],
        unit_cost(),
    )
    .unwrap()
}

/// Y-network with Dirichlet data only at the first tip. The two remaining
/// tips are interior dead ends, so the degree-1 validation check reports
/// them; the solver handles them through the vertex update.
pub fn y_network_one_boundary(l0: f64, l1: f64, l2: f64) -> Network {
    let vs = y_vertices(l0, l1, l2);
    let arcs = segments(&vs, &[(0, 1), (0, 2), (0, 3)]);
    Network::new(vs, arcs, vec![(1, 0.0)], unit_cost()).unwrap()
}

/// Small deterministic network family for randomized property tests:
/// `shape` selects the topology, `s` scales the geometry.
pub fn small_network(shape: usize, s: [f64; 3]) -> Network {
    match shape % 4 {
        0 => single_arc(s[0], 0.0, 0.1 * s[1]),
        1 => two_arc_path(s[0], s[1]),
        2 => y_network(s[0], s[1], s[2]),
        _ => {
            // triangle with both boundary vertices on the cycle
            let vs = vec![
                vertex(0, 0.0, 0.0),
                vertex(1, s[0], 0.0),
                vertex(2, 0.4 * s[0], s[1]),
            ];
            let arcs = segments(&vs, &[(0, 1), (1, 2), (2, 0)]);
            Network::new(vs, arcs, vec![(0, 0.0), (2, 0.1 * s[2])], unit_cost()).unwrap()
        }
    }
}

/// Five-knot network with two vertical straight arcs and two sinusoidal arcs,
/// all emanating from the origin; unit cost. The Dirichlet datum is zero at
/// the origin; the four tips carry their exact distance from the origin so
/// that the solution is the distance field u(x) = d(x, origin).
pub fn test1() -> Network {
    let vs = vec![
        vertex(0, 0.0, 0.0),
        vertex(1, 0.0, 1.0),
        vertex(2, 0.0, -1.0),
        vertex(3, 1.0, 0.0),
        vertex(4, -1.0, 0.0),
    ];
    let arcs = vec![
        (0, 0, 1, segment(&vs[0], &vs[1])),
        (1, 0, 2, segment(&vs[0], &vs[2])),
        (2, 0, 3, unit_sine(vec![0.0, 0.0], vec![1.0, 0.0])),
        (3, 0, 4, unit_sine(vec![0.0, 0.0], vec![-1.0, 0.0])),
    ];
    let l = TEST1_SINE_ARC_LENGTH;
    Network::new(
        vs,
        arcs,
        vec![(0, 0.0), (1, 1.0), (2, 1.0), (3, l), (4, l)],
        unit_cost(),
    )
    .unwrap()
}

/// Polygonal network, straight arcs only, several boundary vertices, unit
/// cost. Generic arc lengths keep the ridge points of the distance solution
/// away from grid nodes across the refinement schedule, and the multiple
/// sources spread the ridges over many arcs so the uniform error decays at a
/// steady first order.
pub fn test2() -> Network {
    let vs = vec![
        vertex(0, 0.0, 0.0),
        vertex(1, 1.237, 0.146),
        vertex(2, 2.093, 0.934),
        vertex(3, 1.571, 1.866),
        vertex(4, 0.452, 2.031),
        vertex(5, -0.483, 1.125),
        vertex(6, 0.972, 1.013),
    ];
    let arcs = segments(
        &vs,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (1, 6),
            (3, 6),
            (5, 6),
        ],
    );
    Network::new(vs, arcs, vec![(0, 0.0), (2, 0.0), (4, 0.0)], unit_cost()).unwrap()
}

/// Five-knot polygonal network placed in x1 >= 1 with the affine cost
/// f(x) = 10 (x1 - 1) + eta, eta = 1e-10.
pub fn test3() -> Network {
    let eta = 1e-10;
    let vs = vec![
        vertex(0, 1.0, 0.0),
        vertex(1, 1.8, 0.6),
        vertex(2, 2.6, 0.0),
        vertex(3, 1.8, -0.7),
        vertex(4, 2.3, 1.3),
    ];
    let arcs = segments(&vs, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 2)]);
    Network::new(
        vs,
        arcs,
        vec![(0, 0.0)],
        CostSpec {
            kind: CostKind::AffineX1 {
                slope: 10.0,
                intercept: eta - 10.0,
            },
            eta,
        },
    )
    .unwrap()
}

/// Star-and-frame network with several boundary vertices and the oscillatory
/// cost f(x) = 2.1 - sin(4 pi x1) + cos(4 pi x2) >= 0.1.
pub fn test4() -> Network {
    let vs = vec![
        vertex(0, 0.05, 0.05),
        vertex(1, 0.95, 0.1),
        vertex(2, 0.9, 0.9),
        vertex(3, 0.1, 0.85),
        vertex(4, 0.5, 0.45),
    ];
    let arcs = segments(&vs, &[(0, 4), (4, 2), (1, 4), (3, 4), (0, 3), (1, 2)]);
    Network::new(
        vs,
        arcs,
        vec![(0, 0.0), (1, 0.0), (2, 0.0)],
        CostSpec {
            kind: CostKind::Sinusoidal {
                offset: 2.1,
                sin_coeff: -1.0,
                sin_freq: 4.0 * PI,
                cos_coeff: 1.0,
                cos_freq: 4.0 * PI,
            },
            eta: 0.1,
        },
    )
    .unwrap()
}
