//! Built-in example environments and the four comparison pairs.
//!
//! All graphs have unit edge lengths so every pair can go through the
//! exact discrete-time decision procedure as well as the sampled checks.

use crate::covering::{cyclic_cover, edge_voltages};
use crate::env::Environment;
use crate::graph::{EdgeSpec, PortedGraph, VertexId};
use crate::scalar::{rational, Rational};
use crate::sensor::{BeamMark, Observation, SensorSpec};

type Env = Environment<Rational>;

/// Unit-length graph from `(tail, head, port_at_tail, port_at_head)`.
pub fn unit_graph(names: &[&str], edges: &[(usize, usize, usize, usize)]) -> PortedGraph<Rational> {
    PortedGraph::new(
        names.iter().map(|n| n.to_string()).collect(),
        edges
            .iter()
            .map(|&(t, h, pt, ph)| EdgeSpec {
                tail: VertexId(t),
                head: VertexId(h),
                port_at_tail: pt,
                port_at_head: ph,
                length: rational(1, 1),
            })
            .collect(),
    )
    .expect("fixture graph is valid")
}

/// `C_n` with degree sensor; edge `i` runs `v_i → v_{i+1}`, leaving through
/// port 0 and arriving on port 1, so `Port(0)` always goes around forward.
pub fn cycle(n: usize) -> Env {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 0, 1)).collect();
    Environment::with_default_width(unit_graph(&names, &edges), VertexId(0), SensorSpec::Degree)
        .expect("valid")
}

/// One vertex with two loops.
pub fn figure_eight() -> Env {
    let g = unit_graph(&["o"], &[(0, 0, 0, 1), (0, 0, 2, 3)]);
    Environment::with_default_width(g, VertexId(0), SensorSpec::Degree).expect("valid")
}

/// `n` vertices in a row, started at `start`, with the given alphabet width.
pub fn path(n: usize, start: usize, width: usize) -> Env {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    // left neighbour on port 0 where there is one
    let edges: Vec<_> = (0..n.saturating_sub(1))
        .map(|i| (i, i + 1, usize::from(i > 0), 0))
        .collect();
    Environment::new(unit_graph(&names, &edges), VertexId(start), SensorSpec::Degree, width)
        .expect("valid")
}

#[derive(Clone, Debug)]
pub struct GalleryPair {
    pub name: &'static str,
    pub summary: &'static str,
    pub left: Env,
    pub right: Env,
}

/// Triangle against its connected double cover.
pub fn circle_pair() -> GalleryPair {
    let c3 = cycle(3);
    let (c6, _) = cyclic_cover(&c3, 2, &edge_voltages(&[1, 1, 1], 2)).expect("valid cover");
    GalleryPair {
        name: "circle",
        summary: "triangle vs hexagon double cover; equivalent, a loop downstairs opens upstairs",
        left: c3,
        right: c6,
    }
}

/// A graph whose walks keep running into a 4-valent crossing against one
/// where every crossing is 3-valent.
pub fn crossing_pair() -> GalleryPair {
    // x: loop + two parallel edges to y; y: those + edge to z; z: that + loop
    let left = unit_graph(
        &["x", "y", "z"],
        &[(0, 0, 0, 1), (0, 1, 2, 0), (0, 1, 3, 1), (1, 2, 2, 0), (2, 2, 1, 2)],
    );
    let left = Environment::new(left, VertexId(2), SensorSpec::Degree, 4).expect("valid");
    // dumbbell: two loops joined by a bridge
    let right = unit_graph(&["a", "b"], &[(0, 0, 0, 1), (0, 1, 2, 0), (1, 1, 1, 2)]);
    let right = Environment::new(right, VertexId(1), SensorSpec::Degree, 4).expect("valid");
    GalleryPair {
        name: "crossings",
        summary: "4-crossing vs 3-crossing graphs; distinguishable, no common cover",
        left,
        right,
    }
}

/// Triangle with two labelled beams, lifted to its 2-fold and 3-fold
/// cyclic covers (hexagon and nonagon).
pub fn beam_pair() -> GalleryPair {
    let label = |s: &str| Observation::Label(s.to_string());
    let beams = SensorSpec::Beam {
        marks: vec![
            BeamMark {
                edge: 0,
                offset: rational(1, 2),
                label: label("single"),
            },
            BeamMark {
                edge: 1,
                offset: rational(1, 2),
                label: label("double"),
            },
        ],
    };
    let base = cycle(3).with_sensor(beams).expect("valid");
    let (left, _) = cyclic_cover(&base, 2, &edge_voltages(&[1, 0, 0], 2)).expect("valid cover");
    let (right, _) = cyclic_cover(&base, 3, &edge_voltages(&[1, 0, 0], 3)).expect("valid cover");
    GalleryPair {
        name: "beams",
        summary: "two beam cycles covering one triangle; equivalent, no map either way",
        left,
        right,
    }
}

/// Two readings of one graph: a triangle `g c1 c2` with two spokes `g l1`,
/// `g l2`. On the left the triangle reads -1 and the spoke tips +1; the right
/// swaps the signs and the ports at `g`, so spokes and triangle trade
/// places. Sliding along the triangle's far edge reads the same as waiting
/// at a tip, which keeps the two equivalent for unit-step signals although
/// no map between them commutes with the sensors.
pub fn kite_pair() -> GalleryPair {
    let names = ["g", "c1", "c2", "l1", "l2"];
    let v = |x: i64| Observation::Value(x);
    let left = unit_graph(
        &names,
        &[(0, 1, 0, 0), (0, 2, 1, 0), (1, 2, 1, 1), (0, 3, 2, 0), (0, 4, 3, 0)],
    );
    let left_sensor = SensorSpec::Label {
        vertex_labels: vec![v(0), v(-1), v(-1), v(1), v(1)],
        edge_labels: vec![v(0), v(0), v(-1), v(0), v(0)],
    };
    let right = unit_graph(
        &names,
        &[(0, 3, 0, 0), (0, 4, 1, 0), (0, 1, 2, 0), (0, 2, 3, 0), (1, 2, 1, 1)],
    );
    let right_sensor = SensorSpec::Label {
        vertex_labels: vec![v(0), v(1), v(1), v(-1), v(-1)],
        edge_labels: vec![v(0), v(0), v(0), v(0), v(1)],
    };
    GalleryPair {
        name: "kite",
        summary: "sign-swapped kites; equivalent in unit steps, no sensor-preserving map",
        left: Environment::new(left, VertexId(0), left_sensor, 4).expect("valid"),
        right: Environment::new(right, VertexId(0), right_sensor, 4).expect("valid"),
    }
}

pub fn gallery() -> Vec<GalleryPair> {
    vec![circle_pair(), crossing_pair(), beam_pair(), kite_pair()]
}
