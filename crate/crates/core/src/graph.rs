//! Ported metric graphs and the points on them.
//!
//! Every undirected edge `e` owns two darts: `2e` runs tail → head and
//! `2e + 1` runs head → tail, so reversal is `d ^ 1`. Each dart carries the
//! port index it occupies at its tail vertex; the ports of a vertex are
//! exactly `0..degree`.

use std::collections::VecDeque;
use std::hash::{DefaultHasher, Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DartId(pub usize);

impl DartId {
    pub fn reverse(self) -> DartId {
        DartId(self.0 ^ 1)
    }

    /// Index of the undirected edge this dart belongs to.
    pub fn edge(self) -> usize {
        self.0 / 2
    }

    /// True for the dart that runs in the edge's listed direction.
    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn forward_of(edge: usize) -> DartId {
        DartId(2 * edge)
    }
}

/// An undirected edge as listed in an environment file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec<S> {
    pub tail: VertexId,
    pub head: VertexId,
    pub port_at_tail: usize,
    pub port_at_head: usize,
    pub length: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dart<S> {
    pub tail: VertexId,
    pub head: VertexId,
    pub port: usize,
    pub length: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortedGraph<S> {
    names: Vec<String>,
    edges: Vec<EdgeSpec<S>>,
    darts: Vec<Dart<S>>,
    /// `stars[v][k]` is the dart leaving `v` through port `k`.
    stars: Vec<Vec<DartId>>,
}

impl<S: Scalar> PortedGraph<S> {
    /// Validates port numbering, lengths and connectivity.
    pub fn new(names: Vec<String>, edges: Vec<EdgeSpec<S>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::validation("graph has no vertices"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::validation(format!("duplicate vertex name {name:?}")));
            }
        }
        let mut darts = Vec::with_capacity(2 * edges.len());
        let mut slots: Vec<Vec<Option<DartId>>> = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.tail.0 >= n || edge.head.0 >= n {
                return Err(Error::validation(format!("edge {e} references a missing vertex")));
            }
            if !edge.length.is_positive() {
                return Err(Error::validation(format!(
                    "edge {e} has non-positive length {:?}",
                    edge.length
                )));
            }
            for (dart, tail, head, port) in [
                (DartId(2 * e), edge.tail, edge.head, edge.port_at_tail),
                (DartId(2 * e + 1), edge.head, edge.tail, edge.port_at_head),
            ] {
                let slot = &mut slots[tail.0];
                if slot.len() <= port {
                    slot.resize(port + 1, None);
                }
                if let Some(other) = slot[port] {
                    return Err(Error::validation(format!(
                        "port {port} at vertex {:?} used by darts {} and {}",
                        names[tail.0], other.0, dart.0
                    )));
                }
                slot[port] = Some(dart);
                darts.push(Dart {
                    tail,
                    head,
                    port,
                    length: edge.length.clone(),
                });
            }
        }
        let mut stars = Vec::with_capacity(n);
        for (v, slot) in slots.into_iter().enumerate() {
            let star: Option<Vec<DartId>> = slot.into_iter().collect();
            match star {
                Some(star) => stars.push(star),
                None => {
                    return Err(Error::validation(format!(
                        "ports at vertex {:?} are not contiguous from 0",
                        names[v]
                    )))
                }
            }
        }
        let graph = PortedGraph {
            names,
            edges,
            darts,
            stars,
        };
        if !graph.is_connected() {
            return Err(Error::validation("graph is not connected"));
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &d in &self.stars[v.0] {
                let w = self.darts[d.0].head;
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn dart_ids(&self) -> impl Iterator<Item = DartId> {
        (0..self.darts.len()).map(DartId)
    }

    pub fn edges(&self) -> &[EdgeSpec<S>] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn dart(&self, d: DartId) -> &Dart<S> {
        &self.darts[d.0]
    }

    pub fn length(&self, d: DartId) -> &S {
        &self.darts[d.0].length
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.stars[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.stars.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Darts leaving `v`, indexed by port.
    pub fn star(&self, v: VertexId) -> &[DartId] {
        &self.stars[v.0]
    }

    pub fn port_dart(&self, v: VertexId, port: usize) -> Option<DartId> {
        self.stars.get(v.0)?.get(port).copied()
    }

    pub fn is_unit_length(&self) -> bool {
        self.edges.iter().all(|e| e.length == S::one())
    }

    /// Structural hash used to tell trajectories on different graphs apart.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.names.len().hash(&mut h);
        for e in &self.edges {
            (e.tail, e.head, e.port_at_tail, e.port_at_head).hash(&mut h);
            format!("{:?}", e.length).hash(&mut h);
        }
        h.finish()
    }

    /// All-pairs shortest-path lengths between vertices.
    pub fn vertex_distances(&self) -> Vec<Vec<S>> {
        let n = self.vertex_count();
        let mut dist: Vec<Vec<Option<S>>> = vec![vec![None; n]; n];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = Some(S::zero());
        }
        for d in &self.darts {
            let cell = &mut dist[d.tail.0][d.head.0];
            if cell.as_ref().is_none_or(|c| d.length < *c) {
                *cell = Some(d.length.clone());
            }
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = dist[i][k].clone() else { continue };
                for j in 0..n {
                    let Some(kj) = dist[k][j].clone() else { continue };
                    let via = ik.clone() + kj;
                    if dist[i][j].as_ref().is_none_or(|c| via < *c) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
        dist.into_iter()
            .map(|row| row.into_iter().map(|c| c.expect("graph is connected")).collect())
            .collect()
    }
}

/// A point of the metric graph together with a heading.
///
/// `Edge { dart, offset }` lies strictly inside the edge of `dart`, at
/// distance `offset` from the dart's tail, and moves toward its head.
/// Positions at either end are always written as `Vertex`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphState<S> {
    Vertex(VertexId),
    Edge { dart: DartId, offset: S },
}

impl<S: Scalar> GraphState<S> {
    /// Canonical state at `offset` along `dart` (`0 ≤ offset ≤ length`).
    pub fn on_dart(graph: &PortedGraph<S>, dart: DartId, offset: S) -> Self {
        let d = graph.dart(dart);
        if offset.is_zero() {
            GraphState::Vertex(d.tail)
        } else if offset >= d.length {
            GraphState::Vertex(d.head)
        } else {
            GraphState::Edge { dart, offset }
        }
    }

    pub fn validate(&self, graph: &PortedGraph<S>) -> Result<()> {
        match self {
            GraphState::Vertex(v) if v.0 < graph.vertex_count() => Ok(()),
            GraphState::Vertex(v) => Err(Error::validation(format!("no vertex {}", v.0))),
            GraphState::Edge { dart, offset } => {
                if dart.0 >= graph.dart_count() {
                    return Err(Error::validation(format!("no dart {}", dart.0)));
                }
                if !offset.is_positive() || *offset >= *graph.length(*dart) {
                    return Err(Error::validation(format!(
                        "offset {offset:?} not strictly inside dart {}",
                        dart.0
                    )));
                }
                Ok(())
            }
        }
    }

    /// Distances to the endpoints this point can leave through.
    fn exits(&self, graph: &PortedGraph<S>) -> Vec<(VertexId, S)> {
        match self {
            GraphState::Vertex(v) => vec![(*v, S::zero())],
            GraphState::Edge { dart, offset } => {
                let d = graph.dart(*dart);
                vec![
                    (d.tail, offset.clone()),
                    (d.head, d.length.clone() - offset.clone()),
                ]
            }
        }
    }

    /// The same point expressed as an offset along `dart`, if it lies on
    /// that dart's edge (endpoints included).
    pub fn offset_along(&self, graph: &PortedGraph<S>, dart: DartId) -> Option<S> {
        let d = graph.dart(dart);
        match self {
            GraphState::Vertex(v) if *v == d.tail => Some(S::zero()),
            GraphState::Vertex(v) if *v == d.head => Some(d.length.clone()),
            GraphState::Vertex(_) => None,
            GraphState::Edge { dart: e, offset } if *e == dart => Some(offset.clone()),
            GraphState::Edge { dart: e, offset } if *e == dart.reverse() => {
                Some(d.length.clone() - offset.clone())
            }
            GraphState::Edge { .. } => None,
        }
    }
}

/// Shortest-path metric on the points of a graph.
#[derive(Clone, Debug)]
pub struct PathMetric<'g, S> {
    graph: &'g PortedGraph<S>,
    vertex: Vec<Vec<S>>,
}

impl<'g, S: Scalar> PathMetric<'g, S> {
    pub fn new(graph: &'g PortedGraph<S>) -> Self {
        PathMetric {
            graph,
            vertex: graph.vertex_distances(),
        }
    }

    pub fn graph(&self) -> &'g PortedGraph<S> {
        self.graph
    }

    pub fn between_vertices(&self, a: VertexId, b: VertexId) -> &S {
        &self.vertex[a.0][b.0]
    }

    /// Distance between two points; headings are ignored.
    pub fn distance(&self, p: &GraphState<S>, q: &GraphState<S>) -> S {
        let mut best: Option<S> = None;
        let mut offer = |c: S| {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        };
        for (a, da) in p.exits(self.graph) {
            for (b, db) in q.exits(self.graph) {
                offer(da.clone() + self.vertex[a.0][b.0].clone() + db);
            }
        }
        if let GraphState::Edge { dart, offset } = p {
            if let Some(other) = q.offset_along(self.graph, *dart) {
                offer((offset.clone() - other).abs());
            }
        }
        best.expect("points have at least one exit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn edge(t: usize, h: usize, pt: usize, ph: usize, len: Rational) -> EdgeSpec<Rational> {
        EdgeSpec {
            tail: VertexId(t),
            head: VertexId(h),
            port_at_tail: pt,
            port_at_head: ph,
            length: len,
        }
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn rejects_bad_ports() {
        let one = rational(1, 1);
        let gap = PortedGraph::new(names(2), vec![edge(0, 1, 1, 0, one.clone())]);
        assert!(gap.is_err());
        let clash = PortedGraph::new(
            names(2),
            vec![edge(0, 1, 0, 0, one.clone()), edge(0, 1, 0, 1, one.clone())],
        );
        assert!(clash.is_err());
        let loop_clash = PortedGraph::new(names(1), vec![edge(0, 0, 0, 0, one)]);
        assert!(loop_clash.is_err());
    }

    #[test]
    fn rejects_disconnected_and_zero_length() {
        let one = rational(1, 1);
        assert!(PortedGraph::new(names(3), vec![edge(0, 1, 0, 0, one)]).is_err());
        assert!(PortedGraph::new(names(2), vec![edge(0, 1, 0, 0, rational(0, 1))]).is_err());
    }

    #[test]
    fn reversal_and_stars() {
        let g = PortedGraph::new(
            names(1),
            vec![edge(0, 0, 0, 1, rational(1, 1)), edge(0, 0, 2, 3, rational(2, 1))],
        )
        .unwrap();
        assert_eq!(g.degree(VertexId(0)), 4);
        for d in g.dart_ids() {
            assert_eq!(d.reverse().reverse(), d);
            assert_eq!(g.dart(d).length, g.dart(d.reverse()).length);
            assert_eq!(g.dart(d).tail, g.dart(d.reverse()).head);
        }
        assert_eq!(g.port_dart(VertexId(0), 3), Some(DartId(3)));
    }

    #[test]
    fn point_distances_on_a_cycle() {
        // triangle with sides 1, 1, 2
        let g = PortedGraph::new(
            names(3),
            vec![
                edge(0, 1, 0, 1, rational(1, 1)),
                edge(1, 2, 0, 1, rational(1, 1)),
                edge(2, 0, 0, 1, rational(2, 1)),
            ],
        )
        .unwrap();
        let m = PathMetric::new(&g);
        assert_eq!(*m.between_vertices(VertexId(0), VertexId(2)), rational(2, 1));
        let p = GraphState::Edge { dart: DartId(4), offset: rational(1, 2) };
        let q = GraphState::Edge { dart: DartId(5), offset: rational(1, 2) };
        // same edge, opposite headings: offsets 1/2 and 3/2 along dart 4
        assert_eq!(m.distance(&p, &q), rational(1, 1));
        assert_eq!(m.distance(&p, &GraphState::Vertex(VertexId(1))), rational(3, 2));
        assert_eq!(m.distance(&p, &p), rational(0, 1));
    }
}
