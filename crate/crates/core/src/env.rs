//! Environments and the unit-speed path action on them.
//!
//! Motion rules: under `Port(k)` a robot inside an edge keeps moving toward
//! the head of its dart at unit speed; at a vertex it leaves through port
//! `k` if the vertex has one and waits otherwise. `Halt` freezes it. Mid-edge
//! U-turns never happen. These rules make the action deterministic and
//! commute with every port-preserving covering map.

use crate::error::{Error, Result};
use crate::graph::{DartId, GraphState, PathMetric, PortedGraph, VertexId};
use crate::scalar::Scalar;
use crate::sensor::SensorSpec;
use crate::signal::{ControlSignal, Symbol};

/// A ported graph with a base vertex, a sensor and an input alphabet width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment<S> {
    graph: PortedGraph<S>,
    initial: VertexId,
    sensor: SensorSpec<S>,
    alphabet_width: usize,
}

impl<S: Scalar> Environment<S> {
    pub fn new(
        graph: PortedGraph<S>,
        initial: VertexId,
        sensor: SensorSpec<S>,
        alphabet_width: usize,
    ) -> Result<Self> {
        if initial.0 >= graph.vertex_count() {
            return Err(Error::validation(format!("initial vertex {} missing", initial.0)));
        }
        if alphabet_width == 0 || alphabet_width < graph.max_degree() {
            return Err(Error::validation(format!(
                "alphabet width {alphabet_width} must be positive and at least the maximum degree {}",
                graph.max_degree()
            )));
        }
        sensor.validate(&graph)?;
        Ok(Environment {
            graph,
            initial,
            sensor,
            alphabet_width,
        })
    }

    /// Alphabet width defaults to the maximum degree.
    pub fn with_default_width(
        graph: PortedGraph<S>,
        initial: VertexId,
        sensor: SensorSpec<S>,
    ) -> Result<Self> {
        let width = graph.max_degree().max(1);
        Self::new(graph, initial, sensor, width)
    }

    pub fn graph(&self) -> &PortedGraph<S> {
        &self.graph
    }

    pub fn initial(&self) -> VertexId {
        self.initial
    }

    pub fn initial_state(&self) -> GraphState<S> {
        GraphState::Vertex(self.initial)
    }

    pub fn sensor(&self) -> &SensorSpec<S> {
        &self.sensor
    }

    pub fn alphabet_width(&self) -> usize {
        self.alphabet_width
    }

    pub fn alphabet(&self) -> Vec<Symbol> {
        Symbol::alphabet(self.alphabet_width)
    }

    pub fn with_sensor(&self, sensor: SensorSpec<S>) -> Result<Self> {
        Self::new(self.graph.clone(), self.initial, sensor, self.alphabet_width)
    }

    pub fn with_initial(&self, initial: VertexId) -> Result<Self> {
        Self::new(self.graph.clone(), initial, self.sensor.clone(), self.alphabet_width)
    }

    pub fn with_alphabet_width(&self, width: usize) -> Result<Self> {
        Self::new(self.graph.clone(), self.initial, self.sensor.clone(), width)
    }

    /// `p(u, x)`: where a robot starting at `x` ends up after `u`.
    pub fn apply(&self, u: &ControlSignal<S>, x: &GraphState<S>) -> Result<GraphState<S>> {
        x.validate(&self.graph)?;
        let mut state = x.clone();
        run(&self.graph, u, &mut state, |_, _, _| {});
        Ok(state)
    }

    /// The trajectory of `u` from the base vertex.
    pub fn trajectory(&self, u: &ControlSignal<S>) -> Trajectory<S> {
        self.trajectory_from(&self.initial_state(), u)
            .expect("base vertex is a valid state")
    }

    pub fn trajectory_from(&self, x: &GraphState<S>, u: &ControlSignal<S>) -> Result<Trajectory<S>> {
        x.validate(&self.graph)?;
        let mut traj = Trajectory {
            graph_id: self.graph.fingerprint(),
            times: vec![S::zero()],
            states: vec![x.clone()],
            motions: Vec::new(),
        };
        let mut state = x.clone();
        run(&self.graph, u, &mut state, |motion, dt, next| traj.extend(motion, dt, next));
        Ok(traj)
    }
}

/// Drives `state` through `u`, reporting each elementary move.
fn run<S: Scalar>(
    graph: &PortedGraph<S>,
    u: &ControlSignal<S>,
    state: &mut GraphState<S>,
    mut emit: impl FnMut(Motion, S, &GraphState<S>),
) {
    for piece in u.pieces() {
        let mut remaining = piece.duration.clone();
        while remaining.is_positive() {
            let port = match piece.symbol {
                Symbol::Halt => None,
                Symbol::Port(k) => Some(k),
            };
            let (dart, offset) = match (&*state, port) {
                (_, None) => {
                    emit(Motion::Stay, remaining.clone(), state);
                    break;
                }
                (GraphState::Edge { dart, offset }, Some(_)) => (*dart, offset.clone()),
                (GraphState::Vertex(v), Some(k)) => match graph.port_dart(*v, k) {
                    Some(dart) => (dart, S::zero()),
                    None => {
                        emit(Motion::Stay, remaining.clone(), state);
                        break;
                    }
                },
            };
            let to_head = graph.length(dart).clone() - offset.clone();
            if remaining < to_head {
                *state = GraphState::Edge {
                    dart,
                    offset: offset + remaining.clone(),
                };
                emit(Motion::Along(dart), remaining.clone(), state);
                remaining = S::zero();
            } else {
                *state = GraphState::Vertex(graph.dart(dart).head);
                emit(Motion::Along(dart), to_head.clone(), state);
                remaining = remaining - to_head;
            }
        }
    }
}

/// How the robot moves between two consecutive breakpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Motion {
    Stay,
    /// Unit-speed travel along the dart.
    Along(DartId),
}

/// A piecewise-linear trajectory: breakpoint times, states at those times
/// and the motion on each gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory<S> {
    graph_id: u64,
    times: Vec<S>,
    states: Vec<GraphState<S>>,
    motions: Vec<Motion>,
}

impl<S: Scalar> Trajectory<S> {
    fn extend(&mut self, motion: Motion, dt: S, next: &GraphState<S>) {
        let end = self.times.last().expect("starts with a breakpoint").clone() + dt;
        let merge = match (self.motions.last(), motion) {
            (Some(Motion::Stay), Motion::Stay) => true,
            // continuing along the same dart after stopping mid-edge
            (Some(Motion::Along(a)), Motion::Along(b)) => {
                a == &b && matches!(self.states.last(), Some(GraphState::Edge { .. }))
            }
            _ => false,
        };
        if merge {
            *self.times.last_mut().unwrap() = end;
            *self.states.last_mut().unwrap() = next.clone();
        } else {
            self.times.push(end);
            self.states.push(next.clone());
            self.motions.push(motion);
        }
    }

    pub fn duration(&self) -> &S {
        self.times.last().expect("non-empty")
    }

    pub fn times(&self) -> &[S] {
        &self.times
    }

    pub fn states(&self) -> &[GraphState<S>] {
        &self.states
    }

    pub fn motions(&self) -> &[Motion] {
        &self.motions
    }

    pub fn final_state(&self) -> &GraphState<S> {
        self.states.last().expect("non-empty")
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub(crate) fn from_parts(
        graph_id: u64,
        times: Vec<S>,
        states: Vec<GraphState<S>>,
        motions: Vec<Motion>,
    ) -> Self {
        Trajectory {
            graph_id,
            times,
            states,
            motions,
        }
    }

    /// Position at time `t`, or `None` outside `[0, T]`.
    pub fn state_at(&self, graph: &PortedGraph<S>, t: &S) -> Option<GraphState<S>> {
        if t.is_negative() || t > self.duration() {
            return None;
        }
        let i = self.segment_index(t);
        let Some(motion) = self.motions.get(i) else {
            return Some(self.states[i].clone());
        };
        match motion {
            Motion::Stay => Some(self.states[i].clone()),
            Motion::Along(d) => {
                let start = self.states[i]
                    .offset_along(graph, *d)
                    .expect("segment starts on its dart");
                let offset = start + (t.clone() - self.times[i].clone());
                Some(GraphState::on_dart(graph, *d, offset))
            }
        }
    }

    /// Index `i` of the gap `[times[i], times[i+1]]` containing `t`.
    fn segment_index(&self, t: &S) -> usize {
        let upper = self.times.partition_point(|x| x <= t);
        upper.saturating_sub(1).min(self.motions.len().saturating_sub(1))
    }
}

/// `c0 + c1·t`.
#[derive(Clone, Debug)]
struct Affine<S> {
    c0: S,
    c1: S,
}

impl<S: Scalar> Affine<S> {
    fn constant(c: S) -> Self {
        Affine { c0: c, c1: S::zero() }
    }

    fn plus(&self, other: &Self) -> Self {
        Affine {
            c0: self.c0.clone() + other.c0.clone(),
            c1: self.c1.clone() + other.c1.clone(),
        }
    }

    fn neg(&self) -> Self {
        Affine {
            c0: -self.c0.clone(),
            c1: -self.c1.clone(),
        }
    }

    fn crossing(&self, other: &Self) -> Option<S> {
        let slope = self.c1.clone() - other.c1.clone();
        if slope.is_zero() {
            None
        } else {
            Some((other.c0.clone() - self.c0.clone()) / slope)
        }
    }
}

/// Position of a trajectory on one gap `[lo, hi]` of the merged grid.
enum Placement<S> {
    Vertex(VertexId),
    /// Offset along `dart` as a function of absolute time.
    OnDart { dart: DartId, offset: Affine<S> },
}

impl<S: Scalar> Trajectory<S> {
    fn placement(&self, graph: &PortedGraph<S>, lo: &S, hi: &S) -> Placement<S> {
        let mid = (lo.clone() + hi.clone()) / S::from_int(2);
        let i = self.segment_index(&mid);
        match self.motions.get(i) {
            Some(Motion::Along(d)) => {
                let start = self.states[i].offset_along(graph, *d).expect("on dart");
                Placement::OnDart {
                    dart: *d,
                    offset: Affine {
                        c0: start - self.times[i].clone(),
                        c1: S::one(),
                    },
                }
            }
            _ => match &self.states[i] {
                GraphState::Vertex(v) => Placement::Vertex(*v),
                GraphState::Edge { dart, offset } => Placement::OnDart {
                    dart: *dart,
                    offset: Affine::constant(offset.clone()),
                },
            },
        }
    }
}

impl<S: Scalar> Placement<S> {
    fn exits(&self, graph: &PortedGraph<S>) -> Vec<(VertexId, Affine<S>)> {
        match self {
            Placement::Vertex(v) => vec![(*v, Affine::constant(S::zero()))],
            Placement::OnDart { dart, offset } => {
                let d = graph.dart(*dart);
                vec![
                    (d.tail, offset.clone()),
                    (d.head, Affine::constant(d.length.clone()).plus(&offset.neg())),
                ]
            }
        }
    }

    /// Offset along `dart`, when on the same undirected edge.
    fn along(&self, graph: &PortedGraph<S>, dart: DartId) -> Option<Affine<S>> {
        match self {
            Placement::OnDart { dart: d, offset } if *d == dart => Some(offset.clone()),
            Placement::OnDart { dart: d, offset } if *d == dart.reverse() => {
                Some(Affine::constant(graph.length(dart).clone()).plus(&offset.neg()))
            }
            _ => None,
        }
    }
}

/// `sup_t d(a(t), b(t)) + |T_a − T_b|` over the common time span, exactly.
///
/// On each gap of the merged breakpoint grid the pointwise distance is the
/// minimum of finitely many affine route lengths (and an absolute value
/// when both points share an edge), so its maximum sits at a gap endpoint
/// or where two of those lines cross.
pub fn trajectory_distance<S: Scalar>(
    graph: &PortedGraph<S>,
    a: &Trajectory<S>,
    b: &Trajectory<S>,
) -> Result<S> {
    let id = graph.fingerprint();
    if a.graph_id != id || b.graph_id != id {
        return Err(Error::precondition("trajectories live on different graphs"));
    }
    let metric = PathMetric::new(graph);
    let horizon = S::min_of(a.duration().clone(), b.duration().clone());
    let mut grid: Vec<S> = a
        .times
        .iter()
        .chain(b.times.iter())
        .filter(|t| **t <= horizon)
        .cloned()
        .chain([horizon.clone()])
        .collect();
    sort_dedup(&mut grid);

    let at = |t: &S| {
        metric.distance(
            &a.state_at(graph, t).expect("inside horizon"),
            &b.state_at(graph, t).expect("inside horizon"),
        )
    };
    let mut best = at(&S::zero());
    for w in grid.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let pa = a.placement(graph, lo, hi);
        let pb = b.placement(graph, lo, hi);
        let mut lines = Vec::new();
        for (va, fa) in pa.exits(graph) {
            for (vb, fb) in pb.exits(graph) {
                let via = Affine::constant(metric.between_vertices(va, vb).clone());
                lines.push(fa.plus(&via).plus(&fb));
            }
        }
        if let Placement::OnDart { dart, offset } = &pa {
            if let Some(other) = pb.along(graph, *dart) {
                let diff = offset.plus(&other.neg());
                lines.push(diff.neg());
                lines.push(diff);
            }
        }
        let mut candidates = vec![lo.clone(), hi.clone()];
        for (i, l1) in lines.iter().enumerate() {
            for l2 in &lines[i + 1..] {
                if let Some(t) = l1.crossing(l2) {
                    if *lo < t && t < *hi {
                        candidates.push(t);
                    }
                }
            }
        }
        for t in candidates {
            let d = at(&t);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best + (a.duration().clone() - b.duration().clone()).abs())
}

pub(crate) fn sort_dedup<S: Scalar>(values: &mut Vec<S>) {
    values.sort_by(|x, y| x.partial_cmp(y).expect("comparable scalars"));
    values.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSpec;
    use crate::scalar::{rational, Rational};
    use Symbol::{Halt, Port};

    fn cycle(n: usize) -> Environment<Rational> {
        let edges = (0..n)
            .map(|i| EdgeSpec {
                tail: VertexId(i),
                head: VertexId((i + 1) % n),
                port_at_tail: 0,
                port_at_head: 1,
                length: rational(1, 1),
            })
            .collect();
        let graph = PortedGraph::new((0..n).map(|i| format!("v{i}")).collect(), edges).unwrap();
        Environment::with_default_width(graph, VertexId(0), SensorSpec::Degree).unwrap()
    }

    fn sig(pieces: &[(Symbol, i64, i64)]) -> ControlSignal<Rational> {
        ControlSignal::from_pieces(pieces.iter().map(|&(s, n, d)| (s, rational(n, d)))).unwrap()
    }

    #[test]
    fn apply_examples_on_triangle() {
        let c3 = cycle(3);
        let v = |i| GraphState::Vertex(VertexId(i));
        assert_eq!(c3.apply(&sig(&[(Halt, 5, 1)]), &v(0)).unwrap(), v(0));
        assert_eq!(c3.apply(&sig(&[(Port(0), 1, 1)]), &v(0)).unwrap(), v(1));
        assert_eq!(c3.apply(&sig(&[(Port(0), 3, 1)]), &v(0)).unwrap(), v(0));
        assert_eq!(c3.apply(&ControlSignal::empty(), &v(2)).unwrap(), v(2));
    }

    #[test]
    fn missing_port_waits_and_edges_ignore_port_choice() {
        let c3 = cycle(3);
        let v0 = GraphState::Vertex(VertexId(0));
        // port 2 does not exist on a cycle
        assert_eq!(c3.apply(&sig(&[(Port(2), 7, 2)]), &v0).unwrap(), v0);
        // once inside an edge any port keeps going forward
        let u = sig(&[(Port(0), 1, 2), (Port(1), 1, 2)]);
        assert_eq!(c3.apply(&u, &v0).unwrap(), GraphState::Vertex(VertexId(1)));
    }

    #[test]
    fn apply_rejects_foreign_states() {
        let c3 = cycle(3);
        assert!(c3.apply(&ControlSignal::empty(), &GraphState::Vertex(VertexId(9))).is_err());
        let bad = GraphState::Edge { dart: DartId(0), offset: rational(1, 1) };
        assert!(c3.apply(&ControlSignal::empty(), &bad).is_err());
    }

    #[test]
    fn trajectory_examples() {
        let c3 = cycle(3);
        let empty = c3.trajectory(&ControlSignal::empty());
        assert_eq!(empty.times(), &[rational(0, 1)]);
        assert_eq!(empty.states(), &[GraphState::Vertex(VertexId(0))]);

        let t = c3.trajectory(&sig(&[(Port(0), 3, 2)]));
        assert_eq!(t.times(), &[rational(0, 1), rational(1, 1), rational(3, 2)]);
        assert_eq!(t.states()[1], GraphState::Vertex(VertexId(1)));
        assert_eq!(
            t.states()[2],
            GraphState::Edge { dart: DartId(2), offset: rational(1, 2) }
        );

        let t = c3.trajectory(&sig(&[(Port(0), 1, 1), (Halt, 1, 1)]));
        assert_eq!(t.times(), &[rational(0, 1), rational(1, 1), rational(2, 1)]);
        assert_eq!(t.motions()[1], Motion::Stay);
        assert_eq!(t.states()[2], GraphState::Vertex(VertexId(1)));
    }

    #[test]
    fn self_loop_passes_are_kept_as_breakpoints() {
        let graph = PortedGraph::new(
            vec!["o".into()],
            vec![EdgeSpec {
                tail: VertexId(0),
                head: VertexId(0),
                port_at_tail: 0,
                port_at_head: 1,
                length: rational(1, 1),
            }],
        )
        .unwrap();
        let env = Environment::with_default_width(graph, VertexId(0), SensorSpec::Degree).unwrap();
        let t = env.trajectory(&sig(&[(Port(0), 2, 1)]));
        assert_eq!(t.times().len(), 3);
    }

    #[test]
    fn trajectory_distance_basic() {
        let c3 = cycle(3);
        let u = sig(&[(Port(0), 3, 1)]);
        let x = c3.trajectory(&u);
        assert_eq!(trajectory_distance(c3.graph(), &x, &x).unwrap(), rational(0, 1));
        let shorter = c3.trajectory(&u.restrict_before(&rational(2, 1)));
        assert_eq!(trajectory_distance(c3.graph(), &x, &shorter).unwrap(), rational(1, 1));
        let other = cycle(4);
        let y = other.trajectory(&u);
        assert!(trajectory_distance(c3.graph(), &x, &y).is_err());
    }
}
