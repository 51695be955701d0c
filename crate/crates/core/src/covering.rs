//! Covering maps between environments, lifts along them, and generators
//! for cyclic covers and truncated universal covers.
//!
//! Maps are required to preserve port indices. With that requirement the
//! path action upstairs is literally the same motion rule, so lifting a
//! trajectory amounts to running the signal in the covering environment.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::env::{Environment, Motion, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{DartId, EdgeSpec, GraphState, PortedGraph, VertexId};
use crate::scalar::Scalar;
use crate::sensor::{BeamMark, SensorSpec};
use crate::signal::ControlSignal;

/// Vertex and dart assignment from a source graph into a target graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub vertex_map: Vec<VertexId>,
    pub dart_map: Vec<DartId>,
}

impl GraphMap {
    pub fn identity<S: Scalar>(graph: &PortedGraph<S>) -> Self {
        GraphMap {
            vertex_map: graph.vertices().collect(),
            dart_map: graph.dart_ids().collect(),
        }
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn dart(&self, d: DartId) -> DartId {
        self.dart_map[d.0]
    }

    pub fn map_state<S: Scalar>(&self, state: &GraphState<S>) -> GraphState<S> {
        match state {
            GraphState::Vertex(v) => GraphState::Vertex(self.vertex(*v)),
            GraphState::Edge { dart, offset } => GraphState::Edge {
                dart: self.dart(*dart),
                offset: offset.clone(),
            },
        }
    }

    /// Pointwise image of a source trajectory, as a trajectory on `target`.
    pub fn project_trajectory<S: Scalar>(
        &self,
        target: &PortedGraph<S>,
        trajectory: &Trajectory<S>,
    ) -> Trajectory<S> {
        Trajectory::from_parts(
            target.fingerprint(),
            trajectory.times().to_vec(),
            trajectory.states().iter().map(|s| self.map_state(s)).collect(),
            trajectory
                .motions()
                .iter()
                .map(|m| match m {
                    Motion::Stay => Motion::Stay,
                    Motion::Along(d) => Motion::Along(self.dart(*d)),
                })
                .collect(),
        )
    }

    /// Checks that darts go to darts with matching tails, heads and
    /// reversals. Everything else is reported through certificate flags.
    pub fn check_structure<S: Scalar>(
        &self,
        source: &PortedGraph<S>,
        target: &PortedGraph<S>,
    ) -> Result<()> {
        if self.vertex_map.len() != source.vertex_count() {
            return Err(Error::validation(format!(
                "vertex map has {} entries for {} vertices",
                self.vertex_map.len(),
                source.vertex_count()
            )));
        }
        if self.dart_map.len() != source.dart_count() {
            return Err(Error::validation(format!(
                "dart map has {} entries for {} darts",
                self.dart_map.len(),
                source.dart_count()
            )));
        }
        if let Some(v) = self.vertex_map.iter().find(|v| v.0 >= target.vertex_count()) {
            return Err(Error::validation(format!("vertex map hits missing vertex {}", v.0)));
        }
        for d in source.dart_ids() {
            let image = self.dart(d);
            let fail = |reason: &str| Error::Structural {
                dart: d.0,
                reason: reason.to_string(),
            };
            if image.0 >= target.dart_count() {
                return Err(fail("image dart does not exist"));
            }
            let (sd, td) = (source.dart(d), target.dart(image));
            if td.tail != self.vertex(sd.tail) {
                return Err(fail("tail not preserved"));
            }
            if td.head != self.vertex(sd.head) {
                return Err(fail("head not preserved"));
            }
            if self.dart(d.reverse()) != image.reverse() {
                return Err(fail("reversal not preserved"));
            }
        }
        Ok(())
    }
}

/// One failed covering condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

/// Outcome of [`verify_covering`], one flag per condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringCertificate {
    pub map: GraphMap,
    pub surjective: bool,
    pub star_bijective: bool,
    pub ports_preserved: bool,
    pub lengths_preserved: bool,
    pub base_point: bool,
    pub violations: Vec<Violation>,
}

impl CoveringCertificate {
    /// All conditions hold: a port-preserving metric covering of pointed
    /// environments.
    pub fn is_positive(&self) -> bool {
        self.surjective && self.is_local_covering()
    }

    /// Every condition except surjectivity holds.
    pub fn is_local_covering(&self) -> bool {
        self.star_bijective && self.ports_preserved && self.lengths_preserved && self.base_point
    }
}

/// Checks whether `f` is a port-preserving metric covering map from
/// `source` onto `target` that sends base vertex to base vertex.
pub fn verify_covering<S: Scalar>(
    f: &GraphMap,
    source: &Environment<S>,
    target: &Environment<S>,
) -> Result<CoveringCertificate> {
    verify_covering_except(f, source, target, &BTreeSet::new())
}

/// [`verify_covering`] with the local conditions waived at `exempt`
/// vertices (the cut boundary of a truncated cover).
pub fn verify_covering_except<S: Scalar>(
    f: &GraphMap,
    source: &Environment<S>,
    target: &Environment<S>,
    exempt: &BTreeSet<VertexId>,
) -> Result<CoveringCertificate> {
    let (sg, tg) = (source.graph(), target.graph());
    f.check_structure(sg, tg)?;
    let mut violations = Vec::new();

    let mut hit_v = vec![false; tg.vertex_count()];
    let mut hit_d = vec![false; tg.dart_count()];
    for v in sg.vertices() {
        hit_v[f.vertex(v).0] = true;
    }
    for d in sg.dart_ids() {
        hit_d[f.dart(d).0] = true;
    }
    for (v, hit) in hit_v.iter().enumerate() {
        if !hit {
            violations.push(Violation {
                condition: "surjective",
                dart: None,
                vertex: Some(v),
            });
        }
    }
    for (d, hit) in hit_d.iter().enumerate() {
        if !hit {
            violations.push(Violation {
                condition: "surjective",
                dart: Some(d),
                vertex: None,
            });
        }
    }
    let surjective = violations.is_empty();

    let mut star_bijective = true;
    let mut ports_preserved = true;
    for v in sg.vertices().filter(|v| !exempt.contains(v)) {
        let star = sg.star(v);
        let images: BTreeSet<DartId> = star.iter().map(|d| f.dart(*d)).collect();
        if images.len() != star.len() || star.len() != tg.degree(f.vertex(v)) {
            star_bijective = false;
            violations.push(Violation {
                condition: "star_bijective",
                dart: None,
                vertex: Some(v.0),
            });
        }
        for &d in star {
            if tg.dart(f.dart(d)).port != sg.dart(d).port {
                ports_preserved = false;
                violations.push(Violation {
                    condition: "ports_preserved",
                    dart: Some(d.0),
                    vertex: None,
                });
            }
        }
    }

    let mut lengths_preserved = true;
    for d in sg.dart_ids() {
        if sg.length(d) != tg.length(f.dart(d)) {
            lengths_preserved = false;
            violations.push(Violation {
                condition: "lengths_preserved",
                dart: Some(d.0),
                vertex: None,
            });
        }
    }

    let base_point = f.vertex(source.initial()) == target.initial();
    if !base_point {
        violations.push(Violation {
            condition: "base_point",
            dart: None,
            vertex: Some(source.initial().0),
        });
    }

    Ok(CoveringCertificate {
        map: f.clone(),
        surjective,
        star_bijective,
        ports_preserved,
        lengths_preserved,
        base_point,
        violations,
    })
}

/// Pullback `h ∘ f` of a target sensor along a map, with no checks.
pub fn pullback_sensor<S: Scalar>(
    f: &GraphMap,
    source: &PortedGraph<S>,
    target: &PortedGraph<S>,
    sensor: &SensorSpec<S>,
) -> SensorSpec<S> {
    match sensor {
        SensorSpec::Degree => SensorSpec::Degree,
        SensorSpec::Label {
            vertex_labels,
            edge_labels,
        } => SensorSpec::Label {
            vertex_labels: source
                .vertices()
                .map(|v| vertex_labels[f.vertex(v).0].clone())
                .collect(),
            edge_labels: (0..source.edge_count())
                .map(|e| edge_labels[f.dart(DartId::forward_of(e)).edge()].clone())
                .collect(),
        },
        SensorSpec::Beam { marks } => {
            let mut lifted = Vec::new();
            for e in 0..source.edge_count() {
                let image = f.dart(DartId::forward_of(e));
                let len = target.length(image);
                for m in marks.iter().filter(|m| m.edge == image.edge()) {
                    let offset = if image.is_forward() {
                        m.offset.clone()
                    } else {
                        len.clone() - m.offset.clone()
                    };
                    lifted.push(BeamMark {
                        edge: e,
                        offset,
                        label: m.label.clone(),
                    });
                }
            }
            SensorSpec::Beam { marks: lifted }
        }
        SensorSpec::Filtered { base, relabel } => SensorSpec::Filtered {
            base: Box::new(pullback_sensor(f, source, target, base)),
            relabel: relabel.clone(),
        },
    }
}

/// The unique sensor on the covering space that agrees with `target_sensor`
/// after projection.
pub fn lift_sensor<S: Scalar>(
    certificate: &CoveringCertificate,
    source: &Environment<S>,
    target: &Environment<S>,
    target_sensor: &SensorSpec<S>,
) -> Result<SensorSpec<S>> {
    if !certificate.is_positive() {
        return Err(Error::precondition("sensor can only be lifted along a verified covering"));
    }
    Ok(pullback_sensor(
        &certificate.map,
        source.graph(),
        target.graph(),
        target_sensor,
    ))
}

/// The unique source trajectory starting at the source base vertex that
/// projects onto `target.trajectory(u)`.
pub fn lift_state_path<S: Scalar>(
    certificate: &CoveringCertificate,
    source: &Environment<S>,
    target: &Environment<S>,
    u: &ControlSignal<S>,
) -> Result<Trajectory<S>> {
    if !certificate.is_positive() {
        return Err(Error::precondition("paths can only be lifted along a verified covering"));
    }
    let lifted = source.trajectory(u);
    debug_assert_eq!(
        certificate.map.project_trajectory(target.graph(), &lifted),
        target.trajectory(u)
    );
    Ok(lifted)
}

/// Expands per-edge voltages (on forward darts) into per-dart voltages.
pub fn edge_voltages(per_edge: &[usize], k: usize) -> Vec<usize> {
    per_edge
        .iter()
        .flat_map(|&v| [v % k, (k - v % k) % k])
        .collect()
}

/// The `k`-fold derived cover of a voltage assignment in `Z/k`.
///
/// Vertex `(v, i)` is named `"{v}.{i}"`; the copy of dart `d` leaving
/// `(v, i)` ends at `(head d, i + voltage d)`. The base vertex lifts to
/// `(base, 0)` and the sensor is pulled back.
pub fn cyclic_cover<S: Scalar>(
    env: &Environment<S>,
    k: usize,
    voltage: &[usize],
) -> Result<(Environment<S>, GraphMap)> {
    let g = env.graph();
    if k == 0 {
        return Err(Error::validation("cover degree must be at least 1"));
    }
    if voltage.len() != g.dart_count() {
        return Err(Error::validation(format!(
            "need one voltage per dart ({}), got {}",
            g.dart_count(),
            voltage.len()
        )));
    }
    for d in g.dart_ids() {
        let (a, b) = (voltage[d.0], voltage[d.reverse().0]);
        if a >= k || (a + b) % k != 0 {
            return Err(Error::validation(format!(
                "voltages on dart {} and its reverse are not opposite mod {k}",
                d.0
            )));
        }
    }
    let lift = |v: VertexId, i: usize| VertexId(v.0 * k + i);
    let mut names = Vec::with_capacity(g.vertex_count() * k);
    let mut vertex_map = Vec::with_capacity(names.capacity());
    for v in g.vertices() {
        for i in 0..k {
            names.push(format!("{}.{i}", g.name(v)));
            vertex_map.push(v);
        }
    }
    let mut edges = Vec::with_capacity(g.edge_count() * k);
    let mut dart_map = Vec::with_capacity(2 * edges.capacity());
    for (e, edge) in g.edges().iter().enumerate() {
        let forward = DartId::forward_of(e);
        for i in 0..k {
            edges.push(EdgeSpec {
                tail: lift(edge.tail, i),
                head: lift(edge.head, (i + voltage[forward.0]) % k),
                port_at_tail: edge.port_at_tail,
                port_at_head: edge.port_at_head,
                length: edge.length.clone(),
            });
            dart_map.push(forward);
            dart_map.push(forward.reverse());
        }
    }
    let graph = PortedGraph::new(names, edges).map_err(|e| {
        Error::validation(format!("voltage assignment does not give a connected cover: {e}"))
    })?;
    let map = GraphMap {
        vertex_map,
        dart_map,
    };
    let sensor = pullback_sensor(&map, &graph, g, env.sensor());
    let cover = Environment::new(graph, lift(env.initial(), 0), sensor, env.alphabet_width())?;
    Ok((cover, map))
}

/// A finite ball of the universal cover.
#[derive(Clone, Debug)]
pub struct TruncatedCover<S> {
    pub env: Environment<S>,
    pub map: GraphMap,
    /// Cut vertices whose star is incomplete.
    pub boundary: BTreeSet<VertexId>,
}

/// Upper bound on generated vertices.
pub const MAX_COVER_VERTICES: usize = 500_000;

/// The tree of non-backtracking walks from the base vertex, expanded at
/// every vertex lying at path length below `radius`.
///
/// Every vertex closer than `radius` keeps its full star, so signals of
/// duration below `radius` never reach the cut and produce exactly the
/// traces they produce in the base environment.
pub fn universal_cover_truncation<S: Scalar>(
    env: &Environment<S>,
    radius: &S,
) -> Result<TruncatedCover<S>> {
    if !radius.is_positive() {
        return Err(Error::validation("truncation radius must be positive"));
    }
    let g = env.graph();
    struct Node<S> {
        base: VertexId,
        /// Base dart used to arrive here.
        via: Option<DartId>,
        parent: Option<usize>,
        depth: S,
    }
    let mut nodes = vec![Node {
        base: env.initial(),
        via: None,
        parent: None,
        depth: S::zero(),
    }];
    let mut expanded = vec![false];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if nodes[i].depth >= *radius {
            continue;
        }
        expanded[i] = true;
        let (base, via) = (nodes[i].base, nodes[i].via);
        for &d in g.star(base) {
            if Some(d.reverse()) == via {
                continue;
            }
            if nodes.len() >= MAX_COVER_VERTICES {
                return Err(Error::precondition(format!(
                    "universal cover ball exceeds {MAX_COVER_VERTICES} vertices; lower the radius"
                )));
            }
            nodes.push(Node {
                base: g.dart(d).head,
                via: Some(d),
                parent: Some(i),
                depth: nodes[i].depth.clone() + g.length(d).clone(),
            });
            expanded.push(false);
            queue.push_back(nodes.len() - 1);
        }
    }

    let mut boundary = BTreeSet::new();
    let names = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| format!("{}@{i}", g.name(n.base)))
        .collect();
    let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
    let mut dart_map = Vec::with_capacity(2 * edges.capacity());
    for (i, node) in nodes.iter().enumerate() {
        let (Some(parent), Some(d)) = (node.parent, node.via) else { continue };
        let full = expanded[i] || g.degree(node.base) == 1;
        if !full {
            boundary.insert(VertexId(i));
        }
        edges.push(EdgeSpec {
            tail: VertexId(parent),
            head: VertexId(i),
            port_at_tail: g.dart(d).port,
            // a cut vertex keeps only this dart, so it takes port 0
            port_at_head: if full { g.dart(d.reverse()).port } else { 0 },
            length: g.length(d).clone(),
        });
        dart_map.push(d);
        dart_map.push(d.reverse());
    }
    let graph = PortedGraph::new(names, edges)?;
    let map = GraphMap {
        vertex_map: nodes.iter().map(|n| n.base).collect(),
        dart_map,
    };
    let sensor = pullback_sensor(&map, &graph, g, env.sensor());
    let cover = Environment::new(graph, VertexId(0), sensor, env.alphabet_width())?;
    Ok(TruncatedCover {
        env: cover,
        map,
        boundary,
    })
}

/// Stable vertex partition of iterated degree refinement, summarized as a
/// table that does not depend on vertex names or class sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementTable {
    pub rounds: usize,
    /// `rows[c][j]`: darts from a class-`c` vertex to class-`j` vertices.
    pub rows: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRefinement {
    pub table: RefinementTable,
    pub vertex_class: Vec<usize>,
}

/// Refines vertices by degree, then repeatedly by the multiset of
/// neighbouring classes, until the partition stops splitting.
///
/// Class ids are ranks of the refinement signatures, so the table is
/// canonical: graphs with a common universal cover (equivalently, a common
/// finite cover) produce equal tables and all others produce different
/// ones.
pub fn degree_refinement<S: Scalar>(env: &Environment<S>) -> DegreeRefinement {
    let g = env.graph();
    let rank = |keys: Vec<(usize, Vec<usize>)>| -> (Vec<usize>, usize) {
        let ids: BTreeMap<&(usize, Vec<usize>), usize> = keys
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let count = ids.len();
        (keys.iter().map(|k| ids[k]).collect(), count)
    };
    let (mut class, mut count) = rank(g.vertices().map(|v| (g.degree(v), Vec::new())).collect());
    let mut rounds = 0;
    loop {
        let keys = g
            .vertices()
            .map(|v| {
                let mut around: Vec<usize> =
                    g.star(v).iter().map(|d| class[g.dart(*d).head.0]).collect();
                around.sort_unstable();
                (class[v.0], around)
            })
            .collect();
        let (next, next_count) = rank(keys);
        rounds += 1;
        if next_count == count {
            class = next;
            break;
        }
        class = next;
        count = next_count;
    }
    let mut rows = vec![Vec::new(); count];
    for v in g.vertices() {
        let c = class[v.0];
        if rows[c].is_empty() {
            let mut row = vec![0; count];
            for d in g.star(v) {
                row[class[g.dart(*d).head.0]] += 1;
            }
            rows[c] = row;
        }
    }
    DegreeRefinement {
        table: RefinementTable { rounds, rows },
        vertex_class: class,
    }
}
