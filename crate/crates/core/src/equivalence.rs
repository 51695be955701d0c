//! Telling environments apart.
//!
//! Three tools of increasing strength: exact comparison of traces for one
//! signal, a sampled search over many signals, and an exact decision
//! procedure for discrete-time signals on unit-length graphs (partition
//! refinement over the unit-step transition system). A separate search
//! looks for homomorphisms, which certify equivalence directly.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covering::GraphMap;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::graph::{DartId, GraphState, VertexId};
use crate::scalar::Scalar;
use crate::sensor::Observation;
use crate::signal::{ControlSignal, Symbol};
use crate::trace::SensorTrace;

/// Environments are comparable only with the same inputs and outputs.
pub fn check_interfaces<S: Scalar>(e1: &Environment<S>, e2: &Environment<S>) -> Result<()> {
    if e1.alphabet_width() != e2.alphabet_width() {
        return Err(Error::precondition(format!(
            "alphabet widths differ ({} vs {})",
            e1.alphabet_width(),
            e2.alphabet_width()
        )));
    }
    if e1.sensor().family() != e2.sensor().family() {
        return Err(Error::precondition(format!(
            "sensor output domains differ ({:?} vs {:?})",
            e1.sensor().family(),
            e2.sensor().family()
        )));
    }
    Ok(())
}

/// Both traces of one signal and the first time they differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceComparison<S> {
    pub left: SensorTrace<S>,
    pub right: SensorTrace<S>,
    pub divergence: Option<S>,
}

impl<S> TraceComparison<S> {
    pub fn equal(&self) -> bool {
        self.divergence.is_none()
    }
}

pub fn traces_equal<S: Scalar>(
    e1: &Environment<S>,
    e2: &Environment<S>,
    u: &ControlSignal<S>,
) -> Result<TraceComparison<S>> {
    check_interfaces(e1, e2)?;
    let left = e1.trace_of(u);
    let right = e2.trace_of(u);
    let divergence = left.first_divergence(&right);
    Ok(TraceComparison {
        left,
        right,
        divergence,
    })
}

/// How many signals [`check_equiv_sampled`] tries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingParams {
    /// Every signal made of at most this many unit-length pieces.
    pub max_len: usize,
    /// Random signals with rational breakpoints tried afterwards.
    pub random_signals: usize,
    /// Piece count bound for the random signals.
    pub max_pieces: usize,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            max_len: 6,
            random_signals: 100,
            max_pieces: 6,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampledVerdict<S> {
    /// Nothing found. Says nothing about longer signals.
    NoDivergence { horizon: usize, signals_checked: usize },
    Distinguished {
        witness: ControlSignal<S>,
        divergence: S,
        signals_checked: usize,
    },
}

impl<S> SampledVerdict<S> {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, SampledVerdict::Distinguished { .. })
    }

    pub fn signals_checked(&self) -> usize {
        match self {
            SampledVerdict::NoDivergence { signals_checked, .. }
            | SampledVerdict::Distinguished { signals_checked, .. } => *signals_checked,
        }
    }
}

/// A random signal of 1..=`max_pieces` pieces with durations `n/d`,
/// `d ≤ 4`, `n/d ≤ 3`.
pub fn random_signal<S: Scalar, R: Rng>(rng: &mut R, width: usize, max_pieces: usize) -> ControlSignal<S> {
    let alphabet = Symbol::alphabet(width);
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    ControlSignal::from_pieces((0..pieces).map(|_| {
        let symbol = alphabet[rng.gen_range(0..alphabet.len())];
        let den = rng.gen_range(1..=4);
        let num = rng.gen_range(1..=3 * den);
        (symbol, S::from_ratio(num, den))
    }))
    .expect("positive durations")
}

/// Unit-duration steps with results memoized for vertex starts.
struct Stepper<'e, S> {
    env: &'e Environment<S>,
    cache: HashMap<(VertexId, Symbol), (SensorTrace<S>, GraphState<S>)>,
}

impl<'e, S: Scalar> Stepper<'e, S> {
    fn new(env: &'e Environment<S>) -> Self {
        Stepper {
            env,
            cache: HashMap::new(),
        }
    }

    fn step(&mut self, x: &GraphState<S>, a: Symbol) -> (SensorTrace<S>, GraphState<S>) {
        let env = self.env;
        let compute = || {
            let u = ControlSignal::constant(a, S::one());
            let traj = env.trajectory_from(x, &u).expect("reachable state");
            (env.trace_along(&traj), traj.final_state().clone())
        };
        match x {
            GraphState::Vertex(v) => self.cache.entry((*v, a)).or_insert_with(compute).clone(),
            GraphState::Edge { .. } => compute(),
        }
    }
}

/// Compares every discrete signal of length `≤ max_len` (shortest first,
/// then in alphabet order), then `random_signals` random ones.
///
/// Refutation only: a witness is definitive, silence is not a proof.
pub fn check_equiv_sampled<S: Scalar>(
    e1: &Environment<S>,
    e2: &Environment<S>,
    params: &SamplingParams,
) -> Result<SampledVerdict<S>> {
    check_interfaces(e1, e2)?;
    let alphabet = e1.alphabet();
    let mut checked = 0usize;
    let found = |witness: ControlSignal<S>, checked| -> Result<SampledVerdict<S>> {
        let cmp = traces_equal(e1, e2, &witness)?;
        Ok(SampledVerdict::Distinguished {
            divergence: cmp.divergence.expect("witness diverges"),
            witness,
            signals_checked: checked,
        })
    };

    checked += 1;
    if e1.trace_of(&ControlSignal::empty()) != e2.trace_of(&ControlSignal::empty()) {
        return found(ControlSignal::empty(), checked);
    }
    let (mut s1, mut s2) = (Stepper::new(e1), Stepper::new(e2));
    let mut frontier = vec![(Vec::<Symbol>::new(), e1.initial_state(), e2.initial_state())];
    for level in 1..=params.max_len {
        let mut next = Vec::new();
        for (prefix, x1, x2) in &frontier {
            for &a in &alphabet {
                checked += 1;
                let (t1, y1) = s1.step(x1, a);
                let (t2, y2) = s2.step(x2, a);
                let mut word = prefix.clone();
                word.push(a);
                if t1 != t2 {
                    return found(ControlSignal::discrete(&word), checked);
                }
                if level < params.max_len {
                    next.push((word, y1, y2));
                }
            }
        }
        frontier = next;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.random_signals {
        let u = random_signal(&mut rng, e1.alphabet_width(), params.max_pieces);
        checked += 1;
        if !traces_equal(e1, e2, &u)?.equal() {
            return found(u, checked);
        }
    }
    Ok(SampledVerdict::NoDivergence {
        horizon: params.max_len,
        signals_checked: checked,
    })
}

/// Vertices reachable at integer times under unit-duration actions, with
/// each transition labelled by the trace of its step.
#[derive(Clone, Debug)]
pub struct DiscreteStateSpace<S> {
    pub states: Vec<VertexId>,
    pub actions: Vec<Symbol>,
    pub observation: Vec<Observation>,
    /// `next[i][a]`: index of the state reached from `states[i]` by `actions[a]`.
    pub next: Vec<Vec<usize>>,
    pub step_trace: Vec<Vec<SensorTrace<S>>>,
}

impl<S: Scalar> DiscreteStateSpace<S> {
    pub fn new(env: &Environment<S>) -> Result<Self> {
        let g = env.graph();
        for e in 0..g.edge_count() {
            let len = g.length(DartId::forward_of(e));
            if !len.is_one() {
                return Err(Error::NonUnitLength {
                    edge: e,
                    length: len.to_string(),
                });
            }
        }
        let actions = env.alphabet();
        let unit = |a| ControlSignal::constant(a, S::one());
        let mut index: HashMap<VertexId, usize> = HashMap::from([(env.initial(), 0)]);
        let mut states = vec![env.initial()];
        let (mut next, mut step_trace) = (Vec::new(), Vec::new());
        let mut i = 0;
        while i < states.len() {
            let x = GraphState::Vertex(states[i]);
            let (mut row, mut traces) = (Vec::new(), Vec::new());
            for &a in &actions {
                let traj = env.trajectory_from(&x, &unit(a))?;
                let GraphState::Vertex(y) = *traj.final_state() else {
                    unreachable!("unit steps on unit edges end at vertices")
                };
                let j = *index.entry(y).or_insert_with(|| {
                    states.push(y);
                    states.len() - 1
                });
                row.push(j);
                traces.push(env.trace_along(&traj));
            }
            next.push(row);
            step_trace.push(traces);
            i += 1;
        }
        let observation = states
            .iter()
            .map(|v| env.sensor().observe(g, &GraphState::Vertex(*v)))
            .collect();
        Ok(DiscreteStateSpace {
            states,
            actions,
            observation,
            next,
            step_trace,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BisimulationStats {
    pub states: usize,
    pub rounds: usize,
    pub signals_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimulationResult<S> {
    /// Product states reachable from the base pair; a bisimulation.
    Related {
        relation: Vec<(VertexId, VertexId)>,
        stats: BisimulationStats,
    },
    /// A shortest discrete witness, alphabet-first among equals.
    Distinguished {
        witness: ControlSignal<S>,
        divergence: S,
        stats: BisimulationStats,
    },
}

impl<S> BisimulationResult<S> {
    pub fn is_related(&self) -> bool {
        matches!(self, BisimulationResult::Related { .. })
    }

    pub fn stats(&self) -> &BisimulationStats {
        match self {
            BisimulationResult::Related { stats, .. }
            | BisimulationResult::Distinguished { stats, .. } => stats,
        }
    }
}

/// Ranks `keys` by sorted order so class ids do not depend on state order.
fn rank<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, usize) {
    let ids: BTreeMap<K, usize> = keys
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    (keys.iter().map(|k| ids[k]).collect(), ids.len())
}

/// Decides whether two unit-length environments produce equal traces for
/// every signal whose breakpoints are integers.
///
/// Round 0 splits states by reading; each later round splits by the trace
/// of every unit step and the class of its successor. Two states separate
/// in round `r` exactly when the shortest signal telling them apart has
/// `r` unit pieces, which is how the witness is rebuilt.
pub fn compute_bisimulation<S: Scalar>(
    e1: &Environment<S>,
    e2: &Environment<S>,
) -> Result<BisimulationResult<S>> {
    check_interfaces(e1, e2)?;
    let a = DiscreteStateSpace::new(e1)?;
    let b = DiscreteStateSpace::new(e2)?;
    let offset = a.len();
    let n = offset + b.len();
    let actions = a.actions.clone();

    // disjoint union with interned step traces
    let mut traces: Vec<SensorTrace<S>> = Vec::new();
    let mut intern = |t: &SensorTrace<S>| match traces.iter().position(|s| s == t) {
        Some(i) => i,
        None => {
            traces.push(t.clone());
            traces.len() - 1
        }
    };
    let mut label = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    let mut obs = Vec::with_capacity(n);
    for (space, shift) in [(&a, 0), (&b, offset)] {
        for i in 0..space.len() {
            label.push(space.step_trace[i].iter().map(&mut intern).collect::<Vec<_>>());
            succ.push(space.next[i].iter().map(|j| j + shift).collect::<Vec<_>>());
            obs.push(space.observation[i].clone());
        }
    }

    let (first, mut count) = rank(&obs);
    let mut rounds = vec![first];
    loop {
        let prev = rounds.last().expect("round 0");
        let keys: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
            .map(|s| {
                let moves = (0..actions.len()).map(|k| (label[s][k], prev[succ[s][k]])).collect();
                (prev[s], moves)
            })
            .collect();
        let (next, next_count) = rank(&keys);
        if next_count == count {
            break;
        }
        rounds.push(next);
        count = next_count;
    }

    let stats = BisimulationStats {
        states: n,
        rounds: rounds.len(),
        signals_checked: n * actions.len(),
    };
    let (p, q) = (0, offset);
    let stable = rounds.last().expect("round 0");
    if stable[p] == stable[q] {
        let mut seen = BTreeSet::from([(p, q)]);
        let mut queue = VecDeque::from([(p, q)]);
        while let Some((x, y)) = queue.pop_front() {
            for k in 0..actions.len() {
                let pair = (succ[x][k], succ[y][k]);
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        let relation = seen
            .into_iter()
            .map(|(x, y)| (a.states[x], b.states[y - offset]))
            .collect();
        return Ok(BisimulationResult::Related { relation, stats });
    }

    let mut r = rounds
        .iter()
        .position(|c| c[p] != c[q])
        .expect("separated in some round");
    let (mut x, mut y) = (p, q);
    let mut word = Vec::with_capacity(r);
    while r > 0 {
        let prev = &rounds[r - 1];
        let k = (0..actions.len())
            .find(|&k| label[x][k] != label[y][k] || prev[succ[x][k]] != prev[succ[y][k]])
            .expect("separating action exists");
        word.push(actions[k]);
        if label[x][k] != label[y][k] {
            break;
        }
        x = succ[x][k];
        y = succ[y][k];
        r -= 1;
    }
    let witness = ControlSignal::discrete(&word);
    let divergence = traces_equal(e1, e2, &witness)?
        .divergence
        .expect("rebuilt witness diverges");
    Ok(BisimulationResult::Distinguished {
        witness,
        divergence,
        stats,
    })
}

/// Why a relation fails to be a bisimulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDefect {
    pub pair: (VertexId, VertexId),
    pub action: Option<Symbol>,
    pub reason: &'static str,
}

/// Checks a relation clause by clause: it holds the base pair, related
/// states read the same, and every unit action produces equal step traces
/// and lands back in the relation. Returns every failure found.
pub fn verify_bisimulation<S: Scalar>(
    e1: &Environment<S>,
    e2: &Environment<S>,
    relation: &[(VertexId, VertexId)],
) -> Result<Vec<RelationDefect>> {
    check_interfaces(e1, e2)?;
    let members: BTreeSet<(VertexId, VertexId)> = relation.iter().copied().collect();
    let mut defects = Vec::new();
    let base = (e1.initial(), e2.initial());
    if !members.contains(&base) {
        defects.push(RelationDefect {
            pair: base,
            action: None,
            reason: "base pair missing",
        });
    }
    for &(v, w) in &members {
        let (x, y) = (GraphState::Vertex(v), GraphState::Vertex(w));
        if e1.sensor().observe(e1.graph(), &x) != e2.sensor().observe(e2.graph(), &y) {
            defects.push(RelationDefect {
                pair: (v, w),
                action: None,
                reason: "readings differ",
            });
        }
        for a in e1.alphabet() {
            let u = ControlSignal::constant(a, S::one());
            if e1.trace_from(&x, &u)? != e2.trace_from(&y, &u)? {
                defects.push(RelationDefect {
                    pair: (v, w),
                    action: Some(a),
                    reason: "step traces differ",
                });
            }
            let succ = match (e1.apply(&u, &x)?, e2.apply(&u, &y)?) {
                (GraphState::Vertex(v2), GraphState::Vertex(w2)) => Some((v2, w2)),
                _ => None,
            };
            if !succ.is_some_and(|p| members.contains(&p)) {
                defects.push(RelationDefect {
                    pair: (v, w),
                    action: Some(a),
                    reason: "successor pair outside relation",
                });
            }
        }
    }
    Ok(defects)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismSearch {
    pub map: Option<GraphMap>,
    /// Vertex assignments made before success or failure.
    pub explored: usize,
    pub failure: Option<String>,
}

/// Looks for a port-preserving, length-preserving, sensor-preserving map
/// from `source` to `target` sending base vertex to base vertex.
///
/// Port preservation leaves no freedom: the image of the base vertex fixes
/// the image of every dart leaving it, and connectivity propagates that to
/// the whole graph. The search is therefore a single propagation, and a
/// conflict proves no such map exists.
pub fn homomorphism_search<S: Scalar>(
    source: &Environment<S>,
    target: &Environment<S>,
) -> Result<HomomorphismSearch> {
    check_interfaces(source, target)?;
    let (sg, tg) = (source.graph(), target.graph());
    let (sh, th) = (source.sensor(), target.sensor());
    let mut vertex_map: Vec<Option<VertexId>> = vec![None; sg.vertex_count()];
    let mut dart_map: Vec<Option<DartId>> = vec![None; sg.dart_count()];
    let mut explored = 0;
    let fail = |explored, why: String| {
        Ok(HomomorphismSearch {
            map: None,
            explored,
            failure: Some(why),
        })
    };

    vertex_map[source.initial().0] = Some(target.initial());
    let mut queue = VecDeque::from([source.initial()]);
    while let Some(v) = queue.pop_front() {
        explored += 1;
        let w = vertex_map[v.0].expect("assigned before queued");
        if sg.degree(v) != tg.degree(w) {
            return fail(explored, format!("degree of {} differs from {}", sg.name(v), tg.name(w)));
        }
        if sh.observe(sg, &GraphState::Vertex(v)) != th.observe(tg, &GraphState::Vertex(w)) {
            return fail(explored, format!("reading at {} differs from {}", sg.name(v), tg.name(w)));
        }
        for &d in sg.star(v) {
            let image = tg.port_dart(w, sg.dart(d).port).expect("equal degree");
            for (from, to) in [(d, image), (d.reverse(), image.reverse())] {
                match dart_map[from.0] {
                    Some(old) if old != to => {
                        return fail(explored, format!("dart {} needs two images", from.0));
                    }
                    _ => dart_map[from.0] = Some(to),
                }
            }
            if sg.length(d) != tg.length(image) {
                return fail(explored, format!("length of dart {} not preserved", d.0));
            }
            if sg.dart(d.reverse()).port != tg.dart(image.reverse()).port {
                return fail(explored, format!("return port of dart {} not preserved", d.0));
            }
            if sh.interior(sg, d) != th.interior(tg, image) {
                return fail(explored, format!("readings along dart {} not preserved", d.0));
            }
            let (h, hi) = (sg.dart(d).head, tg.dart(image).head);
            match vertex_map[h.0] {
                Some(old) if old != hi => {
                    return fail(
                        explored,
                        format!("{} would map to both {} and {}", sg.name(h), tg.name(old), tg.name(hi)),
                    );
                }
                Some(_) => {}
                None => {
                    vertex_map[h.0] = Some(hi);
                    queue.push_back(h);
                }
            }
        }
    }
    let map = GraphMap {
        vertex_map: vertex_map.into_iter().map(|v| v.expect("connected")).collect(),
        dart_map: dart_map.into_iter().map(|d| d.expect("connected")).collect(),
    };
    map.check_structure(sg, tg)?;
    Ok(HomomorphismSearch {
        map: Some(map),
        explored,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{cyclic_cover, edge_voltages};
    use crate::graph::{EdgeSpec, PortedGraph};
    use crate::scalar::{rational, Rational};
    use crate::sensor::SensorSpec;
    use crate::signal::Symbol::Port;

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

    /// Three vertices in a row, started in the middle.
    fn path3() -> Environment<Rational> {
        let e = |t, h, pt| EdgeSpec {
            tail: VertexId(t),
            head: VertexId(h),
            port_at_tail: pt,
            port_at_head: 0,
            length: rational(1, 1),
        };
        let graph =
            PortedGraph::new(vec!["a".into(), "m".into(), "b".into()], vec![e(1, 0, 0), e(1, 2, 1)])
                .unwrap();
        Environment::new(graph, VertexId(1), SensorSpec::Degree, 2).unwrap()
    }

    fn c6() -> Environment<Rational> {
        cyclic_cover(&cycle(3), 2, &edge_voltages(&[1, 1, 1], 2)).unwrap().0
    }

    #[test]
    fn traces_equal_examples() {
        let c3 = cycle(3);
        let u = ControlSignal::constant(Port(0), rational(3, 1));
        assert!(traces_equal(&c3, &c3, &u).unwrap().equal());
        assert!(traces_equal(&c3, &c6(), &u).unwrap().equal());
        let cmp = traces_equal(&path3(), &c3, &ControlSignal::constant(Port(0), rational(2, 1))).unwrap();
        assert_eq!(cmp.divergence, Some(rational(1, 1)));
    }

    #[test]
    fn mismatched_interfaces_are_rejected() {
        let wide = cycle(3).with_alphabet_width(3).unwrap();
        assert!(matches!(
            traces_equal(&cycle(3), &wide, &ControlSignal::empty()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sampled_check_examples() {
        let c3 = cycle(3);
        let params = SamplingParams {
            max_len: 8,
            random_signals: 20,
            ..SamplingParams::default()
        };
        let same = check_equiv_sampled(&c3, &c3, &params).unwrap();
        assert!(!same.is_distinguished());
        // 1 + 3 + ... + 3^8
        assert_eq!(same.signals_checked(), (3usize.pow(9) - 1) / 2 + 20);
        assert!(!check_equiv_sampled(&c3, &c6(), &params).unwrap().is_distinguished());
        let SampledVerdict::Distinguished { witness, divergence, .. } =
            check_equiv_sampled(&path3(), &c3, &params).unwrap()
        else {
            panic!("path and triangle differ");
        };
        assert_eq!(witness, ControlSignal::discrete(&[Port(0)]));
        assert_eq!(divergence, rational(1, 1));
    }

    #[test]
    fn bisimulation_of_triangle_and_hexagon() {
        let c3 = cycle(3);
        let c6 = c6();
        let BisimulationResult::Related { relation, stats } = compute_bisimulation(&c3, &c6).unwrap()
        else {
            panic!("covering pair is related");
        };
        assert_eq!(stats.states, 9);
        // every hexagon vertex i is paired exactly with i mod 3
        assert_eq!(relation.len(), 6);
        for (v, w) in &relation {
            let lifted = c6.graph().name(*w);
            assert!(lifted.starts_with(c3.graph().name(*v)), "{lifted}");
        }
        assert!(verify_bisimulation(&c3, &c6, &relation).unwrap().is_empty());
        let BisimulationResult::Related { relation, .. } = compute_bisimulation(&c3, &c3).unwrap() else {
            panic!()
        };
        assert!(relation.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn bisimulation_rebuilds_shortest_witness() {
        let BisimulationResult::Distinguished { witness, divergence, stats } =
            compute_bisimulation(&path3(), &cycle(3)).unwrap()
        else {
            panic!("path and triangle differ");
        };
        assert_eq!(witness, ControlSignal::discrete(&[Port(0)]));
        assert_eq!(divergence, rational(1, 1));
        assert!(stats.rounds >= 2);
    }

    #[test]
    fn verifier_rejects_bad_relations() {
        let c3 = cycle(3);
        let defects = verify_bisimulation(&c3, &c3, &[(VertexId(0), VertexId(1))]).unwrap();
        assert!(defects.iter().any(|d| d.reason == "base pair missing"));
        assert!(defects.iter().any(|d| d.action == Some(Port(0)) && d.reason.contains("successor")));
    }

    #[test]
    fn non_unit_lengths_are_refused() {
        let e = EdgeSpec {
            tail: VertexId(0),
            head: VertexId(1),
            port_at_tail: 0,
            port_at_head: 0,
            length: rational(3, 2),
        };
        let g = PortedGraph::new(vec!["a".into(), "b".into()], vec![e]).unwrap();
        let env = Environment::with_default_width(g, VertexId(0), SensorSpec::Degree).unwrap();
        assert!(matches!(
            compute_bisimulation(&env, &env),
            Err(Error::NonUnitLength { edge: 0, .. })
        ));
    }

    #[test]
    fn homomorphism_examples() {
        let c3 = cycle(3);
        let found = homomorphism_search(&c3, &c3).unwrap();
        assert_eq!(found.map, Some(GraphMap::identity(c3.graph())));
        let down = homomorphism_search(&c6(), &c3).unwrap();
        assert!(down.map.is_some());
        assert!(homomorphism_search(&c3, &c6()).unwrap().map.is_none());
        let none = homomorphism_search(&path3(), &c3).unwrap();
        assert!(none.map.is_none());
        assert!(none.failure.is_some());
    }
}
