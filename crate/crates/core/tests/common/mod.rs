#![allow(dead_code)]

use envequiv::{
    cyclic_cover, pullback_sensor, rational, random_signal, ControlSignal, DartId, EdgeSpec, Env,
    Environment, GraphMap, GraphState, Observation, PortedGraph, Rational, Sensor, SensorSpec,
    Signal, State, Symbol, VertexId,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Signals over `width` ports with durations `n/d`, `d ≤ 4`.
pub fn signal_strategy(width: usize, max_pieces: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec((0..=width, 1i64..=12, 1i64..=4), 0..=max_pieces).prop_map(move |raw| {
        ControlSignal::from_pieces(raw.into_iter().map(|(s, n, d)| {
            let sym = if s == width { Symbol::Halt } else { Symbol::Port(s) };
            (sym, rational(n, d))
        }))
        .unwrap()
    })
}

pub fn rat_strategy(max: i64) -> impl Strategy<Value = Rational> {
    (0..=max * 12).prop_map(|n| rational(n, 12))
}

/// Connected graph with at most `max_edges` edges and degrees at most
/// `max_degree`; loops and parallel edges allowed.
pub fn random_graph<R: Rng>(rng: &mut R, max_edges: usize, max_degree: usize, unit: bool) -> PortedGraph<Rational> {
    loop {
        let n = rng.gen_range(1..=(max_edges + 1).min(4));
        let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        let extra = rng.gen_range(0..=max_edges - (n - 1));
        for _ in 0..extra {
            pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        let mut slots: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for (e, &(a, b)) in pairs.iter().enumerate() {
            slots[a].push((e, true));
            slots[b].push((e, false));
        }
        if slots.iter().any(|s| s.len() > max_degree) {
            continue;
        }
        let mut ports = vec![(0, 0); pairs.len()];
        for s in &mut slots {
            s.shuffle(rng);
            for (p, &(e, at_tail)) in s.iter().enumerate() {
                if at_tail {
                    ports[e].0 = p;
                } else {
                    ports[e].1 = p;
                }
            }
        }
        let edges = pairs
            .iter()
            .zip(&ports)
            .map(|(&(a, b), &(pa, pb))| EdgeSpec {
                tail: VertexId(a),
                head: VertexId(b),
                port_at_tail: pa,
                port_at_head: pb,
                length: if unit {
                    rational(1, 1)
                } else {
                    let d = rng.gen_range(1..=3);
                    rational(rng.gen_range(1..=2 * d), d)
                },
            })
            .collect();
        let names = (0..n).map(|i| format!("n{i}")).collect();
        return PortedGraph::new(names, edges).expect("generated graph is valid");
    }
}

pub fn random_label_sensor<R: Rng>(rng: &mut R, g: &PortedGraph<Rational>) -> Sensor {
    if rng.gen_bool(0.5) {
        // degree in label form, so it is comparable with other label sensors
        SensorSpec::Label {
            vertex_labels: g.vertices().map(|v| Observation::Value(g.degree(v) as i64)).collect(),
            edge_labels: vec![Observation::Value(-1); g.edge_count()],
        }
    } else {
        SensorSpec::Label {
            vertex_labels: g.vertices().map(|_| Observation::Value(rng.gen_range(0..3))).collect(),
            edge_labels: (0..g.edge_count()).map(|_| Observation::Value(rng.gen_range(0..3))).collect(),
        }
    }
}

pub fn random_beam_sensor<R: Rng>(rng: &mut R, g: &PortedGraph<Rational>) -> Sensor {
    let mut marks = Vec::new();
    for e in 0..g.edge_count() {
        if rng.gen_bool(0.5) {
            let len = g.length(DartId::forward_of(e)).clone();
            marks.push(envequiv::BeamMark {
                edge: e,
                offset: len * rational(rng.gen_range(1..4), 4),
                label: Observation::Label(format!("b{}", rng.gen_range(0..2))),
            });
        }
    }
    SensorSpec::Beam { marks }
}

/// Random environment with any sensor kind.
pub fn random_env<R: Rng>(rng: &mut R, max_edges: usize, width: usize, unit: bool) -> Env {
    let g = random_graph(rng, max_edges, width, unit);
    let sensor = match rng.gen_range(0..3) {
        0 => SensorSpec::Degree,
        1 => random_label_sensor(rng, &g),
        _ => random_beam_sensor(rng, &g),
    };
    let start = VertexId(rng.gen_range(0..g.vertex_count()));
    Environment::new(g, start, sensor, width).unwrap()
}

/// Any point of the graph, on a vertex or strictly inside an edge.
pub fn random_state<R: Rng>(rng: &mut R, env: &Env) -> State {
    let g = env.graph();
    if g.edge_count() == 0 || rng.gen_bool(0.4) {
        return GraphState::Vertex(VertexId(rng.gen_range(0..g.vertex_count())));
    }
    let dart = DartId(rng.gen_range(0..g.dart_count()));
    let offset = g.length(dart).clone() * rational(rng.gen_range(1..8), 8);
    GraphState::on_dart(g, dart, offset)
}

pub fn random_signal_of<R: Rng>(rng: &mut R, env: &Env, max_pieces: usize) -> Signal {
    random_signal(rng, env.alphabet_width(), max_pieces)
}

/// Random connected cyclic cover of `base` (degree 2 or 3), with its
/// projection. Bases whose voltage choices keep disconnecting are skipped
/// by returning `None`.
pub fn random_cover<R: Rng>(rng: &mut R, base: &Env) -> Option<(Env, GraphMap)> {
    for _ in 0..20 {
        let k = rng.gen_range(2..=3);
        let per_edge: Vec<usize> = (0..base.graph().edge_count()).map(|_| rng.gen_range(0..k)).collect();
        if let Ok(found) = cyclic_cover(base, k, &envequiv::edge_voltages(&per_edge, k)) {
            return Some(found);
        }
    }
    None
}

/// An isomorphic copy with shuffled vertex and edge indices and randomly
/// flipped edge orientations, plus the isomorphism from `env` to the copy.
pub fn relabel<R: Rng>(rng: &mut R, env: &Env) -> (Env, GraphMap) {
    let g = env.graph();
    let mut vperm: Vec<usize> = (0..g.vertex_count()).collect();
    vperm.shuffle(rng);
    let mut eperm: Vec<usize> = (0..g.edge_count()).collect();
    eperm.shuffle(rng);
    let flips: Vec<bool> = (0..g.edge_count()).map(|_| rng.gen_bool(0.5)).collect();

    let mut names = vec![String::new(); g.vertex_count()];
    for v in g.vertices() {
        names[vperm[v.0]] = format!("r{}", g.name(v));
    }
    let mut edges = vec![None; g.edge_count()];
    let mut dart_map = vec![DartId(0); g.dart_count()];
    for (e, spec) in g.edges().iter().enumerate() {
        let ne = eperm[e];
        let (t, h, pt, ph) = if flips[e] {
            (spec.head, spec.tail, spec.port_at_head, spec.port_at_tail)
        } else {
            (spec.tail, spec.head, spec.port_at_tail, spec.port_at_head)
        };
        edges[ne] = Some(EdgeSpec {
            tail: VertexId(vperm[t.0]),
            head: VertexId(vperm[h.0]),
            port_at_tail: pt,
            port_at_head: ph,
            length: spec.length.clone(),
        });
        let fwd = DartId::forward_of(ne);
        let (a, b) = if flips[e] { (fwd.reverse(), fwd) } else { (fwd, fwd.reverse()) };
        dart_map[2 * e] = a;
        dart_map[2 * e + 1] = b;
    }
    let graph = PortedGraph::new(names, edges.into_iter().map(Option::unwrap).collect()).unwrap();
    let forward = GraphMap {
        vertex_map: vperm.iter().map(|&v| VertexId(v)).collect(),
        dart_map,
    };
    let mut inverse = GraphMap {
        vertex_map: vec![VertexId(0); g.vertex_count()],
        dart_map: vec![DartId(0); g.dart_count()],
    };
    for (i, v) in forward.vertex_map.iter().enumerate() {
        inverse.vertex_map[v.0] = VertexId(i);
    }
    for (i, d) in forward.dart_map.iter().enumerate() {
        inverse.dart_map[d.0] = DartId(i);
    }
    let sensor = pullback_sensor(&inverse, &graph, g, env.sensor());
    let copy = Environment::new(
        graph,
        forward.vertex(env.initial()),
        sensor,
        env.alphabet_width(),
    )
    .unwrap();
    (copy, forward)
}

/// Every discrete signal with exactly `len` unit pieces, in alphabet order.
pub fn discrete_words(width: usize, len: usize) -> Vec<Vec<Symbol>> {
    let alphabet = Symbol::alphabet(width);
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    words
}

/// Unit-length environments with at most six darts, alphabet width 3 and
/// label sensors. Later members are often covers or relabeled copies of
/// earlier ones so that equivalent pairs are common.
pub fn bisim_pool(seed: u64, size: usize) -> Vec<Env> {
    let mut r = rng(seed);
    let mut pool: Vec<Env> = Vec::new();
    while pool.len() < size {
        let pick = (!pool.is_empty()).then(|| r.gen_range(0..pool.len()));
        let next = match (r.gen_range(0..4), pick) {
            (1, Some(i)) => random_cover(&mut r, &pool[i])
                .map(|(c, _)| c)
                .filter(|c| c.graph().dart_count() <= 6),
            (2, Some(i)) => Some(relabel(&mut r, &pool[i]).0),
            _ => {
                let g = random_graph(&mut r, 3, 3, true);
                let sensor = random_label_sensor(&mut r, &g);
                let start = VertexId(r.gen_range(0..g.vertex_count()));
                Some(Environment::new(g, start, sensor, 3).unwrap())
            }
        };
        pool.extend(next);
    }
    pool
}


/// Brute-force reference: the shortest discrete signal of at most
/// `horizon` unit pieces whose traces differ, found by breadth-first search
/// over product states. Every signal reaching a new product state is
/// replayed in full; signals reaching an already seen state have the same
/// future, so they add nothing.
pub fn oracle_witness(e1: &Env, e2: &Env, horizon: usize) -> Option<Signal> {
    use std::collections::BTreeSet;
    let mut seen = BTreeSet::new();
    let mut frontier = vec![(Vec::<Symbol>::new(), e1.initial_state(), e2.initial_state())];
    seen.insert((e1.initial_state(), e2.initial_state()));
    if e1.trace_of(&Signal::empty()) != e2.trace_of(&Signal::empty()) {
        return Some(Signal::empty());
    }
    for _ in 0..horizon {
        let mut next = Vec::new();
        for (word, x, y) in &frontier {
            for a in e1.alphabet() {
                let step = Signal::constant(a, rational(1, 1));
                let (x2, y2) = (e1.apply(&step, x).unwrap(), e2.apply(&step, y).unwrap());
                let mut w = word.clone();
                w.push(a);
                let u = Signal::discrete(&w);
                if e1.trace_of(&u) != e2.trace_of(&u) {
                    return Some(u);
                }
                if seen.insert((x2.clone(), y2.clone())) {
                    next.push((w, x2, y2));
                }
            }
        }
        frontier = next;
    }
    None
}
