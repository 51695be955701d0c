//! JSON file formats and DOT export.
//!
//! Every number crossing the interface is an exact rational written as an
//! `[numerator, denominator]` pair (a `"n/d"` string is accepted too, and
//! used on output when a value does not fit in 64 bits). Observations are
//! integers, strings, or one of the reserved strings `"#edge"`/`"#blank"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covering::{CoveringCertificate, GraphMap};
use crate::env::Environment;
use crate::equivalence::{BisimulationResult, BisimulationStats, SampledVerdict};
use crate::error::{Error, Result};
use crate::graph::{DartId, EdgeSpec, GraphState, PortedGraph, VertexId};
use crate::scalar::{parse_rational, Rational};
use crate::sensor::{BeamMark, Observation, SensorSpec};
use crate::signal::{ControlSignal, Symbol};
use crate::trace::SensorTrace;

type Env = Environment<Rational>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Pair(i64, i64),
    Text(String),
}

impl RationalJson {
    pub fn from_rational(r: &Rational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => RationalJson::Pair(n, d),
            _ => RationalJson::Text(format!("{}/{}", r.numer(), r.denom())),
        }
    }

    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalJson::Pair(_, 0) => Err(Error::validation("zero denominator")),
            RationalJson::Pair(n, d) => Ok(Rational::new(BigInt::from(*n), BigInt::from(*d))),
            RationalJson::Text(t) => parse_rational(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservationJson {
    Value(i64),
    Text(String),
}

pub fn observation_to_json(o: &Observation) -> Result<ObservationJson> {
    Ok(match o {
        Observation::Value(v) => ObservationJson::Value(*v),
        Observation::Label(l) if l.starts_with('#') => {
            return Err(Error::validation(format!("label {l:?} collides with reserved names")))
        }
        Observation::Label(l) => ObservationJson::Text(l.clone()),
        Observation::Edge => ObservationJson::Text("#edge".into()),
        Observation::Blank => ObservationJson::Text("#blank".into()),
    })
}

pub fn observation_from_json(o: &ObservationJson) -> Result<Observation> {
    Ok(match o {
        ObservationJson::Value(v) => Observation::Value(*v),
        ObservationJson::Text(t) if t == "#edge" => Observation::Edge,
        ObservationJson::Text(t) if t == "#blank" => Observation::Blank,
        ObservationJson::Text(t) if t.starts_with('#') => {
            return Err(Error::validation(format!("unknown reserved observation {t:?}")))
        }
        ObservationJson::Text(t) => Observation::Label(t.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamJson {
    pub edge: usize,
    pub offset: RationalJson,
    pub label: ObservationJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SensorJson {
    Degree,
    Label {
        vertex_labels: Vec<ObservationJson>,
        edge_labels: Vec<ObservationJson>,
    },
    Beam {
        marks: Vec<BeamJson>,
    },
    Filtered {
        base: Box<SensorJson>,
        relabel: Vec<(ObservationJson, ObservationJson)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub tail: String,
    pub head: String,
    pub port_at_tail: usize,
    pub port_at_head: usize,
    pub length: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub initial: String,
    pub sensor: SensorJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet_width: Option<usize>,
}

fn sensor_to_json(s: &SensorSpec<Rational>) -> Result<SensorJson> {
    let obs = |list: &[Observation]| list.iter().map(observation_to_json).collect::<Result<Vec<_>>>();
    Ok(match s {
        SensorSpec::Degree => SensorJson::Degree,
        SensorSpec::Label {
            vertex_labels,
            edge_labels,
        } => SensorJson::Label {
            vertex_labels: obs(vertex_labels)?,
            edge_labels: obs(edge_labels)?,
        },
        SensorSpec::Beam { marks } => SensorJson::Beam {
            marks: marks
                .iter()
                .map(|m| {
                    Ok(BeamJson {
                        edge: m.edge,
                        offset: RationalJson::from_rational(&m.offset),
                        label: observation_to_json(&m.label)?,
                    })
                })
                .collect::<Result<_>>()?,
        },
        SensorSpec::Filtered { base, relabel } => SensorJson::Filtered {
            base: Box::new(sensor_to_json(base)?),
            relabel: relabel
                .iter()
                .map(|(a, b)| Ok((observation_to_json(a)?, observation_to_json(b)?)))
                .collect::<Result<_>>()?,
        },
    })
}

fn sensor_from_json(s: &SensorJson) -> Result<SensorSpec<Rational>> {
    let obs = |list: &[ObservationJson]| list.iter().map(observation_from_json).collect::<Result<Vec<_>>>();
    Ok(match s {
        SensorJson::Degree => SensorSpec::Degree,
        SensorJson::Label {
            vertex_labels,
            edge_labels,
        } => SensorSpec::Label {
            vertex_labels: obs(vertex_labels)?,
            edge_labels: obs(edge_labels)?,
        },
        SensorJson::Beam { marks } => SensorSpec::Beam {
            marks: marks
                .iter()
                .map(|m| {
                    Ok(BeamMark {
                        edge: m.edge,
                        offset: m.offset.to_rational()?,
                        label: observation_from_json(&m.label)?,
                    })
                })
                .collect::<Result<_>>()?,
        },
        SensorJson::Filtered { base, relabel } => {
            let mut map = BTreeMap::new();
            for (a, b) in relabel {
                if map.insert(observation_from_json(a)?, observation_from_json(b)?).is_some() {
                    return Err(Error::validation("relabeling maps one output twice"));
                }
            }
            SensorSpec::Filtered {
                base: Box::new(sensor_from_json(base)?),
                relabel: map,
            }
        }
    })
}

pub fn environment_to_json(env: &Env) -> Result<EnvironmentJson> {
    let g = env.graph();
    Ok(EnvironmentJson {
        vertices: g.names().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                tail: g.name(e.tail).to_string(),
                head: g.name(e.head).to_string(),
                port_at_tail: e.port_at_tail,
                port_at_head: e.port_at_head,
                length: RationalJson::from_rational(&e.length),
            })
            .collect(),
        initial: g.name(env.initial()).to_string(),
        sensor: sensor_to_json(env.sensor())?,
        alphabet_width: Some(env.alphabet_width()),
    })
}

pub fn environment_from_json(doc: &EnvironmentJson) -> Result<Env> {
    let lookup: BTreeMap<&str, usize> = doc
        .vertices
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let vertex = |name: &str| {
        lookup
            .get(name)
            .map(|&i| VertexId(i))
            .ok_or_else(|| Error::validation(format!("unknown vertex {name:?}")))
    };
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            Ok(EdgeSpec {
                tail: vertex(&e.tail)?,
                head: vertex(&e.head)?,
                port_at_tail: e.port_at_tail,
                port_at_head: e.port_at_head,
                length: e.length.to_rational()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let graph = PortedGraph::new(doc.vertices.clone(), edges)?;
    let initial = vertex(&doc.initial)?;
    let sensor = sensor_from_json(&doc.sensor)?;
    match doc.alphabet_width {
        Some(w) => Environment::new(graph, initial, sensor, w),
        None => Environment::with_default_width(graph, initial, sensor),
    }
}

pub fn parse_environment(text: &str) -> Result<Env> {
    environment_from_json(&serde_json::from_str(text)?)
}

pub fn environment_to_string(env: &Env) -> Result<String> {
    Ok(serde_json::to_string_pretty(&environment_to_json(env)?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolJson {
    Port(usize),
    Named(String),
}

pub type PieceJson = (SymbolJson, i64, i64);

pub fn signal_to_json(u: &ControlSignal<Rational>) -> Value {
    Value::Array(
        u.pieces()
            .iter()
            .map(|p| {
                let sym = match p.symbol {
                    Symbol::Port(k) => json!(k),
                    Symbol::Halt => json!("halt"),
                };
                match RationalJson::from_rational(&p.duration) {
                    RationalJson::Pair(n, d) => json!([sym, n, d]),
                    RationalJson::Text(t) => json!([sym, t]),
                }
            })
            .collect(),
    )
}

pub fn signal_from_json(doc: &[PieceJson]) -> Result<ControlSignal<Rational>> {
    let pieces = doc
        .iter()
        .map(|(sym, n, d)| {
            let symbol = match sym {
                SymbolJson::Port(k) => Symbol::Port(*k),
                SymbolJson::Named(s) if s == "halt" => Symbol::Halt,
                SymbolJson::Named(s) => {
                    return Err(Error::validation(format!("unknown symbol {s:?}")))
                }
            };
            if *n <= 0 || *d <= 0 {
                return Err(Error::validation("piece durations must be positive n/d pairs"));
            }
            Ok((symbol, RationalJson::Pair(*n, *d).to_rational()?))
        })
        .collect::<Result<Vec<_>>>()?;
    ControlSignal::from_pieces(pieces)
}

pub fn parse_signal(text: &str) -> Result<ControlSignal<Rational>> {
    signal_from_json(&serde_json::from_str::<Vec<PieceJson>>(text)?)
}

/// Signal `u` fits an environment's alphabet.
pub fn check_signal_alphabet(u: &ControlSignal<Rational>, width: usize) -> Result<()> {
    match u.pieces().iter().find(|p| matches!(p.symbol, Symbol::Port(k) if k >= width)) {
        Some(p) => Err(Error::validation(format!(
            "symbol {} outside the alphabet of width {width}",
            p.symbol
        ))),
        None => Ok(()),
    }
}

fn rat(r: &Rational) -> Value {
    serde_json::to_value(RationalJson::from_rational(r)).expect("plain data")
}

fn obs(o: &Observation) -> Value {
    // only '#'-prefixed labels built in code can fail here
    match observation_to_json(o) {
        Ok(j) => serde_json::to_value(j).expect("plain data"),
        Err(_) => json!(o.to_string()),
    }
}

pub fn trace_to_json(trace: &SensorTrace<Rational>) -> Value {
    json!({
        "duration": rat(trace.duration()),
        "segments": trace.segments().iter().map(|s| json!({
            "start": rat(&s.start),
            "end": rat(&s.end),
            "value": obs(&s.value),
        })).collect::<Vec<_>>(),
        "events": trace.events().iter().map(|e| json!({
            "time": rat(&e.time),
            "value": obs(&e.value),
        })).collect::<Vec<_>>(),
    })
}

pub fn state_to_json(graph: &PortedGraph<Rational>, state: &GraphState<Rational>) -> Value {
    match state {
        GraphState::Vertex(v) => json!({ "vertex": graph.name(*v) }),
        GraphState::Edge { dart, offset } => json!({ "dart": dart.0, "offset": rat(offset) }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub vertex_map: Vec<usize>,
    pub dart_map: Vec<usize>,
}

pub fn map_to_json(map: &GraphMap) -> MapJson {
    MapJson {
        vertex_map: map.vertex_map.iter().map(|v| v.0).collect(),
        dart_map: map.dart_map.iter().map(|d| d.0).collect(),
    }
}

pub fn map_from_json(doc: &MapJson) -> GraphMap {
    GraphMap {
        vertex_map: doc.vertex_map.iter().copied().map(VertexId).collect(),
        dart_map: doc.dart_map.iter().copied().map(DartId).collect(),
    }
}

pub fn certificate_to_json(cert: &CoveringCertificate) -> Value {
    json!({
        "positive": cert.is_positive(),
        "surjective": cert.surjective,
        "star_bijective": cert.star_bijective,
        "ports_preserved": cert.ports_preserved,
        "lengths_preserved": cert.lengths_preserved,
        "base_point": cert.base_point,
        "violations": cert.violations,
        "map": map_to_json(&cert.map),
    })
}

fn stats_to_json(stats: &BisimulationStats) -> Value {
    json!({
        "states": stats.states,
        "rounds": stats.rounds,
        "signals_checked": stats.signals_checked,
    })
}

pub fn bisimulation_to_json(e1: &Env, e2: &Env, result: &BisimulationResult<Rational>) -> Value {
    match result {
        BisimulationResult::Related { relation, stats } => json!({
            "verdict": "related",
            "relation": relation
                .iter()
                .map(|(a, b)| json!([e1.graph().name(*a), e2.graph().name(*b)]))
                .collect::<Vec<_>>(),
            "stats": stats_to_json(stats),
        }),
        BisimulationResult::Distinguished {
            witness,
            divergence,
            stats,
        } => json!({
            "verdict": "distinguished",
            "witness": signal_to_json(witness),
            "divergence": rat(divergence),
            "stats": stats_to_json(stats),
        }),
    }
}

pub fn sampled_to_json(verdict: &SampledVerdict<Rational>) -> Value {
    match verdict {
        SampledVerdict::NoDivergence {
            horizon,
            signals_checked,
        } => json!({
            "verdict": "no_divergence",
            "horizon": horizon,
            "stats": { "signals_checked": signals_checked },
        }),
        SampledVerdict::Distinguished {
            witness,
            divergence,
            signals_checked,
        } => json!({
            "verdict": "distinguished",
            "witness": signal_to_json(witness),
            "divergence": rat(divergence),
            "stats": { "signals_checked": signals_checked },
        }),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: vertices show their reading, edges show ports
/// (`tail:head`), length, interior reading and beam marks.
pub fn to_dot(env: &Env, title: &str) -> String {
    let g = env.graph();
    let h = env.sensor();
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", dot_escape(title));
    let _ = writeln!(out, "  node [shape=circle];");
    for v in g.vertices() {
        let reading = h.observe(g, &GraphState::Vertex(v));
        let shape = if v == env.initial() { ", shape=doublecircle" } else { "" };
        let _ = writeln!(
            out,
            "  v{} [label=\"{}\\n{}\"{shape}];",
            v.0,
            dot_escape(g.name(v)),
            dot_escape(&reading.to_string())
        );
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let profile = h.interior(g, DartId::forward_of(e));
        let mut label = format!("{}:{}", edge.port_at_tail, edge.port_at_head);
        if !edge.length.is_one() {
            let _ = write!(label, " len {}", crate::scalar::format_rational(&edge.length));
        }
        let _ = write!(label, "\\n{}", profile.value);
        for (at, mark) in &profile.marks {
            let _ = write!(label, "\\n{mark}@{}", crate::scalar::format_rational(at));
        }
        let _ = writeln!(
            out,
            "  v{} -- v{} [label=\"{}\"];",
            edge.tail.0,
            edge.head.0,
            dot_escape(&label)
        );
    }
    out.push_str("}\n");
    out
}
