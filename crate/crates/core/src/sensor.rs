//! Sensor mappings on ported graphs.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DartId, GraphState, PortedGraph};
use crate::scalar::Scalar;

/// One sensor reading.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observation {
    Value(i64),
    Label(String),
    /// Reading of the degree sensor anywhere strictly inside an edge.
    Edge,
    /// Reading of the beam sensor away from every beam.
    Blank,
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Value(v) => write!(f, "{v}"),
            Observation::Label(l) => write!(f, "{l:?}"),
            Observation::Edge => f.write_str("EDGE"),
            Observation::Blank => f.write_str("BLANK"),
        }
    }
}

/// A beam crossing edge `edge` at `offset` from the edge's tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeamMark<S> {
    pub edge: usize,
    pub offset: S,
    pub label: Observation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SensorSpec<S> {
    /// Vertex degree at vertices, `EDGE` inside edges.
    Degree,
    /// Fixed labels per vertex and per edge interior.
    Label {
        vertex_labels: Vec<Observation>,
        edge_labels: Vec<Observation>,
    },
    /// `BLANK` everywhere except on beam marks.
    Beam { marks: Vec<BeamMark<S>> },
    /// `base` followed by a relabeling of its outputs; unmapped outputs
    /// pass through unchanged.
    Filtered {
        base: Box<SensorSpec<S>>,
        relabel: BTreeMap<Observation, Observation>,
    },
}

/// The broad output domain of a sensor; environments are only comparable
/// when their sensors share one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SensorFamily {
    Degree,
    Label,
    Beam,
}

/// What a sensor reports along the inside of a dart: a generic value plus
/// isolated marks, sorted by offset from the dart's tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeProfile<S> {
    pub value: Observation,
    pub marks: Vec<(S, Observation)>,
}

impl<S: Scalar> SensorSpec<S> {
    pub fn family(&self) -> SensorFamily {
        match self {
            SensorSpec::Degree => SensorFamily::Degree,
            SensorSpec::Label { .. } => SensorFamily::Label,
            SensorSpec::Beam { .. } => SensorFamily::Beam,
            SensorSpec::Filtered { base, .. } => base.family(),
        }
    }

    pub fn validate(&self, graph: &PortedGraph<S>) -> Result<()> {
        match self {
            SensorSpec::Degree => Ok(()),
            SensorSpec::Label {
                vertex_labels,
                edge_labels,
            } => {
                if vertex_labels.len() != graph.vertex_count() {
                    return Err(Error::validation("label sensor must label every vertex"));
                }
                if edge_labels.len() != graph.edge_count() {
                    return Err(Error::validation("label sensor must label every edge"));
                }
                Ok(())
            }
            SensorSpec::Beam { marks } => {
                let mut seen = std::collections::BTreeSet::new();
                for mark in marks {
                    let Some(edge) = graph.edges().get(mark.edge) else {
                        return Err(Error::validation(format!("beam on missing edge {}", mark.edge)));
                    };
                    if !mark.offset.is_positive() || mark.offset >= edge.length {
                        return Err(Error::validation(format!(
                            "beam on edge {} must sit strictly inside it",
                            mark.edge
                        )));
                    }
                    if !seen.insert((mark.edge, format!("{:?}", mark.offset))) {
                        return Err(Error::validation(format!(
                            "two beams at the same point of edge {}",
                            mark.edge
                        )));
                    }
                }
                Ok(())
            }
            SensorSpec::Filtered { base, .. } => base.validate(graph),
        }
    }

    /// The reading at a point.
    pub fn observe(&self, graph: &PortedGraph<S>, state: &GraphState<S>) -> Observation {
        match self {
            SensorSpec::Degree => match state {
                GraphState::Vertex(v) => Observation::Value(graph.degree(*v) as i64),
                GraphState::Edge { .. } => Observation::Edge,
            },
            SensorSpec::Label {
                vertex_labels,
                edge_labels,
            } => match state {
                GraphState::Vertex(v) => vertex_labels[v.0].clone(),
                GraphState::Edge { dart, .. } => edge_labels[dart.edge()].clone(),
            },
            SensorSpec::Beam { marks } => match state {
                GraphState::Vertex(_) => Observation::Blank,
                GraphState::Edge { dart, offset } => {
                    let from_tail = if dart.is_forward() {
                        offset.clone()
                    } else {
                        graph.length(*dart).clone() - offset.clone()
                    };
                    marks
                        .iter()
                        .find(|m| m.edge == dart.edge() && m.offset == from_tail)
                        .map(|m| m.label.clone())
                        .unwrap_or(Observation::Blank)
                }
            },
            SensorSpec::Filtered { base, relabel } => {
                let raw = base.observe(graph, state);
                relabel.get(&raw).cloned().unwrap_or(raw)
            }
        }
    }

    /// Readings strictly inside `dart`'s edge, oriented along `dart`.
    pub fn interior(&self, graph: &PortedGraph<S>, dart: DartId) -> EdgeProfile<S> {
        match self {
            SensorSpec::Degree => EdgeProfile {
                value: Observation::Edge,
                marks: Vec::new(),
            },
            SensorSpec::Label { edge_labels, .. } => EdgeProfile {
                value: edge_labels[dart.edge()].clone(),
                marks: Vec::new(),
            },
            SensorSpec::Beam { marks } => {
                let len = graph.length(dart);
                let mut along: Vec<(S, Observation)> = marks
                    .iter()
                    .filter(|m| m.edge == dart.edge())
                    .map(|m| {
                        let offset = if dart.is_forward() {
                            m.offset.clone()
                        } else {
                            len.clone() - m.offset.clone()
                        };
                        (offset, m.label.clone())
                    })
                    .collect();
                along.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("offsets are comparable"));
                EdgeProfile {
                    value: Observation::Blank,
                    marks: along,
                }
            }
            SensorSpec::Filtered { base, relabel } => {
                let map = |o: Observation| relabel.get(&o).cloned().unwrap_or(o);
                let raw = base.interior(graph, dart);
                EdgeProfile {
                    value: map(raw.value),
                    marks: raw.marks.into_iter().map(|(t, o)| (t, map(o))).collect(),
                }
            }
        }
    }
}
