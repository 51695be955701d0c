//! Sensor traces: the readings a robot collects along a trajectory.
//!
//! A trace is a function on `[0, T]`. It is stored canonically as maximal
//! half-open segments carrying the value right after each instant, plus
//! events for the isolated instants whose reading differs from that value
//! (vertex passes, beam crossings, and the final reading when it differs
//! from the last segment). Two traces are equal as functions iff they are
//! equal as values of this type.

use crate::env::{sort_dedup, Environment, Motion, Trajectory};
use crate::error::Result;
use crate::graph::GraphState;
use crate::scalar::Scalar;
use crate::sensor::Observation;
use crate::signal::ControlSignal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSegment<S> {
    pub start: S,
    pub end: S,
    pub value: Observation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent<S> {
    pub time: S,
    pub value: Observation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensorTrace<S> {
    duration: S,
    segments: Vec<TraceSegment<S>>,
    events: Vec<TraceEvent<S>>,
}

impl<S: Scalar> SensorTrace<S> {
    /// Canonicalizes a raw description: readings at `instants` (strictly
    /// increasing times) and one reading per open gap between them.
    fn from_raw(instants: Vec<(S, Observation)>, gaps: Vec<Observation>) -> Self {
        debug_assert_eq!(gaps.len() + 1, instants.len());
        let mut segments: Vec<TraceSegment<S>> = Vec::new();
        let mut events = Vec::new();
        for (i, gap) in gaps.iter().enumerate() {
            let (start, at_start) = &instants[i];
            let end = instants[i + 1].0.clone();
            match segments.last_mut() {
                Some(last) if last.value == *gap => last.end = end,
                _ => segments.push(TraceSegment {
                    start: start.clone(),
                    end,
                    value: gap.clone(),
                }),
            }
            if at_start != gap {
                events.push(TraceEvent {
                    time: start.clone(),
                    value: at_start.clone(),
                });
            }
        }
        let (duration, last) = instants.last().cloned().expect("at least one instant");
        if gaps.last() != Some(&last) {
            events.push(TraceEvent {
                time: duration.clone(),
                value: last,
            });
        }
        SensorTrace {
            duration,
            segments,
            events,
        }
    }

    pub fn duration(&self) -> &S {
        &self.duration
    }

    pub fn segments(&self) -> &[TraceSegment<S>] {
        &self.segments
    }

    pub fn events(&self) -> &[TraceEvent<S>] {
        &self.events
    }

    /// The reading at instant `t`, or `None` outside `[0, T]`.
    pub fn value_at(&self, t: &S) -> Option<Observation> {
        if t.is_negative() || *t > self.duration {
            return None;
        }
        if let Some(e) = self.events.iter().find(|e| e.time == *t) {
            return Some(e.value.clone());
        }
        if let Some(s) = self.segments.iter().find(|s| s.start <= *t && *t < s.end) {
            return Some(s.value.clone());
        }
        self.segments.last().map(|s| s.value.clone())
    }

    /// The trace of the first `t` time units, final reading included.
    pub fn truncate(&self, t: &S) -> SensorTrace<S> {
        let t = S::min_of(S::max_of(t.clone(), S::zero()), self.duration.clone());
        let at_end = self.value_at(&t).expect("inside trace");
        let segments: Vec<TraceSegment<S>> = self
            .segments
            .iter()
            .filter(|s| s.start < t)
            .map(|s| TraceSegment {
                start: s.start.clone(),
                end: S::min_of(s.end.clone(), t.clone()),
                value: s.value.clone(),
            })
            .collect();
        let mut events: Vec<TraceEvent<S>> =
            self.events.iter().filter(|e| e.time < t).cloned().collect();
        if segments.last().map(|s| &s.value) != Some(&at_end) {
            events.push(TraceEvent {
                time: t.clone(),
                value: at_end,
            });
        }
        SensorTrace {
            duration: t,
            segments,
            events,
        }
    }

    /// The earliest time at which the two traces read differently; when
    /// one is a prefix of the other, the shorter duration.
    pub fn first_divergence(&self, other: &Self) -> Option<S> {
        let horizon = S::min_of(self.duration.clone(), other.duration.clone());
        let mut grid: Vec<S> = vec![S::zero(), horizon.clone()];
        for trace in [self, other] {
            for s in &trace.segments {
                grid.push(s.start.clone());
                grid.push(s.end.clone());
            }
            grid.extend(trace.events.iter().map(|e| e.time.clone()));
        }
        grid.retain(|t| *t <= horizon);
        sort_dedup(&mut grid);
        for (i, t) in grid.iter().enumerate() {
            if self.value_at(t) != other.value_at(t) {
                return Some(t.clone());
            }
            if let Some(next) = grid.get(i + 1) {
                let mid = (t.clone() + next.clone()) / S::from_int(2);
                if self.value_at(&mid) != other.value_at(&mid) {
                    return Some(t.clone());
                }
            }
        }
        (self.duration != other.duration).then_some(horizon)
    }
}

impl<S: Scalar> Environment<S> {
    /// Readings along `trajectory`, which must belong to this environment.
    pub fn trace_along(&self, trajectory: &Trajectory<S>) -> SensorTrace<S> {
        let graph = self.graph();
        let sensor = self.sensor();
        let times = trajectory.times();
        let states = trajectory.states();
        let mut instants = vec![(times[0].clone(), sensor.observe(graph, &states[0]))];
        let mut gaps = Vec::new();
        for (i, motion) in trajectory.motions().iter().enumerate() {
            let (t0, t1) = (&times[i], &times[i + 1]);
            match motion {
                Motion::Stay => gaps.push(sensor.observe(graph, &states[i])),
                Motion::Along(d) => {
                    let profile = sensor.interior(graph, *d);
                    let o0 = states[i].offset_along(graph, *d).expect("starts on dart");
                    let o1 = o0.clone() + (t1.clone() - t0.clone());
                    for (m, label) in profile.marks {
                        if o0 < m && m < o1 {
                            gaps.push(profile.value.clone());
                            instants.push((t0.clone() + (m - o0.clone()), label));
                        }
                    }
                    gaps.push(profile.value);
                }
            }
            instants.push((t1.clone(), sensor.observe(graph, &states[i + 1])));
        }
        SensorTrace::from_raw(instants, gaps)
    }

    /// `ȳ_u`: the trace of `u` from the base vertex.
    pub fn trace_of(&self, u: &ControlSignal<S>) -> SensorTrace<S> {
        self.trace_along(&self.trajectory(u))
    }

    pub fn trace_from(&self, x: &GraphState<S>, u: &ControlSignal<S>) -> Result<SensorTrace<S>> {
        Ok(self.trace_along(&self.trajectory_from(x, u)?))
    }
}

/// Everything the robot has done and sensed: `(u, ȳ_u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryState<S> {
    pub signal: ControlSignal<S>,
    pub trace: SensorTrace<S>,
}

impl<S: Scalar> HistoryState<S> {
    pub fn observe(env: &Environment<S>, signal: ControlSignal<S>) -> Self {
        let trace = env.trace_of(&signal);
        HistoryState { signal, trace }
    }

    /// The history after a further input `more`.
    pub fn extend(&self, env: &Environment<S>, more: &ControlSignal<S>) -> Self {
        Self::observe(env, self.signal.concat(more))
    }
}
