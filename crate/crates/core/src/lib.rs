//! Indistinguishable robot environments on ported metric graphs.
//!
//! The crate models a robot that drives along the edges of a metric graph
//! under piecewise-constant control signals and reads a sensor as it goes.
//! It provides the signal algebra and metric, the path action and its
//! trajectories and sensor traces, covering maps with their lifts, and
//! decision procedures for whether two environments can be told apart.
//!
//! Everything is generic over a [`Scalar`]; the aliases below fix the exact
//! [`Rational`] instantiation used by the file formats and the CLI.

pub mod covering;
pub mod env;
pub mod equivalence;
pub mod error;
pub mod gallery;
pub mod graph;
pub mod io;
pub mod scalar;
pub mod sensor;
pub mod signal;
pub mod trace;

pub use covering::{
    cyclic_cover, degree_refinement, edge_voltages, lift_sensor, lift_state_path, pullback_sensor,
    universal_cover_truncation, verify_covering, verify_covering_except, CoveringCertificate,
    DegreeRefinement, GraphMap, RefinementTable, TruncatedCover, Violation,
};
pub use env::{trajectory_distance, Environment, Motion, Trajectory};
pub use equivalence::{
    check_equiv_sampled, check_interfaces, compute_bisimulation, homomorphism_search, random_signal,
    traces_equal, verify_bisimulation, BisimulationResult, BisimulationStats, DiscreteStateSpace,
    HomomorphismSearch, RelationDefect, SampledVerdict, SamplingParams, TraceComparison,
};
pub use error::{Error, Result};
pub use graph::{DartId, EdgeSpec, GraphState, PathMetric, PortedGraph, VertexId};
pub use scalar::{format_rational, parse_rational, rational, Rational, Scalar};
pub use sensor::{BeamMark, EdgeProfile, Observation, SensorFamily, SensorSpec};
pub use signal::{ControlSignal, Piece, Symbol};
pub use trace::{HistoryState, SensorTrace, TraceEvent, TraceSegment};

pub type Signal = ControlSignal<Rational>;
pub type Graph = PortedGraph<Rational>;
pub type Env = Environment<Rational>;
pub type State = GraphState<Rational>;
pub type Trace = SensorTrace<Rational>;
pub type Path = Trajectory<Rational>;
pub type Sensor = SensorSpec<Rational>;
