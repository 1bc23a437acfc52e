//! Finite universes, behavior generators and the measurements taken on them.
//!
//! A [`Universe`] is a deterministic labeled transition system with state
//! classes and an energy budget. An [`AgentArchitecture`] chooses one act per
//! step, either blindly (random or positional generators) or from a
//! representation of the current state (sensitive architectures). The
//! [`metrics`] module scores goal-directed prediction tables, [`harness`]
//! runs trajectories and batch experiments, and [`dsl`] reads and writes the
//! `.exo` text format.

pub mod architectures;
pub mod dsl;
pub mod harness;
pub mod logic;
pub mod metrics;
pub mod representation;
pub mod scalar;
pub mod stats;
pub mod universe;

pub use architectures::{AgentArchitecture, ArchitectureError, ArchitectureKind, Fasa};
pub use dsl::{check, parse, serialize, ParseDiagnostic, SpecDocument};
pub use harness::{run_experiment, run_trajectory, ExperimentConfig, ExperimentResult, HarnessError};
pub use metrics::{stability_report, ObjectiveSets, StabilityReport};
pub use representation::{ActRepresentation, Formula, RepresentationMap};
pub use scalar::Scalar;
pub use universe::{ActId, EnergyRules, StateClass, StateId, TerminalReason, Trajectory, Universe};

/// Exact rational used wherever metric values must compare exactly.
pub type Exact = num_rational::Ratio<i64>;

pub type ExactStabilityReport = StabilityReport<Exact>;
pub type FloatStabilityReport = StabilityReport<f64>;
