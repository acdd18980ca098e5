//! Temporal-driven semi-supervised clustering for entity observation
//! series: segments each entity's trajectory into evolution phases while
//! simultaneously inferring a weighted phase-transition graph, and ships
//! the evaluation measures and an evolutionary multi-objective
//! hyperparameter tuner that go with it.

pub mod baselines;
pub mod data;
pub mod error;
pub mod graph;
pub mod measures;
pub mod metric;
pub mod objective;
pub mod solver;
pub mod synth;
pub mod tuner;

#[doc(hidden)]
pub mod test_util;

pub use data::{AdjacencyMatrix, Assignment, ClusPathModel, Dataset, HyperParams, Observation, Prototype};
pub use error::{Error, Result};
pub use measures::MeasureVector;
pub use solver::SolverConfig;
