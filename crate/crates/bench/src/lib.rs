//! Experiment harness for the `edgecount` estimators: graph families,
//! seeded trial runs with ground truth, hard-pair divergence experiments and
//! CSV output.

pub mod config;
pub mod divergence;
pub mod error;
pub mod experiment;
pub mod families;

pub use config::{ExperimentConfig, Profile};
pub use error::{BenchError, BenchResult};
pub use experiment::{run_experiment, Experiment, Summary, TrialRecord};
pub use families::{brute_count, gen_family, Family};
