//! Experiment orchestration: JSON configs, parallel disorder sweeps with
//! deterministic seeding, CSV output and figure tables.

pub mod config;
pub mod figures;
pub mod run;
pub mod validate;

pub use config::{Experiment, ExperimentConfig, ScheduleConfig};
pub use figures::{emit_figure_data, figures_for, FIGURES};
pub use run::{run_experiment, AggregateResult, GridPoint, PointResult, RunOptions, THREADS_ENV};
