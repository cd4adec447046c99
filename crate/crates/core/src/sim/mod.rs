//! Deterministic replay of record entry under the six assistive conditions.
//!
//! A simulated user enters each field top to bottom. Handwritten words pass
//! through a [`RecognitionModel`]; every user action is counted and priced by
//! a [`CostModel`], so a run's duration is the dot product of its
//! [`ActionCounts`] with the model.

mod calibrate;
mod condition;
mod cost;
mod recognition;
mod simulate;

pub use calibrate::{calibrate, Calibration, CalibrationTargets};
pub use condition::{condition_presets, parse_conditions, Condition};
pub use cost::{Action, ActionCounts, CostModel};
pub use recognition::{RecognitionMode, RecognitionModel, Stage, StageRates};
pub use simulate::{
    run_experiment, simulate_entry, Case, ExperimentSetup, MenuInit, RunResult, SheetRow, SimState, WordEntry,
};
