//! Adaptive form capture: most-recently-used split menus, case-based
//! predictive fillin, corpus analysis for configuring both, and a
//! cost-model simulator of record entry.
//!
//! ```
//! use capture_core::{default_rules, default_schema, fields, CaptureEngine, CommitSource, RecordStore};
//!
//! let mut engine = CaptureEngine::new(RecordStore::new(default_schema()), default_rules()).unwrap();
//! let first = engine.create_draft();
//! engine.commit_field(&first, fields::COMPANY, "Acme", CommitSource::Written).unwrap();
//! engine.commit_field(&first, fields::CITY, "Pullman", CommitSource::Written).unwrap();
//! engine.finalize(&first).unwrap();
//!
//! let second = engine.create_draft();
//! let out = engine.commit_field(&second, fields::COMPANY, "Acme", CommitSource::Menu).unwrap();
//! assert_eq!(out.fillin_events[0].value, "Pullman");
//! ```

pub mod analyze;
pub mod config;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod fillin;
pub mod menus;
pub mod record;
pub mod report;
pub mod sim;
pub mod store;

pub use analyze::{
    coverage_curve, dependency_stats, mine, recommend_menu_size, Attribute, Component, CoverageCurve,
    DependencyStats, Histogram, MiningReport, Thresholds,
};
pub use engine::{CaptureEngine, CommitOutcome, CommitSource};
pub use error::{Error, Result};
pub use fillin::{apply_on_commit, default_rules, FillinEvent, FillinRule, RuleSet, Transform};
pub use menus::{MenuState, MruQueue, SplitMenu, MENU_LIMIT};
pub use record::{
    default_schema, fields, split_email, split_phone, tokenize, EntryMethod, FieldId, FieldKind, FieldSpec,
    FieldValue, Provenance, Record, Schema,
};
pub use report::{method_breakdown, speedup_vs_null, throughput_metrics, MedianTable, RunSummary};
pub use sim::{condition_presets, run_experiment, simulate_entry, Condition, CostModel, ExperimentSetup, RunResult};
pub use store::{CorpusFormat, Dictionary, MatchMode, RecordStore};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/records.md")]
    mod records {}
    #[doc = include_str!("../../../book/src/menus.md")]
    mod menus {}
    #[doc = include_str!("../../../book/src/fillin.md")]
    mod fillin {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
    #[doc = include_str!("../../../book/src/service.md")]
    mod service {}
}
