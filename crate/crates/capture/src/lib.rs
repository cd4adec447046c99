//! HTTP service and command-line front end for `capture-core`.

pub mod service;

pub use service::{menus_path, router, AppState, SharedState};
