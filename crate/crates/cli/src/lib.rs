//! Model ingestion, query execution and reporting for potentials and
//! Markov trees over families of compatible frames.
//!
//! The binary loads a JSON model (`--model`) and runs one query verb per
//! invocation; [`run_query`] is the same entry point for in-process use.
//! Exit codes: 0 on success, 2 on contradictions, 1 on any other error.

pub mod error;
pub mod fmt;
pub mod model;
pub mod query;

pub use error::CliError;
pub use model::{load_model, parse_model, serialize_model, Model};
pub use query::{run_query, QueryCmd};
