//! File formats, reports and the `qpair` command line.

pub mod cli;
pub mod json;
pub mod report;
pub mod statefile;

pub use cli::{run, Outcome};
pub use statefile::{parse_state, serialize_state, ParseError, Payload, StateFile, FORMAT_TAG};
