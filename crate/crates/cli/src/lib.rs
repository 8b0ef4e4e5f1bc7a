//! Command-line front end: file formats, CSV ingestion, report rendering,
//! SVG charts, and the `patmark` binary's command dispatch.

pub mod app;
pub mod error;
pub mod formats;
pub mod ingest;
pub mod reports;
pub mod svg;

pub use error::CliError;
pub use formats::{
    parse_pattern, parse_strategy, serialize_pattern, serialize_strategy, FormatError,
    ParsedPattern,
};
