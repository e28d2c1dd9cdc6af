//! Library surface of the command-line front end, split out so integration
//! tests can exercise ingestion and rendering directly.

pub mod commands;
pub mod ingest;
pub mod output;
