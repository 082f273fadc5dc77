//! File formats, CSV output, the thread-parallel study runner and the
//! `qbaf` command line, on top of `qbaf-core`.

pub mod cli;
pub mod document;
pub mod study;
