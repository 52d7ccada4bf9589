//! Library surface of the command-line front end: the spec-file format,
//! the class-expression parser and the report renderers. The binary in
//! `main.rs` is a thin wrapper over these.

pub mod expr;
pub mod output;
pub mod specfile;
