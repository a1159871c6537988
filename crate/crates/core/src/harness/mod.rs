//! Builtin complexes, subcomplex enumeration and the pair scanner.

pub mod enumerate;
pub mod generators;
pub mod scan;
