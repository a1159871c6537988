//! Finite 2-dimensional simplicial complexes: validation, the link
//! condition for piecewise-Euclidean metrics, integral homology,
//! fundamental-group presentations, induced-map injectivity, collapses and
//! an exhaustive scan for pairs of subcomplexes whose intersection is not
//! pi_1-injective.

pub mod algebra;
pub mod collapse;
pub mod complex;
pub mod harness;
pub mod io;
pub mod metric;

pub use algebra::chain::{complex_homology, homology, HomologyResult};
pub use algebra::group::{fundamental_group, tietze_simplify, GroupPresentation, Pi1Model, Word};
pub use algebra::injectivity::{induced_map_injectivity, is_trivial_group, InjectivityCertificate};
pub use algebra::snf::{smith_normal_form, IntMatrix, SmithForm};
pub use algebra::verdict::{Budget, BudgetSpent, TriVerdict, Verdict};
pub use collapse::{is_collapsible, verify_certificate, CollapseCertificate, Move};
pub use complex::{Complex2, ComplexError, Edge, RawComplex, Simplex, Subcomplex, Triangle, ValidationError, VertexId};
pub use harness::enumerate::{enumerate_subcomplexes, SubcomplexFilter};
pub use harness::generators::{generate, Generator};
pub use harness::scan::{strong_injectivity_scan, ScanConfig, ScanReport, ScanVerdict};
pub use metric::{check_link_condition, is_cat0, Cat0Options, CurvatureReport, LinkVerdict, MetricAssignment};
