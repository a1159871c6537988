//! Complex and subcomplex files, and report rendering.
//!
//! Files are JSON. A complex file lists `vertices`, `triangles`, optional
//! dangling `edges` (edges of triangles are implied) and optional
//! `lengths` keyed `"i-j"`; missing lengths default to 1. A subcomplex file
//! lists every simplex of the mask, faces included.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::algebra::chain::HomologyResult;
use crate::algebra::group::{Abelianization, Pi1Model};
use crate::algebra::injectivity::{is_trivial_group, TrivialityCertificate};
use crate::algebra::verdict::{Budget, TriVerdict};
use crate::collapse::CollapseOutcome;
use crate::complex::{
    Complex2, ComplexError, ComplexIssue, Edge, RawComplex, Simplex, Subcomplex, ValidationError, VertexId,
};
use crate::harness::scan::{ScanReport, SubcomplexDescription};
use crate::metric::{Cat0Certificate, CurvatureReport, MetricAssignment, MetricError};

pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits of every float in machine output.
pub const SIGNIFICANT_DIGITS: usize = 15;

pub fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Infinite values become the string `"infinity"`.
pub fn serialize_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "infinity" } else { "-infinity" })
    } else {
        s.serialize_f64(*x)
    }
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("bad length key {0:?}: expected \"i-j\" with distinct vertex ids")]
    LengthKey(String),
    #[error("subcomplex: {0}")]
    Subcomplex(#[from] ComplexError),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> InputError {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        InputError::Parse { line: e.line(), column: e.column(), message }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub vertices: Vec<u32>,
    #[serde(default)]
    pub triangles: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lengths: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedComplex {
    pub name: Option<String>,
    pub comment: Option<String>,
    pub complex: Complex2,
    pub metric: MetricAssignment,
}

fn parse_edge_key(k: &str) -> Option<Edge> {
    let (a, b) = k.split_once('-')?;
    Edge::new(a.trim().parse().ok()?, b.trim().parse().ok()?)
}

pub fn parse_complex(text: &str) -> Result<ParsedComplex, InputError> {
    let f: ComplexFile = serde_json::from_str(text)?;
    let mut edges = f.edges.clone();
    let listed: BTreeSet<Option<Edge>> = f.edges.iter().map(|&[a, b]| Edge::new(a, b)).collect();
    let mut implied = BTreeSet::new();
    for &[a, b, c] in &f.triangles {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if let Some(e) = Edge::new(x, y) {
                if !listed.contains(&Some(e)) && implied.insert(e) {
                    edges.push(e.vertices());
                }
            }
        }
    }
    let complex = Complex2::validate(&RawComplex { vertices: f.vertices, edges, triangles: f.triangles })?;
    let mut given = BTreeMap::new();
    for (k, &l) in &f.lengths {
        let e = parse_edge_key(k).ok_or_else(|| InputError::LengthKey(k.clone()))?;
        given.insert(e, l);
    }
    let metric = MetricAssignment::with_defaults(&complex, &given)?;
    Ok(ParsedComplex { name: f.name, comment: f.comment, complex, metric })
}

/// Canonical document: sorted simplices, only dangling edges listed, only
/// non-unit lengths listed.
pub fn complex_file(name: Option<&str>, comment: Option<&str>, c: &Complex2, m: &MetricAssignment) -> ComplexFile {
    ComplexFile {
        name: name.map(str::to_string),
        comment: comment.map(str::to_string),
        vertices: c.vertices().iter().copied().collect(),
        triangles: c.triangles().iter().map(|t| t.vertices()).collect(),
        edges: c.edges().iter().filter(|e| c.triangles_on(**e).next().is_none()).map(|e| e.vertices()).collect(),
        lengths: m.lengths().iter().filter(|(_, &l)| l != 1.0).map(|(e, &l)| (e.to_string(), l)).collect(),
    }
}

pub fn emit_complex(name: Option<&str>, comment: Option<&str>, c: &Complex2, m: &MetricAssignment) -> String {
    let mut s = serde_json::to_string_pretty(&complex_file(name, comment, c, m)).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubcomplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default)]
    pub vertices: Vec<u32>,
    #[serde(default)]
    pub edges: Vec<[u32; 2]>,
    #[serde(default)]
    pub triangles: Vec<[u32; 3]>,
}

pub fn parse_subcomplex_file(text: &str) -> Result<SubcomplexFile, InputError> {
    Ok(serde_json::from_str(text)?)
}

/// One subcomplex document, or an array of them.
pub fn parse_subcomplex_files(text: &str) -> Result<Vec<SubcomplexFile>, InputError> {
    if text.trim_start().starts_with('[') {
        Ok(serde_json::from_str(text)?)
    } else {
        Ok(vec![serde_json::from_str(text)?])
    }
}

/// Every face of every listed simplex must itself be listed.
pub fn parse_subcomplex(text: &str, parent: &Arc<Complex2>) -> Result<Subcomplex, InputError> {
    subcomplex_from_file(&parse_subcomplex_file(text)?, parent)
}

pub fn subcomplex_from_file(f: &SubcomplexFile, parent: &Arc<Complex2>) -> Result<Subcomplex, InputError> {
    let mut simplices = Vec::new();
    let mut degenerate = Vec::new();
    simplices.extend(f.vertices.iter().map(|&v| Simplex::Vertex(v)));
    for &[a, b] in &f.edges {
        match Edge::new(a, b) {
            Some(e) => simplices.push(Simplex::Edge(e)),
            None => degenerate.push(vec![a, b]),
        }
    }
    for &[a, b, c] in &f.triangles {
        match crate::complex::Triangle::new(a, b, c) {
            Some(t) => simplices.push(Simplex::Triangle(t)),
            None => degenerate.push(vec![a, b, c]),
        }
    }
    if !degenerate.is_empty() {
        let issues = degenerate.into_iter().map(|vertices| ComplexIssue::DegenerateSimplex { vertices }).collect();
        return Err(InputError::Validation(ValidationError { issues }));
    }
    Ok(Subcomplex::from_simplices(parent, simplices)?)
}

pub fn subcomplex_file(s: &Subcomplex, parent_path: Option<&str>) -> SubcomplexFile {
    let c = s.cells();
    SubcomplexFile {
        parent: parent_path.map(str::to_string),
        vertices: c.vertices().iter().copied().collect(),
        edges: c.edges().iter().map(|e| e.vertices()).collect(),
        triangles: c.triangles().iter().map(|t| t.vertices()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Human,
    Machine,
}

/// Anything the command line prints.
pub trait Report: Serialize {
    fn kind(&self) -> &'static str;
    fn human(&self) -> String;
}

pub fn emit_report<R: Report + ?Sized>(r: &R, format: Format) -> String {
    match format {
        Format::Human => {
            let mut s = r.human();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
        Format::Machine => machine(r.kind(), r),
    }
}

/// `{"schema_version", "kind", ...fields}` with floats rounded.
pub fn machine<T: Serialize + ?Sized>(kind: &str, value: &T) -> String {
    let body = serde_json::to_value(value).expect("reports serialize");
    let mut doc = Map::new();
    doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    doc.insert("kind".into(), Value::from(kind));
    match body {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("value".into(), other);
        }
    }
    let mut v = Value::Object(doc);
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap()
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap(), SIGNIFICANT_DIGITS);
            if let Some(r) = Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub(crate) fn fmt_real(x: f64) -> String {
    if x.is_infinite() {
        "infinity".into()
    } else {
        format!("{:.12}", x)
    }
}

pub(crate) fn line(out: &mut String, s: impl AsRef<str>) {
    let _ = writeln!(out, "{}", s.as_ref());
}

/// Outcome of `validate`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<ComplexIssue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_metric: Option<bool>,
}

impl ValidationReport {
    pub fn valid(c: &Complex2, m: &MetricAssignment) -> ValidationReport {
        let counts = [c.vertices().len(), c.edges().len(), c.triangles().len()];
        ValidationReport {
            valid: true,
            issues: Vec::new(),
            counts: Some(counts),
            euler_characteristic: Some(counts[0] as i64 - counts[1] as i64 + counts[2] as i64),
            components: Some(c.components().len()),
            unit_metric: Some(m.is_unit()),
        }
    }

    pub fn invalid(e: &ValidationError) -> ValidationReport {
        ValidationReport {
            valid: false,
            issues: e.issues.clone(),
            counts: None,
            euler_characteristic: None,
            components: None,
            unit_metric: None,
        }
    }
}

impl Report for ValidationReport {
    fn kind(&self) -> &'static str {
        "validation"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        if self.valid {
            let [v, e, t] = self.counts.unwrap_or_default();
            line(&mut out, "valid 2-complex");
            line(&mut out, format!("  simplices: {v} vertices, {e} edges, {t} triangles"));
            line(&mut out, format!("  euler characteristic: {}", self.euler_characteristic.unwrap_or(0)));
            line(&mut out, format!("  components: {}", self.components.unwrap_or(0)));
            line(&mut out, format!("  unit metric: {}", self.unit_metric.unwrap_or(true)));
        } else {
            line(&mut out, format!("invalid: {} issue(s)", self.issues.len()));
            for i in &self.issues {
                line(&mut out, format!("  {i}"));
            }
        }
        out
    }
}

impl Report for CurvatureReport {
    fn kind(&self) -> &'static str {
        "curvature"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        line(
            &mut out,
            format!("link condition (tolerance {:e}, assume_flat_ok {})", self.tolerance, self.assume_flat_ok),
        );
        line(&mut out, format!("{:>8}  {:>18}  {:>8}  shortest link cycle", "vertex", "systole", "verdict"));
        for v in &self.vertices {
            let cyc: Vec<String> = v.shortest_cycle.iter().map(|e| e.to_string()).collect();
            line(
                &mut out,
                format!(
                    "{:>8}  {:>18}  {:>8}  {}",
                    v.vertex,
                    fmt_real(v.systole),
                    v.verdict.to_string(),
                    cyc.join(" ")
                ),
            );
        }
        line(&mut out, format!("overall: {}", self.overall));
        line(&mut out, if self.nonpositively_curved { "nonpositively curved" } else { "not nonpositively curved" });
        out
    }
}

/// Outcome of `cat0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cat0Report {
    pub tolerance: f64,
    pub assume_flat_ok: bool,
    pub budget: Budget,
    pub result: TriVerdict<Cat0Certificate>,
}

impl Report for Cat0Report {
    fn kind(&self) -> &'static str {
        "cat0"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        line(&mut out, format!("CAT(0): {}", self.result.value));
        line(&mut out, format!("  tolerance {:e}, assume_flat_ok {}", self.tolerance, self.assume_flat_ok));
        match &self.result.certificate {
            Some(Cat0Certificate::LinkConditionAndTrivialPi1 { flat_vertices, pi1 }) => {
                line(&mut out, "  every vertex link passes and pi_1 is trivial");
                if !flat_vertices.is_empty() {
                    line(&mut out, format!("  flat vertices accepted: {flat_vertices:?}"));
                }
                line(&mut out, format!("  pi_1 certificate: {}", to_compact(pi1)));
            }
            Some(Cat0Certificate::FailingLink { link }) => line(
                &mut out,
                format!("  link of vertex {} has systole {} < 2 pi", link.vertex, fmt_real(link.systole)),
            ),
            Some(Cat0Certificate::NontrivialPi1 { pi1 }) => {
                line(&mut out, format!("  pi_1 is nontrivial: {}", to_compact(pi1)))
            }
            Some(Cat0Certificate::Disconnected { components }) => {
                line(&mut out, format!("  disconnected: {components} components"))
            }
            None => {}
        }
        if let Some(n) = &self.result.note {
            line(&mut out, format!("  note: {n}"));
        }
        out
    }
}

/// Outcome of `homology`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologyReport {
    pub homology: HomologyResult,
    pub torsion_free: bool,
    pub acyclic: bool,
}

impl HomologyReport {
    pub fn new(homology: HomologyResult) -> HomologyReport {
        HomologyReport { torsion_free: homology.is_torsion_free(), acyclic: homology.is_acyclic(), homology }
    }
}

impl Report for HomologyReport {
    fn kind(&self) -> &'static str {
        "homology"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        let h = &self.homology;
        let group = |rank: usize, torsion: &[BigInt]| {
            let mut parts: Vec<String> = Vec::new();
            if rank > 0 {
                parts.push(if rank == 1 { "Z".into() } else { format!("Z^{rank}") });
            }
            parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        line(&mut out, format!("betti numbers: {:?}", h.betti));
        line(&mut out, format!("H0 = {}", group(h.betti[0], &h.torsion_h0)));
        line(&mut out, format!("H1 = {}", group(h.betti[1], &h.torsion_h1)));
        line(&mut out, format!("H2 = {}", group(h.betti[2], &[])));
        out
    }
}

/// Fundamental group of one component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentPi1 {
    pub basepoint: VertexId,
    pub generators: usize,
    pub relators: usize,
    pub presentation: String,
    pub simplified: String,
    pub tietze_moves: usize,
    pub abelianization: Abelianization,
    pub trivial: TriVerdict<TrivialityCertificate>,
}

impl ComponentPi1 {
    pub fn of(model: &Pi1Model, budget: &Budget) -> ComponentPi1 {
        let p = model.presentation();
        ComponentPi1 {
            basepoint: model.basepoint(),
            generators: p.num_generators(),
            relators: p.relators().len(),
            presentation: p.to_string(),
            simplified: model.simplified().to_string(),
            tietze_moves: model.simplification().moves_used(),
            abelianization: p.abelianization(),
            trivial: is_trivial_group(p, budget),
        }
    }
}

/// Outcome of `pi1`: one entry per component, keyed by least vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pi1Report {
    pub budget: Budget,
    pub components: Vec<ComponentPi1>,
}

impl Report for Pi1Report {
    fn kind(&self) -> &'static str {
        "pi1"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            line(&mut out, format!("component at vertex {}", c.basepoint));
            line(&mut out, format!("  presentation: {} generators, {} relators", c.generators, c.relators));
            line(&mut out, format!("  simplified ({} moves): {}", c.tietze_moves, c.simplified));
            line(&mut out, format!("  abelianization: {}", c.abelianization));
            line(&mut out, format!("  trivial: {}", c.trivial.value));
        }
        if self.components.is_empty() {
            line(&mut out, "empty complex");
        }
        out
    }
}

/// Outcome of `collapse`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseReport {
    pub budget: Budget,
    pub result: TriVerdict<CollapseOutcome>,
    /// Whether the certificate replays, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_verified: Option<bool>,
}

impl Report for CollapseReport {
    fn kind(&self) -> &'static str {
        "collapse"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        line(&mut out, format!("collapsible: {}", self.result.value));
        match &self.result.certificate {
            Some(CollapseOutcome::Certificate(cert)) => {
                line(&mut out, format!("  {} elementary collapses to vertex {:?}", cert.moves.len(), cert.terminal));
                for (i, m) in cert.moves.iter().enumerate() {
                    line(&mut out, format!("  {:>4}. {}", i + 1, to_compact(m)));
                }
            }
            Some(CollapseOutcome::Obstruction(o)) => line(&mut out, format!("  obstruction: {}", to_compact(o))),
            None => {}
        }
        if let Some(ok) = self.certificate_verified {
            line(&mut out, format!("  certificate verified: {ok}"));
        }
        if let Some(n) = &self.result.note {
            line(&mut out, format!("  note: {n}"));
        }
        out
    }
}

impl Report for ScanReport {
    fn kind(&self) -> &'static str {
        "scan"
    }

    fn human(&self) -> String {
        let mut out = String::new();
        line(&mut out, format!("scan verdict: {}", self.verdict));
        line(&mut out, format!("  Y candidates {}, admissible {}", self.y_candidates, self.y_admissible));
        line(
            &mut out,
            format!("  Y skipped: {} not injective, {} undecided", self.y_not_injective, self.y_injectivity_unknown),
        );
        line(&mut out, format!("  Z candidates {}", self.z_candidates));
        line(&mut out, format!("  pairs tested {}, intersection classes {}", self.pairs_tested, self.classes_tested));
        line(&mut out, format!("  violations: {} classes, {} pairs", self.violation_classes, self.violation_pairs));
        line(&mut out, format!("  unknowns: {} classes, {} pairs", self.unknown_classes, self.unknown_pairs));
        for v in &self.violations {
            line(&mut out, format!("  violation: Y ∩ Z = {}", describe(&v.intersection)));
            line(&mut out, format!("    Y = {}", describe(&v.y)));
            line(&mut out, format!("    Z = {}", describe(&v.z)));
            line(&mut out, format!("    loop {:?}, word {}", v.witness.loop_vertices, v.witness.word));
        }
        for u in &self.unknowns {
            line(&mut out, format!("  unknown: Y ∩ Z = {} ({})", describe(&u.intersection), u.note));
        }
        out
    }
}

fn describe(d: &SubcomplexDescription) -> String {
    format!("{} vertices {:?}, {} edges, {} triangles", d.vertices.len(), d.vertices, d.edges.len(), d.triangles.len())
}

fn to_compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}
