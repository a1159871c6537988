//! Piecewise-Euclidean metrics, angle-weighted vertex links, link systoles
//! and the link condition.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::group::fundamental_group;
use crate::algebra::injectivity::{is_trivial_group, TrivialityCertificate};
use crate::algebra::verdict::{Budget, BudgetSpent, TriVerdict};
use crate::complex::{Complex2, Edge, Subcomplex, Triangle, VertexId};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative slack below which a triangle counts as degenerate.
pub const DEGENERACY_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MetricError {
    #[error("edge {0} has no length")]
    MissingLength(Edge),
    #[error("edge {0} is not in the complex")]
    UnknownEdge(Edge),
    #[error("edge {edge} has non-positive or non-finite length {length}")]
    BadLength { edge: Edge, length: f64 },
    #[error("sides {a}, {b}, {c} violate the strict triangle inequality")]
    DegenerateTriangle { a: f64, b: f64, c: f64 },
    #[error("vertex {0} is not in the complex")]
    UnknownVertex(VertexId),
    #[error("tolerance {0} is negative")]
    BadTolerance(f64),
}

/// Edge lengths for every edge of a complex.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAssignment {
    lengths: BTreeMap<Edge, f64>,
}

impl MetricAssignment {
    pub fn unit(c: &Complex2) -> MetricAssignment {
        MetricAssignment { lengths: c.edges().iter().map(|&e| (e, 1.0)).collect() }
    }

    /// Unspecified edges get length 1.
    pub fn with_defaults(c: &Complex2, given: &BTreeMap<Edge, f64>) -> Result<MetricAssignment, MetricError> {
        let mut lengths: BTreeMap<Edge, f64> = c.edges().iter().map(|&e| (e, 1.0)).collect();
        for (&e, &l) in given {
            if !lengths.contains_key(&e) {
                return Err(MetricError::UnknownEdge(e));
            }
            lengths.insert(e, l);
        }
        MetricAssignment::new(c, lengths)
    }

    pub fn new(c: &Complex2, lengths: BTreeMap<Edge, f64>) -> Result<MetricAssignment, MetricError> {
        for e in lengths.keys() {
            if !c.edges().contains(e) {
                return Err(MetricError::UnknownEdge(*e));
            }
        }
        for e in c.edges() {
            match lengths.get(e) {
                None => return Err(MetricError::MissingLength(*e)),
                Some(&l) if !(l > 0.0 && l.is_finite()) => return Err(MetricError::BadLength { edge: *e, length: l }),
                _ => {}
            }
        }
        let m = MetricAssignment { lengths };
        for t in c.triangles() {
            let [a, b, d] = m.sides(t);
            check_sides(a, b, d)?;
        }
        Ok(m)
    }

    pub fn length(&self, e: &Edge) -> Option<f64> {
        self.lengths.get(e).copied()
    }

    pub fn lengths(&self) -> &BTreeMap<Edge, f64> {
        &self.lengths
    }

    pub fn is_unit(&self) -> bool {
        self.lengths.values().all(|&l| l == 1.0)
    }

    pub fn scaled(&self, k: f64) -> MetricAssignment {
        MetricAssignment { lengths: self.lengths.iter().map(|(&e, &l)| (e, l * k)).collect() }
    }

    /// Restriction to the edges of a subcomplex.
    pub fn restricted(&self, c: &Complex2) -> MetricAssignment {
        MetricAssignment { lengths: c.edges().iter().map(|e| (*e, self.lengths[e])).collect() }
    }

    /// Lengths of the edges `[12, 02, 01]` of a sorted triangle `(0, 1, 2)`,
    /// i.e. the side opposite each vertex in order.
    fn sides(&self, t: &Triangle) -> [f64; 3] {
        let [e01, e02, e12] = t.edges();
        [self.lengths[&e12], self.lengths[&e02], self.lengths[&e01]]
    }
}

// negated comparisons so that NaN is rejected
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_sides(a: f64, b: f64, c: f64) -> Result<(), MetricError> {
    let longest = a.max(b).max(c);
    let slack = (b + c - a).min(a + c - b).min(a + b - c);
    if !(longest > 0.0 && longest.is_finite()) || !(slack / longest >= DEGENERACY_SLACK) {
        return Err(MetricError::DegenerateTriangle { a, b, c });
    }
    Ok(())
}

/// Angle between the sides `b` and `c`, opposite the side `a`.
pub fn corner_angle(a: f64, b: f64, c: f64) -> Result<f64, MetricError> {
    check_sides(a, b, c)?;
    let cos = ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkArc {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
    pub triangle: Triangle,
}

/// Directions at a vertex: one node per incident edge, one arc per
/// incident triangle weighted by its corner angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkGraph {
    pub vertex: VertexId,
    pub nodes: Vec<Edge>,
    pub arcs: Vec<LinkArc>,
}

pub fn build_link(c: &Complex2, m: &MetricAssignment, v: VertexId) -> Result<LinkGraph, MetricError> {
    if !c.vertices().contains(&v) {
        return Err(MetricError::UnknownVertex(v));
    }
    let nodes: Vec<Edge> = c.edges_at(v).collect();
    let pos = |e: Edge| nodes.binary_search(&e).unwrap();
    let mut arcs = Vec::new();
    for t in c.triangles_at(v) {
        let [e1, e2] = t.edges_at(v);
        let opposite = t.opposite_edge(v);
        let weight = corner_angle(m.lengths[&opposite], m.lengths[&e1], m.lengths[&e2])?;
        arcs.push(LinkArc { from: pos(e1), to: pos(e2), weight, triangle: t });
    }
    Ok(LinkGraph { vertex: v, nodes, arcs })
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Shortest cycle of a weighted multigraph with non-negative weights, as
/// its length and closed node sequence; `None` for a forest. For each arc
/// `(u, w)`, the shortest `u`-`w` path avoiding it closes a cycle.
pub fn shortest_cycle(nodes: usize, arcs: &[(usize, usize, f64)]) -> Option<(f64, Vec<usize>)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (i, &(u, w, _)) in arcs.iter().enumerate() {
        adj[u].push((w, i));
        if u != w {
            adj[w].push((u, i));
        }
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for (i, &(u, w, weight)) in arcs.iter().enumerate() {
        if u == w {
            if best.as_ref().is_none_or(|(b, _)| weight < *b) {
                best = Some((weight, vec![u, u]));
            }
            continue;
        }
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev = vec![usize::MAX; nodes];
        dist[u] = 0.0;
        let mut heap = BinaryHeap::from([HeapItem(0.0, u)]);
        while let Some(HeapItem(d, x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            if x == w {
                break;
            }
            for &(y, j) in &adj[x] {
                if j == i {
                    continue;
                }
                let nd = d + arcs[j].2;
                if nd < dist[y] {
                    dist[y] = nd;
                    prev[y] = x;
                    heap.push(HeapItem(nd, y));
                }
            }
        }
        if dist[w].is_finite() {
            let total = dist[w] + weight;
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                let mut path = vec![w];
                let mut cur = w;
                while cur != u {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                path.push(u);
                best = Some((total, path));
            }
        }
    }
    best
}

/// Length of the shortest simple cycle, infinite for a forest.
pub fn systole(g: &LinkGraph) -> f64 {
    let arcs: Vec<(usize, usize, f64)> = g.arcs.iter().map(|a| (a.from, a.to, a.weight)).collect();
    shortest_cycle(g.nodes.len(), &arcs).map_or(f64::INFINITY, |(l, _)| l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LinkVerdict {
    Pass,
    Marginal,
    Fail,
}

impl fmt::Display for LinkVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkVerdict::Pass => "PASS",
            LinkVerdict::Marginal => "MARGINAL",
            LinkVerdict::Fail => "FAIL",
        })
    }
}

pub fn classify_systole(s: f64, tol: f64) -> LinkVerdict {
    let target = 2.0 * PI;
    if s < target - tol {
        LinkVerdict::Fail
    } else if (s - target).abs() <= tol {
        LinkVerdict::Marginal
    } else {
        LinkVerdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexCurvature {
    pub vertex: VertexId,
    /// Infinite when the link is a forest.
    #[serde(serialize_with = "crate::io::serialize_real")]
    pub systole: f64,
    pub verdict: LinkVerdict,
    /// The shortest link cycle, as the incident edges it passes through.
    pub shortest_cycle: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub tolerance: f64,
    pub assume_flat_ok: bool,
    pub unit_metric: bool,
    pub vertices: Vec<VertexCurvature>,
    /// Worst per-vertex verdict, with MARGINAL read as PASS under
    /// `assume_flat_ok`.
    pub overall: LinkVerdict,
    pub nonpositively_curved: bool,
}

impl CurvatureReport {
    pub fn assuming_flat_ok(mut self, ok: bool) -> CurvatureReport {
        self.assume_flat_ok = ok;
        self.recompute();
        self
    }

    fn recompute(&mut self) {
        let worst = self.vertices.iter().map(|v| v.verdict).max().unwrap_or(LinkVerdict::Pass);
        self.overall = if worst == LinkVerdict::Marginal && self.assume_flat_ok { LinkVerdict::Pass } else { worst };
        self.nonpositively_curved = self.overall == LinkVerdict::Pass;
    }

    pub fn failing(&self) -> impl Iterator<Item = &VertexCurvature> {
        self.vertices.iter().filter(|v| v.verdict == LinkVerdict::Fail)
    }

    pub fn marginal(&self) -> impl Iterator<Item = &VertexCurvature> {
        self.vertices.iter().filter(|v| v.verdict == LinkVerdict::Marginal)
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_link_condition(c: &Complex2, m: &MetricAssignment, tol: f64) -> Result<CurvatureReport, MetricError> {
    if !(tol >= 0.0) {
        return Err(MetricError::BadTolerance(tol));
    }
    let mut vertices = Vec::with_capacity(c.vertices().len());
    for &v in c.vertices() {
        let g = build_link(c, m, v)?;
        let arcs: Vec<(usize, usize, f64)> = g.arcs.iter().map(|a| (a.from, a.to, a.weight)).collect();
        let (systole, cycle) = match shortest_cycle(g.nodes.len(), &arcs) {
            Some((l, nodes)) => (l, nodes[..nodes.len() - 1].iter().map(|&i| g.nodes[i]).collect()),
            None => (f64::INFINITY, Vec::new()),
        };
        vertices.push(VertexCurvature {
            vertex: v,
            systole,
            verdict: classify_systole(systole, tol),
            shortest_cycle: cycle,
        });
    }
    let mut report = CurvatureReport {
        tolerance: tol,
        assume_flat_ok: false,
        unit_metric: m.is_unit(),
        vertices,
        overall: LinkVerdict::Pass,
        nonpositively_curved: true,
    };
    report.recompute();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cat0Certificate {
    /// Every link passes (flat vertices included when assumed acceptable)
    /// and pi_1 is trivial.
    LinkConditionAndTrivialPi1 {
        flat_vertices: Vec<VertexId>,
        pi1: TrivialityCertificate,
    },
    FailingLink {
        link: VertexCurvature,
    },
    NontrivialPi1 {
        pi1: TrivialityCertificate,
    },
    Disconnected {
        components: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cat0Options {
    pub tol: f64,
    pub assume_flat_ok: bool,
}

impl Default for Cat0Options {
    fn default() -> Cat0Options {
        Cat0Options { tol: DEFAULT_TOLERANCE, assume_flat_ok: false }
    }
}

/// A 2-complex is CAT(0) iff it is simply connected and satisfies the
/// link condition.
pub fn is_cat0(
    c: &Complex2,
    m: &MetricAssignment,
    budget: &Budget,
    opts: &Cat0Options,
) -> Result<TriVerdict<Cat0Certificate>, MetricError> {
    let components = c.components().len();
    if components != 1 {
        return Ok(TriVerdict::no(Cat0Certificate::Disconnected { components }, BudgetSpent::default()));
    }
    let report = check_link_condition(c, m, opts.tol)?.assuming_flat_ok(opts.assume_flat_ok);
    if let Some(link) = report.failing().next() {
        return Ok(TriVerdict::no(Cat0Certificate::FailingLink { link: link.clone() }, BudgetSpent::default()));
    }
    let parent = std::sync::Arc::new(c.clone());
    let base = *c.vertices().first().unwrap();
    let p = fundamental_group(&Subcomplex::full(&parent), base).expect("complex is nonempty");
    let pi1 = is_trivial_group(&p, budget);
    let spent = pi1.budget_spent;
    if pi1.is_no() {
        return Ok(TriVerdict::no(Cat0Certificate::NontrivialPi1 { pi1: pi1.certificate.unwrap() }, spent));
    }
    let flat: Vec<VertexId> = report.marginal().map(|v| v.vertex).collect();
    if !flat.is_empty() && !opts.assume_flat_ok {
        return Ok(TriVerdict::unknown(
            format!("{} vertices have link systole within {} of 2*pi", flat.len(), opts.tol),
            spent,
        ));
    }
    match pi1.certificate {
        Some(cert) if pi1.is_yes() => {
            Ok(TriVerdict::yes(Cat0Certificate::LinkConditionAndTrivialPi1 { flat_vertices: flat, pi1: cert }, spent))
        }
        _ => Ok(TriVerdict::unknown(pi1.note.unwrap_or_default(), spent)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verdict::Verdict;
    use crate::harness::generators::{generate, octahedron, Generator};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn corner_angles() {
        assert!(close(corner_angle(1.0, 1.0, 1.0).unwrap(), PI / 3.0));
        assert!(close(corner_angle(5.0, 3.0, 4.0).unwrap(), PI / 2.0));
        assert!(close(corner_angle(3.0, 2.0, 2.0).unwrap(), (-1.0f64 / 8.0).acos()));
        assert!(matches!(corner_angle(2.0, 1.0, 1.0), Err(MetricError::DegenerateTriangle { .. })));
        assert!(corner_angle(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn octahedron_links_fail() {
        let (oct, m) = octahedron();
        let g = build_link(&oct, &m, 0).unwrap();
        assert_eq!((g.nodes.len(), g.arcs.len()), (4, 4));
        assert!(g.arcs.iter().all(|a| close(a.weight, PI / 3.0)));
        assert!(close(systole(&g), 4.0 * PI / 3.0));
        let r = check_link_condition(&oct, &m, DEFAULT_TOLERANCE).unwrap();
        assert!(r.vertices.iter().all(|v| v.verdict == LinkVerdict::Fail && v.shortest_cycle.len() == 4));
        assert!(!r.nonpositively_curved);
    }

    #[test]
    fn flat_torus_is_marginal() {
        let (t, m) = generate(&Generator::TorusGrid(3)).unwrap();
        let r = check_link_condition(&t, &m, DEFAULT_TOLERANCE).unwrap();
        for v in &r.vertices {
            assert!((v.systole - 2.0 * PI).abs() < 1e-9);
            assert_eq!(v.verdict, LinkVerdict::Marginal);
        }
        assert_eq!(r.overall, LinkVerdict::Marginal);
        assert!(r.clone().assuming_flat_ok(true).nonpositively_curved);
    }

    #[test]
    fn systole_examples() {
        assert_eq!(shortest_cycle(3, &[(0, 1, 1.0), (1, 2, 1.0)]), None);
        let (l, cyc) = shortest_cycle(2, &[(0, 1, 1.0), (0, 1, 2.5)]).unwrap();
        assert_eq!(l, 3.5);
        assert_eq!(cyc.first(), cyc.last());
        let g = LinkGraph { vertex: 0, nodes: vec![], arcs: vec![] };
        assert_eq!(systole(&g), f64::INFINITY);
    }

    #[test]
    fn dangling_edge_link() {
        let (c, m) = generate(&Generator::Path(1)).unwrap();
        let g = build_link(&c, &m, 0).unwrap();
        assert_eq!((g.nodes.len(), g.arcs.len()), (1, 0));
        assert_eq!(build_link(&c, &m, 7), Err(MetricError::UnknownVertex(7)));
    }

    #[test]
    fn cat0_verdicts() {
        let b = Budget::default();
        let (oct, m) = octahedron();
        let v = is_cat0(&oct, &m, &b, &Cat0Options::default()).unwrap();
        assert!(matches!(v.certificate, Some(Cat0Certificate::FailingLink { .. })));

        let (t, m) = generate(&Generator::TorusGrid(3)).unwrap();
        let v = is_cat0(&t, &m, &b, &Cat0Options::default()).unwrap();
        assert!(matches!(v.certificate, Some(Cat0Certificate::NontrivialPi1 { .. })));

        let (d, m) = generate(&Generator::DiskGrid(3)).unwrap();
        assert_eq!(is_cat0(&d, &m, &b, &Cat0Options::default()).unwrap().value, Verdict::Unknown);
        let opts = Cat0Options { assume_flat_ok: true, ..Cat0Options::default() };
        assert_eq!(is_cat0(&d, &m, &b, &opts).unwrap().value, Verdict::Yes);

        let (tri, m) = generate(&Generator::Triangle).unwrap();
        assert_eq!(is_cat0(&tri, &m, &b, &Cat0Options::default()).unwrap().value, Verdict::Yes);
    }

    #[test]
    fn bad_metrics_rejected() {
        let (tri, _) = generate(&Generator::Triangle).unwrap();
        let e = |a, b| Edge::new(a, b).unwrap();
        let lengths = BTreeMap::from([(e(0, 1), 1.0), (e(1, 2), 1.0), (e(0, 2), 2.0)]);
        assert!(matches!(MetricAssignment::new(&tri, lengths), Err(MetricError::DegenerateTriangle { .. })));
        let lengths = BTreeMap::from([(e(0, 1), 3.0), (e(1, 2), 4.0), (e(0, 2), 5.0)]);
        let m = MetricAssignment::new(&tri, lengths).unwrap();
        let r = check_link_condition(&tri, &m, DEFAULT_TOLERANCE).unwrap();
        assert!(r.vertices.iter().all(|v| v.verdict == LinkVerdict::Pass));
        assert!(check_link_condition(&tri, &m, -1.0).is_err());
    }
}
