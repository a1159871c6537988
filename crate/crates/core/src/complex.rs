//! Finite 2-dimensional simplicial complexes and their subcomplexes.
//!
//! Simplices are stored in canonical form (sorted vertex tuples), so equality,
//! ordering and hashing of complexes are deterministic. A [`Subcomplex`] keeps
//! a handle on its parent complex; binary operations refuse to mix parents.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

/// An edge `{a, b}` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[VertexId; 2]", try_from = "[VertexId; 2]")]
pub struct Edge([VertexId; 2]);

impl Edge {
    /// Returns `None` for a degenerate pair.
    pub fn new(a: VertexId, b: VertexId) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge([a, b])),
            std::cmp::Ordering::Greater => Some(Edge([b, a])),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn vertices(&self) -> [VertexId; 2] {
        self.0
    }

    pub fn lo(&self) -> VertexId {
        self.0[0]
    }

    pub fn hi(&self) -> VertexId {
        self.0[1]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0[0] == v || self.0[1] == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.0[0] == v {
            self.0[1]
        } else {
            self.0[0]
        }
    }
}

impl From<Edge> for [VertexId; 2] {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl TryFrom<[VertexId; 2]> for Edge {
    type Error = String;

    fn try_from(v: [VertexId; 2]) -> Result<Self, Self::Error> {
        Edge::new(v[0], v[1]).ok_or_else(|| format!("degenerate edge {v:?}"))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0[0], self.0[1])
    }
}

/// A triangle `{a, b, c}` with `a < b < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[VertexId; 3]", try_from = "[VertexId; 3]")]
pub struct Triangle([VertexId; 3]);

impl Triangle {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Option<Triangle> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            None
        } else {
            Some(Triangle(v))
        }
    }

    pub fn vertices(&self) -> [VertexId; 3] {
        self.0
    }

    /// The three edges in canonical order: `v0v1`, `v0v2`, `v1v2`.
    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge([a, b]), Edge([a, c]), Edge([b, c])]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.contains(e.lo()) && self.contains(e.hi())
    }

    /// The vertex not on edge `e`. `e` must be an edge of the triangle.
    pub fn opposite_vertex(&self, e: &Edge) -> VertexId {
        self.0.iter().copied().find(|v| !e.contains(*v)).expect("edge of triangle")
    }

    /// The edge not containing `v`. `v` must be a vertex of the triangle.
    pub fn opposite_edge(&self, v: VertexId) -> Edge {
        let rest: Vec<VertexId> = self.0.iter().copied().filter(|&w| w != v).collect();
        Edge([rest[0], rest[1]])
    }

    /// The two edges through `v`.
    pub fn edges_at(&self, v: VertexId) -> [Edge; 2] {
        let rest: Vec<VertexId> = self.0.iter().copied().filter(|&w| w != v).collect();
        [Edge::new(v, rest[0]).unwrap(), Edge::new(v, rest[1]).unwrap()]
    }
}

impl From<Triangle> for [VertexId; 3] {
    fn from(t: Triangle) -> Self {
        t.0
    }
}

impl TryFrom<[VertexId; 3]> for Triangle {
    type Error = String;

    fn try_from(v: [VertexId; 3]) -> Result<Self, Self::Error> {
        Triangle::new(v[0], v[1], v[2]).ok_or_else(|| format!("degenerate triangle {v:?}"))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.0[0], self.0[1], self.0[2])
    }
}

/// Any simplex of a 2-complex. The derived order puts vertices before edges
/// before triangles, which is the canonical simplex order used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Simplex {
    Vertex(VertexId),
    Edge(Edge),
    Triangle(Triangle),
}

impl Simplex {
    pub fn dim(&self) -> usize {
        match self {
            Simplex::Vertex(_) => 0,
            Simplex::Edge(_) => 1,
            Simplex::Triangle(_) => 2,
        }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        match self {
            Simplex::Vertex(v) => vec![*v],
            Simplex::Edge(e) => e.vertices().to_vec(),
            Simplex::Triangle(t) => t.vertices().to_vec(),
        }
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<Simplex> {
        match self {
            Simplex::Vertex(_) => Vec::new(),
            Simplex::Edge(e) => e.vertices().iter().map(|&v| Simplex::Vertex(v)).collect(),
            Simplex::Triangle(t) => t.edges().iter().map(|&e| Simplex::Edge(e)).collect(),
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Simplex::Vertex(v) => write!(f, "{v}"),
            Simplex::Edge(e) => write!(f, "{e}"),
            Simplex::Triangle(t) => write!(f, "{t}"),
        }
    }
}

/// One problem found while validating a [`RawComplex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ComplexIssue {
    MissingFace { face: Simplex, of: Simplex },
    DuplicateSimplex { simplex: Simplex },
    DegenerateSimplex { vertices: Vec<VertexId> },
}

impl fmt::Display for ComplexIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexIssue::MissingFace { face, of } => write!(f, "missing face {face} of {of}"),
            ComplexIssue::DuplicateSimplex { simplex } => write!(f, "duplicate simplex {simplex}"),
            ComplexIssue::DegenerateSimplex { vertices } => {
                write!(f, "degenerate simplex {vertices:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid complex: {}", .issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub issues: Vec<ComplexIssue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
    #[error("vertex {0} is not in the complex")]
    UnknownVertex(VertexId),
    #[error("subcomplexes belong to different parent complexes")]
    ParentMismatch,
    #[error("mask is not closed under faces: {face} of {of} is missing")]
    NotClosed { face: Simplex, of: Simplex },
}

/// Unvalidated simplex lists, as read from a file or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    pub triangles: Vec<[VertexId; 3]>,
}

/// A finite simplicial complex of dimension at most two, closed under faces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex2 {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
    triangles: BTreeSet<Triangle>,
}

impl Complex2 {
    pub fn empty() -> Complex2 {
        Complex2::default()
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(raw: &RawComplex) -> Result<Complex2, ValidationError> {
        let mut issues = Vec::new();
        let mut c = Complex2::default();
        for &v in &raw.vertices {
            if !c.vertices.insert(v) {
                issues.push(ComplexIssue::DuplicateSimplex { simplex: Simplex::Vertex(v) });
            }
        }
        for &[a, b] in &raw.edges {
            match Edge::new(a, b) {
                None => issues.push(ComplexIssue::DegenerateSimplex { vertices: vec![a, b] }),
                Some(e) => {
                    if !c.edges.insert(e) {
                        issues.push(ComplexIssue::DuplicateSimplex { simplex: Simplex::Edge(e) });
                    }
                }
            }
        }
        for &[a, b, d] in &raw.triangles {
            match Triangle::new(a, b, d) {
                None => issues.push(ComplexIssue::DegenerateSimplex { vertices: vec![a, b, d] }),
                Some(t) => {
                    if !c.triangles.insert(t) {
                        issues.push(ComplexIssue::DuplicateSimplex { simplex: Simplex::Triangle(t) });
                    }
                }
            }
        }
        for e in &c.edges {
            for v in e.vertices() {
                if !c.vertices.contains(&v) {
                    issues.push(ComplexIssue::MissingFace { face: Simplex::Vertex(v), of: Simplex::Edge(*e) });
                }
            }
        }
        for t in &c.triangles {
            for e in t.edges() {
                if !c.edges.contains(&e) {
                    issues.push(ComplexIssue::MissingFace { face: Simplex::Edge(e), of: Simplex::Triangle(*t) });
                }
            }
        }
        if issues.is_empty() {
            Ok(c)
        } else {
            Err(ValidationError { issues })
        }
    }

    /// The complex generated by the given simplices and all of their faces.
    pub fn generated_by<I: IntoIterator<Item = Simplex>>(simplices: I) -> Complex2 {
        let mut c = Complex2::default();
        for s in simplices {
            c.insert_closed(s);
        }
        c
    }

    pub fn from_triangles<I: IntoIterator<Item = Triangle>>(triangles: I) -> Complex2 {
        Complex2::generated_by(triangles.into_iter().map(Simplex::Triangle))
    }

    fn insert_closed(&mut self, s: Simplex) {
        match s {
            Simplex::Vertex(v) => {
                self.vertices.insert(v);
            }
            Simplex::Edge(e) => {
                self.vertices.extend(e.vertices());
                self.edges.insert(e);
            }
            Simplex::Triangle(t) => {
                self.vertices.extend(t.vertices());
                self.edges.extend(t.edges());
                self.triangles.insert(t);
            }
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn triangles(&self) -> &BTreeSet<Triangle> {
        &self.triangles
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn num_simplices(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.triangles.len()
    }

    /// -1 for the empty complex.
    pub fn dimension(&self) -> i32 {
        if !self.triangles.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else if !self.vertices.is_empty() {
            0
        } else {
            -1
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        match s {
            Simplex::Vertex(v) => self.vertices.contains(v),
            Simplex::Edge(e) => self.edges.contains(e),
            Simplex::Triangle(t) => self.triangles.contains(t),
        }
    }

    /// All simplices in canonical order.
    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.vertices
            .iter()
            .map(|&v| Simplex::Vertex(v))
            .chain(self.edges.iter().map(|&e| Simplex::Edge(e)))
            .chain(self.triangles.iter().map(|&t| Simplex::Triangle(t)))
    }

    pub fn is_subcomplex_of(&self, other: &Complex2) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self.triangles.is_subset(&other.triangles)
    }

    pub fn edges_at(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied().filter(move |e| e.contains(v))
    }

    pub fn triangles_at(&self, v: VertexId) -> impl Iterator<Item = Triangle> + '_ {
        self.triangles.iter().copied().filter(move |t| t.contains(v))
    }

    pub fn triangles_on(&self, e: Edge) -> impl Iterator<Item = Triangle> + '_ {
        self.triangles.iter().copied().filter(move |t| t.contains_edge(&e))
    }

    /// Sorted neighbour lists of the 1-skeleton.
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.lo()).unwrap().push(e.hi());
            adj.get_mut(&e.hi()).unwrap().push(e.lo());
        }
        for n in adj.values_mut() {
            n.sort_unstable();
        }
        adj
    }

    /// Simplex-wise intersection; face-closed because both inputs are.
    pub fn intersection(&self, other: &Complex2) -> Complex2 {
        Complex2 {
            vertices: self.vertices.intersection(&other.vertices).copied().collect(),
            edges: self.edges.intersection(&other.edges).copied().collect(),
            triangles: self.triangles.intersection(&other.triangles).copied().collect(),
        }
    }

    pub fn union(&self, other: &Complex2) -> Complex2 {
        Complex2 {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
            triangles: self.triangles.union(&other.triangles).copied().collect(),
        }
    }

    /// Breadth-first edge-path distances from `v` within its component.
    pub fn distances_from(&self, v: VertexId) -> BTreeMap<VertexId, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        if !self.vertices.contains(&v) {
            return dist;
        }
        dist.insert(v, 0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for &w in &adj[&u] {
                if let Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The component of `v`, or the empty complex if `v` is absent.
    pub fn component_of(&self, v: VertexId) -> Complex2 {
        let reach = self.distances_from(v);
        self.restrict_to_vertices(|w| reach.contains_key(&w))
    }

    /// Full subcomplex spanned by the vertices accepted by `keep`.
    pub fn restrict_to_vertices<F: Fn(VertexId) -> bool>(&self, keep: F) -> Complex2 {
        Complex2 {
            vertices: self.vertices.iter().copied().filter(|&v| keep(v)).collect(),
            edges: self.edges.iter().copied().filter(|e| keep(e.lo()) && keep(e.hi())).collect(),
            triangles: self.triangles.iter().copied().filter(|t| t.vertices().iter().all(|&v| keep(v))).collect(),
        }
    }

    /// Connected components, ordered by their minimal vertex.
    pub fn components(&self) -> Vec<Complex2> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &v in &self.vertices {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.component_of(v);
            seen.extend(comp.vertices.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_of(*self.vertices.first().unwrap()).vertices.len() == self.vertices.len()
    }

    /// Applies a vertex relabeling and re-canonicalizes. The map must be
    /// injective on the vertices of the complex.
    pub fn relabeled<F: Fn(VertexId) -> VertexId>(&self, map: F) -> Complex2 {
        Complex2 {
            vertices: self.vertices.iter().map(|&v| map(v)).collect(),
            edges: self.edges.iter().map(|e| Edge::new(map(e.lo()), map(e.hi())).unwrap()).collect(),
            triangles: self
                .triangles
                .iter()
                .map(|t| {
                    let [a, b, c] = t.vertices();
                    Triangle::new(map(a), map(b), map(c)).unwrap()
                })
                .collect(),
        }
    }

    pub(crate) fn insert_triangle_unchecked(&mut self, t: Triangle) {
        self.triangles.insert(t);
    }

    pub(crate) fn insert_edge_unchecked(&mut self, e: Edge) {
        self.edges.insert(e);
    }

    pub(crate) fn insert_vertex_unchecked(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub(crate) fn remove_simplex_unchecked(&mut self, s: &Simplex) {
        match s {
            Simplex::Vertex(v) => {
                self.vertices.remove(v);
            }
            Simplex::Edge(e) => {
                self.edges.remove(e);
            }
            Simplex::Triangle(t) => {
                self.triangles.remove(t);
            }
        }
    }

    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|e| e.vertices()).collect(),
            triangles: self.triangles.iter().map(|t| t.vertices()).collect(),
        }
    }
}

/// A face-closed subset of a parent complex.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    parent: Arc<Complex2>,
    cells: Complex2,
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        same_parent(&self.parent, &other.parent) && self.cells == other.cells
    }
}

impl Eq for Subcomplex {}

fn same_parent(a: &Arc<Complex2>, b: &Arc<Complex2>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Subcomplex {
    pub fn full(parent: &Arc<Complex2>) -> Subcomplex {
        Subcomplex { parent: Arc::clone(parent), cells: (**parent).clone() }
    }

    pub fn empty(parent: &Arc<Complex2>) -> Subcomplex {
        Subcomplex { parent: Arc::clone(parent), cells: Complex2::empty() }
    }

    /// Wraps an explicit simplex mask, which must already be face-closed.
    pub fn from_cells(parent: &Arc<Complex2>, cells: Complex2) -> Result<Subcomplex, ComplexError> {
        if let Some(s) = cells.simplices().find(|s| !parent.contains(s)) {
            return Err(ComplexError::UnknownSimplex(s));
        }
        Ok(Subcomplex { parent: Arc::clone(parent), cells })
    }

    /// Builds a mask from a simplex list and checks face closure.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(
        parent: &Arc<Complex2>,
        simplices: I,
    ) -> Result<Subcomplex, ComplexError> {
        let simplices: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &simplices {
            if !parent.contains(s) {
                return Err(ComplexError::UnknownSimplex(*s));
            }
            for f in s.facets() {
                if !simplices.contains(&f) {
                    return Err(ComplexError::NotClosed { face: f, of: *s });
                }
            }
        }
        let mut cells = Complex2::empty();
        for s in simplices {
            match s {
                Simplex::Vertex(v) => cells.insert_vertex_unchecked(v),
                Simplex::Edge(e) => cells.insert_edge_unchecked(e),
                Simplex::Triangle(t) => cells.insert_triangle_unchecked(t),
            }
        }
        Ok(Subcomplex { parent: Arc::clone(parent), cells })
    }

    /// Smallest face-closed subcomplex containing `seeds`.
    pub fn closure<I: IntoIterator<Item = Simplex>>(
        parent: &Arc<Complex2>,
        seeds: I,
    ) -> Result<Subcomplex, ComplexError> {
        let mut cells = Complex2::empty();
        for s in seeds {
            if !parent.contains(&s) {
                return Err(ComplexError::UnknownSimplex(s));
            }
            cells.insert_closed(s);
        }
        Ok(Subcomplex { parent: Arc::clone(parent), cells })
    }

    pub fn parent(&self) -> &Arc<Complex2> {
        &self.parent
    }

    pub fn cells(&self) -> &Complex2 {
        &self.cells
    }

    pub fn into_cells(self) -> Complex2 {
        self.cells
    }

    pub fn same_parent(&self, other: &Subcomplex) -> bool {
        same_parent(&self.parent, &other.parent)
    }

    pub fn intersect(&self, other: &Subcomplex) -> Result<Subcomplex, ComplexError> {
        if !self.same_parent(other) {
            return Err(ComplexError::ParentMismatch);
        }
        Ok(Subcomplex { parent: Arc::clone(&self.parent), cells: self.cells.intersection(&other.cells) })
    }

    pub fn union(&self, other: &Subcomplex) -> Result<Subcomplex, ComplexError> {
        if !self.same_parent(other) {
            return Err(ComplexError::ParentMismatch);
        }
        Ok(Subcomplex { parent: Arc::clone(&self.parent), cells: self.cells.union(&other.cells) })
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.same_parent(other) && self.cells.is_subcomplex_of(&other.cells)
    }
}

/// One connected piece of a subcomplex together with its basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub basepoint: VertexId,
    pub cells: Subcomplex,
}

/// Partition of a subcomplex into connected components, ordered by basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn basepoints(&self) -> Vec<VertexId> {
        self.components.iter().map(|c| c.basepoint).collect()
    }

    /// The component containing `v`, if any.
    pub fn containing(&self, v: VertexId) -> Option<&Component> {
        self.components.iter().find(|c| c.cells.cells().vertices().contains(&v))
    }
}

/// Basepoints are minimal vertex identifiers.
pub fn connected_components(s: &Subcomplex) -> ComponentDecomposition {
    let components = s
        .cells
        .components()
        .into_iter()
        .map(|cells| Component {
            basepoint: *cells.vertices().first().unwrap(),
            cells: Subcomplex { parent: Arc::clone(&s.parent), cells },
        })
        .collect();
    ComponentDecomposition { components }
}

/// The link of a vertex as a plain graph: a node per incident edge (named by
/// its far endpoint) and an arc per incident triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialLink {
    pub vertex: VertexId,
    pub nodes: Vec<VertexId>,
    pub arcs: Vec<(VertexId, VertexId)>,
}

pub fn star_and_link(parent: &Arc<Complex2>, v: VertexId) -> Result<(Subcomplex, CombinatorialLink), ComplexError> {
    if !parent.vertices().contains(&v) {
        return Err(ComplexError::UnknownVertex(v));
    }
    let nodes: Vec<VertexId> = parent.edges_at(v).map(|e| e.other(v)).collect();
    let arcs: Vec<(VertexId, VertexId)> = parent
        .triangles_at(v)
        .map(|t| {
            let o = t.opposite_edge(v);
            (o.lo(), o.hi())
        })
        .collect();
    let seeds = std::iter::once(Simplex::Vertex(v))
        .chain(parent.edges_at(v).map(Simplex::Edge))
        .chain(parent.triangles_at(v).map(Simplex::Triangle))
        .collect::<Vec<_>>();
    let star = Subcomplex::closure(parent, seeds)?;
    Ok((star, CombinatorialLink { vertex: v, nodes, arcs }))
}

/// All simplices whose vertices lie within edge-path distance `r` of `v`.
pub fn combinatorial_ball(parent: &Arc<Complex2>, v: VertexId, r: usize) -> Result<Subcomplex, ComplexError> {
    if !parent.vertices().contains(&v) {
        return Err(ComplexError::UnknownVertex(v));
    }
    let dist = parent.distances_from(v);
    let cells = parent.restrict_to_vertices(|w| dist.get(&w).is_some_and(|&d| d <= r));
    Ok(Subcomplex { parent: Arc::clone(parent), cells })
}
