//! Elementary collapses and extensions, and collapsibility search.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::chain::{complex_homology, HomologyResult};
use crate::algebra::verdict::{Budget, BudgetSpent, TriVerdict};
use crate::complex::{Complex2, Edge, Simplex, Triangle, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// Remove a free edge together with the only triangle containing it.
    TriangleCollapse { edge: Edge, triangle: Triangle },
    /// Remove a free vertex together with the only edge containing it.
    EdgeCollapse { vertex: VertexId, edge: Edge },
    /// Glue a new triangle along two existing edges sharing a vertex; its
    /// third edge must be new.
    TriangleExtension { glued: [Edge; 2], triangle: Triangle },
    /// Attach a new vertex by a new edge at an existing vertex.
    EdgeExtension { at: VertexId, new_vertex: VertexId },
}

impl Move {
    /// The extension undoing a collapse, or the collapse undoing an extension.
    pub fn inverse(&self) -> Move {
        match *self {
            Move::TriangleCollapse { edge, triangle } => {
                let glued: Vec<Edge> = triangle.edges().into_iter().filter(|e| *e != edge).collect();
                Move::TriangleExtension { glued: [glued[0], glued[1]], triangle }
            }
            Move::EdgeCollapse { vertex, edge } => Move::EdgeExtension { at: edge.other(vertex), new_vertex: vertex },
            Move::TriangleExtension { glued, triangle } => {
                let edge = triangle.edges().into_iter().find(|e| !glued.contains(e)).unwrap();
                Move::TriangleCollapse { edge, triangle }
            }
            Move::EdgeExtension { at, new_vertex } => {
                Move::EdgeCollapse { vertex: new_vertex, edge: Edge::new(at, new_vertex).unwrap() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{face} is not a free face of {coface}")]
    NotFree { face: Simplex, coface: Simplex },
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
}

/// Every free face with its unique coface, in canonical order of the face.
pub fn free_pairs(c: &Complex2) -> Vec<(Simplex, Simplex)> {
    let mut out = Vec::new();
    for &v in c.vertices() {
        let mut edges = c.edges_at(v);
        if let (Some(e), None) = (edges.next(), edges.next()) {
            if c.triangles_at(v).next().is_none() {
                out.push((Simplex::Vertex(v), Simplex::Edge(e)));
            }
        }
    }
    for &e in c.edges() {
        let mut ts = c.triangles_on(e);
        if let (Some(t), None) = (ts.next(), ts.next()) {
            out.push((Simplex::Edge(e), Simplex::Triangle(t)));
        }
    }
    out
}

pub fn apply_move(c: &Complex2, m: &Move) -> Result<Complex2, MoveError> {
    let mut out = c.clone();
    match *m {
        Move::TriangleCollapse { edge, triangle } => {
            let free =
                triangle.contains_edge(&edge) && c.triangles().contains(&triangle) && c.triangles_on(edge).count() == 1;
            if !free {
                return Err(MoveError::NotFree { face: Simplex::Edge(edge), coface: Simplex::Triangle(triangle) });
            }
            out.remove_simplex_unchecked(&Simplex::Triangle(triangle));
            out.remove_simplex_unchecked(&Simplex::Edge(edge));
        }
        Move::EdgeCollapse { vertex, edge } => {
            let free = edge.contains(vertex)
                && c.edges().contains(&edge)
                && c.edges_at(vertex).count() == 1
                && c.triangles_at(vertex).next().is_none();
            if !free {
                return Err(MoveError::NotFree { face: Simplex::Vertex(vertex), coface: Simplex::Edge(edge) });
            }
            out.remove_simplex_unchecked(&Simplex::Edge(edge));
            out.remove_simplex_unchecked(&Simplex::Vertex(vertex));
        }
        Move::TriangleExtension { glued, triangle } => {
            let [a, b] = glued;
            if a == b || !triangle.contains_edge(&a) || !triangle.contains_edge(&b) {
                return Err(MoveError::InvalidGluing(format!("{a} and {b} are not two edges of {triangle}")));
            }
            if !c.edges().contains(&a) || !c.edges().contains(&b) {
                return Err(MoveError::InvalidGluing(format!("{a} or {b} is not in the complex")));
            }
            let third = triangle.edges().into_iter().find(|e| *e != a && *e != b).unwrap();
            if c.edges().contains(&third) {
                return Err(MoveError::InvalidGluing(format!("third edge {third} already present")));
            }
            out.insert_edge_unchecked(third);
            out.insert_triangle_unchecked(triangle);
        }
        Move::EdgeExtension { at, new_vertex } => {
            if !c.vertices().contains(&at) {
                return Err(MoveError::InvalidGluing(format!("vertex {at} is not in the complex")));
            }
            if c.vertices().contains(&new_vertex) {
                return Err(MoveError::InvalidGluing(format!("vertex {new_vertex} already present")));
            }
            out.insert_vertex_unchecked(new_vertex);
            out.insert_edge_unchecked(Edge::new(at, new_vertex).unwrap());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub moves: Vec<Move>,
    pub terminal: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CollapseObstruction {
    /// Collapses preserve homology, and this is not the homology of a point.
    Homology { homology: HomologyResult },
    /// Every collapse sequence was explored.
    SearchExhausted { states: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CollapseOutcome {
    Certificate(CollapseCertificate),
    Obstruction(CollapseObstruction),
}

struct Indexed {
    simplices: Vec<Simplex>,
    cofaces: Vec<Vec<usize>>,
    words: usize,
}

impl Indexed {
    fn new(c: &Complex2) -> Indexed {
        let simplices: Vec<Simplex> = c.simplices().collect();
        let pos: BTreeMap<Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                cofaces[pos[&f]].push(i);
            }
        }
        Indexed { words: simplices.len().div_ceil(64), simplices, cofaces }
    }

    fn alive(state: &[u64], i: usize) -> bool {
        state[i / 64] >> (i % 64) & 1 == 1
    }

    fn free_pairs(&self, state: &[u64]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.simplices.len() {
            if !Self::alive(state, i) {
                continue;
            }
            let mut alive = self.cofaces[i].iter().filter(|&&j| Self::alive(state, j));
            if let (Some(&j), None) = (alive.next(), alive.next()) {
                out.push((i, j));
            }
        }
        out
    }

    fn to_move(&self, face: usize, coface: usize) -> Move {
        match (self.simplices[face], self.simplices[coface]) {
            (Simplex::Vertex(vertex), Simplex::Edge(edge)) => Move::EdgeCollapse { vertex, edge },
            (Simplex::Edge(edge), Simplex::Triangle(triangle)) => Move::TriangleCollapse { edge, triangle },
            _ => unreachable!("free pairs differ by one dimension"),
        }
    }
}

type Frame = (Vec<u64>, Vec<(usize, usize)>, usize);

/// Depth-first search over collapse sequences with memoized states. The
/// budget bounds the number of distinct states visited.
pub fn is_collapsible(c: &Complex2, budget: &Budget) -> TriVerdict<CollapseOutcome> {
    let mut spent = BudgetSpent::default();
    let h = complex_homology(c);
    if !h.is_acyclic() {
        return TriVerdict::no(CollapseOutcome::Obstruction(CollapseObstruction::Homology { homology: h }), spent);
    }
    let ix = Indexed::new(c);
    let mut start = vec![0u64; ix.words];
    for i in 0..ix.simplices.len() {
        start[i / 64] |= 1 << (i % 64);
    }
    let count = |s: &[u64]| s.iter().map(|w| w.count_ones()).sum::<u32>();
    let mut visited: FxHashSet<Vec<u64>> = FxHashSet::default();
    visited.insert(start.clone());
    // each frame: state, its free pairs, next pair to try
    let mut stack: Vec<Frame> = Vec::new();
    let pairs = ix.free_pairs(&start);
    stack.push((start, pairs, 0));
    while let Some((state, pairs, next)) = stack.last_mut() {
        if count(state) == 1 {
            let terminal = match (0..ix.simplices.len()).find(|&i| Indexed::alive(state, i)).map(|i| ix.simplices[i]) {
                Some(Simplex::Vertex(v)) => v,
                _ => unreachable!("a single surviving simplex is a vertex"),
            };
            spent.collapse_nodes = visited.len();
            let moves = stack
                .iter()
                .take(stack.len() - 1)
                .map(|(_, pairs, next)| {
                    let (f, cf) = pairs[*next - 1];
                    ix.to_move(f, cf)
                })
                .collect();
            return TriVerdict::yes(CollapseOutcome::Certificate(CollapseCertificate { moves, terminal }), spent);
        }
        if *next >= pairs.len() {
            stack.pop();
            continue;
        }
        let (f, cf) = pairs[*next];
        *next += 1;
        let mut child = state.clone();
        child[f / 64] &= !(1 << (f % 64));
        child[cf / 64] &= !(1 << (cf % 64));
        if visited.contains(&child) {
            continue;
        }
        if visited.len() >= budget.collapse_nodes {
            spent.collapse_nodes = visited.len();
            return TriVerdict::unknown(format!("collapse search stopped after {} states", visited.len()), spent);
        }
        visited.insert(child.clone());
        let child_pairs = ix.free_pairs(&child);
        stack.push((child, child_pairs, 0));
    }
    spent.collapse_nodes = visited.len();
    TriVerdict::no(CollapseOutcome::Obstruction(CollapseObstruction::SearchExhausted { states: visited.len() }), spent)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("certificate rejected{}: {reason}", .move_index.map(|i| format!(" at move {i}")).unwrap_or_default())]
pub struct CertificateFailure {
    pub move_index: Option<usize>,
    pub reason: String,
}

/// Replays every move; the result must be exactly the terminal vertex.
pub fn verify_certificate(c: &Complex2, cert: &CollapseCertificate) -> Result<(), CertificateFailure> {
    let mut cur = c.clone();
    for (i, m) in cert.moves.iter().enumerate() {
        if matches!(m, Move::TriangleExtension { .. } | Move::EdgeExtension { .. }) {
            return Err(CertificateFailure { move_index: Some(i), reason: "extensions are not collapses".into() });
        }
        cur = apply_move(&cur, m).map_err(|e| CertificateFailure { move_index: Some(i), reason: e.to_string() })?;
    }
    let point = cur.num_simplices() == 1 && cur.vertices().contains(&cert.terminal);
    if !point {
        return Err(CertificateFailure {
            move_index: None,
            reason: format!("replay ends with {} simplices, not the vertex {}", cur.num_simplices(), cert.terminal),
        });
    }
    Ok(())
}

pub fn certificate_is_valid(c: &Complex2, cert: &CollapseCertificate) -> bool {
    verify_certificate(c, cert).is_ok()
}
