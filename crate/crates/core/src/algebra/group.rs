//! Words, finite presentations, spanning-tree presentations of pi_1 and
//! Tietze simplification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::chain::exponent_matrix;
use super::snf::{smith_normal_form, SmithForm};
use crate::complex::{Complex2, Edge, Subcomplex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Letter {
        Letter { generator, inverse: false }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A freely reduced word in numbered generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// `+k` is generator `k - 1`, `-k` its inverse; zero is not allowed.
    pub fn from_signed(signed: &[i32]) -> Word {
        Word::from_letters(signed.iter().map(|&s| {
            assert!(s != 0, "zero is not a generator");
            Letter { generator: s.unsigned_abs() as usize - 1, inverse: s < 0 }
        }))
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![Letter::new(g)])
    }

    /// Appends with free cancellation.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    /// Strips conjugating prefixes: the result is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = 0;
        let mut e = self.0.len();
        while e >= s + 2 && self.0[s] == self.0[e - 1].inv() {
            s += 1;
            e -= 1;
        }
        Word(self.0[s..e].to_vec())
    }

    /// Rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.generator == g).count()
    }

    pub fn mentions(&self, g: usize) -> bool {
        self.0.iter().any(|l| l.generator == g)
    }

    /// Replaces each generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut w = Word::empty();
        for l in &self.0 {
            let img = &images[l.generator];
            if l.inverse {
                for &x in img.0.iter().rev() {
                    w.push(x.inv());
                }
            } else {
                for &x in &img.0 {
                    w.push(x);
                }
            }
        }
        w
    }

    /// Least rotation of the word or its inverse; identifies relators that
    /// generate the same normal closure trivially.
    fn cyclic_canonical(&self) -> Word {
        let c = self.cyclically_reduced();
        let inv = c.inverse();
        (0..c.len().max(1))
            .flat_map(|k| if c.is_empty() { vec![c.clone()] } else { vec![c.rotated(k), inv.rotated(k)] })
            .min()
            .unwrap()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| {
                let n = names.get(l.generator).cloned().unwrap_or_else(|| format!("x{}", l.generator));
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("relator {relator} mentions undeclared generator {generator}")]
    UndeclaredGenerator { relator: usize, generator: usize },
    #[error("vertex {0} does not lie in the complex")]
    EmptyComponent(VertexId),
}

/// Provenance of a spanning-tree presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningTreeOrigin {
    pub basepoint: VertexId,
    pub tree_edges: Vec<Edge>,
    pub generator_edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    origin: Option<SpanningTreeOrigin>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<GroupPresentation, GroupError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| l.generator >= generators.len()) {
                return Err(GroupError::UndeclaredGenerator { relator: i, generator: l.generator });
            }
        }
        Ok(GroupPresentation { generators, relators, origin: None })
    }

    /// Generators named `a, b, c, ...` (then `x26, ...`).
    pub fn with_letters(n: usize, relators: Vec<Word>) -> Result<GroupPresentation, GroupError> {
        let names =
            (0..n).map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") }).collect();
        GroupPresentation::new(names, relators)
    }

    pub fn trivial() -> GroupPresentation {
        GroupPresentation { generators: Vec::new(), relators: Vec::new(), origin: None }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn origin(&self) -> Option<&SpanningTreeOrigin> {
        self.origin.as_ref()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// No generators at all: the presentation `< | >`.
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn relator_matrix_snf(&self) -> SmithForm {
        smith_normal_form(&exponent_matrix(&self.relators, self.generators.len()))
    }

    pub fn abelianization(&self) -> Abelianization {
        let snf = self.relator_matrix_snf();
        let factors = snf.invariant_factors();
        Abelianization {
            free_rank: self.generators.len() - factors.len(),
            torsion: factors.into_iter().filter(|d| *d > BigInt::one()).collect(),
        }
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.generators)
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.display_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// `Z^free_rank` plus cyclic torsion factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::io::serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// One logged Tietze transformation. Generator indices refer to the input
/// presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    DropRelator { relator: Word },
    Eliminate { generator: usize, relator: Word, value: Word },
    Shorten { before: Word, after: Word, using: Word },
}

#[derive(Clone, Debug)]
pub struct Simplification {
    pub presentation: GroupPresentation,
    /// For each surviving generator, its index in the input presentation.
    pub kept: Vec<usize>,
    /// For each input generator, its value as a word in surviving generators.
    pub substitution: Vec<Word>,
    pub moves: Vec<TietzeMove>,
    pub exhausted: bool,
}

impl Simplification {
    pub fn moves_used(&self) -> usize {
        self.moves.len()
    }

    pub fn map_word(&self, w: &Word) -> Word {
        w.substitute(&self.substitution)
    }
}

pub fn tietze_simplify(p: &GroupPresentation, max_moves: usize) -> GroupPresentation {
    tietze_simplify_tracked(p, max_moves).presentation
}

/// Free reduction, duplicate removal, generator elimination through relators
/// in which a generator occurs once, and shortening of a relator by a long
/// subword of another. Never performs more than `max_moves` moves.
pub fn tietze_simplify_tracked(p: &GroupPresentation, max_moves: usize) -> Simplification {
    let n = p.generators.len();
    let mut alive = vec![true; n];
    let mut subst: Vec<Word> = (0..n).map(Word::generator).collect();
    let mut rels: Vec<Word> = p.relators.iter().map(|r| r.cyclically_reduced()).collect();
    let mut moves = Vec::new();
    let mut exhausted = false;

    loop {
        // drop trivial and repeated relators
        let mut seen = BTreeSet::new();
        let mut kept_rels = Vec::with_capacity(rels.len());
        let mut dropped = Vec::new();
        for r in rels.drain(..) {
            if r.is_empty() || !seen.insert(r.cyclic_canonical()) {
                dropped.push(r);
            } else {
                kept_rels.push(r);
            }
        }
        rels = kept_rels;
        for r in dropped {
            if moves.len() >= max_moves {
                exhausted = true;
                break;
            }
            moves.push(TietzeMove::DropRelator { relator: r });
        }
        if exhausted {
            break;
        }
        if moves.len() >= max_moves {
            exhausted = !rels.is_empty();
            break;
        }

        if let Some((ri, pos)) = find_elimination(&rels) {
            let r = rels.remove(ri);
            let rot = r.rotated(pos);
            let x = rot.letters()[0];
            let rest = Word(rot.letters()[1..].to_vec());
            let value = if x.inverse { rest } else { rest.inverse() };
            let g = x.generator;
            let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
            images[g] = value.clone();
            for other in rels.iter_mut() {
                *other = other.substitute(&images).cyclically_reduced();
            }
            for s in subst.iter_mut() {
                if s.mentions(g) {
                    *s = s.substitute(&images);
                }
            }
            alive[g] = false;
            moves.push(TietzeMove::Eliminate { generator: g, relator: r, value });
            continue;
        }

        if let Some((si, after, using)) = find_shortening(&rels) {
            let before = std::mem::replace(&mut rels[si], after.clone());
            moves.push(TietzeMove::Shorten { before, after, using });
            continue;
        }
        break;
    }

    let kept: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    let mut renumber = vec![usize::MAX; n];
    for (i, &g) in kept.iter().enumerate() {
        renumber[g] = i;
    }
    let relabel = |w: &Word| {
        Word::from_letters(w.letters().iter().map(|l| Letter { generator: renumber[l.generator], inverse: l.inverse }))
    };
    let presentation = GroupPresentation {
        generators: kept.iter().map(|&g| p.generators[g].clone()).collect(),
        relators: rels.iter().map(relabel).collect(),
        origin: None,
    };
    let substitution = subst.iter().map(relabel).collect();
    Simplification { presentation, kept, substitution, moves, exhausted }
}

/// Shortest relator with a generator occurring exactly once; returns the
/// relator index and the position of that letter.
fn find_elimination(rels: &[Word]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, r) in rels.iter().enumerate() {
        if best.is_some_and(|(len, _, _)| r.len() >= len) {
            continue;
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for l in r.letters() {
            *counts.entry(l.generator).or_default() += 1;
        }
        if let Some(pos) = r.letters().iter().position(|l| counts[&l.generator] == 1) {
            best = Some((r.len(), i, pos));
        }
    }
    best.map(|(_, i, pos)| (i, pos))
}

/// A relator `s` containing more than half of a cyclic permutation of
/// another relator `r` (or its inverse) gets that subword replaced by the
/// inverse of the remainder, which is strictly shorter.
fn find_shortening(rels: &[Word]) -> Option<(usize, Word, Word)> {
    for (ri, r) in rels.iter().enumerate() {
        let len = r.len();
        if len == 0 {
            continue;
        }
        let inv = r.inverse();
        for (si, s) in rels.iter().enumerate() {
            if si == ri || s.len() * 2 <= len {
                continue;
            }
            for base in [r, &inv] {
                for k in 0..len {
                    let rot = base.rotated(k);
                    for plen in (len / 2 + 1..=len.min(s.len())).rev() {
                        let pre = &rot.letters()[..plen];
                        if let Some(at) = s.letters().windows(plen).position(|w| w == pre) {
                            let replacement = Word(rot.letters()[plen..].to_vec()).inverse();
                            let mut letters = s.letters()[..at].to_vec();
                            letters.extend_from_slice(replacement.letters());
                            letters.extend_from_slice(&s.letters()[at + plen..]);
                            let after = Word::from_letters(letters).cyclically_reduced();
                            if after.len() < s.len() {
                                return Some((si, after, r.clone()));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Breadth-first spanning tree of the component of a basepoint, visiting
/// neighbours in increasing id order.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub basepoint: VertexId,
    parent: BTreeMap<VertexId, VertexId>,
    order: Vec<VertexId>,
}

impl SpanningTree {
    pub fn new(c: &Complex2, basepoint: VertexId) -> Option<SpanningTree> {
        if !c.vertices().contains(&basepoint) {
            return None;
        }
        let adj = c.adjacency();
        let mut parent = BTreeMap::new();
        let mut order = vec![basepoint];
        let mut seen = BTreeSet::from([basepoint]);
        let mut queue = VecDeque::from([basepoint]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w) {
                    parent.insert(w, u);
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        Some(SpanningTree { basepoint, parent, order })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.order
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v == self.basepoint || self.parent.contains_key(&v)
    }

    pub fn is_tree_edge(&self, e: &Edge) -> bool {
        self.parent.get(&e.lo()) == Some(&e.hi()) || self.parent.get(&e.hi()) == Some(&e.lo())
    }

    pub fn tree_edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.parent.iter().map(|(&c, &p)| Edge::new(c, p).unwrap()).collect();
        v.sort();
        v
    }

    /// `v, parent(v), ..., basepoint`
    pub fn path_to_base(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(&p) = self.parent.get(&cur) {
            path.push(p);
            cur = p;
        }
        path
    }
}

/// The component of a basepoint with its spanning-tree presentation of
/// pi_1 and a simplified form, plus the maps needed to move loops between
/// edge paths and words.
#[derive(Clone, Debug)]
pub struct Pi1Model {
    component: Complex2,
    tree: SpanningTree,
    generator_edges: Vec<Edge>,
    generator_of: BTreeMap<Edge, usize>,
    presentation: GroupPresentation,
    simplified: Simplification,
}

impl Pi1Model {
    pub fn new(c: &Complex2, basepoint: VertexId, max_moves: usize) -> Result<Pi1Model, GroupError> {
        let tree = SpanningTree::new(c, basepoint).ok_or(GroupError::EmptyComponent(basepoint))?;
        let component = c.restrict_to_vertices(|v| tree.contains(v));
        let generator_edges: Vec<Edge> = component.edges().iter().copied().filter(|e| !tree.is_tree_edge(e)).collect();
        let generator_of: BTreeMap<Edge, usize> = generator_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let edge_letter = |a: VertexId, b: VertexId| -> Option<Letter> {
            let e = Edge::new(a, b).unwrap();
            generator_of.get(&e).map(|&g| Letter { generator: g, inverse: a > b })
        };
        let relators = component
            .triangles()
            .iter()
            .map(|t| {
                let [a, b, d] = t.vertices();
                Word::from_letters([edge_letter(a, b), edge_letter(b, d), edge_letter(d, a)].into_iter().flatten())
            })
            .collect();
        let presentation = GroupPresentation {
            generators: generator_edges.iter().map(|e| format!("e{}_{}", e.lo(), e.hi())).collect(),
            relators,
            origin: Some(SpanningTreeOrigin {
                basepoint,
                tree_edges: tree.tree_edges(),
                generator_edges: generator_edges.clone(),
            }),
        };
        let simplified = tietze_simplify_tracked(&presentation, max_moves);
        Ok(Pi1Model { component, tree, generator_edges, generator_of, presentation, simplified })
    }

    pub fn basepoint(&self) -> VertexId {
        self.tree.basepoint
    }

    pub fn component(&self) -> &Complex2 {
        &self.component
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn simplification(&self) -> &Simplification {
        &self.simplified
    }

    pub fn simplified(&self) -> &GroupPresentation {
        &self.simplified.presentation
    }

    pub fn is_trivial(&self) -> bool {
        self.simplified.presentation.is_empty()
    }

    /// The simplified presentation has no relators left.
    pub fn is_free(&self) -> bool {
        self.simplified.presentation.relators.is_empty()
    }

    pub fn is_graph(&self) -> bool {
        self.component.triangles().is_empty()
    }

    /// Word in the spanning-tree generators read along a closed walk.
    /// Consecutive walk vertices must span edges of the component.
    pub fn loop_word(&self, walk: &[VertexId]) -> Word {
        let mut w = Word::empty();
        for pair in walk.windows(2) {
            let e = Edge::new(pair[0], pair[1]).expect("walk repeats a vertex");
            if let Some(&g) = self.generator_of.get(&e) {
                w.push(Letter { generator: g, inverse: pair[0] > pair[1] });
            }
        }
        w
    }

    pub fn walk_lies_in_component(&self, walk: &[VertexId]) -> bool {
        walk.iter().all(|v| self.component.vertices().contains(v))
            && walk.windows(2).all(|p| Edge::new(p[0], p[1]).is_some_and(|e| self.component.edges().contains(&e)))
    }

    /// Closed walk at the basepoint through the non-tree edge of generator `g`.
    pub fn generator_loop(&self, g: usize) -> Vec<VertexId> {
        let e = self.generator_edges[g];
        let mut walk = self.tree.path_to_base(e.lo());
        walk.reverse();
        walk.extend(self.tree.path_to_base(e.hi()));
        walk
    }

    /// Closed walk representing a word in the simplified generators.
    pub fn walk_of_simplified_word(&self, w: &Word) -> Vec<VertexId> {
        let mut walk = vec![self.basepoint()];
        for l in w.letters() {
            let mut piece = self.generator_loop(self.simplified.kept[l.generator]);
            if l.inverse {
                piece.reverse();
            }
            walk.extend_from_slice(&piece[1..]);
        }
        reduce_walk(walk)
    }

    pub fn simplify_word(&self, w: &Word) -> Word {
        self.simplified.map_word(w)
    }
}

/// Removes backtracks `x y x -> x` from a closed walk.
pub fn reduce_walk(walk: Vec<VertexId>) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(walk.len());
    for v in walk {
        if out.len() >= 2 && out[out.len() - 2] == v {
            out.pop();
        } else if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Spanning-tree presentation of pi_1 of the component of `basepoint`:
/// one generator per non-tree edge, one relator per triangle.
pub fn fundamental_group(s: &Subcomplex, basepoint: VertexId) -> Result<GroupPresentation, GroupError> {
    Ok(Pi1Model::new(s.cells(), basepoint, 0)?.presentation)
}
