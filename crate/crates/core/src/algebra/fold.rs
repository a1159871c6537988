//! Stallings foldings of subgroups of free groups.

use std::collections::{BTreeMap, VecDeque};

use super::group::{Letter, Word};

/// Folded labelled graph with basepoint 0. Arcs are `(source, generator,
/// target)`; no two arcs with the same label share a source or a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGraph {
    nodes: usize,
    arcs: Vec<(usize, usize, usize)>,
    step: Vec<BTreeMap<Letter, usize>>,
}

impl FoldedGraph {
    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[(usize, usize, usize)] {
        &self.arcs
    }

    /// Rank of the represented subgroup.
    pub fn rank(&self) -> usize {
        self.arcs.len() + 1 - self.nodes
    }

    pub fn is_folded(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.arcs.iter().all(|&(s, g, t)| seen.insert((s, Letter::new(g))) && seen.insert((t, Letter::new(g).inv())))
    }

    /// Whether `w` reads a closed path at the basepoint.
    pub fn membership(&self, w: &Word) -> bool {
        let mut c = 0;
        for l in w.letters() {
            match self.step[c].get(l) {
                Some(&d) => c = d,
                None => return false,
            }
        }
        c == 0
    }
}

#[derive(Clone, Debug)]
pub struct FoldOutcome {
    pub graph: FoldedGraph,
    /// A nontrivial reduced word in the input indices `x_0, x_1, ...` whose
    /// image under `x_i -> words[i]` is trivial; `None` iff that map is
    /// injective.
    pub kernel_element: Option<Word>,
}

impl FoldOutcome {
    pub fn is_injective(&self) -> bool {
        self.kernel_element.is_none()
    }
}

#[derive(Clone, Debug)]
struct Arc {
    src: usize,
    generator: usize,
    dst: usize,
    source_word: Word,
    alive: bool,
}

pub fn stallings_fold(words: &[Word]) -> FoldedGraph {
    fold_images(words).graph
}

/// Folds the petal graph of `words` while tracking, for every arc, a word
/// in the abstract generators `x_i` it stands for. Folding two distinct
/// arcs with the same label and the same endpoints exposes a kernel
/// element of `F(x_i) -> F`.
pub fn fold_images(words: &[Word]) -> FoldOutcome {
    let mut arcs: Vec<Arc> = Vec::new();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new()];
    let mut kernel: Option<Word> = None;

    for (i, w) in words.iter().enumerate() {
        if w.is_empty() {
            kernel.get_or_insert_with(|| Word::generator(i));
            continue;
        }
        let mut cur = 0;
        let n = w.len();
        for (k, &l) in w.letters().iter().enumerate() {
            let next = if k + 1 == n {
                0
            } else {
                incident.push(Vec::new());
                incident.len() - 1
            };
            let source_word = if k == 0 { Word::generator(i) } else { Word::empty() };
            let (src, dst, sw) = if l.inverse { (next, cur, source_word.inverse()) } else { (cur, next, source_word) };
            let id = arcs.len();
            arcs.push(Arc { src, generator: l.generator, dst, source_word: sw, alive: true });
            incident[src].push(id);
            if dst != src {
                incident[dst].push(id);
            }
            cur = next;
        }
    }

    let letter_at = |a: &Arc, u: usize| -> Vec<(Letter, usize, Word)> {
        let mut v = Vec::new();
        if a.src == u {
            v.push((Letter::new(a.generator), a.dst, a.source_word.clone()));
        }
        if a.dst == u {
            v.push((Letter::new(a.generator).inv(), a.src, a.source_word.inverse()));
        }
        v
    };

    let mut alive_node = vec![true; incident.len()];
    let mut work: VecDeque<usize> = (0..incident.len()).collect();
    while let Some(u) = work.pop_front() {
        if !alive_node[u] {
            continue;
        }
        // find two arcs leaving u with the same letter
        let mut by_letter: BTreeMap<Letter, (usize, usize, Word)> = BTreeMap::new();
        let mut clash = None;
        'scan: for &id in &incident[u] {
            for (l, end, s) in letter_at(&arcs[id], u) {
                if let Some((id1, end1, s1)) = by_letter.get(&l) {
                    if *id1 != id {
                        clash = Some((*id1, *end1, s1.clone(), id, end, s));
                        break 'scan;
                    }
                } else {
                    by_letter.insert(l, (id, end, s));
                }
            }
        }
        let Some((_, mut v1, mut s1, id2, mut v2, mut s2)) = clash else { continue };

        if v1 == v2 {
            if kernel.is_none() {
                let p = path_word(&arcs, &incident, &alive_node, u);
                kernel = Some(p.concat(&s1).concat(&s2.inverse()).concat(&p.inverse()));
            }
            arcs[id2].alive = false;
            incident[arcs[id2].src].retain(|&a| a != id2);
            incident[arcs[id2].dst].retain(|&a| a != id2);
            work.push_back(u);
            continue;
        }

        if v2 == 0 {
            std::mem::swap(&mut v1, &mut v2);
            std::mem::swap(&mut s1, &mut s2);
        }
        // v2 is absorbed into v1; arc id2 is identified with arc id1
        arcs[id2].alive = false;
        incident[arcs[id2].src].retain(|&a| a != id2);
        incident[arcs[id2].dst].retain(|&a| a != id2);
        let track = kernel.is_none();
        let moved = std::mem::take(&mut incident[v2]);
        for &id in &moved {
            let a = &mut arcs[id];
            if track {
                let mut s = a.source_word.clone();
                if a.src == v2 {
                    s = s1.inverse().concat(&s2).concat(&s);
                }
                if a.dst == v2 {
                    s = s.concat(&s2.inverse()).concat(&s1);
                }
                a.source_word = s;
            }
            if a.src == v2 {
                a.src = v1;
            }
            if a.dst == v2 {
                a.dst = v1;
            }
            if !incident[v1].contains(&id) {
                incident[v1].push(id);
            }
        }
        alive_node[v2] = false;
        work.push_back(v1);
        work.push_back(u);
        for &id in &moved {
            let a = &arcs[id];
            work.push_back(if a.src == v1 { a.dst } else { a.src });
        }
    }

    // compact: basepoint first, then nodes in breadth-first order
    let mut order = vec![usize::MAX; incident.len()];
    let mut next = 0;
    let mut queue = VecDeque::from([0]);
    order[0] = 0;
    next += 1;
    let mut live_arcs: Vec<&Arc> = arcs.iter().filter(|a| a.alive).collect();
    live_arcs.sort_by_key(|a| (a.src, a.generator, a.dst));
    while let Some(u) = queue.pop_front() {
        let mut nbrs: Vec<usize> =
            incident[u].iter().map(|&id| if arcs[id].src == u { arcs[id].dst } else { arcs[id].src }).collect();
        nbrs.sort();
        for w in nbrs {
            if order[w] == usize::MAX {
                order[w] = next;
                next += 1;
                queue.push_back(w);
            }
        }
    }
    let mut out_arcs: Vec<(usize, usize, usize)> =
        live_arcs.iter().map(|a| (order[a.src], a.generator, order[a.dst])).collect();
    out_arcs.sort();
    let mut step = vec![BTreeMap::new(); next];
    for &(s, g, t) in &out_arcs {
        step[s].insert(Letter::new(g), t);
        step[t].insert(Letter::new(g).inv(), s);
    }
    FoldOutcome { graph: FoldedGraph { nodes: next, arcs: out_arcs, step }, kernel_element: kernel }
}

/// Source word read along a breadth-first path from the basepoint to `u`.
fn path_word(arcs: &[Arc], incident: &[Vec<usize>], alive: &[bool], u: usize) -> Word {
    let mut prev: BTreeMap<usize, (usize, Word)> = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    let mut seen = vec![false; incident.len()];
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &id in &incident[x] {
            let a = &arcs[id];
            let (y, s) = if a.src == x { (a.dst, a.source_word.clone()) } else { (a.src, a.source_word.inverse()) };
            if alive[y] && !seen[y] {
                seen[y] = true;
                prev.insert(y, (x, s));
                queue.push_back(y);
            }
        }
    }
    let mut pieces = Vec::new();
    let mut cur = u;
    while cur != 0 {
        let (p, s) = prev[&cur].clone();
        pieces.push(s);
        cur = p;
    }
    pieces.iter().rev().fold(Word::empty(), |acc, s| acc.concat(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> Word {
        Word::from_signed(s)
    }

    #[test]
    fn squares_and_b() {
        let g = stallings_fold(&[w(&[1, 1]), w(&[2])]);
        assert!(g.is_folded());
        assert!(g.membership(&w(&[1, 1])));
        assert!(!g.membership(&w(&[1])));
        assert!(g.membership(&w(&[2, 1, 1, -2])));
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn inverses_and_empty() {
        let g = stallings_fold(&[w(&[1])]);
        assert!(g.membership(&w(&[-1])));
        let g = stallings_fold(&[]);
        assert!(g.membership(&Word::empty()));
        assert!(!g.membership(&w(&[1])));
        assert_eq!(g.rank(), 0);
    }

    #[test]
    fn dependent_generators_give_kernel() {
        // x0 -> a, x1 -> a^2: kernel contains x0^2 x1^-1
        let words = [w(&[1]), w(&[1, 1])];
        let out = fold_images(&words);
        assert_eq!(out.graph.rank(), 1);
        let k = out.kernel_element.expect("map is not injective");
        assert!(!k.is_empty());
        assert!(k.substitute(&words).is_empty());
    }

    #[test]
    fn independent_generators_have_no_kernel() {
        let words = [w(&[1, 2, -1]), w(&[2, 2]), w(&[1, 1, 1])];
        let out = fold_images(&words);
        assert!(out.is_injective());
        assert_eq!(out.graph.rank(), 3);
    }

    #[test]
    fn commutator_kernel() {
        // x0 -> ab, x1 -> b, x2 -> a
        let words = [w(&[1, 2]), w(&[2]), w(&[1])];
        let out = fold_images(&words);
        let k = out.kernel_element.unwrap();
        assert!(k.substitute(&words).is_empty());
        assert!(!k.is_empty());
    }

    #[test]
    fn trivial_image_is_kernel() {
        let out = fold_images(&[w(&[1]), Word::empty()]);
        assert_eq!(out.kernel_element, Some(Word::generator(1)));
    }
}
