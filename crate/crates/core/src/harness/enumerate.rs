//! Bitmask indexing of small complexes and enumeration of their
//! face-closed subcomplexes.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::group::Pi1Model;
use crate::algebra::injectivity::component_injectivity;
use crate::algebra::verdict::Budget;
use crate::complex::{Complex2, Simplex, Subcomplex, VertexId};

pub type Mask = u128;

/// Largest number of simplices a mask can index.
pub const MAX_INDEXED: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("complex has {0} simplices; at most {MAX_INDEXED} can be indexed")]
    TooLarge(usize),
}

/// Simplices of a complex in canonical order (vertices, edges, triangles),
/// with face masks for closure tests.
#[derive(Clone, Debug)]
pub struct SimplexIndex {
    parent: Arc<Complex2>,
    simplices: Vec<Simplex>,
    faces: Vec<Mask>,
    /// For edges, the indices of their two vertices.
    ends: Vec<Option<(usize, usize)>>,
    vertex_count: usize,
}

impl SimplexIndex {
    pub fn new(parent: &Arc<Complex2>) -> Result<SimplexIndex, IndexError> {
        let simplices: Vec<Simplex> = parent.simplices().collect();
        if simplices.len() > MAX_INDEXED {
            return Err(IndexError::TooLarge(simplices.len()));
        }
        let pos = |s: &Simplex| simplices.binary_search(s).unwrap();
        let mut faces = vec![0 as Mask; simplices.len()];
        let mut ends = vec![None; simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                let j = pos(&f);
                faces[i] |= 1 << j;
                for g in f.facets() {
                    faces[i] |= 1 << pos(&g);
                }
            }
            if let Simplex::Edge(e) = s {
                ends[i] = Some((pos(&Simplex::Vertex(e.lo())), pos(&Simplex::Vertex(e.hi()))));
            }
        }
        let vertex_count = parent.vertices().len();
        Ok(SimplexIndex { parent: parent.clone(), simplices, faces, ends, vertex_count })
    }

    pub fn parent(&self) -> &Arc<Complex2> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn full(&self) -> Mask {
        if self.len() == 128 {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    pub fn is_closed(&self, m: Mask) -> bool {
        bits(m).all(|i| self.faces[i] & !m == 0)
    }

    pub fn mask_of(&self, c: &Complex2) -> Option<Mask> {
        c.simplices().try_fold(0 as Mask, |m, s| self.simplices.binary_search(&s).ok().map(|i| m | 1 << i))
    }

    pub fn complex(&self, m: Mask) -> Complex2 {
        Complex2::generated_by(bits(m).map(|i| self.simplices[i]))
    }

    pub fn subcomplex(&self, m: Mask) -> Subcomplex {
        Subcomplex::from_cells(&self.parent, self.complex(m)).expect("mask lies in the parent")
    }

    /// Least vertex of the mask (vertices are indexed first, in id order).
    pub fn basepoint(&self, m: Mask) -> Option<VertexId> {
        let low = (m & self.vertex_mask()).trailing_zeros() as usize;
        match self.simplices.get(low) {
            Some(Simplex::Vertex(v)) if low < self.vertex_count => Some(*v),
            _ => None,
        }
    }

    /// Bits of the triangles.
    pub fn triangle_mask(&self) -> Mask {
        self.simplices
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Simplex::Triangle(_)))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn vertex_mask(&self) -> Mask {
        if self.vertex_count == 128 {
            Mask::MAX
        } else {
            (1 << self.vertex_count) - 1
        }
    }

    /// Connected components of a closed mask, ordered by least vertex.
    pub fn components(&self, m: Mask) -> Vec<Mask> {
        let vm = m & self.vertex_mask();
        if vm == 0 {
            return Vec::new();
        }
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for i in bits(m) {
            if let Some((a, b)) = self.ends[i] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut comps: Vec<(usize, Mask)> = Vec::new();
        for i in bits(m) {
            let v = if i < self.vertex_count { i } else { self.first_vertex(i) };
            let r = find(&mut parent, v);
            match comps.iter_mut().find(|(root, _)| *root == r) {
                Some((_, cm)) => *cm |= 1 << i,
                None => comps.push((r, 1 << i)),
            }
        }
        comps.sort_by_key(|(r, _)| *r);
        comps.into_iter().map(|(_, cm)| cm).collect()
    }

    pub fn is_connected(&self, m: Mask) -> bool {
        let vm = m & self.vertex_mask();
        vm != 0 && self.components(m).len() == 1
    }

    fn first_vertex(&self, i: usize) -> usize {
        (self.faces[i] & self.vertex_mask()).trailing_zeros() as usize
    }

    /// All nonempty closed masks with at most `cap` simplices, optionally
    /// only connected ones. Simplices are decided in index order, so each
    /// subcomplex appears once and the order is deterministic.
    pub fn enumerate(&self, cap: usize, connected_only: bool) -> Vec<Mask> {
        let mut out = Vec::new();
        if cap == 0 {
            return out;
        }
        self.extend(0, 0, 0, cap, connected_only, &mut out);
        out
    }

    fn extend(&self, i: usize, m: Mask, size: usize, cap: usize, connected: bool, out: &mut Vec<Mask>) {
        if i == self.len() {
            if m != 0 && (!connected || self.is_connected(m)) {
                out.push(m);
            }
            return;
        }
        self.extend(i + 1, m, size, cap, connected, out);
        if size < cap && self.faces[i] & !m == 0 {
            self.extend(i + 1, m | 1 << i, size + 1, cap, connected, out);
        }
    }
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubcomplexFilter {
    pub connected: bool,
    /// Keep only subcomplexes whose every component is pi_1-injective in the
    /// parent within this budget.
    pub pi1_injective: Option<Budget>,
}

impl SubcomplexFilter {
    pub const ANY: SubcomplexFilter = SubcomplexFilter { connected: false, pi1_injective: None };
    pub const CONNECTED: SubcomplexFilter = SubcomplexFilter { connected: true, pi1_injective: None };
}

/// Nonempty face-closed subcomplexes with at most `cap` simplices passing
/// the filter, in canonical order.
pub fn enumerate_subcomplexes(
    parent: &Arc<Complex2>,
    cap: usize,
    filter: &SubcomplexFilter,
) -> Result<impl Iterator<Item = Subcomplex>, IndexError> {
    let ix = SimplexIndex::new(parent)?;
    let masks = ix.enumerate(cap, filter.connected);
    let filter = *filter;
    Ok(masks.into_iter().filter_map(move |m| {
        if let Some(budget) = filter.pi1_injective {
            let all_yes = ix.components(m).into_iter().all(|c| {
                let b = ix.basepoint(c).unwrap();
                let src = Pi1Model::new(&ix.complex(c), b, budget.tietze_moves).unwrap();
                let tgt = Pi1Model::new(ix.parent(), b, budget.tietze_moves).unwrap();
                component_injectivity(&src, &tgt, &budget).is_yes()
            });
            if !all_yes {
                return None;
            }
        }
        Some(ix.subcomplex(m))
    }))
}
