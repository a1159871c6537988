//! Simplicial chain complex and integral homology.
//!
//! Orientation convention: simplices are oriented by increasing vertex id.
//! The triangle `(v0 < v1 < v2)` has boundary `+[v1 v2] - [v0 v2] + [v0 v1]`
//! and the edge `(v0 < v1)` has boundary `v1 - v0`. Matrices store one row per
//! simplex, so `d2` is triangles x edges and `d1` is edges x vertices, and the
//! composite boundary is the product `d2 * d1`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::snf::{invariant_factors, IntMatrix};
use crate::complex::{Complex2, Edge, Subcomplex, Triangle, VertexId};

pub const ORIENTATION_CONVENTION: &str =
    "sorted vertex order; d(v0 v1 v2) = [v1 v2] - [v0 v2] + [v0 v1]; d(v0 v1) = v1 - v0";

#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Triangle>,
    /// triangles x edges
    pub d2: IntMatrix,
    /// edges x vertices
    pub d1: IntMatrix,
    pub convention: &'static str,
}

impl ChainComplexData {
    /// `d2 * d1`, which vanishes for any simplicial complex.
    pub fn composite(&self) -> IntMatrix {
        self.d2.mul(&self.d1)
    }
}

pub fn boundary_matrices(s: &Subcomplex) -> ChainComplexData {
    chain_complex(s.cells())
}

pub fn chain_complex(c: &Complex2) -> ChainComplexData {
    let vertices: Vec<VertexId> = c.vertices().iter().copied().collect();
    let edges: Vec<Edge> = c.edges().iter().copied().collect();
    let triangles: Vec<Triangle> = c.triangles().iter().copied().collect();
    let vpos = |v: VertexId| vertices.binary_search(&v).unwrap();
    let epos = |e: Edge| edges.binary_search(&e).unwrap();

    let mut d1 = IntMatrix::zeros(edges.len(), vertices.len());
    for (i, e) in edges.iter().enumerate() {
        d1[(i, vpos(e.lo()))] = -BigInt::one();
        d1[(i, vpos(e.hi()))] = BigInt::one();
    }
    let mut d2 = IntMatrix::zeros(triangles.len(), edges.len());
    for (i, t) in triangles.iter().enumerate() {
        let [e01, e02, e12] = t.edges();
        d2[(i, epos(e12))] = BigInt::one();
        d2[(i, epos(e02))] = -BigInt::one();
        d2[(i, epos(e01))] = BigInt::one();
    }
    ChainComplexData { vertices, edges, triangles, d2, d1, convention: ORIENTATION_CONVENTION }
}

/// Betti numbers and torsion coefficients of H0, H1 (H2 of a 2-complex is free).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub betti: [usize; 3],
    #[serde(serialize_with = "crate::io::serialize_bigints")]
    pub torsion_h0: Vec<BigInt>,
    #[serde(serialize_with = "crate::io::serialize_bigints")]
    pub torsion_h1: Vec<BigInt>,
}

impl HomologyResult {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_h0.is_empty() && self.torsion_h1.is_empty()
    }

    /// Homology of a point.
    pub fn is_acyclic(&self) -> bool {
        self.betti == [1, 0, 0] && self.is_torsion_free()
    }
}

pub fn homology(s: &Subcomplex) -> HomologyResult {
    complex_homology(s.cells())
}

pub fn complex_homology(c: &Complex2) -> HomologyResult {
    let ch = chain_complex(c);
    let f1 = invariant_factors(&ch.d1);
    let f2 = invariant_factors(&ch.d2);
    let (r1, r2) = (f1.len(), f2.len());
    let nv = ch.vertices.len();
    let ne = ch.edges.len();
    let nt = ch.triangles.len();
    let torsion = |f: Vec<BigInt>| f.into_iter().filter(|x| *x > BigInt::one()).collect::<Vec<_>>();
    HomologyResult { betti: [nv - r1, ne - r1 - r2, nt - r2], torsion_h0: torsion(f1), torsion_h1: torsion(f2) }
}

/// Exponent-sum matrix of a list of words: one row per word.
pub(crate) fn exponent_matrix(words: &[super::group::Word], generators: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(words.len(), generators);
    for (i, w) in words.iter().enumerate() {
        for l in w.letters() {
            let delta = if l.inverse { -BigInt::one() } else { BigInt::one() };
            m[(i, l.generator)] += delta;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generators::{generate, octahedron, Generator};
    use std::sync::Arc;

    #[test]
    fn single_triangle_convention() {
        let c = Complex2::from_triangles([Triangle::new(0, 1, 2).unwrap()]);
        let ch = chain_complex(&c);
        assert_eq!(ch.d2, IntMatrix::from_rows(&[vec![1, -1, 1]]));
        assert_eq!(ch.d1, IntMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]));
        assert!(ch.composite().is_zero());
    }

    #[test]
    fn empty_complex() {
        let ch = chain_complex(&Complex2::empty());
        assert_eq!((ch.d2.rows(), ch.d2.cols(), ch.d1.rows(), ch.d1.cols()), (0, 0, 0, 0));
        assert_eq!(complex_homology(&Complex2::empty()).betti, [0, 0, 0]);
    }

    #[test]
    fn octahedron_matrices() {
        let oct = Arc::new(octahedron().0);
        let ch = boundary_matrices(&Subcomplex::full(&oct));
        assert_eq!((ch.d2.rows(), ch.d2.cols()), (8, 12));
        assert_eq!((ch.d1.rows(), ch.d1.cols()), (12, 6));
        assert!(ch.composite().is_zero());
    }

    #[test]
    fn regression_values() {
        let oct = octahedron().0;
        let h = complex_homology(&oct);
        assert_eq!(h.betti, [1, 0, 1]);
        assert!(h.is_torsion_free());
        let torus = generate(&Generator::TorusGrid(3)).unwrap().0;
        assert_eq!(complex_homology(&torus).betti, [1, 2, 1]);
        let eq = oct.restrict_to_vertices(|v| (1..=4).contains(&v));
        assert_eq!(complex_homology(&eq).betti, [1, 1, 0]);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // six-vertex projective plane
        let tris = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ];
        let c = Complex2::from_triangles(tris.iter().map(|t| Triangle::new(t[0], t[1], t[2]).unwrap()));
        let h = complex_homology(&c);
        assert_eq!(h.betti, [1, 0, 0]);
        assert_eq!(h.torsion_h1, vec![BigInt::from(2)]);
    }
}
