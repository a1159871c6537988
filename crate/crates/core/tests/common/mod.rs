#![allow(dead_code)]

use npc2_core::collapse::{apply_move, Move};
use npc2_core::complex::{Complex2, Edge, Simplex, Triangle};
use proptest::prelude::*;

/// Random 2-complex on at most `n` vertices: some triangles, some extra
/// edges, some isolated vertices.
pub fn complex(n: u32) -> impl Strategy<Value = Complex2> {
    let tri = (0..n, 0..n, 0..n).prop_filter_map("degenerate", |(a, b, c)| Triangle::new(a, b, c));
    let edge = (0..n, 0..n).prop_filter_map("loop", |(a, b)| Edge::new(a, b));
    (prop::collection::vec(tri, 0..8), prop::collection::vec(edge, 0..6), prop::collection::vec(0..n, 0..3)).prop_map(
        |(ts, es, vs)| {
            Complex2::generated_by(
                ts.into_iter()
                    .map(Simplex::Triangle)
                    .chain(es.into_iter().map(Simplex::Edge))
                    .chain(vs.into_iter().map(Simplex::Vertex)),
            )
        },
    )
}

/// A complex grown from vertex 0 by elementary extensions, with the moves.
/// Each choice picks among the extensions available at that point.
pub fn grown(steps: usize) -> impl Strategy<Value = (Complex2, Vec<Move>)> {
    prop::collection::vec(any::<(bool, u16, u16)>(), 0..steps).prop_map(|choices| {
        let mut c = Complex2::generated_by([Simplex::Vertex(0)]);
        let mut moves = Vec::new();
        for (triangle, i, j) in choices {
            let m = if triangle { triangle_extension(&c, i as usize, j as usize) } else { None };
            let m = m.unwrap_or_else(|| {
                let vs: Vec<u32> = c.vertices().iter().copied().collect();
                let at = vs[i as usize % vs.len()];
                Move::EdgeExtension { at, new_vertex: *c.vertices().last().unwrap() + 1 }
            });
            c = apply_move(&c, &m).expect("constructed extension applies");
            moves.push(m);
        }
        (c, moves)
    })
}

/// Two edges `a-b`, `a-c` with `b-c` absent.
fn triangle_extension(c: &Complex2, i: usize, j: usize) -> Option<Move> {
    let mut options = Vec::new();
    for &a in c.vertices() {
        let nbrs: Vec<u32> = c.edges_at(a).map(|e| e.other(a)).collect();
        for (x, &b) in nbrs.iter().enumerate() {
            for &d in &nbrs[x + 1..] {
                let third = Edge::new(b, d).unwrap();
                if !c.edges().contains(&third) {
                    options.push(Move::TriangleExtension {
                        glued: [Edge::new(a, b).unwrap(), Edge::new(a, d).unwrap()],
                        triangle: Triangle::new(a, b, d).unwrap(),
                    });
                }
            }
        }
    }
    if options.is_empty() {
        None
    } else {
        Some(options[(i * 31 + j) % options.len()])
    }
}
