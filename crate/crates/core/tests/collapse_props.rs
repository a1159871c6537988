mod common;

use npc2_core::collapse::{apply_move, free_pairs, CollapseOutcome};
use npc2_core::complex::Simplex;
use npc2_core::{complex_homology, is_collapsible, verify_certificate, Budget, Move};
use proptest::prelude::*;

fn collapse_move(face: Simplex, coface: Simplex) -> Move {
    match (face, coface) {
        (Simplex::Vertex(vertex), Simplex::Edge(edge)) => Move::EdgeCollapse { vertex, edge },
        (Simplex::Edge(edge), Simplex::Triangle(triangle)) => Move::TriangleCollapse { edge, triangle },
        other => panic!("not a free pair: {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn collapses_preserve_homology_and_invert(c in common::complex(7)) {
        let h = complex_homology(&c);
        for (face, coface) in free_pairs(&c) {
            let m = collapse_move(face, coface);
            let smaller = apply_move(&c, &m).unwrap();
            prop_assert_eq!(smaller.num_simplices() + 2, c.num_simplices());
            prop_assert_eq!(&complex_homology(&smaller), &h);
            prop_assert_eq!(&apply_move(&smaller, &m.inverse()).unwrap(), &c);
            prop_assert_eq!(m.inverse().inverse(), m);
        }
    }

    #[test]
    fn grown_complexes_collapse_with_verified_certificates((c, moves) in common::grown(14)) {
        let v = is_collapsible(&c, &Budget::default());
        let Some(CollapseOutcome::Certificate(cert)) = v.certificate else {
            return Err(TestCaseError::fail(format!("{:?}", v.value)));
        };
        prop_assert!(verify_certificate(&c, &cert).is_ok());
        prop_assert_eq!(cert.moves.len(), moves.len());
        // a shortened certificate does not end at a point
        if let Some((_, rest)) = cert.moves.split_last() {
            let mut short = cert.clone();
            short.moves = rest.to_vec();
            prop_assert!(verify_certificate(&c, &short).is_err());
        }
        let mut elsewhere = cert.clone();
        elsewhere.terminal = c.vertices().last().unwrap() + 1;
        prop_assert!(verify_certificate(&c, &elsewhere).is_err());
        // the extensions that built the complex are rejected as certificate moves
        if !moves.is_empty() {
            let mut wrong = cert.clone();
            wrong.moves = moves.clone();
            prop_assert!(verify_certificate(&c, &wrong).is_err());
        }
    }

    #[test]
    fn reversed_growth_is_a_certificate((c, moves) in common::grown(14)) {
        let mut cur = c.clone();
        for m in moves.iter().rev() {
            cur = apply_move(&cur, &m.inverse()).unwrap();
        }
        prop_assert_eq!(cur.num_simplices(), 1);
        prop_assert!(cur.vertices().contains(&0));
    }
}
