//! Acceptance checks. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line; exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use npc2_core::algebra::injectivity::InjectivityCertificate;
use npc2_core::collapse::CollapseOutcome;
use npc2_core::complex::Simplex;
use npc2_core::harness::scan::{scan_pairs, verify_violation};
use npc2_core::io::{emit_report, machine, CollapseReport, Format, HomologyReport};
use npc2_core::metric::shortest_cycle;
use npc2_core::{
    check_link_condition, complex_homology, enumerate_subcomplexes, generate, induced_map_injectivity, is_collapsible,
    smith_normal_form, strong_injectivity_scan, verify_certificate, Budget, Complex2, Edge, Generator, IntMatrix,
    LinkVerdict, ScanConfig, ScanVerdict, Subcomplex, SubcomplexFilter, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn complex(g: Generator) -> Complex2 {
    generate(&g).unwrap().0
}

fn hemisphere(parent: &Arc<Complex2>, pole: u32) -> Subcomplex {
    let tris = parent.triangles_at(pole).map(Simplex::Triangle);
    Subcomplex::closure(parent, tris).unwrap()
}

/// Listed-hemisphere scan of the octahedron.
fn sphere_hemispheres() -> Outcome {
    let oct = Arc::new(complex(Generator::Octahedron));
    let (upper, lower) = (hemisphere(&oct, 0), hemisphere(&oct, 5));
    let cfg = ScanConfig::default();
    let r = scan_pairs(&oct, Some(&[upper]), Some(&[lower]), &cfg).map_err(|e| e.to_string())?;
    ensure(r.verdict == ScanVerdict::Violation, || format!("verdict {}", r.verdict))?;
    ensure(r.violation_classes == 1 && r.violations.len() == 1, || format!("{} classes", r.violation_classes))?;
    let v = &r.violations[0];
    ensure(v.intersection.vertices == [1, 2, 3, 4] && v.intersection.triangles.is_empty(), || {
        format!("intersection {:?}", v.intersection)
    })?;
    let mut around = v.witness.loop_vertices.clone();
    around.sort();
    around.dedup();
    ensure(around == [1, 2, 3, 4], || format!("witness loop {:?}", v.witness.loop_vertices))?;
    verify_violation(&oct, v, &cfg.budget)?;
    Ok(emit_report(&r, Format::Machine))
}

fn link_condition() -> Outcome {
    let mut out = String::new();
    let oct = complex(Generator::Octahedron);
    let r = check_link_condition(&oct, &npc2_core::MetricAssignment::unit(&oct), 1e-9).map_err(|e| e.to_string())?;
    for v in &r.vertices {
        ensure((v.systole - 4.0 * PI / 3.0).abs() <= 1e-9, || {
            format!("octahedron vertex {}: {}", v.vertex, v.systole)
        })?;
    }
    ensure(!r.nonpositively_curved && r.overall == LinkVerdict::Fail, || "octahedron reported curved".into())?;
    out += &emit_report(&r, Format::Machine);

    let torus = complex(Generator::TorusGrid(3));
    let r =
        check_link_condition(&torus, &npc2_core::MetricAssignment::unit(&torus), 1e-9).map_err(|e| e.to_string())?;
    for v in &r.vertices {
        ensure((v.systole - 2.0 * PI).abs() <= 1e-9 && v.verdict == LinkVerdict::Marginal, || {
            format!("torus vertex {}: {} {}", v.vertex, v.systole, v.verdict)
        })?;
    }
    out += &emit_report(&r, Format::Machine);

    let tri = complex(Generator::Triangle);
    let r = check_link_condition(&tri, &npc2_core::MetricAssignment::unit(&tri), 1e-9).map_err(|e| e.to_string())?;
    ensure(r.vertices.iter().all(|v| v.verdict == LinkVerdict::Pass) && r.nonpositively_curved, || {
        "triangle does not pass".into()
    })?;
    out += &emit_report(&r, Format::Machine);
    Ok(out)
}

fn collapsibility() -> Outcome {
    let mut out = String::new();
    let budget = Budget::default();
    let mut cases: Vec<(Generator, bool)> = (1..=3).map(|n| (Generator::DiskGrid(n), true)).collect();
    cases.push((Generator::Octahedron, false));
    for (g, expect_yes) in cases {
        let c = complex(g);
        let result = is_collapsible(&c, &budget);
        let verified = match &result.certificate {
            Some(CollapseOutcome::Certificate(cert)) => Some(verify_certificate(&c, cert).is_ok()),
            _ => None,
        };
        let expected = if expect_yes { Verdict::Yes } else { Verdict::No };
        ensure(result.value == expected, || format!("{g:?}: {:?}", result.value))?;
        ensure(!expect_yes || verified == Some(true), || format!("{g:?}: certificate rejected"))?;
        out += &emit_report(&CollapseReport { budget, result, certificate_verified: verified }, Format::Machine);
    }
    Ok(out)
}

fn exhaustive_disk_scan() -> Outcome {
    let disk = Arc::new(complex(Generator::DiskGrid(2)));
    let r = strong_injectivity_scan(&disk, &ScanConfig::default()).map_err(|e| e.to_string())?;
    ensure(r.violation_pairs == 0 && r.unknown_pairs == 0 && r.y_injectivity_unknown == 0, || {
        format!(
            "{} violations, {} unknowns, {} Y unknowns",
            r.violation_pairs, r.unknown_pairs, r.y_injectivity_unknown
        )
    })?;
    ensure(r.verdict == ScanVerdict::Clean, || format!("verdict {}", r.verdict))?;
    Ok(emit_report(&r, Format::Machine))
}

fn proper_subcomplexes_have_no_b2() -> Outcome {
    use rayon::prelude::*;
    let disk = Arc::new(complex(Generator::DiskGrid(2)));
    let proper = disk.num_simplices() - 1;
    let subs: Vec<Subcomplex> =
        enumerate_subcomplexes(&disk, proper, &SubcomplexFilter::ANY).map_err(|e| e.to_string())?.collect();
    let bettis: Vec<[usize; 3]> = subs.par_iter().map(|s| complex_homology(s.cells()).betti).collect();
    ensure(subs.len() == 428_246, || format!("{} nonempty proper subcomplexes", subs.len()))?;
    let with_b2 = bettis.iter().filter(|b| b[2] != 0).count();
    ensure(with_b2 == 0, || format!("{with_b2} subcomplexes with b2 > 0"))?;
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for b in &bettis {
        *histogram.entry(format!("{},{},{}", b[0], b[1], b[2])).or_default() += 1;
    }
    let summary = BTreeMap::from([("nonempty_proper_subcomplexes", subs.len() as u64), ("with_b2", with_b2 as u64)]);
    Ok(machine("proper_subcomplex_b2", &summary) + &machine("betti_histogram", &histogram))
}

/// Cycle rank of the component of `v` in a graph.
fn cycle_rank(g: &Complex2, v: u32) -> usize {
    let c = g.component_of(v);
    c.edges().len() + 1 - c.vertices().len()
}

fn graph_inclusions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budget = Budget::default();
    let (mut pairs, mut components) = (0u64, 0u64);
    for _ in 0..100 {
        let n: u32 = rng.gen_range(2..=10);
        let mut edges = Vec::new();
        for _ in 0..rng.gen_range(0..=7) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if let Some(e) = Edge::new(a, b) {
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        let all =
            |mask: u32| {
                Complex2::generated_by((0..n).map(Simplex::Vertex).chain(
                    edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| Simplex::Edge(*e)),
                ))
            };
        let full = (1u32 << edges.len()) - 1;
        let parent = Arc::new(all(full));
        let subs: Vec<Subcomplex> = (0..=full).map(|m| Subcomplex::from_cells(&parent, all(m)).unwrap()).collect();
        for h in 0..=full {
            // every superset of h
            let free = full & !h;
            let mut s = free;
            loop {
                let g = h | s;
                let verdicts = induced_map_injectivity(&subs[h as usize], &subs[g as usize], &budget)
                    .map_err(|e| e.to_string())?;
                for c in verdicts {
                    let rank = cycle_rank(subs[h as usize].cells(), c.basepoint);
                    let folded = match c.verdict.certificate {
                        Some(InjectivityCertificate::GraphInclusion { source_rank, image_rank }) => {
                            source_rank == rank && image_rank == rank
                        }
                        Some(InjectivityCertificate::TrivialSource { .. }) => rank == 0,
                        _ => false,
                    };
                    ensure(c.verdict.value == Verdict::Yes && folded, || {
                        format!("edges {edges:?}, masks {h:b} in {g:b}: {:?}", c.verdict)
                    })?;
                    components += 1;
                }
                pairs += 1;
                if s == 0 {
                    break;
                }
                s = (s - 1) & free;
            }
        }
    }
    Ok(format!("{pairs} nested pairs, {components} components\n"))
}

/// Shortest simple cycle by enumerating every simple cycle.
fn brute_force_cycle(n: usize, arcs: &[(usize, usize, f64)]) -> f64 {
    fn extend(start: usize, cur: usize, len: f64, seen: u32, used: u32, arcs: &[(usize, usize, f64)], best: &mut f64) {
        for (j, &(u, w, weight)) in arcs.iter().enumerate() {
            if used >> j & 1 == 1 || u == w || (u != cur && w != cur) {
                continue;
            }
            let y = if u == cur { w } else { u };
            if y == start {
                *best = best.min(len + weight);
            } else if seen >> y & 1 == 0 {
                extend(start, y, len + weight, seen | 1 << y, used | 1 << j, arcs, best);
            }
        }
    }
    let mut best = arcs.iter().filter(|a| a.0 == a.1).map(|a| a.2).fold(f64::INFINITY, f64::min);
    for s in 0..n {
        extend(s, s, 0.0, 1 << s, 0, arcs, &mut best);
    }
    best
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let n = rng.gen_range(1..=8);
        let arcs: Vec<(usize, usize, f64)> = (0..rng.gen_range(0..=14))
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0.0..4.0)))
            .collect();
        let expected = brute_force_cycle(n, &arcs);
        let got = shortest_cycle(n, &arcs).map_or(f64::INFINITY, |(l, _)| l);
        ensure(got == expected || (got - expected).abs() <= 1e-9, || {
            format!("systole case {case}: {got} vs {expected}")
        })?;
    }
    for case in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-10..=10)).collect()).collect();
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        ensure(s.u.mul(&a).mul(&s.v) == s.d && s.d.is_diagonal(), || format!("SNF case {case}: UAV != D"))?;
        let f = s.invariant_factors();
        ensure(f.windows(2).all(|w| (&w[1] % &w[0]) == 0.into()), || format!("SNF case {case}: {f:?}"))?;
    }
    Ok("500 systoles, 500 Smith forms\n".into())
}

fn homology_regression() -> Outcome {
    let cycle = Complex2::generated_by((0..4).map(|i| Simplex::Edge(Edge::new(i, (i + 1) % 4).unwrap())));
    let cases = [
        ("octahedron", complex(Generator::Octahedron), [1, 0, 1]),
        ("torus_grid(3)", complex(Generator::TorusGrid(3)), [1, 2, 1]),
        ("4-cycle", cycle, [1, 1, 0]),
    ];
    let mut out = String::new();
    for (name, c, betti) in cases {
        let h = complex_homology(&c);
        ensure(h.betti == betti && h.is_torsion_free(), || format!("{name}: {h:?}"))?;
        out += &emit_report(&HomologyReport::new(h), Format::Machine);
    }
    Ok(out)
}

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn main() {
    let criteria = [
        Criterion {
            number: 1,
            title: "octahedron hemispheres",
            limit: Duration::from_secs(10),
            run: sphere_hemispheres,
        },
        Criterion { number: 2, title: "link condition", limit: Duration::from_secs(1), run: link_condition },
        Criterion { number: 3, title: "collapsibility", limit: Duration::from_secs(30), run: collapsibility },
        Criterion {
            number: 4,
            title: "disk_grid(2) exhaustive scan",
            limit: Duration::from_secs(600),
            run: exhaustive_disk_scan,
        },
        Criterion {
            number: 5,
            title: "b2 of proper subcomplexes",
            limit: Duration::from_secs(60),
            run: proper_subcomplexes_have_no_b2,
        },
        Criterion { number: 6, title: "graph inclusions fold", limit: Duration::from_secs(600), run: graph_inclusions },
        Criterion { number: 7, title: "systole and Smith form oracles", limit: Duration::from_secs(600), run: oracles },
        Criterion { number: 8, title: "homology regression", limit: Duration::from_secs(60), run: homology_regression },
    ];
    let mut failed = 0;
    let mut outputs = BTreeMap::new();
    for c in &criteria {
        let start = Instant::now();
        let result = in_pool(1, c.run);
        let took = start.elapsed();
        let verdict = match &result {
            Ok(_) if took <= c.limit => "PASS".to_string(),
            Ok(_) => format!("FAIL (over the {:?} limit)", c.limit),
            Err(e) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {}: {} ... {verdict} [{:.2}s]", c.number, c.title, took.as_secs_f64());
        if let Ok(out) = result {
            outputs.insert(c.number, out);
        }
    }

    // machine outputs of criteria 1-5: a second single-thread run (except the
    // long scan) and a four-thread run must reproduce them byte for byte
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for c in criteria.iter().filter(|c| c.number <= 5) {
        let first = outputs.get(&c.number);
        if c.number != 4 && in_pool(1, c.run).ok().as_ref() != first {
            mismatches.push(format!("{} (second run)", c.number));
        }
        if in_pool(4, c.run).ok().as_ref() != first {
            mismatches.push(format!("{} (4 threads)", c.number));
        }
    }
    let verdict = if outputs.len() < 5 || (1..=5).any(|n| !outputs.contains_key(&n)) {
        "FAIL (criteria 1-5 produced no output)".to_string()
    } else if mismatches.is_empty() {
        "PASS".to_string()
    } else {
        format!("FAIL (differs: {})", mismatches.join(", "))
    };
    if !verdict.starts_with("PASS") {
        failed += 1;
    }
    println!("criterion 9: deterministic machine output ... {verdict} [{:.2}s]", start.elapsed().as_secs_f64());

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
