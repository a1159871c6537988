use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use npc2_core::harness::scan::scan_pairs;
use npc2_core::{
    check_link_condition, complex_homology, fundamental_group, generate, is_collapsible, smith_normal_form,
    strong_injectivity_scan, Budget, Generator, IntMatrix, ScanConfig, Subcomplex,
};

fn snf(c: &mut Criterion) {
    let rows: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 11) as i64 - 5).collect()).collect();
    let a = IntMatrix::from_rows(&rows);
    c.bench_function("smith_normal_form 6x6", |b| b.iter(|| smith_normal_form(black_box(&a))));
}

fn topology(c: &mut Criterion) {
    let (torus, m) = generate(&Generator::TorusGrid(6)).unwrap();
    c.bench_function("link condition torus_grid(6)", |b| b.iter(|| check_link_condition(black_box(&torus), &m, 1e-9)));
    c.bench_function("homology torus_grid(6)", |b| b.iter(|| complex_homology(black_box(&torus))));
    let whole = Subcomplex::full(&Arc::new(torus.clone()));
    c.bench_function("fundamental group torus_grid(6)", |b| b.iter(|| fundamental_group(black_box(&whole), 0)));
    let disk = generate(&Generator::DiskGrid(4)).unwrap().0;
    c.bench_function("collapse disk_grid(4)", |b| b.iter(|| is_collapsible(black_box(&disk), &Budget::default())));
}

fn scans(c: &mut Criterion) {
    let oct = Arc::new(generate(&Generator::Octahedron).unwrap().0);
    let capped = ScanConfig { max_y: Some(9), max_z: Some(9), ..ScanConfig::default() };
    c.bench_function("scan octahedron, at most 9 simplices", |b| {
        b.iter(|| strong_injectivity_scan(black_box(&oct), &capped))
    });
    let disk = Arc::new(generate(&Generator::DiskGrid(1)).unwrap().0);
    c.bench_function("scan disk_grid(1)", |b| {
        b.iter(|| scan_pairs(black_box(&disk), None, None, &ScanConfig::default()))
    });
}

criterion_group!(benches, snf, topology, scans);
criterion_main!(benches);
