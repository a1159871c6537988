//! Builtin example complexes with their default metrics.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{Complex2, Edge, Simplex, Triangle};
use crate::metric::MetricAssignment;

/// Largest grid side accepted by the grid generators.
pub const MAX_GRID: u32 = 64;
/// Largest cone base or path length accepted.
pub const MAX_CYCLE: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Triangle,
    /// `n x n` unit squares, each split along its main diagonal.
    DiskGrid(u32),
    Octahedron,
    /// `n x n` square grid with opposite sides identified.
    TorusGrid(u32),
    /// Cone over a `k`-cycle; the apex is vertex `k`.
    Cone(u32),
    /// Path with `k` edges.
    Path(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("unknown generator {0:?} (known: triangle, disk_grid, octahedron, torus_grid, cone, path)")]
    UnknownGenerator(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

impl Generator {
    pub const NAMES: [&'static str; 6] = ["triangle", "disk_grid", "octahedron", "torus_grid", "cone", "path"];

    /// `disk_grid` and `torus_grid` take `n`; `cone` and `path` take `k`.
    pub fn from_name(name: &str, n: Option<u32>, k: Option<u32>) -> Result<Generator, GeneratorError> {
        let need =
            |p: Option<u32>, flag: &str| p.ok_or_else(|| GeneratorError::BadParams(format!("{name} needs --{flag}")));
        let g = match name {
            "triangle" => Generator::Triangle,
            "octahedron" => Generator::Octahedron,
            "disk_grid" => Generator::DiskGrid(need(n, "n")?),
            "torus_grid" => Generator::TorusGrid(need(n, "n")?),
            "cone" => Generator::Cone(need(k, "k")?),
            "path" => Generator::Path(need(k, "k")?),
            other => return Err(GeneratorError::UnknownGenerator(other.to_string())),
        };
        g.check()?;
        Ok(g)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Triangle => "triangle",
            Generator::DiskGrid(_) => "disk_grid",
            Generator::Octahedron => "octahedron",
            Generator::TorusGrid(_) => "torus_grid",
            Generator::Cone(_) => "cone",
            Generator::Path(_) => "path",
        }
    }

    fn check(&self) -> Result<(), GeneratorError> {
        let bad = |msg: String| Err(GeneratorError::BadParams(msg));
        match *self {
            Generator::DiskGrid(n) if n == 0 || n > MAX_GRID => bad(format!("disk_grid needs 1 <= n <= {MAX_GRID}")),
            Generator::TorusGrid(n) if !(3..=MAX_GRID).contains(&n) => {
                bad(format!("torus_grid needs 3 <= n <= {MAX_GRID}"))
            }
            Generator::Cone(k) if !(3..=MAX_CYCLE).contains(&k) => bad(format!("cone needs 3 <= k <= {MAX_CYCLE}")),
            Generator::Path(k) if k > MAX_CYCLE => bad(format!("path needs k <= {MAX_CYCLE}")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::DiskGrid(n) | Generator::TorusGrid(n) => write!(f, "{}({n})", self.name()),
            Generator::Cone(k) | Generator::Path(k) => write!(f, "{}({k})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

pub fn generate(g: &Generator) -> Result<(Complex2, MetricAssignment), GeneratorError> {
    g.check()?;
    Ok(match *g {
        Generator::Triangle => triangle(),
        Generator::DiskGrid(n) => grid(n, false),
        Generator::Octahedron => octahedron(),
        Generator::TorusGrid(n) => grid(n, true),
        Generator::Cone(k) => cone(k)?,
        Generator::Path(k) => path(k),
    })
}

fn tri(a: u32, b: u32, c: u32) -> Triangle {
    Triangle::new(a, b, c).unwrap()
}

pub fn triangle() -> (Complex2, MetricAssignment) {
    let c = Complex2::from_triangles([tri(0, 1, 2)]);
    let m = MetricAssignment::unit(&c);
    (c, m)
}

/// Vertex 0 is the north pole, 5 the south pole, 1-2-3-4 the equator.
pub fn octahedron() -> (Complex2, MetricAssignment) {
    let mut ts = Vec::new();
    for i in 1..=4 {
        let j = i % 4 + 1;
        ts.push(tri(0, i, j));
        ts.push(tri(5, i, j));
    }
    let c = Complex2::from_triangles(ts);
    let m = MetricAssignment::unit(&c);
    (c, m)
}

pub fn cone(k: u32) -> Result<(Complex2, MetricAssignment), GeneratorError> {
    Generator::Cone(k).check()?;
    let c = Complex2::from_triangles((0..k).map(|i| tri(i, (i + 1) % k, k)));
    let m = MetricAssignment::unit(&c);
    Ok((c, m))
}

pub fn path(k: u32) -> (Complex2, MetricAssignment) {
    let mut c = Complex2::generated_by((0..k).map(|i| Simplex::Edge(Edge::new(i, i + 1).unwrap())));
    if k == 0 {
        c = Complex2::generated_by([Simplex::Vertex(0)]);
    }
    let m = MetricAssignment::unit(&c);
    (c, m)
}

/// Square grid with unit sides and diagonals of length sqrt(2). On the
/// disk, vertex `(i, j)` is `i * (n + 1) + j`; on the torus, `i * n + j`
/// with indices mod `n`.
fn grid(n: u32, torus: bool) -> (Complex2, MetricAssignment) {
    let side = if torus { n } else { n + 1 };
    let id = |i: u32, j: u32| (i % side) * side + (j % side);
    let mut ts = Vec::new();
    let mut diagonals = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b, c, d) = (id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j));
            ts.push(tri(a, b, c));
            ts.push(tri(a, d, c));
            diagonals.insert(Edge::new(a, c).unwrap(), std::f64::consts::SQRT_2);
        }
    }
    let c = Complex2::from_triangles(ts);
    let m = MetricAssignment::with_defaults(&c, &diagonals).expect("grid metric is nondegenerate");
    (c, m)
}
