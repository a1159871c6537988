//! Exhaustive search for subcomplex pairs `(Y, Z)` where
//! `pi_1(Y ∩ Z) -> pi_1(Z)` fails to be injective.
//!
//! Pairs are grouped into classes `(Y ∩ Z, Z)`: the verdict depends only on
//! the intersection and `Z`, so each class is decided once and its pair
//! count is carried along.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use super::enumerate::{bits, IndexError, Mask, SimplexIndex};
use crate::algebra::group::Pi1Model;
use crate::algebra::injectivity::{
    component_injectivity, verify_kernel_witness, InjectivityCertificate, KernelWitness,
};
use crate::algebra::verdict::{Budget, BudgetSpent, TriVerdict, Verdict};
use crate::complex::{Complex2, ComplexError, Edge, Simplex, Subcomplex, Triangle, VertexId};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Largest `Y` in simplices; `None` means uncapped.
    pub max_y: Option<usize>,
    pub max_z: Option<usize>,
    pub budget: Budget,
    pub require_y_pi1_injective: bool,
    /// Enumerate only connected `Y` and `Z`.
    pub connected_only: bool,
    /// Most violation and unknown classes listed in the report; totals are
    /// always complete.
    pub max_recorded: usize,
}

impl Default for ScanConfig {
    fn default() -> ScanConfig {
        ScanConfig {
            max_y: None,
            max_z: None,
            budget: Budget::default(),
            require_y_pi1_injective: true,
            connected_only: true,
            max_recorded: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("listed subcomplex {0} does not belong to the scanned complex")]
    ForeignSubcomplex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcomplexDescription {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Triangle>,
}

impl SubcomplexDescription {
    pub fn of(c: &Complex2) -> SubcomplexDescription {
        SubcomplexDescription {
            vertices: c.vertices().iter().copied().collect(),
            edges: c.edges().iter().copied().collect(),
            triangles: c.triangles().iter().copied().collect(),
        }
    }

    /// Strict: every face must be listed.
    pub fn to_subcomplex(&self, parent: &Arc<Complex2>) -> Result<Subcomplex, ComplexError> {
        let simplices = self
            .vertices
            .iter()
            .map(|&v| Simplex::Vertex(v))
            .chain(self.edges.iter().map(|&e| Simplex::Edge(e)))
            .chain(self.triangles.iter().map(|&t| Simplex::Triangle(t)));
        Subcomplex::from_simplices(parent, simplices)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationClass {
    /// The first `Y` (in candidate order) producing this intersection.
    pub y: SubcomplexDescription,
    pub z: SubcomplexDescription,
    pub intersection: SubcomplexDescription,
    pub witness: KernelWitness,
    pub pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnknownClass {
    pub y: SubcomplexDescription,
    pub z: SubcomplexDescription,
    pub intersection: SubcomplexDescription,
    pub component_basepoint: VertexId,
    pub note: String,
    pub budget_spent: BudgetSpent,
    pub pairs: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScanVerdict {
    Clean,
    Violation,
    Inconclusive,
}

impl std::fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanVerdict::Clean => "CLEAN",
            ScanVerdict::Violation => "VIOLATION",
            ScanVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub y_listed: bool,
    pub z_listed: bool,
    pub y_candidates: u64,
    pub y_admissible: u64,
    pub y_not_injective: u64,
    /// Skipped because their own pi_1-injectivity is undecided.
    pub y_injectivity_unknown: u64,
    pub z_candidates: u64,
    pub pairs_tested: u64,
    pub classes_tested: u64,
    pub violation_pairs: u64,
    pub violation_classes: u64,
    pub unknown_pairs: u64,
    pub unknown_classes: u64,
    pub violations: Vec<ViolationClass>,
    pub unknowns: Vec<UnknownClass>,
    pub verdict: ScanVerdict,
}

pub fn strong_injectivity_scan(c: &Arc<Complex2>, cfg: &ScanConfig) -> Result<ScanReport, ScanError> {
    scan_pairs(c, None, None, cfg)
}

/// Scans listed candidates, or all subcomplexes within the caps when a
/// list is `None`.
pub fn scan_pairs(
    c: &Arc<Complex2>,
    ys: Option<&[Subcomplex]>,
    zs: Option<&[Subcomplex]>,
    cfg: &ScanConfig,
) -> Result<ScanReport, ScanError> {
    let ix = SimplexIndex::new(c)?;
    let listed = |list: &[Subcomplex]| -> Result<Vec<Mask>, ScanError> {
        list.iter()
            .enumerate()
            .map(|(i, s)| {
                if s.parent().as_ref() != c.as_ref() {
                    return Err(ScanError::ForeignSubcomplex(i));
                }
                ix.mask_of(s.cells()).ok_or(ScanError::ForeignSubcomplex(i))
            })
            .collect()
    };
    let y_all = match ys {
        Some(l) => listed(l)?,
        None => ix.enumerate(cfg.max_y.unwrap_or(usize::MAX), cfg.connected_only),
    };
    let z_all = match zs {
        Some(l) => listed(l)?,
        None => ix.enumerate(cfg.max_z.unwrap_or(usize::MAX), cfg.connected_only),
    };
    let ctx = Context::new(ix, cfg.budget);

    // admissible Y
    let y_verdicts: Vec<Verdict> = if cfg.require_y_pi1_injective {
        y_all.par_iter().map(|&y| ctx.injective_into_parent(y)).collect()
    } else {
        vec![Verdict::Yes; y_all.len()]
    };
    let y_ok: Vec<Mask> = y_all.iter().zip(&y_verdicts).filter(|(_, v)| **v == Verdict::Yes).map(|(&y, _)| y).collect();

    let per_z: Vec<ZResult> = z_all
        .par_iter()
        .map_init(FxHashMap::<Mask, (u32, u64)>::default, |classes, &z| ctx.scan_z(z, &y_ok, classes, cfg))
        .collect();

    let mut report = ScanReport {
        config: cfg.clone(),
        y_listed: ys.is_some(),
        z_listed: zs.is_some(),
        y_candidates: y_all.len() as u64,
        y_admissible: y_ok.len() as u64,
        y_not_injective: y_verdicts.iter().filter(|v| **v == Verdict::No).count() as u64,
        y_injectivity_unknown: y_verdicts.iter().filter(|v| **v == Verdict::Unknown).count() as u64,
        z_candidates: z_all.len() as u64,
        pairs_tested: 0,
        classes_tested: 0,
        violation_pairs: 0,
        violation_classes: 0,
        unknown_pairs: 0,
        unknown_classes: 0,
        violations: Vec::new(),
        unknowns: Vec::new(),
        verdict: ScanVerdict::Clean,
    };
    for r in per_z {
        report.pairs_tested += r.pairs;
        report.classes_tested += r.classes;
        report.violation_pairs += r.violation_pairs;
        report.violation_classes += r.violation_classes;
        report.unknown_pairs += r.unknown_pairs;
        report.unknown_classes += r.unknown_classes;
        for v in r.violations {
            if report.violations.len() < cfg.max_recorded {
                report.violations.push(v);
            }
        }
        for u in r.unknowns {
            if report.unknowns.len() < cfg.max_recorded {
                report.unknowns.push(u);
            }
        }
    }
    report.verdict = if report.violation_classes > 0 {
        ScanVerdict::Violation
    } else if report.unknown_classes > 0 {
        ScanVerdict::Inconclusive
    } else {
        ScanVerdict::Clean
    };
    Ok(report)
}

/// Re-derives `Y ∩ Z` from the recorded subcomplexes and replays the
/// witness certificates from scratch.
pub fn verify_violation(parent: &Arc<Complex2>, v: &ViolationClass, budget: &Budget) -> Result<(), String> {
    let y = v.y.to_subcomplex(parent).map_err(|e| format!("Y: {e}"))?;
    let z = v.z.to_subcomplex(parent).map_err(|e| format!("Z: {e}"))?;
    let w = y.intersect(&z).map_err(|e| e.to_string())?;
    if SubcomplexDescription::of(w.cells()) != v.intersection {
        return Err("recorded intersection differs from Y ∩ Z".into());
    }
    verify_kernel_witness(w.cells(), z.cells(), &v.witness, budget)
}

#[derive(Default)]
struct ZResult {
    pairs: u64,
    classes: u64,
    violation_pairs: u64,
    violation_classes: u64,
    unknown_pairs: u64,
    unknown_classes: u64,
    violations: Vec<ViolationClass>,
    unknowns: Vec<UnknownClass>,
}

enum ComponentInfo {
    Trivial,
    Model(Arc<Pi1Model>),
}

/// Nontrivial components of an intersection, each with its hull.
type Hulled = Vec<(Mask, Option<Mask>)>;

/// Shared, append-only caches. They only avoid recomputation; every cached
/// value is a deterministic function of its key.
struct Context {
    ix: SimplexIndex,
    budget: Budget,
    /// For each intersection mask, its components with nontrivial pi_1.
    nontrivial: RwLock<FxHashMap<Mask, Arc<Vec<Mask>>>>,
    models: RwLock<FxHashMap<Mask, Arc<ComponentInfo>>>,
    parent_models: RwLock<BTreeMap<VertexId, Arc<Pi1Model>>>,
    /// For a component `C`, a subcomplex containing it into which it is
    /// known to be pi_1-injective.
    hulls: RwLock<FxHashMap<Mask, Option<Mask>>>,
    classes: RwLock<FxHashMap<Mask, Arc<Hulled>>>,
    skeleton: Mask,
}

impl Context {
    fn new(ix: SimplexIndex, budget: Budget) -> Context {
        Context {
            budget,
            nontrivial: RwLock::default(),
            models: RwLock::default(),
            parent_models: RwLock::default(),
            hulls: RwLock::default(),
            classes: RwLock::default(),
            skeleton: ix.full() & !ix.triangle_mask(),
            ix,
        }
    }

    fn component(&self, c: Mask) -> Arc<ComponentInfo> {
        if let Some(info) = self.models.read().unwrap().get(&c) {
            return info.clone();
        }
        let b = self.ix.basepoint(c).unwrap();
        let m = Pi1Model::new(&self.ix.complex(c), b, self.budget.tietze_moves).unwrap();
        let info = Arc::new(if m.is_trivial() { ComponentInfo::Trivial } else { ComponentInfo::Model(Arc::new(m)) });
        self.models.write().unwrap().entry(c).or_insert(info).clone()
    }

    fn nontrivial_components(&self, w: Mask) -> Arc<Vec<Mask>> {
        if let Some(v) = self.nontrivial.read().unwrap().get(&w) {
            return v.clone();
        }
        let v: Vec<Mask> = self
            .ix
            .components(w)
            .into_iter()
            .filter(|&c| matches!(*self.component(c), ComponentInfo::Model(_)))
            .collect();
        self.nontrivial.write().unwrap().entry(w).or_insert(Arc::new(v)).clone()
    }

    fn parent_model(&self, b: VertexId) -> Arc<Pi1Model> {
        if let Some(m) = self.parent_models.read().unwrap().get(&b) {
            return m.clone();
        }
        let m = Arc::new(Pi1Model::new(self.ix.parent(), b, self.budget.tietze_moves).unwrap());
        self.parent_models.write().unwrap().entry(b).or_insert(m).clone()
    }

    /// Starting from `C` plus the parent's 1-skeleton, adds the parent's
    /// triangles in index order, keeping each one that leaves the inclusion
    /// of `C` provably injective. Since `C -> Z -> H` injective forces
    /// `C -> Z` injective, every `Z` with `C ⊆ Z ⊆ H` is settled.
    fn hull(&self, c: Mask) -> Option<Mask> {
        if let Some(h) = self.hulls.read().unwrap().get(&c) {
            return *h;
        }
        let ComponentInfo::Model(src) = &*self.component(c) else { unreachable!("hulls of nontrivial components") };
        let injective = |h: Mask| {
            let tgt = Pi1Model::new(&self.ix.complex(h), src.basepoint(), self.budget.tietze_moves).unwrap();
            component_injectivity(src, &tgt, &self.budget).is_yes()
        };
        let mut h = c | self.skeleton;
        let found = if injective(h) {
            for t in bits(self.ix.triangle_mask() & !c) {
                if injective(h | 1 << t) {
                    h |= 1 << t;
                }
            }
            Some(h)
        } else {
            None
        };
        *self.hulls.write().unwrap().entry(c).or_insert(found)
    }

    fn injective_into_parent(&self, y: Mask) -> Verdict {
        let mut worst = Verdict::Yes;
        for c in self.nontrivial_components(y).iter() {
            let ComponentInfo::Model(src) = &*self.component(*c) else { continue };
            let tgt = self.parent_model(src.basepoint());
            match component_injectivity(src, &tgt, &self.budget).value {
                Verdict::No => return Verdict::No,
                Verdict::Unknown => worst = Verdict::Unknown,
                Verdict::Yes => {}
            }
        }
        worst
    }

    /// Nontrivial components of `w`, each with its hull.
    fn class_components(&self, w: Mask) -> Arc<Hulled> {
        if let Some(v) = self.classes.read().unwrap().get(&w) {
            return v.clone();
        }
        let v: Vec<(Mask, Option<Mask>)> = self.nontrivial_components(w).iter().map(|&c| (c, self.hull(c))).collect();
        self.classes.write().unwrap().entry(w).or_insert(Arc::new(v)).clone()
    }

    fn scan_z(&self, z: Mask, ys: &[Mask], classes: &mut FxHashMap<Mask, (u32, u64)>, cfg: &ScanConfig) -> ZResult {
        classes.clear();
        for (i, &y) in ys.iter().enumerate() {
            classes.entry(y & z).and_modify(|e| e.1 += 1).or_insert((i as u32, 1));
        }
        let mut out = ZResult { pairs: ys.len() as u64, classes: classes.len() as u64, ..ZResult::default() };
        let mut z_models: BTreeMap<VertexId, Pi1Model> = BTreeMap::new();
        let mut memo: FxHashMap<Mask, Option<TriVerdict<InjectivityCertificate>>> = FxHashMap::default();
        // Map order is not deterministic, so findings are sorted before use.
        let mut found: Vec<(u32, Mask, u64, Finding)> = Vec::new();
        for (&w, &(first, count)) in classes.iter() {
            let mut unknown = None;
            for &(c, hull) in self.class_components(w).iter() {
                if hull.is_some_and(|h| z & !h == 0) {
                    continue;
                }
                let v = memo.entry(c).or_insert_with(|| {
                    let ComponentInfo::Model(src) = &*self.component(c) else { unreachable!() };
                    let b = src.basepoint();
                    let zm = z_models
                        .entry(b)
                        .or_insert_with(|| Pi1Model::new(&self.ix.complex(z), b, self.budget.tietze_moves).unwrap());
                    let v = component_injectivity(src, zm, &self.budget);
                    (!v.is_yes()).then_some(v)
                });
                match v {
                    Some(v) if v.is_no() => {
                        unknown = Some(Finding::Violation(v.clone()));
                        break;
                    }
                    Some(v) if unknown.is_none() => {
                        unknown = Some(Finding::Unknown(self.ix.basepoint(c).unwrap(), v.clone()))
                    }
                    _ => {}
                }
            }
            if let Some(f) = unknown {
                found.push((first, w, count, f));
            }
        }
        found.sort_unstable_by_key(|f| (f.0, f.1));
        let describe = |m: Mask| SubcomplexDescription::of(&self.ix.complex(m));
        for (first, w, count, f) in found {
            match f {
                Finding::Violation(v) => {
                    out.violation_classes += 1;
                    out.violation_pairs += count;
                    if out.violations.len() < cfg.max_recorded {
                        let Some(InjectivityCertificate::KernelWitness(witness)) = v.certificate else {
                            unreachable!("NO verdicts carry a kernel witness")
                        };
                        out.violations.push(ViolationClass {
                            y: describe(ys[first as usize]),
                            z: describe(z),
                            intersection: describe(w),
                            witness,
                            pairs: count,
                        });
                    }
                }
                Finding::Unknown(b, v) => {
                    out.unknown_classes += 1;
                    out.unknown_pairs += count;
                    if out.unknowns.len() < cfg.max_recorded {
                        out.unknowns.push(UnknownClass {
                            y: describe(ys[first as usize]),
                            z: describe(z),
                            intersection: describe(w),
                            component_basepoint: b,
                            note: v.note.unwrap_or_default(),
                            budget_spent: v.budget_spent,
                            pairs: count,
                        });
                    }
                }
            }
        }
        out
    }
}

enum Finding {
    Violation(TriVerdict<InjectivityCertificate>),
    Unknown(VertexId, TriVerdict<InjectivityCertificate>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generators::{generate, octahedron, Generator};

    fn hemispheres(oct: &Arc<Complex2>) -> (Subcomplex, Subcomplex) {
        let upper = Subcomplex::closure(oct, oct.triangles_at(0).map(Simplex::Triangle)).unwrap();
        let lower = Subcomplex::closure(oct, oct.triangles_at(5).map(Simplex::Triangle)).unwrap();
        (upper, lower)
    }

    #[test]
    fn sphere_hemispheres_violate() {
        let oct = Arc::new(octahedron().0);
        let (upper, lower) = hemispheres(&oct);
        let cfg = ScanConfig::default();
        let r = scan_pairs(&oct, Some(&[upper]), Some(&[lower]), &cfg).unwrap();
        assert_eq!(r.verdict, ScanVerdict::Violation);
        assert_eq!((r.pairs_tested, r.violation_classes, r.violations.len()), (1, 1, 1));
        let v = &r.violations[0];
        assert_eq!(v.intersection.vertices, vec![1, 2, 3, 4]);
        verify_violation(&oct, v, &cfg.budget).unwrap();
    }

    #[test]
    fn triangle_scan_is_clean() {
        let (t, _) = generate(&Generator::Triangle).unwrap();
        let r = strong_injectivity_scan(&Arc::new(t), &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, ScanVerdict::Clean);
        assert!(r.pairs_tested > 0);
    }

    #[test]
    fn graphs_scan_clean() {
        let (c, _) = generate(&Generator::Cone(4)).unwrap();
        let skeleton = Arc::new(Complex2::generated_by(c.edges().iter().map(|&e| Simplex::Edge(e))));
        let r = strong_injectivity_scan(&skeleton, &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, ScanVerdict::Clean);
        assert_eq!(r.y_not_injective + r.y_injectivity_unknown, 0);
    }

    #[test]
    fn empty_lists_give_empty_clean_report() {
        let oct = Arc::new(octahedron().0);
        let r = scan_pairs(&oct, Some(&[]), Some(&[]), &ScanConfig::default()).unwrap();
        assert_eq!((r.pairs_tested, r.verdict), (0, ScanVerdict::Clean));
    }

    /// Two triangular cones glued along their base 3-cycle.
    fn bipyramid() -> Arc<Complex2> {
        let t = |a, b, c| crate::complex::Triangle::new(a, b, c).unwrap();
        let mut ts = Vec::new();
        for (a, b) in [(1, 2), (2, 3), (1, 3)] {
            ts.push(t(0, a, b));
            ts.push(t(4, a, b));
        }
        Arc::new(Complex2::from_triangles(ts))
    }

    #[test]
    fn exhaustive_sphere_scan_finds_violations() {
        let s = bipyramid();
        let cfg = ScanConfig { max_recorded: usize::MAX, ..ScanConfig::default() };
        let r = strong_injectivity_scan(&s, &cfg).unwrap();
        assert_eq!(r.verdict, ScanVerdict::Violation);
        assert_eq!(r.unknown_classes, 0);
        assert_eq!(r.violations.len() as u64, r.violation_classes);
        let capped = strong_injectivity_scan(&s, &ScanConfig { max_recorded: 2, ..cfg.clone() }).unwrap();
        assert_eq!(capped.violations[..], r.violations[..2]);
        assert_eq!(capped.violation_pairs, r.violation_pairs);
        assert!(r.violation_pairs >= r.violation_classes);
        for v in &r.violations {
            verify_violation(&s, v, &cfg.budget).unwrap();
        }
        // the equator splits the sphere into two admissible disks
        let equator =
            |v: &&ViolationClass| v.intersection.vertices == vec![1, 2, 3] && v.intersection.triangles.is_empty();
        assert!(r.violations.iter().any(|v| equator(&v)));
    }

    #[test]
    fn capped_scan_counts_agree_with_pairs() {
        let s = bipyramid();
        let cfg = ScanConfig { max_y: Some(9), max_z: Some(12), ..ScanConfig::default() };
        let r = strong_injectivity_scan(&s, &cfg).unwrap();
        assert_eq!(r.pairs_tested, r.y_admissible * r.z_candidates);
        assert_eq!(r.y_candidates, r.y_admissible + r.y_not_injective + r.y_injectivity_unknown);
        assert!(r.classes_tested <= r.pairs_tested);
    }

    /// Anything settled through a hull must not be refuted directly.
    #[test]
    fn hulls_only_cover_injective_inclusions() {
        for parent in [bipyramid(), Arc::new(octahedron().0)] {
            let ix = SimplexIndex::new(&parent).unwrap();
            let masks = ix.enumerate(12, true);
            let ctx = Context::new(ix.clone(), Budget::default());
            let mut covered = 0;
            for &c in masks.iter().step_by(7) {
                if !matches!(*ctx.component(c), ComponentInfo::Model(_)) {
                    continue;
                }
                let Some(h) = ctx.hull(c) else { continue };
                let ComponentInfo::Model(src) = &*ctx.component(c) else { unreachable!() };
                for &z in masks.iter().filter(|&&z| z & c == c && z & !h == 0) {
                    let tgt = Pi1Model::new(&ix.complex(z), src.basepoint(), 10_000).unwrap();
                    assert!(component_injectivity(src, &tgt, &Budget::default()).is_yes());
                    covered += 1;
                }
            }
            assert!(covered > 0);
        }
    }
}
