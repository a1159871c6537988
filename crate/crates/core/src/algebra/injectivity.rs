//! Budgeted triviality decisions and the injectivity of maps on pi_1 induced
//! by inclusions of subcomplexes.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use super::chain::exponent_matrix;
use super::coset::{coset_enumeration, CosetOutcome, CosetTable};
use super::fold::fold_images;
use super::group::{tietze_simplify_tracked, Abelianization, GroupPresentation, Letter, Pi1Model, Word};
use super::snf::{in_row_span, SmithForm};
use super::verdict::{Budget, BudgetSpent, TriVerdict};
use crate::complex::{connected_components, Complex2, Subcomplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrivialityCertificate {
    /// Tietze moves reach `< | >`.
    EmptyPresentation {
        tietze_moves: usize,
    },
    /// Enumerating cosets of the trivial subgroup closes with one coset.
    CosetIndexOne {
        cosets_defined: usize,
    },
    NontrivialAbelianization {
        abelianization: Abelianization,
    },
    /// A closed coset table of the trivial subgroup with `order > 1` rows.
    FiniteNontrivial {
        order: usize,
    },
}

/// NO when the abelianization is nontrivial or the group is finite of order
/// above one; YES when simplification or coset enumeration collapses it.
pub fn is_trivial_group(p: &GroupPresentation, budget: &Budget) -> TriVerdict<TrivialityCertificate> {
    let mut spent = BudgetSpent::default();
    let ab = p.abelianization();
    if !ab.is_trivial() {
        return TriVerdict::no(TrivialityCertificate::NontrivialAbelianization { abelianization: ab }, spent);
    }
    let s = tietze_simplify_tracked(p, budget.tietze_moves);
    spent.tietze_moves = s.moves_used();
    if s.presentation.is_empty() {
        return TriVerdict::yes(TrivialityCertificate::EmptyPresentation { tietze_moves: s.moves_used() }, spent);
    }
    let out = coset_enumeration(&s.presentation, &[], budget.max_cosets.max(1));
    spent.cosets = out.defined();
    match out.index() {
        Some(1) => TriVerdict::yes(TrivialityCertificate::CosetIndexOne { cosets_defined: out.defined() }, spent),
        Some(n) => TriVerdict::no(TrivialityCertificate::FiniteNontrivial { order: n }, spent),
        None => TriVerdict::unknown(
            format!(
                "abelianization trivial; {} generators remain; coset limit reached",
                s.presentation.num_generators()
            ),
            spent,
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceCertificate {
    /// The source group is free and the witness is a nonempty reduced word.
    FreeReduction,
    /// The witness has nonzero image in the abelianization of the source.
    Abelianization,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetCertificate {
    /// The target group is free and the image word reduces to the identity.
    FreeReduction,
    TrivialGroup,
    /// The image fixes the identity coset of a complete coset table of the
    /// trivial subgroup.
    CosetTable {
        order: usize,
    },
}

/// A loop in the subcomplex that is nontrivial there but bounds in the
/// ambient complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    pub basepoint: VertexId,
    pub loop_vertices: Vec<VertexId>,
    /// The loop as a word in the simplified generators of the source.
    pub word: String,
    pub nontrivial_in_source: SourceCertificate,
    pub trivial_in_target: TargetCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InjectivityCertificate {
    /// Both sides are graphs; the folded image has full rank.
    GraphInclusion {
        source_rank: usize,
        image_rank: usize,
    },
    TrivialSource {
        reason: TrivialityCertificate,
    },
    /// Both groups are free; the folded image has full rank.
    FreeFold {
        source_rank: usize,
        image_rank: usize,
    },
    KernelWitness(KernelWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InjectivityError {
    #[error("subcomplexes have different parents")]
    ParentMismatch,
    #[error("source is not contained in the target")]
    NotContained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInjectivity {
    pub basepoint: VertexId,
    pub verdict: TriVerdict<InjectivityCertificate>,
}

/// Per-component verdict for `pi_1(sub) -> pi_1(ambient)`.
pub fn induced_map_injectivity(
    sub: &Subcomplex,
    ambient: &Subcomplex,
    budget: &Budget,
) -> Result<Vec<ComponentInjectivity>, InjectivityError> {
    if !sub.same_parent(ambient) {
        return Err(InjectivityError::ParentMismatch);
    }
    if !sub.is_subset_of(ambient) {
        return Err(InjectivityError::NotContained);
    }
    Ok(connected_components(sub)
        .basepoints()
        .into_iter()
        .map(|b| {
            let c = Pi1Model::new(sub.cells(), b, budget.tietze_moves).expect("basepoint lies in sub");
            let a = Pi1Model::new(ambient.cells(), b, budget.tietze_moves).expect("basepoint lies in ambient");
            ComponentInjectivity { basepoint: b, verdict: component_injectivity(&c, &a, budget) }
        })
        .collect())
}

/// Decides injectivity of `pi_1(source) -> pi_1(target)` where both models
/// share a basepoint and the source component lies in the target.
pub fn component_injectivity(
    source: &Pi1Model,
    target: &Pi1Model,
    budget: &Budget,
) -> TriVerdict<InjectivityCertificate> {
    let mut spent = BudgetSpent {
        tietze_moves: source.simplification().moves_used() + target.simplification().moves_used(),
        ..BudgetSpent::default()
    };
    if source.is_trivial() {
        let reason = TrivialityCertificate::EmptyPresentation { tietze_moves: source.simplification().moves_used() };
        return TriVerdict::yes(InjectivityCertificate::TrivialSource { reason }, spent);
    }
    let kept = &source.simplification().kept;
    let images: Vec<Word> =
        kept.iter().map(|&g| target.simplify_word(&target.loop_word(&source.generator_loop(g)))).collect();

    if source.is_free() && target.is_free() {
        let out = fold_images(&images);
        return match out.kernel_element {
            None => {
                let (source_rank, image_rank) = (kept.len(), out.graph.rank());
                let cert = if source.is_graph() && target.is_graph() {
                    InjectivityCertificate::GraphInclusion { source_rank, image_rank }
                } else {
                    InjectivityCertificate::FreeFold { source_rank, image_rank }
                };
                TriVerdict::yes(cert, spent)
            }
            Some(k) => TriVerdict::no(
                InjectivityCertificate::KernelWitness(witness(
                    source,
                    &k,
                    SourceCertificate::FreeReduction,
                    TargetCertificate::FreeReduction,
                )),
                spent,
            ),
        };
    }

    if !source.is_free() {
        let triv = is_trivial_group(source.simplified(), budget);
        spent.add(&triv.budget_spent);
        if triv.is_yes() {
            let reason = triv.certificate.unwrap();
            return TriVerdict::yes(InjectivityCertificate::TrivialSource { reason }, spent);
        }
    }

    // bounded search for a kernel witness
    let source_snf = (!source.is_free()).then(|| source.simplified().relator_matrix_snf());
    if source_snf.as_ref().is_some_and(|s| s.invariant_factors().len() == kept.len()) {
        return TriVerdict::unknown("source abelianization is finite; no certifiable witness", spent);
    }
    let target_check = match TargetTriviality::new(target, budget) {
        Ok(t) => t,
        Err(defined) => {
            spent.cosets += defined;
            return TriVerdict::unknown("target word problem undecided within the coset limit", spent);
        }
    };
    spent.cosets += target_check.cosets_defined();
    let m = kept.len();
    let mut examined = 0usize;
    let mut found = None;
    let mut stack: Vec<Letter> = Vec::new();
    search_words(m, budget.witness_length, &mut stack, &mut |w: &[Letter]| {
        if examined >= budget.witness_words {
            return Search::Stop;
        }
        examined += 1;
        let word = Word::from_letters(w.iter().copied());
        let src_cert = match &source_snf {
            None => SourceCertificate::FreeReduction,
            Some(snf) if !abelian_image_vanishes(snf, &word, m) => SourceCertificate::Abelianization,
            Some(_) => return Search::Continue,
        };
        if let Some(tgt_cert) = target_check.certify(&word.substitute(&images)) {
            found = Some((word, src_cert, tgt_cert));
            return Search::Stop;
        }
        Search::Continue
    });
    spent.witness_words = examined;
    match found {
        Some((w, s, t)) => TriVerdict::no(InjectivityCertificate::KernelWitness(witness(source, &w, s, t)), spent),
        None if examined >= budget.witness_words => {
            TriVerdict::unknown(format!("kernel-witness search stopped after {examined} words"), spent)
        }
        None => TriVerdict::unknown(format!("no kernel witness up to length {}", budget.witness_length), spent),
    }
}

fn witness(source: &Pi1Model, w: &Word, s: SourceCertificate, t: TargetCertificate) -> KernelWitness {
    KernelWitness {
        basepoint: source.basepoint(),
        loop_vertices: source.walk_of_simplified_word(w),
        word: source.simplified().display_word(w),
        nontrivial_in_source: s,
        trivial_in_target: t,
    }
}

fn abelian_image_vanishes(snf: &SmithForm, w: &Word, generators: usize) -> bool {
    let row = exponent_matrix(std::slice::from_ref(w), generators);
    let v: Vec<BigInt> = (0..generators).map(|j| row[(0, j)].clone()).collect();
    in_row_span(snf, &v)
}

enum TargetTriviality {
    Trivial,
    Free,
    Table(CosetTable, usize),
}

impl TargetTriviality {
    fn new(target: &Pi1Model, budget: &Budget) -> Result<TargetTriviality, usize> {
        if target.is_trivial() {
            return Ok(TargetTriviality::Trivial);
        }
        if target.is_free() {
            return Ok(TargetTriviality::Free);
        }
        match coset_enumeration(target.simplified(), &[], budget.max_cosets.max(1)) {
            CosetOutcome::Complete { table, .. } if table.index() == 1 => Ok(TargetTriviality::Trivial),
            CosetOutcome::Complete { table, defined } => Ok(TargetTriviality::Table(table, defined)),
            CosetOutcome::Exceeded { defined } => Err(defined),
        }
    }

    fn cosets_defined(&self) -> usize {
        match self {
            TargetTriviality::Table(_, d) => *d,
            _ => 0,
        }
    }

    fn certify(&self, image: &Word) -> Option<TargetCertificate> {
        match self {
            TargetTriviality::Trivial => Some(TargetCertificate::TrivialGroup),
            TargetTriviality::Free => image.is_empty().then_some(TargetCertificate::FreeReduction),
            TargetTriviality::Table(t, _) => {
                (t.trace(0, image) == 0).then_some(TargetCertificate::CosetTable { order: t.index() })
            }
        }
    }
}

enum Search {
    Continue,
    Stop,
}

/// Visits freely reduced words over `m` generators by increasing length,
/// shortlex within a length.
fn search_words<F: FnMut(&[Letter]) -> Search>(m: usize, max_len: usize, stack: &mut Vec<Letter>, f: &mut F) {
    fn rec<F: FnMut(&[Letter]) -> Search>(m: usize, len: usize, stack: &mut Vec<Letter>, f: &mut F) -> bool {
        if stack.len() == len {
            return matches!(f(stack), Search::Continue);
        }
        for g in 0..m {
            for inverse in [false, true] {
                let l = Letter { generator: g, inverse };
                if stack.last() == Some(&l.inv()) {
                    continue;
                }
                stack.push(l);
                let go = rec(m, len, stack, f);
                stack.pop();
                if !go {
                    return false;
                }
            }
        }
        true
    }
    for len in 1..=max_len {
        if !rec(m, len, stack, f) {
            return;
        }
    }
}

/// Replays a kernel witness from scratch: the loop must be a closed walk at
/// the basepoint in `sub`, nontrivial in pi_1(sub) and trivial in
/// pi_1(ambient) under the recorded certificates.
pub fn verify_kernel_witness(
    sub: &Complex2,
    ambient: &Complex2,
    w: &KernelWitness,
    budget: &Budget,
) -> Result<(), String> {
    let walk = &w.loop_vertices;
    if walk.first() != Some(&w.basepoint) || walk.last() != Some(&w.basepoint) {
        return Err("loop is not closed at the basepoint".into());
    }
    if !sub.is_subcomplex_of(ambient) {
        return Err("source is not contained in the target".into());
    }
    let c = Pi1Model::new(sub, w.basepoint, budget.tietze_moves).map_err(|e| e.to_string())?;
    if !c.walk_lies_in_component(walk) {
        return Err("loop leaves the source complex".into());
    }
    let a = Pi1Model::new(ambient, w.basepoint, budget.tietze_moves).map_err(|e| e.to_string())?;
    let word_c = c.loop_word(walk);
    match w.nontrivial_in_source {
        SourceCertificate::FreeReduction => {
            if !c.is_free() || c.simplify_word(&word_c).is_empty() {
                return Err("loop is not a nonempty reduced word in a free source".into());
            }
        }
        SourceCertificate::Abelianization => {
            let p = c.presentation();
            let snf = p.relator_matrix_snf();
            if abelian_image_vanishes(&snf, &word_c, p.num_generators()) {
                return Err("loop vanishes in the source abelianization".into());
            }
        }
    }
    let word_a = a.loop_word(walk);
    match w.trivial_in_target {
        TargetCertificate::FreeReduction => {
            if !a.is_free() || !a.simplify_word(&word_a).is_empty() {
                return Err("image does not reduce to the identity in a free target".into());
            }
        }
        TargetCertificate::TrivialGroup => {
            if !is_trivial_group(a.presentation(), budget).is_yes() {
                return Err("target group is not certified trivial".into());
            }
        }
        TargetCertificate::CosetTable { order } => {
            let out = coset_enumeration(a.presentation(), &[], budget.max_cosets.max(1));
            let t = out.table().ok_or("coset enumeration of the target did not close")?;
            if t.index() != order || t.trace(0, &word_a) != 0 {
                return Err("image acts nontrivially on the cosets of the target".into());
            }
        }
    }
    Ok(())
}
