//! Three-valued verdicts and search budgets.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub tietze_moves: usize,
    pub max_cosets: usize,
    pub witness_length: usize,
    /// Cap on candidate words examined by the kernel-witness search.
    pub witness_words: usize,
    pub collapse_nodes: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            tietze_moves: 10_000,
            max_cosets: 100_000,
            witness_length: 12,
            witness_words: 100_000,
            collapse_nodes: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetSpent {
    pub tietze_moves: usize,
    pub cosets: usize,
    pub witness_words: usize,
    pub collapse_nodes: usize,
}

impl BudgetSpent {
    pub fn add(&mut self, other: &BudgetSpent) {
        self.tietze_moves += other.tietze_moves;
        self.cosets += other.cosets;
        self.witness_words += other.witness_words;
        self.collapse_nodes += other.collapse_nodes;
    }
}

/// YES and NO carry a certificate; UNKNOWN carries a diagnostic note.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriVerdict<C> {
    pub value: Verdict,
    pub certificate: Option<C>,
    pub budget_spent: BudgetSpent,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl<C> TriVerdict<C> {
    pub fn yes(certificate: C, spent: BudgetSpent) -> TriVerdict<C> {
        TriVerdict { value: Verdict::Yes, certificate: Some(certificate), budget_spent: spent, note: None }
    }

    pub fn no(certificate: C, spent: BudgetSpent) -> TriVerdict<C> {
        TriVerdict { value: Verdict::No, certificate: Some(certificate), budget_spent: spent, note: None }
    }

    pub fn unknown(note: impl Into<String>, spent: BudgetSpent) -> TriVerdict<C> {
        TriVerdict { value: Verdict::Unknown, certificate: None, budget_spent: spent, note: Some(note.into()) }
    }

    pub fn is_yes(&self) -> bool {
        self.value == Verdict::Yes
    }

    pub fn is_no(&self) -> bool {
        self.value == Verdict::No
    }

    pub fn is_unknown(&self) -> bool {
        self.value == Verdict::Unknown
    }

    pub fn map<D, F: FnOnce(C) -> D>(self, f: F) -> TriVerdict<D> {
        TriVerdict {
            value: self.value,
            certificate: self.certificate.map(f),
            budget_spent: self.budget_spent,
            note: self.note,
        }
    }
}
