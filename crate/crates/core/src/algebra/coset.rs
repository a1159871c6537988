//! Todd-Coxeter coset enumeration, HLT strategy with a coincidence queue.

use super::group::{GroupPresentation, Letter, Word};

const NONE: usize = usize::MAX;

/// Closed coset table: row `c`, column `2g` is `c * g`, column `2g + 1` is
/// `c * g^-1`. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators
    }

    pub fn image(&self, coset: usize, l: Letter) -> usize {
        self.rows[coset][column(l)]
    }

    /// Coset reached from `start` by reading `w`.
    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |c, &l| self.image(c, l))
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetOutcome {
    Complete { table: CosetTable, defined: usize },
    Exceeded { defined: usize },
}

impl CosetOutcome {
    pub fn index(&self) -> Option<usize> {
        match self {
            CosetOutcome::Complete { table, .. } => Some(table.index()),
            CosetOutcome::Exceeded { .. } => None,
        }
    }

    pub fn defined(&self) -> usize {
        match self {
            CosetOutcome::Complete { defined, .. } | CosetOutcome::Exceeded { defined } => *defined,
        }
    }

    pub fn table(&self) -> Option<&CosetTable> {
        match self {
            CosetOutcome::Complete { table, .. } => Some(table),
            CosetOutcome::Exceeded { .. } => None,
        }
    }
}

fn column(l: Letter) -> usize {
    2 * l.generator + l.inverse as usize
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    limit: usize,
}

struct LimitReached;

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut cur = c;
        while self.parent[cur] != r {
            let next = self.parent[cur];
            self.parent[cur] = r;
            cur = next;
        }
        r
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), LimitReached> {
        if self.table.len() >= self.limit {
            return Err(LimitReached);
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) -> Result<(), LimitReached> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][x ^ 1] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup`, defining
/// at most `max_cosets` cosets in total.
pub fn coset_enumeration(p: &GroupPresentation, subgroup: &[Word], max_cosets: usize) -> CosetOutcome {
    let cols = 2 * p.num_generators();
    let encode = |w: &Word| w.letters().iter().map(|&l| column(l)).collect::<Vec<usize>>();
    let relators: Vec<Vec<usize>> = p.relators().iter().map(|r| encode(&r.cyclically_reduced())).collect();
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(encode).collect();
    if max_cosets == 0 {
        return CosetOutcome::Exceeded { defined: 0 };
    }
    let mut e =
        Enumerator { cols, table: vec![vec![NONE; cols]], parent: vec![0], queue: Vec::new(), limit: max_cosets };
    let run = |e: &mut Enumerator| -> Result<(), LimitReached> {
        for w in &subgroup {
            e.scan_and_fill(0, w)?;
        }
        let mut alpha = 0;
        while alpha < e.table.len() {
            if e.live(alpha) {
                for r in &relators {
                    e.scan_and_fill(alpha, r)?;
                    if !e.live(alpha) {
                        break;
                    }
                }
                if e.live(alpha) {
                    for x in 0..cols {
                        if e.table[alpha][x] == NONE {
                            e.define(alpha, x)?;
                        }
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    };
    if run(&mut e).is_err() {
        return CosetOutcome::Exceeded { defined: e.table.len() };
    }
    let defined = e.table.len();
    let live: Vec<usize> = (0..defined).filter(|&c| e.live(c)).collect();
    let mut renumber = vec![NONE; defined];
    for (i, &c) in live.iter().enumerate() {
        renumber[c] = i;
    }
    let mut rows = Vec::with_capacity(live.len());
    for &c in &live {
        let row: Vec<usize> = e.table[c].clone();
        rows.push(row.into_iter().map(|d| renumber[e.rep(d)]).collect());
    }
    CosetOutcome::Complete { table: CosetTable { generators: p.num_generators(), rows }, defined }
}

/// Checks that a table is closed, that inverse columns agree, that every
/// relator fixes every coset and every subgroup generator fixes coset 0, and
/// that all cosets are reachable from coset 0.
pub fn verify_coset_table(p: &GroupPresentation, subgroup: &[Word], t: &CosetTable) -> bool {
    let n = t.index();
    if n == 0 || t.num_generators() != p.num_generators() {
        return false;
    }
    let cols = 2 * t.num_generators();
    for c in 0..n {
        if t.rows[c].len() != cols {
            return false;
        }
        for x in 0..cols {
            let d = t.rows[c][x];
            if d >= n || t.rows[d][x ^ 1] != c {
                return false;
            }
        }
    }
    if p.relators().iter().any(|r| (0..n).any(|c| t.trace(c, r) != c)) {
        return false;
    }
    if subgroup.iter().any(|w| t.trace(0, w) != 0) {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(c) = stack.pop() {
        for &d in &t.rows[c] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
