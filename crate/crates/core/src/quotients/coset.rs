//! Todd–Coxeter coset enumeration over the trivial subgroup (HLT strategy
//! with a deduction stack and coincidence processing).

use std::fmt;

use crate::gog::Presentation;
use crate::groups::free::{self, Letter};

const NONE: usize = usize::MAX;

/// Column of a letter: generator `k` is column `2k`, its inverse `2k + 1`.
fn column(l: Letter) -> usize {
    2 * free::generator_of(l) + usize::from(l < 0)
}

fn inverse_column(c: usize) -> usize {
    c ^ 1
}

/// Action of the generators on cosets; coset 0 is the trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    /// `rows[c][column]`, `NONE` where undefined (only in incomplete tables).
    rows: Vec<Vec<usize>>,
    completed: bool,
}

impl CosetTable {
    pub fn completed(&self) -> bool {
        self.completed
    }

    /// Number of cosets, which is the group order when completed.
    pub fn order(&self) -> Option<usize> {
        self.completed.then_some(self.rows.len())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn act(&self, coset: usize, l: Letter) -> Option<usize> {
        let next = self.rows[coset][column(l)];
        (next != NONE).then_some(next)
    }

    /// Coset reached from `coset` by reading `w`.
    pub fn trace(&self, coset: usize, w: &[Letter]) -> Option<usize> {
        w.iter().try_fold(coset, |c, &l| self.act(c, l))
    }

    /// Triviality of `w` in the enumerated group (completed tables only).
    pub fn is_trivial(&self, w: &[Letter]) -> Option<bool> {
        if !self.completed {
            return None;
        }
        self.trace(0, w).map(|c| c == 0)
    }

    /// A shortest word reaching each coset from coset 0, breadth-first
    /// with generators before inverses. In a completed table coset `c` is
    /// the group element spelled by `representatives()[c]`.
    pub fn representatives(&self) -> Vec<Vec<Letter>> {
        let mut reps: Vec<Option<Vec<Letter>>> = vec![None; self.rows.len()];
        if reps.is_empty() {
            return Vec::new();
        }
        reps[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for inverse in [false, true] {
                for k in 0..self.generators {
                    let l = free::letter(k, inverse);
                    if let Some(d) = self.act(c, l) {
                        if reps[d].is_none() {
                            let mut w = reps[c].clone().unwrap();
                            w.push(l);
                            reps[d] = Some(w);
                            queue.push_back(d);
                        }
                    }
                }
            }
        }
        reps.into_iter().map(|w| w.unwrap_or_default()).collect()
    }

    /// Text dump: header line, then one row per coset listing the images
    /// under each generator and its inverse (`-` where undefined).
    pub fn dump(&self) -> String {
        let mut out = format!("cosets={} completed={}\n", self.rows.len(), self.completed);
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|&x| if x == NONE { "-".to_string() } else { x.to_string() })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    deductions: Vec<(usize, usize)>,
    /// Cyclic conjugates of relators and their inverses, by first column.
    by_first: Vec<Vec<Vec<usize>>>,
    relators: Vec<Vec<usize>>,
    cap: usize,
    defined: usize,
}

struct CapHit;

impl Enumerator {
    fn new(p: &Presentation, cap: usize) -> Self {
        let cols = 2 * p.generators.len();
        let relators: Vec<Vec<usize>> = p
            .relators
            .iter()
            .map(|r| free::cyclically_reduce(r))
            .filter(|r| !r.is_empty())
            .map(|r| r.iter().map(|&l| column(l)).collect())
            .collect();
        let mut by_first = vec![Vec::new(); cols];
        for r in &relators {
            let inv: Vec<usize> = r.iter().rev().map(|&c| inverse_column(c)).collect();
            for w in [r, &inv] {
                for k in 0..w.len() {
                    let rot: Vec<usize> = w[k..].iter().chain(&w[..k]).copied().collect();
                    if !by_first[rot[0]].contains(&rot) {
                        by_first[rot[0]].push(rot);
                    }
                }
            }
        }
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            deductions: Vec::new(),
            by_first,
            relators,
            cap,
            defined: 1,
        }
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.cols + x] = v;
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), CapHit> {
        if self.defined >= self.cap {
            return Err(CapHit);
        }
        self.defined += 1;
        let d = self.parent.len();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, d);
        self.set(d, inverse_column(x), c);
        self.deductions.push((c, x));
        Ok(())
    }

    /// Scans `w` at `c`, defining cosets to complete it when `fill`.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> Result<(), CapHit> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, inverse_column(w[j - 1])) != NONE {
                b = self.get(b, inverse_column(w[j - 1]));
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, inverse_column(w[i]), f);
                self.deductions.push((f, w[i]));
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut k = 0;
        while k < queue.len() {
            let g = queue[k];
            k += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let xi = inverse_column(x);
                self.set(d, xi, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.get(mu, x) != NONE {
                    let t = self.get(mu, x);
                    self.merge(nu, t, &mut queue);
                } else if self.get(nu, xi) != NONE {
                    let t = self.get(nu, xi);
                    self.merge(mu, t, &mut queue);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, xi, mu);
                    self.deductions.push((mu, x));
                }
            }
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.live(c) {
                continue;
            }
            let rels = std::mem::take(&mut self.by_first[x]);
            for r in &rels {
                if !self.live(c) {
                    break;
                }
                // Scanning never defines here, so no cap can be hit.
                let _ = self.scan(c, r, false);
            }
            self.by_first[x] = rels;
            let d = self.get(c, x);
            if d != NONE && self.live(d) {
                let xi = inverse_column(x);
                let rels = std::mem::take(&mut self.by_first[xi]);
                for r in &rels {
                    if !self.live(d) {
                        break;
                    }
                    let _ = self.scan(d, r, false);
                }
                self.by_first[xi] = rels;
            }
        }
    }

    fn run(&mut self) -> bool {
        let mut c = 0;
        while c < self.parent.len() {
            if self.live(c) {
                let relators = std::mem::take(&mut self.relators);
                let mut hit = false;
                for r in &relators {
                    if !self.live(c) {
                        break;
                    }
                    if self.scan(c, r, true).is_err() {
                        hit = true;
                        break;
                    }
                    self.process_deductions();
                }
                self.relators = relators;
                if hit {
                    return false;
                }
                for x in 0..self.cols {
                    if !self.live(c) {
                        break;
                    }
                    if self.get(c, x) == NONE {
                        if self.define(c, x).is_err() {
                            return false;
                        }
                        self.process_deductions();
                    }
                }
            }
            c += 1;
        }
        true
    }

    fn compact(&mut self, completed: bool) -> CosetTable {
        let live: Vec<usize> = (0..self.parent.len()).filter(|&c| self.live(c)).collect();
        let mut index = vec![NONE; self.parent.len()];
        for (i, &c) in live.iter().enumerate() {
            index[c] = i;
        }
        let rows = live
            .iter()
            .map(|&c| {
                (0..self.cols)
                    .map(|x| {
                        let d = self.get(c, x);
                        if d == NONE {
                            NONE
                        } else {
                            index[self.rep(d)]
                        }
                    })
                    .collect()
            })
            .collect();
        CosetTable {
            generators: self.cols / 2,
            rows,
            completed,
        }
    }
}

/// Enumerates cosets of the trivial subgroup, defining at most `cap` cosets
/// in total. Returns the partial table, marked incomplete, if the cap is hit.
pub fn enumerate_cosets(p: &Presentation, cap: usize) -> CosetTable {
    let mut e = Enumerator::new(p, cap.max(1));
    let completed = e.run();
    let table = e.compact(completed);
    if completed {
        replay_check(&table, p);
    }
    table
}

/// Every entry defined, inverse columns consistent, every relator closes
/// at every coset.
fn replay_check(t: &CosetTable, p: &Presentation) {
    for (c, row) in t.rows.iter().enumerate() {
        for (x, &d) in row.iter().enumerate() {
            assert!(d != NONE, "completed coset table has a hole");
            assert_eq!(t.rows[d][inverse_column(x)], c, "coset table inverse mismatch");
        }
        for r in &p.relators {
            assert_eq!(t.trace(c, r), Some(c), "relator fails in completed coset table");
        }
    }
}
