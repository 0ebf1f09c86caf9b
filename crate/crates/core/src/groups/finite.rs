use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use super::free::{letter, Letter};
use super::GroupError;

/// A finite group given by its full multiplication table.
pub struct FiniteTable {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
    generators: OnceLock<Vec<usize>>,
    spellings: OnceLock<Vec<Vec<Letter>>>,
}

impl FiniteTable {
    pub const MAX_ORDER: usize = 4096;

    /// Validates the table against the group axioms.
    pub fn new(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = labels.len();
        let bad = |msg: String| Err(GroupError::InvalidTable(msg));
        if n == 0 {
            return bad("a group has at least one element".into());
        }
        if n > Self::MAX_ORDER {
            return bad(format!("order {n} exceeds the cap of {}", Self::MAX_ORDER));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || ":#.^\"".contains(c)) {
                return bad(format!("element label {l:?} must be non-empty without whitespace or any of :#.^\""));
            }
            if labels[..i].contains(l) {
                return bad(format!("duplicate element label {l:?}"));
            }
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return bad(format!("multiplication table must be {n}x{n}"));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return bad("table entry out of range".into());
        }
        let Some(id) = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)) else {
            return bad("no identity element".into());
        };
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| mul[x][y] == id && mul[y][x] == id) {
                Some(y) => inv[x] = y,
                None => return bad(format!("element {} has no inverse", labels[x])),
            }
        }
        let table = FiniteTable {
            labels,
            mul,
            inv,
            id,
            generators: OnceLock::new(),
            spellings: OnceLock::new(),
        };
        table.check_associative()?;
        Ok(table)
    }

    /// Light's test: associativity needs checking only with a generating
    /// set in the middle position.
    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order();
        let mut gens = Vec::new();
        let mut reached = vec![false; n];
        for x in 0..n {
            if reached[x] {
                continue;
            }
            gens.push(x);
            reached = vec![false; n];
            let mut queue: VecDeque<usize> = gens.iter().copied().collect();
            for &g in &gens {
                reached[g] = true;
            }
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.mul[y][g];
                    if !reached[z] {
                        reached[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        for &s in &gens {
            for x in 0..n {
                let xs = self.mul[x][s];
                for y in 0..n {
                    if self.mul[xs][y] != self.mul[x][self.mul[s][y]] {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({}, {}, {})",
                            self.labels[x], self.labels[s], self.labels[y]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(labels, mul).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Dihedral group of order `2n`: rotations `r0..`, reflections `s0..`.
    pub fn dihedral(n: usize) -> Self {
        let labels = (0..n)
            .map(|i| format!("r{i}"))
            .chain((0..n).map(|i| format!("s{i}")))
            .collect();
        // r_i = rot^i, s_i = rot^i * s; s * rot = rot^-1 * s
        let mul = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (i, fa) = (a % n, a >= n);
                        let (j, fb) = (b % n, b >= n);
                        let k = if fa { (i + n - j) % n } else { (i + j) % n };
                        if fa != fb {
                            n + k
                        } else {
                            k
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(labels, mul).expect("dihedral table is a group")
    }

    /// Symmetric group on `n` points, elements in lexicographic order.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        let mut current: Vec<usize> = (0..n).collect();
        while next_permutation(&mut current) {
            perms.push(current.clone());
        }
        Self::from_permutations(perms)
    }

    /// Alternating group on `n` points.
    pub fn alternating(n: usize) -> Self {
        let s = Self::symmetric(n);
        let even: Vec<usize> = (0..s.order())
            .filter(|&i| permutation_parity(&parse_perm(&s.labels[i])) == 0)
            .collect();
        s.subgroup(&even)
    }

    /// Quaternion group of order 8.
    pub fn quaternion() -> Self {
        // elements ±1, ±i, ±j, ±k encoded as (sign, unit)
        let units = ["1", "i", "j", "k"];
        let labels: Vec<String> = [false, true]
            .iter()
            .flat_map(|&neg| units.iter().map(move |u| if neg { format!("-{u}") } else { u.to_string() }))
            .collect();
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mul = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (neg, u) = unit_mul(a % 4, b % 4);
                        let sign = (a >= 4) ^ (b >= 4) ^ neg;
                        u + if sign { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        Self::new(labels, mul).expect("quaternion table is a group")
    }

    fn from_permutations(perms: Vec<Vec<usize>>) -> Self {
        let labels: Vec<String> = perms.iter().map(|p| format_perm(p)).collect();
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        // (a * b)(x) = b(a(x)): act left to right
        let mul = perms
            .iter()
            .map(|a| perms.iter().map(|b| index(&a.iter().map(|&x| b[x]).collect())).collect())
            .collect();
        Self::new(labels, mul).expect("permutation table is a group")
    }

    pub fn elementary_abelian(m: usize) -> Self {
        let mut g = Self::trivial();
        for _ in 0..m {
            g = g.direct_product(&Self::cyclic(2)).expect("small");
        }
        g
    }

    /// Direct product; elements are ordered lexicographically by
    /// (left index, right index).
    pub fn direct_product(&self, other: &FiniteTable) -> Result<Self, GroupError> {
        let (n, m) = (self.order(), other.order());
        if n * m > Self::MAX_ORDER {
            return Err(GroupError::CapExceeded(n * m));
        }
        let labels = (0..n * m)
            .map(|k| {
                let (a, b) = (k / m, k % m);
                if n == 1 {
                    other.labels[b].clone()
                } else if m == 1 {
                    self.labels[a].clone()
                } else {
                    format!("({},{})", self.labels[a], other.labels[b])
                }
            })
            .collect();
        let mul = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul[x / m][y / m] * m + other.mul[x % m][y % m])
                    .collect()
            })
            .collect();
        Self::new(labels, mul)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let n = self.order() as i64;
        let e = k.rem_euclid(n);
        let mut acc = self.id;
        for _ in 0..e {
            acc = self.mul[acc][a];
        }
        acc
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.id] = true;
        let mut queue = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x][g];
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// The subgroup on the given (closed) element set, labels preserved.
    /// Element `k` of the result is `elements[k]`.
    pub fn subgroup(&self, elements: &[usize]) -> FiniteTable {
        let pos = |x: usize| elements.iter().position(|&e| e == x).expect("subset is closed");
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let mul = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos(self.mul[a][b])).collect())
            .collect();
        FiniteTable::new(labels, mul).expect("subgroup of a group is a group")
    }

    /// A generating set of minimum size, the lexicographically first among
    /// those. Exhaustive over subsets; intended for small orders.
    pub fn minimal_generating_set(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let n = self.order();
            if n == 1 {
                return Vec::new();
            }
            let candidates: Vec<usize> = (0..n).filter(|&x| x != self.id).collect();
            for k in 1..=candidates.len() {
                let mut pick: Vec<usize> = (0..k).collect();
                loop {
                    let gens: Vec<usize> = pick.iter().map(|&i| candidates[i]).collect();
                    if self.closure(&gens).len() == n {
                        return gens;
                    }
                    if !next_combination(&mut pick, candidates.len()) {
                        break;
                    }
                }
            }
            unreachable!("the whole group generates itself")
        })
    }

    pub fn rank(&self) -> usize {
        self.minimal_generating_set().len()
    }

    /// Shortest word in the minimal generating set for every element
    /// (breadth-first, generators in order, positive letters before
    /// inverses).
    pub fn spellings(&self) -> &[Vec<Letter>] {
        self.spellings.get_or_init(|| {
            let gens = self.minimal_generating_set();
            let mut words: Vec<Option<Vec<Letter>>> = vec![None; self.order()];
            words[self.id] = Some(Vec::new());
            let mut queue = VecDeque::from([self.id]);
            while let Some(x) = queue.pop_front() {
                for inverse in [false, true] {
                    for (k, &g) in gens.iter().enumerate() {
                        let s = if inverse { self.inv[g] } else { g };
                        let y = self.mul[x][s];
                        if words[y].is_none() {
                            let mut w = words[x].clone().unwrap();
                            w.push(letter(k, inverse));
                            words[y] = Some(w);
                            queue.push_back(y);
                        }
                    }
                }
            }
            words.into_iter().map(|w| w.expect("generating set reaches all")).collect()
        })
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.id {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..a).all(|b| self.mul[a][b] == self.mul[b][a]))
    }
}

impl Clone for FiniteTable {
    fn clone(&self) -> Self {
        FiniteTable {
            labels: self.labels.clone(),
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            id: self.id,
            generators: self.generators.clone(),
            spellings: self.spellings.clone(),
        }
    }
}

impl PartialEq for FiniteTable {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.mul == other.mul
    }
}

impl Eq for FiniteTable {}

impl fmt::Debug for FiniteTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteTable(order {}, {:?})", self.order(), self.labels)
    }
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn format_perm(p: &[usize]) -> String {
    format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn parse_perm(s: &str) -> Vec<usize> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect()
}

fn permutation_parity(p: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_groups_validate() {
        assert_eq!(FiniteTable::symmetric(3).order(), 6);
        assert_eq!(FiniteTable::alternating(4).order(), 12);
        assert_eq!(FiniteTable::dihedral(4).order(), 8);
        assert!(!FiniteTable::dihedral(4).is_abelian());
        assert!(!FiniteTable::quaternion().is_abelian());
        assert_eq!(FiniteTable::elementary_abelian(3).order(), 8);
    }

    #[test]
    fn rejects_non_groups() {
        let labels = vec!["e".to_string(), "x".to_string()];
        assert!(FiniteTable::new(labels.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteTable::new(labels, vec![vec![0, 1]]).is_err());
        // a 3-element loop that is not associative
        let labels: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let quasi = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(FiniteTable::new(labels, quasi).is_err());
    }

    #[test]
    fn ranks_by_exhaustive_search() {
        assert_eq!(FiniteTable::trivial().rank(), 0);
        assert_eq!(FiniteTable::cyclic(6).rank(), 1);
        assert_eq!(FiniteTable::elementary_abelian(3).rank(), 3);
        assert_eq!(FiniteTable::symmetric(3).rank(), 2);
        assert_eq!(FiniteTable::quaternion().rank(), 2);
    }

    #[test]
    fn spellings_evaluate_back() {
        let g = FiniteTable::dihedral(5);
        let gens = g.minimal_generating_set().to_vec();
        for (x, w) in g.spellings().iter().enumerate() {
            let mut acc = g.identity();
            for &l in w {
                let s = gens[super::super::free::generator_of(l)];
                acc = g.mul(acc, if l > 0 { s } else { g.inv(s) });
            }
            assert_eq!(acc, x);
        }
    }
}
