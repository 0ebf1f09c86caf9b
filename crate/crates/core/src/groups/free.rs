//! Words in free groups and Stallings folding of subgroup generators.
//!
//! A letter is a nonzero `i32`: generator `k` is `k + 1`, its inverse
//! `-(k + 1)`.

use std::collections::{BTreeMap, HashMap};

pub type Letter = i32;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// Concatenates and freely reduces.
pub fn reduce_concat(parts: &[&[Letter]]) -> Vec<Letter> {
    let mut buffer: Vec<Letter> = Vec::new();
    for part in parts {
        for &x in *part {
            if buffer.last().is_some_and(|&y| x == -y) {
                buffer.pop();
            } else if x != 0 {
                buffer.push(x);
            }
        }
    }
    buffer
}

pub fn reduce(w: &[Letter]) -> Vec<Letter> {
    reduce_concat(&[w])
}

pub fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|x| -x).collect()
}

pub fn power(w: &[Letter], k: i64) -> Vec<Letter> {
    let base = if k < 0 { inverse(w) } else { w.to_vec() };
    let parts: Vec<&[Letter]> = std::iter::repeat_n(base.as_slice(), k.unsigned_abs() as usize).collect();
    reduce_concat(&parts)
}

pub fn is_reduced(w: &[Letter]) -> bool {
    w.iter().all(|&x| x != 0) && w.windows(2).all(|p| p[0] != -p[1])
}

/// Cyclic reduction: strips matching inverse letters from the two ends.
pub fn cyclically_reduce(w: &[Letter]) -> Vec<Letter> {
    let w = reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j > i + 1 && w[i] == -w[j - 1] {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

/// Exponent sum of each generator.
pub fn exponent_sums(w: &[Letter], generators: usize) -> Vec<i64> {
    let mut sums = vec![0i64; generators];
    for &l in w {
        sums[generator_of(l)] += l.signum() as i64;
    }
    sums
}

pub fn format_word(w: &[Letter], names: &[String], separator: &str) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|&l| {
            let name = &names[generator_of(l)];
            if l < 0 {
                format!("{name}^-1")
            } else {
                name.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(separator)
}

/// Parses a word over `names`. Letters may be juxtaposed (longest name
/// wins) or separated by `.` or whitespace, each optionally followed by an
/// integer power `^k`. `1` and the empty string denote the identity.
pub fn parse_word(s: &str, names: &[String]) -> Result<Vec<Letter>, String> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut pos = 0;
    while pos < s.len() {
        let c = bytes[pos];
        if c == b'.' || c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let rest = &s[pos..];
        let Some((g, name)) = names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())
        else {
            return Err(format!("unknown letter at {rest:?}"));
        };
        pos += name.len();
        let mut exp: i64 = 1;
        if s[pos..].starts_with('^') {
            let tail = &s[pos + 1..];
            let len = tail
                .char_indices()
                .take_while(|&(i, ch)| ch.is_ascii_digit() || (i == 0 && ch == '-'))
                .count();
            exp = tail[..len]
                .parse()
                .map_err(|_| format!("bad exponent after {name:?}"))?;
            pos += 1 + len;
        }
        out.extend(power(&[letter(g, false)], exp));
    }
    Ok(reduce(&out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct FoldEdge {
    from: usize,
    to: usize,
    /// Generator of the ambient free group read along the edge.
    label: usize,
    /// Word in the subgroup's source generators carried by the edge.
    source: Vec<Letter>,
}

/// Folded core graph of a finitely generated subgroup of a free group.
///
/// Each edge carries a word in the source generators so that reading any
/// closed path at the base returns both the ambient word and one of its
/// preimages.
#[derive(Clone, Debug)]
pub struct FoldedGraph {
    vertices: usize,
    edges: Vec<FoldEdge>,
    step: HashMap<(usize, Letter), (usize, Vec<Letter>)>,
}

const BASE: usize = 0;

impl FoldedGraph {
    /// Folds the bouquet of the given generator images.
    pub fn new(images: &[Vec<Letter>]) -> Self {
        let mut next_vertex = 1;
        let mut edges: Vec<Option<FoldEdge>> = Vec::new();
        for (i, w) in images.iter().enumerate() {
            let w = reduce(w);
            if w.is_empty() {
                continue;
            }
            let mut current = BASE;
            for (k, &l) in w.iter().enumerate() {
                let target = if k + 1 == w.len() {
                    BASE
                } else {
                    next_vertex += 1;
                    next_vertex - 1
                };
                let source = if k == 0 { vec![letter(i, false)] } else { Vec::new() };
                let edge = if l > 0 {
                    FoldEdge {
                        from: current,
                        to: target,
                        label: generator_of(l),
                        source,
                    }
                } else {
                    FoldEdge {
                        from: target,
                        to: current,
                        label: generator_of(l),
                        source: inverse(&source),
                    }
                };
                edges.push(Some(edge));
                current = target;
            }
        }

        while let Some((keep, drop, signed)) = find_fold(&edges) {
            fold(&mut edges, keep, drop, signed);
        }

        let live: Vec<FoldEdge> = edges.into_iter().flatten().collect();
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        ids.insert(BASE, 0);
        for e in &live {
            for v in [e.from, e.to] {
                let n = ids.len();
                ids.entry(v).or_insert(n);
            }
        }
        let edges: Vec<FoldEdge> = live
            .into_iter()
            .map(|e| FoldEdge {
                from: ids[&e.from],
                to: ids[&e.to],
                ..e
            })
            .collect();
        let mut step = HashMap::new();
        for e in &edges {
            let l = letter(e.label, false);
            step.insert((e.from, l), (e.to, e.source.clone()));
            step.insert((e.to, -l), (e.from, inverse(&e.source)));
        }
        FoldedGraph {
            vertices: ids.len(),
            edges,
            step,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Rank of the subgroup: the folded graph is connected, so this is its
    /// first Betti number.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Reads `w` from the base. Returns the reduced source word when the path
    /// exists and closes at the base, i.e. when `w` lies in the subgroup.
    pub fn read(&self, w: &[Letter]) -> Option<Vec<Letter>> {
        let mut at = BASE;
        let mut source = Vec::new();
        for &l in w {
            let (to, s) = self.step.get(&(at, l))?;
            source = reduce_concat(&[&source, s]);
            at = *to;
        }
        (at == BASE).then_some(source)
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.read(&reduce(w)).is_some()
    }
}

type Fold = (usize, usize, Letter);

fn find_fold(edges: &[Option<FoldEdge>]) -> Option<Fold> {
    let mut seen: HashMap<(usize, Letter), usize> = HashMap::new();
    for (idx, e) in edges.iter().enumerate() {
        let Some(e) = e else { continue };
        let l = letter(e.label, false);
        for key in [(e.from, l), (e.to, -l)] {
            if let Some(&other) = seen.get(&key) {
                return Some((other, idx, key.1));
            }
            seen.insert(key, idx);
        }
    }
    None
}

/// Far endpoint and source word of `e` traversed along `signed`.
fn view(e: &FoldEdge, signed: Letter) -> (usize, Vec<Letter>) {
    if signed > 0 {
        (e.to, e.source.clone())
    } else {
        (e.from, inverse(&e.source))
    }
}

fn fold(edges: &mut [Option<FoldEdge>], mut keep: usize, mut drop: usize, signed: Letter) {
    let (mut t_keep, mut p_keep) = view(edges[keep].as_ref().unwrap(), signed);
    let (mut t_drop, mut p_drop) = view(edges[drop].as_ref().unwrap(), signed);
    if t_keep == t_drop {
        edges[drop] = None;
        return;
    }
    if t_drop == BASE {
        std::mem::swap(&mut keep, &mut drop);
        std::mem::swap(&mut t_keep, &mut t_drop);
        std::mem::swap(&mut p_keep, &mut p_drop);
    }
    // Re-gauge the vertex being merged away so both edges carry the same
    // source word; closed paths at the base keep their labels.
    let g = reduce_concat(&[&inverse(&p_keep), &p_drop]);
    let g_inv = inverse(&g);
    for e in edges.iter_mut().flatten() {
        if e.from == t_drop {
            e.source = reduce_concat(&[&g, &e.source]);
        }
        if e.to == t_drop {
            e.source = reduce_concat(&[&e.source, &g_inv]);
        }
    }
    debug_assert_eq!(
        view(edges[keep].as_ref().unwrap(), signed).1,
        view(edges[drop].as_ref().unwrap(), signed).1
    );
    for e in edges.iter_mut().flatten() {
        if e.from == t_drop {
            e.from = t_keep;
        }
        if e.to == t_drop {
            e.to = t_keep;
        }
    }
    edges[drop] = None;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_reduction() {
        // ab * b^-1 a = aa
        assert_eq!(reduce_concat(&[&[1, 2], &[-2, 1]]), vec![1, 1]);
        assert_eq!(reduce(&[1, 2, -2, -1]), Vec::<Letter>::new());
        assert_eq!(cyclically_reduce(&[2, 1, 3, -2]), vec![1, 3]);
    }

    #[test]
    fn parse_and_format() {
        let n = names(&["a", "b", "ab"]);
        assert_eq!(parse_word("a.b^-1", &n).unwrap(), vec![1, -2]);
        assert_eq!(parse_word("ab", &n).unwrap(), vec![3]);
        assert_eq!(parse_word("a^2b", &n).unwrap(), vec![1, 1, 2]);
        assert_eq!(parse_word("1", &n).unwrap(), Vec::<Letter>::new());
        assert!(parse_word("c", &n).is_err());
        assert_eq!(format_word(&[1, -2], &n, "."), "a.b^-1");
    }

    #[test]
    fn folding_squares() {
        // <a^2, b> in F(a, b)
        let g = FoldedGraph::new(&[vec![1, 1], vec![2]]);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.read(&[1, 2]), None);
        assert_eq!(g.read(&[1, 1, 2]), Some(vec![1, 2]));
    }

    #[test]
    fn folding_detects_rank_drop() {
        // a, b -> x, x
        let g = FoldedGraph::new(&[vec![1], vec![1]]);
        assert_eq!(g.rank(), 1);
        // <ab, ba^-1 ... > style overlap
        let g = FoldedGraph::new(&[vec![1, 2], vec![1, 2, 1, 2]]);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn preimages_map_back() {
        let images = vec![vec![1, 2, -1], vec![1, 1], vec![2, 2, 1]];
        let g = FoldedGraph::new(&images);
        for w in [vec![1, 2, -1, 1, 1], vec![2, 2, 1, 1, 2, -1], vec![-1, -1, 1, -2, -1]] {
            let w = reduce(&w);
            let src = g.read(&w).expect("member");
            let evaluated: Vec<Letter> = src
                .iter()
                .flat_map(|&l| {
                    let img = &images[generator_of(l)];
                    if l > 0 {
                        img.clone()
                    } else {
                        inverse(img)
                    }
                })
                .collect();
            assert_eq!(reduce(&evaluated), w);
        }
    }
}
