//! Loop words in the fundamental group of a graph of groups and their
//! pinch reduction.
//!
//! Traversing a half-edge `e` moves from `d0(e)` to `d0(bar(e))`. With the
//! relation `t_e · f_ē(c) · t_e⁻¹ = f_e(c)`, a subword `e · g · ē` with
//! `g = f_ē(c)` rewrites to `f_e(c)` at `d0(e)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::gog::{DiagramClass, GeneratorOwner, GogError, GraphOfGroups, Layout};
use crate::graph::{EdgeId, VertexId};
use crate::groups::free::{self, Letter};
use crate::groups::{Element, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("pinch reduction needs injective edge maps (input is classified {0})")]
    NotGraphOfGroups(DiagramClass),
    #[error("unsupported group class: {0}")]
    UnsupportedClass(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("word does not close up at the base: {0}")]
    NonLoop(String),
    #[error("bad word: {0}")]
    Syntax(String),
    #[error(transparent)]
    Group(GroupError),
    #[error(transparent)]
    Gog(#[from] GogError),
}

impl From<GroupError> for WordError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Unsupported(m) => WordError::UnsupportedClass(m),
            other => WordError::Group(other),
        }
    }
}

/// `g₀ e₁ g₁ … eₙ gₙ` based at `base`: `head = g₀` and `steps[i] = (eᵢ₊₁, gᵢ₊₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopWord {
    pub base: VertexId,
    pub head: Element,
    pub steps: Vec<(EdgeId, Element)>,
}

/// One application of the relation, `e · element · ē -> result`, where
/// `element = f_ē(preimage)` and `result = f_e(preimage)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pinch {
    pub edge: EdgeId,
    pub element: Element,
    pub preimage: Element,
    pub result: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinchFreeForm {
    pub word: LoopWord,
    pub pinches: Vec<Pinch>,
}

impl PinchFreeForm {
    /// Edge syllables left after reduction.
    pub fn len(&self) -> usize {
        self.word.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.steps.is_empty()
    }
}

impl LoopWord {
    pub fn identity(g: &GraphOfGroups) -> LoopWord {
        let base = g.base();
        LoopWord {
            head: g.vertex_group(&base).identity(),
            base,
            steps: Vec::new(),
        }
    }

    pub fn element(g: &GraphOfGroups, x: Element) -> LoopWord {
        LoopWord {
            base: g.base(),
            head: x,
            steps: Vec::new(),
        }
    }

    /// Builds a word from an element at the base followed by
    /// (edge, element) pairs.
    pub fn new(base: &str, head: Element, steps: Vec<(&str, Element)>) -> LoopWord {
        LoopWord {
            base: base.to_string(),
            head,
            steps: steps.into_iter().map(|(e, x)| (e.to_string(), x)).collect(),
        }
    }

    /// Path-consistency: each edge starts where the previous one ended,
    /// elements live in the right vertex groups, the path returns to base.
    pub fn check(&self, g: &GraphOfGroups) -> Result<(), WordError> {
        let graph = &g.graph;
        if !graph.vertices.contains(&self.base) {
            return Err(WordError::NonLoop(format!("base {} is not a vertex", self.base)));
        }
        g.vertex_group(&self.base).check(&self.head)?;
        let mut at = self.base.as_str();
        for (e, x) in &self.steps {
            if !graph.has_edge(e) {
                return Err(WordError::UnknownLetter(e.clone()));
            }
            if graph.origin(e) != at {
                return Err(WordError::NonLoop(format!("edge {e} does not start at {at}")));
            }
            at = graph.terminus(e);
            g.vertex_group(at).check(x)?;
        }
        if at != self.base {
            return Err(WordError::NonLoop(format!("path ends at {at}, not {}", self.base)));
        }
        Ok(())
    }

    pub fn inverse(&self, g: &GraphOfGroups) -> Result<LoopWord, WordError> {
        let graph = &g.graph;
        let mut elements: Vec<(&str, &Element)> = vec![(self.base.as_str(), &self.head)];
        for (e, x) in &self.steps {
            elements.push((graph.terminus(e), x));
        }
        let inv = |(v, x): (&str, &Element)| g.vertex_group(v).inv(x);
        let head = inv(elements[elements.len() - 1])?;
        let mut steps = Vec::new();
        for i in (0..self.steps.len()).rev() {
            let e = graph.bar_of(&self.steps[i].0).to_string();
            steps.push((e, inv(elements[i])?));
        }
        Ok(LoopWord {
            base: self.base.clone(),
            head,
            steps,
        })
    }

    pub fn concat(&self, g: &GraphOfGroups, other: &LoopWord) -> Result<LoopWord, WordError> {
        if self.base != other.base {
            return Err(WordError::NonLoop(format!(
                "cannot multiply words based at {} and {}",
                self.base, other.base
            )));
        }
        let mut w = self.clone();
        let group = g.vertex_group(&self.base);
        match w.steps.last_mut() {
            Some((_, x)) => *x = group.mul(x, &other.head)?,
            None => w.head = group.mul(&w.head, &other.head)?,
        }
        w.steps.extend(other.steps.iter().cloned());
        Ok(w)
    }

    /// Product of several words with the same base.
    pub fn product(g: &GraphOfGroups, words: &[&LoopWord]) -> Result<LoopWord, WordError> {
        let mut acc = LoopWord::identity(g);
        if let Some(first) = words.first() {
            acc.base = first.base.clone();
            acc.head = g.vertex_group(&first.base).identity();
        }
        for w in words {
            acc = acc.concat(g, w)?;
        }
        Ok(acc)
    }

    /// `u · w · u⁻¹`.
    pub fn conjugate(&self, g: &GraphOfGroups, u: &LoopWord) -> Result<LoopWord, WordError> {
        LoopWord::product(g, &[u, self, &u.inverse(g)?])
    }

    /// `x · y · x⁻¹ · y⁻¹`.
    pub fn commutator(g: &GraphOfGroups, x: &LoopWord, y: &LoopWord) -> Result<LoopWord, WordError> {
        LoopWord::product(g, &[x, y, &x.inverse(g)?, &y.inverse(g)?])
    }

    /// The same element as a word in the generators of `pi1_presentation`.
    pub fn to_letters(&self, g: &GraphOfGroups, layout: &Layout) -> Result<Vec<Letter>, WordError> {
        let graph = &g.graph;
        let mut out = g.spell_at(layout, &self.base, &self.head)?;
        for (e, x) in &self.steps {
            out.push(g.edge_letter(layout, e));
            out.extend(g.spell_at(layout, graph.terminus(e), x)?);
        }
        Ok(free::reduce(&out))
    }

    /// Text in the word grammar: `v:element` tokens and half-edge names.
    /// Identity elements are omitted unless the word is empty.
    pub fn format(&self, g: &GraphOfGroups) -> String {
        let graph = &g.graph;
        let element = |v: &str, x: &Element| {
            let group = g.vertex_group(v);
            (!group.is_identity(x)).then(|| format!("{v}:{}", group.format_element(x)))
        };
        let mut tokens: Vec<String> = element(&self.base, &self.head).into_iter().collect();
        for (e, x) in &self.steps {
            tokens.push(e.clone());
            tokens.extend(element(graph.terminus(e), x));
        }
        if tokens.is_empty() {
            let group = g.vertex_group(&self.base);
            return format!("{}:{}", self.base, group.format_element(&self.head));
        }
        tokens.join(" ")
    }
}

fn require_injective(g: &GraphOfGroups) -> Result<(), WordError> {
    g.ensure_valid()?;
    match g.classify() {
        DiagramClass::GraphOfGroups => Ok(()),
        other => Err(WordError::NotGraphOfGroups(other)),
    }
}

/// Pinch reduction, leftmost pinch first. Each pinch removes two edge
/// syllables, so at most `n / 2` pinches happen.
pub fn reduce(g: &GraphOfGroups, w: &LoopWord) -> Result<PinchFreeForm, WordError> {
    require_injective(g)?;
    reduce_unchecked(g, w)
}

pub(crate) fn reduce_unchecked(g: &GraphOfGroups, w: &LoopWord) -> Result<PinchFreeForm, WordError> {
    w.check(g)?;
    let mut r = Reducer::start(g, &w.base, true);
    r.push(w)?;
    Ok(r.finish())
}

/// Pinch reduction fed one loop word at a time; the state after each
/// `push` is the reduced form of everything pushed so far. Clone it to
/// branch.
#[derive(Clone, Debug)]
pub struct Reducer<'g> {
    g: &'g GraphOfGroups,
    base: VertexId,
    head: Element,
    stack: Vec<(EdgeId, Element)>,
    record: bool,
    pinches: Vec<Pinch>,
}

impl<'g> Reducer<'g> {
    /// Starts at the base. With `record` off, pinches are not kept.
    pub fn new(g: &'g GraphOfGroups, record: bool) -> Result<Self, WordError> {
        require_injective(g)?;
        Ok(Self::start(g, &g.base(), record))
    }

    fn start(g: &'g GraphOfGroups, base: &str, record: bool) -> Self {
        Reducer {
            g,
            base: base.to_string(),
            head: g.vertex_group(base).identity(),
            stack: Vec::new(),
            record,
            pinches: Vec::new(),
        }
    }

    /// Vertex the reduced word currently ends at.
    pub fn end(&self) -> &str {
        match self.stack.last() {
            Some((e, _)) => self.g.graph.terminus(e),
            None => &self.base,
        }
    }

    fn top(&mut self) -> &mut Element {
        match self.stack.last_mut() {
            Some((_, y)) => y,
            None => &mut self.head,
        }
    }

    /// Appends `w`, which must start where the word so far ends.
    pub fn push(&mut self, w: &LoopWord) -> Result<(), WordError> {
        if w.base != self.end() {
            return Err(WordError::NonLoop(format!("word starts at {}, expected {}", w.base, self.end())));
        }
        let g = self.g;
        let graph = &g.graph;
        let group = g.vertex_group(&w.base);
        let top = self.top();
        *top = group.mul(top, &w.head)?;
        for (e, x) in &w.steps {
            let pinch = match self.stack.last() {
                Some((prev, between)) if graph.bar_of(prev) == e => g.edge_map(e).member(between)?.preimage,
                _ => None,
            };
            let Some(c) = pinch else {
                self.stack.push((e.clone(), x.clone()));
                continue;
            };
            let (prev, between) = self.stack.pop().expect("checked above");
            let result = g.edge_map(&prev).apply(&c)?;
            let group = g.vertex_group(graph.origin(&prev));
            let top = self.top();
            *top = group.mul(&group.mul(top, &result)?, x)?;
            if self.record {
                self.pinches.push(Pinch {
                    edge: prev,
                    element: between,
                    preimage: c,
                    result,
                });
            }
        }
        Ok(())
    }

    /// Whether everything pushed so far is the identity.
    pub fn is_identity(&self) -> bool {
        self.stack.is_empty() && self.g.vertex_group(&self.base).is_identity(&self.head)
    }

    pub fn finish(self) -> PinchFreeForm {
        PinchFreeForm {
            word: LoopWord {
                base: self.base,
                head: self.head,
                steps: self.stack,
            },
            pinches: self.pinches,
        }
    }
}

/// Whether no pinch applies anywhere in `w`.
pub fn is_pinch_free(g: &GraphOfGroups, w: &LoopWord) -> Result<bool, WordError> {
    let graph = &g.graph;
    for pair in w.steps.windows(2) {
        let (e, x) = &pair[0];
        let (f, _) = &pair[1];
        if graph.bar_of(e) == f && g.edge_map(f).member(x)?.inside {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_trivial(g: &GraphOfGroups, w: &LoopWord) -> Result<bool, WordError> {
    let r = reduce(g, w)?;
    Ok(r.word.steps.is_empty() && g.vertex_group(&r.word.base).is_identity(&r.word.head))
}

pub fn equal(g: &GraphOfGroups, w1: &LoopWord, w2: &LoopWord) -> Result<bool, WordError> {
    is_trivial(g, &w1.concat(g, &w2.inverse(g)?)?)
}

/// Half-edges from the base to each vertex along the spanning tree.
fn tree_paths(g: &GraphOfGroups) -> BTreeMap<VertexId, Vec<EdgeId>> {
    let graph = &g.graph;
    let tree = g.tree();
    let base = g.base();
    let mut paths = BTreeMap::from([(base.clone(), Vec::new())]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for e in graph.edges_at(&v) {
            if !tree.contains(&graph.orbit_of(e)) {
                continue;
            }
            let w = graph.terminus(e).to_string();
            if !paths.contains_key(&w) {
                let mut p = paths[&v].clone();
                p.push(e.clone());
                paths.insert(w.clone(), p);
                queue.push_back(w);
            }
        }
    }
    paths
}

/// A generator-level piece of a π1 element: a vertex-group element or a
/// half-edge traversal, each reached from the base along the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syllable {
    Vertex(VertexId, Element),
    Edge(EdgeId),
}

/// Product of the syllables, each conjugated into a loop at the base by
/// tree paths.
pub fn word_from_syllables(g: &GraphOfGroups, syllables: &[Syllable]) -> Result<LoopWord, WordError> {
    g.ensure_valid()?;
    let graph = &g.graph;
    let paths = tree_paths(g);
    let back = |v: &str| -> Vec<EdgeId> { paths[v].iter().rev().map(|e| graph.bar_of(e).to_string()).collect() };
    let mut acc = LoopWord::identity(g);
    for s in syllables {
        let mut piece = LoopWord::identity(g);
        let push = |piece: &mut LoopWord, e: &EdgeId| {
            let id = g.vertex_group(graph.terminus(e)).identity();
            piece.steps.push((e.clone(), id));
        };
        match s {
            Syllable::Vertex(v, x) => {
                g.vertex_group(v).check(x)?;
                for e in &paths[v] {
                    push(&mut piece, e);
                }
                match piece.steps.last_mut() {
                    Some((_, y)) => *y = x.clone(),
                    None => piece.head = x.clone(),
                }
                for e in back(v) {
                    push(&mut piece, &e);
                }
            }
            Syllable::Edge(e) => {
                if !graph.has_edge(e) {
                    return Err(WordError::UnknownLetter(e.clone()));
                }
                for f in paths[graph.origin(e)].iter().chain([e]).cloned().chain(back(graph.terminus(e))) {
                    push(&mut piece, &f);
                }
            }
        }
        acc = acc.concat(g, &piece)?;
    }
    acc.check(g)?;
    Ok(acc)
}

/// Syllables for a word in the generators of `pi1_presentation`.
pub fn syllables_of_letters(g: &GraphOfGroups, letters: &[Letter]) -> Result<Vec<Syllable>, WordError> {
    let p = g.pi1_presentation()?;
    let graph = &g.graph;
    letters
        .iter()
        .map(|&l| {
            let gen = p
                .generators
                .get(free::generator_of(l))
                .ok_or_else(|| WordError::UnknownLetter(l.to_string()))?;
            Ok(match &gen.owner {
                GeneratorOwner::Vertex(v, i) => {
                    let group = g.vertex_group(v);
                    let x = group.generators()[*i].clone();
                    let x = if l < 0 { group.inv(&x)? } else { x };
                    Syllable::Vertex(v.clone(), x)
                }
                GeneratorOwner::Edge(plus) => {
                    let e = if l < 0 { graph.bar_of(plus).to_string() } else { plus.clone() };
                    Syllable::Edge(e)
                }
                GeneratorOwner::Free => return Err(WordError::UnknownLetter(gen.name.clone())),
            })
        })
        .collect()
}

/// Loop word for a word in the generators of `pi1_presentation`: vertex
/// letters and stable letters are reached from the base along tree paths.
pub fn word_from_presentation_letters(g: &GraphOfGroups, letters: &[Letter]) -> Result<LoopWord, WordError> {
    g.ensure_valid()?;
    word_from_syllables(g, &syllables_of_letters(g, letters)?)
}

/// Parses the word grammar. If every token names a presentation generator
/// (optionally with `^-1`), the word is read in presentation letters.
/// Otherwise tokens are `v:element` (multiplied into the current vertex
/// element) and half-edge names `e` or `e^-1` (the latter traverses
/// `bar(e)`), starting and ending at the base.
pub fn parse_word(g: &GraphOfGroups, s: &str) -> Result<LoopWord, WordError> {
    g.ensure_valid()?;
    let p = g.pi1_presentation()?;
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let is_generator = |t: &str| p.generator_index(t.strip_suffix("^-1").unwrap_or(t)).is_some();
    if tokens.iter().all(|t| *t == "1" || is_generator(t)) {
        let letters = p.parse_word(s).map_err(|e| WordError::UnknownLetter(e.to_string()))?;
        return word_from_presentation_letters(g, &letters);
    }
    let graph = &g.graph;
    let mut w = LoopWord::identity(g);
    let mut at = w.base.clone();
    for tok in tokens {
        if let Some((v, x)) = tok.split_once(':') {
            if v != at {
                return Err(WordError::NonLoop(format!("element {tok} given at {at}")));
            }
            let group = g.vertex_group(v);
            let x = group.parse_element(x)?;
            let slot = match w.steps.last_mut() {
                Some((_, y)) => y,
                None => &mut w.head,
            };
            *slot = group.mul(slot, &x)?;
            continue;
        }
        let e = match tok.strip_suffix("^-1") {
            Some(name) if graph.has_edge(name) => graph.bar_of(name).to_string(),
            Some(name) => return Err(WordError::UnknownLetter(name.to_string())),
            None if graph.has_edge(tok) => tok.to_string(),
            None => return Err(WordError::UnknownLetter(tok.to_string())),
        };
        if graph.origin(&e) != at {
            return Err(WordError::NonLoop(format!("edge {e} does not start at {at}")));
        }
        at = graph.terminus(&e).to_string();
        w.steps.push((e, g.vertex_group(&at).identity()));
    }
    w.check(g)?;
    Ok(w)
}

impl fmt::Display for LoopWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.base, self.head)?;
        for (e, x) in &self.steps {
            write!(f, " {e} {x:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupDesc, Hom};
    use crate::quotients::IntMatrix;
    use num_bigint::BigInt;

    fn v(k: i64) -> Element {
        Element::Vector(vec![BigInt::from(k)])
    }

    fn hnn(along: i64, back: i64) -> GraphOfGroups {
        let a = GroupDesc::free_abelian_named(&["a"]);
        let c = GroupDesc::free_abelian_named(&["c"]);
        let m = |k: i64| Hom::from_matrix(c.clone(), a.clone(), IntMatrix::from_rows(&[vec![k]], 1)).unwrap();
        let mut g = GraphOfGroups::new();
        g.add_vertex("v", a.clone()).unwrap();
        g.add_edge("t", "t_bar", "v", "v", c.clone(), m(along), m(back)).unwrap();
        g
    }

    fn atat(g: &GraphOfGroups) -> LoopWord {
        parse_word(g, "a t a^-1 t^-1").unwrap()
    }

    #[test]
    fn klein_reduces_to_a_squared() {
        let g = hnn(-1, 1);
        let r = reduce(&g, &atat(&g)).unwrap();
        assert!(r.word.steps.is_empty());
        assert_eq!(r.word.head, v(2));
        assert_eq!(r.pinches.len(), 1);
    }

    #[test]
    fn torus_commutator_is_trivial() {
        let g = hnn(1, 1);
        assert!(is_trivial(&g, &atat(&g)).unwrap());
        let at = parse_word(&g, "a t").unwrap();
        let ta = parse_word(&g, "t a").unwrap();
        assert!(equal(&g, &at, &ta).unwrap());
        let k = hnn(-1, 1);
        let at = parse_word(&k, "a t").unwrap();
        let ta = parse_word(&k, "t a").unwrap();
        assert!(!equal(&k, &at, &ta).unwrap());
    }

    #[test]
    fn baumslag_solitar_commutators() {
        // t a t^-1 = a^2, so a t a^-1 t^-1 = a^-1
        let g = hnn(2, 1);
        let r = reduce(&g, &atat(&g)).unwrap();
        assert!(r.word.steps.is_empty());
        assert_eq!(r.word.head, v(-1));
        assert!(!is_trivial(&g, &atat(&g)).unwrap());
        let w = parse_word(&g, "a t^-1 a^-1 t").unwrap();
        let r = reduce(&g, &w).unwrap();
        assert_eq!(r.word.steps.len(), 2);
        assert!(is_pinch_free(&g, &r.word).unwrap());
    }

    #[test]
    fn loop_grammar_matches_presentation_grammar() {
        let g = hnn(2, 1);
        let w = parse_word(&g, "v:[1] t v:[-1] t_bar").unwrap();
        assert_eq!(w, atat(&g));
        let w2 = parse_word(&g, "v:[1] t v:[-1] t^-1").unwrap();
        assert_eq!(w, w2);
        assert_eq!(w.format(&g), "v:[1] t v:[-1] t_bar");
    }

    #[test]
    fn non_closing_word_rejected() {
        let mut g = hnn(1, 1);
        let one = GroupDesc::trivial();
        let c = GroupDesc::trivial();
        g.add_vertex("w", one.clone()).unwrap();
        let z = g.vertex_group("v").clone();
        g.add_edge("s", "s_bar", "v", "w", c.clone(), Hom::trivial(&c, &z), Hom::trivial(&c, &one))
            .unwrap();
        assert!(matches!(parse_word(&g, "v:[1] s"), Err(WordError::NonLoop(_))));
        // as a presentation letter, s is read along the tree
        parse_word(&g, "s").unwrap();
    }

    #[test]
    fn inverse_and_identity() {
        let g = hnn(2, 1);
        let w = parse_word(&g, "v:[3] t v:[1] t v:[-2] t_bar").unwrap();
        let ww = w.concat(&g, &w.inverse(&g).unwrap()).unwrap();
        assert!(is_trivial(&g, &ww).unwrap());
    }

    #[test]
    fn diagrams_are_rejected() {
        let g = hnn(0, 1);
        assert_eq!(
            reduce(&g, &atat(&g)),
            Err(WordError::NotGraphOfGroups(DiagramClass::Diagram))
        );
    }

    #[test]
    fn presentation_letters_at_other_vertex() {
        let a = GroupDesc::free_abelian_named(&["a"]);
        let b = GroupDesc::free_abelian_named(&["b"]);
        let c = GroupDesc::free_abelian_named(&["c"]);
        let mut g = GraphOfGroups::new();
        g.add_vertex("u", a.clone()).unwrap();
        g.add_vertex("w", b.clone()).unwrap();
        let m = |d: &GroupDesc, k: i64| Hom::from_matrix(c.clone(), d.clone(), IntMatrix::from_rows(&[vec![k]], 1)).unwrap();
        g.add_edge("e", "e_bar", "u", "w", c.clone(), m(&a, 2), m(&b, 3)).unwrap();
        let w = parse_word(&g, "b").unwrap();
        assert_eq!(w.steps.len(), 2);
        assert_eq!(w.steps[0].0, "e");
        assert!(w.check(&g).is_ok());
        // a^2 = b^3 in the amalgam
        let r = parse_word(&g, "b b b a^-1 a^-1").unwrap();
        assert!(is_trivial(&g, &r).unwrap());
        let comm = parse_word(&g, "a b a^-1 b^-1").unwrap();
        let red = reduce(&g, &comm).unwrap();
        assert_eq!(red.word.steps.len(), 4);
    }
}
