//! Structural moves: contracting an edge with an isomorphic side,
//! collapsing a spanning tree, replacing a diagram by the graph of images
//! in a quotient of its fundamental group, and splitting along one edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::gog::{GeneratorOwner, GogError, GraphOfGroups, Layout, Presentation, RelatorSource};
use crate::graph::{EdgeOrbit, GraphError, VertexId};
use crate::groups::free::{self, Letter};
use crate::groups::{Element, FiniteTable, GroupDesc, GroupError, Hom};
use crate::quotients::{
    column_hnf, AbelianQuotient, ColumnHnf, CosetTable, IntMatrix, PreparedOracle, QuotientError, QuotientOracle,
    Soundness,
};
use crate::words::{self, LoopWord, Syllable, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("edge {0}: edge map is not an isomorphism")]
    NotIso(String),
    #[error("image of {0} cannot be represented: {1}")]
    UnrepresentableImage(String, String),
    #[error("oracle {0} does not apply: {1}")]
    OracleInapplicable(QuotientOracle, String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Contracts the non-loop edge `e` whose map `f_e` is an isomorphism. The
/// merged vertex carries the group of `d0(bar(e))`; a half-edge `e'` that
/// started at `d0(e)` gets the map `f_ē ∘ f_e⁻¹ ∘ f_e'`.
pub fn contract_edge(g: &GraphOfGroups, e: &str) -> Result<GraphOfGroups, MoveError> {
    g.ensure_valid()?;
    let graph = &g.graph;
    if !graph.has_edge(e) {
        return Err(GraphError::UnknownEdge(e.to_string()).into());
    }
    if graph.is_loop(e) {
        return Err(GraphError::LoopContraction(e.to_string()).into());
    }
    let fe = g.edge_map(e);
    if !fe.is_iso()? {
        return Err(MoveError::NotIso(e.to_string()));
    }
    let transport = g.edge_map(graph.bar_of(e)).compose(&fe.inverse()?)?;
    let absorbed = graph.origin(e).to_string();
    let orbit = graph.orbit_of(e);
    let (new_graph, merge) = graph.contract_edge_graph(e)?;
    let tree = g.tree.as_ref().and_then(|t| {
        t.contains(&orbit).then(|| t.iter().filter(|o| **o != orbit).cloned().collect())
    });
    let mut emap = BTreeMap::new();
    for (f, h) in &g.emap {
        if orbit.contains(f) {
            continue;
        }
        let h = if graph.origin(f) == absorbed {
            transport.compose(h)?
        } else {
            h.clone()
        };
        emap.insert(f.clone(), h);
    }
    let mut vgroup = g.vgroup.clone();
    vgroup.remove(&absorbed);
    let mut egroup = g.egroup.clone();
    egroup.remove(&orbit);
    Ok(GraphOfGroups {
        graph: new_graph,
        vgroup,
        egroup,
        emap,
        base: g.base.as_ref().map(|b| merge[b].clone()),
        tree,
    })
}

fn tree_degree(tree: &BTreeSet<EdgeOrbit>, g: &GraphOfGroups, v: &str) -> usize {
    tree.iter()
        .filter(|o| g.graph.origin(&o.plus) == v || g.graph.origin(&o.minus) == v)
        .count()
}

/// Contracts every tree orbit, one at a time, leaving a single vertex.
///
/// At each step a tree leaf whose own side is an isomorphism is absorbed
/// first, since that leaves the other tree maps untouched; otherwise any
/// isomorphic side is used. Within an orbit the positive half-edge is
/// tried before its partner.
pub fn collapse_tree(g: &GraphOfGroups) -> Result<GraphOfGroups, MoveError> {
    g.ensure_valid()?;
    let is_iso = |g: &GraphOfGroups, e: &str| g.edge_map(e).is_iso();
    for o in g.tree() {
        if !is_iso(g, &o.plus)? && !is_iso(g, &o.minus)? {
            return Err(MoveError::NotIso(o.to_string()));
        }
    }
    match collapse_until_stuck(g)? {
        Ok(h) => Ok(h),
        Err((_, o)) => Err(MoveError::NotIso(o.to_string())),
    }
}

/// Runs the collapse. `Err((h, o))` means every tree orbit of the partly
/// collapsed `h` has two non-isomorphic sides, `o` being the first.
pub(crate) fn collapse_until_stuck(
    g: &GraphOfGroups,
) -> Result<Result<GraphOfGroups, (GraphOfGroups, EdgeOrbit)>, MoveError> {
    let is_iso = |g: &GraphOfGroups, e: &str| g.edge_map(e).is_iso();
    let mut cur = g.clone();
    cur.tree = Some(g.tree());
    loop {
        let tree = cur.tree();
        if tree.is_empty() {
            break;
        }
        let mut pick = None;
        'leaf: for o in &tree {
            for e in [&o.plus, &o.minus] {
                if tree_degree(&tree, &cur, cur.graph.origin(e)) == 1 && is_iso(&cur, e)? {
                    pick = Some(e.clone());
                    break 'leaf;
                }
            }
        }
        if pick.is_none() {
            'any: for o in &tree {
                for e in [&o.plus, &o.minus] {
                    if is_iso(&cur, e)? {
                        pick = Some(e.clone());
                        break 'any;
                    }
                }
            }
        }
        let Some(e) = pick else {
            let o = tree.iter().next().expect("nonempty").clone();
            return Ok(Err((cur, o)));
        };
        cur = contract_edge(&cur, &e)?;
    }
    if g.tree.is_none() {
        cur.tree = None;
    }
    Ok(Ok(cur))
}

/// Element of the oracle quotient: a coset (= group element) of a
/// completed table, or abelianization coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Point {
    Coset(usize),
    Coords(Vec<BigInt>),
}

enum Model {
    Cosets { table: CosetTable, reps: Vec<Vec<Letter>> },
    Abelian { q: AbelianQuotient, moduli: Vec<BigInt> },
}

impl Model {
    fn point(&self, w: &[Letter]) -> Point {
        match self {
            Model::Cosets { table, .. } => Point::Coset(table.trace(0, w).expect("completed table")),
            Model::Abelian { q, .. } => Point::Coords(q.word_coordinates(w)),
        }
    }

    fn identity(&self) -> Point {
        self.point(&[])
    }

    fn mul(&self, a: &Point, b: &Point) -> Point {
        match (self, a, b) {
            (Model::Cosets { table, reps }, Point::Coset(a), Point::Coset(b)) => {
                Point::Coset(table.trace(*a, &reps[*b]).expect("completed table"))
            }
            (Model::Abelian { moduli, .. }, Point::Coords(a), Point::Coords(b)) => Point::Coords(
                a.iter()
                    .zip(b)
                    .zip(moduli)
                    .map(|((x, y), d)| {
                        let s = x + y;
                        if d.is_zero() {
                            s
                        } else {
                            num_integer::Integer::mod_floor(&s, d)
                        }
                    })
                    .collect(),
            ),
            _ => unreachable!("points come from the same model"),
        }
    }

    /// `t⁻¹ · p · t`.
    fn conjugate(&self, t: Letter, p: &Point) -> Point {
        match (self, p) {
            (Model::Cosets { table, reps }, Point::Coset(c)) => {
                let w = free::reduce_concat(&[&[-t], &reps[*c], &[t]]);
                Point::Coset(table.trace(0, &w).expect("completed table"))
            }
            _ => p.clone(),
        }
    }

    fn torsion_len(&self) -> usize {
        match self {
            Model::Cosets { .. } => 0,
            Model::Abelian { moduli, .. } => moduli.iter().filter(|d| !d.is_zero()).count(),
        }
    }

    fn label(&self, p: &Point) -> String {
        match p {
            Point::Coset(c) => format!("q{c}"),
            Point::Coords(x) => {
                let t: Vec<String> = x[..self.torsion_len()].iter().map(|k| k.to_string()).collect();
                format!("q{}", t.join("_"))
            }
        }
    }
}

/// A subgroup of the oracle quotient in one of the representable classes.
enum Image {
    Finite { points: Vec<Point>, group: GroupDesc },
    Lattice { torsion: usize, basis: Vec<Vec<BigInt>>, solver: ColumnHnf, group: GroupDesc },
}

impl Image {
    fn group(&self) -> &GroupDesc {
        match self {
            Image::Finite { group, .. } | Image::Lattice { group, .. } => group,
        }
    }

    fn element_of(&self, p: &Point) -> Option<Element> {
        match (self, p) {
            (Image::Finite { points, .. }, _) => points.iter().position(|q| q == p).map(Element::Index),
            (Image::Lattice { torsion, solver, .. }, Point::Coords(x)) => {
                if x[..*torsion].iter().any(|k| !k.is_zero()) {
                    return None;
                }
                solver.solve(&x[*torsion..]).map(Element::Vector)
            }
            _ => None,
        }
    }

    /// Generators of the subgroup as quotient points.
    fn generator_points(&self) -> Vec<Point> {
        match self {
            Image::Finite { points, group } => group
                .generators()
                .iter()
                .map(|x| match x {
                    Element::Index(i) => points[*i].clone(),
                    _ => unreachable!("finite group"),
                })
                .collect(),
            Image::Lattice { torsion, basis, .. } => basis
                .iter()
                .map(|b| {
                    let mut c = vec![BigInt::zero(); *torsion];
                    c.extend(b.iter().cloned());
                    Point::Coords(c)
                })
                .collect(),
        }
    }

    /// All points for finite images; the basis for lattices.
    fn domain(&self) -> Vec<Point> {
        match self {
            Image::Finite { points, .. } => points.clone(),
            Image::Lattice { .. } => self.generator_points(),
        }
    }
}

fn finite_image(model: &Model, what: &str, gens: &[Point]) -> Result<Image, MoveError> {
    let mut points = vec![model.identity()];
    let mut index: HashMap<Point, usize> = HashMap::from([(points[0].clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let q = model.mul(&points[i], g);
            if index.contains_key(&q) {
                continue;
            }
            if points.len() == FiniteTable::MAX_ORDER {
                return Err(MoveError::UnrepresentableImage(
                    what.to_string(),
                    format!("more than {} elements", FiniteTable::MAX_ORDER),
                ));
            }
            index.insert(q.clone(), points.len());
            queue.push_back(points.len());
            points.push(q);
        }
    }
    let mul = points
        .iter()
        .map(|a| points.iter().map(|b| index[&model.mul(a, b)]).collect())
        .collect();
    let labels = points.iter().map(|p| model.label(p)).collect();
    let table = FiniteTable::new(labels, mul)?;
    Ok(Image::Finite {
        points,
        group: GroupDesc::finite(table),
    })
}

fn build_image(model: &Model, what: &str, prefix: &str, gens: &[Point]) -> Result<Image, MoveError> {
    let Model::Abelian { moduli, .. } = model else {
        return finite_image(model, what, gens);
    };
    let torsion = model.torsion_len();
    let parts = |p: &Point| -> (Vec<BigInt>, Vec<BigInt>) {
        let Point::Coords(x) = p else { unreachable!("abelian model") };
        (x[..torsion].to_vec(), x[torsion..].to_vec())
    };
    let free_zero = gens.iter().all(|p| parts(p).1.iter().all(Zero::is_zero));
    let torsion_zero = gens.iter().all(|p| parts(p).0.iter().all(Zero::is_zero));
    if free_zero {
        return finite_image(model, what, gens);
    }
    if !torsion_zero {
        return Err(MoveError::UnrepresentableImage(
            what.to_string(),
            "image mixes torsion and free coordinates".into(),
        ));
    }
    let free_rank = moduli.len() - torsion;
    let columns: Vec<Vec<BigInt>> = gens.iter().map(|p| parts(p).1).collect();
    let hnf = column_hnf(&IntMatrix::from_columns(&columns, free_rank));
    let basis: Vec<Vec<BigInt>> = (0..hnf.rank()).map(|j| hnf.hnf.column(j)).collect();
    let solver = column_hnf(&IntMatrix::from_columns(&basis, free_rank));
    let names: Vec<String> = (1..=basis.len()).map(|i| format!("{prefix}{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(Image::Lattice {
        torsion,
        basis,
        solver,
        group: GroupDesc::free_abelian_named(&names),
    })
}

/// Result of [`convert_diagram`].
#[derive(Clone, Debug)]
pub struct Conversion {
    pub graph: GraphOfGroups,
    pub oracle: QuotientOracle,
    pub soundness: Soundness,
    /// Order of the oracle quotient of π1 when finite.
    pub order: Option<usize>,
    /// Image in the new vertex group of each generator of the old one.
    pub generator_images: BTreeMap<VertexId, Vec<Element>>,
}

impl Conversion {
    /// Image of a vertex-group element of the source at `v`.
    pub fn image_of(&self, source: &GraphOfGroups, v: &str, x: &Element) -> Result<Element, MoveError> {
        let w = source.vertex_group(v).spell(x)?;
        let new = self.graph.vertex_group(v);
        let images = &self.generator_images[v];
        let mut acc = new.identity();
        for l in w {
            let y = &images[free::generator_of(l)];
            let y = if l < 0 { new.inv(y)? } else { y.clone() };
            acc = new.mul(&acc, &y)?;
        }
        Ok(acc)
    }

    /// A word in the presentation letters of the source, as a loop word in
    /// the converted graph.
    pub fn translate(&self, source: &GraphOfGroups, letters: &[Letter]) -> Result<LoopWord, MoveError> {
        let syllables = words::syllables_of_letters(source, letters)?
            .into_iter()
            .map(|s| match s {
                Syllable::Vertex(v, x) => Ok(Syllable::Vertex(v.clone(), self.image_of(source, &v, &x)?)),
                edge => Ok(edge),
            })
            .collect::<Result<Vec<_>, MoveError>>()?;
        Ok(words::word_from_syllables(&self.graph, &syllables)?)
    }
}

/// Replaces vertex groups by their images in the oracle's quotient of π1
/// and edge groups by the images of the `d0(e)`-side composite, for the
/// positive half-edge `e` of each orbit. The partner map is the inclusion
/// conjugated by the stable letter, `x ↦ t_e⁻¹ x t_e`, which lands in the
/// other vertex image because `t_e⁻¹ f_e(c) t_e = f_ē(c)` there.
pub fn convert_diagram(d: &GraphOfGroups, oracle: QuotientOracle) -> Result<Conversion, MoveError> {
    d.ensure_valid()?;
    let p = d.pi1_presentation()?;
    let layout = d.layout();
    let prepared = oracle.prepare(&p)?;
    let soundness = prepared.soundness();
    let model = match prepared {
        PreparedOracle::Cosets(table) => Model::Cosets {
            reps: table.representatives(),
            table,
        },
        PreparedOracle::Abelian(q) => Model::Abelian {
            moduli: q.coordinate_moduli(),
            q,
        },
        PreparedOracle::Free { relator_free } => {
            if !relator_free {
                return Err(MoveError::OracleInapplicable(
                    oracle,
                    "free reduction needs a relator-free presentation".into(),
                ));
            }
            // No relators: every edge group is trivial and π1 is free on
            // the vertex and stable letters, so nothing changes.
            return Ok(Conversion {
                graph: d.clone(),
                oracle,
                soundness,
                order: None,
                generator_images: d.vgroup.iter().map(|(v, g)| (v.clone(), g.generators())).collect(),
            });
        }
    };
    let order = match &model {
        Model::Cosets { table, .. } => Some(table.len()),
        Model::Abelian { q, .. } => q.factors().order().and_then(|n| n.to_usize()),
    };
    convert_with(d, &layout, &model, oracle, soundness, order)
}

fn convert_with(
    d: &GraphOfGroups,
    layout: &Layout,
    model: &Model,
    oracle: QuotientOracle,
    soundness: Soundness,
    order: Option<usize>,
) -> Result<Conversion, MoveError> {
    let graph = &d.graph;
    let mut images: BTreeMap<VertexId, Image> = BTreeMap::new();
    let mut generator_images = BTreeMap::new();
    for (v, g) in &d.vgroup {
        let points = g
            .generators()
            .iter()
            .map(|x| Ok(model.point(&d.spell_at(layout, v, x)?)))
            .collect::<Result<Vec<_>, MoveError>>()?;
        let image = build_image(model, &format!("vertex {v}"), "b", &points)?;
        let gens = points
            .iter()
            .map(|p| image.element_of(p).expect("generator lies in its image"))
            .collect();
        generator_images.insert(v.clone(), gens);
        images.insert(v.clone(), image);
    }
    let mut out = GraphOfGroups {
        graph: graph.clone(),
        vgroup: images.iter().map(|(v, i)| (v.clone(), i.group().clone())).collect(),
        egroup: BTreeMap::new(),
        emap: BTreeMap::new(),
        base: d.base.clone(),
        tree: d.tree.clone(),
    };
    for o in d.orbits() {
        let what = format!("edge {}", o.plus);
        let from = graph.origin(&o.plus);
        let along = d.edge_map(&o.plus);
        let points = d.egroup[&o]
            .generators()
            .iter()
            .map(|c| Ok(model.point(&d.spell_at(layout, from, &along.apply(c)?)?)))
            .collect::<Result<Vec<_>, MoveError>>()?;
        let image = build_image(model, &what, "c", &points)?;
        let t = d.edge_letter(layout, &o.plus);
        let mut maps = Vec::new();
        for (e, conj) in [(&o.plus, false), (&o.minus, true)] {
            let target = &images[graph.origin(e)];
            let elements = image
                .domain()
                .iter()
                .map(|q| {
                    let q = if conj { model.conjugate(t, q) } else { q.clone() };
                    target.element_of(&q).ok_or_else(|| {
                        MoveError::UnrepresentableImage(what.clone(), format!("image of {e} leaves the vertex image"))
                    })
                })
                .collect::<Result<Vec<_>, MoveError>>()?;
            let src = image.group().clone();
            let dst = target.group().clone();
            let h = match &image {
                Image::Finite { .. } => Hom::from_table(src, dst, elements)?,
                Image::Lattice { .. } => Hom::from_images(src, dst, elements)?,
            };
            assert!(h.is_injective()?, "induced edge map is an inclusion");
            maps.push((e.clone(), h));
        }
        out.egroup.insert(o.clone(), image.group().clone());
        out.emap.extend(maps);
    }
    out.ensure_valid()?;
    Ok(Conversion {
        graph: out,
        oracle,
        soundness,
        order,
        generator_images,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitShape {
    Amalgam,
    Hnn,
}

/// π1 written as an amalgam or HNN extension over one edge group.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub shape: SplitShape,
    pub orbit: EdgeOrbit,
    pub edge_group: GroupDesc,
    /// `f_e` and `f_ē` for the positive half-edge `e` of the orbit.
    pub along: Hom,
    pub back: Hom,
    /// The side containing `d0(e)` (the whole remaining graph for HNN).
    pub left: Presentation,
    pub right: Option<Presentation>,
    /// The graph with the spanning tree the pieces are taken relative to.
    pub source: GraphOfGroups,
    generators: Vec<crate::gog::Generator>,
    left_index: Vec<usize>,
    right_index: Vec<usize>,
    attaching: Vec<Vec<Letter>>,
}

impl Decomposition {
    /// Relators tying the pieces together, in the full generator set.
    pub fn attaching_relators(&self) -> &[Vec<Letter>] {
        &self.attaching
    }

    /// Adds the removed orbit back: the full presentation of `source`.
    pub fn reassemble(&self) -> Presentation {
        let lift = |p: &Presentation, index: &[usize]| -> Vec<Vec<Letter>> {
            p.relators
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&l| l.signum() * (index[free::generator_of(l)] as Letter + 1))
                        .collect()
                })
                .collect()
        };
        let mut relators = lift(&self.left, &self.left_index);
        if let Some(right) = &self.right {
            relators.extend(lift(right, &self.right_index));
        }
        relators.extend(self.attaching.iter().cloned());
        Presentation {
            generators: self.generators.clone(),
            relators,
        }
    }
}

fn sub_presentation(full: &Presentation, keep: &[usize], relators: Vec<Vec<Letter>>) -> Presentation {
    let mut position = vec![usize::MAX; full.generators.len()];
    for (i, &k) in keep.iter().enumerate() {
        position[k] = i;
    }
    Presentation {
        generators: keep.iter().map(|&k| full.generators[k].clone()).collect(),
        relators: relators
            .into_iter()
            .map(|r| {
                r.iter()
                    .map(|&l| l.signum() * (position[free::generator_of(l)] as Letter + 1))
                    .collect()
            })
            .collect(),
    }
}

/// Splits π1 along the orbit of `e`. If removing the orbit disconnects the
/// graph the result is an amalgam of the two sides, otherwise an HNN
/// extension of the rest. A non-separating orbit that lies in the spanning
/// tree is first moved out of it by re-choosing the tree on the graph
/// without that orbit.
pub fn decompose_along_edge(g: &GraphOfGroups, e: &str) -> Result<Decomposition, MoveError> {
    g.ensure_valid()?;
    let graph = &g.graph;
    if !graph.has_edge(e) {
        return Err(GraphError::UnknownEdge(e.to_string()).into());
    }
    let orbit = graph.orbit_of(e);
    let components = graph.components(Some(&orbit));
    let shape = if components.len() == 1 {
        SplitShape::Hnn
    } else {
        SplitShape::Amalgam
    };
    let mut source = g.clone();
    if shape == SplitShape::Hnn && source.tree().contains(&orbit) {
        source.tree = Some(graph.induced(&graph.vertices, Some(&orbit)).spanning_tree());
    }
    let full = source.pi1_presentation()?;
    let left_vertices: BTreeSet<VertexId> = components
        .iter()
        .find(|c| c.contains(graph.origin(&orbit.plus)))
        .cloned()
        .expect("origin lies in a component");
    let on_left = |v: &str| shape == SplitShape::Hnn || left_vertices.contains(v);
    let orbit_left = |o: &EdgeOrbit| on_left(graph.origin(&o.plus));

    let mut left_gens = Vec::new();
    let mut right_gens = Vec::new();
    for (k, gen) in full.generators.iter().enumerate() {
        let side = match &gen.owner {
            GeneratorOwner::Vertex(v, _) => Some(on_left(v)),
            GeneratorOwner::Edge(plus) if *plus == orbit.plus => None,
            GeneratorOwner::Edge(plus) => Some(orbit_left(&graph.orbit_of(plus))),
            GeneratorOwner::Free => unreachable!("graph presentation"),
        };
        match side {
            Some(true) => left_gens.push(k),
            Some(false) => right_gens.push(k),
            None => {}
        }
    }
    let mut left_rels = Vec::new();
    let mut right_rels = Vec::new();
    let mut attaching = Vec::new();
    for (src, r) in source.relators_by_source()? {
        let side = match &src {
            RelatorSource::Vertex(v) => Some(on_left(v)),
            RelatorSource::Edge(o) | RelatorSource::Tree(o) if *o == orbit => None,
            RelatorSource::Edge(o) | RelatorSource::Tree(o) => Some(orbit_left(o)),
        };
        match side {
            Some(true) => left_rels.push(r),
            Some(false) => right_rels.push(r),
            None => attaching.push(r),
        }
    }
    let left = sub_presentation(&full, &left_gens, left_rels);
    let right = (shape == SplitShape::Amalgam).then(|| sub_presentation(&full, &right_gens, right_rels));
    Ok(Decomposition {
        shape,
        edge_group: source.egroup[&orbit].clone(),
        along: source.edge_map(&orbit.plus).clone(),
        back: source.edge_map(&orbit.minus).clone(),
        orbit,
        left,
        right,
        generators: full.generators.clone(),
        left_index: left_gens,
        right_index: right_gens,
        attaching,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotients::{abelianization, enumerate_cosets};

    fn zn(name: &str) -> GroupDesc {
        GroupDesc::free_abelian_named(&[name])
    }

    fn times(src: &GroupDesc, dst: &GroupDesc, k: i64) -> Hom {
        Hom::from_matrix(src.clone(), dst.clone(), IntMatrix::from_rows(&[vec![k]], 1)).unwrap()
    }

    /// Path of Z vertices v0 - v1 - ... with f_e = id (toward the next
    /// vertex) and f_ē = ×2.
    fn dyadic(k: usize) -> GraphOfGroups {
        let mut g = GraphOfGroups::new();
        for i in 0..k {
            g.add_vertex(&format!("v{i}"), zn(&format!("a{i}"))).unwrap();
        }
        let c = zn("c");
        for i in 0..k - 1 {
            let (u, w) = (format!("v{i}"), format!("v{}", i + 1));
            let along = times(&c, g.vertex_group(&u), 1);
            let back = times(&c, g.vertex_group(&w), 2);
            g.add_edge(&format!("e{i}"), &format!("e{i}_bar"), &u, &w, c.clone(), along, back).unwrap();
        }
        g
    }

    #[test]
    fn contract_dyadic_pair() {
        let g = dyadic(2);
        let h = contract_edge(&g, "e0").unwrap();
        assert_eq!(h.graph.vertices.len(), 1);
        assert!(h.graph.vertices.contains("v1"));
        assert_eq!(abelianization(&h.pi1_presentation().unwrap()).free_rank, 1);
        assert!(matches!(contract_edge(&g, "e0_bar"), Err(MoveError::NotIso(_))));
    }

    #[test]
    fn collapse_dyadic_paths() {
        for k in 2..=5 {
            let g = dyadic(k);
            let h = collapse_tree(&g).unwrap();
            assert_eq!(h.graph.vertices.len(), 1);
            assert_eq!(h.orbits().len(), 0);
            let a = abelianization(&h.pi1_presentation().unwrap());
            assert_eq!((a.free_rank, a.torsion.len()), (1, 0));
            assert_eq!(abelianization(&g.pi1_presentation().unwrap()), a);
        }
    }

    #[test]
    fn collapse_rejects_two_proper_sides() {
        let (x, y, c) = (zn("x"), zn("y"), zn("c"));
        let mut g = GraphOfGroups::new();
        g.add_vertex("u", x.clone()).unwrap();
        g.add_vertex("w", y.clone()).unwrap();
        g.add_edge("e", "e_bar", "u", "w", c.clone(), times(&c, &x, 2), times(&c, &y, 3)).unwrap();
        assert_eq!(collapse_tree(&g).unwrap_err(), MoveError::NotIso("e/e_bar".into()));
    }

    #[test]
    fn contraction_reroutes_loops() {
        // loop at the absorbed vertex picks up f_ē ∘ f_e⁻¹
        let mut g = dyadic(2);
        let c = zn("c");
        let a0 = g.vertex_group("v0").clone();
        g.add_edge("s", "s_bar", "v0", "v0", c.clone(), times(&c, &a0, 1), times(&c, &a0, 3)).unwrap();
        let h = contract_edge(&g, "e0").unwrap();
        assert!(h.validate().is_valid());
        assert_eq!(h.edge_map("s").matrix().unwrap()[(0, 0)], 2.into());
        assert_eq!(h.edge_map("s_bar").matrix().unwrap()[(0, 0)], 6.into());
        assert_eq!(
            abelianization(&g.pi1_presentation().unwrap()),
            abelianization(&h.pi1_presentation().unwrap())
        );
    }

    fn pushout46() -> GraphOfGroups {
        let z4 = GroupDesc::finite(FiniteTable::cyclic(4));
        let z6 = GroupDesc::finite(FiniteTable::cyclic(6));
        let mut g = GraphOfGroups::new();
        g.add_vertex("u", z4.clone()).unwrap();
        g.add_vertex("w", z6.clone()).unwrap();
        let along = Hom::identity(&z4);
        let back = Hom::extend_finite(&z4, &z6, &[1], &[Element::Index(3)]).unwrap();
        g.add_edge("e", "e_bar", "u", "w", z4, along, back).unwrap();
        g
    }

    #[test]
    fn convert_pushout() {
        let d = pushout46();
        assert_eq!(d.classify(), crate::gog::DiagramClass::Diagram);
        let c = convert_diagram(&d, QuotientOracle::FiniteEnumeration { cap: 5000 }).unwrap();
        assert_eq!(c.order, Some(6));
        assert_eq!(c.soundness, Soundness::Exact);
        assert_eq!(c.graph.vertex_group("u").order(), Some(2));
        assert_eq!(c.graph.vertex_group("w").order(), Some(6));
        assert_eq!(c.graph.edge_group("e").order(), Some(2));
        assert_eq!(c.graph.classify(), crate::gog::DiagramClass::GraphOfGroups);
        let p = c.graph.pi1_presentation().unwrap();
        assert_eq!(enumerate_cosets(&p, 5000).order(), Some(6));
    }

    #[test]
    fn convert_under_abelianization_is_tagged() {
        let d = pushout46();
        let c = convert_diagram(&d, QuotientOracle::Abelianization).unwrap();
        assert_eq!(c.soundness, Soundness::IfAbelian);
        assert_eq!(c.order, Some(6));
        assert_eq!(c.graph.vertex_group("u").order(), Some(2));
    }

    #[test]
    fn convert_injective_keeps_orders() {
        let z2 = GroupDesc::finite(FiniteTable::cyclic(2));
        let s3 = GroupDesc::finite(FiniteTable::symmetric(3));
        let mut g = GraphOfGroups::new();
        g.add_vertex("u", s3.clone()).unwrap();
        g.add_vertex("w", z2.clone()).unwrap();
        let t = s3.table().unwrap();
        let involution = (0..6).find(|&x| t.element_order(x) == 2).unwrap();
        let inc = Hom::extend_finite(&z2, &s3, &[1], &[Element::Index(involution)]).unwrap();
        g.add_edge("e", "e_bar", "u", "w", z2.clone(), inc, Hom::identity(&z2)).unwrap();
        let n = enumerate_cosets(&g.pi1_presentation().unwrap(), 10_000).order().unwrap();
        assert_eq!(n, 6);
        let c = convert_diagram(&g, QuotientOracle::FiniteEnumeration { cap: 10_000 }).unwrap();
        assert_eq!(c.graph.vertex_group("u").order(), Some(6));
        assert_eq!(c.graph.vertex_group("w").order(), Some(2));
        assert_eq!(c.graph.edge_group("e").order(), Some(2));
        assert_eq!(enumerate_cosets(&c.graph.pi1_presentation().unwrap(), 10_000).order(), Some(6));
    }

    #[test]
    fn decompose_shapes() {
        let g = dyadic(3);
        let d = decompose_along_edge(&g, "e0").unwrap();
        assert_eq!(d.shape, SplitShape::Amalgam);
        assert_eq!(d.left.generators.len(), 1);
        assert_eq!(d.right.as_ref().unwrap().generators.len(), 3);
        let full = g.pi1_presentation().unwrap();
        assert_eq!(d.reassemble().sorted_relators(), full.sorted_relators());
        assert_eq!(d.reassemble().generators, full.generators);

        let c = zn("c");
        let mut h = GraphOfGroups::new();
        h.add_vertex("v", zn("a")).unwrap();
        let a = h.vertex_group("v").clone();
        h.add_edge("t", "t_bar", "v", "v", c.clone(), times(&c, &a, 1), times(&c, &a, 1)).unwrap();
        let d = decompose_along_edge(&h, "t_bar").unwrap();
        assert_eq!(d.shape, SplitShape::Hnn);
        assert_eq!(d.left.to_text(), "a\n--\n");
        assert_eq!(d.attaching_relators().len(), 1);
    }

    #[test]
    fn decompose_triangle_moves_tree() {
        let c = zn("c");
        let mut g = GraphOfGroups::new();
        for v in ["u", "v", "w"] {
            g.add_vertex(v, zn("a")).unwrap();
        }
        for (e, x, y) in [("e1", "u", "v"), ("e2", "v", "w"), ("e3", "w", "u")] {
            let (gx, gy) = (g.vertex_group(x).clone(), g.vertex_group(y).clone());
            g.add_edge(e, &format!("{e}_bar"), x, y, c.clone(), times(&c, &gx, 1), times(&c, &gy, 1)).unwrap();
        }
        for e in ["e1", "e2", "e3"] {
            let d = decompose_along_edge(&g, e).unwrap();
            assert_eq!(d.shape, SplitShape::Hnn);
            assert!(!d.source.tree().contains(&d.orbit));
            let full = d.source.pi1_presentation().unwrap();
            assert_eq!(d.reassemble().sorted_relators(), full.sorted_relators());
            // the base of the HNN extension is π1 of the path: Z
            assert_eq!(abelianization(&d.left).free_rank, 1);
        }
    }
}
