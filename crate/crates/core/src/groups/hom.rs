use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;

use super::free::{self, FoldedGraph};
use super::{small, unit_vector, Element, GroupDesc, GroupError, Result};
use crate::quotients::{column_hnf, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomData {
    /// Target free abelian: column `j` is the image of source generator `j`.
    Matrix(IntMatrix),
    /// Images of the source generators; source free or free abelian.
    Images(Vec<Element>),
    /// Image of every element; source finite.
    Table(Vec<Element>),
}

/// A homomorphism between two groups of the supported classes.
#[derive(Clone, Debug)]
pub struct Hom {
    src: GroupDesc,
    dst: GroupDesc,
    data: HomData,
    folded: Option<Arc<FoldedGraph>>,
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.dst == other.dst && self.data == other.data
    }
}

impl Eq for Hom {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipAnswer {
    pub inside: bool,
    pub preimage: Option<Element>,
}

impl MembershipAnswer {
    fn outside() -> Self {
        MembershipAnswer {
            inside: false,
            preimage: None,
        }
    }

    fn inside(x: Element) -> Self {
        MembershipAnswer {
            inside: true,
            preimage: Some(x),
        }
    }
}

impl Hom {
    /// Validates `data` against the two groups. Generator images into a
    /// free abelian target are normalized to a matrix.
    pub fn new(src: GroupDesc, dst: GroupDesc, data: HomData) -> Result<Hom> {
        let data = match data {
            HomData::Matrix(m) => {
                if matches!(src, GroupDesc::Finite(_)) || !matches!(dst, GroupDesc::FreeAbelian { .. }) {
                    return Err(GroupError::ShapeMismatch(
                        "matrix data needs a free or free abelian source and a free abelian target".into(),
                    ));
                }
                let (rows, cols) = (super::group_rank(&dst), super::group_rank(&src));
                if m.rows() != rows || m.cols() != cols {
                    return Err(GroupError::ShapeMismatch(format!(
                        "matrix is {}x{} but the map needs {rows}x{cols}",
                        m.rows(),
                        m.cols()
                    )));
                }
                HomData::Matrix(m)
            }
            HomData::Images(images) => {
                if matches!(src, GroupDesc::Finite(_)) {
                    return Err(GroupError::ShapeMismatch("a finite source needs a full element table".into()));
                }
                let n = super::group_rank(&src);
                if images.len() != n {
                    return Err(GroupError::ShapeMismatch(format!(
                        "{} generator images for {n} generators",
                        images.len()
                    )));
                }
                for x in &images {
                    dst.check(x)?;
                }
                if let GroupDesc::FreeAbelian { gens } = &dst {
                    let cols: Vec<Vec<BigInt>> = images
                        .iter()
                        .map(|x| match x {
                            Element::Vector(v) => v.clone(),
                            _ => unreachable!("checked"),
                        })
                        .collect();
                    HomData::Matrix(IntMatrix::from_columns(&cols, gens.len()))
                } else {
                    if matches!(src, GroupDesc::FreeAbelian { .. }) {
                        if matches!(dst, GroupDesc::Free { .. }) && n > 1 {
                            return Err(GroupError::Unsupported(
                                "maps from free abelian groups of rank > 1 into free groups".into(),
                            ));
                        }
                        for (i, a) in images.iter().enumerate() {
                            for b in &images[..i] {
                                if dst.mul(a, b)? != dst.mul(b, a)? {
                                    return Err(GroupError::NotAHom("images of a free abelian basis must commute".into()));
                                }
                            }
                        }
                    }
                    HomData::Images(images)
                }
            }
            HomData::Table(table) => {
                let GroupDesc::Finite(t) = &src else {
                    return Err(GroupError::ShapeMismatch("element tables need a finite source".into()));
                };
                if table.len() != t.order() {
                    return Err(GroupError::ShapeMismatch(format!(
                        "table has {} entries for a group of order {}",
                        table.len(),
                        t.order()
                    )));
                }
                for x in &table {
                    dst.check(x)?;
                }
                for a in 0..t.order() {
                    for b in 0..t.order() {
                        if table[t.mul(a, b)] != dst.mul(&table[a], &table[b])? {
                            return Err(GroupError::NotAHom(format!(
                                "fails on ({}, {})",
                                t.label(a),
                                t.label(b)
                            )));
                        }
                    }
                }
                HomData::Table(table)
            }
        };
        let folded = match (&dst, &data) {
            (GroupDesc::Free { .. }, HomData::Images(images)) => {
                let words: Vec<Vec<free::Letter>> = images
                    .iter()
                    .map(|x| match x {
                        Element::Word(w) => w.clone(),
                        _ => unreachable!("checked"),
                    })
                    .collect();
                Some(Arc::new(FoldedGraph::new(&words)))
            }
            _ => None,
        };
        Ok(Hom {
            src,
            dst,
            data,
            folded,
        })
    }

    pub fn from_images(src: GroupDesc, dst: GroupDesc, images: Vec<Element>) -> Result<Hom> {
        Self::new(src, dst, HomData::Images(images))
    }

    pub fn from_matrix(src: GroupDesc, dst: GroupDesc, m: IntMatrix) -> Result<Hom> {
        Self::new(src, dst, HomData::Matrix(m))
    }

    pub fn from_table(src: GroupDesc, dst: GroupDesc, table: Vec<Element>) -> Result<Hom> {
        Self::new(src, dst, HomData::Table(table))
    }

    pub fn identity(g: &GroupDesc) -> Hom {
        let data = match g {
            GroupDesc::Finite(t) => HomData::Table((0..t.order()).map(Element::Index).collect()),
            _ => HomData::Images(g.generators()),
        };
        Self::new(g.clone(), g.clone(), data).expect("identity is a homomorphism")
    }

    /// Trivial map sending everything to the identity.
    pub fn trivial(src: &GroupDesc, dst: &GroupDesc) -> Hom {
        let data = match src {
            GroupDesc::Finite(t) => HomData::Table(vec![dst.identity(); t.order()]),
            _ => HomData::Images(vec![dst.identity(); super::group_rank(src)]),
        };
        Self::new(src.clone(), dst.clone(), data).expect("trivial map is a homomorphism")
    }

    /// Extends an assignment on generators of a finite group, failing when
    /// the assignment does not define a homomorphism.
    pub fn extend_finite(src: &GroupDesc, dst: &GroupDesc, gens: &[usize], images: &[Element]) -> Result<Hom> {
        let GroupDesc::Finite(t) = src else {
            return Err(GroupError::ShapeMismatch("finite source expected".into()));
        };
        let mut table: Vec<Option<Element>> = vec![None; t.order()];
        table[t.identity()] = Some(dst.identity());
        let mut queue = VecDeque::from([t.identity()]);
        while let Some(x) = queue.pop_front() {
            let fx = table[x].clone().unwrap();
            for (&g, img) in gens.iter().zip(images) {
                let y = t.mul(x, g);
                let fy = dst.mul(&fx, img)?;
                match &table[y] {
                    None => {
                        table[y] = Some(fy);
                        queue.push_back(y);
                    }
                    Some(prev) if *prev != fy => {
                        return Err(GroupError::NotAHom("generator images are inconsistent".into()));
                    }
                    Some(_) => {}
                }
            }
        }
        let table = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GroupError::NotAHom("generators do not generate the source".into()))?;
        Self::from_table(src.clone(), dst.clone(), table)
    }

    pub fn src(&self) -> &GroupDesc {
        &self.src
    }

    pub fn dst(&self) -> &GroupDesc {
        &self.dst
    }

    pub fn data(&self) -> &HomData {
        &self.data
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.src.check(x)?;
        match (&self.data, x) {
            (HomData::Matrix(m), Element::Vector(v)) => Ok(Element::Vector(m.mul_vec(v))),
            (HomData::Matrix(m), Element::Word(w)) => {
                let sums: Vec<BigInt> = free::exponent_sums(w, m.cols()).into_iter().map(BigInt::from).collect();
                Ok(Element::Vector(m.mul_vec(&sums)))
            }
            (HomData::Images(images), Element::Vector(v)) => {
                let mut acc = self.dst.identity();
                for (img, k) in images.iter().zip(v) {
                    acc = self.dst.mul(&acc, &self.dst.pow(img, k)?)?;
                }
                Ok(acc)
            }
            (HomData::Images(images), Element::Word(w)) => {
                let mut acc = self.dst.identity();
                for &l in w {
                    let img = &images[free::generator_of(l)];
                    let img = if l < 0 { self.dst.inv(img)? } else { img.clone() };
                    acc = self.dst.mul(&acc, &img)?;
                }
                Ok(acc)
            }
            (HomData::Table(table), Element::Index(i)) => Ok(table[*i].clone()),
            _ => Err(GroupError::ShapeMismatch("element does not match the map's source".into())),
        }
    }

    /// Images of `src.generators()`.
    pub fn generator_images(&self) -> Vec<Element> {
        self.src
            .generators()
            .iter()
            .map(|g| self.apply(g).expect("generator of the source"))
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Hom) -> Result<Hom> {
        if inner.dst != self.src {
            return Err(GroupError::ShapeMismatch("composition of non-matching maps".into()));
        }
        let data = match &inner.data {
            HomData::Table(table) => HomData::Table(table.iter().map(|x| self.apply(x)).collect::<Result<_>>()?),
            _ => HomData::Images(
                inner
                    .generator_images()
                    .iter()
                    .map(|x| self.apply(x))
                    .collect::<Result<_>>()?,
            ),
        };
        Hom::new(inner.src.clone(), self.dst.clone(), data)
    }

    pub fn is_injective(&self) -> Result<bool> {
        let n = super::group_rank(&self.src);
        match (&self.data, &self.src) {
            (HomData::Table(table), GroupDesc::Finite(t)) => Ok((0..t.order())
                .all(|x| x == t.identity() || !self.dst.is_identity(&table[x]))),
            (HomData::Matrix(m), GroupDesc::FreeAbelian { .. }) => Ok(column_hnf(m).rank() == n),
            // A free group of rank >= 2 is not abelian.
            (HomData::Matrix(m), GroupDesc::Free { .. }) => Ok(n == 0 || (n == 1 && !m.is_zero())),
            (HomData::Images(images), _) => match (&self.dst, &self.src) {
                (GroupDesc::Finite(_), _) => Ok(n == 0),
                (GroupDesc::Free { .. }, GroupDesc::FreeAbelian { .. }) => {
                    Ok(n == 0 || !self.dst.is_identity(&images[0]))
                }
                (GroupDesc::Free { .. }, GroupDesc::Free { .. }) => {
                    // Hopfian: a surjection F_n -> H with rank(H) = n is injective.
                    Ok(self.folded().rank() == n)
                }
                _ => Err(GroupError::Unsupported("injectivity for this map shape".into())),
            },
            _ => Err(GroupError::Unsupported("injectivity for this map shape".into())),
        }
    }

    fn folded(&self) -> &FoldedGraph {
        self.folded.as_deref().expect("folding is built for maps into free groups")
    }

    pub fn member(&self, y: &Element) -> Result<MembershipAnswer> {
        self.dst.check(y)?;
        match &self.data {
            HomData::Table(table) => Ok(table
                .iter()
                .position(|x| x == y)
                .map(|i| MembershipAnswer::inside(Element::Index(i)))
                .unwrap_or_else(MembershipAnswer::outside)),
            HomData::Matrix(m) => {
                let Element::Vector(v) = y else { unreachable!("checked") };
                let Some(x) = column_hnf(m).solve(v) else {
                    return Ok(MembershipAnswer::outside());
                };
                let preimage = match &self.src {
                    GroupDesc::FreeAbelian { .. } => Element::Vector(x),
                    _ => {
                        let mut w = Vec::new();
                        for (i, k) in x.iter().enumerate() {
                            w.extend(free::power(&[free::letter(i, false)], small(k)?));
                        }
                        Element::Word(w)
                    }
                };
                Ok(MembershipAnswer::inside(preimage))
            }
            HomData::Images(_) => match &self.dst {
                GroupDesc::Free { .. } => {
                    let Element::Word(w) = y else { unreachable!("checked") };
                    let Some(src_word) = self.folded().read(w) else {
                        return Ok(MembershipAnswer::outside());
                    };
                    let preimage = match &self.src {
                        GroupDesc::FreeAbelian { gens } => Element::Vector(
                            free::exponent_sums(&src_word, gens.len()).into_iter().map(BigInt::from).collect(),
                        ),
                        _ => Element::Word(src_word),
                    };
                    Ok(MembershipAnswer::inside(preimage))
                }
                GroupDesc::Finite(_) => Ok(self
                    .finite_image()
                    .into_iter()
                    .find(|(z, _)| z == y)
                    .map(|(_, p)| MembershipAnswer::inside(p))
                    .unwrap_or_else(MembershipAnswer::outside)),
                GroupDesc::FreeAbelian { .. } => unreachable!("normalized to a matrix"),
            },
        }
    }

    /// Image elements with one preimage each, for a finite target.
    fn finite_image(&self) -> Vec<(Element, Element)> {
        let gens = self.src.generators();
        let images = self.generator_images();
        let mut seen = vec![(self.dst.identity(), self.src.identity())];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, img) in gens.iter().zip(&images) {
                let z = self.dst.mul(&seen[i].0, img).expect("image element");
                if seen.iter().any(|(w, _)| *w == z) {
                    continue;
                }
                let p = self.src.mul(&seen[i].1, g).expect("source element");
                seen.push((z, p));
                queue.push_back(seen.len() - 1);
            }
        }
        seen
    }

    /// An element of the target outside the image, or `None` when the map
    /// is surjective. For free and free abelian targets this is the first
    /// generator outside the image (the image is everything iff it
    /// contains every generator); for finite targets the first element.
    pub fn cogenerator(&self) -> Result<Option<Element>> {
        let candidates: Vec<Element> = match &self.dst {
            GroupDesc::Finite(t) => (0..t.order()).map(Element::Index).collect(),
            _ => self.dst.generators(),
        };
        for y in candidates {
            if !self.member(&y)?.inside {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cogenerator()?.is_none())
    }

    pub fn is_iso(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    pub fn inverse(&self) -> Result<Hom> {
        if !self.is_iso()? {
            return Err(GroupError::NotIso);
        }
        let preimage = |y: &Element| -> Result<Element> {
            Ok(self.member(y)?.preimage.expect("surjective"))
        };
        let data = match &self.dst {
            GroupDesc::Finite(t) => {
                HomData::Table((0..t.order()).map(|i| preimage(&Element::Index(i))).collect::<Result<_>>()?)
            }
            _ => HomData::Images(self.dst.generators().iter().map(preimage).collect::<Result<_>>()?),
        };
        Hom::new(self.dst.clone(), self.src.clone(), data)
    }

    /// Same map with relabelled but structurally identical source/target.
    pub fn with_groups(&self, src: GroupDesc, dst: GroupDesc) -> Result<Hom> {
        Hom::new(src, dst, self.data.clone())
    }

    /// Matrix of a map into a free abelian group.
    pub fn matrix(&self) -> Option<&IntMatrix> {
        match &self.data {
            HomData::Matrix(m) => Some(m),
            _ => None,
        }
    }

    /// Whether two maps with the same source and target agree.
    pub fn agrees_with(&self, other: &Hom) -> Result<bool> {
        match &self.data {
            HomData::Table(t) => Ok(t.iter().enumerate().all(|(i, _)| {
                self.apply(&Element::Index(i)).ok() == other.apply(&Element::Index(i)).ok()
            })),
            _ => Ok(self.generator_images() == other.generator_images()),
        }
    }

    /// The basis vector images for a matrix map, as elements.
    pub fn unit_images(&self) -> Vec<Element> {
        let n = super::group_rank(&self.src);
        match &self.src {
            GroupDesc::FreeAbelian { .. } => (0..n)
                .map(|i| self.apply(&unit_vector(n, i)).expect("basis"))
                .collect(),
            _ => self.generator_images(),
        }
    }
}
