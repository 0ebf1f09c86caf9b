#![allow(dead_code)]

use std::path::PathBuf;

use graphgroups::groups::FiniteTable;
use graphgroups::quotients::{column_hnf, IntMatrix};
use graphgroups::{parse_gog, GraphOfGroups, GroupDesc, Hom};
use rand::Rng;

pub fn fixture(name: &str) -> GraphOfGroups {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.gog"));
    let text = std::fs::read_to_string(&path).unwrap();
    parse_gog(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn fa(prefix: &str, n: usize) -> GroupDesc {
    let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    GroupDesc::free_abelian_named(&names)
}

pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..8 {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        match rng.random_range(0..3) {
            0 if i != j => m.add_row_multiple(i, j, &rng.random_range(-2i64..=2).into()),
            1 => m.swap_rows(i, j),
            _ => m.negate_row(i),
        }
    }
    m
}

/// Random `rows x cols` integer matrix of full column rank.
pub fn random_injective<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    assert!(cols <= rows);
    loop {
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-2..=2)).collect())
            .collect();
        let m = IntMatrix::from_rows(&entries, cols);
        if column_hnf(&m).rank() == cols {
            return m;
        }
    }
}

/// Up to five free abelian vertices of rank at most three on a random
/// tree whose edges are isomorphisms on the child side, plus up to two
/// extra injective edges.
pub fn random_fa_graph<R: Rng>(rng: &mut R) -> GraphOfGroups {
    let n = rng.random_range(1..=5);
    let mut ranks = vec![rng.random_range(0..=3)];
    let mut g = GraphOfGroups::new();
    g.add_vertex("v0", fa("a0_", ranks[0])).unwrap();
    let mut tree = std::collections::BTreeSet::new();
    for i in 1..n {
        let p = rng.random_range(0..i);
        let r = rng.random_range(0..=ranks[p]);
        ranks.push(r);
        let (child, parent) = (format!("v{i}"), format!("v{p}"));
        g.add_vertex(&child, fa(&format!("a{i}_"), r)).unwrap();
        let c = fa("c", r);
        let iso = Hom::from_matrix(c.clone(), g.vertex_group(&child).clone(), random_unimodular(rng, r)).unwrap();
        let inj = Hom::from_matrix(c.clone(), g.vertex_group(&parent).clone(), random_injective(rng, ranks[p], r)).unwrap();
        let (e, bar) = (format!("t{i}"), format!("t{i}_bar"));
        if rng.random_bool(0.5) {
            g.add_edge(&e, &bar, &child, &parent, c, iso, inj).unwrap();
        } else {
            g.add_edge(&e, &bar, &parent, &child, c, inj, iso).unwrap();
        }
        tree.insert(g.graph.orbit_of(&e));
    }
    for k in 0..rng.random_range(0..=2) {
        let (u, w) = (rng.random_range(0..n), rng.random_range(0..n));
        let s = rng.random_range(0..=ranks[u].min(ranks[w]));
        let c = fa("c", s);
        let (vu, vw) = (format!("v{u}"), format!("v{w}"));
        let fu = Hom::from_matrix(c.clone(), g.vertex_group(&vu).clone(), random_injective(rng, ranks[u], s)).unwrap();
        let fw = Hom::from_matrix(c.clone(), g.vertex_group(&vw).clone(), random_injective(rng, ranks[w], s)).unwrap();
        g.add_edge(&format!("x{k}"), &format!("x{k}_bar"), &vu, &vw, c, fu, fw).unwrap();
    }
    g.tree = Some(tree);
    g
}

pub fn finite_stock() -> Vec<(String, FiniteTable)> {
    let mut stock: Vec<(String, FiniteTable)> = (1..=16).map(|n| (format!("Z{n}"), FiniteTable::cyclic(n))).collect();
    for n in 3..=8 {
        stock.push((format!("D{n}"), FiniteTable::dihedral(n)));
    }
    let c = FiniteTable::cyclic;
    let product = |a: FiniteTable, b: FiniteTable| a.direct_product(&b).unwrap();
    stock.extend([
        ("Q8".to_string(), FiniteTable::quaternion()),
        ("A4".to_string(), FiniteTable::alternating(4)),
        ("Z2^2".to_string(), FiniteTable::elementary_abelian(2)),
        ("Z2^3".to_string(), FiniteTable::elementary_abelian(3)),
        ("Z2^4".to_string(), FiniteTable::elementary_abelian(4)),
        ("Z2xZ4".to_string(), product(c(2), c(4))),
        ("Z2xZ6".to_string(), product(c(2), c(6))),
        ("Z2xZ8".to_string(), product(c(2), c(8))),
        ("Z4xZ4".to_string(), product(c(4), c(4))),
        ("Z3xZ3".to_string(), product(c(3), c(3))),
        ("Z2xZ2xZ4".to_string(), product(FiniteTable::elementary_abelian(2), c(4))),
        ("Z2xD4".to_string(), product(c(2), FiniteTable::dihedral(4))),
        ("Z2xQ8".to_string(), product(c(2), FiniteTable::quaternion())),
    ]);
    stock
}

/// Finite analog of [`random_fa_graph`]: each child is a random subgroup
/// of its parent, glued by identity and inclusion; sometimes one extra
/// edge with trivial edge group.
pub fn random_finite_graph<R: Rng>(rng: &mut R, stock: &[(String, FiniteTable)]) -> GraphOfGroups {
    let small: Vec<&FiniteTable> = stock.iter().map(|(_, t)| t).filter(|t| t.order() <= 12).collect();
    let n = rng.random_range(1..=4);
    let mut tables = vec![small[rng.random_range(0..small.len())].clone()];
    let mut g = GraphOfGroups::new();
    g.add_vertex("v0", GroupDesc::finite(tables[0].clone())).unwrap();
    let mut tree = std::collections::BTreeSet::new();
    for i in 1..n {
        let p = rng.random_range(0..i);
        let parent = tables[p].clone();
        let gens: Vec<usize> = (0..rng.random_range(0..=2)).map(|_| rng.random_range(0..parent.order())).collect();
        let elements = parent.closure(&gens);
        let sub = parent.subgroup(&elements);
        tables.push(sub.clone());
        let (child, par) = (format!("v{i}"), format!("v{p}"));
        let sub_g = GroupDesc::finite(sub);
        g.add_vertex(&child, sub_g.clone()).unwrap();
        let iso = Hom::identity(&sub_g);
        let inclusion = Hom::from_table(
            sub_g.clone(),
            g.vertex_group(&par).clone(),
            elements.iter().map(|&x| graphgroups::Element::Index(x)).collect(),
        )
        .unwrap();
        let (e, bar) = (format!("t{i}"), format!("t{i}_bar"));
        if rng.random_bool(0.5) {
            g.add_edge(&e, &bar, &child, &par, sub_g, iso, inclusion).unwrap();
        } else {
            g.add_edge(&e, &bar, &par, &child, sub_g, inclusion, iso).unwrap();
        }
        tree.insert(g.graph.orbit_of(&e));
    }
    if rng.random_bool(0.2) {
        let (u, w) = (format!("v{}", rng.random_range(0..n)), format!("v{}", rng.random_range(0..n)));
        let triv = GroupDesc::trivial();
        let fu = Hom::trivial(&triv, g.vertex_group(&u));
        let fw = Hom::trivial(&triv, g.vertex_group(&w));
        g.add_edge("x0", "x0_bar", &u, &w, triv, fu, fw).unwrap();
    }
    g.tree = Some(tree);
    g
}
