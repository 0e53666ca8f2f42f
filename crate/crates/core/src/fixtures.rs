//! Reference meshes reproducing the configurations discussed in the literature on
//! analysis-suitable T-splines, with their named index marks (`m`, `n`, `r`, ...).

use crate::mesh::{create_tensor_mesh, unit_breakpoints, Component, Entity, IndexDomain, TMesh};

/// A named mesh plus the symbolic indices used to describe it.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub mesh: TMesh,
    pub marks: Vec<(&'static str, i64)>,
}

impl Fixture {
    pub fn mark(&self, name: &str) -> i64 {
        self.marks
            .iter()
            .find(|(k, _)| *k == name)
            .unwrap_or_else(|| panic!("fixture {} has no mark {name}", self.name))
            .1
    }
}

/// Open box entity with the given bounds (equal bounds give a singleton).
pub fn entity(bounds: &[(i64, i64)]) -> Entity {
    Entity::new(
        bounds
            .iter()
            .map(|&(a, b)| if a == b { Component::Singleton(a) } else { Component::Interval(a, b) })
            .collect(),
    )
}

fn build(degrees: Vec<u32>, breakpoints: Vec<Vec<i64>>, steps: &[(Vec<(i64, i64)>, usize)]) -> TMesh {
    let extents = breakpoints.iter().map(|b| *b.last().unwrap()).collect();
    let dom = IndexDomain::new(extents, degrees).expect("fixture domain");
    let mut mesh = create_tensor_mesh(dom, breakpoints).expect("fixture grid");
    for (bounds, dir) in steps {
        mesh.subdiv_in_place(&entity(bounds), *dir).expect("fixture refinement");
    }
    mesh
}

fn unit(from: i64, to: i64) -> Vec<i64> {
    (from..=to).collect()
}

/// Two opposing hanging vertices `{m} x {n}` and `{m+1} x {n}` in a 3x2 block.
pub fn fig10(p1: u32, p2: u32) -> Fixture {
    let f1 = ((p1 + 1) / 2) as i64;
    let f2 = ((p2 + 1) / 2) as i64;
    let m = f1 + 1;
    let n = f2 + 1;
    let mut bx = unit(0, f1);
    bx.extend([m, m + 1]);
    bx.extend(unit(m + 2, m + 2 + f1));
    let mut by = unit(0, f2);
    by.extend(unit(n + 1, n + 1 + f2));
    let steps = vec![
        (vec![(m - 1, m), (n - 1, n + 1)], 1),
        (vec![(m + 1, m + 2), (n - 1, n + 1)], 1),
    ];
    Fixture {
        name: format!("fig10-p{p1}{p2}"),
        mesh: build(vec![p1, p2], vec![bx, by], &steps),
        marks: vec![("m", m), ("n", n)],
    }
}

/// The `p = (3,3)` variant with an additional vertical interface at `m-1` above `n+1`.
pub fn fig10e() -> Fixture {
    let (m, n) = (4, 3);
    let bx = vec![0, 1, 2, 4, 5, 6, 7, 8];
    let by = vec![0, 1, 2, 4, 5, 6, 7];
    let steps = vec![
        (vec![(2, 4), (2, 4)], 1),
        (vec![(5, 6), (2, 4)], 1),
        (vec![(2, 4), (4, 5)], 0),
    ];
    Fixture { name: "fig10e".into(), mesh: build(vec![3, 3], vec![bx, by], &steps), marks: vec![("m", m), ("n", n)] }
}

/// 3D mesh with `T1 = {m+1} x (n,n+2) x {r+1}` and `T2 = {m+2} x {n+1} x (r,r+2)`.
pub fn fig11(p: [u32; 3]) -> Fixture {
    let f: Vec<i64> = p.iter().map(|&q| ((q + 1) / 2) as i64).collect();
    let (m, n, r) = (f[0], f[1], f[2]);
    let bx = unit(0, m + 3 + f[0]);
    let mut by = unit(0, n);
    by.extend(unit(n + 2, n + 2 + f[1]));
    let mut bz = unit(0, r);
    bz.extend(unit(r + 2, r + 2 + f[2]));
    let steps = vec![
        (vec![(m, m + 1), (n, n + 2), (r, r + 2)], 2),
        (vec![(m + 2, m + 3), (n, n + 2), (r, r + 2)], 1),
    ];
    Fixture {
        name: format!("fig11-p{}{}{}", p[0], p[1], p[2]),
        mesh: build(p.to_vec(), vec![bx, by, bz], &steps),
        marks: vec![("m", m), ("n", n), ("r", r)],
    }
}

/// Knot-vector construction example with `p = (3,2,2)`; anchors at `x = mbar`.
pub fn fig5a() -> Fixture {
    let mbar = 5;
    let bx = vec![0, 1, 2, 3, 4, 5, 7, 9, 10, 11];
    let by = vec![0, 1, 3, 5, 6];
    let bz = vec![0, 1, 3, 4];
    let steps = vec![
        (vec![(5, 7), (3, 5), (1, 3)], 0),
        (vec![(7, 9), (3, 5), (1, 3)], 0),
        (vec![(7, 9), (1, 3), (1, 3)], 1),
        (vec![(7, 9), (2, 3), (1, 3)], 0),
        (vec![(7, 9), (1, 2), (1, 3)], 0),
        (vec![(2, 3), (1, 3), (1, 3)], 2),
        (vec![(2, 3), (3, 5), (1, 3)], 2),
    ];
    Fixture {
        name: "fig5a".into(),
        mesh: build(vec![3, 2, 2], vec![bx, by, bz], &steps),
        marks: vec![("mbar", mbar)],
    }
}

/// Knot-vector construction example with `p = (4,2,3)`; anchors span `(m1, m2)` and `(m1, m2+1)`.
pub fn fig5b() -> Fixture {
    let (m1, m2) = (5, 6);
    let bx = vec![0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11];
    let by = vec![0, 1, 3, 5, 6];
    let bz = vec![0, 1, 2, 4, 5, 6];
    let steps = vec![(vec![(5, 7), (3, 5), (2, 4)], 0)];
    Fixture {
        name: "fig5b".into(),
        mesh: build(vec![4, 2, 3], vec![bx, by, bz], &steps),
        marks: vec![("m1", m1), ("m2", m2), ("z", 2)],
    }
}

/// Center cell `Q` of a 3x3x1 active block bisected in direction 2, after its two
/// neighbours in direction 2 were bisected in direction 1; violates the
/// three-direction neighbour condition.
pub fn fig6() -> Fixture {
    let mut f = fig6_parent();
    f.mesh.subdiv_in_place(&entity(&[(3, 5), (3, 5), (1, 3)]), 1).expect("fixture refinement");
    f.name = "fig6".into();
    f
}

/// The `fig6` mesh before the bisection of its center cell.
pub fn fig6_parent() -> Fixture {
    let bxy = vec![0, 1, 3, 5, 7, 8];
    let steps = vec![(vec![(3, 5), (1, 3), (1, 3)], 0), (vec![(3, 5), (5, 7), (1, 3)], 0)];
    Fixture {
        name: "fig6-parent".into(),
        mesh: build(vec![1, 1, 1], vec![bxy.clone(), bxy, vec![0, 1, 3, 4]], &steps),
        marks: vec![],
    }
}

/// Running 3D example with `p = (3,2,1)`, `N = (17,13,4)`: a cross-shaped
/// region of the middle layer bisected in direction 3.
pub fn fig7() -> Fixture {
    let bx = unit(0, 17);
    let by = unit(0, 13);
    let bz = vec![0, 1, 3, 4];
    let mut cols = std::collections::BTreeSet::new();
    for x in 5..12 {
        for y in 5..8 {
            cols.insert((x, y));
        }
    }
    for x in 6..11 {
        for y in 4..9 {
            cols.insert((x, y));
        }
    }
    let steps: Vec<_> = cols
        .into_iter()
        .map(|(x, y)| (vec![(x, x + 1), (y, y + 1), (1, 3)], 2))
        .collect();
    Fixture { name: "fig7".into(), mesh: build(vec![3, 2, 1], vec![bx, by, bz], &steps), marks: vec![("z", 2)] }
}

/// The unrefined grid underlying [`fig7`], with unit breakpoints everywhere.
pub fn fig7_initial() -> TMesh {
    let ext = [17, 13, 4];
    create_tensor_mesh(IndexDomain::new(ext.to_vec(), vec![3, 2, 1]).unwrap(), unit_breakpoints(&ext)).unwrap()
}

/// Recursive bisection of the lower-left active cell, three levels deep, `p = (3,3)`.
pub fn fig12() -> Fixture {
    let b = vec![0, 1, 2, 10, 18, 19, 20];
    let mut steps = Vec::new();
    for (lo, hi) in [(2, 10), (2, 6), (2, 4)] {
        let mid = (lo + hi) / 2;
        steps.push((vec![(lo, hi), (lo, hi)], 0));
        steps.push((vec![(lo, mid), (lo, hi)], 1));
        steps.push((vec![(mid, hi), (lo, hi)], 1));
    }
    Fixture { name: "fig12".into(), mesh: build(vec![3, 3], vec![b.clone(), b], &steps), marks: vec![] }
}

/// All named fixtures at their default degrees.
pub fn all() -> Vec<Fixture> {
    vec![
        fig5a(),
        fig5b(),
        fig6(),
        fig7(),
        fig10(1, 1),
        fig10(2, 1),
        fig10(3, 1),
        fig10e(),
        fig11([1, 1, 1]),
        fig11([2, 2, 2]),
        fig11([3, 2, 1]),
        fig12(),
    ]
}

/// Looks up a fixture by name.
pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
