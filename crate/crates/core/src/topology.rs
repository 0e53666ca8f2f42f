//! T-junction detection and the combinatorial search helpers built on it.

use crate::error::{Error, Result};
use crate::mesh::{Component, Entity, TMesh};
use crate::region::{Rat, Span};

/// A hanging `(d-2)`-entity together with its classification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TJunction {
    pub entity: Entity,
    /// Orthogonal direction (0-based).
    pub odir: usize,
    /// Pointing direction (0-based).
    pub pdir: usize,
    pub ascell: Entity,
    pub valence: usize,
}

/// All T-junctions of the mesh, sorted by entity.
pub fn find_tjunctions(mesh: &TMesh) -> Result<Vec<TJunction>> {
    let d = mesh.dim();
    if d < 2 {
        return Ok(Vec::new());
    }
    let lat = mesh.lattice();
    let mut out = Vec::new();
    for t in mesh.entities(d - 2) {
        let dirs = t.singleton_dirs();
        let (i, j) = (dirs[0], dirs[1]);
        let on_boundary = dirs.iter().any(|&k| {
            let n = t.component(k).inf();
            n == 0 || n == mesh.domain().extent(k)
        });
        if on_boundary {
            continue;
        }
        let rep: Vec<usize> = t.components().iter().map(|c| c.lattice_range().0).collect();
        // arm[k][s]: a hyperface leaves T in direction k, towards side s (0 = minus, 1 = plus)
        let mut missing = Vec::new();
        let mut valence = 0;
        for (k, other) in [(i, j), (j, i)] {
            for s in 0..2 {
                let mut c = rep.clone();
                if s == 0 {
                    c[k] -= 1;
                } else {
                    c[k] += 1;
                }
                let e = lat.entity(&c);
                if e.component(other).is_singleton() {
                    valence += 1;
                } else {
                    missing.push((k, s, c));
                }
            }
        }
        match valence {
            4 => continue,
            3 => {}
            v => {
                return Err(Error::ClassificationAmbiguous(format!(
                    "entity {t} has valence {v}"
                )))
            }
        }
        let (pdir, _, c) = missing.pop().unwrap();
        let odir = if pdir == i { j } else { i };
        let ascell = lat.entity(&c).clone();
        if ascell.entity_dim() != d {
            return Err(Error::ClassificationAmbiguous(format!(
                "associated cell of {t} is not a cell"
            )));
        }
        out.push(TJunction { entity: t.clone(), odir, pdir, ascell, valence });
    }
    Ok(out)
}

/// T-junctions with orthogonal direction `i`.
pub fn tjunctions_by_odir(mesh: &TMesh, i: usize) -> Result<Vec<TJunction>> {
    Ok(find_tjunctions(mesh)?.into_iter().filter(|t| t.odir == i).collect())
}

/// Parameter range `[t0, t1]` of the segment `x + t (y - x)`, `t in [0,1]`,
/// that lies in the closed box `bounds`, or `None` if the two do not meet.
pub fn segment_box_params(x: &[Rat], y: &[Rat], bounds: &[Span]) -> Option<(Rat, Rat)> {
    let mut t0 = Rat::from_integer(0);
    let mut t1 = Rat::from_integer(1);
    for k in 0..x.len() {
        let dk = y[k] - x[k];
        let (lo, hi) = (bounds[k].lo(), bounds[k].hi());
        if dk == Rat::from_integer(0) {
            if x[k] < lo || x[k] > hi {
                return None;
            }
            continue;
        }
        let (mut a, mut b) = ((lo - x[k]) / dk, (hi - x[k]) / dk);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        t0 = t0.max(a);
        t1 = t1.min(b);
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

/// Whether `t` is an admissible answer for the separation problem `(x, y, i)`.
pub fn separates(t: &TJunction, x: &[Rat], y: &[Rat], i: usize) -> bool {
    if t.odir != i {
        return false;
    }
    let spans: Vec<Span> = t.entity.components().iter().map(|c| c.closure_span()).collect();
    if segment_box_params(x, y, &spans).is_none() {
        return false;
    }
    let j = t.pdir;
    if x[j] == y[j] {
        return false;
    }
    let (lo, hi) = if x[j] < y[j] { (x[j], y[j]) } else { (y[j], x[j]) };
    let q = t.ascell.component(j);
    Rat::from_integer(q.inf()) < hi && lo < Rat::from_integer(q.sup())
}

/// Finds an `i`-orthogonal T-junction between `x in Sk_i` and `y not in Sk_i`.
///
/// Among all valid answers the one whose closure is entered first when walking
/// from `x` to `y` is returned; ties go to the smaller entity.
pub fn find_separating_tjunction(mesh: &TMesh, x: &[Rat], y: &[Rat], i: usize) -> Result<TJunction> {
    if i >= mesh.dim() {
        return Err(Error::InvalidDirection(i));
    }
    find_separating_tjunction_among(mesh, &tjunctions_by_odir(mesh, i)?, x, y, i)
}

/// [`find_separating_tjunction`] over a precomputed T-junction list.
pub fn find_separating_tjunction_among(
    mesh: &TMesh,
    tjunctions: &[TJunction],
    x: &[Rat],
    y: &[Rat],
    i: usize,
) -> Result<TJunction> {
    if i >= mesh.dim() {
        return Err(Error::InvalidDirection(i));
    }
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if x == y {
        return Err(Error::PreconditionViolated("x and y coincide".into()));
    }
    if x[i] != y[i] {
        return Err(Error::PreconditionViolated(format!("x and y differ in direction {}", i + 1)));
    }
    if !mesh.in_skeleton(x, i)? {
        return Err(Error::PreconditionViolated(format!("x is not in Sk_{}", i + 1)));
    }
    if mesh.in_skeleton(y, i)? {
        return Err(Error::PreconditionViolated(format!("y is in Sk_{}", i + 1)));
    }
    let mut best: Option<(Rat, TJunction)> = None;
    for t in tjunctions {
        if !separates(t, x, y, i) {
            continue;
        }
        let spans: Vec<Span> = t.entity.components().iter().map(|c| c.closure_span()).collect();
        let (t0, _) = segment_box_params(x, y, &spans).unwrap();
        if best.as_ref().map_or(true, |(b, _)| t0 < *b) {
            best = Some((t0, t.clone()));
        }
    }
    best.map(|(_, t)| t).ok_or(Error::NotFound)
}

/// One component of a minimal box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxComponent {
    Point(i64),
    Open(i64, i64),
    Closed(i64, i64),
}

/// Componentwise minimal box between two entities: the intersection where the
/// components meet, otherwise the closed gap between them.
pub fn mbox(e1: &Entity, e2: &Entity) -> Vec<BoxComponent> {
    e1.components()
        .iter()
        .zip(e2.components())
        .map(|(a, b)| mbox_component(*a, *b))
        .collect()
}

fn mbox_component(e: Component, f: Component) -> BoxComponent {
    use Component::*;
    match (e, f) {
        (Singleton(n), Singleton(m)) if n == m => BoxComponent::Point(n),
        (Singleton(n), Interval(a, b)) | (Interval(a, b), Singleton(n)) if a < n && n < b => {
            BoxComponent::Point(n)
        }
        (Interval(a, b), Interval(c, d)) if a.max(c) < b.min(d) => BoxComponent::Open(a.max(c), b.min(d)),
        _ => {
            let (lo, hi) = if e.sup() <= f.inf() { (e.sup(), f.inf()) } else { (f.sup(), e.inf()) };
            if lo == hi {
                BoxComponent::Point(lo)
            } else {
                BoxComponent::Closed(lo, hi)
            }
        }
    }
}
