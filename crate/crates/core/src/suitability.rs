//! Abstract and geometric T-junction extensions and the AAS / SGAS / WGAS classifiers.

use rayon::prelude::*;

use crate::analysis::Analysis;
use crate::anchors::{global_knot_vector, KnotIndexVector};
use crate::error::{Error, Result};
use crate::mesh::{Component, TMesh};
use crate::region::{BoxRegion, ClosedBox};
use crate::topology::TJunction;

/// `ATJ_j(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractExtension {
    pub direction: usize,
    pub slice: i64,
    pub region: BoxRegion,
}

/// `GTJ(T)` with the extended vectors it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricExtension {
    pub tjunction: TJunction,
    pub extended_vectors: Vec<KnotIndexVector>,
    pub region: ClosedBox,
}

/// A pair of abstract extensions in different directions that meet.
#[derive(Clone, Debug, PartialEq)]
pub struct AtjWitness {
    /// `(direction, slice)` of the first extension.
    pub first: (usize, i64),
    pub second: (usize, i64),
    pub intersection: BoxRegion,
}

/// A pair of geometric extensions that should be disjoint but meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtjWitness {
    pub first: TJunction,
    pub second: TJunction,
    pub intersection: ClosedBox,
}

/// Verdict of a classifier with the pairs that violate it.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification<W> {
    pub holds: bool,
    pub witnesses: Vec<W>,
}

impl<W> Classification<W> {
    fn from_witnesses(witnesses: Vec<W>) -> Self {
        Classification { holds: witnesses.is_empty(), witnesses }
    }
}

/// The closed slice `S_j(n)`.
pub fn slice_box(mesh: &TMesh, j: usize, n: i64) -> ClosedBox {
    let mut b = mesh.domain_bounds();
    b[j] = (n, n);
    ClosedBox::from_int_bounds(&b)
}

pub(crate) fn atj_slice_region(an: &Analysis, j: usize, n: i64) -> BoxRegion {
    let d = an.mesh().dim();
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for a in an.anchors() {
        let (lo, hi) = a.local[j].hull();
        if n < lo || n > hi {
            continue;
        }
        let mut s = a.support();
        s[j] = (n, n);
        let b = ClosedBox::from_int_bounds(&s);
        if a.global[j].contains(n) {
            inside.push(b);
        } else {
            outside.push(b);
        }
    }
    if inside.is_empty() || outside.is_empty() {
        return BoxRegion::empty(d);
    }
    let u1 = BoxRegion::from_boxes(d, inside).unwrap().simplify();
    let u2 = BoxRegion::from_boxes(d, outside).unwrap().simplify();
    u1.intersect(&u2).unwrap().simplify()
}

/// `ATJ_j(n)`.
pub fn atj_slice(an: &Analysis, j: usize, n: i64) -> AbstractExtension {
    AbstractExtension { direction: j, slice: n, region: an.atj_slices()[j][n as usize].clone() }
}

/// `ATJ_j`, the union over all slices.
pub fn atj(an: &Analysis, j: usize) -> BoxRegion {
    let mut r = BoxRegion::empty(an.mesh().dim());
    for s in &an.atj_slices()[j] {
        r = r.union(s).unwrap();
    }
    r
}

/// Abstract analysis-suitability: abstract extensions in different directions are disjoint.
pub fn is_aas(an: &Analysis) -> Classification<AtjWitness> {
    let slices = an.atj_slices();
    let d = an.mesh().dim();
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for (n, ri) in slices[i].iter().enumerate() {
                if ri.is_empty() {
                    continue;
                }
                for (m, rj) in slices[j].iter().enumerate() {
                    if !rj.is_empty() {
                        pairs.push((i, n, j, m));
                    }
                }
            }
        }
    }
    let witnesses: Vec<AtjWitness> = pairs
        .into_par_iter()
        .filter_map(|(i, n, j, m)| {
            let x = slices[i][n].intersect(&slices[j][m]).unwrap();
            if x.is_empty() {
                None
            } else {
                Some(AtjWitness { first: (i, n as i64), second: (j, m as i64), intersection: x.simplify() })
            }
        })
        .collect();
    Classification::from_witnesses(witnesses)
}

/// Extended knot vectors and the box `GTJ(T)`. Near the domain boundary the
/// windows are cut off at index `0` and `N_k`.
pub fn gtj(mesh: &TMesh, t: &TJunction) -> Result<GeometricExtension> {
    let d = mesh.dim();
    let mut vectors = Vec::with_capacity(d);
    for k in 0..d {
        let p = mesh.domain().degree(k) as usize;
        let v = if k == t.odir {
            KnotIndexVector::new(k, vec![t.entity.component(k).inf()])
        } else if k == t.pdir {
            let global = global_knot_vector(mesh, &t.entity, k);
            let anchor = if p % 2 == 0 {
                t.entity.component(k).inf()
            } else {
                t.ascell.component(k).inf()
            };
            let pos = global.position(anchor).ok_or(Error::InsufficientKnots { direction: k })?;
            if p % 2 == 1 && global.entries.get(pos + 1) != Some(&t.ascell.component(k).sup()) {
                return Err(Error::NonAdjacentCellBounds { direction: k });
            }
            global.window_clamped(pos as isize - (p / 2) as isize, p + 1)
        } else {
            let global = global_knot_vector(mesh, &t.entity, k);
            let (a, b) = match t.entity.component(k) {
                Component::Interval(a, b) => (a, b),
                Component::Singleton(_) => unreachable!("T-junctions have exactly two singleton directions"),
            };
            let pos = global.position(a).ok_or(Error::InsufficientKnots { direction: k })?;
            if global.entries.get(pos + 1) != Some(&b) {
                return Err(Error::NonAdjacentCellBounds { direction: k });
            }
            global.window_clamped(pos as isize - p.div_ceil(2) as isize, p + 2 + p % 2)
        };
        vectors.push(v);
    }
    let bounds: Vec<(i64, i64)> = vectors.iter().map(|v| v.hull()).collect();
    Ok(GeometricExtension {
        tjunction: t.clone(),
        extended_vectors: vectors,
        region: ClosedBox::from_int_bounds(&bounds),
    })
}

/// `GTJ_i`, the union of `GTJ(T)` over T-junctions with orthogonal direction `i`.
pub fn gtj_union(an: &Analysis, i: usize) -> Result<BoxRegion> {
    let boxes = an
        .gtjs()?
        .iter()
        .filter(|g| g.tjunction.odir == i)
        .map(|g| g.region.clone())
        .collect();
    Ok(BoxRegion::from_boxes(an.mesh().dim(), boxes).unwrap())
}

fn gtj_pairs(an: &Analysis, weak: bool) -> Result<Classification<GtjWitness>> {
    let g = an.gtjs()?;
    let witnesses: Vec<GtjWitness> = (0..g.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            (a + 1..g.len()).filter_map(move |b| {
                let (s, t) = (&g[a], &g[b]);
                if s.tjunction.odir == t.tjunction.odir {
                    return None;
                }
                if weak && s.tjunction.pdir == t.tjunction.pdir {
                    return None;
                }
                s.region.intersect(&t.region).map(|x| GtjWitness {
                    first: s.tjunction.clone(),
                    second: t.tjunction.clone(),
                    intersection: x,
                })
            })
        })
        .collect();
    Ok(Classification::from_witnesses(witnesses))
}

/// Strong geometric analysis-suitability.
pub fn is_sgas(an: &Analysis) -> Result<Classification<GtjWitness>> {
    gtj_pairs(an, false)
}

/// Weak geometric analysis-suitability.
pub fn is_wgas(an: &Analysis) -> Result<Classification<GtjWitness>> {
    gtj_pairs(an, true)
}
