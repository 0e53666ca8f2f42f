//! Executable checks of the structural lemmas behind the classifiers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::anchors::{project, KnotIndexVector};
use crate::dual_compat::vectors_overlap;
use crate::error::{Error, Result};
use crate::mesh::{Entity, TMesh};
use crate::region::Rat;
use crate::suitability::{atj, gtj_union, is_wgas};
use crate::topology::{find_separating_tjunction_among, separates};

#[derive(Clone, Debug, Default, Serialize)]
pub struct ProbeReport {
    /// Probes whose preconditions held.
    pub valid: usize,
    pub not_found: usize,
    /// Answers that fail the postconditions when rechecked.
    pub bad_answers: usize,
}

fn random_coord(rng: &mut ChaCha8Rng, n: i64) -> Rat {
    Rat::new(rng.gen_range(0..=4 * n), 4)
}

/// Samples `(x, y, i)` with `x_i = y_i`, `x in Sk_i`, `y not in Sk_i` and runs the
/// separating T-junction search on each, until `probes` valid triples were seen
/// or the attempt budget is spent.
pub fn separating_tjunction_probes(an: &Analysis, probes: usize, seed: u64) -> Result<ProbeReport> {
    let mesh = an.mesh();
    let d = mesh.dim();
    let ext = mesh.domain().extents().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let by_odir: Vec<Vec<_>> =
        (0..d).map(|i| an.tjunctions().iter().filter(|t| t.odir == i).cloned().collect()).collect();
    let mut rep = ProbeReport::default();
    let mut attempts = 0;
    while rep.valid < probes && attempts < 50 * probes {
        attempts += 1;
        let i = rng.gen_range(0..d);
        let c = match by_odir[i].choose(&mut rng) {
            Some(t) if rng.gen_bool(0.8) => t.entity.component(i).inf(),
            _ => rng.gen_range(0..=ext[i]),
        };
        let mut x: Vec<Rat> = (0..d).map(|k| random_coord(&mut rng, ext[k])).collect();
        x[i] = Rat::from_integer(c);
        let mut y = x.clone();
        for k in (0..d).filter(|&k| k != i) {
            if rng.gen_bool(0.6) {
                y[k] = random_coord(&mut rng, ext[k]);
            }
        }
        if x == y || !mesh.in_skeleton(&x, i)? || mesh.in_skeleton(&y, i)? {
            continue;
        }
        rep.valid += 1;
        match find_separating_tjunction_among(mesh, &by_odir[i], &x, &y, i) {
            Ok(t) => {
                if !separates(&t, &x, &y, i) {
                    rep.bad_answers += 1;
                }
            }
            Err(Error::NotFound) => rep.not_found += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// A projection that is partly but not entirely in the skeleton.
#[derive(Clone, Debug, Serialize)]
pub struct DichotomyViolation {
    pub entity: String,
    pub direction: usize,
    pub slice: i64,
}

fn dichotomy_for(mesh: &TMesh, e: &Entity, v: &KnotIndexVector, out: &mut Vec<DichotomyViolation>) {
    let j = v.direction;
    let (lo, hi) = v.hull();
    for m in lo..=hi {
        let p = project(e, j, m);
        if !mesh.entity_in_skeleton(&p, j) && mesh.entity_meets_skeleton(&p, j) {
            out.push(DichotomyViolation { entity: e.to_string(), direction: j + 1, slice: m });
        }
    }
}

/// For every anchor and T-junction `E`, direction `j` and integer `m` in the hull
/// of its (extended) vector in direction `j`: `P_{j,m}(E)` is either inside
/// `Sk_j` or disjoint from it.
pub fn projection_dichotomy(an: &Analysis) -> Result<Vec<DichotomyViolation>> {
    let mesh = an.mesh();
    let mut out = Vec::new();
    for a in an.anchors() {
        for v in &a.local {
            dichotomy_for(mesh, &a.entity, v, &mut out);
        }
    }
    for g in an.gtjs()? {
        for v in &g.extended_vectors {
            dichotomy_for(mesh, &g.tjunction.entity, v, &mut out);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapViolation {
    pub anchor: String,
    pub tjunction: String,
    pub direction: usize,
}

/// For every anchor `A` and T-junction `T` whose closure meets the support of
/// `A`, the local vector of `A` overlaps the extended vector of `T` in every
/// direction except `odir(T)`.
pub fn anchor_tjunction_overlaps(an: &Analysis) -> Result<Vec<OverlapViolation>> {
    let mut out = Vec::new();
    for g in an.gtjs()? {
        let t = &g.tjunction;
        for a in an.anchors() {
            let s = a.support();
            let meets = t
                .entity
                .components()
                .iter()
                .zip(&s)
                .all(|(c, &(lo, hi))| c.inf() <= hi && lo <= c.sup());
            if !meets {
                continue;
            }
            for k in (0..s.len()).filter(|&k| k != t.odir) {
                if !vectors_overlap(&a.local[k], &g.extended_vectors[k]) {
                    out.push(OverlapViolation {
                        anchor: a.entity.to_string(),
                        tjunction: t.entity.to_string(),
                        direction: k + 1,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `ATJ_i` is contained in `GTJ_i`, per direction.
pub fn atj_within_gtj(an: &Analysis) -> Result<Vec<bool>> {
    (0..an.mesh().dim()).map(|i| atj(an, i).subset(&gtj_union(an, i)?)).collect()
}

/// `GTJ_i` is contained in `ATJ_i`, per direction.
pub fn gtj_within_atj(an: &Analysis) -> Result<Vec<bool>> {
    (0..an.mesh().dim()).map(|i| gtj_union(an, i)?.subset(&atj(an, i))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InheritanceReport {
    pub parent_wgas: bool,
    pub child_wgas: bool,
    pub three_directions: bool,
    pub new_anchors: usize,
    /// New anchors without an old anchor that shares their off-direction
    /// vectors and contains their support.
    pub orphans: Vec<String>,
}

impl InheritanceReport {
    pub fn preconditions_hold(&self) -> bool {
        self.parent_wgas && self.child_wgas && self.three_directions
    }

    /// A violation is only meaningful when the preconditions hold.
    pub fn violated(&self) -> bool {
        self.preconditions_hold() && !self.orphans.is_empty()
    }
}

fn three_directions(mesh: &TMesh) -> Result<bool> {
    match mesh.check_three_direction_assumption() {
        Err(Error::DimensionTooSmall { .. }) => Ok(false),
        r => r,
    }
}

/// Bisects `cell` in direction `j` and matches every new anchor with an old one.
pub fn child_anchor_inheritance(mesh: &TMesh, cell: &Entity, j: usize) -> Result<InheritanceReport> {
    let child = mesh.subdiv(cell, j)?;
    let old = Analysis::new(mesh)?;
    let new = Analysis::new(&child)?;
    let mut orphans = Vec::new();
    let mut count = 0;
    for a in new.anchors() {
        if old.anchor(&a.entity).is_some() {
            continue;
        }
        count += 1;
        let s = a.support();
        let found = old.anchors().iter().any(|b| {
            let t = b.support();
            (0..s.len()).all(|l| l == j || a.local[l] == b.local[l])
                && s.iter().zip(&t).all(|(&(a0, a1), &(b0, b1))| b0 <= a0 && a1 <= b1)
        });
        if !found {
            orphans.push(a.entity.to_string());
        }
    }
    Ok(InheritanceReport {
        parent_wgas: is_wgas(&old)?.holds,
        child_wgas: is_wgas(&new)?.holds,
        three_directions: three_directions(mesh)? && three_directions(&child)?,
        new_anchors: count,
        orphans,
    })
}
