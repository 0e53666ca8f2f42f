//! Knot-vector overlap and the weak / strong dual-compatibility classifiers.

use rayon::prelude::*;

use crate::analysis::Analysis;
use crate::anchors::{AnchorData, KnotIndexVector};
use crate::error::{Error, Result};
use crate::mesh::Entity;
use crate::splines::support_overlaps;

/// Whether two strictly increasing vectors embed as consecutive runs of a common
/// vector: they must agree as sets on the intersection of their hulls.
pub fn knots_overlap(v1: &[i64], v2: &[i64]) -> bool {
    if v1.is_empty() || v2.is_empty() {
        return true;
    }
    let lo = v1[0].max(v2[0]);
    let hi = v1[v1.len() - 1].min(v2[v2.len() - 1]);
    if lo > hi {
        return true;
    }
    let r1 = v1.iter().filter(|&&x| lo <= x && x <= hi);
    let r2 = v2.iter().filter(|&&x| lo <= x && x <= hi);
    r1.eq(r2)
}

pub fn vectors_overlap(v1: &KnotIndexVector, v2: &KnotIndexVector) -> bool {
    knots_overlap(&v1.entries, &v2.entries)
}

/// `B_1 weakly partially overlaps B_2`: some direction where the vectors differ and overlap.
pub fn weakly_partially_overlap(a1: &AnchorData, a2: &AnchorData) -> Result<bool> {
    if a1.entity == a2.entity {
        return Err(Error::SameAnchor);
    }
    Ok(a1
        .local
        .iter()
        .zip(&a2.local)
        .any(|(v, w)| v != w && vectors_overlap(v, w)))
}

/// `B_1 strongly partially overlaps B_2`: disjoint supports or overlap in at least `d - 1` directions.
pub fn strongly_partially_overlap(a1: &AnchorData, a2: &AnchorData) -> Result<bool> {
    if a1.entity == a2.entity {
        return Err(Error::SameAnchor);
    }
    if !support_overlaps(&a1.support(), &a2.support()) {
        return Ok(true);
    }
    let d = a1.local.len();
    let n = a1.local.iter().zip(&a2.local).filter(|(v, w)| vectors_overlap(v, w)).count();
    Ok(n + 1 >= d)
}

/// A failing anchor pair with its per-direction diagnosis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub first: Entity,
    pub second: Entity,
    pub first_vectors: Vec<KnotIndexVector>,
    pub second_vectors: Vec<KnotIndexVector>,
    /// Per direction: whether the two local vectors overlap.
    pub overlaps: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcVerdict {
    pub holds: bool,
    pub witnesses: Vec<PairWitness>,
}

fn all_pairs(an: &Analysis, rel: fn(&AnchorData, &AnchorData) -> Result<bool>) -> DcVerdict {
    let a = an.anchors();
    let witnesses: Vec<PairWitness> = (0..a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..a.len()).filter_map(move |j| {
                if rel(&a[i], &a[j]).unwrap() {
                    return None;
                }
                Some(PairWitness {
                    first: a[i].entity.clone(),
                    second: a[j].entity.clone(),
                    first_vectors: a[i].local.clone(),
                    second_vectors: a[j].local.clone(),
                    overlaps: a[i].local.iter().zip(&a[j].local).map(|(v, w)| vectors_overlap(v, w)).collect(),
                })
            })
        })
        .collect();
    DcVerdict { holds: witnesses.is_empty(), witnesses }
}

/// Weak dual-compatibility.
pub fn is_wdc(an: &Analysis) -> DcVerdict {
    all_pairs(an, weakly_partially_overlap)
}

/// Strong dual-compatibility.
pub fn is_sdc(an: &Analysis) -> DcVerdict {
    all_pairs(an, strongly_partially_overlap)
}

/// Anchors aligned in direction `j` (equal in every other component) whose global
/// vectors in `j` differ. Always empty on valid meshes.
pub fn aligned_global_mismatches(an: &Analysis) -> Vec<(Entity, Entity, usize)> {
    let a = an.anchors();
    let d = an.mesh().dim();
    let mut out = Vec::new();
    for i in 0..a.len() {
        for k in i + 1..a.len() {
            for j in 0..d {
                let aligned = (0..d).all(|l| l == j || a[i].entity.component(l) == a[k].entity.component(l));
                if aligned && a[i].global[j] != a[k].global[j] {
                    out.push((a[i].entity.clone(), a[k].entity.clone(), j));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_examples() {
        assert!(knots_overlap(&[0, 2, 3], &[0, 2, 3]));
        assert!(knots_overlap(&[0, 2, 3], &[2, 3, 4]));
        assert!(!knots_overlap(&[0, 2, 4], &[0, 3, 4]));
        assert!(knots_overlap(&[0, 1, 2], &[3, 4, 5]));
    }

    fn anchor(x: i64, v: Vec<Vec<i64>>) -> AnchorData {
        use crate::mesh::Component;
        let local: Vec<KnotIndexVector> =
            v.into_iter().enumerate().map(|(k, e)| KnotIndexVector::new(k, e)).collect();
        AnchorData {
            entity: Entity::new(vec![Component::Singleton(x); local.len()]),
            global: local.clone(),
            local,
        }
    }

    #[test]
    fn partial_overlaps() {
        let a = anchor(1, vec![vec![0, 1, 2], vec![0, 1, 2]]);
        let b = anchor(2, vec![vec![1, 2, 3], vec![0, 1, 2]]);
        assert!(weakly_partially_overlap(&a, &b).unwrap());
        assert!(strongly_partially_overlap(&a, &b).unwrap());
        let far = anchor(9, vec![vec![7, 8, 9], vec![5, 6, 7]]);
        assert!(strongly_partially_overlap(&a, &far).unwrap());
        assert_eq!(weakly_partially_overlap(&a, &a), Err(Error::SameAnchor));
        let c = anchor(3, vec![vec![0, 2, 3], vec![0, 2, 3]]);
        assert!(!strongly_partially_overlap(&a, &c).unwrap());
        assert!(!weakly_partially_overlap(&a, &c).unwrap());
    }
}
