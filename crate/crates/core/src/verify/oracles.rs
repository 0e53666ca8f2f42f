//! Brute-force ground truths for knot-vector overlap and abstract extensions.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::Analysis;
use crate::region::{BoxRegion, Rat};

/// Whether `v1` and `v2` are both runs of consecutive entries of one strictly
/// increasing real sequence. Tries every relative placement of the two runs and
/// checks the merged assignment directly.
pub fn overlap_bruteforce_oracle(v1: &[i64], v2: &[i64]) -> bool {
    let (l1, l2) = (v1.len() as i64, v2.len() as i64);
    'shift: for s in -l2..=l1 {
        // v1[i] sits at position i, v2[k] at position k + s
        let mut at: BTreeMap<i64, i64> = BTreeMap::new();
        for (i, &x) in v1.iter().enumerate() {
            at.insert(i as i64, x);
        }
        for (k, &x) in v2.iter().enumerate() {
            if let Some(&y) = at.get(&(k as i64 + s)) {
                if y != x {
                    continue 'shift;
                }
            }
            at.insert(k as i64 + s, x);
        }
        // gaps between filled positions can hold any reals, so only the order matters
        if at.values().zip(at.values().skip(1)).all(|(a, b)| a < b) {
            return true;
        }
    }
    false
}

/// Doubled-lattice points of the slice `S_j(n)`, as integer coordinates `2x`.
fn slice_points(an: &Analysis, j: usize, n: i64) -> Vec<Vec<i64>> {
    let ext = an.mesh().domain().extents();
    let d = ext.len();
    let mut out = Vec::new();
    let mut c: Vec<i64> = (0..d).map(|k| if k == j { 2 * n } else { 0 }).collect();
    loop {
        out.push(c.clone());
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            if k != j && c[k] < 2 * ext[k] {
                c[k] += 1;
                break;
            }
            if k != j {
                c[k] = 0;
            }
            k += 1;
        }
    }
}

fn in_support(support: &[(i64, i64)], p: &[i64]) -> bool {
    support.iter().zip(p).all(|(&(a, b), &x)| 2 * a <= x && x <= 2 * b)
}

/// `ATJ_j(n)` by pointwise enumeration: the doubled-lattice points of the slice
/// covered both by the support of an anchor with `n` in its global vector and by
/// the support of one without, among anchors whose local hull contains `n`.
pub fn atj_slice_oracle(an: &Analysis, j: usize, n: i64) -> BTreeSet<Vec<i64>> {
    let near: Vec<_> = an
        .anchors()
        .iter()
        .filter(|a| {
            let (lo, hi) = a.local[j].hull();
            lo <= n && n <= hi
        })
        .collect();
    slice_points(an, j, n)
        .into_iter()
        .filter(|p| {
            let mut with = false;
            let mut without = false;
            for a in &near {
                if in_support(&a.support(), p) {
                    if a.global[j].contains(n) {
                        with = true;
                    } else {
                        without = true;
                    }
                }
            }
            with && without
        })
        .collect()
}

/// Doubled-lattice points of `S_j(n)` that lie in `region`. Regions with integer
/// box corners are determined by these points.
pub fn region_slice_points(an: &Analysis, region: &BoxRegion, j: usize, n: i64) -> BTreeSet<Vec<i64>> {
    slice_points(an, j, n)
        .into_iter()
        .filter(|p| {
            let x: Vec<Rat> = p.iter().map(|&c| Rat::new(c, 2)).collect();
            region.contains_point(&x).unwrap()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bruteforce_examples() {
        assert!(overlap_bruteforce_oracle(&[0, 2, 3], &[2, 3, 4]));
        assert!(overlap_bruteforce_oracle(&[0, 1, 2], &[5, 6, 7]));
        assert!(!overlap_bruteforce_oracle(&[0, 2, 4], &[0, 3, 4]));
        assert!(!overlap_bruteforce_oracle(&[0, 1, 3, 4], &[1, 2, 3]));
        assert!(overlap_bruteforce_oracle(&[1, 2, 3], &[1, 2, 3]));
        // shifted placement where the runs only touch
        assert!(overlap_bruteforce_oracle(&[0, 1, 2], &[2, 3, 4]));
    }
}
