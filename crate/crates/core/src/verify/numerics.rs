//! Numerical certificates: evaluation-matrix rank and partition of unity.

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::anchors::AnchorData;
use crate::error::Result;
use crate::mesh::IndexDomain;
use crate::splines::{bspline_eval, bspline_eval_left, parametric_knots};

pub const RANK_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub num_anchors: usize,
    pub rank: usize,
    pub independent: bool,
    pub sample_points: usize,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
}

impl RankReport {
    /// Rank at another relative threshold.
    pub fn rank_at(&self, rel: f64) -> usize {
        numerical_rank(&self.singular_values, rel)
    }
}

/// Number of singular values above `rel` times the largest one.
pub fn numerical_rank(sv: &[f64], rel: f64) -> usize {
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

/// `n` Gauss-Legendre nodes on `[a, b]`.
fn gauss_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    if n == 1 {
        return vec![mid];
    }
    let mut x: Vec<f64> = GaussLegendre::new(n).expect("n >= 2").nodes().map(|t| mid + half * t).collect();
    x.sort_by(|p, q| p.partial_cmp(q).unwrap());
    x
}

struct Evaluator {
    knots: Vec<Vec<Vec<f64>>>,
    degrees: Vec<usize>,
    right_ends: Vec<f64>,
}

impl Evaluator {
    fn new(dom: &IndexDomain, anchors: &[AnchorData]) -> Self {
        Evaluator {
            knots: anchors
                .iter()
                .map(|a| a.local.iter().map(|v| parametric_knots(dom, v)).collect())
                .collect(),
            degrees: dom.degrees().iter().map(|&p| p as usize).collect(),
            right_ends: (0..dom.dim()).map(|k| dom.knot_f64(k, dom.extent(k))).collect(),
        }
    }

    fn eval(&self, a: usize, x: &[f64]) -> f64 {
        let mut v = 1.0;
        for (k, kn) in self.knots[a].iter().enumerate() {
            if x[k] < kn[0] || x[k] > kn[kn.len() - 1] {
                return 0.0;
            }
            let b = if x[k] >= self.right_ends[k] {
                bspline_eval_left(kn, self.degrees[k], x[k])
            } else {
                bspline_eval(kn, self.degrees[k], x[k])
            }
            .expect("local vectors have p+2 increasing knots");
            if b == 0.0 {
                return 0.0;
            }
            v *= b;
        }
        v
    }
}

/// Evaluation matrix of all T-splines at `(p_k + 1)` Gauss points per direction
/// in every active cell. Rows are sample points, columns anchors.
pub fn evaluation_matrix(an: &Analysis) -> DMatrix<f64> {
    let mesh = an.mesh();
    let dom = mesh.domain();
    let d = dom.dim();
    let ev = Evaluator::new(dom, an.anchors());
    let mut points: Vec<Vec<f64>> = Vec::new();
    for q in mesh.cells().iter().filter(|q| mesh.is_active(q)) {
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let c = q.component(k);
                gauss_nodes(dom.degree(k) as usize + 1, dom.knot_f64(k, c.inf()), dom.knot_f64(k, c.sup()))
            })
            .collect();
        let mut idx = vec![0usize; d];
        'grid: loop {
            points.push((0..d).map(|k| axes[k][idx[k]]).collect());
            for k in 0..d {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    continue 'grid;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    let n = an.anchors().len();
    DMatrix::from_fn(points.len(), n, |r, c| ev.eval(c, &points[r]))
}

/// Linear independence of the T-splines via the numerical rank of the evaluation matrix.
pub fn linear_independence_rank(an: &Analysis) -> RankReport {
    let m = evaluation_matrix(an);
    let n = m.ncols();
    let mut sv: Vec<f64> = if n == 0 { Vec::new() } else { m.singular_values().iter().cloned().collect() };
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let rank = numerical_rank(&sv, RANK_THRESHOLD);
    RankReport { num_anchors: n, rank, independent: rank == n, sample_points: m.nrows(), singular_values: sv }
}

/// The parametric box `prod [xi_{p_k}, xi_{N_k - p_k}]` on which the splines of an
/// admissible mesh with strictly increasing knots can sum to one.
pub fn reproduction_box(dom: &IndexDomain) -> Vec<(f64, f64)> {
    (0..dom.dim())
        .map(|k| {
            let p = dom.degree(k) as i64;
            let n = dom.extent(k);
            (dom.knot_f64(k, p.min(n)), dom.knot_f64(k, (n - p).max(0)))
        })
        .collect()
}

/// Largest `|sum_A B_A(x) - 1|` over `samples` uniform points of the reproduction box.
pub fn partition_of_unity(an: &Analysis, samples: usize, seed: u64) -> Result<f64> {
    let dom = an.mesh().domain();
    let bx = reproduction_box(dom);
    if bx.iter().any(|(a, b)| a >= b) {
        return Ok(0.0);
    }
    let ev = Evaluator::new(dom, an.anchors());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = bx.iter().map(|&(a, b)| rng.gen_range(a..b)).collect();
        let s: f64 = (0..an.anchors().len()).map(|i| ev.eval(i, &x)).sum();
        worst = worst.max((s - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::create_tensor_mesh;

    #[test]
    fn gauss_nodes_are_symmetric() {
        let x = gauss_nodes(2, 0.0, 1.0);
        let r = 0.5 / 3f64.sqrt();
        assert!((x[0] - (0.5 - r)).abs() < 1e-14 && (x[1] - (0.5 + r)).abs() < 1e-14);
        assert_eq!(gauss_nodes(1, 2.0, 4.0), vec![3.0]);
    }

    #[test]
    fn tensor_mesh_rank() {
        let dom = IndexDomain::new(vec![8, 8], vec![1, 1]).unwrap();
        let m = create_tensor_mesh(dom, vec![vec![0, 2, 4, 6, 8]; 2]).unwrap();
        let an = Analysis::new(&m).unwrap();
        let r = linear_independence_rank(&an);
        assert_eq!((r.num_anchors, r.rank), (9, 9));
        assert!(r.independent);
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let dom = IndexDomain::new(vec![8, 8], vec![1, 1]).unwrap();
        let m = create_tensor_mesh(dom, vec![vec![0, 2, 4, 6, 8]; 2]).unwrap();
        let an = Analysis::new(&m).unwrap();
        let e = evaluation_matrix(&an);
        let dup = e.clone().insert_column(e.ncols(), 0.0);
        let mut dup = dup;
        dup.set_column(e.ncols(), &e.column(4));
        let sv: Vec<f64> = dup.singular_values().iter().cloned().collect();
        assert_eq!(numerical_rank(&sv, RANK_THRESHOLD), 9);
        assert!(numerical_rank(&sv, RANK_THRESHOLD) < dup.ncols());
    }

    #[test]
    fn tensor_partition_of_unity() {
        for p in [vec![0, 1], vec![2, 3], vec![3, 2]] {
            let dom = IndexDomain::new(vec![9, 10], p).unwrap();
            let m = create_tensor_mesh(dom, vec![(0..=9).collect(), (0..=10).collect()]).unwrap();
            let an = Analysis::new(&m).unwrap();
            assert!(partition_of_unity(&an, 300, 1).unwrap() < 1e-12);
        }
    }
}
