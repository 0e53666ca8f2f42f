//! Univariate Cox-de Boor evaluation and T-spline products.

use crate::anchors::KnotIndexVector;
use crate::error::{Error, Result};
use crate::mesh::IndexDomain;

/// Value at `t` of the single B-spline of degree `p` on `knots` (`p + 2` values),
/// right-continuous at every knot.
pub fn bspline_eval(knots: &[f64], p: usize, t: f64) -> Result<f64> {
    eval(knots, p, t, false)
}

/// Same as [`bspline_eval`] but left-continuous, i.e. the limit from the left at knots.
pub fn bspline_eval_left(knots: &[f64], p: usize, t: f64) -> Result<f64> {
    eval(knots, p, t, true)
}

fn eval(knots: &[f64], p: usize, t: f64, left: bool) -> Result<f64> {
    if knots.len() != p + 2 {
        return Err(Error::Format(format!(
            "degree {p} needs {} knots, got {}",
            p + 2,
            knots.len()
        )));
    }
    if knots[0] >= knots[p + 1] {
        return Err(Error::DegenerateKnots);
    }
    let mut n: Vec<f64> = knots
        .windows(2)
        .map(|w| {
            let inside = if left { w[0] < t && t <= w[1] } else { w[0] <= t && t < w[1] };
            if inside {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for k in 1..=p {
        for i in 0..=p - k {
            let mut v = 0.0;
            let d1 = knots[i + k] - knots[i];
            if d1 > 0.0 {
                v += (t - knots[i]) / d1 * n[i];
            }
            let d2 = knots[i + k + 1] - knots[i + 1];
            if d2 > 0.0 {
                v += (knots[i + k + 1] - t) / d2 * n[i + 1];
            }
            n[i] = v;
        }
    }
    Ok(n[0])
}

/// A T-spline: an anchor's local knot vectors and its index support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSpline {
    pub local_vectors: Vec<KnotIndexVector>,
}

impl TSpline {
    pub fn new(local_vectors: Vec<KnotIndexVector>) -> Self {
        TSpline { local_vectors }
    }

    pub fn index_support(&self) -> Vec<(i64, i64)> {
        index_support(&self.local_vectors)
    }

    pub fn eval(&self, domain: &IndexDomain, x: &[f64]) -> Result<f64> {
        tspline_eval(domain, &self.local_vectors, x)
    }
}

/// Closed box `conv v_1 x ... x conv v_d`.
pub fn index_support(local: &[KnotIndexVector]) -> Vec<(i64, i64)> {
    local.iter().map(|v| v.hull()).collect()
}

/// Whether two closed index supports meet.
pub fn support_overlaps(s1: &[(i64, i64)], s2: &[(i64, i64)]) -> bool {
    s1.iter().zip(s2).all(|(a, b)| a.0.max(b.0) <= a.1.min(b.1))
}

/// Parametric knots of a local index vector.
pub fn parametric_knots(domain: &IndexDomain, v: &KnotIndexVector) -> Vec<f64> {
    v.entries.iter().map(|&i| domain.knot_f64(v.direction, i)).collect()
}

/// Product of the univariate B-splines at a parametric point. At the right end
/// of the parametric domain the left limit is taken so that the closed domain is covered.
pub fn tspline_eval(domain: &IndexDomain, local: &[KnotIndexVector], x: &[f64]) -> Result<f64> {
    if x.len() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: x.len() });
    }
    let mut value = 1.0;
    for (k, v) in local.iter().enumerate() {
        let knots = parametric_knots(domain, v);
        let p = domain.degree(k) as usize;
        let right_end = domain.knot_f64(k, domain.extent(k));
        let b = if x[k] >= right_end {
            bspline_eval_left(&knots, p, x[k])?
        } else {
            bspline_eval(&knots, p, x[k])?
        };
        if b == 0.0 {
            return Ok(0.0);
        }
        value *= b;
    }
    Ok(value)
}
