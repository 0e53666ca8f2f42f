//! Exact set algebra over finite unions of closed axis-aligned boxes.
//!
//! Every box component is either a single rational point or a closed
//! rational interval. Unions are stored as plain box lists; `normalize`
//! produces a canonical form when one is needed for output.

use num_rational::Rational64;

use crate::error::{Error, Result};

pub type Rat = Rational64;

/// One component of a closed box: the closed interval `[lo, hi]`, a point when `lo == hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    lo: Rat,
    hi: Rat,
}

impl Span {
    pub fn point(q: Rat) -> Self {
        Span { lo: q, hi: q }
    }

    /// Closed interval `[a, b]`. Panics if `a > b`.
    pub fn closed(a: Rat, b: Rat) -> Self {
        assert!(a <= b, "closed span with lo > hi");
        Span { lo: a, hi: b }
    }

    pub fn int_point(n: i64) -> Self {
        Self::point(Rat::from_integer(n))
    }

    pub fn int_closed(a: i64, b: i64) -> Self {
        Self::closed(Rat::from_integer(a), Rat::from_integer(b))
    }

    pub fn lo(&self) -> Rat {
        self.lo
    }

    pub fn hi(&self) -> Rat {
        self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: Rat) -> bool {
        self.lo <= q && q <= self.hi
    }

    pub fn intersect(&self, other: &Span) -> Option<Span> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Span { lo, hi })
    }

    pub fn is_subset_of(&self, other: &Span) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// A closed axis-aligned box, one [`Span`] per direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedBox {
    spans: Vec<Span>,
}

impl ClosedBox {
    pub fn new(spans: Vec<Span>) -> Self {
        ClosedBox { spans }
    }

    /// Box with integer bounds `[lo_k, hi_k]` per direction.
    pub fn from_int_bounds(bounds: &[(i64, i64)]) -> Self {
        ClosedBox {
            spans: bounds.iter().map(|&(a, b)| Span::int_closed(a, b)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.spans.len()
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn span(&self, k: usize) -> Span {
        self.spans[k]
    }

    pub fn with_span(&self, k: usize, s: Span) -> Self {
        let mut spans = self.spans.clone();
        spans[k] = s;
        ClosedBox { spans }
    }

    pub fn intersect(&self, other: &ClosedBox) -> Option<ClosedBox> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut spans = Vec::with_capacity(self.dim());
        for (a, b) in self.spans.iter().zip(&other.spans) {
            spans.push(a.intersect(b)?);
        }
        Some(ClosedBox { spans })
    }

    pub fn meets(&self, other: &ClosedBox) -> bool {
        self.spans
            .iter()
            .zip(&other.spans)
            .all(|(a, b)| a.lo.max(b.lo) <= a.hi.min(b.hi))
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.spans.iter().zip(x).all(|(s, &q)| s.contains(q))
    }

    pub fn is_subset_of(&self, other: &ClosedBox) -> bool {
        self.spans.iter().zip(&other.spans).all(|(a, b)| a.is_subset_of(b))
    }
}

/// A finite union of closed boxes of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    dim: usize,
    boxes: Vec<ClosedBox>,
}

impl BoxRegion {
    pub fn empty(dim: usize) -> Self {
        BoxRegion { dim, boxes: Vec::new() }
    }

    pub fn from_box(b: ClosedBox) -> Self {
        BoxRegion { dim: b.dim(), boxes: vec![b] }
    }

    pub fn from_boxes(dim: usize, boxes: Vec<ClosedBox>) -> Result<Self> {
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
        }
        Ok(BoxRegion { dim, boxes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[ClosedBox] {
        &self.boxes
    }

    pub fn into_boxes(self) -> Vec<ClosedBox> {
        self.boxes
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim == d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, got: d })
        }
    }

    pub fn push(&mut self, b: ClosedBox) -> Result<()> {
        self.check_dim(b.dim())?;
        self.boxes.push(b);
        Ok(())
    }

    pub fn union(&self, other: &BoxRegion) -> Result<BoxRegion> {
        self.check_dim(other.dim)?;
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(BoxRegion { dim: self.dim, boxes })
    }

    pub fn intersect(&self, other: &BoxRegion) -> Result<BoxRegion> {
        self.check_dim(other.dim)?;
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                if let Some(c) = a.intersect(b) {
                    boxes.push(c);
                }
            }
        }
        Ok(BoxRegion { dim: self.dim, boxes })
    }

    pub fn intersect_box(&self, b: &ClosedBox) -> Result<BoxRegion> {
        self.check_dim(b.dim())?;
        let boxes = self.boxes.iter().filter_map(|a| a.intersect(b)).collect();
        Ok(BoxRegion { dim: self.dim, boxes })
    }

    /// Boxes are non-empty by construction, so a region is empty iff it has no boxes.
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains_point(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self.boxes.iter().any(|b| b.contains_point(x)))
    }

    pub fn meets(&self, other: &BoxRegion) -> Result<bool> {
        self.check_dim(other.dim)?;
        Ok(self.boxes.iter().any(|a| other.boxes.iter().any(|b| a.meets(b))))
    }

    /// `self ⊆ other`, decided by subtracting the boxes of `other` from each box of `self`.
    pub fn subset(&self, other: &BoxRegion) -> Result<bool> {
        self.check_dim(other.dim)?;
        for b in &self.boxes {
            let mut pieces = vec![Piece::from_box(b)];
            for c in &other.boxes {
                if pieces.is_empty() {
                    break;
                }
                pieces = pieces.into_iter().flat_map(|p| p.subtract(c)).collect();
            }
            if !pieces.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &BoxRegion) -> Result<bool> {
        Ok(self.subset(other)? && other.subset(self)?)
    }

    /// Removes duplicate boxes and boxes contained in another box of the list.
    pub fn simplify(&self) -> BoxRegion {
        let mut boxes = self.boxes.clone();
        boxes.sort();
        boxes.dedup();
        let mut keep = vec![true; boxes.len()];
        for i in 0..boxes.len() {
            for j in 0..boxes.len() {
                if i != j && keep[j] && boxes[i].is_subset_of(&boxes[j]) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let boxes = boxes
            .into_iter()
            .zip(keep)
            .filter_map(|(b, k)| k.then_some(b))
            .collect();
        BoxRegion { dim: self.dim, boxes }
    }

    /// Canonical representation of the point set.
    ///
    /// The region is rasterised on the grid of all box endpoints, breakpoints
    /// that do not change the covered set are dropped, and the closures of the
    /// maximal covered grid pieces are merged along each axis. Two regions
    /// describing the same point set normalize to identical box lists. Cost is
    /// proportional to the size of the rasterised grid, so this is meant for
    /// output and golden comparisons rather than inner loops.
    pub fn normalize(&self) -> BoxRegion {
        if self.boxes.is_empty() {
            return BoxRegion::empty(self.dim);
        }
        let d = self.dim;
        let mut grid: Vec<Vec<Rat>> = (0..d)
            .map(|k| {
                let mut g: Vec<Rat> = self
                    .boxes
                    .iter()
                    .flat_map(|b| [b.spans[k].lo, b.spans[k].hi])
                    .collect();
                g.sort();
                g.dedup();
                g
            })
            .collect();
        let mut raster = Raster::new(&grid);
        for b in &self.boxes {
            let ranges: Vec<(usize, usize)> = (0..d)
                .map(|k| {
                    let lo = grid[k].binary_search(&b.spans[k].lo).unwrap();
                    let hi = grid[k].binary_search(&b.spans[k].hi).unwrap();
                    (2 * lo, 2 * hi)
                })
                .collect();
            raster.fill(&ranges);
        }

        // Drop breakpoints across which the covered set does not change.
        for k in 0..d {
            let m = grid[k].len();
            let removable: Vec<bool> = (0..m)
                .map(|i| i > 0 && i + 1 < m && raster.uniform_across(k, 2 * i))
                .collect();
            if removable.iter().any(|&r| r) {
                let mut keep_pieces = Vec::new();
                let mut new_grid = Vec::new();
                for i in 0..m {
                    if removable[i] {
                        continue;
                    }
                    new_grid.push(grid[k][i]);
                    keep_pieces.push(2 * i);
                    if i + 1 < m {
                        keep_pieces.push(2 * i + 1);
                    }
                }
                raster = raster.select(k, &keep_pieces);
                grid[k] = new_grid;
            }
        }

        let mut boxes = Vec::new();
        raster.for_each_covered(|t| {
            if raster.is_maximal(t) {
                let spans = (0..d)
                    .map(|k| {
                        let i = t[k] / 2;
                        if t[k] % 2 == 0 {
                            Span::point(grid[k][i])
                        } else {
                            Span::closed(grid[k][i], grid[k][i + 1])
                        }
                    })
                    .collect();
                boxes.push(ClosedBox::new(spans));
            }
        });

        for k in 0..d {
            boxes = merge_along(boxes, k);
        }
        let mut out = BoxRegion { dim: d, boxes }.simplify();
        out.boxes.sort();
        out
    }
}

fn merge_along(mut boxes: Vec<ClosedBox>, k: usize) -> Vec<ClosedBox> {
    let key = |b: &ClosedBox| {
        let mut others: Vec<Span> = b.spans.clone();
        others.remove(k);
        (others, b.spans[k].lo, b.spans[k].hi)
    };
    boxes.sort_by_key(key);
    let mut out: Vec<ClosedBox> = Vec::with_capacity(boxes.len());
    for b in boxes {
        if let Some(last) = out.last_mut() {
            let same_rest = (0..b.dim()).all(|l| l == k || last.spans[l] == b.spans[l]);
            if same_rest && last.spans[k].hi >= b.spans[k].lo {
                let hi = last.spans[k].hi.max(b.spans[k].hi);
                last.spans[k] = Span::closed(last.spans[k].lo, hi);
                continue;
            }
        }
        out.push(b);
    }
    out
}

/// Dense occupancy grid over the pieces (points and open intervals) of a breakpoint grid.
struct Raster {
    shape: Vec<usize>,
    strides: Vec<usize>,
    cells: Vec<bool>,
}

impl Raster {
    fn new(grid: &[Vec<Rat>]) -> Self {
        let shape: Vec<usize> = grid.iter().map(|g| 2 * g.len() - 1).collect();
        Self::with_shape(shape)
    }

    fn with_shape(shape: Vec<usize>) -> Self {
        let mut strides = vec![1; shape.len()];
        for k in (0..shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        let total = shape.iter().product();
        Raster { shape, strides, cells: vec![false; total] }
    }

    fn offset(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.strides).map(|(a, b)| a * b).sum()
    }

    fn fill(&mut self, ranges: &[(usize, usize)]) {
        let mut t: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            let o = self.offset(&t);
            self.cells[o] = true;
            let mut k = t.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if t[k] < ranges[k].1 {
                    t[k] += 1;
                    break;
                }
                t[k] = ranges[k].0;
            }
        }
    }

    fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
        if shape.iter().any(|&s| s == 0) {
            return;
        }
        let mut t = vec![0usize; shape.len()];
        loop {
            f(&t);
            let mut k = t.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if t[k] + 1 < shape[k] {
                    t[k] += 1;
                    break;
                }
                t[k] = 0;
            }
        }
    }

    fn for_each_covered(&self, mut f: impl FnMut(&[usize])) {
        Self::for_each_index(&self.shape, |t| {
            if self.cells[self.offset(t)] {
                f(t)
            }
        });
    }

    /// True if pieces `p-1`, `p`, `p+1` along axis `k` carry identical occupancy everywhere.
    fn uniform_across(&self, k: usize, p: usize) -> bool {
        let mut shape = self.shape.clone();
        shape[k] = 1;
        let mut ok = true;
        Self::for_each_index(&shape, |t| {
            if !ok {
                return;
            }
            let mut u = t.to_vec();
            u[k] = p - 1;
            let a = self.cells[self.offset(&u)];
            u[k] = p;
            let b = self.cells[self.offset(&u)];
            u[k] = p + 1;
            let c = self.cells[self.offset(&u)];
            ok = a == b && b == c;
        });
        ok
    }

    /// Keeps only the listed pieces along axis `k`, in order.
    fn select(&self, k: usize, pieces: &[usize]) -> Raster {
        let mut shape = self.shape.clone();
        shape[k] = pieces.len();
        let mut out = Raster::with_shape(shape.clone());
        Self::for_each_index(&shape, |t| {
            let mut u = t.to_vec();
            u[k] = pieces[t[k]];
            let v = self.cells[self.offset(&u)];
            let o = out.offset(t);
            out.cells[o] = v;
        });
        out
    }

    /// A covered piece is maximal if it is not on the boundary of another covered piece.
    fn is_maximal(&self, t: &[usize]) -> bool {
        let mut u = t.to_vec();
        for k in 0..t.len() {
            if t[k] % 2 == 1 {
                continue;
            }
            for nb in [t[k].wrapping_sub(1), t[k] + 1] {
                if nb < self.shape[k] {
                    u[k] = nb;
                    if self.cells[self.offset(&u)] {
                        return false;
                    }
                }
            }
            u[k] = t[k];
        }
        true
    }
}

/// Bound of a general interval; used only internally by the subset test.
#[derive(Clone, Copy, Debug)]
struct Bound {
    lo: Rat,
    lo_closed: bool,
    hi: Rat,
    hi_closed: bool,
}

impl Bound {
    fn non_empty(&self) -> bool {
        self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed)
    }

    fn below(&self, c: Rat) -> Bound {
        if self.hi < c {
            *self
        } else {
            Bound { hi: c, hi_closed: false, ..*self }
        }
    }

    fn above(&self, c: Rat) -> Bound {
        if self.lo > c {
            *self
        } else {
            Bound { lo: c, lo_closed: false, ..*self }
        }
    }

    fn clamp(&self, s: &Span) -> Bound {
        let mut b = *self;
        if s.lo > b.lo {
            b.lo = s.lo;
            b.lo_closed = true;
        }
        if s.hi < b.hi {
            b.hi = s.hi;
            b.hi_closed = true;
        }
        b
    }
}

#[derive(Clone, Debug)]
struct Piece {
    bounds: Vec<Bound>,
}

impl Piece {
    fn from_box(b: &ClosedBox) -> Self {
        Piece {
            bounds: b
                .spans
                .iter()
                .map(|s| Bound { lo: s.lo, lo_closed: true, hi: s.hi, hi_closed: true })
                .collect(),
        }
    }

    fn subtract(self, c: &ClosedBox) -> Vec<Piece> {
        if !self.bounds.iter().zip(&c.spans).all(|(b, s)| b.clamp(s).non_empty()) {
            return vec![self];
        }
        let mut out = Vec::new();
        let mut rest = self;
        for (k, s) in c.spans.iter().enumerate() {
            let b = rest.bounds[k];
            for part in [b.below(s.lo), b.above(s.hi)] {
                if part.non_empty() {
                    let mut p = rest.clone();
                    p.bounds[k] = part;
                    out.push(p);
                }
            }
            rest.bounds[k] = b.clamp(s);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    fn region(boxes: &[&[(i64, i64)]]) -> BoxRegion {
        let d = boxes[0].len();
        BoxRegion::from_boxes(d, boxes.iter().map(|b| ClosedBox::from_int_bounds(b)).collect())
            .unwrap()
    }

    #[test]
    fn shared_face_intersection_is_nonempty() {
        let a = region(&[&[(0, 1), (0, 1)]]);
        let b = region(&[&[(1, 2), (0, 1)]]);
        let c = a.intersect(&b).unwrap();
        assert!(c.equals(&region(&[&[(1, 1), (0, 1)]])).unwrap());
        assert!(!c.is_empty());
    }

    #[test]
    fn intersection_with_empty_is_empty() {
        let a = region(&[&[(0, 1), (0, 1)]]);
        assert!(a.intersect(&BoxRegion::empty(2)).unwrap().is_empty());
    }

    #[test]
    fn crossing_segments_meet_in_a_point() {
        let (m, n) = (5, 7);
        let v = region(&[&[(m - 1, m - 1), (n - 1, n + 2)]]);
        let h = region(&[&[(m - 2, m + 2), (n, n)]]);
        let c = v.intersect(&h).unwrap();
        assert!(c.equals(&region(&[&[(m - 1, m - 1), (n, n)]])).unwrap());
    }

    #[test]
    fn subset_cases() {
        let a = region(&[&[(1, 1), (0, 2)]]);
        let b = region(&[&[(0, 3), (0, 2)]]);
        assert!(a.subset(&a).unwrap());
        assert!(a.subset(&b).unwrap());
        assert!(!b.subset(&a).unwrap());
        let split = region(&[&[(0, 1), (0, 2)], &[(1, 3), (0, 2)]]);
        assert!(b.subset(&split).unwrap());
        let holed = region(&[&[(0, 1), (0, 2)], &[(2, 3), (0, 2)]]);
        assert!(!b.subset(&holed).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = region(&[&[(0, 1)]]);
        let b = region(&[&[(0, 1), (0, 1)]]);
        assert!(matches!(a.intersect(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.subset(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn normalize_is_canonical() {
        let a = region(&[&[(0, 1), (0, 2)], &[(1, 2), (0, 2)]]);
        let b = region(&[&[(0, 2), (0, 1)], &[(0, 2), (1, 2)], &[(1, 1), (1, 1)]]);
        assert_eq!(a.normalize(), b.normalize());
        assert_eq!(a.normalize().boxes().len(), 1);
        let lower_dim = region(&[&[(0, 2), (0, 0)], &[(2, 2), (0, 3)], &[(1, 2), (0, 0)]]);
        let n = lower_dim.normalize();
        assert!(n.equals(&lower_dim).unwrap());
        assert_eq!(n.boxes().len(), 2);
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn half_open_pieces_do_not_leak() {
        let b = BoxRegion::from_box(ClosedBox::new(vec![Span::closed(r(0), r(2))]));
        let parts = BoxRegion::from_boxes(
            1,
            vec![
                ClosedBox::new(vec![Span::closed(r(0), Rat::new(1, 2))]),
                ClosedBox::new(vec![Span::closed(Rat::new(1, 2), r(2))]),
            ],
        )
        .unwrap();
        assert!(b.subset(&parts).unwrap());
        let gap = BoxRegion::from_boxes(
            1,
            vec![
                ClosedBox::new(vec![Span::closed(r(0), Rat::new(1, 3))]),
                ClosedBox::new(vec![Span::closed(Rat::new(1, 2), r(2))]),
            ],
        )
        .unwrap();
        assert!(!b.subset(&gap).unwrap());
    }
}
