//! Index domain, explicit entity complex and cell bisection.
//!
//! A mesh stores every entity (cells, faces, edges, vertices, ...) of a box
//! complex over the integer index domain `(0,N_1) x ... x (0,N_d)`. Entities
//! are products of integer singletons and open integer intervals, and the
//! entities of all dimensions partition the closed domain.
//!
//! Point location and skeleton membership go through a lazily built lattice
//! over the half-integer grid: every index-domain point with coordinates in
//! `Z/2` identifies one elementary piece (a point or a unit open interval per
//! direction), and membership in any entity or skeleton is constant on such
//! pieces because all mesh coordinates are integers.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::region::{BoxRegion, ClosedBox, Rat, Span};

/// Largest supported dimension; skeleton flags are stored as one byte per lattice point.
pub const MAX_DIM: usize = 8;

/// One factor of an entity: an integer point or an open integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Singleton(i64),
    Interval(i64, i64),
}

impl Component {
    pub fn inf(&self) -> i64 {
        match *self {
            Component::Singleton(n) => n,
            Component::Interval(a, _) => a,
        }
    }

    pub fn sup(&self) -> i64 {
        match *self {
            Component::Singleton(n) => n,
            Component::Interval(_, b) => b,
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self, Component::Singleton(_))
    }

    /// Membership of a rational coordinate in the (open) component.
    pub fn contains(&self, q: Rat) -> bool {
        match *self {
            Component::Singleton(n) => q == Rat::from_integer(n),
            Component::Interval(a, b) => Rat::from_integer(a) < q && q < Rat::from_integer(b),
        }
    }

    /// Closure of the component lies in `[lo, hi]`.
    pub fn within(&self, lo: i64, hi: i64) -> bool {
        lo <= self.inf() && self.sup() <= hi
    }

    pub fn closure_span(&self) -> Span {
        Span::int_closed(self.inf(), self.sup())
    }

    /// Inclusive range of doubled lattice coordinates covered by the component itself.
    pub(crate) fn lattice_range(&self) -> (usize, usize) {
        match *self {
            Component::Singleton(n) => (2 * n as usize, 2 * n as usize),
            Component::Interval(a, b) => (2 * a as usize + 1, 2 * b as usize - 1),
        }
    }

    /// Inclusive range of doubled lattice coordinates covered by the closure.
    pub(crate) fn closure_lattice_range(&self) -> (usize, usize) {
        (2 * self.inf() as usize, 2 * self.sup() as usize)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Singleton(n) => write!(f, "{{{n}}}"),
            Component::Interval(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// A product of components, read as an open box of dimension `#intervals`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entity {
    comps: Vec<Component>,
}

impl Entity {
    pub fn new(comps: Vec<Component>) -> Self {
        debug_assert!(comps.iter().all(|c| match c {
            Component::Interval(a, b) => a < b,
            _ => true,
        }));
        Entity { comps }
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn component(&self, k: usize) -> Component {
        self.comps[k]
    }

    /// Number of directions.
    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    /// Number of interval components.
    pub fn entity_dim(&self) -> usize {
        self.comps.iter().filter(|c| !c.is_singleton()).count()
    }

    /// Bit `k` set iff component `k` is a singleton.
    pub fn singleton_mask(&self) -> u32 {
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_singleton())
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    pub fn singleton_dirs(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.comps[k].is_singleton()).collect()
    }

    pub fn with_component(&self, k: usize, c: Component) -> Entity {
        let mut comps = self.comps.clone();
        comps[k] = c;
        Entity { comps }
    }

    pub fn closure_box(&self) -> ClosedBox {
        ClosedBox::new(self.comps.iter().map(|c| c.closure_span()).collect())
    }

    pub fn closure_within(&self, bounds: &[(i64, i64)]) -> bool {
        self.comps.iter().zip(bounds).all(|(c, &(lo, hi))| c.within(lo, hi))
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.comps.iter().zip(x).all(|(c, &q)| c.contains(q))
    }

    /// Centre of the entity (a point of the entity itself).
    pub fn center(&self) -> Vec<Rat> {
        self.comps
            .iter()
            .map(|c| Rat::new(c.inf() + c.sup(), 2))
            .collect()
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.comps.iter().enumerate() {
            if k > 0 {
                write!(f, "x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Box-shaped index domain with degrees and parametric knots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexDomain {
    extents: Vec<i64>,
    degrees: Vec<u32>,
    knots: Vec<Vec<Rat>>,
}

impl IndexDomain {
    /// Domain with identity parametric knots `xi_i = i`.
    pub fn new(extents: Vec<i64>, degrees: Vec<u32>) -> Result<Self> {
        let knots = extents
            .iter()
            .map(|&n| (0..=n.max(0)).map(Rat::from_integer).collect())
            .collect();
        Self::with_knots(extents, degrees, knots)
    }

    pub fn with_knots(extents: Vec<i64>, degrees: Vec<u32>, knots: Vec<Vec<Rat>>) -> Result<Self> {
        let d = extents.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidDomain(format!("dimension {d} not in 1..={MAX_DIM}")));
        }
        if degrees.len() != d || knots.len() != d {
            return Err(Error::InvalidDomain(
                "extents, degrees and knots must have one entry per direction".into(),
            ));
        }
        for k in 0..d {
            let f = ((degrees[k] + 1) / 2) as i64;
            if extents[k] < 2 * f + 1 {
                return Err(Error::InvalidDomain(format!(
                    "extent {} in direction {} leaves no active region for degree {}",
                    extents[k],
                    k + 1,
                    degrees[k]
                )));
            }
            if knots[k].len() as i64 != extents[k] + 1 {
                return Err(Error::InvalidDomain(format!(
                    "direction {} needs {} parametric knots",
                    k + 1,
                    extents[k] + 1
                )));
            }
            if knots[k].windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidDomain(format!(
                    "parametric knots in direction {} are not strictly increasing",
                    k + 1
                )));
            }
        }
        Ok(IndexDomain { extents, degrees, knots })
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[i64] {
        &self.extents
    }

    pub fn extent(&self, k: usize) -> i64 {
        self.extents[k]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, k: usize) -> u32 {
        self.degrees[k]
    }

    pub fn knots(&self, k: usize) -> &[Rat] {
        &self.knots[k]
    }

    pub fn all_knots(&self) -> &[Vec<Rat>] {
        &self.knots
    }

    pub fn knot_f64(&self, k: usize, i: i64) -> f64 {
        let q = self.knots[k][i as usize];
        *q.numer() as f64 / *q.denom() as f64
    }

    /// `floor((p_k + 1) / 2)`.
    pub fn frame_width(&self, k: usize) -> i64 {
        ((self.degrees[k] + 1) / 2) as i64
    }

    /// Bounds of the active region in direction `k`.
    pub fn active_bounds(&self, k: usize) -> (i64, i64) {
        let f = self.frame_width(k);
        (f, self.extents[k] - f)
    }

    /// Directions of odd degree; anchors are singleton exactly there.
    pub fn odd_mask(&self) -> u32 {
        (0..self.dim())
            .filter(|&k| self.degrees[k] % 2 == 1)
            .fold(0, |m, k| m | (1 << k))
    }
}

/// One recorded bisection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub cell: Entity,
    pub direction: usize,
}

/// Result of the admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub violations: Vec<String>,
}

/// A T-mesh: the entity complex over an index domain plus its refinement history.
pub struct TMesh {
    domain: IndexDomain,
    breakpoints: Vec<Vec<i64>>,
    entities: Vec<BTreeSet<Entity>>,
    log: Vec<Refinement>,
    lattice: OnceLock<Lattice>,
}

impl Clone for TMesh {
    fn clone(&self) -> Self {
        TMesh {
            domain: self.domain.clone(),
            breakpoints: self.breakpoints.clone(),
            entities: self.entities.clone(),
            log: self.log.clone(),
            lattice: OnceLock::new(),
        }
    }
}

impl fmt::Debug for TMesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TMesh")
            .field("extents", &self.domain.extents)
            .field("degrees", &self.domain.degrees)
            .field("cells", &self.entities[self.dim()].len())
            .field("refinements", &self.log.len())
            .finish()
    }
}

impl PartialEq for TMesh {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.entities == other.entities
    }
}

/// Unit breakpoints `0, 1, ..., N_k` in every direction.
pub fn unit_breakpoints(extents: &[i64]) -> Vec<Vec<i64>> {
    extents.iter().map(|&n| (0..=n).collect()).collect()
}

/// Breakpoints for a grid with `p_k` unit cells at either end of direction `k`
/// and `active_cells[k]` cells of width `2^levels[k]` between them, so that
/// `levels[k]` nested bisections of a wide cell stay integral. The unit layers
/// cover the frame and make `[xi_{p_k}, xi_{N_k - p_k}]` a box on which the
/// splines reproduce constants. Returns `(extents, breakpoints)`.
pub fn framed_grid(degrees: &[u32], active_cells: &[usize], levels: &[u32]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut extents = Vec::new();
    let mut bps = Vec::new();
    for k in 0..degrees.len() {
        let p = degrees[k] as i64;
        let w = 1i64 << levels[k];
        let mut b: Vec<i64> = (0..=p).collect();
        let mut x = p;
        for _ in 0..active_cells[k] {
            x += w;
            b.push(x);
        }
        for _ in 0..p {
            x += 1;
            b.push(x);
        }
        extents.push(x);
        bps.push(b);
    }
    (extents, bps)
}

/// Tensor-product mesh over the given breakpoints.
pub fn create_tensor_mesh(domain: IndexDomain, breakpoints: Vec<Vec<i64>>) -> Result<TMesh> {
    let d = domain.dim();
    if breakpoints.len() != d {
        return Err(Error::InvalidBreakpoints(format!("expected {d} breakpoint lists")));
    }
    for (k, b) in breakpoints.iter().enumerate() {
        if b.len() < 2 {
            return Err(Error::InvalidBreakpoints(format!(
                "direction {} needs at least two breakpoints",
                k + 1
            )));
        }
        if b.iter().any(|&x| x < 0 || x > domain.extent(k)) {
            return Err(Error::InvalidBreakpoints(format!(
                "breakpoint outside [0, {}] in direction {}",
                domain.extent(k),
                k + 1
            )));
        }
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBreakpoints(format!(
                "breakpoints in direction {} are not strictly increasing",
                k + 1
            )));
        }
        if b[0] != 0 || *b.last().unwrap() != domain.extent(k) {
            return Err(Error::InvalidBreakpoints(format!(
                "breakpoints in direction {} must start at 0 and end at {}",
                k + 1,
                domain.extent(k)
            )));
        }
    }
    let per_dir: Vec<Vec<Component>> = breakpoints
        .iter()
        .map(|b| {
            let mut v: Vec<Component> = b.iter().map(|&x| Component::Singleton(x)).collect();
            v.extend(b.windows(2).map(|w| Component::Interval(w[0], w[1])));
            v
        })
        .collect();
    let mut entities = vec![BTreeSet::new(); d + 1];
    let mut idx = vec![0usize; d];
    'outer: loop {
        let e = Entity::new((0..d).map(|k| per_dir[k][idx[k]]).collect());
        entities[e.entity_dim()].insert(e);
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < per_dir[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(TMesh { domain, breakpoints, entities, log: Vec::new(), lattice: OnceLock::new() })
}

impl TMesh {
    /// Rebuilds a mesh by replaying a refinement log on the initial tensor grid.
    pub fn replay(domain: IndexDomain, breakpoints: Vec<Vec<i64>>, log: &[Refinement]) -> Result<TMesh> {
        let mut mesh = create_tensor_mesh(domain, breakpoints)?;
        for r in log {
            mesh.subdiv_in_place(&r.cell, r.direction)?;
        }
        Ok(mesh)
    }

    pub fn domain(&self) -> &IndexDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn breakpoints(&self) -> &[Vec<i64>] {
        &self.breakpoints
    }

    pub fn refinement_log(&self) -> &[Refinement] {
        &self.log
    }

    /// Entities of dimension `k`.
    pub fn entities(&self, k: usize) -> &BTreeSet<Entity> {
        &self.entities[k]
    }

    pub fn cells(&self) -> &BTreeSet<Entity> {
        &self.entities[self.dim()]
    }

    pub fn all_entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter().flat_map(|s| s.iter())
    }

    pub fn num_entities(&self) -> usize {
        self.entities.iter().map(|s| s.len()).sum()
    }

    pub fn contains_entity(&self, e: &Entity) -> bool {
        e.dim() == self.dim() && self.entities[e.entity_dim()].contains(e)
    }

    pub fn active_bounds(&self) -> Vec<(i64, i64)> {
        (0..self.dim()).map(|k| self.domain.active_bounds(k)).collect()
    }

    pub fn domain_bounds(&self) -> Vec<(i64, i64)> {
        self.domain.extents.iter().map(|&n| (0, n)).collect()
    }

    /// Closure of the entity lies in the active region.
    pub fn is_active(&self, e: &Entity) -> bool {
        e.closure_within(&self.active_bounds())
    }

    pub fn active_region(&self) -> BoxRegion {
        BoxRegion::from_box(ClosedBox::from_int_bounds(&self.active_bounds()))
    }

    /// The `k`-th frame region: points whose `k`-th coordinate lies in a boundary band.
    pub fn frame_region_k(&self, k: usize) -> BoxRegion {
        let d = self.dim();
        let f = self.domain.frame_width(k);
        let n = self.domain.extent(k);
        let mut r = BoxRegion::empty(d);
        if f > 0 {
            let full = self.domain_bounds();
            for band in [(0, f), (n - f, n)] {
                let mut b = full.clone();
                b[k] = band;
                r.push(ClosedBox::from_int_bounds(&b)).unwrap();
            }
        }
        r
    }

    /// Closure of the complement of the active region.
    pub fn frame_region(&self) -> BoxRegion {
        let mut r = BoxRegion::empty(self.dim());
        for k in 0..self.dim() {
            r = r.union(&self.frame_region_k(k)).unwrap();
        }
        r
    }

    fn check_dir(&self, j: usize) -> Result<()> {
        if j < self.dim() {
            Ok(())
        } else {
            Err(Error::InvalidDirection(j))
        }
    }

    /// Bisects `cell` in direction `j` and returns the refined mesh.
    pub fn subdiv(&self, cell: &Entity, j: usize) -> Result<TMesh> {
        let mut out = self.clone();
        out.subdiv_in_place(cell, j)?;
        Ok(out)
    }

    /// Bisects the cell containing the interior point `x` in direction `j`.
    pub fn subdiv_at(&self, x: &[Rat], j: usize) -> Result<TMesh> {
        let cell = self.cell_at(x)?;
        self.subdiv(&cell, j)
    }

    /// In-place variant of [`TMesh::subdiv`].
    pub fn subdiv_in_place(&mut self, cell: &Entity, j: usize) -> Result<()> {
        self.check_dir(j)?;
        let d = self.dim();
        if cell.dim() != d || !self.entities[d].contains(cell) {
            return Err(Error::NotACell);
        }
        if !self.is_active(cell) {
            return Err(Error::CellOutsideActiveRegion);
        }
        let qj = cell.component(j);
        let (a, b) = (qj.inf(), qj.sup());
        if (a + b) % 2 != 0 {
            return Err(Error::NonIntegerMidpoint { lo: a, hi: b });
        }
        let m = (a + b) / 2;

        let mut dbox: Vec<(i64, i64)> = cell.components().iter().map(|c| (c.inf(), c.sup())).collect();
        for (l, bounds) in dbox.iter_mut().enumerate() {
            if l == j {
                continue;
            }
            let (lo, hi) = self.domain.active_bounds(l);
            if bounds.0 == lo {
                bounds.0 = 0;
            }
            if bounds.1 == hi {
                bounds.1 = self.domain.extent(l);
            }
        }

        let mut split: Vec<Entity> = Vec::new();
        for set in &self.entities {
            split.extend(
                set.iter()
                    .filter(|e| e.component(j) == qj && e.closure_within(&dbox))
                    .cloned(),
            );
        }
        for e in split {
            let dim = e.entity_dim();
            self.entities[dim].remove(&e);
            self.entities[dim].insert(e.with_component(j, Component::Interval(a, m)));
            self.entities[dim].insert(e.with_component(j, Component::Interval(m, b)));
            self.entities[dim - 1].insert(e.with_component(j, Component::Singleton(m)));
        }
        self.log.push(Refinement { cell: cell.clone(), direction: j });
        self.lattice = OnceLock::new();
        Ok(())
    }

    pub(crate) fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| Lattice::build(self))
    }

    /// Doubled lattice coordinates of a rational point.
    pub(crate) fn lattice_coords(&self, x: &[Rat]) -> Result<Vec<usize>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let mut out = Vec::with_capacity(x.len());
        for (k, &q) in x.iter().enumerate() {
            if q < Rat::from_integer(0) || q > Rat::from_integer(self.domain.extent(k)) {
                return Err(Error::PointOutsideDomain);
            }
            let c = if q.is_integer() { 2 * q.to_integer() } else { 2 * q.floor().to_integer() + 1 };
            out.push(c as usize);
        }
        Ok(out)
    }

    /// The unique entity containing `x`.
    pub fn entity_at(&self, x: &[Rat]) -> Result<Entity> {
        let c = self.lattice_coords(x)?;
        Ok(self.lattice().entity(&c).clone())
    }

    /// The cell containing the interior point `x`.
    pub fn cell_at(&self, x: &[Rat]) -> Result<Entity> {
        let e = self.entity_at(x)?;
        if e.entity_dim() == self.dim() {
            Ok(e)
        } else {
            Err(Error::PointNotInCell)
        }
    }

    /// Membership of `x` in the `j`-orthogonal skeleton.
    pub fn in_skeleton(&self, x: &[Rat], j: usize) -> Result<bool> {
        self.check_dir(j)?;
        let c = self.lattice_coords(x)?;
        Ok(self.lattice().in_skeleton(&c, j))
    }

    /// The set `e` (read as an open box) lies entirely in `Sk_j`.
    /// Since the skeleton is closed, this is the same as the closure lying in `Sk_j`.
    pub fn entity_in_skeleton(&self, e: &Entity, j: usize) -> bool {
        let lat = self.lattice();
        let ranges: Vec<(usize, usize)> = e.components().iter().map(|c| c.lattice_range()).collect();
        lat.all_in_ranges(&ranges, |o| lat.skel[o] & (1 << j) != 0)
    }

    /// The set `e` (read as an open box) meets `Sk_j`.
    pub fn entity_meets_skeleton(&self, e: &Entity, j: usize) -> bool {
        let lat = self.lattice();
        let ranges: Vec<(usize, usize)> = e.components().iter().map(|c| c.lattice_range()).collect();
        !lat.all_in_ranges(&ranges, |o| lat.skel[o] & (1 << j) == 0)
    }

    /// The full slice `S_k(n)` lies in `Sk_k`.
    pub fn slice_in_skeleton(&self, k: usize, n: i64) -> bool {
        let lat = self.lattice();
        let mut ranges: Vec<(usize, usize)> =
            self.domain.extents.iter().map(|&e| (0, 2 * e as usize)).collect();
        ranges[k] = (2 * n as usize, 2 * n as usize);
        lat.all_in_ranges(&ranges, |o| lat.skel[o] & (1 << k) != 0)
    }

    /// `Sk_j` as the union of closures of `j`-orthogonal hyperfaces.
    pub fn skeleton(&self, j: usize) -> BoxRegion {
        let boxes = self
            .orth_entities_mask(1 << j)
            .into_iter()
            .map(|e| e.closure_box())
            .collect();
        BoxRegion::from_boxes(self.dim(), boxes).unwrap()
    }

    /// Entities whose singleton directions are exactly `kappa` (0-based).
    pub fn orth_entities(&self, kappa: &[usize]) -> Vec<Entity> {
        let mask = kappa.iter().fold(0u32, |m, &k| m | (1 << k));
        self.orth_entities_mask(mask)
    }

    pub fn orth_entities_mask(&self, mask: u32) -> Vec<Entity> {
        let dim = self.dim() - mask.count_ones() as usize;
        self.entities[dim]
            .iter()
            .filter(|e| e.singleton_mask() == mask)
            .cloned()
            .collect()
    }

    /// Admissibility: boundary slices lie in the skeleton and no T-junction
    /// with orthogonal or pointing direction `k` lies in the `k`-th frame region.
    pub fn is_admissible(&self) -> Admissibility {
        let mut violations = Vec::new();
        let d = self.dim();
        for k in 0..d {
            let f = self.domain.frame_width(k);
            let n = self.domain.extent(k);
            let mut slices: Vec<i64> = (0..=f).chain(n - f..=n).collect();
            slices.dedup();
            for s in slices {
                if !self.slice_in_skeleton(k, s) {
                    violations.push(format!("S_{}({}) not contained in Sk_{}", k + 1, s, k + 1));
                }
            }
        }
        match crate::topology::find_tjunctions(self) {
            Ok(tjs) => {
                for t in tjs {
                    for k in [t.odir, t.pdir] {
                        let c = t.entity.component(k).inf();
                        let f = self.domain.frame_width(k);
                        let n = self.domain.extent(k);
                        if c <= f || c >= n - f {
                            violations.push(format!(
                                "T-junction {} (odir {}, pdir {}) lies in frame region {}",
                                t.entity,
                                t.odir + 1,
                                t.pdir + 1,
                                k + 1
                            ));
                        }
                    }
                }
            }
            Err(e) => violations.push(format!("T-junction classification failed: {e}")),
        }
        Admissibility { admissible: violations.is_empty(), violations }
    }

    /// Whether every active cell has active neighbour cells in at least three distinct directions.
    pub fn check_three_direction_assumption(&self) -> Result<bool> {
        let d = self.dim();
        if d < 3 {
            return Err(Error::DimensionTooSmall { required: 3, got: d });
        }
        Ok(self.cells().iter().filter(|q| self.is_active(q)).all(|q| {
            (0..d).filter(|&i| self.has_active_neighbor(q, i)).count() >= 3
        }))
    }

    /// Whether `q` shares a face in direction `i` with an active cell.
    pub fn has_active_neighbor(&self, q: &Entity, i: usize) -> bool {
        let lat = self.lattice();
        let qi = q.component(i);
        let mut sides = Vec::new();
        if qi.inf() > 0 {
            sides.push(2 * qi.inf() as usize - 1);
        }
        if qi.sup() < self.domain.extent(i) {
            sides.push(2 * qi.sup() as usize + 1);
        }
        for s in sides {
            let ranges: Vec<(usize, usize)> = (0..self.dim())
                .map(|k| if k == i { (s, s) } else { q.component(k).lattice_range() })
                .collect();
            let mut found = false;
            lat.for_each_in_ranges(&ranges, 2, |o| {
                if !found && self.is_active(&lat.entities[lat.entity_of[o] as usize]) {
                    found = true;
                }
            });
            if found {
                return true;
            }
        }
        false
    }

    /// Verifies that the entities partition the closed domain. Returns the number
    /// of lattice pieces covered more than once or not at all.
    pub fn partition_defects(&self) -> usize {
        let lat = Lattice::build_checked(self);
        lat.1
    }
}

/// Dense half-integer lattice over the closed index domain.
pub(crate) struct Lattice {
    strides: Vec<usize>,
    pub(crate) entity_of: Vec<u32>,
    pub(crate) entities: Vec<Entity>,
    pub(crate) skel: Vec<u8>,
}

impl Lattice {
    fn build(mesh: &TMesh) -> Lattice {
        Self::build_checked(mesh).0
    }

    fn build_checked(mesh: &TMesh) -> (Lattice, usize) {
        let shape: Vec<usize> = mesh.domain.extents.iter().map(|&n| 2 * n as usize + 1).collect();
        let mut strides = vec![1usize; shape.len()];
        for k in (0..shape.len() - 1).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        let total: usize = shape.iter().product();
        let mut lat = Lattice {
            strides,
            entity_of: vec![u32::MAX; total],
            entities: Vec::with_capacity(mesh.num_entities()),
            skel: vec![0; total],
        };
        let mut defects = 0usize;
        for e in mesh.all_entities() {
            let id = lat.entities.len() as u32;
            lat.entities.push(e.clone());
            let ranges: Vec<(usize, usize)> = e.components().iter().map(|c| c.lattice_range()).collect();
            let mut hits = Vec::new();
            lat.for_each_in_ranges(&ranges, 1, |o| hits.push(o));
            for o in hits {
                if lat.entity_of[o] != u32::MAX {
                    defects += 1;
                }
                lat.entity_of[o] = id;
            }
        }
        defects += lat.entity_of.iter().filter(|&&v| v == u32::MAX).count();
        for q in mesh.cells() {
            for k in 0..mesh.dim() {
                for side in [q.component(k).inf(), q.component(k).sup()] {
                    let ranges: Vec<(usize, usize)> = (0..mesh.dim())
                        .map(|l| {
                            if l == k {
                                (2 * side as usize, 2 * side as usize)
                            } else {
                                q.component(l).closure_lattice_range()
                            }
                        })
                        .collect();
                    let mut hits = Vec::new();
                    lat.for_each_in_ranges(&ranges, 1, |o| hits.push(o));
                    for o in hits {
                        lat.skel[o] |= 1 << k;
                    }
                }
            }
        }
        (lat, defects)
    }

    pub(crate) fn offset(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.strides).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn entity(&self, c: &[usize]) -> &Entity {
        &self.entities[self.entity_of[self.offset(c)] as usize]
    }

    pub(crate) fn in_skeleton(&self, c: &[usize], j: usize) -> bool {
        self.skel[self.offset(c)] & (1 << j) != 0
    }

    /// Calls `f` with the offset of every lattice point in the inclusive ranges, stepping by `step`.
    pub(crate) fn for_each_in_ranges(&self, ranges: &[(usize, usize)], step: usize, mut f: impl FnMut(usize)) {
        if ranges.iter().any(|r| r.0 > r.1) {
            return;
        }
        let mut c: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            f(self.offset(&c));
            let mut k = c.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if c[k] + step <= ranges[k].1 {
                    c[k] += step;
                    break;
                }
                c[k] = ranges[k].0;
            }
        }
    }

    pub(crate) fn all_in_ranges(&self, ranges: &[(usize, usize)], mut pred: impl FnMut(usize) -> bool) -> bool {
        if ranges.iter().any(|r| r.0 > r.1) {
            return true;
        }
        let mut c: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            if !pred(self.offset(&c)) {
                return false;
            }
            let mut k = c.len();
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                if c[k] < ranges[k].1 {
                    c[k] += 1;
                    break;
                }
                c[k] = ranges[k].0;
            }
        }
    }
}
