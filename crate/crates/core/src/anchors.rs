//! Anchors, projections and global/local knot index vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::mesh::{Component, Entity, TMesh};

/// A strictly increasing sequence of knot indices in one direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotIndexVector {
    pub direction: usize,
    pub entries: Vec<i64>,
}

impl KnotIndexVector {
    pub fn new(direction: usize, entries: Vec<i64>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] < w[1]));
        KnotIndexVector { direction, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.entries.binary_search(&n).is_ok()
    }

    pub fn position(&self, n: i64) -> Option<usize> {
        self.entries.binary_search(&n).ok()
    }

    /// Closed convex hull `[first, last]`.
    pub fn hull(&self) -> (i64, i64) {
        (self.entries[0], *self.entries.last().unwrap())
    }

    /// `len` consecutive entries starting at `start`, if they exist.
    pub fn window(&self, start: isize, len: usize) -> Option<KnotIndexVector> {
        if start < 0 || start as usize + len > self.entries.len() {
            return None;
        }
        let s = start as usize;
        Some(KnotIndexVector::new(self.direction, self.entries[s..s + len].to_vec()))
    }

    /// Like [`window`](Self::window) but cut off at both ends of the vector.
    pub fn window_clamped(&self, start: isize, len: usize) -> KnotIndexVector {
        let end = (start + len as isize).clamp(0, self.entries.len() as isize) as usize;
        let s = start.clamp(0, end as isize) as usize;
        KnotIndexVector::new(self.direction, self.entries[s..end].to_vec())
    }
}

impl fmt::Display for KnotIndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `kappa`-orthogonal entities in the active region, where `kappa` holds the odd-degree directions.
pub fn anchor_set(mesh: &TMesh) -> Vec<Entity> {
    mesh.orth_entities_mask(mesh.domain().odd_mask())
        .into_iter()
        .filter(|e| mesh.is_active(e))
        .collect()
}

/// Whether `e` is an anchor of `mesh`.
pub fn is_anchor(mesh: &TMesh, e: &Entity) -> bool {
    e.singleton_mask() == mesh.domain().odd_mask() && mesh.contains_entity(e) && mesh.is_active(e)
}

/// Replaces component `j` of `e` by the singleton `{n}`.
pub fn project(e: &Entity, j: usize, n: i64) -> Entity {
    e.with_component(j, Component::Singleton(n))
}

/// All `n` with `P_{j,n}(e)` contained in `Sk_j`.
pub fn global_knot_vector(mesh: &TMesh, e: &Entity, j: usize) -> KnotIndexVector {
    let entries = (0..=mesh.domain().extent(j))
        .filter(|&n| mesh.entity_in_skeleton(&project(e, j, n), j))
        .collect();
    KnotIndexVector::new(j, entries)
}

/// The `p_j + 2` consecutive global knots around `a_j`, with `inf a_j` at position `floor((p_j+1)/2)`.
pub fn local_from_global(mesh: &TMesh, a: &Entity, global: &KnotIndexVector) -> Result<KnotIndexVector> {
    let j = global.direction;
    let p = mesh.domain().degree(j) as usize;
    let f = mesh.domain().frame_width(j) as isize;
    let aj = a.component(j);
    let pos = global
        .position(aj.inf())
        .ok_or(Error::InsufficientKnots { direction: j })?;
    if let Component::Interval(_, b) = aj {
        if global.entries.get(pos + 1) != Some(&b) {
            return Err(Error::NonAdjacentCellBounds { direction: j });
        }
    }
    global
        .window(pos as isize - f, p + 2)
        .ok_or(Error::InsufficientKnots { direction: j })
}

/// Local knot index vector of anchor `a` in direction `j`.
pub fn local_knot_vector(mesh: &TMesh, a: &Entity, j: usize) -> Result<KnotIndexVector> {
    local_from_global(mesh, a, &global_knot_vector(mesh, a, j))
}

/// Anchor with its knot vectors, computed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorData {
    pub entity: Entity,
    pub global: Vec<KnotIndexVector>,
    pub local: Vec<KnotIndexVector>,
}

impl AnchorData {
    pub fn compute(mesh: &TMesh, entity: Entity) -> Result<AnchorData> {
        let d = mesh.dim();
        let global: Vec<KnotIndexVector> = (0..d).map(|j| global_knot_vector(mesh, &entity, j)).collect();
        let local = global
            .iter()
            .map(|g| local_from_global(mesh, &entity, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnchorData { entity, global, local })
    }

    /// Closed index support `conv v_1 x ... x conv v_d`.
    pub fn support(&self) -> Vec<(i64, i64)> {
        self.local.iter().map(|v| v.hull()).collect()
    }
}
