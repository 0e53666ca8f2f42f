//! Per-mesh cache of anchors, knot vectors, T-junctions and extensions.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::anchors::{anchor_set, AnchorData};
use crate::error::Result;
use crate::mesh::{Entity, TMesh};
use crate::region::BoxRegion;
use crate::suitability::{self, GeometricExtension};
use crate::topology::{find_tjunctions, TJunction};

/// Everything the classifiers need about one mesh, built once and shared by readers.
pub struct Analysis<'m> {
    mesh: &'m TMesh,
    anchors: Vec<AnchorData>,
    tjunctions: Vec<TJunction>,
    gtjs: OnceLock<Result<Vec<GeometricExtension>>>,
    atjs: OnceLock<Vec<Vec<BoxRegion>>>,
}

impl<'m> Analysis<'m> {
    pub fn new(mesh: &'m TMesh) -> Result<Self> {
        let tjunctions = find_tjunctions(mesh)?;
        let anchors = anchor_set(mesh)
            .into_par_iter()
            .map(|a| AnchorData::compute(mesh, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Analysis { mesh, anchors, tjunctions, gtjs: OnceLock::new(), atjs: OnceLock::new() })
    }

    pub fn mesh(&self) -> &'m TMesh {
        self.mesh
    }

    /// Anchors sorted by entity.
    pub fn anchors(&self) -> &[AnchorData] {
        &self.anchors
    }

    pub fn anchor(&self, e: &Entity) -> Option<&AnchorData> {
        self.anchors
            .binary_search_by(|a| a.entity.cmp(e))
            .ok()
            .map(|i| &self.anchors[i])
    }

    pub fn tjunctions(&self) -> &[TJunction] {
        &self.tjunctions
    }

    /// Geometric extensions of all T-junctions, in T-junction order.
    pub fn gtjs(&self) -> Result<&[GeometricExtension]> {
        let r = self.gtjs.get_or_init(|| {
            self.tjunctions
                .par_iter()
                .map(|t| suitability::gtj(self.mesh, t))
                .collect()
        });
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// `ATJ_j(n)` for every direction `j` and slice `n`.
    pub fn atj_slices(&self) -> &[Vec<BoxRegion>] {
        self.atjs.get_or_init(|| {
            (0..self.mesh.dim())
                .map(|j| {
                    (0..=self.mesh.domain().extent(j))
                        .into_par_iter()
                        .map(|n| suitability::atj_slice_region(self, j, n))
                        .collect()
                })
                .collect()
        })
    }
}
