//! Seeded random admissible meshes built by random bisections of active cells.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::mesh::{create_tensor_mesh, framed_grid, IndexDomain, TMesh};
use crate::suitability::{is_sgas, is_wgas};

/// Which refinements a stream keeps. With a filter, a step that leaves the
/// class is undone and another one is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filter {
    Unconstrained,
    SgasOnly,
    WgasOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Candidate dimensions; one is drawn per mesh.
    pub dims: Vec<usize>,
    /// Fixed degrees, or `None` to draw each from `0..=max_degree`.
    pub degrees: Option<Vec<u32>>,
    pub max_degree: u32,
    /// Active cells per direction are drawn from `min_cells..=max_cells`.
    pub min_cells: usize,
    pub max_cells: usize,
    /// Initial active cells have width `2^levels`.
    pub levels: u32,
    /// Upper bound on accepted refinements; the count is drawn from `0..=max_steps`.
    pub max_steps: usize,
    pub filter: Filter,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            dims: vec![2, 3],
            degrees: None,
            max_degree: 3,
            min_cells: 2,
            max_cells: 4,
            levels: 3,
            max_steps: 40,
            filter: Filter::Unconstrained,
        }
    }
}

/// A generated mesh with the seed that reproduces it.
#[derive(Clone, Debug)]
pub struct GeneratedMesh {
    pub seed: u64,
    pub mesh: TMesh,
}

fn in_class(mesh: &TMesh, filter: Filter) -> Result<bool> {
    if filter == Filter::Unconstrained {
        return Ok(true);
    }
    let an = Analysis::new(mesh)?;
    match filter {
        Filter::SgasOnly => Ok(is_sgas(&an)?.holds),
        Filter::WgasOnly => Ok(is_wgas(&an)?.holds),
        Filter::Unconstrained => unreachable!(),
    }
}

/// The mesh for one seed. Deterministic in `(seed, cfg)`.
pub fn random_mesh(seed: u64, cfg: &GeneratorConfig) -> Result<TMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = *cfg.dims.choose(&mut rng).ok_or_else(|| Error::InvalidDomain("no dimensions to draw from".into()))?;
    let degrees: Vec<u32> = match &cfg.degrees {
        Some(p) if p.len() == d => p.clone(),
        Some(p) => return Err(Error::DimensionMismatch { expected: d, got: p.len() }),
        None => (0..d).map(|_| rng.gen_range(0..=cfg.max_degree)).collect(),
    };
    let cells: Vec<usize> = (0..d).map(|_| rng.gen_range(cfg.min_cells..=cfg.max_cells)).collect();
    let (extents, bps) = framed_grid(&degrees, &cells, &vec![cfg.levels; d]);
    let mut mesh = create_tensor_mesh(IndexDomain::new(extents, degrees)?, bps)?;
    let steps = rng.gen_range(0..=cfg.max_steps);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < steps && attempts < 20 * steps + 20 {
        attempts += 1;
        let active: Vec<_> = mesh.cells().iter().filter(|q| mesh.is_active(q)).cloned().collect();
        let q = active.choose(&mut rng).expect("active region is never empty").clone();
        let j = rng.gen_range(0..d);
        let next = match mesh.subdiv(&q, j) {
            Ok(m) => m,
            Err(Error::NonIntegerMidpoint { .. }) => continue,
            Err(e) => return Err(e),
        };
        if in_class(&next, cfg.filter)? {
            mesh = next;
            accepted += 1;
        }
    }
    Ok(mesh)
}

/// Seed of the `i`-th mesh of a stream started at `seed`.
pub fn stream_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

/// `count` meshes with seeds derived from `seed`, generated in parallel and
/// returned in seed order.
pub fn mesh_stream(seed: u64, count: usize, cfg: &GeneratorConfig) -> Result<Vec<GeneratedMesh>> {
    use rayon::prelude::*;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = stream_seed(seed, i);
            random_mesh(s, cfg).map(|mesh| GeneratedMesh { seed: s, mesh })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_admissible() {
        let cfg = GeneratorConfig { max_steps: 10, ..Default::default() };
        for s in 0..5 {
            let a = random_mesh(s, &cfg).unwrap();
            let b = random_mesh(s, &cfg).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.refinement_log(), b.refinement_log());
            assert!(a.is_admissible().admissible);
        }
    }

    #[test]
    fn filters_are_respected() {
        let cfg = GeneratorConfig { dims: vec![3], max_steps: 12, filter: Filter::SgasOnly, ..Default::default() };
        for g in mesh_stream(7, 4, &cfg).unwrap() {
            let an = Analysis::new(&g.mesh).unwrap();
            assert!(is_sgas(&an).unwrap().holds);
        }
    }
}
