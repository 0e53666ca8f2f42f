//! Corpus-wide cross-checks of the classifier theorems and the WGAS/WDC conjecture search.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::dual_compat::{is_sdc, is_wdc};
use crate::error::Result;
use crate::io::mesh_to_json;
use crate::mesh::TMesh;
use crate::suitability::{is_aas, is_sgas, is_wgas};

use super::generator::GeneratedMesh;
use super::properties::{atj_within_gtj, gtj_within_atj};

/// All five classifier verdicts of one mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub aas: bool,
    pub sgas: bool,
    pub wgas: bool,
    pub sdc: bool,
    pub wdc: bool,
}

pub fn classify(an: &Analysis) -> Result<Verdicts> {
    Ok(Verdicts {
        aas: is_aas(an).holds,
        sgas: is_sgas(an)?.holds,
        wgas: is_wgas(an)?.holds,
        sdc: is_sdc(an).holds,
        wdc: is_wdc(an).holds,
    })
}

/// A corpus mesh that broke a checked statement, with everything needed to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub reason: String,
    pub mesh: serde_json::Value,
}

fn failure(g: &GeneratedMesh, reason: impl Into<String>) -> Failure {
    Failure { seed: g.seed, reason: reason.into(), mesh: mesh_to_json(&g.mesh) }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AasSdcReport {
    pub checked: usize,
    pub aas: usize,
    pub disagreements: Vec<Failure>,
}

/// `is_aas == is_sdc` on every mesh.
pub fn crosscheck_thm_aas_sdc(corpus: &[GeneratedMesh]) -> Result<AasSdcReport> {
    let rows: Vec<(bool, Option<Failure>)> = corpus
        .par_iter()
        .map(|g| {
            let an = Analysis::new(&g.mesh)?;
            let aas = is_aas(&an).holds;
            let sdc = is_sdc(&an).holds;
            Ok((aas, (aas != sdc).then(|| failure(g, format!("aas={aas} sdc={sdc}")))))
        })
        .collect::<Result<_>>()?;
    Ok(AasSdcReport {
        checked: rows.len(),
        aas: rows.iter().filter(|r| r.0).count(),
        disagreements: rows.into_iter().filter_map(|r| r.1).collect(),
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SgasAasReport {
    pub checked: usize,
    pub sgas: usize,
    /// SGAS meshes where `GTJ_i ⊆ ATJ_i` also held in every direction.
    pub sgas_with_equal_extensions: usize,
    pub violations: Vec<Failure>,
}

/// SGAS implies AAS, and `ATJ_i ⊆ GTJ_i` on SGAS meshes.
pub fn crosscheck_thm_sgas_aas(corpus: &[GeneratedMesh]) -> Result<SgasAasReport> {
    let rows: Vec<Option<(bool, Option<Failure>)>> = corpus
        .par_iter()
        .map(|g| {
            let an = Analysis::new(&g.mesh)?;
            if !is_sgas(&an)?.holds {
                return Ok(None);
            }
            let mut reasons = Vec::new();
            if !is_aas(&an).holds {
                reasons.push("SGAS but not AAS".to_string());
            }
            for (i, ok) in atj_within_gtj(&an)?.into_iter().enumerate() {
                if !ok {
                    reasons.push(format!("ATJ_{} not contained in GTJ_{}", i + 1, i + 1));
                }
            }
            let equal = gtj_within_atj(&an)?.into_iter().all(|b| b);
            Ok(Some((equal, (!reasons.is_empty()).then(|| failure(g, reasons.join("; "))))))
        })
        .collect::<Result<_>>()?;
    let sg: Vec<_> = rows.into_iter().flatten().collect();
    Ok(SgasAasReport {
        checked: corpus.len(),
        sgas: sg.len(),
        sgas_with_equal_extensions: sg.iter().filter(|r| r.0).count(),
        violations: sg.into_iter().filter_map(|r| r.1).collect(),
    })
}

/// A WGAS mesh that is not WDC, shrunk to a short refinement log.
#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub seed: u64,
    pub original_steps: usize,
    pub shrunk_steps: usize,
    pub mesh: serde_json::Value,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConjectureReport {
    pub checked: usize,
    pub wgas: usize,
    pub candidates: Vec<Candidate>,
}

fn is_counterexample(mesh: &TMesh) -> bool {
    let Ok(an) = Analysis::new(mesh) else { return false };
    matches!(is_wgas(&an), Ok(c) if c.holds) && !is_wdc(&an).holds
}

/// Shortest refinement-log prefix that still reproduces the counterexample,
/// followed by greedy removal of single steps.
pub fn shrink(mesh: &TMesh) -> TMesh {
    let dom = mesh.domain().clone();
    let bps = mesh.breakpoints().to_vec();
    let mut log = mesh.refinement_log().to_vec();
    let replay = |l: &[crate::mesh::Refinement]| TMesh::replay(dom.clone(), bps.clone(), l).ok();
    for n in 0..log.len() {
        if let Some(m) = replay(&log[..n]) {
            if is_counterexample(&m) {
                log.truncate(n);
                break;
            }
        }
    }
    let mut i = 0;
    while i < log.len() {
        let mut shorter = log.clone();
        shorter.remove(i);
        match replay(&shorter) {
            Some(m) if is_counterexample(&m) => log = shorter,
            _ => i += 1,
        }
    }
    replay(&log).expect("shrunk log replays")
}

/// Logs every WGAS mesh that is not WDC. Never fails on a candidate.
pub fn conjecture_search_wgas_wdc(corpus: &[GeneratedMesh]) -> Result<ConjectureReport> {
    let rows: Vec<(bool, Option<Candidate>)> = corpus
        .par_iter()
        .map(|g| {
            let an = Analysis::new(&g.mesh)?;
            if !is_wgas(&an)?.holds {
                return Ok((false, None));
            }
            let wdc = is_wdc(&an);
            if wdc.holds {
                return Ok((true, None));
            }
            let small = shrink(&g.mesh);
            let witnesses = is_wdc(&Analysis::new(&small)?)
                .witnesses
                .iter()
                .map(|w| format!("{} / {}", w.first, w.second))
                .collect();
            Ok((
                true,
                Some(Candidate {
                    seed: g.seed,
                    original_steps: g.mesh.refinement_log().len(),
                    shrunk_steps: small.refinement_log().len(),
                    mesh: mesh_to_json(&small),
                    witnesses,
                }),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ConjectureReport {
        checked: rows.len(),
        wgas: rows.iter().filter(|r| r.0).count(),
        candidates: rows.into_iter().filter_map(|r| r.1).collect(),
    })
}
