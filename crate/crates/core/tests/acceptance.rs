use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tspline_core::dual_compat::{is_sdc, is_wdc, knots_overlap};
use tspline_core::fixtures::{self, entity};
use tspline_core::io::mesh_from_json;
use tspline_core::mesh::TMesh;
use tspline_core::region::{BoxRegion, ClosedBox};
use tspline_core::suitability::{atj, gtj_union, is_aas, is_sgas, is_wgas};
use tspline_core::verify::harness::{conjecture_search_wgas_wdc, crosscheck_thm_aas_sdc, crosscheck_thm_sgas_aas};
use tspline_core::verify::numerics::{linear_independence_rank, partition_of_unity};
use tspline_core::verify::oracles::{atj_slice_oracle, overlap_bruteforce_oracle, region_slice_points};
use tspline_core::verify::properties::{
    anchor_tjunction_overlaps, child_anchor_inheritance, projection_dichotomy, separating_tjunction_probes,
};
use tspline_core::verify::{mesh_stream, random_mesh, Filter, GeneratedMesh, GeneratorConfig};
use tspline_core::Analysis;

const CORPUS_SEED: u64 = 2026;
const CONJECTURE_SEED: u64 = 63;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn region(boxes: &[&[(i64, i64)]]) -> BoxRegion {
    BoxRegion::from_boxes(2, boxes.iter().map(|b| ClosedBox::from_int_bounds(b)).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    for p1 in [1, 3] {
        let f = fixtures::fig10(p1, 1);
        ok &= atj(&Analysis::new(&f.mesh).unwrap(), 1).is_empty();
    }
    let f = fixtures::fig10(2, 1);
    ok &= !atj(&Analysis::new(&f.mesh).unwrap(), 1).is_empty();
    let el = t.elapsed();
    outcome(ok && el < Duration::from_secs(1), format!("ATJ_2 empty for p_1 in {{1,3}}, non-empty for p_1 = 2 ({el:.2?})"))
}

fn criterion_2() -> Outcome {
    let f = fixtures::fig10(1, 1);
    let an = Analysis::new(&f.mesh).unwrap();
    let (m, n) = (f.mark("m"), f.mark("n"));
    let want = ClosedBox::from_int_bounds(&[(m, m + 1), (n, n)]);
    let g = an.gtjs().unwrap();
    let p11 = g.len() == 2 && g.iter().all(|e| e.region == want);
    let f = fixtures::fig10(2, 1);
    let an = Analysis::new(&f.mesh).unwrap();
    let p21 = gtj_union(&an, 1).unwrap().equals(&atj(&an, 1)).unwrap();
    outcome(p11 && p21, format!("p_1 = 1 both GTJ = [m,m+1]x{{n}}: {p11}; p_1 = 2 GTJ union = ATJ_2: {p21}"))
}

fn criterion_3() -> Outcome {
    let f = fixtures::fig10e();
    let an = Analysis::new(&f.mesh).unwrap();
    let (m, n) = (f.mark("m"), f.mark("n"));
    let aas = is_aas(&an).holds;
    let sgas = is_sgas(&an).unwrap();
    let corner = BoxRegion::from_box(ClosedBox::from_int_bounds(&[(m - 1, m - 1), (n, n)]));
    let both = gtj_union(&an, 0).unwrap().intersect(&gtj_union(&an, 1).unwrap()).unwrap();
    let exact = both.equals(&corner).unwrap();
    outcome(
        aas && !sgas.holds && exact,
        format!("AAS {aas}, SGAS {}, GTJ_1 n GTJ_2 = {{(m-1,n)}}: {exact}", sgas.holds),
    )
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for p in [[1, 1, 1], [2, 2, 2], [3, 2, 1]] {
        let f = fixtures::fig11(p);
        let an = Analysis::new(&f.mesh).unwrap();
        let row = (is_wgas(&an).unwrap().holds, is_sgas(&an).unwrap().holds, is_wdc(&an).holds, is_sdc(&an).holds);
        ok &= row == (true, false, true, false);
        seen.push(format!("{}: WGAS {} SGAS {} WDC {} SDC {}", f.name, row.0, row.1, row.2, row.3));
    }
    outcome(ok, seen.join("; "))
}

fn criterion_5() -> Outcome {
    let rows: [(i64, bool, &[i64], &[i64]); 7] = [
        (0, false, &[0, 2], &[0, 1, 2]),
        (1, false, &[0, 2], &[0, 1, 2]),
        (2, false, &[0, 1, 2], &[0, 2]),
        (3, false, &[0, 1, 2], &[0, 2]),
        (0, true, &[0, 2], &[0, 1, 2]),
        (1, true, &[0, 2], &[0, 2]),
        (2, true, &[0, 1, 2], &[0, 2]),
    ];
    let mut seen = [false; 7];
    let mut mismatches = 0;
    for p in [[1, 1, 1], [2, 2, 2], [3, 2, 1]] {
        let f = fixtures::fig11(p);
        let an = Analysis::new(&f.mesh).unwrap();
        let (m, n, r) = (f.mark("m"), f.mark("n"), f.mark("r"));
        let window = |v: &[i64], lo: i64| v.iter().filter(|&&x| lo <= x && x <= lo + 2).map(|x| x - lo).collect::<Vec<_>>();
        for a in an.anchors() {
            let e = &a.entity;
            let (c1, c2, c3) = (e.component(0), e.component(1), e.component(2));
            if c2.inf() < n || c2.sup() > n + 2 || c3.inf() < r || c3.sup() > r + 2 {
                continue;
            }
            let Some(k) = rows.iter().position(|row| c1.inf() == m + row.0 && c1.is_singleton() != row.1) else {
                continue;
            };
            seen[k] = true;
            if window(&a.global[1].entries, n) != rows[k].2 || window(&a.global[2].entries, r) != rows[k].3 {
                mismatches += 1;
            }
        }
    }
    let rows_hit = seen.iter().filter(|&&b| b).count();
    outcome(rows_hit == 7 && mismatches == 0, format!("{rows_hit}/7 rows reproduced, {mismatches} mismatching anchors"))
}

fn corpus() -> Vec<GeneratedMesh> {
    mesh_stream(CORPUS_SEED, 200, &GeneratorConfig::default()).unwrap()
}

fn criterion_6(corpus: &[GeneratedMesh], gen: Duration) -> Outcome {
    let t = Instant::now();
    let r = crosscheck_thm_aas_sdc(corpus).unwrap();
    let el = gen + t.elapsed();
    outcome(
        r.checked >= 200 && r.disagreements.is_empty() && el < Duration::from_secs(300),
        format!("{} meshes, {} AAS, {} disagreements ({el:.1?})", r.checked, r.aas, r.disagreements.len()),
    )
}

fn criterion_7(corpus: &[GeneratedMesh]) -> Outcome {
    let r = crosscheck_thm_sgas_aas(corpus).unwrap();
    outcome(
        r.sgas > 0 && r.violations.is_empty(),
        format!("{} SGAS meshes, {} violations", r.sgas, r.violations.len()),
    )
}

fn criterion_8(corpus: &[GeneratedMesh]) -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    let mut slowest = Duration::ZERO;
    for g in corpus {
        let an = Analysis::new(&g.mesh).unwrap();
        if !is_sdc(&an).holds {
            continue;
        }
        checked += 1;
        let t = Instant::now();
        let r = linear_independence_rank(&an);
        slowest = slowest.max(t.elapsed());
        let n = r.num_anchors;
        if !(r.independent && r.rank_at(1e-10) == n && r.rank_at(1e-6) == n) {
            bad += 1;
            println!("    seed {} rank {} of {}", g.seed, r.rank, n);
        }
    }
    outcome(
        checked > 0 && bad == 0 && slowest < Duration::from_secs(10),
        format!("{checked} SDC meshes, {bad} rank deficient, slowest {slowest:.2?}"),
    )
}

fn criterion_9(corpus: &[GeneratedMesh]) -> Outcome {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for g in corpus {
        let an = Analysis::new(&g.mesh).unwrap();
        if !is_wdc(&an).holds {
            continue;
        }
        checked += 1;
        worst = worst.max(partition_of_unity(&an, 1000, g.seed).unwrap());
    }
    outcome(checked > 0 && worst < 1e-10, format!("{checked} WDC meshes, max |sum B_A - 1| = {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let local = |f: &fixtures::Fixture, b: &[(i64, i64)]| {
        let m = &f.mesh;
        Analysis::new(m).unwrap().anchor(&entity(b)).map(|a| a.local[0].entries.clone())
    };
    let a = fixtures::fig5a();
    let mb = a.mark("mbar");
    let b = fixtures::fig5b();
    let (m1, m2, z) = (b.mark("m1"), b.mark("m2"), b.mark("z"));
    let got = [
        local(&a, &[(mb, mb), (3, 5), (1, 3)]),
        local(&a, &[(mb, mb), (1, 3), (1, 3)]),
        local(&b, &[(m1, m2), (3, 5), (z, z)]),
        local(&b, &[(m1, m2 + 1), (1, 3), (z, z)]),
    ];
    let want: [&[i64]; 4] = [&[3, 4, 5, 6, 7], &[3, 4, 5, 7, 8], &[3, 4, 5, 6, 7, 8], &[3, 4, 5, 7, 8, 9]];
    let hits = got.iter().zip(want).filter(|(g, w)| g.as_deref() == Some(*w)).count();
    outcome(hits == 4, format!("{hits}/4 captioned anchors reproduced"))
}

fn criterion_11() -> Outcome {
    let f = fixtures::fig12();
    let an = Analysis::new(&f.mesh).unwrap();
    let g = gtj_union(&an, 0).unwrap();
    let a = atj(&an, 0);
    let strict = g.subset(&a).unwrap() && !a.subset(&g).unwrap();
    let golden_g = region(&[&[(3, 3), (3, 10)], &[(4, 4), (4, 18)], &[(6, 6), (6, 19)]]);
    let golden_a = region(&[&[(3, 3), (2, 10)], &[(4, 4), (2, 18)], &[(6, 6), (2, 19)]]);
    let goldens = g.equals(&golden_g).unwrap() && a.equals(&golden_a).unwrap();
    let oracle = (0..=f.mesh.domain().extent(0))
        .all(|n| region_slice_points(&an, &a, 0, n) == atj_slice_oracle(&an, 0, n));
    outcome(
        strict && goldens && oracle,
        format!("GTJ_1 strictly inside ATJ_1: {strict}; goldens: {goldens}; slice oracle: {oracle}"),
    )
}

fn criterion_12() -> Outcome {
    let t = Instant::now();
    let cfg = GeneratorConfig { filter: Filter::WgasOnly, max_steps: 30, max_cells: 3, ..Default::default() };
    let corpus = mesh_stream(CONJECTURE_SEED, 500, &cfg).unwrap();
    let r = conjecture_search_wgas_wdc(&corpus).unwrap();
    let log = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("conjecture_candidates.json");
    std::fs::write(&log, serde_json::to_string_pretty(&r).unwrap()).unwrap();
    let replays = r.candidates.iter().all(|c| {
        let original = random_mesh(c.seed, &cfg).unwrap();
        let an = Analysis::new(&original).unwrap();
        let small = mesh_from_json(c.mesh.clone()).unwrap();
        let sa = Analysis::new(&small).unwrap();
        is_wgas(&an).unwrap().holds && !is_wdc(&an).holds && is_wgas(&sa).unwrap().holds && !is_wdc(&sa).holds
    });
    let el = t.elapsed();
    outcome(
        r.wgas >= 500 && replays && el < Duration::from_secs(600),
        format!(
            "{} WGAS meshes, {} candidates logged to {}, replay {replays} ({el:.1?})",
            r.wgas,
            r.candidates.len(),
            log.display()
        ),
    )
}

fn random_increasing(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let len = rng.gen_range(1..=8);
    let mut v: Vec<i64> = rand::seq::index::sample(rng, 21, len).into_iter().map(|x| x as i64).collect();
    v.sort();
    v
}

fn three_direction_steps(target: usize) -> (usize, usize, usize) {
    let cfg = GeneratorConfig {
        dims: vec![3],
        min_cells: 2,
        max_cells: 3,
        max_steps: 8,
        filter: Filter::WgasOnly,
        ..Default::default()
    };
    let (mut steps, mut anchors, mut violations) = (0, 0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut seed = 0;
    while steps < target && seed < 20 * target as u64 {
        seed += 1;
        let mesh: TMesh = random_mesh(seed, &cfg).unwrap();
        let active: Vec<_> = mesh.cells().iter().filter(|q| mesh.is_active(q)).cloned().collect();
        let q = &active[rng.gen_range(0..active.len())];
        let j = rng.gen_range(0..3);
        let Ok(r) = child_anchor_inheritance(&mesh, q, j) else { continue };
        if !r.preconditions_hold() || r.new_anchors == 0 {
            continue;
        }
        steps += 1;
        anchors += r.new_anchors;
        violations += usize::from(r.violated());
    }
    (steps, anchors, violations)
}

fn criterion_13(corpus: &[GeneratedMesh]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let overlap_bad = (0..10_000)
        .filter(|_| {
            let (a, b) = (random_increasing(&mut rng), random_increasing(&mut rng));
            knots_overlap(&a, &b) != overlap_bruteforce_oracle(&a, &b)
        })
        .count();

    let (mut probes, mut not_found, mut bad_answers) = (0, 0, 0);
    let (mut wgas, mut dichotomy) = (0, 0);
    let (mut sgas, mut overlaps) = (0, 0);
    for g in corpus {
        let an = Analysis::new(&g.mesh).unwrap();
        let r = separating_tjunction_probes(&an, 1000, g.seed).unwrap();
        probes += r.valid;
        not_found += r.not_found;
        bad_answers += r.bad_answers;
        if is_wgas(&an).unwrap().holds {
            wgas += 1;
            dichotomy += projection_dichotomy(&an).unwrap().len();
        }
        if is_sgas(&an).unwrap().holds {
            sgas += 1;
            overlaps += anchor_tjunction_overlaps(&an).unwrap().len();
        }
    }

    let (steps, new_anchors, orphaned) = three_direction_steps(50);
    let fig6 = !fixtures::fig6().mesh.check_three_direction_assumption().unwrap();

    let pass = overlap_bad == 0
        && not_found == 0
        && bad_answers == 0
        && dichotomy == 0
        && overlaps == 0
        && steps >= 50
        && orphaned == 0
        && fig6;
    outcome(
        pass,
        format!(
            "overlap {overlap_bad}/10000 disagree; separating T-junction {not_found} not found, {bad_answers} wrong in {probes} probes; \
             dichotomy {dichotomy} violations on {wgas} WGAS; anchor overlap {overlaps} violations on {sgas} SGAS; \
             inheritance {orphaned} failing of {steps} steps ({new_anchors} new anchors); fig6 fails assumption: {fig6}"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut report = |k: usize, o: Outcome| {
        println!("criterion {k:>2} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((k, o));
    };
    report(1, criterion_1());
    report(2, criterion_2());
    report(3, criterion_3());
    report(4, criterion_4());
    report(5, criterion_5());
    let t = Instant::now();
    let corpus = corpus();
    let gen = t.elapsed();
    report(6, criterion_6(&corpus, gen));
    report(7, criterion_7(&corpus));
    report(8, criterion_8(&corpus));
    report(9, criterion_9(&corpus));
    report(10, criterion_10());
    report(11, criterion_11());
    report(12, criterion_12());
    report(13, criterion_13(&corpus));
    let failed: Vec<usize> = results.iter().filter(|(_, o)| !o.pass).map(|(k, _)| *k).collect();
    println!("acceptance: {} of {} criteria pass ({:.1?})", results.len() - failed.len(), results.len(), start.elapsed());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
