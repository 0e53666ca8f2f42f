use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tspline_core::fixtures;
use tspline_core::io::{mesh_from_str, region_from_json};
use tspline_core::mesh::{create_tensor_mesh, IndexDomain};
use tspline_core::region::Rat;
use tspline_core::suitability::atj_slice;
use tspline_core::verify::oracles::{atj_slice_oracle, region_slice_points};
use tspline_core::Analysis;

fn tspline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tspline")).args(args).output().expect("binary runs")
}

fn fixture_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn metadata(svg: &str) -> serde_json::Value {
    let start = svg.find("<metadata>").unwrap() + "<metadata>".len();
    let end = svg.find("</metadata>").unwrap();
    let raw = svg[start..end].replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&");
    serde_json::from_str(&raw).unwrap()
}

fn verdicts(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.starts_with(' '))
        .map(|l| {
            let mut w = l.split_whitespace();
            (w.next().unwrap().to_string(), w.next().unwrap().to_string())
        })
        .collect()
}

#[test]
fn shipped_fixtures_match_the_builders() {
    for f in fixtures::all() {
        let text = std::fs::read_to_string(fixture_file(&f.name)).unwrap();
        assert_eq!(mesh_from_str(&text).unwrap(), f.mesh, "{}", f.name);
    }
}

#[test]
fn fig11_check_all() {
    for name in ["fig11-p111", "fig11-p222", "fig11-p321"] {
        let o = tspline(&["check", "--mesh", fixture_file(name).to_str().unwrap(), "--which", "all"]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        let v = verdicts(&stdout(&o));
        let get = |k: &str| v.iter().find(|(n, _)| n == k).unwrap().1.clone();
        assert_eq!(get("admissible"), "yes");
        assert_eq!(get("wgas"), "yes");
        assert_eq!(get("wdc"), "yes");
        assert_eq!(get("sgas"), "no");
        assert_eq!(get("sdc"), "no");
    }
}

#[test]
fn check_exit_code_follows_the_requested_checks() {
    let mesh = fixture_file("fig11-p111");
    let o = tspline(&["check", "--mesh", mesh.to_str().unwrap(), "--which", "admissible,wgas,wdc"]);
    assert_eq!(o.status.code(), Some(0));
    let o = tspline(&["check", "--mesh", mesh.to_str().unwrap(), "--which", "sgas", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["checks"][0]["check"], "sgas");
    assert_eq!(v["checks"][0]["holds"], false);
    assert!(!v["checks"][0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn fig7_slice_export_carries_the_abstract_extension() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig7.svg");
    let mesh = fixture_file("fig7");
    let args = ["export", "--mesh", mesh.to_str().unwrap(), "--slice", "3=2", "--out", out.to_str().unwrap()];
    let o = tspline(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    let meta = metadata(&svg);
    assert_eq!(meta["slice"]["direction"], 3);
    assert_eq!(meta["slice"]["index"], 2);
    let exported = region_from_json(meta["atj"].clone()).unwrap();

    let f = fixtures::fig7();
    let an = Analysis::new(&f.mesh).unwrap();
    assert!(exported.equals(&atj_slice(&an, 2, 2).region).unwrap());
    assert_eq!(region_slice_points(&an, &exported, 2, 2), atj_slice_oracle(&an, 2, 2));
    assert!(region_from_json(meta["gtj"].clone()).is_ok());

    let again = dir.path().join("again.svg");
    let mut args2 = args;
    args2[6] = again.to_str().unwrap();
    assert_eq!(tspline(&args2).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&again).unwrap(), svg);
}

#[test]
fn export_of_a_2d_mesh_and_layer_selection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig12.svg");
    let o = tspline(&[
        "export",
        "--mesh",
        fixture_file("fig12").to_str().unwrap(),
        "--layers",
        "skeleton,gtj",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let meta = metadata(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(meta["layers"], serde_json::json!(["skeleton", "gtj"]));
    assert!(meta.get("atj").is_none());
    assert!(meta["slice"].is_null());

    let o = tspline(&["export", "--mesh", fixture_file("fig7").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = tspline(&[
        "export",
        "--mesh",
        fixture_file("fig12").to_str().unwrap(),
        "--layers",
        "shading",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn new_then_refine_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.json");
    let fine = dir.path().join("fine.json");
    let o = tspline(&[
        "new",
        "--dim",
        "2",
        "--extents",
        "8,8",
        "--degrees",
        "1,1",
        "--breakpoints",
        "0,1,2,4,6,7,8",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = tspline(&["refine", "--mesh", base.to_str().unwrap(), "--at", "5/2,3", "--dir", "1", "--out", fine.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let dom = IndexDomain::new(vec![8, 8], vec![1, 1]).unwrap();
    let m = create_tensor_mesh(dom, vec![vec![0, 1, 2, 4, 6, 7, 8]; 2]).unwrap();
    assert_eq!(mesh_from_str(&std::fs::read_to_string(&base).unwrap()).unwrap(), m);
    let x = [Rat::new(5, 2), Rat::from_integer(3)];
    let r = m.subdiv_at(&x, 0).unwrap();
    assert_eq!(mesh_from_str(&std::fs::read_to_string(&fine).unwrap()).unwrap(), r);
}

#[test]
fn refine_error_codes() {
    let fig7 = fixture_file("fig7");
    let m = fig7.to_str().unwrap();
    let o = tspline(&["refine", "--mesh", m, "--at", "2.5,1.5,1.5", "--dir", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = tspline(&["refine", "--mesh", m, "--at", "0.5,1.5,1.5", "--dir", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tspline(&["refine", "--mesh", m, "--at", "3,1.5,1.5", "--dir", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tspline(&["refine", "--mesh", m, "--at", "2.5,1.5,1.5", "--dir", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tspline(&["refine", "--mesh", m, "--at", "2.5,1.5", "--dir", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_and_unknown_flags() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"format_version\": 1, \"extents\": [").unwrap();
    let o = tspline(&["check", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    std::fs::write(&bad, "{ \"format_version\": 1, \"colour\": \"red\" }").unwrap();
    let o = tspline(&["lin-indep", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    let o = tspline(&["check", "--mesh", fixture_file("fig12").to_str().unwrap(), "--frobnicate"]);
    assert_eq!(o.status.code(), Some(5));
    let o = tspline(&["check", "--mesh", "/nonexistent/mesh.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lin_indep_reports_rank() {
    let o = tspline(&["lin-indep", "--mesh", fixture_file("fig10e").to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], v["num_anchors"]);
    assert_eq!(v["independent"], true);
}

#[test]
fn verify_suites_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["thm61", "thm62", "conj63", "props"] {
        let out = dir.path().join(format!("{suite}.json"));
        let o = tspline(&["verify", "--suite", suite, "--seeds", "6", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["seed"], 5);
    }
}

#[test]
fn fixture_listing() {
    let o = tspline(&["fixture"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(names.len(), fixtures::all().len());
    assert_eq!(tspline(&["fixture", "--name", "fig99"]).status.code(), Some(2));
}
