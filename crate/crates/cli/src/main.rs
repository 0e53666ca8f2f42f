mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tspline_core::dual_compat::{is_sdc, is_wdc, DcVerdict};
use tspline_core::fixtures;
use tspline_core::io::{mesh_from_str, mesh_to_string, parse_rat, FORMAT_VERSION};
use tspline_core::mesh::{create_tensor_mesh, unit_breakpoints, IndexDomain, TMesh};
use tspline_core::region::Rat;
use tspline_core::suitability::{is_aas, is_sgas, is_wgas, Classification, GtjWitness};
use tspline_core::verify::harness::{conjecture_search_wgas_wdc, crosscheck_thm_aas_sdc, crosscheck_thm_sgas_aas};
use tspline_core::verify::numerics::{linear_independence_rank, RANK_THRESHOLD};
use tspline_core::verify::properties::{anchor_tjunction_overlaps, projection_dichotomy, separating_tjunction_probes};
use tspline_core::verify::{mesh_stream, Filter, GeneratorConfig};
use tspline_core::{Analysis, Error};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_MIDPOINT: u8 = 3;
const EXIT_MALFORMED: u8 = 4;
const EXIT_USAGE: u8 = 5;

#[derive(Parser)]
#[command(name = "tspline", version, about = "Build, refine, classify and draw multivariate T-meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a tensor-product mesh
    New {
        #[arg(long)]
        dim: usize,
        /// Comma-separated `N_1,..,N_d`
        #[arg(long)]
        extents: String,
        /// Comma-separated `p_1,..,p_d`
        #[arg(long)]
        degrees: String,
        /// Per-direction breakpoint lists separated by `;`, e.g. `0,2,4;0,1,2,3`.
        /// A single list is used for every direction. Defaults to unit breakpoints.
        #[arg(long)]
        breakpoints: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisect the cell containing a point
    Refine {
        #[arg(long)]
        mesh: PathBuf,
        /// Comma-separated coordinates of a point inside the cell, e.g. `2.5,3` or `5/2,3`
        #[arg(long)]
        at: String,
        /// Bisection direction, 1-based
        #[arg(long)]
        dir: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run classifiers and print verdicts with witnesses
    Check {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        which: Vec<Which>,
        /// Print a JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Numerical rank of the T-spline evaluation matrix
    LinIndep {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded corpus suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of generated meshes
        #[arg(long, default_value_t = 200)]
        seeds: usize,
        /// Stream seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a 2D mesh or a slice of a 3D mesh as SVG
    Export {
        #[arg(long)]
        mesh: PathBuf,
        /// `k=n` selects the slice `S_k(n)` of a 3D mesh, `k` 1-based
        #[arg(long)]
        slice: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "skeleton,atj,gtj,anchors")]
        layers: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one of the built-in reference meshes
    Fixture {
        /// Fixture name; omit to list them
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Admissible,
    Aas,
    Sgas,
    Wgas,
    Sdc,
    Wdc,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Thm61,
    Thm62,
    Conj63,
    Props,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::NonIntegerMidpoint { .. } => EXIT_MIDPOINT,
                Error::Format(_) => EXIT_MALFORMED,
                _ => EXIT_PRECONDITION,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return EXIT_MALFORMED;
        }
    }
    EXIT_PRECONDITION
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| anyhow!(Error::PreconditionViolated(format!("bad {what} entry {x:?}")))))
        .collect()
}

fn read_mesh(path: &Path) -> Result<TMesh> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(mesh_from_str(&text)?)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn direction(dir: usize, d: usize) -> Result<usize> {
    if dir == 0 || dir > d {
        bail!(Error::InvalidDirection(dir));
    }
    Ok(dir - 1)
}

fn cmd_new(dim: usize, extents: &str, degrees: &str, breakpoints: Option<&str>, out: Option<&Path>) -> Result<u8> {
    let ext: Vec<i64> = list(extents, "extent")?;
    let deg: Vec<u32> = list(degrees, "degree")?;
    for len in [ext.len(), deg.len()] {
        if len != dim {
            bail!(Error::DimensionMismatch { expected: dim, got: len });
        }
    }
    let bps = match breakpoints {
        None => unit_breakpoints(&ext),
        Some(s) => {
            let lists = s.split(';').map(|l| list::<i64>(l, "breakpoint")).collect::<Result<Vec<_>>>()?;
            match lists.len() {
                1 => vec![lists[0].clone(); dim],
                n if n == dim => lists,
                n => bail!(Error::DimensionMismatch { expected: dim, got: n }),
            }
        }
    };
    let mesh = create_tensor_mesh(IndexDomain::new(ext, deg)?, bps)?;
    write_out(out, &mesh_to_string(&mesh))?;
    Ok(0)
}

fn cmd_refine(mesh: &Path, at: &str, dir: usize, out: Option<&Path>) -> Result<u8> {
    let m = read_mesh(mesh)?;
    let x: Vec<Rat> = at.split(',').map(parse_rat).collect::<tspline_core::Result<_>>()?;
    if x.len() != m.dim() {
        bail!(Error::DimensionMismatch { expected: m.dim(), got: x.len() });
    }
    let j = direction(dir, m.dim())?;
    let r = m.subdiv_at(&x, j)?;
    write_out(out, &mesh_to_string(&r))?;
    Ok(0)
}

fn gtj_lines(c: &Classification<GtjWitness>) -> Vec<String> {
    c.witnesses
        .iter()
        .map(|w| {
            format!(
                "GTJ({}) meets GTJ({}) in {}",
                w.first.entity,
                w.second.entity,
                w.intersection.spans().iter().map(|s| format!("[{},{}]", s.lo(), s.hi())).collect::<Vec<_>>().join("x")
            )
        })
        .collect()
}

fn dc_lines(v: &DcVerdict) -> Vec<String> {
    v.witnesses
        .iter()
        .map(|w| {
            let dirs: Vec<String> = w
                .overlaps
                .iter()
                .enumerate()
                .map(|(k, &o)| format!("{}:{}", k + 1, if o { "overlap" } else { "no" }))
                .collect();
            format!("{} / {}: {}", w.first, w.second, dirs.join(" "))
        })
        .collect()
}

fn cmd_check(mesh: &Path, which: &[Which], as_json: bool) -> Result<u8> {
    let m = read_mesh(mesh)?;
    let an = Analysis::new(&m)?;
    let mut selected: Vec<Which> = if which.contains(&Which::All) {
        vec![Which::Admissible, Which::Aas, Which::Sgas, Which::Wgas, Which::Sdc, Which::Wdc]
    } else {
        which.to_vec()
    };
    selected.dedup();
    let mut rows = Vec::new();
    for w in selected {
        let (name, holds, witnesses) = match w {
            Which::Admissible => {
                let a = m.is_admissible();
                ("admissible", a.admissible, a.violations)
            }
            Which::Aas => {
                let c = is_aas(&an);
                let lines = c
                    .witnesses
                    .iter()
                    .map(|w| {
                        format!(
                            "ATJ_{}({}) meets ATJ_{}({}) in {} box(es)",
                            w.first.0 + 1,
                            w.first.1,
                            w.second.0 + 1,
                            w.second.1,
                            w.intersection.boxes().len()
                        )
                    })
                    .collect();
                ("aas", c.holds, lines)
            }
            Which::Sgas => {
                let c = is_sgas(&an)?;
                ("sgas", c.holds, gtj_lines(&c))
            }
            Which::Wgas => {
                let c = is_wgas(&an)?;
                ("wgas", c.holds, gtj_lines(&c))
            }
            Which::Sdc => {
                let v = is_sdc(&an);
                ("sdc", v.holds, dc_lines(&v))
            }
            Which::Wdc => {
                let v = is_wdc(&an);
                ("wdc", v.holds, dc_lines(&v))
            }
            Which::All => unreachable!(),
        };
        rows.push((name, holds, witnesses));
    }
    if as_json {
        let checks: Vec<_> = rows
            .iter()
            .map(|(n, h, w)| json!({ "check": n, "holds": h, "witnesses": w }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&json!({ "format_version": FORMAT_VERSION, "checks": checks }))?);
    } else {
        for (name, holds, witnesses) in &rows {
            println!("{name:<11} {}", if *holds { "yes" } else { "no" });
            for w in witnesses.iter().take(10) {
                println!("    {w}");
            }
            if witnesses.len() > 10 {
                println!("    ... {} more", witnesses.len() - 10);
            }
        }
    }
    Ok(if rows.iter().all(|r| r.1) { 0 } else { EXIT_FAILED_CHECK })
}

fn cmd_lin_indep(mesh: &Path, as_json: bool) -> Result<u8> {
    let m = read_mesh(mesh)?;
    let an = Analysis::new(&m)?;
    let r = linear_independence_rank(&an);
    if as_json {
        let mut v = serde_json::to_value(&r)?;
        v["format_version"] = json!(FORMAT_VERSION);
        v["threshold"] = json!(RANK_THRESHOLD);
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        let smallest = r.singular_values.last().copied().unwrap_or(0.0);
        let largest = r.singular_values.first().copied().unwrap_or(0.0);
        println!("anchors      {}", r.num_anchors);
        println!("samples      {}", r.sample_points);
        println!("rank         {}", r.rank);
        println!("sigma_min/max {:.3e}", if largest > 0.0 { smallest / largest } else { 0.0 });
        println!("independent  {}", if r.independent { "yes" } else { "no" });
    }
    Ok(if r.independent { 0 } else { EXIT_FAILED_CHECK })
}

fn cmd_verify(suite: Suite, seeds: usize, seed: u64, out: Option<&Path>) -> Result<u8> {
    let (summary, report, failures) = match suite {
        Suite::Thm61 => {
            let corpus = mesh_stream(seed, seeds, &GeneratorConfig::default())?;
            let r = crosscheck_thm_aas_sdc(&corpus)?;
            let s = format!("{} meshes, {} AAS, {} disagreements between AAS and SDC", r.checked, r.aas, r.disagreements.len());
            (s, serde_json::to_value(&r)?, r.disagreements.len())
        }
        Suite::Thm62 => {
            let corpus = mesh_stream(seed, seeds, &GeneratorConfig::default())?;
            let r = crosscheck_thm_sgas_aas(&corpus)?;
            let s = format!("{} meshes, {} SGAS, {} violations", r.checked, r.sgas, r.violations.len());
            (s, serde_json::to_value(&r)?, r.violations.len())
        }
        Suite::Conj63 => {
            let cfg = GeneratorConfig { filter: Filter::WgasOnly, max_steps: 30, max_cells: 3, ..Default::default() };
            let corpus = mesh_stream(seed, seeds, &cfg)?;
            let r = conjecture_search_wgas_wdc(&corpus)?;
            let s = format!("{} WGAS meshes, {} candidate counterexamples", r.wgas, r.candidates.len());
            (s, serde_json::to_value(&r)?, 0)
        }
        Suite::Props => {
            let corpus = mesh_stream(seed, seeds, &GeneratorConfig::default())?;
            let (mut probes, mut not_found, mut bad, mut dich, mut ovl) = (0, 0, 0, 0, 0);
            let mut bad_seeds = Vec::new();
            for g in &corpus {
                let an = Analysis::new(&g.mesh)?;
                let p = separating_tjunction_probes(&an, 1000, g.seed)?;
                let d = if is_wgas(&an)?.holds { projection_dichotomy(&an)?.len() } else { 0 };
                let o = if is_sgas(&an)?.holds { anchor_tjunction_overlaps(&an)?.len() } else { 0 };
                probes += p.valid;
                not_found += p.not_found;
                bad += p.bad_answers;
                dich += d;
                ovl += o;
                if p.not_found + p.bad_answers + d + o > 0 {
                    bad_seeds.push(g.seed);
                }
            }
            let s = format!(
                "{} meshes, {probes} separation probes ({not_found} not found, {bad} wrong), {dich} dichotomy and {ovl} overlap violations",
                corpus.len()
            );
            let r = json!({
                "meshes": corpus.len(),
                "probes": probes,
                "not_found": not_found,
                "bad_answers": bad,
                "dichotomy_violations": dich,
                "overlap_violations": ovl,
                "failing_seeds": bad_seeds,
            });
            (s, r, bad_seeds.len())
        }
    };
    println!("{summary}");
    if let Some(p) = out {
        let mut v = report;
        v["format_version"] = json!(FORMAT_VERSION);
        v["seed"] = json!(seed);
        std::fs::write(p, serde_json::to_string_pretty(&v)?).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if failures == 0 { 0 } else { EXIT_FAILED_CHECK })
}

fn parse_slice(s: &str) -> Result<(usize, i64)> {
    let bad = || anyhow!(Error::PreconditionViolated(format!("slice must look like k=n, got {s:?}")));
    let (k, n) = s.split_once('=').ok_or_else(bad)?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    if k == 0 {
        bail!(Error::InvalidDirection(0));
    }
    Ok((k - 1, n))
}

fn cmd_export(mesh: &Path, slice: Option<&str>, layers: &[String], out: &Path) -> Result<u8> {
    let m = read_mesh(mesh)?;
    let an = Analysis::new(&m)?;
    let cut = slice.map(parse_slice).transpose()?;
    let layers = layers
        .iter()
        .map(|l| svg::Layer::parse(l).map_err(|e| anyhow!(Error::PreconditionViolated(e.to_string()))))
        .collect::<Result<Vec<_>>>()?;
    let text = svg::render(&an, cut, &layers).map_err(|e| match e.downcast::<Error>() {
        Ok(core) => anyhow!(core),
        Err(other) => anyhow!(Error::PreconditionViolated(other.to_string())),
    })?;
    std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    Ok(0)
}

fn cmd_fixture(name: Option<&str>, out: Option<&Path>) -> Result<u8> {
    match name {
        None => {
            for f in fixtures::all() {
                println!("{}", f.name);
            }
        }
        Some(n) => {
            let f = fixtures::by_name(n).ok_or_else(|| anyhow!(Error::PreconditionViolated(format!("no fixture named {n:?}"))))?;
            write_out(out, &mesh_to_string(&f.mesh))?;
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::New { dim, extents, degrees, breakpoints, out } => {
            cmd_new(dim, &extents, &degrees, breakpoints.as_deref(), out.as_deref())
        }
        Command::Refine { mesh, at, dir, out } => cmd_refine(&mesh, &at, dir, out.as_deref()),
        Command::Check { mesh, which, json } => cmd_check(&mesh, &which, json),
        Command::LinIndep { mesh, json } => cmd_lin_indep(&mesh, json),
        Command::Verify { suite, seeds, seed, out } => cmd_verify(suite, seeds, seed, out.as_deref()),
        Command::Export { mesh, slice, layers, out } => cmd_export(&mesh, slice.as_deref(), &layers, &out),
        Command::Fixture { name, out } => cmd_fixture(name.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
