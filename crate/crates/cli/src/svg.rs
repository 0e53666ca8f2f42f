//! SVG rendering of a two-dimensional view of a mesh: the whole mesh in 2D, or
//! one slice `S_k(n)` of a 3D mesh.

use std::fmt::Write;

use anyhow::{bail, Result};
use serde_json::json;
use tspline_core::io::{region_to_json, FORMAT_VERSION};
use tspline_core::mesh::{Component, Entity};
use tspline_core::region::{BoxRegion, Rat};
use tspline_core::suitability::atj;
use tspline_core::Analysis;

const SCALE: f64 = 24.0;
const MARGIN: f64 = 24.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    Skeleton,
    Atj,
    Gtj,
    Anchors,
}

impl Layer {
    pub fn parse(s: &str) -> Result<Layer> {
        Ok(match s.trim() {
            "skeleton" => Layer::Skeleton,
            "atj" => Layer::Atj,
            "gtj" => Layer::Gtj,
            "anchors" => Layer::Anchors,
            other => bail!("unknown layer {other:?}"),
        })
    }

    fn name(self) -> &'static str {
        match self {
            Layer::Skeleton => "skeleton",
            Layer::Atj => "atj",
            Layer::Gtj => "gtj",
            Layer::Anchors => "anchors",
        }
    }
}

/// The plane being drawn: its two axes and, for 3D meshes, the cut `(k, n)`.
struct View {
    axes: [usize; 2],
    cut: Option<(usize, i64)>,
    extents: [i64; 2],
}

impl View {
    /// The part of `e` inside the plane, as two components, if the plane cuts it.
    fn trace(&self, e: &Entity) -> Option<[Component; 2]> {
        if let Some((k, n)) = self.cut {
            let hit = match e.component(k) {
                Component::Singleton(c) => c == n,
                Component::Interval(a, b) => a < n && n < b,
            };
            if !hit {
                return None;
            }
        }
        Some([e.component(self.axes[0]), e.component(self.axes[1])])
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + v * SCALE
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + (self.extents[1] as f64 - v) * SCALE
    }

    fn width(&self) -> f64 {
        2.0 * MARGIN + self.extents[0] as f64 * SCALE
    }

    fn height(&self) -> f64 {
        2.0 * MARGIN + self.extents[1] as f64 * SCALE
    }
}

fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

fn rat(q: Rat) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn bounds(c: Component) -> (f64, f64) {
    (c.inf() as f64, c.sup() as f64)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws a trace as a dot, a segment or a rectangle depending on its dimension.
fn shape(out: &mut String, v: &View, t: [Component; 2], style: &str, radius: f64) {
    let ((x0, x1), (y0, y1)) = (bounds(t[0]), bounds(t[1]));
    let (sx0, sx1, sy0, sy1) = (v.x(x0), v.x(x1), v.y(y1), v.y(y0));
    match (t[0].is_singleton(), t[1].is_singleton()) {
        (true, true) => {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#, num(sx0), num(sy1), num(radius));
        }
        (false, false) => {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" {style}/>"#,
                num(sx0),
                num(sy0),
                num(sx1 - sx0),
                num(sy1 - sy0)
            );
        }
        _ => {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
                num(sx0),
                num(v.y(y0)),
                num(sx1),
                num(v.y(y1))
            );
        }
    }
}

fn region_shapes(out: &mut String, v: &View, r: &BoxRegion, fill: &str, stroke: &str) {
    for b in r.boxes() {
        let (a, c) = (b.span(v.axes[0]), b.span(v.axes[1]));
        let (x0, x1) = (v.x(rat(a.lo())), v.x(rat(a.hi())));
        let (y0, y1) = (v.y(rat(c.hi())), v.y(rat(c.lo())));
        if a.is_point() || c.is_point() {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="5" stroke-opacity="0.6"/>"#,
                num(x0),
                num(y1),
                num(x1),
                num(y0)
            );
        } else {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" fill-opacity="0.45" stroke="{stroke}"/>"#,
                num(x0),
                num(y0),
                num(x1 - x0),
                num(y1 - y0)
            );
        }
    }
}

/// The regions drawn for the extension layers, also written to the metadata.
pub fn layer_regions(an: &Analysis, cut: Option<(usize, i64)>) -> Result<(BoxRegion, BoxRegion)> {
    let d = an.mesh().dim();
    let gtjs = an.gtjs()?;
    match cut {
        None => {
            let mut a = BoxRegion::empty(d);
            for j in 0..d {
                a = a.union(&atj(an, j))?;
            }
            let g = BoxRegion::from_boxes(d, gtjs.iter().map(|g| g.region.clone()).collect())?;
            Ok((a.normalize(), g.normalize()))
        }
        Some((k, n)) => {
            let a = an.atj_slices()[k][n as usize].clone();
            let boxes = gtjs
                .iter()
                .filter(|g| g.tjunction.odir == k && g.tjunction.entity.component(k) == Component::Singleton(n))
                .map(|g| g.region.clone())
                .collect();
            let g = BoxRegion::from_boxes(d, boxes)?;
            Ok((a.normalize(), g.normalize()))
        }
    }
}

/// Renders the view. `cut` is required for 3D meshes and must be absent in 2D.
pub fn render(an: &Analysis, cut: Option<(usize, i64)>, layers: &[Layer]) -> Result<String> {
    let mesh = an.mesh();
    let d = mesh.dim();
    let axes: Vec<usize> = match (d, cut) {
        (2, None) => vec![0, 1],
        (3, Some((k, n))) => {
            if k >= 3 || n < 0 || n > mesh.domain().extent(k) {
                bail!("slice {}={n} is outside the index domain", k + 1);
            }
            (0..3).filter(|&j| j != k).collect()
        }
        (2, Some(_)) => bail!("a 2D mesh is drawn whole; omit --slice"),
        (3, None) => bail!("a 3D mesh needs --slice k=n"),
        _ => bail!("only 2D meshes and slices of 3D meshes can be drawn, mesh has dimension {d}"),
    };
    let v = View {
        axes: [axes[0], axes[1]],
        cut,
        extents: [mesh.domain().extent(axes[0]), mesh.domain().extent(axes[1])],
    };
    let mut layers = layers.to_vec();
    layers.sort();
    layers.dedup();

    let (atj_region, gtj_region) = layer_regions(an, cut)?;
    let mut meta = json!({
        "format_version": FORMAT_VERSION,
        "dim": d,
        "slice": cut.map(|(k, n)| json!({ "direction": k + 1, "index": n })),
        "axes": [v.axes[0] + 1, v.axes[1] + 1],
        "layers": layers.iter().map(|l| l.name()).collect::<Vec<_>>(),
    });
    if layers.contains(&Layer::Atj) {
        meta["atj"] = region_to_json(&atj_region);
    }
    if layers.contains(&Layer::Gtj) {
        meta["gtj"] = region_to_json(&gtj_region);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(v.width()),
        num(v.height()),
        num(v.width()),
        num(v.height())
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", escape(&meta.to_string()));
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, num(v.width()), num(v.height()));

    for layer in &layers {
        let _ = writeln!(out, r#"<g id="{}">"#, layer.name());
        match layer {
            Layer::Skeleton => {
                for e in mesh.all_entities() {
                    let Some(t) = v.trace(e) else { continue };
                    let dims = t.iter().filter(|c| !c.is_singleton()).count();
                    let in_plane = cut.map_or(false, |(k, _)| e.component(k).is_singleton());
                    if dims == 2 && in_plane {
                        shape(&mut out, &v, t, r##"fill="#d8d8d8" stroke="none""##, 0.0);
                    }
                }
                for e in mesh.all_entities() {
                    let Some(t) = v.trace(e) else { continue };
                    if t.iter().filter(|c| !c.is_singleton()).count() == 1 {
                        shape(&mut out, &v, t, r#"stroke="black" stroke-width="1""#, 0.0);
                    }
                }
                for tj in an.tjunctions() {
                    if cut.map_or(true, |(k, _)| tj.odir == k) {
                        if let Some(t) = v.trace(&tj.entity) {
                            shape(&mut out, &v, t, r##"stroke="#c00000" fill="#c00000" stroke-width="3""##, 3.0);
                        }
                    }
                }
            }
            Layer::Atj => region_shapes(&mut out, &v, &atj_region, "#f0a030", "#b06000"),
            Layer::Gtj => region_shapes(&mut out, &v, &gtj_region, "#3080f0", "#0040a0"),
            Layer::Anchors => {
                for a in an.anchors() {
                    if let Some(t) = v.trace(&a.entity) {
                        shape(
                            &mut out,
                            &v,
                            t,
                            r##"stroke="#006000" fill="#006000" fill-opacity="0.15" stroke-width="2" stroke-dasharray="2 3""##,
                            2.5,
                        );
                    }
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
