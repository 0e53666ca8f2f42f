//! Versioned JSON formats for meshes and box regions.
//!
//! Integers are written as JSON numbers and non-integral rationals as
//! `"num/den"` strings. Directions are 1-based on the wire.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{Component, Entity, IndexDomain, Refinement, TMesh};
use crate::region::{BoxRegion, ClosedBox, Rat, Span};

pub const FORMAT_VERSION: u32 = 1;

/// A rational that serializes as a number when integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|v| JsonRat(Rat::from_integer(v)))
                .ok_or_else(|| de::Error::custom(format!("{n} is not an integer"))),
            serde_json::Value::String(s) => parse_rat(&s).map(JsonRat).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected a number or \"num/den\", got {other}"))),
        }
    }
}

/// Parses `"n"`, `"n/d"` or a decimal like `"2.5"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Format(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let i: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let f = if neg { -f } else { f };
        return Ok(Rat::from_integer(i) + Rat::new(f, den));
    }
    s.parse::<i64>().map(Rat::from_integer).map_err(|_| bad())
}

/// Wire form of an entity component: `[n]` for a singleton, `[a, b]` for an interval.
fn component_json(c: Component) -> Vec<i64> {
    match c {
        Component::Singleton(n) => vec![n],
        Component::Interval(a, b) => vec![a, b],
    }
}

fn component_from_json(v: &[i64]) -> Result<Component> {
    match *v {
        [n] => Ok(Component::Singleton(n)),
        [a, b] if a < b => Ok(Component::Interval(a, b)),
        _ => Err(Error::Format(format!("bad entity component {v:?}"))),
    }
}

pub fn entity_to_json(e: &Entity) -> Vec<Vec<i64>> {
    e.components().iter().map(|&c| component_json(c)).collect()
}

pub fn entity_from_json(v: &[Vec<i64>]) -> Result<Entity> {
    Ok(Entity::new(v.iter().map(|c| component_from_json(c)).collect::<Result<_>>()?))
}

#[derive(Serialize, Deserialize)]
struct RefinementJson {
    cell: Vec<Vec<i64>>,
    dir: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshJson {
    format_version: u32,
    extents: Vec<i64>,
    degrees: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    knots: Option<Vec<Vec<JsonRat>>>,
    breakpoints: Vec<Vec<i64>>,
    #[serde(default)]
    refinements: Vec<RefinementJson>,
}

fn identity_knots(dom: &IndexDomain) -> bool {
    (0..dom.dim()).all(|k| dom.knots(k).iter().enumerate().all(|(i, &x)| x == Rat::from_integer(i as i64)))
}

/// Serializes the initial grid and refinement log; loading replays the log.
pub fn mesh_to_json(mesh: &TMesh) -> serde_json::Value {
    let dom = mesh.domain();
    let knots = (!identity_knots(dom))
        .then(|| dom.all_knots().iter().map(|v| v.iter().map(|&x| JsonRat(x)).collect()).collect());
    let m = MeshJson {
        format_version: FORMAT_VERSION,
        extents: dom.extents().to_vec(),
        degrees: dom.degrees().to_vec(),
        knots,
        breakpoints: mesh.breakpoints().to_vec(),
        refinements: mesh
            .refinement_log()
            .iter()
            .map(|r| RefinementJson { cell: entity_to_json(&r.cell), dir: r.direction + 1 })
            .collect(),
    };
    serde_json::to_value(m).expect("mesh serialization")
}

pub fn mesh_to_string(mesh: &TMesh) -> String {
    serde_json::to_string_pretty(&mesh_to_json(mesh)).expect("mesh serialization")
}

pub fn mesh_from_json(v: serde_json::Value) -> Result<TMesh> {
    let m: MeshJson = serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))?;
    if m.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format_version {}", m.format_version)));
    }
    let dom = match m.knots {
        Some(k) => IndexDomain::with_knots(
            m.extents,
            m.degrees,
            k.into_iter().map(|v| v.into_iter().map(|x| x.0).collect()).collect(),
        )?,
        None => IndexDomain::new(m.extents, m.degrees)?,
    };
    let log = m
        .refinements
        .iter()
        .map(|r| {
            if r.dir == 0 {
                return Err(Error::InvalidDirection(0));
            }
            Ok(Refinement { cell: entity_from_json(&r.cell)?, direction: r.dir - 1 })
        })
        .collect::<Result<Vec<_>>>()?;
    TMesh::replay(dom, m.breakpoints, &log)
}

pub fn mesh_from_str(s: &str) -> Result<TMesh> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    mesh_from_json(v)
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    format_version: u32,
    dim: usize,
    boxes: Vec<Vec<[JsonRat; 2]>>,
}

/// A region as a list of boxes, each a list of closed `[lo, hi]` spans.
pub fn region_to_json(r: &BoxRegion) -> serde_json::Value {
    let boxes = r
        .boxes()
        .iter()
        .map(|b| b.spans().iter().map(|s| [JsonRat(s.lo()), JsonRat(s.hi())]).collect())
        .collect();
    serde_json::to_value(RegionJson { format_version: FORMAT_VERSION, dim: r.dim(), boxes })
        .expect("region serialization")
}

pub fn region_from_json(v: serde_json::Value) -> Result<BoxRegion> {
    let r: RegionJson = serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))?;
    let boxes = r
        .boxes
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|[lo, hi]| {
                    if lo.0 > hi.0 {
                        Err(Error::Format("span with lo > hi".into()))
                    } else {
                        Ok(Span::closed(lo.0, hi.0))
                    }
                })
                .collect::<Result<Vec<_>>>()
                .map(ClosedBox::new)
        })
        .collect::<Result<Vec<_>>>()?;
    BoxRegion::from_boxes(r.dim, boxes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rat("3").unwrap(), Rat::from_integer(3));
        assert_eq!(parse_rat("7/2").unwrap(), Rat::new(7, 2));
        assert_eq!(parse_rat("2.5").unwrap(), Rat::new(5, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), Rat::new(-1, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn mesh_round_trip() {
        for f in fixtures::all() {
            let back = mesh_from_str(&mesh_to_string(&f.mesh)).unwrap();
            assert_eq!(back, f.mesh, "{}", f.name);
        }
    }

    #[test]
    fn non_identity_knots_round_trip() {
        let knots = vec![vec![Rat::from_integer(0), Rat::new(1, 3), Rat::new(1, 2), Rat::from_integer(2)]];
        let dom = IndexDomain::with_knots(vec![3], vec![1], knots).unwrap();
        let m = crate::mesh::create_tensor_mesh(dom, vec![vec![0, 1, 2, 3]]).unwrap();
        let v = mesh_to_json(&m);
        assert_eq!(v["knots"][0][1], "1/3");
        assert_eq!(mesh_from_json(v).unwrap(), m);
    }

    #[test]
    fn region_round_trip() {
        let r = BoxRegion::from_boxes(
            2,
            vec![ClosedBox::new(vec![Span::closed(Rat::new(1, 2), Rat::from_integer(3)), Span::point(Rat::from_integer(2))])],
        )
        .unwrap();
        let v = region_to_json(&r);
        assert_eq!(v["boxes"][0][0][0], "1/2");
        assert!(region_from_json(v).unwrap().equals(&r).unwrap());
    }

    #[test]
    fn malformed_input_is_a_format_error() {
        assert!(matches!(mesh_from_str("{"), Err(Error::Format(_))));
        assert!(matches!(mesh_from_str(r#"{"format_version": 9, "extents": [3], "degrees": [1], "breakpoints": [[0,1,2,3]]}"#), Err(Error::Format(_))));
    }
}
