//! Versioned JSON instance files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "kind": "domination",
//!   "base": { "polygon": [["-1/2","-1/2"], ...], "center": ["0","0"] },
//!   "homothets": [{ "center": ["3/2","7"], "scale": "5/4" }, ...],
//!   "seed": 42,
//!   "params": { ... }
//! }
//! ```
//!
//! Cover instances carry `"kind": "cover"`, `"objects"` (vertex lists) and
//! `"points"` instead of `base`/`homothets`. Coordinates are exact rational
//! strings. All invariants are re-checked on load.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{BaseShape, CoverInstance, DominationInstance, Homothet, Instance, InstanceError};
use crate::geometry::{ConvexPolygon, Point};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct BaseFile {
    polygon: Vec<Point>,
    center: Point,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<BaseFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    homothets: Option<Vec<Homothet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objects: Option<Vec<Vec<Point>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<serde_json::Value>,
}

fn polygon(v: Vec<Point>, what: &str) -> Result<ConvexPolygon, InstanceError> {
    ConvexPolygon::new(v).map_err(|e| InstanceError::InvariantViolation(format!("{what}: {e}")))
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn to_json(instance: &Instance) -> String {
    let file = match instance {
        Instance::Domination(d) => InstanceFile {
            version: SCHEMA_VERSION,
            kind: "domination".into(),
            base: Some(BaseFile {
                polygon: d.base.polygon.vertices().to_vec(),
                center: d.base.center.clone(),
            }),
            homothets: Some(d.homothets.clone()),
            objects: None,
            points: None,
            seed: d.seed,
            params: d.params.clone(),
        },
        Instance::Cover(c) => InstanceFile {
            version: SCHEMA_VERSION,
            kind: "cover".into(),
            base: None,
            homothets: None,
            objects: Some(c.objects.iter().map(|o| o.vertices().to_vec()).collect()),
            points: Some(c.points.clone()),
            seed: c.seed,
            params: c.params.clone(),
        },
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
    if file.version != SCHEMA_VERSION {
        return Err(InstanceError::Parse(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.version
        )));
    }
    let instance = match file.kind.as_str() {
        "domination" => {
            let base = file
                .base
                .ok_or_else(|| InstanceError::Parse("domination instance without base".into()))?;
            let base = BaseShape::new(polygon(base.polygon, "base polygon")?, base.center)?;
            let homothets = file
                .homothets
                .ok_or_else(|| InstanceError::Parse("domination instance without homothets".into()))?;
            Instance::Domination(DominationInstance {
                base,
                homothets,
                seed: file.seed,
                params: file.params,
            })
        }
        "cover" => {
            let objects = file
                .objects
                .ok_or_else(|| InstanceError::Parse("cover instance without objects".into()))?
                .into_iter()
                .enumerate()
                .map(|(i, v)| polygon(v, &format!("object {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            Instance::Cover(CoverInstance {
                objects,
                points: file.points.unwrap_or_default(),
                seed: file.seed,
                params: file.params,
            })
        }
        other => return Err(InstanceError::Parse(format!("unknown instance kind {other:?}"))),
    };
    instance.validate()?;
    Ok(instance)
}

pub fn save(instance: &Instance, path: impl AsRef<Path>) -> Result<(), InstanceError> {
    std::fs::write(path, to_json(instance))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Instance, InstanceError> {
    from_json(&std::fs::read_to_string(path)?)
}

/// Hex SHA-256 of the canonical JSON encoding.
pub fn instance_hash(instance: &Instance) -> String {
    hex::encode(Sha256::digest(to_json(instance).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_cover, gen_domination, CoverParams, DominationParams, ObjectKind, ShapeKind};

    #[test]
    fn round_trip_is_byte_exact() {
        let d =
            Instance::Domination(gen_domination(&DominationParams::new(12, ShapeKind::Regular { k: 5 }), 3).unwrap());
        let c = Instance::Cover(gen_cover(&CoverParams::new(6, 15, ObjectKind::Rectangles), 4).unwrap());
        for inst in [d, c] {
            let text = to_json(&inst);
            let back = from_json(&text).unwrap();
            assert_eq!(back, inst);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn zero_scale_is_an_invariant_violation() {
        let text = r#"{"version":1,"kind":"domination",
            "base":{"polygon":[["0","0"],["1","0"],["1","1"],["0","1"]],"center":["1/2","1/2"]},
            "homothets":[{"center":["0","0"],"scale":"0"}]}"#;
        assert!(matches!(from_json(text), Err(InstanceError::InvariantViolation(_))));
    }

    #[test]
    fn four_crossing_cover_is_rejected() {
        let text = r#"{"version":1,"kind":"cover",
            "objects":[[["0","1"],["3","1"],["3","2"],["0","2"]],[["1","0"],["2","0"],["2","3"],["1","3"]]],
            "points":[]}"#;
        assert!(matches!(from_json(text), Err(InstanceError::InvariantViolation(_))));
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(from_json("{"), Err(InstanceError::Parse(_))));
        assert!(matches!(
            from_json(r#"{"version":9,"kind":"cover","objects":[]}"#),
            Err(InstanceError::Parse(_))
        ));
        assert!(matches!(
            from_json(r#"{"version":1,"kind":"circle"}"#),
            Err(InstanceError::Parse(_))
        ));
        assert!(matches!(
            from_json(r#"{"version":1,"kind":"cover","objects":[[["a","0"]]]}"#),
            Err(InstanceError::Parse(_))
        ));
    }
}
