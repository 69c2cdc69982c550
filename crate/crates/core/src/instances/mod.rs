//! Problem instances: homothet families for dominating set and pseudodisk
//! families with points for set cover.

mod generate;
mod io;

pub use generate::{
    gen_cover, gen_domination, gen_pseudodisk_family, pseudodisk_rejections, CoverParams, DominationParams, ObjectKind,
    ShapeKind, DEFAULT_GRID, RETRY_BUDGET,
};
pub use io::{from_json, instance_hash, load, save, to_json, SCHEMA_VERSION};

use serde::{Deserialize, Serialize};

use crate::geometry::{boundary_crossings, ConvexPolygon, GeometryError, Location, Point, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("generation exhausted the retry budget at object {object}")]
    GenerationExhausted { object: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convex base shape with a designated center strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseShape {
    pub polygon: ConvexPolygon,
    pub center: Point,
}

impl BaseShape {
    pub fn new(polygon: ConvexPolygon, center: Point) -> Result<Self, InstanceError> {
        if polygon.contains_point(&center) != Location::Interior {
            return Err(InstanceError::InvariantViolation(format!(
                "center {center:?} is not strictly inside the base shape"
            )));
        }
        Ok(BaseShape { polygon, center })
    }
}

/// A translated and positively scaled copy of the base shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homothet {
    pub center: Point,
    pub scale: Scalar,
}

/// Maps each base vertex `v` to `h.center + h.scale * (v - base.center)`.
pub fn instantiate(base: &BaseShape, h: &Homothet) -> ConvexPolygon {
    base.polygon.homothety(&base.center, &h.center, &h.scale)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationInstance {
    pub base: BaseShape,
    pub homothets: Vec<Homothet>,
    pub seed: Option<u64>,
    pub params: Option<serde_json::Value>,
}

impl DominationInstance {
    pub fn new(base: BaseShape, homothets: Vec<Homothet>) -> Result<Self, InstanceError> {
        let inst = DominationInstance {
            base,
            homothets,
            seed: None,
            params: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.homothets.is_empty() {
            return Err(InstanceError::InvariantViolation("no homothets".into()));
        }
        if self.base.polygon.contains_point(&self.base.center) != Location::Interior {
            return Err(InstanceError::InvariantViolation(
                "base center is not strictly interior".into(),
            ));
        }
        if let Some(i) = self.homothets.iter().position(|h| !h.scale.is_positive()) {
            return Err(InstanceError::InvariantViolation(format!(
                "homothet {i} has non-positive scale"
            )));
        }
        Ok(())
    }

    pub fn polygons(&self) -> Vec<ConvexPolygon> {
        self.homothets.iter().map(|h| instantiate(&self.base, h)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub objects: Vec<ConvexPolygon>,
    pub points: Vec<Point>,
    pub seed: Option<u64>,
    pub params: Option<serde_json::Value>,
}

impl CoverInstance {
    pub fn new(objects: Vec<ConvexPolygon>, points: Vec<Point>) -> Result<Self, InstanceError> {
        let inst = CoverInstance {
            objects,
            points,
            seed: None,
            params: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Checks the pseudodisk property and that every point is covered.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let report = verify_pseudodisk_family(&self.objects);
        if let Some(o) = report.offenders.first() {
            return Err(InstanceError::InvariantViolation(format!(
                "objects {} and {} are not pseudodisks ({})",
                o.i,
                o.j,
                match o.crossings {
                    Some(c) => format!("{c} crossings"),
                    None => "shared boundary segment".to_string(),
                }
            )));
        }
        for (k, p) in self.points.iter().enumerate() {
            if !self.objects.iter().any(|o| o.covers_point(p)) {
                return Err(InstanceError::InvariantViolation(format!(
                    "point {k} is not covered by any object"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Domination(DominationInstance),
    Cover(CoverInstance),
}

impl Instance {
    /// The object polygons, in index order.
    pub fn polygons(&self) -> Vec<ConvexPolygon> {
        match self {
            Instance::Domination(d) => d.polygons(),
            Instance::Cover(c) => c.objects.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Instance::Domination(d) => d.homothets.len(),
            Instance::Cover(c) => c.objects.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Domination(_) => "domination",
            Instance::Cover(_) => "cover",
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        match self {
            Instance::Domination(d) => d.validate(),
            Instance::Cover(c) => c.validate(),
        }
    }
}

/// A pair of objects whose boundaries cross more than twice, or overlap along
/// a segment (`crossings == None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudodiskOffender {
    pub i: usize,
    pub j: usize,
    pub crossings: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudodiskReport {
    pub offenders: Vec<PseudodiskOffender>,
}

impl PseudodiskReport {
    pub fn is_valid(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Whether two polygons may coexist in a pseudodisk family.
pub fn pseudodisk_pair_ok(a: &ConvexPolygon, b: &ConvexPolygon) -> Result<(), Option<usize>> {
    match boundary_crossings(a, b) {
        Ok(c) if c <= 2 => Ok(()),
        Ok(c) => Err(Some(c)),
        Err(GeometryError::DegenerateOverlap) => Err(None),
        Err(e) => unreachable!("unexpected geometry error {e}"),
    }
}

pub fn verify_pseudodisk_family(objects: &[ConvexPolygon]) -> PseudodiskReport {
    let mut offenders = Vec::new();
    for i in 0..objects.len() {
        for j in i + 1..objects.len() {
            if let Err(crossings) = pseudodisk_pair_ok(&objects[i], &objects[j]) {
                offenders.push(PseudodiskOffender { i, j, crossings });
            }
        }
    }
    PseudodiskReport { offenders }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_base() -> BaseShape {
        BaseShape::new(ConvexPolygon::rect_i(0, 0, 1, 1), Point::rat(1, 2, 1, 2)).unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let base = unit_square_base();
        let h = Homothet {
            center: Point::int(2, 2),
            scale: 2.into(),
        };
        assert_eq!(instantiate(&base, &h), ConvexPolygon::rect_i(1, 1, 3, 3));
        let id = Homothet {
            center: base.center.clone(),
            scale: 1.into(),
        };
        assert_eq!(instantiate(&base, &id), base.polygon);

        let tri = ConvexPolygon::new(vec![Point::int(0, 0), Point::int(2, 0), Point::int(0, 2)]).unwrap();
        let base = BaseShape::new(tri, Point::rat(1, 2, 1, 2)).unwrap();
        let h = Homothet {
            center: Point::int(0, 0),
            scale: Scalar::ratio(1, 2),
        };
        let expected = ConvexPolygon::new(vec![
            Point::rat(-1, 4, -1, 4),
            Point::rat(3, 4, -1, 4),
            Point::rat(-1, 4, 3, 4),
        ])
        .unwrap();
        assert_eq!(instantiate(&base, &h), expected);
    }

    #[test]
    fn base_center_must_be_interior() {
        let sq = ConvexPolygon::rect_i(0, 0, 1, 1);
        assert!(BaseShape::new(sq.clone(), Point::int(0, 0)).is_err());
        assert!(BaseShape::new(sq, Point::int(3, 0)).is_err());
    }

    #[test]
    fn pseudodisk_report_examples() {
        let a = ConvexPolygon::rect_i(0, 0, 2, 2);
        let b = ConvexPolygon::rect_i(1, 1, 3, 3);
        assert!(verify_pseudodisk_family(&[a.clone(), b]).is_valid());
        let plus = [ConvexPolygon::rect_i(0, 1, 3, 2), ConvexPolygon::rect_i(1, 0, 2, 3)];
        let rep = verify_pseudodisk_family(&plus);
        assert_eq!(
            rep.offenders,
            vec![PseudodiskOffender {
                i: 0,
                j: 1,
                crossings: Some(4)
            }]
        );
        assert!(verify_pseudodisk_family(&[a]).is_valid());
    }

    #[test]
    fn cover_instance_validation() {
        let a = ConvexPolygon::rect_i(0, 0, 2, 2);
        assert!(CoverInstance::new(vec![a.clone()], vec![Point::int(1, 1)]).is_ok());
        assert!(CoverInstance::new(vec![a.clone()], vec![Point::int(5, 1)]).is_err());
        assert!(CoverInstance::new(vec![a], vec![]).is_ok());
    }
}
