//! Seeded random instance generators.
//!
//! All coordinates are drawn from rational grids so every instance is exact
//! and reproducible. Parameter defaults are artifact choices, not values
//! with any theoretical meaning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{instantiate, pseudodisk_pair_ok, BaseShape, CoverInstance, DominationInstance, Homothet, InstanceError};
use crate::geometry::{ConvexPolygon, Point, Scalar};

/// Default resolution of the position grid (positions are `extent * k / grid`).
pub const DEFAULT_GRID: u32 = 4096;
/// Draws allowed per object before giving up.
pub const RETRY_BUDGET: usize = 1000;
/// Denominator used when rounding regular polygon vertices.
const ANGLE_DENOM: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ShapeKind {
    /// Axis-parallel unit square centered at the origin.
    Square,
    /// Regular `k`-gon inscribed in the unit circle, vertices rounded to
    /// multiples of 2^-16 (an exact convex polygon close to regular).
    Regular {
        k: u32,
    },
    Custom {
        base: BaseShape,
    },
}

impl ShapeKind {
    pub fn base_shape(&self) -> Result<BaseShape, InstanceError> {
        match self {
            ShapeKind::Square => {
                let h = Scalar::ratio(1, 2);
                let poly = ConvexPolygon::rect(-&h, -&h, h.clone(), h)
                    .map_err(|e| InstanceError::InvalidParams(e.to_string()))?;
                BaseShape::new(poly, Point::int(0, 0))
            }
            ShapeKind::Regular { k } => regular_polygon(*k),
            ShapeKind::Custom { base } => Ok(base.clone()),
        }
    }
}

fn regular_polygon(k: u32) -> Result<BaseShape, InstanceError> {
    if k < 3 {
        return Err(InstanceError::InvalidParams(format!(
            "regular polygon needs k >= 3, got {k}"
        )));
    }
    // Flat bottom edge: start at -90deg + 180deg/k.
    let start = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI / k as f64;
    let pts = (0..k)
        .map(|i| {
            let t = start + 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let x = (t.cos() * ANGLE_DENOM as f64).round() as i64;
            let y = (t.sin() * ANGLE_DENOM as f64).round() as i64;
            Point::rat(x, ANGLE_DENOM, y, ANGLE_DENOM)
        })
        .collect();
    let poly = ConvexPolygon::new(pts).map_err(|e| InstanceError::InvalidParams(e.to_string()))?;
    BaseShape::new(poly, Point::int(0, 0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationParams {
    pub n: usize,
    pub shape: ShapeKind,
    pub scale_min: Scalar,
    pub scale_max: Scalar,
    /// Centers are drawn from `[0, extent]^2`.
    pub extent: Scalar,
    pub grid: u32,
}

impl DominationParams {
    pub fn new(n: usize, shape: ShapeKind) -> Self {
        DominationParams {
            n,
            shape,
            scale_min: Scalar::ratio(1, 2),
            scale_max: Scalar::from_int(2),
            extent: Scalar::from_int(10),
            grid: DEFAULT_GRID,
        }
    }

    pub fn with_extent(mut self, extent: Scalar) -> Self {
        self.extent = extent;
        self
    }

    pub fn with_scales(mut self, lo: Scalar, hi: Scalar) -> Self {
        self.scale_min = lo;
        self.scale_max = hi;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ObjectKind {
    /// Homothets of one base shape (always a pseudodisk family).
    Homothets { shape: ShapeKind },
    /// Axis-parallel rectangles with independently drawn width and height.
    Rectangles,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverParams {
    pub n_objects: usize,
    pub n_points: usize,
    pub kind: ObjectKind,
    pub scale_min: Scalar,
    pub scale_max: Scalar,
    pub extent: Scalar,
    pub grid: u32,
}

impl CoverParams {
    pub fn new(n_objects: usize, n_points: usize, kind: ObjectKind) -> Self {
        CoverParams {
            n_objects,
            n_points,
            kind,
            scale_min: Scalar::ratio(1, 2),
            scale_max: Scalar::from_int(2),
            extent: Scalar::from_int(10),
            grid: DEFAULT_GRID,
        }
    }

    pub fn with_extent(mut self, extent: Scalar) -> Self {
        self.extent = extent;
        self
    }

    pub fn with_scales(mut self, lo: Scalar, hi: Scalar) -> Self {
        self.scale_min = lo;
        self.scale_max = hi;
        self
    }
}

struct GridSampler {
    rng: ChaCha8Rng,
    grid: u32,
}

impl GridSampler {
    fn new(seed: u64, grid: u32) -> Self {
        GridSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            grid,
        }
    }

    /// Uniform on `{lo + (hi - lo) * k / grid : k = 0..=grid}`.
    fn between(&mut self, lo: &Scalar, hi: &Scalar) -> Scalar {
        let k = self.rng.gen_range(0..=self.grid) as i64;
        lo + &((hi - lo) * Scalar::ratio(k, self.grid as i64))
    }

    fn point(&mut self, extent: &Scalar) -> Point {
        let zero = Scalar::zero();
        Point::new(self.between(&zero, extent), self.between(&zero, extent))
    }

    /// Strictly interior point of `poly`: a convex combination with positive
    /// integer weights.
    fn point_inside(&mut self, poly: &ConvexPolygon) -> Point {
        let weights: Vec<i64> = poly.vertices().iter().map(|_| self.rng.gen_range(1..=16)).collect();
        let total: i64 = weights.iter().sum();
        let mut x = Scalar::zero();
        let mut y = Scalar::zero();
        for (v, w) in poly.vertices().iter().zip(&weights) {
            let w = Scalar::ratio(*w, total);
            x += &(&v.x * &w);
            y += &(&v.y * &w);
        }
        Point::new(x, y)
    }
}

fn check_scales(lo: &Scalar, hi: &Scalar, extent: &Scalar, grid: u32) -> Result<(), InstanceError> {
    if !lo.is_positive() || hi < lo {
        return Err(InstanceError::InvalidParams(format!(
            "scale range [{lo}, {hi}] must be positive and ordered"
        )));
    }
    if !extent.is_positive() {
        return Err(InstanceError::InvalidParams("extent must be positive".into()));
    }
    if grid == 0 {
        return Err(InstanceError::InvalidParams("grid must be positive".into()));
    }
    Ok(())
}

/// Random homothets of the chosen base shape.
///
/// Candidates whose boundary overlaps an earlier object's boundary along a
/// segment are redrawn, so every pair has a well-defined crossing count.
pub fn gen_domination(params: &DominationParams, seed: u64) -> Result<DominationInstance, InstanceError> {
    if params.n == 0 {
        return Err(InstanceError::InvalidParams("n must be at least 1".into()));
    }
    check_scales(&params.scale_min, &params.scale_max, &params.extent, params.grid)?;
    let base = params.shape.base_shape()?;
    let mut s = GridSampler::new(seed, params.grid);
    let mut homothets: Vec<Homothet> = Vec::with_capacity(params.n);
    let mut polys: Vec<ConvexPolygon> = Vec::with_capacity(params.n);
    for object in 0..params.n {
        let mut accepted = false;
        for _ in 0..RETRY_BUDGET {
            let h = Homothet {
                center: s.point(&params.extent),
                scale: s.between(&params.scale_min, &params.scale_max),
            };
            let p = instantiate(&base, &h);
            if polys.iter().all(|q| pseudodisk_pair_ok(q, &p).is_ok()) {
                homothets.push(h);
                polys.push(p);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(InstanceError::GenerationExhausted { object });
        }
    }
    Ok(DominationInstance {
        base,
        homothets,
        seed: Some(seed),
        params: Some(serde_json::to_value(params).expect("params serialize")),
    })
}

fn draw_object(s: &mut GridSampler, params: &CoverParams, base: Option<&BaseShape>) -> ConvexPolygon {
    match (&params.kind, base) {
        (ObjectKind::Homothets { .. }, Some(base)) => {
            let h = Homothet {
                center: s.point(&params.extent),
                scale: s.between(&params.scale_min, &params.scale_max),
            };
            instantiate(base, &h)
        }
        _ => {
            let c = s.point(&params.extent);
            let half = Scalar::ratio(1, 2);
            let w = s.between(&params.scale_min, &params.scale_max) * &half;
            let h = s.between(&params.scale_min, &params.scale_max) * &half;
            ConvexPolygon::rect(&c.x - &w, &c.y - &h, &c.x + &w, &c.y + &h).expect("positive size")
        }
    }
}

/// A convex pseudodisk family built by rejection sampling: each candidate that
/// crosses an accepted object more than twice, or shares a boundary segment
/// with one, is redrawn (at most [`RETRY_BUDGET`] draws per object).
pub fn gen_pseudodisk_family(params: &CoverParams, seed: u64) -> Result<Vec<ConvexPolygon>, InstanceError> {
    let mut s = GridSampler::new(seed, params.grid);
    pseudodisk_family_with(&mut s, params).map(|(objs, _)| objs)
}

fn pseudodisk_family_with(
    s: &mut GridSampler,
    params: &CoverParams,
) -> Result<(Vec<ConvexPolygon>, usize), InstanceError> {
    check_scales(&params.scale_min, &params.scale_max, &params.extent, params.grid)?;
    let base = match &params.kind {
        ObjectKind::Homothets { shape } => Some(shape.base_shape()?),
        ObjectKind::Rectangles => None,
    };
    let mut objects: Vec<ConvexPolygon> = Vec::with_capacity(params.n_objects);
    let mut rejections = 0;
    for object in 0..params.n_objects {
        let mut accepted = false;
        for _ in 0..RETRY_BUDGET {
            let cand = draw_object(s, params, base.as_ref());
            if objects.iter().all(|q| pseudodisk_pair_ok(q, &cand).is_ok()) {
                objects.push(cand);
                accepted = true;
                break;
            }
            rejections += 1;
        }
        if !accepted {
            return Err(InstanceError::GenerationExhausted { object });
        }
    }
    Ok((objects, rejections))
}

/// Random set-cover instance over a convex pseudodisk family; points are
/// sampled strictly inside uniformly chosen objects, so the full family is
/// always a feasible cover.
pub fn gen_cover(params: &CoverParams, seed: u64) -> Result<CoverInstance, InstanceError> {
    if params.n_objects == 0 {
        return Err(InstanceError::InvalidParams("n_objects must be at least 1".into()));
    }
    let mut s = GridSampler::new(seed, params.grid);
    let (objects, rejections) = pseudodisk_family_with(&mut s, params)?;
    log::debug!("gen_cover: {rejections} rejected candidates");
    let points = (0..params.n_points)
        .map(|_| {
            let k = s.rng.gen_range(0..objects.len());
            s.point_inside(&objects[k])
        })
        .collect();
    Ok(CoverInstance {
        objects,
        points,
        seed: Some(seed),
        params: Some(serde_json::to_value(params).expect("params serialize")),
    })
}

/// Rejection count for a family draw; exposed for tests of the sampler.
#[doc(hidden)]
pub fn pseudodisk_rejections(params: &CoverParams, seed: u64) -> Result<usize, InstanceError> {
    let mut s = GridSampler::new(seed, params.grid);
    pseudodisk_family_with(&mut s, params).map(|(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::verify_pseudodisk_family;

    #[test]
    fn regular_shapes_are_valid() {
        for k in [3, 4, 5, 6, 8, 12] {
            let b = ShapeKind::Regular { k }.base_shape().unwrap();
            assert_eq!(b.polygon.len(), k as usize);
        }
        assert!(ShapeKind::Regular { k: 2 }.base_shape().is_err());
    }

    #[test]
    fn single_object_instance() {
        let inst = gen_domination(&DominationParams::new(1, ShapeKind::Square), 7).unwrap();
        assert_eq!(inst.homothets.len(), 1);
    }

    #[test]
    fn tiny_extent_gives_a_triangle_graph() {
        let p = DominationParams::new(3, ShapeKind::Square).with_extent(Scalar::ratio(1, 10));
        let polys = gen_domination(&p, 3).unwrap().polygons();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(polys[i].interiors_intersect(&polys[j]));
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let p = DominationParams::new(20, ShapeKind::Regular { k: 6 });
        assert_eq!(gen_domination(&p, 11).unwrap(), gen_domination(&p, 11).unwrap());
        assert_ne!(gen_domination(&p, 11).unwrap(), gen_domination(&p, 12).unwrap());
        let c = CoverParams::new(10, 30, ObjectKind::Rectangles);
        assert_eq!(gen_cover(&c, 5).unwrap(), gen_cover(&c, 5).unwrap());
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            gen_domination(&DominationParams::new(0, ShapeKind::Square), 1),
            Err(InstanceError::InvalidParams(_))
        ));
        let p = DominationParams::new(3, ShapeKind::Square).with_scales(Scalar::zero(), Scalar::one());
        assert!(matches!(gen_domination(&p, 1), Err(InstanceError::InvalidParams(_))));
    }

    #[test]
    fn homothet_families_never_reject_on_crossings() {
        let c = CoverParams::new(
            15,
            10,
            ObjectKind::Homothets {
                shape: ShapeKind::Regular { k: 5 },
            },
        );
        for seed in 0..5 {
            let inst = gen_cover(&c, seed).unwrap();
            assert!(verify_pseudodisk_family(&inst.objects).is_valid());
            assert_eq!(pseudodisk_rejections(&c, seed).unwrap(), 0);
        }
    }

    #[test]
    fn rectangles_of_mixed_aspect_get_rejected_sometimes() {
        let c = CoverParams::new(15, 10, ObjectKind::Rectangles)
            .with_scales(Scalar::ratio(1, 4), Scalar::from_int(6))
            .with_extent(Scalar::from_int(6));
        let total: usize = (0..5).map(|s| pseudodisk_rejections(&c, s).unwrap()).sum();
        assert!(total > 0);
        for seed in 0..5 {
            let inst = gen_cover(&c, seed).unwrap();
            assert!(verify_pseudodisk_family(&inst.objects).is_valid());
            assert!(inst.validate().is_ok());
        }
    }

    #[test]
    fn zero_points_is_valid() {
        let c = CoverParams::new(4, 0, ObjectKind::Rectangles);
        let inst = gen_cover(&c, 1).unwrap();
        assert!(inst.points.is_empty());
        assert!(inst.validate().is_ok());
    }
}
