use std::fmt;

use serde::{Deserialize, Serialize};

use super::Scalar;

/// A point with exact rational coordinates. Serialized as `["x", "y"]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Scalar; 2]", into = "[Scalar; 2]")]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    /// `(xn/xd, yn/yd)`.
    pub fn rat(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, other: &Point) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point) -> Scalar {
        &self.x * &other.y - &self.y * &other.x
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Scalar) -> Point {
        Point::new(
            &self.x + &(t * &(&other.x - &self.x)),
            &self.y + &(t * &(&other.y - &self.y)),
        )
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Scalar::ratio(1, 2);
        Point::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }
}

impl From<[Scalar; 2]> for Point {
    fn from([x, y]: [Scalar; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [Scalar; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl std::str::FromStr for Point {
    type Err = super::ParseScalarError;

    /// Parses `"x,y"` with rational literals, e.g. `"3/2,-1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| super::ParseScalarError(s.to_string()))?;
        Ok(Point::new(x.parse()?, y.parse()?))
    }
}
