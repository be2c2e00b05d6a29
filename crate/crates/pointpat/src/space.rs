//! Euclidean metric space with a fixed origin.
//!
//! All patterns in one computation live in `R^d` for a single `d ≥ 1` and
//! share a fixed origin `x0`; ball restrictions and radii are always taken
//! relative to that origin. The metric itself is confined to this module,
//! so swapping Euclidean distance for another metric is a local change.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use crate::{Error, Result};

/// A point of `R^d` with finite coordinates.
///
/// `-0.0` is normalised to `+0.0` on construction so that zero distance
/// coincides with coordinate-wise identity.
#[derive(Debug, Clone)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty coordinate lists and non-finite values.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        for (axis, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoordinate { axis, value });
            }
        }
        let coords = coords.into_iter().map(|c| c + 0.0).collect();
        Ok(Self { coords })
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance, checking that both points share a dimension.
    pub fn distance_to(&self, other: &Point) -> Result<f64> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(euclidean(self, other))
    }
}

/// Unchecked Euclidean distance for pre-validated points.
///
/// `a - b` and `b - a` are exact IEEE negations, so the result is
/// bit-for-bit symmetric in its arguments.
pub(crate) fn euclidean(a: &Point, b: &Point) -> f64 {
    debug_assert_eq!(a.dimension(), b.dimension());
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in &self.coords {
            c.to_bits().hash(state);
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                non_eq => return non_eq,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

/// The ambient space: a dimension and the fixed origin `x0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricContext {
    origin: Point,
}

impl MetricContext {
    pub fn new(origin: Point) -> Self {
        Self { origin }
    }

    /// Context for `R^dim` with the origin at the zero vector.
    pub fn euclidean(dim: usize) -> Result<Self> {
        Ok(Self::new(Point::new(vec![0.0; dim.max(1)])?))
    }

    pub fn dimension(&self) -> usize {
        self.origin.dimension()
    }

    pub fn origin(&self) -> &Point {
        &self.origin
    }

    /// Distance from the fixed origin to `p`.
    pub fn origin_distance(&self, p: &Point) -> Result<f64> {
        self.origin.distance_to(p)
    }

    pub(crate) fn origin_distance_unchecked(&self, p: &Point) -> f64 {
        euclidean(&self.origin, p)
    }
}

/// Euclidean distance between two points of the same dimension.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    p.distance_to(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn distance_on_the_line() {
        assert_eq!(distance(&pt(&[0.0]), &pt(&[0.5])).unwrap(), 0.5);
    }

    #[test]
    fn distance_identity() {
        let p = pt(&[1.25, -3.5]);
        assert_eq!(distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn distance_three_four_five() {
        assert_eq!(distance(&pt(&[3.0, 4.0]), &pt(&[0.0, 0.0])).unwrap(), 5.0);
    }

    #[test]
    fn origin_distance_matches_distance() {
        let ctx = MetricContext::new(pt(&[0.0]));
        assert_eq!(ctx.origin_distance(&pt(&[0.5])).unwrap(), 0.5);
        assert_eq!(ctx.origin_distance(ctx.origin()).unwrap(), 0.0);

        let ctx2 = MetricContext::new(pt(&[1.0, 1.0]));
        assert_eq!(ctx2.origin_distance(&pt(&[4.0, 5.0])).unwrap(), 5.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            distance(&pt(&[0.0]), &pt(&[0.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_coordinates_rejected() {
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY, 0.0]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn negative_zero_is_normalised() {
        assert_eq!(pt(&[-0.0]), pt(&[0.0]));
    }

    fn arb_point(dim: usize) -> impl Strategy<Value = Point> {
        prop::collection::vec(-1.0e3f64..1.0e3, dim).prop_map(|c| Point::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn triangle_inequality(p in arb_point(3), q in arb_point(3), s in arb_point(3)) {
            let ps = distance(&p, &s).unwrap();
            let pq = distance(&p, &q).unwrap();
            let qs = distance(&q, &s).unwrap();
            prop_assert!(ps <= pq + qs + 1e-12);
        }

        #[test]
        fn symmetry_is_exact(p in arb_point(2), q in arb_point(2)) {
            prop_assert_eq!(distance(&p, &q).unwrap(), distance(&q, &p).unwrap());
        }

        #[test]
        fn zero_iff_equal(p in arb_point(2), q in arb_point(2)) {
            let d = distance(&p, &q).unwrap();
            prop_assert_eq!(d == 0.0, p == q);
        }
    }
}
