//! Counting measures: finite atomic measures with integer multiplicities.
//!
//! A [`CountingMeasure`] is a finite list of `(point, multiplicity)` atoms
//! in a shared [`MetricContext`]. Atoms at identical points are coalesced
//! at construction and kept in a canonical order, so structural equality is
//! measure equality.
//!
//! The ball restriction `μ^(r)` keeps the atoms at origin distance
//! *strictly* below `r` (open ball); an atom exactly on the sphere of
//! radius `r` belongs to the boundary, never to the restriction.

use std::collections::BTreeMap;

use crate::space::{euclidean, MetricContext, Point};
use crate::{Error, Result};

/// A finite integer-valued measure given by coalesced atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingMeasure {
    ctx: MetricContext,
    atoms: Vec<(Point, u64)>,
}

impl CountingMeasure {
    /// Builds a measure from raw atoms, validating dimensions and
    /// multiplicities and coalescing duplicate points.
    pub fn new(ctx: MetricContext, atoms: Vec<(Point, u64)>) -> Result<Self> {
        let mut coalesced: BTreeMap<Point, u64> = BTreeMap::new();
        for (index, (point, multiplicity)) in atoms.into_iter().enumerate() {
            if point.dimension() != ctx.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: ctx.dimension(),
                    found: point.dimension(),
                });
            }
            if multiplicity == 0 {
                return Err(Error::ZeroMultiplicity { index });
            }
            *coalesced.entry(point).or_insert(0) += multiplicity;
        }
        Ok(Self {
            ctx,
            atoms: coalesced.into_iter().collect(),
        })
    }

    /// The zero measure.
    pub fn empty(ctx: MetricContext) -> Self {
        Self { ctx, atoms: Vec::new() }
    }

    /// A single Dirac atom `m·δ_p`.
    pub fn dirac(ctx: MetricContext, point: Point, multiplicity: u64) -> Result<Self> {
        Self::new(ctx, vec![(point, multiplicity)])
    }

    pub fn ctx(&self) -> &MetricContext {
        &self.ctx
    }

    pub fn atoms(&self) -> &[(Point, u64)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass `μ(X)`.
    pub fn total_mass(&self) -> u64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }

    /// Origin distance of every atom, in atom order.
    pub(crate) fn origin_distances(&self) -> Vec<f64> {
        self.atoms
            .iter()
            .map(|(p, _)| self.ctx.origin_distance_unchecked(p))
            .collect()
    }

    /// Restriction `μ^(r)` to the open ball `B_r` around the origin.
    pub fn restriction(&self, r: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::NegativeRadius { value: r });
        }
        let atoms = self
            .atoms
            .iter()
            .filter(|(p, _)| self.ctx.origin_distance_unchecked(p) < r)
            .cloned()
            .collect();
        Ok(Self { ctx: self.ctx.clone(), atoms })
    }

    /// Mass of the open ball, `μ(B_r)`.
    pub fn ball_mass(&self, r: f64) -> Result<u64> {
        if !(r >= 0.0) {
            return Err(Error::NegativeRadius { value: r });
        }
        Ok(self
            .atoms
            .iter()
            .filter(|(p, _)| self.ctx.origin_distance_unchecked(p) < r)
            .map(|(_, m)| m)
            .sum())
    }

    /// Mass of the sphere of radius `r`, `μ(∂B_r)`.
    pub fn boundary_mass(&self, r: f64) -> Result<u64> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius { value: r });
        }
        Ok(self
            .atoms
            .iter()
            .filter(|(p, _)| self.ctx.origin_distance_unchecked(p) == r)
            .map(|(_, m)| m)
            .sum())
    }

    /// Integral `Σ_i m_i · f(p_i)`, in canonical atom order.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Point) -> f64,
    {
        let mut total = 0.0;
        for (index, (point, multiplicity)) in self.atoms.iter().enumerate() {
            let value = f(point);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { index });
            }
            total += *multiplicity as f64 * value;
        }
        Ok(total)
    }

    /// Mass of the atoms lying in `set`.
    pub fn set_mass(&self, set: &PointSet) -> u64 {
        self.atoms
            .iter()
            .filter(|(p, _)| set.contains(p))
            .map(|(_, m)| m)
            .sum()
    }

    /// Mass of the atoms on the boundary of `set` (see
    /// [`PointSet::boundary_contains`] for the convention).
    pub fn boundary_set_mass(&self, set: &PointSet) -> u64 {
        self.atoms
            .iter()
            .filter(|(p, _)| set.boundary_contains(p))
            .map(|(_, m)| m)
            .sum()
    }
}

/// A decidable region of the space: closed balls, closed boxes, and finite
/// unions/differences of those.
#[derive(Debug, Clone)]
pub enum PointSet {
    Empty,
    WholeSpace,
    /// Closed ball `{x : d(x, center) ≤ radius}`.
    ClosedBall { center: Point, radius: f64 },
    /// Closed axis-aligned box `{x : lo_i ≤ x_i ≤ hi_i}`.
    Box { lo: Point, hi: Point },
    Union(Box<PointSet>, Box<PointSet>),
    Difference(Box<PointSet>, Box<PointSet>),
}

impl PointSet {
    pub fn closed_ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::NegativeRadius { value: radius });
        }
        Ok(PointSet::ClosedBall { center, radius })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            PointSet::Empty => false,
            PointSet::WholeSpace => true,
            PointSet::ClosedBall { center, radius } => euclidean(center, p) <= *radius,
            PointSet::Box { lo, hi } => lo
                .coords()
                .iter()
                .zip(hi.coords())
                .zip(p.coords())
                .all(|((l, h), x)| l <= x && x <= h),
            PointSet::Union(a, b) => a.contains(p) || b.contains(p),
            PointSet::Difference(a, b) => a.contains(p) && !b.contains(p),
        }
    }

    /// Conservative boundary membership: spheres for balls, faces for
    /// boxes, and the union of component boundaries for composites. This
    /// is a superset of the topological boundary, which is the safe
    /// direction for "boundary mass zero" requirements.
    pub fn boundary_contains(&self, p: &Point) -> bool {
        match self {
            PointSet::Empty | PointSet::WholeSpace => false,
            PointSet::ClosedBall { center, radius } => euclidean(center, p) == *radius,
            PointSet::Box { lo, hi } => {
                self.contains(p)
                    && lo
                        .coords()
                        .iter()
                        .zip(hi.coords())
                        .zip(p.coords())
                        .any(|((l, h), x)| x == l || x == h)
            }
            PointSet::Union(a, b) | PointSet::Difference(a, b) => {
                a.boundary_contains(p) || b.boundary_contains(p)
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            PointSet::Empty | PointSet::ClosedBall { .. } | PointSet::Box { .. } => true,
            PointSet::WholeSpace => false,
            PointSet::Union(a, b) => a.is_bounded() && b.is_bounded(),
            // A difference is contained in its left operand.
            PointSet::Difference(a, _) => a.is_bounded(),
        }
    }
}
